#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rtbp/core_model.hpp"
#include "rtbp/errors.hpp"
#include "rtbp/homoclinic_frame.hpp"
#include "rtbp/numerics.hpp"

using namespace rtbp;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

OdeState<4> phys_field(const ParamSet& p, double t, const OdeState<4>& y) {
    const PhysicalState d = rtbp_rhs({y[0], y[1], y[2], y[3]}, p, t);
    return {d.r2, d.r2dot, d.th2, d.th2dot};
}

}  // namespace

TEST_CASE("rtbp_rhs reduces to Kepler when rho = 0", "[core_model]") {
    const ParamSet p{0.0, 0.3, 0.0};
    const PhysicalState s{3.0, 0.2, 0.4, 0.15};
    const PhysicalState d = rtbp_rhs(s, p, 1.3);
    CHECK(d.r2 == s.r2dot);
    CHECK(d.th2 == s.th2dot);
    CHECK_THAT(d.r2dot, WithinAbs(s.r2 * s.th2dot * s.th2dot - 1.0 / (s.r2 * s.r2), 1e-15));
    CHECK_THAT(d.th2dot, WithinAbs(-2.0 * s.r2dot * s.th2dot / s.r2, 1e-15));
}

TEST_CASE("circular Kepler orbit has no radial acceleration", "[core_model]") {
    const ParamSet p{0.0, 0.3, 0.0};
    const double r = 2.0;
    const PhysicalState s{r, 0.0, 0.0, std::sqrt(1.0 / (r * r * r))};
    CHECK_THAT(rtbp_rhs(s, p, 0.0).r2dot, WithinAbs(0.0, 1e-15));
}

TEST_CASE("rtbp_rhs agrees with a finite difference of the integrated flow", "[core_model]") {
    const ParamSet p{0.1, 0.3, 0.0};
    const OdeState<4> y0{5.0, 0.1, 1.0, 0.05};  // theta2 - t = 1 at t = 0
    OdeSpec spec;
    spec.rel_tol = 1e-13;
    spec.abs_tol = 1e-14;
    auto f = [&](double t, const OdeState<4>& y) { return phys_field(p, t, y); };
    const double h = 1e-3;
    const auto fwd = integrate_ode<4>(f, y0, 0.0, h, spec).final_state();
    const auto bwd = integrate_ode<4>(f, y0, 0.0, -h, spec).final_state();
    const auto d = phys_field(p, 0.0, y0);
    for (int i = 0; i < 4; ++i) CHECK_THAT((fwd[i] - bwd[i]) / (2.0 * h), WithinAbs(d[i], 1e-6));
}

TEST_CASE("Jacobi constant is conserved along a trajectory", "[core_model]") {
    const ParamSet p{0.2, 0.35, 0.0};
    OdeSpec spec;
    spec.rel_tol = 1e-12;
    spec.abs_tol = 1e-12;
    const PhysicalState s0{3.0, 0.05, 0.3, 1.45};
    const double J0 = jacobi_constant(s0, p, 0.0);
    double drift = 0.0;
    integrate_ode<4>([&](double t, const OdeState<4>& y) { return phys_field(p, t, y); },
                     {s0.r2, s0.r2dot, s0.th2, s0.th2dot}, 0.0, 10.0, spec,
                     [&](double t, const OdeState<4>& y) {
                         drift = std::max(drift, std::fabs(jacobi_constant({y[0], y[1], y[2], y[3]}, p, t) - J0));
                     });
    CHECK(drift <= 1e-9);
}

TEST_CASE("Jacobi constant at large r2", "[core_model]") {
    const ParamSet p{0.0, 0.3, 0.0};
    const double r = 1e3;
    // co-rotating (theta2' = 1): the centrifugal term -r^2/2 dominates
    CHECK_THAT(jacobi_constant({r, 0.0, 0.0, 1.0}, p, 0.0), WithinRel(-0.5 * r * r, 1e-8));
    // theta2' = 0 cancels it instead: J = r'^2/2 - 1/r
    CHECK_THAT(jacobi_constant({r, 0.3, 0.0, 0.0}, p, 0.0), WithinAbs(0.5 * 0.09 - 1.0 / r, 1e-15 * r * r));
}

TEST_CASE("Jacobi constant term by term", "[core_model]") {
    const ParamSet p{0.3, 0.3, 0.0};
    const PhysicalState s{2.5, -0.4, 2.1, 0.7};
    const double t = 0.9;
    const double m1 = 0.7, m2 = 0.3;
    // primaries at distance m2 and m1 from the origin on opposite sides, rotating with t
    const double x = s.r2 * std::cos(s.th2), y = s.r2 * std::sin(s.th2);
    const double x1 = -m2 * std::cos(t), y1 = -m2 * std::sin(t);
    const double x2 = m1 * std::cos(t), y2 = m1 * std::sin(t);
    const double r13 = std::hypot(x - x1, y - y1), r23 = std::hypot(x - x2, y - y2);
    const double J = 0.5 * (s.r2dot * s.r2dot + s.r2 * s.r2 * (s.th2dot - 1.0) * (s.th2dot - 1.0)) -
                     0.5 * s.r2 * s.r2 - m1 / r13 - m2 / r23;
    CHECK_THAT(jacobi_constant(s, p, t), WithinAbs(J, 1e-14));
}

TEST_CASE("collision raises CollisionError", "[core_model]") {
    const ParamSet p{0.3, 0.3, 0.0};
    // body on top of the heavy primary at (m2... ) -> r2 = m2, angle t + pi
    const PhysicalState s{0.3, 0.0, M_PI, 0.0};
    CHECK_THROWS_AS(rtbp_rhs(s, p, 0.0), CollisionError);
}

TEST_CASE("McGehee and Duffing maps round-trip", "[core_model]") {
    const PhysicalState s{7.5, 0.12, 1.1, 0.02};
    const double t = 0.4;
    const McGeheeState m = mcgehee_from_physical(s, t);
    const PhysicalState back = physical_from_mcgehee(m, t);
    CHECK_THAT(back.r2, WithinRel(s.r2, 1e-14));
    CHECK_THAT(back.r2dot, WithinRel(s.r2dot, 1e-14));
    CHECK_THAT(back.th2, WithinRel(s.th2, 1e-14));
    CHECK_THAT(back.th2dot, WithinRel(s.th2dot, 1e-14));
    const DuffingState d = duffing_from_mcgehee(m);
    const McGeheeState m2 = mcgehee_from_duffing(d, m.u);
    CHECK_THAT(m2.v, WithinRel(m.v, 1e-14));
    CHECK_THAT(m2.w, WithinRel(m.w, 1e-14));
    CHECK_THAT(u_from_U(U_from_u(m.u, d.X, 0.3), d.X, 0.3), WithinRel(m.u, 1e-14));
}

TEST_CASE("solve_U", "[core_model]") {
    SECTION("eps = 0 gives U = 1") {
        CHECK(solve_U(1.2, 0.3, 0.5, {0.2, 0.0, 0.0}) == 1.0);
    }
    SECTION("agrees with bisection on the Jacobi relation") {
        const ParamSet p{0.2, 0.3, 0.0};
        const double X = std::sqrt(2.0), Y = 0.0, th = 0.0;
        auto g = [&](double U) { return U - jacobi_U_map(U, X, Y, th, p); };
        double lo = 0.5, hi = 1.5;
        REQUIRE(g(lo) < 0.0);
        REQUIRE(g(hi) > 0.0);
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (g(mid) < 0.0 ? lo : hi) = mid;
        }
        const double U = solve_U(X, Y, th, p);
        CHECK_THAT(U, WithinAbs(0.5 * (lo + hi), 1e-12));
        CHECK(std::fabs(g(U)) <= 1e-14);
    }
    SECTION("U - 1 = O(eps^7) on the homoclinic") {
        // U - 1 is of order eps^7 on the homoclinic since b^2 + a^4/2 - a^2 = 0
        std::vector<double> worst;
        for (double eps : {0.1, 0.2, 0.3, 0.4, 0.5}) {
            double w = 0.0;
            for (double tau : {0.0, 0.4, 1.0, 2.0, 3.5}) {
                const FrameSample f = eval_frame(tau, eps);
                const double U = solve_U(f.a, f.b, 0.8 + f.psi, {0.2, eps, 0.0});
                w = std::max(w, std::fabs(U - 1.0) / std::pow(eps, 7));
            }
            worst.push_back(w);
        }
        for (double w : worst) CHECK(w < 2.0);
    }
}

TEST_CASE("forces_FG", "[core_model]") {
    SECTION("rho = 0 switches the forcing off") {
        const Forces f = forces_FG(1.3, 0.2, 0.7, 1.0, {0.0, 0.3, 0.0});
        CHECK_THAT(f.F, WithinAbs(0.0, 1e-15));
        CHECK(f.G == 0.0);
    }
    SECTION("theta = 0 gives G = 0") {
        CHECK(forces_FG(1.3, 0.2, 0.0, 1.0, {0.3, 0.3, 0.0}).G == 0.0);
    }
    SECTION("parity in theta") {
        const ParamSet p{0.3, 0.4, 0.0};
        const Forces a = forces_FG(1.1, 0.0, 0.9, 1.0, p), b = forces_FG(1.1, 0.0, -0.9, 1.0, p);
        CHECK(a.F == b.F);
        CHECK(a.G == -b.G);
    }
    SECTION("leading quadrupole term of F") {
        const ParamSet p{0.3, 0.3, 0.0};
        const double X = std::sqrt(2.0), th = 1.0;
        const double U = solve_U(X, 0.0, th, p);
        const Forces f = forces_FG(X, 0.0, th, U, p);
        const double lead = 1.5 * 0.3 * 0.7 * (1.0 - 3.0 * std::cos(th) * std::cos(th)) * std::pow(0.3, 4) *
                            std::pow(X * U, 4);
        // next order is eps^6
        CHECK(std::fabs(f.F - lead) <= 2.0 * std::pow(0.3, 6) * std::pow(X, 6));
    }
}

TEST_CASE("duffing_rhs", "[core_model]") {
    SECTION("rho = 0 is the Duffing field") {
        const ParamSet p{0.0, 0.3, 0.0};
        const DuffingState d = duffing_rhs({0.4, 1.1, -0.3}, p);
        CHECK_THAT(d.X, WithinAbs(-0.3, 1e-13));
        CHECK_THAT(d.Y, WithinAbs(1.1 - 1.1 * 1.1 * 1.1, 1e-13));
    }
    SECTION("at (sqrt2, 0)") {
        const ParamSet p{0.2, 0.3, 0.0};
        const double X = std::sqrt(2.0);
        const DuffingState d = duffing_rhs({0.0, X, 0.0}, p);
        CHECK_THAT(d.X, WithinAbs(0.0, 1e-15));  // G = 0 at theta = 0
        const Forces f = forces_FG(X, 0.0, 0.0, solve_U(X, 0.0, 0.0, p), p);
        CHECK_THAT(d.Y, WithinAbs(X - X * X * X - X * f.F, 1e-13));
        // the correction is O(rho eps^4): quadrupole term 3 rho (1 - rho) eps^4 X^5 plus O(eps^2 X^2) relative
        const double quad = 3.0 * 0.2 * 0.8 * std::pow(0.3, 4) * std::pow(X, 5);
        CHECK(std::fabs(d.Y + X) <= quad * (1.0 + 2.0 * 0.09 * X * X));
    }
    SECTION("flow at rho = 0 reproduces the homoclinic orbit") {
        const ParamSet p{0.0, 0.4, 0.0};
        OdeSpec spec;
        spec.rel_tol = 1e-12;
        spec.abs_tol = 1e-13;
        auto f = [&](double, const OdeState<3>& y) {
            const DuffingState d = duffing_rhs({y[0], y[1], y[2]}, p);
            return OdeState<3>{d.theta, d.X, d.Y};
        };
        const auto tr = integrate_ode<3>(f, {0.0, std::sqrt(2.0), 0.0}, 0.0, 5.0, spec);
        for (double tau : {1.0, 2.5, 5.0}) {
            const auto y = tr(tau);
            const FrameSample fr = eval_frame(tau, 0.4);
            CHECK_THAT(y[1], WithinAbs(fr.a, 1e-8));
            CHECK_THAT(y[2], WithinAbs(fr.b, 1e-8));
            CHECK_THAT(y[0], WithinRel(fr.psi, 1e-8));
        }
    }
    SECTION("X below the floor") {
        CHECK_THROWS_AS(duffing_rhs({0.0, 1e-8, 0.0}, {0.1, 0.3, 0.0}), DomainError);
    }
}

TEST_CASE("spq_exact", "[core_model]") {
    SECTION("vanishes on the homoclinic at rho = 0") {
        const SPQ s = spq_exact(0.0, 0.0, 0.0, 0.7, {0.0, 0.3, 0.4});
        CHECK_THAT(s.P, WithinAbs(0.0, 1e-15));
        CHECK_THAT(s.Q, WithinAbs(0.0, 1e-14));
        CHECK_THAT(s.S, WithinAbs(0.0, 1e-12));
    }
    SECTION("P = 0 at rho = 0 off the homoclinic") {
        CHECK_THAT(spq_exact(0.01, -0.02, 0.1, 1.0, {0.0, 0.3, 0.5}).P, WithinAbs(0.0, 1e-15));
    }
    SECTION("matches the Duffing field minus the homoclinic linearisation") {
        const ParamSet p{0.2, 0.3, 0.5};
        const double x = 0.01, y = -0.02, Th = 0.1, tau = 1.0;
        const FrameSample f = eval_frame(tau, p.eps);
        const double X = x + f.a, Y = y + f.b, th = Th + p.theta0 + f.psi;
        const DuffingState d = duffing_rhs({th, X, Y}, p);
        const double U = solve_U(X, Y, th, p);
        const double P = d.X - Y;
        const double Q = d.Y - (1.0 - 3.0 * f.a * f.a) * x - f.bprime;
        const double psi_rate = homoclinic_psi_rate(tau, p.eps);
        const double e3 = p.eps * p.eps * p.eps;
        const double S = (d.theta - psi_rate) * e3 * std::pow(U * X * f.a, 3) / std::sqrt(2.0);
        const SPQ s = spq_exact(x, y, Th, tau, p);
        CHECK_THAT(s.P, WithinAbs(P, 1e-13));
        CHECK_THAT(s.Q, WithinAbs(Q, 1e-13));
        CHECK_THAT(s.S, WithinAbs(S, 1e-13));
    }
}

TEST_CASE("parameter validation", "[core_model]") {
    CHECK_THROWS_AS(validate_params({0.1, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(validate_params({0.1, 0.7, 0.0}), DomainError);
    CHECK_THROWS_AS(validate_params({1.2, 0.3, 0.0}), DomainError);
    CHECK_NOTHROW(validate_params({0.1, 0.3, 12.0}));
}
