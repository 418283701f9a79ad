#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rtbp/asymptotics.hpp"
#include "rtbp/homoclinic_frame.hpp"
#include "rtbp/melnikov.hpp"

using namespace rtbp;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("R1", "[melnikov]") {
    SECTION("perfect square when cos(theta0 + psi) = 1") {
        const double a = homoclinic_a(0.0);
        CHECK_THAT(R1(0.0, 0.0, 0.4), WithinAbs(std::fabs(1.0 - 0.16 * a * a), 1e-15));
    }
    SECTION("eps = 0") { CHECK(R1(0.7, 1.1, 0.0) == 1.0); }
    SECTION("tau = 0, theta0 = pi/2") {
        CHECK_THAT(R1(0.0, M_PI / 2, 0.4), WithinAbs(std::sqrt(1.1024), 1e-15));
    }
}

TEST_CASE("D0_direct", "[melnikov]") {
    CHECK_THAT(D0_direct(0.0, 0.45), WithinAbs(0.0, 1e-12));
    CHECK_THAT(D0_direct(M_PI, 0.45), WithinAbs(0.0, 1e-12));
    const double d = D0_direct(M_PI / 2, 0.45);
    const FourierTable t = fourier_series_D0(0.45);
    CHECK_THAT(d, WithinRel(t.evaluate(M_PI / 2), 1e-4));
    SECTION("odd in theta0") {
        CHECK_THAT(D0_direct(-0.9, 0.45), WithinRel(-D0_direct(0.9, 0.45), 1e-12));
    }
    SECTION("grid evaluation agrees with single evaluations") {
        const auto g = D0_direct_grid({0.3, 1.2, 2.5}, 0.4);
        CHECK_THAT(g[0], WithinRel(D0_direct(0.3, 0.4), 1e-13));
        CHECK_THAT(g[1], WithinRel(D0_direct(1.2, 0.4), 1e-13));
        CHECK_THAT(g[2], WithinRel(D0_direct(2.5, 0.4), 1e-13));
    }
    SECTION("the two forms differ only by the sign of the bQ part") {
        const D0Parts p = D0_parts(0.8, 0.45);
        const double e15 = std::pow(0.45, 1.5), e35 = std::pow(0.45, 3.5);
        CHECK_THAT(D0_from_parts(p, 0.45, MelnikovForm::printed),
                   WithinRel(-std::sqrt(2.0) / (2.0 * e15) * p.I + p.J / (2.0 * e35), 1e-14));
        CHECK_THAT(D0_from_parts(p, 0.45, MelnikovForm::corrected),
                   WithinRel(std::sqrt(2.0) / (4.0 * e15) * p.I5 - p.J / (2.0 * e35), 1e-14));
    }
}

TEST_CASE("series coefficients", "[melnikov]") {
    SECTION("printed set reproduces the displayed rationals") {
        const SeriesCoefficients c = series_coefficients(0, 1, 0, CoefficientSet::printed);
        REQUIRE(c.C2);
        REQUIRE(c.calC);
        CHECK(*c.C2 == Rational(99, 16));
        CHECK(*c.calC == Rational(-123, 8));
        CHECK_FALSE(c.E1.has_value());
    }
    SECTION("derived set") {
        const SeriesCoefficients c = series_coefficients(0, 1, 0, CoefficientSet::derived);
        CHECK(*c.C2 == Rational(9, 16));
        CHECK(*c.calC == Rational(3, 2));
    }
    SECTION("generalized binomials") {
        CHECK(binom_rational(Rational(-3, 2), -1) == 0);
        CHECK(binom_rational(Rational(-3, 2), 0) == 1);
        CHECK(binom_rational(Rational(-3, 2), 2) == Rational(15, 8));
        CHECK(binom_rational(Rational(-5, 2), 3) == Rational(-105, 16));
    }
    SECTION("index sets") {
        CHECK(in_delta(ElementaryKind::I1_odd, 1, 0));
        CHECK_FALSE(in_delta(ElementaryKind::I1_odd, 0, 0));
        CHECK_FALSE(in_delta(ElementaryKind::I1_even, 3, 0));
        CHECK_FALSE(in_delta(ElementaryKind::J_even, 1, 2));
        CHECK_THROWS_AS(elementary_integral(ElementaryKind::I1_even, 1, 2, 0.4), IndexError);
        CHECK_THROWS_AS(series_coefficients(2, 1, 0), IndexError);
    }
}

TEST_CASE("series of R1^-3", "[melnikov]") {
    SECTION("eps = 0") { CHECK(r1_inv_cubed_series(0.4, 0.2, 0.0, 10) == 1.0); }
    SECTION("theta0 + psi = pi/2 at tau = 0") {
        const double r = R1(0.0, M_PI / 2, 0.4);
        CHECK_THAT(r1_inv_cubed_series(0.0, M_PI / 2, 0.4, 20), WithinAbs(1.0 / (r * r * r), 1e-10));
    }
    SECTION("generic point") {
        const double r = R1(0.5, 0.3, 0.4);
        CHECK_THAT(r1_inv_cubed_series(0.5, 0.3, 0.4, 25), WithinAbs(1.0 / (r * r * r), 1e-10));
    }
    SECTION("printed set does not reproduce R1^-3") {
        const double r = R1(0.5, 0.3, 0.4);
        CHECK(std::fabs(r1_inv_cubed_series(0.5, 0.3, 0.4, 25, CoefficientSet::printed) - 1.0 / (r * r * r)) > 1e-4);
    }
}

TEST_CASE("Fourier table of D0", "[melnikov]") {
    const double eps = 0.45;
    const FourierTable t = fourier_series_D0(eps);
    auto D0 = [&](double th) { return D0_direct(th, eps); };
    SECTION("leading coefficient against projection of the direct value") {
        CHECK_THAT(t.odd[0], WithinRel(fourier_project(D0, 0, Parity::odd, 64), 1e-3));
    }
    SECTION("projection matches the series harmonic by harmonic") {
        const auto samples = sample_periodic(D0, 64);
        for (int m = 0; m <= 3; ++m) {
            CHECK_THAT(sine_coefficient(samples, 2 * m + 1), WithinRel(t.odd[m], 1e-5));
            if (m >= 1) CHECK_THAT(sine_coefficient(samples, 2 * m), WithinRel(t.even[m - 1], 1e-5));
        }
    }
    SECTION("no cosine content") {
        const auto samples = sample_periodic(D0, 64);
        for (int k = 0; k <= 4; ++k) CHECK_THAT(cosine_coefficient(samples, k), WithinAbs(0.0, 1e-12));
    }
    SECTION("tail estimate is small") { CHECK(t.tail_estimate() < 1e-8); }
}

TEST_CASE("higher harmonics are exponentially suppressed", "[melnikov]") {
    // |odd[1] / odd[0]| e^{2/(3 eps^3)} grows only like a power of 1/eps
    std::vector<double> le, lr;
    for (double eps : {0.4, 0.45, 0.5}) {
        const FourierTable t = fourier_series_D0(eps);
        const double r = std::fabs(t.odd[1] / t.odd[0]) * std::exp(2.0 / (3.0 * eps * eps * eps));
        le.push_back(std::log(eps));
        lr.push_back(std::log(r));
        CHECK(r < std::pow(eps, -8.0));
    }
    const double slope = (lr[2] - lr[0]) / (le[2] - le[0]);
    CHECK(slope < 0.0);
    CHECK(slope > -8.0);
}

TEST_CASE("harmonic q decays like e^{-q/(3 eps^3)}", "[melnikov]") {
    // fit log|c| = A + B log eps - R / eps^3 through three eps values and compare R with q/3
    const std::vector<double> E = {0.3, 0.35, 0.4};
    std::vector<FourierTable> T;
    for (double e : E) T.push_back(fourier_series_D0(e));
    auto rate = [&](auto coef) {
        double y[3], l[3], w[3];
        for (int i = 0; i < 3; ++i) {
            y[i] = std::log(std::fabs(coef(T[i])));
            l[i] = std::log(E[i]);
            w[i] = 1.0 / (E[i] * E[i] * E[i]);
        }
        const double a1 = l[1] - l[0], b1 = w[1] - w[0], a2 = l[2] - l[1], b2 = w[2] - w[1];
        const double d1 = y[1] - y[0], d2 = y[2] - y[1];
        return (a1 * d2 - a2 * d1) / (a2 * b1 - a1 * b2);
    };
    CHECK_THAT(rate([](const FourierTable& t) { return t.odd[0]; }), WithinRel(1.0 / 3.0, 0.02));
    CHECK_THAT(rate([](const FourierTable& t) { return t.odd[1]; }), WithinRel(1.0, 0.02));
    CHECK_THAT(rate([](const FourierTable& t) { return t.even[0]; }), WithinRel(2.0 / 3.0, 0.02));
    CHECK_THAT(rate([](const FourierTable& t) { return t.even[1]; }), WithinRel(4.0 / 3.0, 0.02));
}

TEST_CASE("elementary integrals", "[melnikov]") {
    SECTION("parity selection") {
        // odd tau-parity pieces vanish: Im of a^p e^{i psi}, Re of a^p b e^{i psi}
        const auto v = tau_integrals({3, 5}, 1, 0, 0.45);
        for (const auto& z : v) CHECK(std::fabs(z.imag()) <= 1e-12 * std::fabs(z.real()) + 1e-15);
        const auto w = tau_integrals({3}, 1, 1, 0.45);
        CHECK(std::fabs(w[0].real()) <= 1e-12 * std::fabs(w[0].imag()) + 1e-15);
    }
    SECTION("J_{1,0,odd} tracks its leading term within 30%") {
        const double eps = 0.45;
        const double lead = (2.0 / 15.0) * std::sqrt(M_PI / 2) * std::pow(eps, -1.5) * std::exp(-1.0 / (3.0 * eps * eps * eps));
        CHECK_THAT(elementary_integral(ElementaryKind::J_odd, 1, 0, eps), WithinRel(lead, 0.3));
    }
}

TEST_CASE("I2_{1,0,odd} tracks its leading term within 30% at eps = 0.45", "[melnikov][!mayfail]") {
    // measured ratio 3.4 at eps = 0.45; the correction is not small at this eps
    const double eps = 0.45;
    const double lead = (std::pow(std::sqrt(2.0), 3) / 15.0) * std::sqrt(M_PI / 2) * std::pow(eps, -3.5) *
                        std::exp(-1.0 / (3.0 * eps * eps * eps));
    CHECK_THAT(elementary_integral(ElementaryKind::I2_odd, 1, 0, eps), WithinRel(lead, 0.3));
}
