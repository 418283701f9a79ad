#include "rtbp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rtbp/asymptotics.hpp"
#include "rtbp/core_model.hpp"
#include "rtbp/errors.hpp"
#include "rtbp/homoclinic_frame.hpp"
#include "rtbp/manifold_solver.hpp"
#include "rtbp/melnikov.hpp"
#include "rtbp/numerics.hpp"

namespace rtbp {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

// Pinned tolerances.
constexpr double kIdentityTol = 1e-11;
constexpr int kIdentitySamples = 200;
constexpr double kJacobiDrift = 1e-8;
constexpr double kJacobiIntegratorTol = 1e-11;
constexpr double kJacobiSpan = 50.0;
constexpr double kRepresentationTol = 1e-8;
constexpr double kWatsonSpread = 0.15;
constexpr double kDualPathRel = 1e-4;
constexpr double kTrendResidual = 0.10;
constexpr double kTrendConstant = 0.25;
constexpr double kRichardsonFactor = 2.0;
constexpr double kRootTol = 1e-8;
constexpr double kSlopeFraction = 0.5;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// e^{-1/(3 eps^3)} eps^-5 sqrt(pi/2): the scale of the leading splitting term.
double leading_scale(double eps) {
    return std::sqrt(M_PI / 2.0) * std::pow(eps, -5) * std::exp(-1.0 / (3.0 * eps * eps * eps));
}

}  // namespace

CheckResult check_identities() {
    CheckResult r;
    r.id = 1;
    r.key = "identities";
    r.title = "Homoclinic frame identities and the cubic inverse";
    r.rule = "every residual <= 1e-11 on 200 sample points";
    const double eps = 0.4;
    std::vector<double> taus;
    for (int j = 0; j < kIdentitySamples; ++j) taus.push_back(-8.0 + 16.0 * (j + 0.5) / kIdentitySamples);

    double r_bp = 0, r_bpp = 0, r_b2 = 0, r_h = 0, r_par = 0, r_cubic = 0;
    for (double t : taus) {
        const FrameSample f = eval_frame(t, eps);
        const double sech = 1.0 / std::cosh(t), th = std::tanh(t);
        // derivatives of b = -sqrt2 sech tanh written independently of eval_frame
        const double bp = kSqrt2 * sech - 2.0 * kSqrt2 * sech * sech * sech;
        const double bpp = -kSqrt2 * sech * th + 6.0 * kSqrt2 * sech * sech * sech * th;
        r_bp = std::max({r_bp, std::fabs(bp - (f.a - f.a * f.a * f.a)), std::fabs(bp - f.bprime)});
        r_bpp = std::max(r_bpp, std::fabs(bpp - (1.0 - 3.0 * f.a * f.a) * f.b));
        r_b2 = std::max(r_b2, std::fabs(f.b * f.b - (f.a * f.a - 0.5 * f.a * f.a * f.a * f.a)));
        // h = 3 (sinh 2t + 2t) / (4 cosh^2 t), differentiated by the quotient rule
        const double c2 = std::cosh(t) * std::cosh(t);
        const double num = std::sinh(2.0 * t) + 2.0 * t;
        const double hp = 3.0 * (2.0 * std::cosh(2.0 * t) + 2.0) / (4.0 * c2) -
                          3.0 * num * 2.0 * th / (4.0 * c2);
        r_h = std::max(r_h, std::fabs(hp - (2.0 * f.b / f.a) * f.h - 3.0));

        const FrameSample g = eval_frame(-t, eps);
        auto rel = [](double u, double v) { return std::fabs(u - v) / std::max(1.0, std::fabs(v)); };
        r_par = std::max({r_par, rel(g.a, f.a), rel(g.b, -f.b), rel(g.bprime, f.bprime),
                          rel(g.psi, -f.psi), rel(g.h, -f.h), rel(g.H, f.H), rel(g.Htilde, -f.Htilde)});
    }
    for (int j = 0; j < kIdentitySamples; ++j) {
        const double z = -500.0 + 1000.0 * (j + 0.5) / kIdentitySamples;
        const double y = y_of_z(z);
        r_cubic = std::max(r_cubic, std::fabs(y * y * y + 12.0 * y - 2.0 * z) / std::max(1.0, std::fabs(2.0 * z)));
    }
    r.metrics = {{"b' = a - a^3", r_bp},
                 {"b'' = (1 - 3a^2) b", r_bpp},
                 {"b^2 = a^2 - a^4/2", r_b2},
                 {"h' - (2b/a) h - 3 = 0", r_h},
                 {"parity table (a, b', H even; b, psi, h, Htilde odd)", r_par},
                 {"2z = y(z)^3 + 12 y(z)", r_cubic}};
    r.passed = true;
    for (const auto& m : r.metrics) r.passed = r.passed && m.value <= kIdentityTol;
    return r;
}

CheckResult check_jacobi() {
    CheckResult r;
    r.id = 2;
    r.key = "jacobi";
    r.title = "Jacobi constant conservation of the physical equations";
    r.rule = "max drift <= 1e-8 over dt = 50 at integrator tolerance 1e-11, 5 seeded initial conditions";
    const ParamSet p{0.2, 0.35, 0.0};
    const double J = -1.0 / p.eps;
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> ur(2.5, 4.0), urd(-0.2, 0.2), uth(0.0, 2.0 * M_PI);
    OdeSpec spec;
    spec.rel_tol = kJacobiIntegratorTol;
    spec.abs_tol = kJacobiIntegratorTol;
    double worst = 0.0;
    bool ok = true;
    for (int k = 0; k < 5; ++k) {
        PhysicalState s;
        s.r2 = ur(rng);
        s.r2dot = urd(rng);
        s.th2 = uth(rng);
        // th2dot fixed by J = -1/eps: (1/2) r^2 (th2dot - 1)^2 = J - V + r^2/2 - r2dot^2/2
        s.th2dot = 1.0;
        const double base = jacobi_constant(s, p, 0.0);  // kinetic rotating part vanishes here
        const double need = J - base;
        s.th2dot = 1.0 + std::sqrt(2.0 * need) / s.r2;
        const double J0 = jacobi_constant(s, p, 0.0);
        double drift = 0.0;
        try {
            auto field = [&](double t, const OdeState<4>& y) {
                const PhysicalState d = rtbp_rhs({y[0], y[1], y[2], y[3]}, p, t);
                return OdeState<4>{d.r2, d.r2dot, d.th2, d.th2dot};
            };
            integrate_ode<4>(field, {s.r2, s.r2dot, s.th2, s.th2dot}, 0.0, kJacobiSpan, spec,
                             [&](double t, const OdeState<4>& y) {
                                 drift = std::max(drift, std::fabs(jacobi_constant({y[0], y[1], y[2], y[3]}, p, t) - J0));
                             });
        } catch (const NumericalError& e) {
            ok = false;
            r.notes.push_back("orbit " + std::to_string(k) + " failed: " + e.what());
        }
        r.metrics.push_back({"drift orbit " + std::to_string(k) + " (J0 = " + fmt(J0) + ")", drift});
        worst = std::max(worst, drift);
    }
    r.metrics.push_back({"max drift", worst});
    r.passed = ok && worst <= kJacobiDrift;
    return r;
}

CheckResult check_coefficients() {
    CheckResult r;
    r.id = 3;
    r.key = "coefficients";
    r.title = "Exact displayed coefficients C2_{0,1,0} = 99/16, calC_{0,1,0} = -123/8";
    r.rule = "exact rational equality for the printed coefficient set";
    const SeriesCoefficients pr = series_coefficients(0, 1, 0, CoefficientSet::printed);
    const SeriesCoefficients de = series_coefficients(0, 1, 0, CoefficientSet::derived);
    const bool c2 = *pr.C2 == Rational(99, 16);
    const bool cc = *pr.calC == Rational(-123, 8);
    r.metrics = {{"printed C2_{0,1,0}", static_cast<double>(*pr.C2)},
                 {"printed calC_{0,1,0}", static_cast<double>(*pr.calC)},
                 {"derived C2_{0,1,0}", static_cast<double>(*de.C2)},
                 {"derived calC_{0,1,0}", static_cast<double>(*de.calC)}};
    std::ostringstream os;
    os << "printed: C2 = " << *pr.C2 << ", calC = " << *pr.calC << "; derived from the R1^-3 expansion: C2 = "
       << *de.C2 << ", calC = " << *de.calC;
    r.notes.push_back(os.str());
    r.passed = c2 && cc;
    return r;
}

CheckResult check_representation() {
    CheckResult r;
    r.id = 4;
    r.key = "representation";
    r.title = "tau-domain vs z-domain values of int a^p b^r e^{i q psi}";
    r.rule = "relative difference <= 1e-8 for 5 (p,q,r) at eps 0.40 and 0.45";
    const int pqr[5][3] = {{3, 1, 0}, {5, 1, 0}, {9, 1, 0}, {7, 1, 1}, {5, 2, 0}};
    double worst = 0.0;
    for (double eps : {0.40, 0.45}) {
        for (const auto& t : pqr) {
            const auto tv = tau_domain_value(t[0], t[1], t[2], eps);
            const auto zv = tau_to_z_value({t[0], t[1], t[2], eps, ZPath::shifted});
            const double e = std::abs(tv - zv) / std::abs(tv);
            std::ostringstream os;
            os << "rel diff (p,q,r)=(" << t[0] << "," << t[1] << "," << t[2] << ") eps=" << eps;
            r.metrics.push_back({os.str(), e});
            worst = std::max(worst, e);
        }
    }
    r.metrics.push_back({"max rel diff", worst});
    r.passed = worst <= kRepresentationTol;
    return r;
}

CheckResult check_watson() {
    CheckResult r;
    r.id = 5;
    r.key = "watson";
    r.title = "Watson-lemma constants of the two model integrals";
    r.rule = "per integral one C (least squares): every rel. error within 15% of C eps^1.5, errors shrink with eps";
    const std::vector<double> eps = {0.45, 0.40, 0.35};
    bool ok = true;
    for (int which : {1, 2}) {
        std::vector<double> err;
        for (double e : eps) {
            const double L = model_leading(which, e);
            err.push_back(std::abs(model_integral(which, e) - L) / std::fabs(L));
        }
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < eps.size(); ++i) {
            const double g = std::pow(eps[i], 1.5);
            num += err[i] * g;
            den += g * g;
        }
        const double C = num / den;
        double spread = 0.0;
        for (std::size_t i = 0; i < eps.size(); ++i) {
            const double model = C * std::pow(eps[i], 1.5);
            spread = std::max(spread, std::fabs(err[i] - model) / model);
            r.metrics.push_back({"integral " + std::to_string(which) + " rel err eps=" + fmt(eps[i]), err[i]});
        }
        bool mono = true;
        for (std::size_t i = 1; i < err.size(); ++i) mono = mono && err[i] < err[i - 1];
        r.metrics.push_back({"integral " + std::to_string(which) + " fitted C", C});
        r.metrics.push_back({"integral " + std::to_string(which) + " max spread about C eps^1.5", spread});
        ok = ok && mono && spread <= kWatsonSpread;
    }
    r.passed = ok;
    return r;
}

CheckResult check_dual_path() {
    CheckResult r;
    r.id = 6;
    r.key = "dual-path";
    r.title = "D0 by direct quadrature vs Fourier-series assembly";
    r.rule = "|direct - series| <= max(1e-4 |direct|, series tail estimate) at eps 0.40/0.45/0.50, 8 theta0";
    std::vector<double> th;
    for (int j = 0; j < 8; ++j) th.push_back(0.1 + 0.75 * j);
    bool ok = true;
    for (double eps : {0.40, 0.45, 0.50}) {
        const auto direct = D0_direct_grid(th, eps);
        const FourierTable tab = fourier_series_D0(eps);
        const double tail = tab.tail_estimate();
        double worst_rel = 0.0, worst_margin = 0.0;
        for (std::size_t i = 0; i < th.size(); ++i) {
            const double d = std::fabs(direct[i] - tab.evaluate(th[i]));
            const double allow = std::max(kDualPathRel * std::fabs(direct[i]), tail);
            worst_rel = std::max(worst_rel, d / std::fabs(direct[i]));
            worst_margin = std::max(worst_margin, d / allow);
        }
        r.metrics.push_back({"eps=" + fmt(eps) + " max rel diff", worst_rel});
        r.metrics.push_back({"eps=" + fmt(eps) + " tail estimate", tail});
        r.metrics.push_back({"eps=" + fmt(eps) + " diff / allowance", worst_margin});
        ok = ok && worst_margin <= 1.0;
    }
    r.passed = ok;
    return r;
}

CheckResult check_leading_trend() {
    CheckResult r;
    r.id = 7;
    r.key = "leading";
    r.title = "Leading splitting trend D0(pi/2, eps) / (sqrt(pi/2) eps^-5 e^{-1/(3 eps^3)})";
    r.rule = "fit K(eps) = c0 + c1 eps^1.5 on eps 0.50/0.45/0.40/0.35: max residual <= 0.10 |c0| and c0 "
             "within 25% of a candidate constant";
    const std::vector<double> eps = {0.50, 0.45, 0.40, 0.35};
    std::vector<double> K;
    for (double e : eps) {
        K.push_back(D0_direct(M_PI / 2.0, e) / leading_scale(e));
        r.metrics.push_back({"K(eps=" + fmt(e) + ") direct", K.back()});
    }
    // least squares for c0 + c1 g, g = eps^1.5
    double sg = 0, sgg = 0, sk = 0, sgk = 0;
    const double n = static_cast<double>(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double g = std::pow(eps[i], 1.5);
        sg += g;
        sgg += g * g;
        sk += K[i];
        sgk += g * K[i];
    }
    const double c1 = (n * sgk - sg * sk) / (n * sgg - sg * sg);
    const double c0 = (sk - c1 * sg) / n;
    double resid = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i)
        resid = std::max(resid, std::fabs(K[i] - c0 - c1 * std::pow(eps[i], 1.5)));
    r.metrics.push_back({"fit c0", c0});
    r.metrics.push_back({"fit c1", c1});
    r.metrics.push_back({"max fit residual", resid});

    struct Candidate {
        const char* name;
        double value;
    };
    const Candidate cand[] = {
        {"printed -37/20", leading_constant(LeadingConstant::printed)},
        {"assembled from the derived coefficients -1/8", leading_constant(LeadingConstant::corrected)},
    };
    bool near = false;
    std::string best;
    double best_rel = 1e300;
    for (const auto& c : cand) {
        const double rel = std::fabs(c0 - c.value) / std::fabs(c.value);
        r.metrics.push_back({std::string("|c0 - K| / |K|, K = ") + c.name, rel});
        if (rel < best_rel) {
            best_rel = rel;
            best = c.name;
        }
        near = near || rel <= kTrendConstant;
    }

    // Below eps = 0.35 direct quadrature runs out of digits; the z-route series continues the trend.
    const Truncation t{0, 16};
    auto provider = [](ElementaryKind k, int nn, int m, double e) { return elementary_z(k, nn, m, e); };
    double last = 0.0;
    for (double e : {0.30, 0.25, 0.20, 0.15, 0.10}) {
        const FourierTable tab = fourier_series_D0(e, t, MelnikovForm::corrected, CoefficientSet::derived, provider);
        last = tab.evaluate(M_PI / 2.0) / leading_scale(e);
        r.metrics.push_back({"K(eps=" + fmt(e) + ") z-route series", last});
    }
    std::string zbest;
    double zrel = 1e300;
    for (const auto& c : cand) {
        const double rel = std::fabs(last - c.value) / std::fabs(c.value);
        if (rel < zrel) {
            zrel = rel;
            zbest = c.name;
        }
    }
    r.notes.push_back("direct-quadrature fit: c0 = " + fmt(c0) + " is closest to " + best + " (rel. distance " +
                      fmt(best_rel) + ")");
    r.notes.push_back("z-route series down to eps = 0.1 gives K = " + fmt(last) + ", matching " + zbest +
                      " (rel. distance " + fmt(zrel) + "); the printed constant -37/20 is not approached");
    r.passed = resid <= kTrendResidual * std::fabs(c0) && near;
    return r;
}

CheckResult check_contraction() {
    CheckResult r;
    r.id = 8;
    r.key = "contraction";
    r.title = "Picard contraction ratio against K sqrt(eps)";
    r.rule = "all solves converge; K = max r(eps)/sqrt(eps) over eps 0.20/0.30/0.40 at rho = 0.2 satisfies K sqrt(0.4) < 1";
    double K = 0.0;
    bool ok = true;
    for (double e : {0.20, 0.30, 0.40}) {
        try {
            const SolveResult s = solve_stable({0.2, e, 0.7});
            const double q = s.report.empirical_ratio();
            r.metrics.push_back({"ratio eps=" + fmt(e), q});
            r.metrics.push_back({"iterations eps=" + fmt(e), static_cast<double>(s.report.iterations)});
            K = std::max(K, q / std::sqrt(e));
        } catch (const NumericalError& ex) {
            ok = false;
            r.notes.push_back(std::string("eps=") + fmt(e) + ": " + ex.what());
        }
    }
    r.metrics.push_back({"K", K});
    r.metrics.push_back({"K sqrt(0.4)", K * std::sqrt(0.4)});
    r.passed = ok && K * std::sqrt(0.4) < 1.0;
    return r;
}

CheckResult check_melnikov_limit() {
    CheckResult r;
    r.id = 9;
    r.key = "melnikov-limit";
    r.title = "Solver splitting at small rho extrapolates to D0";
    r.rule = "order-1 Richardson on rho 0.05/0.025/0.0125 at eps 0.4, theta0 0.7: |R - D0| <= 2 x error bar";
    const double eps = 0.4, th = 0.7;
    std::vector<double> D;
    for (double rho : {0.05, 0.025, 0.0125}) {
        D.push_back(splitting_distance({rho, eps, th}));
        r.metrics.push_back({"D(rho=" + fmt(rho) + ")", D.back()});
    }
    const double R1 = 2.0 * D[1] - D[0];
    const double R2 = 2.0 * D[2] - D[1];
    const double bar = std::fabs(R2 - R1);
    const double d0 = D0_direct(th, eps);
    r.metrics.push_back({"Richardson (0.05, 0.025)", R1});
    r.metrics.push_back({"Richardson (0.025, 0.0125)", R2});
    r.metrics.push_back({"error bar", bar});
    r.metrics.push_back({"D0_direct", d0});
    r.metrics.push_back({"|R - D0|", std::fabs(R2 - d0)});
    r.passed = std::fabs(R2 - d0) <= kRichardsonFactor * bar;
    return r;
}

CheckResult check_transversality() {
    CheckResult r;
    r.id = 10;
    r.key = "transversality";
    r.title = "Transversal zero of D0 at theta0 = 0";
    r.rule = "root within 1e-8 of 0 and |dD0/dtheta0| >= 0.5 x leading prediction at eps = 0.4";
    const double eps = 0.4;
    const HomoclinicRoot h = find_homoclinic(0.0, eps, -0.4, 0.5);
    const double pred = std::fabs(leading_constant(LeadingConstant::corrected)) * leading_scale(eps);
    const double pred_printed = std::fabs(leading_constant(LeadingConstant::printed)) * leading_scale(eps);
    r.metrics = {{"root", h.theta0},
                 {"dD0/dtheta0", h.derivative},
                 {"prediction |K| sqrt(pi/2) eps^-5 e^{-1/(3eps^3)}, K = -1/8", pred},
                 {"ratio to prediction (K = -1/8)", std::fabs(h.derivative) / pred},
                 {"ratio to prediction with the printed constant -37/20", std::fabs(h.derivative) / pred_printed}};
    r.notes.push_back("the prediction uses the constant resolved by the leading-trend check; with the printed "
                      "-37/20 the slope ratio is " + fmt(std::fabs(h.derivative) / pred_printed));
    r.passed = std::fabs(h.theta0) <= kRootTol && std::fabs(h.derivative) >= kSlopeFraction * pred;
    return r;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "identities", "jacobi",       "coefficients",   "representation", "watson", "dual-path",
        "leading",    "contraction",  "melnikov-limit", "transversality", "all"};
    return names;
}

bool is_suite(const std::string& name) {
    const auto& n = suite_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

std::vector<CheckResult> run_suite(const std::string& name) {
    static const std::vector<std::function<CheckResult()>> checks = {
        check_identities,      check_jacobi,     check_coefficients, check_representation,
        check_watson,          check_dual_path,  check_leading_trend, check_contraction,
        check_melnikov_limit,  check_transversality};
    if (!is_suite(name)) throw std::invalid_argument("unknown suite '" + name + "'");
    std::vector<CheckResult> out;
    if (name == "all") {
        for (const auto& c : checks) out.push_back(c());
        return out;
    }
    const auto& n = suite_names();
    const auto idx = static_cast<std::size_t>(std::find(n.begin(), n.end(), name) - n.begin());
    out.push_back(checks[idx]());
    return out;
}

}  // namespace rtbp
