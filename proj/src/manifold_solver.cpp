#include "rtbp/manifold_solver.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/special_functions/legendre.hpp>

#include "rtbp/errors.hpp"

namespace rtbp {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    const auto pos = boost::math::legendre_p_zeros<double>(n);
    x.clear();
    for (auto it = pos.rbegin(); it != pos.rend(); ++it)
        if (*it != 0.0) x.push_back(-*it);
    for (double z : pos) x.push_back(z);
    w.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = boost::math::legendre_p_prime<double>(n, x[i]);
        w[i] = 2.0 / ((1.0 - x[i] * x[i]) * d * d);
    }
}

// A[j*n + k] = int_{-1}^{x_j} l_k(x) dx for the Lagrange basis on the nodes.
std::vector<double> integration_matrix(const std::vector<double>& x, const std::vector<double>& w) {
    const int n = static_cast<int>(x.size());
    std::vector<double> A(static_cast<std::size_t>(n * n), 0.0);
    for (int j = 0; j < n; ++j) {
        // int_{-1}^{x_j} P_m
        std::vector<double> ip(static_cast<std::size_t>(n));
        ip[0] = x[j] + 1.0;
        for (int m = 1; m < n; ++m)
            ip[m] = (boost::math::legendre_p(m + 1, x[j]) - boost::math::legendre_p(m - 1, x[j])) /
                    (2.0 * m + 1.0);
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int m = 0; m < n; ++m)
                s += 0.5 * (2.0 * m + 1.0) * w[k] * boost::math::legendre_p(m, x[k]) * ip[m];
            A[static_cast<std::size_t>(j * n + k)] = s;
        }
    }
    return A;
}

double ipow3(double v) { return v * v * v; }

}  // namespace

std::vector<double> SolverGrid::cumulative(const std::vector<double>& g) const {
    const int n = nodes_per_panel;
    std::vector<double> out(g.size());
    NeumaierSum<double> base;
    for (std::size_t pnl = 0; pnl < panel_lo.size(); ++pnl) {
        const std::size_t off = pnl * static_cast<std::size_t>(n);
        const double hw = panel_hw[pnl];
        const double b0 = base.value();
        double tot = 0.0;
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += ref_cumint[static_cast<std::size_t>(j * n + k)] * g[off + k];
            out[off + j] = b0 + hw * s;
            tot += ref_weight[static_cast<std::size_t>(j)] * g[off + j];
        }
        base.add(hw * tot);
    }
    return out;
}

double SolverGrid::total(const std::vector<double>& g) const {
    const int n = nodes_per_panel;
    NeumaierSum<double> acc;
    for (std::size_t pnl = 0; pnl < panel_lo.size(); ++pnl) {
        double tot = 0.0;
        for (int j = 0; j < n; ++j)
            tot += ref_weight[static_cast<std::size_t>(j)] * g[pnl * static_cast<std::size_t>(n) + j];
        acc.add(panel_hw[pnl] * tot);
    }
    return acc.value();
}

std::shared_ptr<const SolverGrid> make_solver_grid(double eps, const SolverSpec& spec) {
    if (!(eps > 0.0) || eps > 0.6) throw DomainError("solver grid needs 0 < eps <= 0.6");
    if (spec.nodes_per_panel < 2 || spec.nodes_per_panel > 40)
        throw DomainError("nodes_per_panel must lie in [2, 40]");
    auto g = std::make_shared<SolverGrid>();
    g->eps = eps;
    g->nodes_per_panel = spec.nodes_per_panel;
    OscSpec os;
    os.dphi = spec.dphi;
    os.max_width = spec.max_width;
    os.sigma = spec.sigma;
    os.window_k = spec.window_k;
    double tm = 0.0;
    const double T = oscillatory_cutoff(eps, os, &tm) + spec.extra_tail;
    tm += spec.extra_tail;
    g->taper_centre = tm;
    const auto br = phase_breakpoints(eps, T, spec.dphi, spec.max_width, os.max_panels);
    std::vector<double> x, w;
    gauss_legendre(spec.nodes_per_panel, x, w);
    g->ref_cumint = integration_matrix(x, w);
    g->ref_weight = w;
    const double s2 = std::sqrt(2.0) * spec.sigma;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        const double lo = br[i], hw = 0.5 * (br[i + 1] - br[i]);
        g->panel_lo.push_back(lo);
        g->panel_hw.push_back(hw);
        for (double xi : x) {
            const double s = lo + hw * (xi + 1.0);
            g->s.push_back(s);
            g->frame.push_back(eval_frame(s, eps));
            g->frame_neg.push_back(eval_frame(-s, eps));
            g->window.push_back(0.5 * std::erfc((s - tm) / s2));
        }
    }
    return g;
}

double IterationReport::empirical_ratio(double floor) const {
    double r = 0.0;
    for (std::size_t i = 1; i < residuals.size(); ++i)
        if (residuals[i - 1] > floor && residuals[i] > floor)
            r = std::max(r, residuals[i] / residuals[i - 1]);
    return r;
}

double weighted_norm_delta(const ScaledTrajectory& u, const ScaledTrajectory& v) {
    if (u.mM.size() != v.mM.size()) throw DomainError("trajectories live on different grids");
    double dM = 0.0, dW = 0.0, dT = 0.0;
    for (std::size_t i = 0; i < u.mM.size(); ++i) {
        const double a = u.grid->frame[i].a;
        dM = std::max(dM, std::fabs(u.mM[i] - v.mM[i]));
        dW = std::max(dW, std::fabs(u.mW[i] - v.mW[i]));
        dT = std::max(dT, a * a * a * std::fabs(u.Theta[i] - v.Theta[i]));
    }
    return dM + dW + dT;
}

ScaledTrajectory zero_trajectory(const ParamSet& p, Branch branch, const SolverSpec& spec) {
    ScaledTrajectory t;
    t.branch = branch;
    t.grid = make_solver_grid(p.eps, spec);
    t.params = p;
    const std::size_t n = t.grid->size();
    t.tau.resize(n);
    for (std::size_t i = 0; i < n; ++i) t.tau[i] = branch == Branch::stable ? t.grid->s[i] : -t.grid->s[i];
    t.mM.assign(n, 0.0);
    t.mW.assign(n, 0.0);
    t.Theta.assign(n, 0.0);
    return t;
}

ScaledTrajectory explicit_seed(const ParamSet& p, Branch branch, const SolverSpec& spec) {
    ScaledTrajectory t = zero_trajectory(p, branch, spec);
    const SolverGrid& g = *t.grid;
    const std::size_t n = g.size();
    const double c = 1.5 * kSqrt2 * p.rho * (1.0 - p.rho) * std::sqrt(p.eps);
    const double sgn = branch == Branch::stable ? 1.0 : -1.0;
    std::vector<double> fM(n), fW(n);
    for (std::size_t i = 0; i < n; ++i) {
        const FrameSample& f = branch == Branch::stable ? g.frame[i] : g.frame_neg[i];
        const double s2 = std::sin(2.0 * (p.theta0 + f.psi));
        const double a3 = f.a * f.a * f.a;
        fM[i] = g.window[i] * a3 * f.a * (f.bprime - f.b * f.b / f.a) * s2;
        fW[i] = a3 * (f.Htilde - (f.b / f.a) * f.H) * s2;
    }
    const auto cM = g.cumulative(fM);
    const auto cW = g.cumulative(fW);
    const double totM = g.total(fM);
    for (std::size_t i = 0; i < n; ++i) {
        const FrameSample& f = branch == Branch::stable ? g.frame[i] : g.frame_neg[i];
        // stable: int_tau^inf; unstable: int_-inf^tau = int_s^inf of the mirrored integrand
        t.mM[i] = sgn * c / (f.a * f.a) * (totM - cM[i]);
        t.mW[i] = -c * sgn * cW[i];
    }
    t.mM0 = sgn * c / 2.0 * totM;
    return t;
}

ScaledTrajectory picard_step(const ScaledTrajectory& cur, const ParamSet& p, const SolverSpec& spec) {
    const SolverGrid& g = *cur.grid;
    const std::size_t n = g.size();
    const bool stable = cur.branch == Branch::stable;
    const double sgn = stable ? 1.0 : -1.0;
    const double eps = p.eps;
    const double e3 = eps * eps * eps;
    const double e35 = e3 * std::sqrt(eps);
    std::vector<double> fT(n), fM(n), fW(n);
    for (std::size_t i = 0; i < n; ++i) {
        const FrameSample& f = stable ? g.frame[i] : g.frame_neg[i];
        const MW mw = unscale_mw(cur.mM[i], cur.mW[i], f, eps);
        const XY xy = xy_from_mw(mw.M, mw.W, f);
        const SPQ q = spq_exact_at(xy.x, xy.y, cur.Theta[i], f.a, f.b, f.psi, p, spec.limits);
        const double X = xy.x + f.a;
        fT[i] = kSqrt2 * q.S / (e3 * ipow3(q.U) * ipow3(X) * ipow3(f.a));
        fM[i] = g.window[i] * (f.bprime * q.P - f.b * q.Q);
        fW[i] = (f.Htilde * q.P - f.H * q.Q) / f.a;
    }
    // integrals in s = |tau|; d tau = sgn ds
    const auto cT = g.cumulative(fT);
    const auto cM = g.cumulative(fM);
    const auto cW = g.cumulative(fW);
    const double totM = g.total(fM);

    ScaledTrajectory out = cur;
    for (std::size_t i = 0; i < n; ++i) {
        const FrameSample& f = stable ? g.frame[i] : g.frame_neg[i];
        const double aM = -sgn * (totM - cM[i]);
        const double W = sgn * f.a * cW[i];
        const MW sc = scale_mw(aM / f.a, W, f, eps);
        out.mM[i] = sc.M;
        out.mW[i] = sc.W;
        out.Theta[i] = sgn * cT[i];
        if (spec.check_domain && !(std::fabs(sc.M) <= 1.0 && std::fabs(sc.W) <= 1.0)) {
            std::ostringstream os;
            os << "scaled (M, W) = (" << sc.M << ", " << sc.W << ") left [-1, 1]^2 at tau = "
               << cur.tau[i];
            throw DomainEscape(os.str());
        }
    }
    // a(0)^2 = 2
    out.mM0 = -sgn * totM / (2.0 * e35);
    // truncated remainder beyond the taper: |integrand| decays at least like a^4
    double tail = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (g.s[i] >= g.taper_centre) tail = std::max(tail, std::fabs(fM[i] / std::max(g.window[i], 1e-300)));
    out.tail_bound = tail / 4.0 / (2.0 * e35);
    return out;
}

SolveResult solve_branch(const ParamSet& p, Branch branch, const SolverSpec& spec) {
    validate_params(p);
    ScaledTrajectory cur =
        spec.seed == Seed::explicit_first ? explicit_seed(p, branch, spec) : zero_trajectory(p, branch, spec);
    IterationReport rep;
    for (int it = 0; it < spec.max_iter; ++it) {
        ScaledTrajectory next = picard_step(cur, p, spec);
        const double d = weighted_norm_delta(next, cur);
        if (!rep.residuals.empty())
            rep.contraction_ratios.push_back(rep.residuals.back() > 0.0 ? d / rep.residuals.back() : 0.0);
        rep.residuals.push_back(d);
        rep.iterations = it + 1;
        cur = std::move(next);
        if (d < spec.tol) {
            rep.converged = true;
            break;
        }
    }
    if (!rep.converged) {
        std::ostringstream os;
        os << "Picard iteration did not reach " << spec.tol << " in " << spec.max_iter
           << " steps (last delta " << rep.residuals.back() << ")";
        throw MaxIterExceeded(os.str());
    }
    return {std::move(cur), std::move(rep)};
}

SolveResult solve_stable(const ParamSet& p, double tol, int max_iter, SolverSpec spec) {
    spec.tol = tol;
    spec.max_iter = max_iter;
    return solve_branch(p, Branch::stable, spec);
}

SolveResult solve_unstable(const ParamSet& p, double tol, int max_iter, SolverSpec spec) {
    spec.tol = tol;
    spec.max_iter = max_iter;
    return solve_branch(p, Branch::unstable, spec);
}

double matching_X0(const ScaledTrajectory& stable) {
    if (stable.branch != Branch::stable) throw DomainError("matching condition needs the stable branch");
    // M(0) = -x(0) and a(0) M(0) = -int_0^inf (b'P - bQ)
    const double e = stable.params.eps;
    const double M0 = stable.mM0 * std::pow(e, 3.5) * kSqrt2;
    return kSqrt2 - M0;
}

double splitting_first_order(double theta0, double eps, const SolverSpec& spec) {
    OscSpec os;
    os.dphi = spec.dphi;
    os.max_width = spec.max_width;
    os.sigma = spec.sigma;
    os.window_k = spec.window_k;
    const OscGrid g = oscillatory_grid(eps, os);
    const double h = 1e-4;
    auto integrand = [&](double tau) {
        const FrameSample f = eval_frame(tau, eps);
        auto val = [&](double rho) {
            const SPQ q = spq_exact_at(0.0, 0.0, 0.0, f.a, f.b, f.psi, {rho, eps, theta0}, spec.limits);
            return f.bprime * q.P - f.b * q.Q;
        };
        // P, Q vanish at rho = 0; second-order one-sided difference
        return (4.0 * val(h) - val(2.0 * h)) / (2.0 * h);
    };
    const double I = quad_oscillatory<double>(integrand, g);
    return -I / (2.0 * std::pow(eps, 3.5));
}

double splitting_distance(const ParamSet& p, const SolverSpec& spec) {
    validate_params(p);
    if (p.rho == 0.0) return splitting_first_order(p.theta0, p.eps, spec);
    const SolveResult s = solve_branch(p, Branch::stable, spec);
    const SolveResult u = solve_branch(p, Branch::unstable, spec);
    return (s.trajectory.mM0 - u.trajectory.mM0) / p.rho;
}

HomoclinicRoot find_homoclinic(double rho, double eps, double lo, double hi, const SolverSpec& spec,
                               double tol) {
    auto f = [&](double th) { return splitting_distance({rho, eps, th}, spec); };
    const RootReport r = find_zero(f, lo, hi, tol);
    return {r.root, r.derivative, r.iterations};
}

}  // namespace rtbp
