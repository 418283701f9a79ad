#include "rtbp/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rtbp/errors.hpp"
#include "rtbp/homoclinic_frame.hpp"

namespace rtbp {

namespace {
constexpr double kSqrt2 = 1.41421356237309504880;

struct Radii {
    double R13;
    double R23;
};

// R13, R23 of the reduced system with s = eps^2 U^2 X^2 (equal to u in McGehee form).
Radii reduced_radii(double s, double c, double rho, double floor) {
    const double m1 = 1.0 - rho;
    const double q13 = 1.0 + rho * rho * s * s + 2.0 * rho * s * c;
    const double q23 = 1.0 + m1 * m1 * s * s - 2.0 * m1 * s * c;
    if (!(q13 > floor * floor) || !(q23 > floor * floor)) {
        std::ostringstream os;
        os << "binary collision: R13^2=" << q13 << " R23^2=" << q23;
        throw CollisionError(os.str());
    }
    return {std::sqrt(q13), std::sqrt(q23)};
}

void physical_radii(const PhysicalState& s, const ParamSet& p, double t, double floor,
                    double& r13, double& r23, double& c) {
    const double m1 = 1.0 - p.rho;
    const double m2 = p.rho;
    c = std::cos(s.th2 - t);
    const double q13 = s.r2 * s.r2 + m2 * m2 + 2.0 * m2 * s.r2 * c;
    const double q23 = s.r2 * s.r2 + m1 * m1 - 2.0 * m1 * s.r2 * c;
    r13 = std::sqrt(std::max(q13, 0.0));
    r23 = std::sqrt(std::max(q23, 0.0));
    if (r13 < floor || r23 < floor) {
        std::ostringstream os;
        os << "binary collision: r13=" << r13 << " r23=" << r23;
        throw CollisionError(os.str());
    }
}
}  // namespace

void validate_params(const ParamSet& p, double eps0) {
    if (!(eps0 > 0.0) || eps0 > 0.6) throw DomainError("eps0 must lie in (0, 0.6]");
    if (!(p.eps > 0.0) || !(p.eps < eps0)) {
        std::ostringstream os;
        os << "eps=" << p.eps << " outside (0, " << eps0 << ")";
        throw DomainError(os.str());
    }
    if (!(p.rho > -eps0) || !(p.rho < 0.5 + eps0)) {
        std::ostringstream os;
        os << "rho=" << p.rho << " outside (" << -eps0 << ", " << 0.5 + eps0 << ")";
        throw DomainError(os.str());
    }
    if (!std::isfinite(p.theta0)) throw DomainError("theta0 must be finite");
}

PhysicalState rtbp_rhs(const PhysicalState& s, const ParamSet& p, double t,
                       const ModelLimits& lim) {
    if (!(s.r2 > 0.0)) throw DomainError("r2 must be positive");
    const double m1 = 1.0 - p.rho;
    const double m2 = p.rho;
    double r13, r23, c;
    physical_radii(s, p, t, lim.collision_floor, r13, r23, c);
    const double sn = std::sin(s.th2 - t);
    const double i13 = 1.0 / (r13 * r13 * r13);
    const double i23 = 1.0 / (r23 * r23 * r23);
    const double f = -m1 * (s.r2 + m2 * c) * i13 - m2 * (s.r2 - m1 * c) * i23;
    const double g = m1 * m2 * sn / s.r2 * (i13 - i23);
    PhysicalState d;
    d.r2 = s.r2dot;
    d.r2dot = s.r2 * s.th2dot * s.th2dot + f;
    d.th2 = s.th2dot;
    d.th2dot = -2.0 * s.r2dot * s.th2dot / s.r2 + g;
    return d;
}

double jacobi_constant(const PhysicalState& s, const ParamSet& p, double t,
                       const ModelLimits& lim) {
    const double m1 = 1.0 - p.rho;
    const double m2 = p.rho;
    double r13, r23, c;
    physical_radii(s, p, t, lim.collision_floor, r13, r23, c);
    const double w = s.th2dot - 1.0;
    return 0.5 * (s.r2dot * s.r2dot + s.r2 * s.r2 * w * w) - 0.5 * s.r2 * s.r2 - m1 / r13 -
           m2 / r23;
}

McGeheeState mcgehee_from_physical(const PhysicalState& s, double t) {
    if (!(s.r2 > 0.0)) throw DomainError("r2 must be positive");
    McGeheeState m;
    m.u = 1.0 / s.r2;
    m.v = std::sqrt(s.r2) * s.r2dot;
    m.theta = s.th2 - t;
    m.w = s.r2 * std::sqrt(s.r2) * s.th2dot;
    return m;
}

PhysicalState physical_from_mcgehee(const McGeheeState& m, double t) {
    if (!(m.u > 0.0)) throw DomainError("u must be positive");
    PhysicalState s;
    s.r2 = 1.0 / m.u;
    s.r2dot = std::sqrt(m.u) * m.v;
    s.th2 = m.theta + t;
    s.th2dot = m.u * std::sqrt(m.u) * m.w;
    return s;
}

McGeheeState mcgehee_rhs(const McGeheeState& m, const ParamSet& p, const ModelLimits& lim) {
    if (!(m.u > 0.0)) throw DomainError("u must be positive");
    const double c = std::cos(m.theta);
    const double sn = std::sin(m.theta);
    const Radii R = reduced_radii(m.u, c, p.rho, lim.collision_floor);
    const double i13 = 1.0 / (R.R13 * R.R13 * R.R13);
    const double i23 = 1.0 / (R.R23 * R.R23 * R.R23);
    const double m1 = 1.0 - p.rho;
    const double m2 = p.rho;
    const double F = 1.0 - m1 * (1.0 + m2 * m.u * c) * i13 - m2 * (1.0 - m1 * m.u * c) * i23;
    const double G = m1 * m2 * sn * (i13 - i23);
    McGeheeState d;
    d.u = -kSqrt2 * m.v * m.u;
    d.theta = kSqrt2 * (m.w - 1.0 / (m.u * std::sqrt(m.u)));
    d.w = -m.v * m.w / kSqrt2 + kSqrt2 * m.u * G;
    d.v = m.v * m.v / kSqrt2 + kSqrt2 * m.w * m.w - kSqrt2 + kSqrt2 * F;
    return d;
}

DuffingState duffing_from_mcgehee(const McGeheeState& m) {
    return {m.theta, m.w, -m.v * m.w / kSqrt2};
}

McGeheeState mcgehee_from_duffing(const DuffingState& d, double u) {
    if (d.X == 0.0) throw DomainError("X = 0 has no McGehee preimage");
    McGeheeState m;
    m.u = u;
    m.theta = d.theta;
    m.w = d.X;
    m.v = -kSqrt2 * d.Y / d.X;
    return m;
}

double U_from_u(double u, double X, double eps) { return std::sqrt(u) / (eps * X); }

double u_from_U(double U, double X, double eps) {
    const double r = eps * U * X;
    return r * r;
}

Forces forces_FG(double X, double /*Y*/, double theta, double U, const ParamSet& p,
                 const ModelLimits& lim) {
    const double rho = p.rho;
    const double s = p.eps * p.eps * U * U * X * X;
    const double c = std::cos(theta);
    const Radii R = reduced_radii(s, c, rho, lim.collision_floor);
    const double i13 = 1.0 / (R.R13 * R.R13 * R.R13);
    const double i23 = 1.0 / (R.R23 * R.R23 * R.R23);
    Forces out;
    out.R13 = R.R13;
    out.R23 = R.R23;
    out.F = 1.0 - (1.0 - rho) * (1.0 + rho * s * c) * i13 - rho * (1.0 - (1.0 - rho) * s * c) * i23;
    out.G = rho * (1.0 - rho) * std::sin(theta) * (i13 - i23);
    return out;
}

double jacobi_U_map(double U, double X, double Y, double theta, const ParamSet& p,
                    const ModelLimits& lim) {
    const double rho = p.rho;
    const double e3U3 = p.eps * p.eps * p.eps * U * U * U;
    const double s = p.eps * p.eps * U * U * X * X;
    const Radii R = reduced_radii(s, std::cos(theta), rho, lim.collision_floor);
    const double X2 = X * X;
    return 1.0 - e3U3 * Y * Y - 0.5 * e3U3 * X2 * X2 + (1.0 - rho) * e3U3 * X2 / R.R13 +
           rho * e3U3 * X2 / R.R23;
}

double solve_U(double X, double Y, double theta, const ParamSet& p, const ModelLimits& lim) {
    if (p.eps == 0.0) return 1.0;
    double U = 1.0;
    auto resid = [&](double u) { return u - jacobi_U_map(u, X, Y, theta, p, lim); };
    for (int it = 0; it < lim.u_max_iter; ++it) {
        double next;
        if (it < lim.u_newton_after) {
            next = jacobi_U_map(U, X, Y, theta, p, lim);
        } else {
            const double h = 1e-7 * std::max(1.0, std::fabs(U));
            const double d = (resid(U + h) - resid(U - h)) / (2.0 * h);
            if (!(std::fabs(d) > 0.0)) break;
            next = U - resid(U) / d;
        }
        if (!std::isfinite(next) || !(next > 0.0)) break;
        const double step = std::fabs(next - U);
        U = next;
        if (step <= 0.25 * lim.u_tol && std::fabs(resid(U)) <= lim.u_tol) return U;
    }
    if (std::isfinite(U) && U > 0.0 && std::fabs(resid(U)) <= lim.u_tol) return U;
    std::ostringstream os;
    os << "solve_U did not converge in " << lim.u_max_iter << " iterations (X=" << X
       << ", Y=" << Y << ", theta=" << theta << ")";
    throw NoConvergence(os.str());
}

DuffingState duffing_rhs(const DuffingState& s, const ParamSet& p, const ModelLimits& lim) {
    if (!(s.X > lim.x_floor)) throw DomainError("X below floor in duffing_rhs");
    const double U = solve_U(s.X, s.Y, s.theta, p, lim);
    const Forces fg = forces_FG(s.X, s.Y, s.theta, U, p, lim);
    const double e2U2 = p.eps * p.eps * U * U;
    const double eUX = p.eps * U * s.X;
    DuffingState d;
    d.theta = kSqrt2 * (s.X - 1.0 / (eUX * eUX * eUX));
    d.X = s.Y + kSqrt2 * e2U2 * s.X * s.X * fg.G;
    d.Y = s.X - s.X * s.X * s.X - s.X * fg.F + kSqrt2 * e2U2 * s.X * s.Y * fg.G;
    return d;
}

SPQ spq_exact_at(double x, double y, double Theta, double a, double b, double psi,
                 const ParamSet& p, const ModelLimits& lim) {
    const double X = x + a;
    if (!(X > 0.0)) throw DomainError("x + a must be positive");
    const double Y = y + b;
    const double theta = Theta + p.theta0 + psi;
    SPQ out;
    const double U = solve_U(X, Y, theta, p, lim);
    out.U = U;
    const Forces fg = forces_FG(X, Y, theta, U, p, lim);
    const double U3 = U * U * U;
    const double X3 = X * X * X;
    const double e3 = p.eps * p.eps * p.eps;
    const double Um1 = U - 1.0;
    out.S = x * (x * x + 3.0 * a * x + 3.0 * a * a) + Um1 * (U * U + U + 1.0) * X3 +
            e3 * U3 * x * X3 * a * a * a;
    const double e2U2 = p.eps * p.eps * U * U;
    out.P = kSqrt2 * e2U2 * X * X * fg.G;
    out.Q = -x * x * (x + 3.0 * a) - X * fg.F + kSqrt2 * e2U2 * X * Y * fg.G;
    return out;
}

SPQ spq_exact(double x, double y, double Theta, double tau, const ParamSet& p,
              const ModelLimits& lim) {
    const FrameSample f = eval_frame(tau, p.eps);
    return spq_exact_at(x, y, Theta, f.a, f.b, f.psi, p, lim);
}

}  // namespace rtbp
