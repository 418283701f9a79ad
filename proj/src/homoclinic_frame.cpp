#include "rtbp/homoclinic_frame.hpp"

#include <cmath>

#include "rtbp/errors.hpp"

namespace rtbp {

namespace {
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kTwoSqrt2 = 2.0 * kSqrt2;
}  // namespace

double homoclinic_a(double tau) {
    const double e = std::exp(-std::fabs(tau));
    return kTwoSqrt2 * e / (1.0 + e * e);
}

double homoclinic_psi(double tau, double eps) {
    const double e3 = eps * eps * eps;
    const double s = std::sinh(tau);
    return 2.0 * std::atan(s) - std::sinh(3.0 * tau) / (24.0 * e3) - 3.0 * s / (8.0 * e3);
}

double homoclinic_psi_rate(double tau, double eps) {
    // 1/a^3 = cosh^3(tau) / (2 sqrt2)^... with a = sqrt2 / cosh(tau)
    const double c = std::cosh(tau);
    const double a = kSqrt2 / c;
    const double inv_a3 = c * c * c / (2.0 * kSqrt2);
    return kSqrt2 * (a - inv_a3 / (eps * eps * eps));
}

FrameSample eval_frame(double tau, double eps) {
    FrameSample f;
    f.tau = tau;
    const double at = std::fabs(tau);
    const double sgn = tau < 0.0 ? -1.0 : 1.0;
    const double e = std::exp(-at);
    const double e2 = e * e;
    const double den = 1.0 + e2;

    f.a = kTwoSqrt2 * e / den;
    f.b = sgn * kTwoSqrt2 * e * (e2 - 1.0) / (den * den);
    f.bprime = f.a - f.a * f.a * f.a;
    f.psi = homoclinic_psi(tau, eps);

    // h = 3 (e^{2t} - e^{-2t} + 4t) / (2 (e^t + e^{-t})^2), in e^{-|t|} form.
    f.h = sgn * 3.0 * (1.0 - e2 * e2 + 4.0 * at * e2) / (2.0 * den * den);
    const double th = std::tanh(tau);  // -b/a
    f.H = 1.0 - th * f.h;
    f.Htilde = (1.0 - f.a * f.a) * f.h - 2.0 * th;
    return f;
}

MW mw_from_xy(double x, double y, const FrameSample& f) {
    if (std::fabs(f.a) < kFrameFloor) throw DomainError("frame amplitude a vanishes");
    return {(f.bprime * x - f.b * y) / f.a, f.Htilde * x - f.H * y};
}

XY xy_from_mw(double M, double W, const FrameSample& f) {
    if (std::fabs(f.a) < kFrameFloor) throw DomainError("frame amplitude a vanishes");
    return {(f.b * W - f.a * f.H * M) / f.a, (f.bprime * W - f.a * f.Htilde * M) / f.a};
}

double mw_determinant(const FrameSample& f) {
    return (f.b * f.Htilde - f.bprime * f.H) / f.a;
}

MW scale_mw(double M, double W, const FrameSample& f, double eps) {
    if (std::fabs(f.a) < kFrameFloor) throw DomainError("frame amplitude a vanishes");
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    const double s = eps * eps * eps * std::sqrt(eps) * f.a;
    return {M / s, W / s};
}

MW unscale_mw(double mM, double mW, const FrameSample& f, double eps) {
    if (std::fabs(f.a) < kFrameFloor) throw DomainError("frame amplitude a vanishes");
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    const double s = eps * eps * eps * std::sqrt(eps) * f.a;
    return {mM * s, mW * s};
}

}  // namespace rtbp
