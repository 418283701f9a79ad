#include "rtbp/asymptotics.hpp"

#include <cmath>

#include "rtbp/errors.hpp"
#include "rtbp/numerics.hpp"

namespace rtbp {

using cplx = std::complex<double>;

namespace {

constexpr cplx I1(0.0, 1.0);

cplx cipow(cplx x, int n) {
    if (n < 0) return 1.0 / cipow(x, -n);
    cplx r(1.0, 0.0);
    while (n > 0) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

cplx i_pow(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// Integral over t in R of g(t), g concentrated on a scale delta around t = 0 and decaying
// like a Gaussian beyond |t| ~ T.
template <class G>
cplx line_quad(G&& g, double delta, double T) {
    std::vector<double> pos;
    for (double s = 0.25 * delta; s < T; s *= 2.0) pos.push_back(s);
    pos.push_back(T);
    std::vector<double> br;
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) br.push_back(-*it);
    br.push_back(0.0);
    br.insert(br.end(), pos.begin(), pos.end());
    return adaptive_gk15<cplx>(g, br, 0.0, 1e-13, 200000).value;
}

double binding_shift(ZPath path, double lambda) {
    if (path == ZPath::direct) return 1.0;
    return 2.0 - std::min(0.5, 1.0 / std::sqrt(2.0 * lambda));
}

}  // namespace

double y_of_z(double z) {
    if (z < 0.0) return -y_of_z(-z);
    if (z == 0.0) return 0.0;
    const double root = std::hypot(z, 8.0);
    const double A = root + z;
    const double B = 64.0 / A;  // root - z without cancellation
    double y = std::cbrt(A) - std::cbrt(B);
    y -= (y * y * y + 12.0 * y - 2.0 * z) / (3.0 * y * y + 12.0);
    return y;
}

std::complex<double> script_I_asymptotic(int m, int n, int r, double k) {
    if (m <= 0) throw DomainError("script_I asymptotics need m >= 1");
    if (!(k > 0.0)) throw DomainError("script_I asymptotics need k > 0");
    const double mag = std::pow(2.0, r - 2 * n + 1) * std::pow(3.0, 0.5 * m) * M_PI /
                       std::tgamma(0.5 * m) * std::exp(-8.0 * k) * std::pow(k, 0.5 * (m - 2));
    return i_pow(3 * (r - n) - m) * mag;
}

std::complex<double> script_I_quadrature(int m, int n, int r, double k, ZPath path) {
    if (!(k > 0.0)) throw DomainError("script_I needs k > 0");
    if (r < 0 || m + n - 2 - r < 2) throw DomainError("script_I integrand does not decay");
    // z = (y^3 + 12 y)/2, dz = (3/2)(y + 2i)(y - 2i) dy
    const double kappa = 0.5 * k;
    const double c = binding_shift(path, kappa);
    const double delta = 2.0 - c;
    auto g = [&](double t) {
        const cplx y(t, -c);
        const cplx ph = -I1 * kappa * (y * y * y + 12.0 * y);
        return 1.5 * std::exp(ph) * cipow(y, r) / (cipow(y + 2.0 * I1, m - 1) * cipow(y - 2.0 * I1, n - 1));
    };
    const double T = std::max(4.0, std::sqrt(80.0 / (3.0 * kappa * c)));
    return line_quad(g, delta, T);
}

std::complex<double> tau_to_z_value(const ZIntegralSpec& s) {
    if (s.p < 1 || s.q < 1 || s.r < 0) throw DomainError("z representation needs p, q >= 1, r >= 0");
    if (s.p % 2 == 0) throw DomainError("z representation implemented for odd p (integer exponents)");
    if (!(s.eps > 0.0)) throw DomainError("eps must be positive");
    const int half = (s.p + 2 * s.r + 1) / 2;
    const double k = s.q / (24.0 * std::pow(s.eps, 3));
    const double pre = (2.0 / 3.0) * std::pow(2.0 * std::sqrt(2.0), s.p + s.r) *
                       (((s.r + s.q) % 2 == 0) ? 1.0 : -1.0);
    return pre * script_I_quadrature(1 + s.q + half, 1 - s.q + half, s.r, k, s.path);
}

std::complex<double> tau_domain_value(int p, int q, int r, double eps) {
    return tau_integrals({p}, q, r, eps).front();
}

std::complex<double> model_integral(int which, double eps) {
    if (which != 1 && which != 2) throw DomainError("model integral index is 1 or 2");
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    const double lam = which == 1 ? 1.0 / std::pow(eps, 3) : 0.5 / std::pow(eps, 3);
    const double delta = std::min(0.5, 1.0 / std::sqrt(2.0 * lam));
    const double c = 1.0 - delta;
    auto g = [&](double t) {
        const cplx z(t, -c);
        cplx v = std::exp(-I1 * lam * (z * z * z / 3.0 + z)) / cipow(z + I1, 4);
        if (which == 2) v /= cipow(z - I1, 2);
        return v;
    };
    const double T = std::max(4.0, std::sqrt(80.0 / (lam * c)));
    return line_quad(g, delta, T);
}

double model_leading(int which, double eps) {
    const double e92 = std::pow(eps, -4.5);
    if (which == 1) return 4.0 * std::sqrt(M_PI) / 3.0 * e92 * std::exp(-2.0 / (3.0 * std::pow(eps, 3)));
    if (which == 2)
        return -std::sqrt(2.0 * M_PI) / 12.0 * e92 * std::exp(-1.0 / (3.0 * std::pow(eps, 3)));
    throw DomainError("model integral index is 1 or 2");
}

std::complex<double> model_via_script_I(int which, double eps, bool asymptotic) {
    const double e3 = std::pow(eps, 3);
    if (which == 1) {
        const double k = 1.0 / (12.0 * e3);
        return 16.0 / 3.0 * (asymptotic ? script_I_asymptotic(5, 1, 0, k) : script_I_quadrature(5, 1, 0, k));
    }
    if (which == 2) {
        const double k = 1.0 / (24.0 * e3);
        return 64.0 / 3.0 * (asymptotic ? script_I_asymptotic(5, 3, 0, k) : script_I_quadrature(5, 3, 0, k));
    }
    throw DomainError("model integral index is 1 or 2");
}

namespace {

cplx elementary_z_form(ElementaryKind kind, int n, int m, double eps, bool asymptotic, ZPath path) {
    if (!in_delta(kind, n, m)) throw IndexError("(n, m) outside the admissible index set");
    const ElementaryShape s = elementary_shape(kind, n, m);
    const int half = (s.p + 2 * s.r + 1) / 2;
    const double k = s.q / (24.0 * std::pow(eps, 3));
    const double pre = (2.0 / 3.0) * std::pow(2.0 * std::sqrt(2.0), s.p + s.r) *
                       (((s.r + s.q) % 2 == 0) ? 1.0 : -1.0) * std::pow(eps, s.eps_power);
    const int M = 1 + s.q + half, N = 1 - s.q + half;
    return pre * (asymptotic ? script_I_asymptotic(M, N, s.r, k) : script_I_quadrature(M, N, s.r, k, path));
}

}  // namespace

double elementary_asymptotic(ElementaryKind kind, int n, int m, double eps) {
    const cplx v = elementary_z_form(kind, n, m, eps, true, ZPath::shifted);
    return elementary_shape(kind, n, m).r == 0 ? v.real() : v.imag();
}

double elementary_z(ElementaryKind kind, int n, int m, double eps, ZPath path) {
    const cplx v = elementary_z_form(kind, n, m, eps, false, path);
    return elementary_shape(kind, n, m).r == 0 ? v.real() : v.imag();
}

double leading_constant(LeadingConstant which) {
    switch (which) {
        case LeadingConstant::printed: return -37.0 / 20.0;
        case LeadingConstant::printed_form_derived_coeffs: return 1.0 / 40.0;
        case LeadingConstant::corrected: return -1.0 / 8.0;
    }
    return 0.0;
}

const char* to_string(LeadingConstant which) {
    switch (which) {
        case LeadingConstant::printed: return "printed";
        case LeadingConstant::printed_form_derived_coeffs: return "printed_form_derived_coeffs";
        case LeadingConstant::corrected: return "corrected";
    }
    return "?";
}

Rational assembled_leading_constant(CoefficientSet set, MelnikovForm form) {
    // Leading terms: I2_{1,0,odd} ~ (2 sqrt2/15) sqrt(pi/2) eps^-7/2 e,
    // J_{1,0,odd} ~ (2/15) sqrt(pi/2) eps^-3/2 e, with e = e^{-1/(3 eps^3)}.
    const SeriesCoefficients c = series_coefficients(0, 1, 0, set);
    const Rational C2 = *c.C2;
    const Rational calC = *c.calC;
    if (form == MelnikovForm::printed)
        // -(sqrt2/2) C2 (2 sqrt2/15) + (1/2) calC (2/15)
        return -Rational(2, 15) * C2 + calC / 15;
    // (sqrt2/4)(-C)(2 sqrt2/15) - (1/2) calC (2/15), C = (2/3) C2
    return -(Rational(2, 3) * C2) / 15 - calC / 15;
}

double leading_splitting(double theta0, double eps, LeadingConstant which) {
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    return leading_constant(which) * std::sqrt(M_PI / 2.0) * std::pow(eps, -5) *
           std::exp(-1.0 / (3.0 * std::pow(eps, 3))) * std::sin(theta0);
}

}  // namespace rtbp
