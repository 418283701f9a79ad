#include "rtbp/melnikov.hpp"

#include <cmath>
#include <map>
#include <tuple>

#include "rtbp/errors.hpp"
#include "rtbp/homoclinic_frame.hpp"

namespace rtbp {

namespace {

void check_eps(double eps) {
    if (!(eps > 0.0) || eps > 0.5) throw DomainError("Melnikov evaluation needs 0 < eps <= 0.5");
}

// R1^-3 and 1 - R1^-3 without cancellation for small eps^2 a^2.
struct InvCube {
    double r3;
    double one_minus;
};

InvCube inv_cube(double w, double cphi) {
    const double x = w * (w - 2.0 * cphi);
    if (!(1.0 + x > 0.0)) throw DomainError("R1 radicand is not positive");
    const double lg = std::log1p(x);
    return {std::exp(-1.5 * lg), -std::expm1(-1.5 * lg)};
}

double ipow(double x, int n) {
    double r = 1.0;
    while (n > 0) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

}  // namespace

double R1(double tau, double theta0, double eps) {
    if (eps < 0.0) throw DomainError("eps must be non-negative");
    const double a = homoclinic_a(tau);
    const double w = eps * eps * a * a;
    const double psi = eps > 0.0 ? homoclinic_psi(tau, eps) : 0.0;
    const double rad = 1.0 - 2.0 * w * std::cos(psi + theta0) + w * w;
    if (!(rad > 0.0)) throw DomainError("R1 radicand is not positive");
    return std::sqrt(rad);
}

std::vector<D0Parts> D0_parts_grid(const std::vector<double>& theta0, double eps,
                                   const OscSpec& spec) {
    check_eps(eps);
    const OscGrid g = oscillatory_grid(eps, spec);
    const std::size_t nt = theta0.size();
    std::vector<NeumaierSum<double>> sI(nt), sI5(nt), sJ(nt);
    std::vector<double> s0(nt), c0(nt);
    for (std::size_t j = 0; j < nt; ++j) {
        s0[j] = std::sin(theta0[j]);
        c0[j] = std::cos(theta0[j]);
    }
    for (std::size_t i = 0; i < g.tau.size(); ++i) {
        const double t = g.tau[i];
        const double a = homoclinic_a(t);
        const double b = -a * std::tanh(t);
        const double psi = homoclinic_psi(t, eps);
        const double a3 = a * a * a, a5 = a3 * a * a;
        const double w = eps * eps * a * a;
        const double sp = std::sin(psi), cp = std::cos(psi);
        for (std::size_t j = 0; j < nt; ++j) {
            double vI = 0.0, vI5 = 0.0, vJ = 0.0;
            // +tau and -tau: a even, b odd, psi odd
            for (int sgn : {1, -1}) {
                const double sphi = s0[j] * cp + sgn * c0[j] * sp;
                const double cphi = c0[j] * cp - sgn * s0[j] * sp;
                const InvCube ic = inv_cube(w, cphi);
                const double alpha = sphi * ic.one_minus;
                vI += (2.0 * a3 - 1.5 * a5) * alpha;
                vI5 += a5 * alpha;
                vJ += sgn * a * b * (w * cphi * (2.0 + ic.r3) + ic.one_minus);
            }
            sI[j].add(vI * g.weight[i]);
            sI5[j].add(vI5 * g.weight[i]);
            sJ[j].add(vJ * g.weight[i]);
        }
    }
    std::vector<D0Parts> out(nt);
    for (std::size_t j = 0; j < nt; ++j) out[j] = {sI[j].value(), sI5[j].value(), sJ[j].value()};
    return out;
}

D0Parts D0_parts(double theta0, double eps, const OscSpec& spec) {
    return D0_parts_grid({theta0}, eps, spec).front();
}

double D0_from_parts(const D0Parts& parts, double eps, MelnikovForm form) {
    const double e15 = eps * std::sqrt(eps), e35 = e15 * eps * eps;
    if (form == MelnikovForm::printed)
        return -(std::sqrt(2.0) / (2.0 * e15)) * parts.I + parts.J / (2.0 * e35);
    return (std::sqrt(2.0) / (4.0 * e15)) * parts.I5 - parts.J / (2.0 * e35);
}

double D0_direct(double theta0, double eps, MelnikovForm form, const OscSpec& spec) {
    return D0_from_parts(D0_parts(theta0, eps, spec), eps, form);
}

std::vector<double> D0_direct_grid(const std::vector<double>& theta0, double eps,
                                   MelnikovForm form, const OscSpec& spec) {
    const auto parts = D0_parts_grid(theta0, eps, spec);
    std::vector<double> out;
    out.reserve(parts.size());
    for (const auto& p : parts) out.push_back(D0_from_parts(p, eps, form));
    return out;
}

// ---------------------------------------------------------------------------------------

std::string to_string(ElementaryKind k) {
    switch (k) {
        case ElementaryKind::I1_odd: return "I1_odd";
        case ElementaryKind::I2_odd: return "I2_odd";
        case ElementaryKind::I1_even: return "I1_even";
        case ElementaryKind::I2_even: return "I2_even";
        case ElementaryKind::J_odd: return "J_odd";
        case ElementaryKind::J_even: return "J_even";
    }
    return "?";
}

bool is_odd_family(ElementaryKind k) {
    return k == ElementaryKind::I1_odd || k == ElementaryKind::I2_odd || k == ElementaryKind::J_odd;
}

bool in_delta(ElementaryKind k, int n, int m) {
    if (m < 0 || n < 0) return false;
    if (is_odd_family(k)) return m == 0 ? n >= 1 : n >= m;
    return m >= 1 && n >= m;
}

ElementaryShape elementary_shape(ElementaryKind k, int n, int m) {
    switch (k) {
        case ElementaryKind::I1_odd: return {4 * n + 3, 2 * m + 1, 0, 4 * n};
        case ElementaryKind::I2_odd: return {4 * n + 5, 2 * m + 1, 0, 4 * n};
        case ElementaryKind::I1_even: return {4 * n + 1, 2 * m, 0, 4 * n - 2};
        case ElementaryKind::I2_even: return {4 * n + 3, 2 * m, 0, 4 * n - 2};
        case ElementaryKind::J_odd: return {4 * n + 3, 2 * m + 1, 1, 4 * n + 2};
        case ElementaryKind::J_even: return {4 * n + 1, 2 * m, 1, 4 * n};
    }
    return {};
}

std::vector<std::complex<double>> tau_integrals(const std::vector<int>& p, int q, int r,
                                                double eps, const OscSpec& spec) {
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    const OscGrid g = oscillatory_grid(eps, spec);
    std::vector<NeumaierSum<double>> re(p.size()), im(p.size());
    for (std::size_t i = 0; i < g.tau.size(); ++i) {
        const double t = g.tau[i];
        const double a = homoclinic_a(t);
        const double b = -a * std::tanh(t);
        const double ph = q * homoclinic_psi(t, eps);
        const double br = ipow(b, r);
        // integrand at -tau: b^r -> (-1)^r b^r, psi -> -psi
        const double cr = std::cos(ph), sr = std::sin(ph);
        const double re_fac = (r % 2 == 0) ? 2.0 * cr : 0.0;
        const double im_fac = (r % 2 == 0) ? 0.0 : 2.0 * sr;
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double base = ipow(a, p[j]) * br * g.weight[i];
            re[j].add(base * re_fac);
            im[j].add(base * im_fac);
        }
    }
    std::vector<std::complex<double>> out;
    for (std::size_t j = 0; j < p.size(); ++j) out.emplace_back(re[j].value(), im[j].value());
    return out;
}

double elementary_integral(ElementaryKind kind, int n, int m, double eps, const OscSpec& spec) {
    if (!in_delta(kind, n, m)) throw IndexError("(n, m) outside the admissible index set");
    const ElementaryShape s = elementary_shape(kind, n, m);
    const auto v = tau_integrals({s.p}, s.q, s.r, eps, spec).front();
    // I-kinds keep the cosine (real) part, J-kinds the sine (imaginary) part
    const double raw = s.r == 0 ? v.real() : v.imag();
    return std::pow(eps, s.eps_power) * raw;
}

// ---------------------------------------------------------------------------------------

Rational binom_rational(const Rational& alpha, long n) {
    if (n < 0) return Rational(0);
    Rational r(1);
    for (long i = 0; i < n; ++i) r = r * (alpha - i) / (i + 1);
    return r;
}

namespace {

Rational bq(long num, long den, long n) { return binom_rational(Rational(num, den), n); }
Rational bi(long top, long n) { return binom_rational(Rational(top), n); }

}  // namespace

SeriesCoefficients series_coefficients(int m, int k, int l, CoefficientSet set) {
    if (m < 0 || l < 0 || k < std::max(m, 1))
        throw IndexError("series coefficient index outside k >= max(m, 1), l >= 0");
    const bool printed = set == CoefficientSet::printed;
    const Rational d1(2), d2(3, 2);
    SeriesCoefficients out;

    // odd harmonic 2m+1
    Rational C;
    if (m == 0 && printed)
        C = bq(-3, 2, 2 * k) * (2 * bi(2 * k, k) - bi(2 * k, k - 1)) * bq(-4 * k - 3, 2, l);
    else
        C = bq(-3, 2, 2 * k) * (bi(2 * k, k - m) - bi(2 * k, k - m - 1)) * bq(-4 * k - 3, 2, l);
    if (m == 0 && l == 0) C += bq(-3, 2, k);
    out.C1 = d1 * C;
    out.C2 = d2 * C;

    Rational cC;
    if (printed)
        cC = -bi(2 * k + 1, k - m) * (Rational(1, 2) * bq(-3, 2, 2 * k) * bq(-4 * k - 3, 2, l) -
                                      bq(-3, 2, 2 * k + 1) * bq(-4 * k - 5, 2, l));
    else
        cC = -2 * bi(2 * k + 1, k - m) *
             (Rational(1, 2) * bq(-3, 2, 2 * k) * bq(-4 * k - 3, 2, l) +
              bq(-3, 2, 2 * k + 1) * bq(-4 * k - 5, 2, l));
    if (m == 0 && l == 0) cC += -bq(-3, 2, k) + 3 * bq(-5, 2, k);
    out.calC = cC;

    if (m >= 1) {
        const Rational E = bq(-3, 2, 2 * k - 1) * (bi(2 * k - 1, k - m) - bi(2 * k - 1, k - m - 1)) *
                           bq(-4 * k - 1, 2, l);
        out.E1 = d1 * E;
        out.E2 = d2 * E;
        Rational cE;
        if (printed)
            cE = bi(2 * k, k - m) * (Rational(1, 2) * bq(-3, 2, 2 * k - 1) * bq(-4 * k - 1, 2, l) -
                                     bq(-3, 2, 2 * k) * bq(-4 * k - 3, 2, l));
        else
            cE = 2 * bi(2 * k, k - m) *
                 (Rational(1, 2) * bq(-3, 2, 2 * k - 1) * bq(-4 * k - 1, 2, l) +
                  bq(-3, 2, 2 * k) * bq(-4 * k - 3, 2, l));
        out.calE = cE;
    }
    return out;
}

// ---------------------------------------------------------------------------------------

double FourierTable::evaluate(double theta0) const {
    NeumaierSum<double> s;
    for (std::size_t m = 0; m < odd.size(); ++m) s.add(odd[m] * std::sin((2.0 * m + 1.0) * theta0));
    for (std::size_t m = 0; m < even.size(); ++m) s.add(even[m] * std::sin(2.0 * (m + 1.0) * theta0));
    return s.value();
}

double FourierTable::tail_estimate() const {
    double t = 0.0;
    for (double v : odd_tail) t += v;
    for (double v : even_tail) t += v;
    // harmonics beyond M: geometric continuation of the last two magnitudes of each family
    auto harmonic_rest = [](const std::vector<double>& c) {
        const std::size_t n = c.size();
        if (n < 2) return n == 1 ? std::fabs(c[0]) : 0.0;
        const double last = std::fabs(c[n - 1]), prev = std::fabs(c[n - 2]);
        const double r = prev > 0.0 ? last / prev : 1.0;
        return r < 0.9 ? last * r / (1.0 - r) : 10.0 * last;
    };
    return t + harmonic_rest(odd) + harmonic_rest(even);
}

DiagonalCoefficients diagonal_coefficients(int m, int n, CoefficientSet set) {
    if (m < 0 || n < 0) throw IndexError("diagonal index must be non-negative");
    DiagonalCoefficients d;
    for (int k = std::max(m, 1); k <= n; ++k) {
        const SeriesCoefficients c = series_coefficients(m, k, n - k, set);
        d.C1 += *c.C1;
        d.C2 += *c.C2;
        d.calC += *c.calC;
        if (m >= 1) {
            d.E1 += *c.E1;
            d.E2 += *c.E2;
            d.calE += *c.calE;
        }
    }
    return d;
}

namespace {

// Geometric remainder estimate from the last terms of a series.
double remainder_estimate(const std::vector<double>& terms) {
    const std::size_t n = terms.size();
    if (n == 0) return 0.0;
    const double last = std::fabs(terms[n - 1]);
    if (n < 3) return last;
    double r = 0.0;
    for (std::size_t i = n - 2; i < n; ++i) {
        const double prev = std::fabs(terms[i - 1]);
        if (prev > 0.0) r = std::max(r, std::fabs(terms[i]) / prev);
    }
    if (r >= 0.9) return 10.0 * last + std::fabs(terms[n - 2]);
    return last * r / (1.0 - r);
}

}  // namespace

FourierTable fourier_series_D0(double eps, const Truncation& trunc, MelnikovForm form,
                               CoefficientSet set, const ElementaryProvider& provider) {
    check_eps(eps);
    if (trunc.M < 0 || trunc.N < 1) throw DomainError("invalid truncation");
    ElementaryProvider elem = provider;
    // Cache tau-domain integrals: one batch per (q, r) family.
    std::map<std::tuple<int, int, int>, double> cache;
    if (!elem) {
        for (int q = 1; q <= 2 * trunc.M + 1; ++q) {
            for (int r = 0; r <= 1; ++r) {
                std::vector<int> ps;
                for (int p = 1; p <= 4 * trunc.N + 5; p += 2) ps.push_back(p);
                const auto vals = tau_integrals(ps, q, r, eps);
                for (std::size_t j = 0; j < ps.size(); ++j)
                    cache[{ps[j], q, r}] = r == 0 ? vals[j].real() : vals[j].imag();
            }
        }
        elem = [&cache](ElementaryKind kind, int n, int m, double e) {
            const ElementaryShape s = elementary_shape(kind, n, m);
            return std::pow(e, s.eps_power) * cache.at({s.p, s.q, s.r});
        };
    }

    const double e15 = eps * std::sqrt(eps), e35 = e15 * eps * eps;
    const double cI = form == MelnikovForm::printed ? -std::sqrt(2.0) / (2.0 * e15)
                                                    : std::sqrt(2.0) / (4.0 * e15);
    const double cJ = form == MelnikovForm::printed ? 1.0 / (2.0 * e35) : -1.0 / (2.0 * e35);

    FourierTable tab;
    tab.truncation = trunc;
    tab.eps = eps;
    tab.form = form;
    tab.set = set;
    for (int m = 0; m <= trunc.M; ++m) {
        for (int parity = 0; parity < 2; ++parity) {
            const bool odd = parity == 0;
            if (!odd && m == 0) continue;
            std::vector<double> terms;
            for (int n = std::max(m, 1); n <= trunc.N; ++n) {
                const DiagonalCoefficients c = diagonal_coefficients(m, n, set);
                double term;
                if (odd) {
                    const double C1 = c.C1.convert_to<double>();
                    const double C2 = c.C2.convert_to<double>();
                    const double I2 = elem(ElementaryKind::I2_odd, n, m, eps);
                    double Iterm = -(C2 / 1.5) * I2;
                    if (form == MelnikovForm::printed)
                        Iterm = -C1 * elem(ElementaryKind::I1_odd, n, m, eps) + C2 * I2;
                    term = cI * Iterm +
                           cJ * c.calC.convert_to<double>() * elem(ElementaryKind::J_odd, n, m, eps);
                } else {
                    const double E1 = c.E1.convert_to<double>();
                    const double E2 = c.E2.convert_to<double>();
                    const double I2 = elem(ElementaryKind::I2_even, n, m, eps);
                    double Iterm = (E2 / 1.5) * I2;
                    if (form == MelnikovForm::printed)
                        Iterm = E1 * elem(ElementaryKind::I1_even, n, m, eps) - E2 * I2;
                    term = cI * Iterm +
                           cJ * c.calE.convert_to<double>() * elem(ElementaryKind::J_even, n, m, eps);
                }
                terms.push_back(term);
            }
            NeumaierSum<double> sum;
            for (double t : terms) sum.add(t);
            (odd ? tab.odd : tab.even).push_back(sum.value());
            (odd ? tab.odd_tail : tab.even_tail).push_back(remainder_estimate(terms));
        }
    }
    return tab;
}

double r1_inv_cubed_series(double tau, double theta0, double eps, int trunc, CoefficientSet set) {
    const double a = homoclinic_a(tau);
    const double w = eps * eps * a * a;
    const double phi = theta0 + (eps > 0.0 ? homoclinic_psi(tau, eps) : 0.0);
    const double s = 1.0 + w * w;
    const double zero_weight = set == CoefficientSet::printed ? 2.0 : 1.0;
    NeumaierSum<double> acc;
    acc.add(std::pow(s, -1.5));
    for (int k = 0; k <= trunc; ++k) {
        if (k >= 1) {
            const double pre = binom_rational(Rational(-3, 2), 2 * k).convert_to<double>() *
                               std::pow(w, 2 * k) / std::pow(s, 2 * k + 1.5);
            double inner = zero_weight * bi(2 * k, k).convert_to<double>();
            for (int m = 1; m <= k; ++m)
                inner += 2.0 * bi(2 * k, k - m).convert_to<double>() * std::cos(2.0 * m * phi);
            acc.add(pre * inner);
        }
        const double pre = binom_rational(Rational(-3, 2), 2 * k + 1).convert_to<double>() *
                           std::pow(w, 2 * k + 1) / std::pow(s, 2 * k + 2.5);
        double inner = 0.0;
        for (int m = 0; m <= k; ++m)
            inner += 2.0 * bi(2 * k + 1, k - m).convert_to<double>() * std::cos((2.0 * m + 1.0) * phi);
        acc.add(-pre * inner);
    }
    return acc.value();
}

}  // namespace rtbp
