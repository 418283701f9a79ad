#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rtbp/numerics.hpp"

namespace rtbp {

using Rational = boost::multiprecision::cpp_rational;

// D0 written as in the split form -(sqrt2/(2 eps^1.5)) I + (1/(2 eps^3.5)) J ("printed"), or
// with the sign of the bQ term fixed: (sqrt2/(4 eps^1.5)) int a^5 sin(th0+psi)(1-R1^-3)
// - (1/(2 eps^3.5)) J ("corrected"). Only the corrected form is the first-order splitting.
enum class MelnikovForm { corrected, printed };

// Closed-form coefficient families: "derived" from the binomial expansion of R1^-3,
// "printed" reproduces the displayed rationals (m = 0 cosine weight doubled, calC/calE
// bracket sign flipped and factor 2 dropped).
enum class CoefficientSet { derived, printed };

double R1(double tau, double theta0, double eps);

struct D0Parts {
    double I = 0.0;   // int (2a^3 - 3a^5/2) sin(th0+psi)(1-R1^-3)
    double I5 = 0.0;  // int a^5 sin(th0+psi)(1-R1^-3)
    double J = 0.0;   // int ab[eps^2 a^2 cos(th0+psi)(2+R1^-3) + 1 - R1^-3]
};

D0Parts D0_parts(double theta0, double eps, const OscSpec& spec = {});
double D0_from_parts(const D0Parts& parts, double eps, MelnikovForm form);
double D0_direct(double theta0, double eps, MelnikovForm form = MelnikovForm::corrected,
                 const OscSpec& spec = {});
// One pass over the quadrature nodes for a whole theta0 grid.
std::vector<D0Parts> D0_parts_grid(const std::vector<double>& theta0, double eps,
                                   const OscSpec& spec = {});
std::vector<double> D0_direct_grid(const std::vector<double>& theta0, double eps,
                                   MelnikovForm form = MelnikovForm::corrected,
                                   const OscSpec& spec = {});

// -- elementary integrals ------------------------------------------------------------
enum class ElementaryKind { I1_odd, I2_odd, I1_even, I2_even, J_odd, J_even };

struct ElementaryIntegral {
    ElementaryKind kind = ElementaryKind::I1_odd;
    int n = 0;
    int m = 0;
    double value = 0.0;
};

std::string to_string(ElementaryKind k);
bool is_odd_family(ElementaryKind k);
// (n, m) in Delta_odd = {m = 0, n >= 1} U {m >= 1, n >= m}, Delta_even = {m >= 1, n >= m}.
bool in_delta(ElementaryKind k, int n, int m);
// Exponents: integrand eps^w a^p b^r trig(q psi).
struct ElementaryShape {
    int p = 0, q = 0, r = 0;
    int eps_power = 0;
};
ElementaryShape elementary_shape(ElementaryKind k, int n, int m);

// tau-domain quadrature of the eps-weighted integral; IndexError outside Delta.
double elementary_integral(ElementaryKind kind, int n, int m, double eps,
                           const OscSpec& spec = {});
// Batch: all integrals of int a^p b^r e^{i q psi} for one (q, r) and a list of p.
std::vector<std::complex<double>> tau_integrals(const std::vector<int>& p, int q, int r,
                                                double eps, const OscSpec& spec = {});

// -- exact coefficients --------------------------------------------------------------
Rational binom_rational(const Rational& alpha, long n);

struct SeriesCoefficients {
    std::optional<Rational> C1, C2, calC;  // odd family (harmonic 2m+1)
    std::optional<Rational> E1, E2, calE;  // even family (harmonic 2m), m >= 1
};

// Requires m >= 0, l >= 0, k >= max(m, 1); the even family is present for m >= 1.
SeriesCoefficients series_coefficients(int m, int k, int l,
                                       CoefficientSet set = CoefficientSet::derived);

// -- Fourier table of D0 ---------------------------------------------------------------
// Harmonics m <= M; (k, l) summed along complete diagonals k + l = n <= N. The double series
// is not absolutely convergent near tau = 0 for eps close to 1/2, so a (k, l) box diverges
// there while the diagonal (Taylor-in-eps^2 a^2) ordering converges.
struct Truncation {
    int M = 6;
    int N = 16;
};

// Exact sums over k + l = n: coefficients of the n-th diagonal for harmonic m.
struct DiagonalCoefficients {
    Rational C1, C2, calC;  // odd family
    Rational E1, E2, calE;  // even family (zero for m = 0)
};
DiagonalCoefficients diagonal_coefficients(int m, int n, CoefficientSet set);

using ElementaryProvider = std::function<double(ElementaryKind, int n, int m, double eps)>;

struct FourierTable {
    std::vector<double> odd;   // sin((2m+1) th0), m = 0..M
    std::vector<double> even;  // sin(2m th0), m = 1..M (index m-1)
    std::vector<double> odd_tail;   // remainder estimate beyond n = N, per harmonic
    std::vector<double> even_tail;
    Truncation truncation;
    double eps = 0.0;
    MelnikovForm form = MelnikovForm::corrected;
    CoefficientSet set = CoefficientSet::derived;

    double evaluate(double theta0) const;
    // Sup-norm bound for the discarded diagonals plus harmonics beyond M (geometric in m).
    double tail_estimate() const;
};

FourierTable fourier_series_D0(double eps, const Truncation& trunc = {},
                               MelnikovForm form = MelnikovForm::corrected,
                               CoefficientSet set = CoefficientSet::derived,
                               const ElementaryProvider& provider = {});

// Partial sums of the double series of R1^-3 in (k, m), k <= trunc.
double r1_inv_cubed_series(double tau, double theta0, double eps, int trunc,
                           CoefficientSet set = CoefficientSet::derived);

}  // namespace rtbp
