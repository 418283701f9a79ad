#pragma once

#include <complex>

#include "rtbp/melnikov.hpp"

namespace rtbp {

// Real inverse of 2z = y^3 + 12y.
double y_of_z(double z);

// Contour for z-domain integrals, parametrised in y = t - i c along a horizontal line.
// shifted: c = 2 - delta with delta = min(0.5, 1/sqrt(2 lambda)) approaching the branch
// point z = -8i; direct: fixed c = 1 (no saddle tuning), kept as an independent cross-check.
enum class ZPath { direct, shifted };

struct ZIntegralSpec {
    int p = 1;
    int q = 1;
    int r = 0;
    double eps = 0.4;
    ZPath path = ZPath::shifted;
};

// int a^p b^r e^{i q psi} dtau evaluated through its z-domain representation.
std::complex<double> tau_to_z_value(const ZIntegralSpec& spec);
// Same integral by tau-domain quadrature (reference for the z route).
std::complex<double> tau_domain_value(int p, int q, int r, double eps);

// script_I_{m,n,r}(k) = int e^{-ikz} y^r / ((y+2i)^m (y-2i)^n) dz: Watson leading term and
// quadrature.
std::complex<double> script_I_asymptotic(int m, int n, int r, double k);
std::complex<double> script_I_quadrature(int m, int n, int r, double k,
                                         ZPath path = ZPath::shifted);

// The two model integrals int e^{-i lambda (z^3/3 + z)} / ((z+i)^4 (z-i)^j) dz, computed in
// the original z variable: j = 0 with lambda = 1/eps^3, j = 2 with lambda = 1/(2 eps^3).
std::complex<double> model_integral(int which, double eps);
// Their stated leading terms (4 sqrt(pi)/3) eps^-9/2 e^{-2/(3eps^3)} and
// -(sqrt(2 pi)/12) eps^-9/2 e^{-1/(3eps^3)}.
double model_leading(int which, double eps);
// The same integrals rewritten with script_I: (16/3) I_{5,1,0}(1/(12 eps^3)) and
// (64/3) I_{5,3,0}(1/(24 eps^3)).
std::complex<double> model_via_script_I(int which, double eps, bool asymptotic);

// Leading term of an elementary integral from the z-form and script_I_asymptotic.
double elementary_asymptotic(ElementaryKind kind, int n, int m, double eps);
// Elementary integral via the z route (usable where tau quadrature loses all digits).
double elementary_z(ElementaryKind kind, int n, int m, double eps, ZPath path = ZPath::shifted);

// Candidate constants K in D0(theta0) ~ K sqrt(pi/2) eps^-5 e^{-1/(3eps^3)} sin(theta0).
enum class LeadingConstant {
    printed,                      // -37/20: printed coefficients in the printed form
    printed_form_derived_coeffs,  // +1/40
    corrected,                    // -1/8: derived coefficients in the corrected form
};

double leading_constant(LeadingConstant which);
// Constant assembled from C_{0,1,0}, calC_{0,1,0} and the leading elementary terms.
Rational assembled_leading_constant(CoefficientSet set, MelnikovForm form);
const char* to_string(LeadingConstant which);

double leading_splitting(double theta0, double eps,
                         LeadingConstant which = LeadingConstant::corrected);

}  // namespace rtbp
