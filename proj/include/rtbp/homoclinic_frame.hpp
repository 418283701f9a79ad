#pragma once

namespace rtbp {

// Unperturbed homoclinic orbit (a, b, psi) of the Duffing system and the frame
// functions h, H, Htilde used by the canonical coordinates (M, W).
struct FrameSample {
    double tau = 0.0;
    double a = 0.0;
    double b = 0.0;
    double bprime = 0.0;  // a - a^3
    double psi = 0.0;
    double h = 0.0;
    double H = 0.0;
    double Htilde = 0.0;
};

FrameSample eval_frame(double tau, double eps);

// Cheap pieces used inside hot loops.
double homoclinic_a(double tau);
double homoclinic_psi(double tau, double eps);
// d psi / d tau = sqrt2 (a - 1/(eps^3 a^3)), written to avoid overflow of a^-3.
double homoclinic_psi_rate(double tau, double eps);

struct MW {
    double M = 0.0;
    double W = 0.0;
};
struct XY {
    double x = 0.0;
    double y = 0.0;
};

constexpr double kFrameFloor = 1e-300;

MW mw_from_xy(double x, double y, const FrameSample& f);
XY xy_from_mw(double M, double W, const FrameSample& f);
// Determinant of the (x,y) -> (M,W) map; identically (b*Htilde - b'*H)/a = 1.
double mw_determinant(const FrameSample& f);

MW scale_mw(double M, double W, const FrameSample& f, double eps);
MW unscale_mw(double mM, double mW, const FrameSample& f, double eps);

}  // namespace rtbp
