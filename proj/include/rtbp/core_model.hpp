#pragma once

#include <array>

namespace rtbp {

// Mass ratio rho = m2 (m1 = 1 - rho), eps = 1/|J|, phase theta0.
struct ParamSet {
    double rho = 0.0;
    double eps = 0.0;
    double theta0 = 0.0;
};

// Validates eps > 0 and (rho, eps) inside the rectangle D_{eps0}; throws DomainError.
void validate_params(const ParamSet& p, double eps0 = 0.6);

struct PhysicalState {
    double r2 = 0.0;
    double r2dot = 0.0;
    double th2 = 0.0;
    double th2dot = 0.0;
};

struct McGeheeState {
    double u = 0.0;
    double v = 0.0;
    double theta = 0.0;
    double w = 0.0;
};

struct DuffingState {
    double theta = 0.0;
    double X = 0.0;
    double Y = 0.0;
};

struct ModelLimits {
    double collision_floor = 1e-12;
    double x_floor = 1e-6;
    double u_tol = 1e-14;
    int u_max_iter = 100;
    int u_newton_after = 20;
};

// ---- physical (rotating-phase polar) equations --------------------------------
// Returns (r2dot, r2ddot, th2dot, th2ddot).
PhysicalState rtbp_rhs(const PhysicalState& s, const ParamSet& p, double t,
                       const ModelLimits& lim = {});
double jacobi_constant(const PhysicalState& s, const ParamSet& p, double t,
                       const ModelLimits& lim = {});

// ---- coordinate maps -------------------------------------------------------------
McGeheeState mcgehee_from_physical(const PhysicalState& s, double t);
PhysicalState physical_from_mcgehee(const McGeheeState& m, double t);
// McGehee equations in the tau time; returns (du, dv, dtheta, dw)/dtau.
McGeheeState mcgehee_rhs(const McGeheeState& m, const ParamSet& p, const ModelLimits& lim = {});
DuffingState duffing_from_mcgehee(const McGeheeState& m);
McGeheeState mcgehee_from_duffing(const DuffingState& d, double u);
// U = |J| u^{1/2} / X and back; eps = 1/|J|.
double U_from_u(double u, double X, double eps);
double u_from_U(double U, double X, double eps);

// ---- reduced Duffing form --------------------------------------------------------
struct Forces {
    double F = 0.0;
    double G = 0.0;
    double R13 = 1.0;
    double R23 = 1.0;
};

Forces forces_FG(double X, double Y, double theta, double U, const ParamSet& p,
                 const ModelLimits& lim = {});

// Right-hand side of the implicit Jacobi relation for U (a fixed point U = jacobi_U_map(U)).
double jacobi_U_map(double U, double X, double Y, double theta, const ParamSet& p,
                    const ModelLimits& lim = {});
double solve_U(double X, double Y, double theta, const ParamSet& p, const ModelLimits& lim = {});

// (theta', X', Y') of the perturbed Duffing system.
DuffingState duffing_rhs(const DuffingState& s, const ParamSet& p, const ModelLimits& lim = {});

struct SPQ {
    double S = 0.0;
    double P = 0.0;
    double Q = 0.0;
    double U = 1.0;
};

// Exact perturbation terms around the homoclinic orbit at time tau, with
// X = x + a, Y = y + b, theta = Theta + theta0 + psi.
SPQ spq_exact(double x, double y, double Theta, double tau, const ParamSet& p,
              const ModelLimits& lim = {});

// Same, with the frame values already evaluated (a, b, psi at tau).
SPQ spq_exact_at(double x, double y, double Theta, double a, double b, double psi,
                 const ParamSet& p, const ModelLimits& lim = {});

}  // namespace rtbp
