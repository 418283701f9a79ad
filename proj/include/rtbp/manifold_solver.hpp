#pragma once

#include <memory>
#include <vector>

#include "rtbp/core_model.hpp"
#include "rtbp/homoclinic_frame.hpp"
#include "rtbp/numerics.hpp"

namespace rtbp {

enum class Branch { stable, unstable };
enum class Seed { zero, explicit_first };

struct SolverSpec {
    double tol = 1e-12;
    int max_iter = 60;
    int nodes_per_panel = 12;
    double dphi = 0.5;        // psi-phase per panel
    double max_width = 0.125;
    double sigma = 0.05;      // width of the erfc taper on the tail integral
    double window_k = 12.0;   // taper sits where |psi'| sigma >= window_k
    double extra_tail = 0.0;  // push the taper further out (tau units)
    Seed seed = Seed::zero;
    bool check_domain = true;
    ModelLimits limits{};
};

// Collocation grid on |tau| in [0, T]: Gauss-Legendre panels bounded by psi-phase steps.
struct SolverGrid {
    double eps = 0.0;
    int nodes_per_panel = 0;
    std::vector<double> s;          // |tau| at the nodes, increasing
    std::vector<double> panel_lo;   // panel left ends
    std::vector<double> panel_hw;   // panel half widths
    std::vector<FrameSample> frame;      // frame at +s
    std::vector<FrameSample> frame_neg;  // frame at -s
    std::vector<double> window;     // taper for the integral to +infinity
    std::vector<double> ref_cumint; // n x n reference integration matrix on [-1, 1]
    std::vector<double> ref_weight; // Gauss weights on [-1, 1]
    double taper_centre = 0.0;

    std::size_t size() const { return s.size(); }
    // cumulative integral from 0 to s_i of samples g_i
    std::vector<double> cumulative(const std::vector<double>& g) const;
    double total(const std::vector<double>& g) const;
};

std::shared_ptr<const SolverGrid> make_solver_grid(double eps, const SolverSpec& spec = {});

struct ScaledTrajectory {
    Branch branch = Branch::stable;
    std::shared_ptr<const SolverGrid> grid;
    std::vector<double> tau;  // signed: [0, T] (stable) or [-T, 0] (unstable)
    std::vector<double> mM;
    std::vector<double> mW;
    std::vector<double> Theta;
    ParamSet params;
    double mM0 = 0.0;         // scaled M at tau = 0 (the grid has no node there)
    double tail_bound = 0.0;  // bound on the truncated part of the M(0) integral (scaled)
};

struct IterationReport {
    std::vector<double> residuals;           // weighted-norm deltas per iteration
    std::vector<double> contraction_ratios;  // successive quotients
    bool converged = false;
    int iterations = 0;

    // Largest successive quotient while both deltas sit above the roundoff floor.
    double empirical_ratio(double floor = 1e-10) const;
};

// sup|dM| + sup|dW| + sup a^3 |dTheta|
double weighted_norm_delta(const ScaledTrajectory& u, const ScaledTrajectory& v);

ScaledTrajectory zero_trajectory(const ParamSet& p, Branch branch, const SolverSpec& spec = {});
// The explicit first approximation (M0, W0) with Theta = 0.
ScaledTrajectory explicit_seed(const ParamSet& p, Branch branch, const SolverSpec& spec = {});

ScaledTrajectory picard_step(const ScaledTrajectory& current, const ParamSet& p,
                             const SolverSpec& spec = {});

struct SolveResult {
    ScaledTrajectory trajectory;
    IterationReport report;
};

SolveResult solve_branch(const ParamSet& p, Branch branch, const SolverSpec& spec = {});
SolveResult solve_stable(const ParamSet& p, double tol = 1e-12, int max_iter = 60,
                         SolverSpec spec = {});
SolveResult solve_unstable(const ParamSet& p, double tol = 1e-12, int max_iter = 60,
                           SolverSpec spec = {});

// X0 = a(0) + (1/sqrt2) int_0^inf (b'P - bQ) from a converged stable solution.
double matching_X0(const ScaledTrajectory& stable);

// D = (M^s(0) - M^u(0)) / rho in the scaled variables; rho = 0 gives the first-order limit.
double splitting_distance(const ParamSet& p, const SolverSpec& spec = {});
// First-order splitting (rho -> 0) from rho-derivatives of the exact P, Q at the homoclinic.
double splitting_first_order(double theta0, double eps, const SolverSpec& spec = {});

struct HomoclinicRoot {
    double theta0 = 0.0;
    double derivative = 0.0;
    int iterations = 0;
};

HomoclinicRoot find_homoclinic(double rho, double eps, double lo, double hi,
                               const SolverSpec& spec = {}, double tol = 1e-12);

}  // namespace rtbp
