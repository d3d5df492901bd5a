#pragma once

// Solvers for u_t = div(m u^(m-1) grad u) + u^alpha on a truncated cube and for
// the rescaled problem w_tau = div(A grad w) + F, with the far field pinned to
// the spatially homogeneous ODE solution.

#include "ndlab/errors.hpp"
#include "ndlab/grid.hpp"
#include "ndlab/perturbation.hpp"
#include "ndlab/profiles.hpp"

#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace ndlab {

enum class Stepper { Fixed, Adaptive };
enum class BoundaryKind { FarFieldOde };
enum class VariableTag { Original, Rescaled };

std::string_view to_string(Stepper s);
std::string_view to_string(VariableTag v);

struct SolverConfig {
    GridSpec grid;
    Stepper stepper = Stepper::Adaptive;
    double dt_initial = 1e-3;
    /// Adaptive steps keep d(sigma) <= cfl_safety (1 + sigma) and
    /// dt <= cfl_safety (t + lambda^(1-alpha)/(1-alpha)).
    double cfl_safety = 0.05;
    double dt_max = std::numeric_limits<double>::infinity();
    double growth = 1.25;
    BoundaryKind boundary = BoundaryKind::FarFieldOde;
    /// Output times: t for solve_original, tau for solve_rescaled.
    std::vector<double> snapshot_times;
    /// Relative slack allowed on the comparison bounds (roundoff of the scheme).
    double bound_slack = 1e-12;
    double cg_tolerance = 1e-12;
    double boundary_threshold = 1e-8;

    void validate() const;
};

/// Per-snapshot record. Norms refer to the deviation field (U or w).
struct SnapshotDiagnostics {
    double time = 0.0;
    double min = 0.0;   ///< of the stored field
    double max = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
    /// min(u) / zeta_c - 1 and 1 - max(u) / zeta_c'; negative means violated.
    double lower_margin = 0.0;
    double upper_margin = 0.0;
    double grad_linf = 0.0;
    double boundary_linf = 0.0;
};

struct StepStatistics {
    long steps = 0;
    long linear_iterations = 0;
    double min_dt = std::numeric_limits<double>::infinity();
    double max_dt = 0.0;
    /// Worst margins seen over every step (not only snapshots).
    double worst_lower_margin = std::numeric_limits<double>::infinity();
    double worst_upper_margin = std::numeric_limits<double>::infinity();
    bool boundary_flagged = false;
};

struct Trajectory {
    ProblemParams params;
    VariableTag tag = VariableTag::Original;
    std::vector<double> times;   ///< includes the initial time 0
    std::vector<GridField> fields;
    std::vector<SnapshotDiagnostics> diagnostics;
    StepStatistics stats;
    double c_low = 0.0;    ///< inf(lambda + phi)
    double c_high = 0.0;   ///< sup(lambda + phi)
    Warnings warnings;
};

double coeff_A(const ProblemParams& p, double tau, double w);
double source_F(const ProblemParams& p, double tau, double w);
/// (A - 1) grad w; the result has grad.size() entries.
std::vector<double> flux_H(const ProblemParams& p, double tau, double w, std::span<const double> grad);
/// int_0^w (A(tau, xi) - 1) d xi, whose gradient is flux_H.
double flux_potential(const ProblemParams& p, double tau, double w);

Trajectory solve_original(const ProblemParams& p, const InitialPerturbation& phi, const SolverConfig& cfg);
Trajectory solve_rescaled(const ProblemParams& p, const InitialPerturbation& phi, const SolverConfig& cfg);

/// Max-norm of the central-difference gradient (one-sided at the edges).
double gradient_linf(const GridField& f);

} // namespace ndlab
