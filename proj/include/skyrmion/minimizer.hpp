#pragma once

#include "skyrmion/bp_profiles.hpp"
#include "skyrmion/energy.hpp"
#include "skyrmion/tail_solver.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace skyrmion {

enum class StepRule { fixed, armijo_backtracking };
enum class Direction { lbfgs, steepest };

struct SolverOptions {
  long max_iterations = 200000;
  /// Stop once max_x |grad E(x)| / h² falls below this; unset means 1e-6·8π/h.
  std::optional<double> grad_tolerance;
  StepRule step_rule = StepRule::armijo_backtracking;
  double initial_step = 1.0;
  long degree_check_every = 50;
  Direction direction = Direction::lbfgs;
  /// L-BFGS history length
  int memory = 8;
  /// multigrid Laplacian as the initial inverse Hessian (else identity)
  bool precondition = true;
  double armijo_c = 1e-4;
  int max_backtracks = 50;
  /// per-iteration CSV (iteration,energy,grad_norm,degree,step); empty for none
  std::filesystem::path telemetry;

  void validate() const;
  double tolerance_for(double h) const;
};

enum class StopReason { converged, max_iterations, stagnated };

struct MinimizeResult {
  SpinField field;
  EnergyBreakdown breakdown;
  long iterations = 0;
  long accepted_steps = 0;
  bool converged = false;
  StopReason reason = StopReason::max_iterations;
  std::vector<double> degree_history;
  /// (E - 8π)/κ²
  double gap = 0.0;
  /// final max_x |grad E(x)| / h²
  double grad_norm = 0.0;
};

/// Largest pointwise Riemannian gradient divided by h².
double gradient_density_norm(const VectorField &tangent_gradient);

struct InitialGuess {
  SpinField field;
  Vec2 center;
  double rho = 0.0;
  double L = 0.0;
};

/// Truncated Néel profile: ρ = κ r0 from the prediction when given, else the
/// in-radius estimate; L = min(dist/(2ρ), 1/(κ dist)).
InitialGuess initial_guess(std::shared_ptr<const Grid> grid, double kappa, double lambda,
                           const std::optional<SkyrmionPrediction> &prediction = std::nullopt,
                           BoundaryMode mode = BoundaryMode::pinned);

MinimizeResult minimize(const SpinField &field0, double kappa, double lambda, const SolverOptions &options);

struct SweepPoint {
  double kappa = 0.0;
  MinimizeResult result;
  FitReport fit;
};

/// Continuation over descending κ; each point starts from the previous
/// minimizer dilated about its fitted center by κ_new/κ_old.
std::vector<SweepPoint> kappa_sweep(std::shared_ptr<const Grid> grid, const std::vector<double> &kappas,
                                    double lambda, const SolverOptions &options,
                                    const std::optional<SkyrmionPrediction> &prediction = std::nullopt);

} // namespace skyrmion
