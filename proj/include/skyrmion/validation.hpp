#pragma once

#include "skyrmion/config.hpp"
#include "skyrmion/minimizer.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace skyrmion {

/// Where a number comes from: a closed-form expression, a numerical solve, or
/// a profile fit.
enum class Provenance { formula, solver, fit };
std::string_view to_string(Provenance p);

enum class Comparison {
  /// |measured - predicted| ≤ tolerance·|predicted|
  relative,
  /// |measured - predicted| ≤ tolerance
  absolute,
  /// measured ≤ tolerance (predicted unused)
  at_most,
  /// measured < predicted (tolerance unused)
  less_than,
  /// measured is 1 (predicted 1, tolerance 0)
  holds
};

struct CheckRecord {
  int criterion = 0;
  std::string name;
  double predicted = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::relative;
  bool pass = false;
  Provenance provenance = Provenance::solver;
  Provenance predicted_provenance = Provenance::formula;
  /// wall-clock checks; the measured value is kept out of artifacts
  bool timing = false;
  std::string detail;
};

CheckRecord check_relative(int criterion, std::string name, double predicted, double measured, double tol,
                           Provenance p = Provenance::solver);
CheckRecord check_absolute(int criterion, std::string name, double predicted, double measured, double tol,
                           Provenance p = Provenance::solver);
CheckRecord check_at_most(int criterion, std::string name, double measured, double bound,
                          Provenance p = Provenance::solver);
CheckRecord check_less(int criterion, std::string name, double measured, double bound,
                       Provenance p = Provenance::solver);
CheckRecord check_holds(int criterion, std::string name, bool ok, std::string detail = {},
                        Provenance p = Provenance::solver);
CheckRecord check_runtime(int criterion, std::string name, double seconds, double budget);

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<CheckRecord> records;
  /// set when the criterion aborted with an exception
  std::string error;
  double seconds = 0.0;

  bool passed() const;
};

struct ValidationReport {
  std::vector<CheckRecord> records;
  std::vector<CriterionResult> criteria;
  std::string config_hash;
  std::uint64_t seed = 0;

  /// true iff every record passes and no criterion aborted
  bool passed() const;
  void add(CriterionResult c);

  nlohmann::json to_json() const;
  /// criterion,name,comparison,predicted,measured,tolerance,pass,provenance
  void write_csv(std::ostream &out) const;
};

/// 17 significant digits, the artifact number format.
std::string format_number(double v);

/// The nine acceptance criteria. Each criterion is independent except that
/// criterion 8's degree check also covers the minimizers produced by the
/// criteria that ran before it.
class AcceptanceSuite {
public:
  AcceptanceSuite(SuiteOptions options, SolverOptions solver, std::uint64_t seed);

  static const std::vector<std::string> &titles();

  CriterionResult run(int id);
  /// Runs options.criteria (all when empty) with 8 last; results sorted by id.
  ValidationReport run_all(const std::function<void(const CriterionResult &)> &progress = {});

  const SuiteOptions &options() const { return options_; }

private:
  void tail_disk(CriterionResult &r);
  void tail_strip(CriterionResult &r);
  void route_agreement(CriterionResult &r);
  void sweep_radius(CriterionResult &r);
  void sweep_energy(CriterionResult &r);
  void sweep_center(CriterionResult &r);
  void anisotropy(CriterionResult &r);
  void properties(CriterionResult &r);
  void free_boundary(CriterionResult &r);

  const std::vector<SweepPoint> &sweep();

  SuiteOptions options_;
  SolverOptions solver_;
  std::uint64_t seed_;
  std::optional<std::vector<SweepPoint>> sweep_;
  double sweep_seconds_ = 0.0;
  /// (label, degree) of every minimizer computed so far
  std::vector<std::pair<std::string, DegreeReport>> minimizer_degrees_;
};

/// Smooth random field on the grid that equals -e3 within a band of the
/// boundary (continuous at ∂Ω), seeded.
SpinField random_admissible_field(std::shared_ptr<const Grid> grid, std::uint64_t seed,
                                  BoundaryMode mode = BoundaryMode::pinned);

/// Relative error between ⟨∇E, d⟩ and a centered difference quotient of E
/// along a random tangent direction d.
double gradient_fd_error(const SpinField &field, double kappa, double lambda, std::uint64_t seed);

} // namespace skyrmion
