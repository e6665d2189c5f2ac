#pragma once

#include "skyrmion/config.hpp"
#include "skyrmion/validation.hpp"

#include <atomic>
#include <exception>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace skyrmion {

/// Runs f(0..n-1) on up to `workers` threads; results come back in index
/// order. The first exception (by index) is rethrown after all tasks finish.
template <class F> auto parallel_map(std::size_t n, int workers, F f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back(work);
    }
  }
  std::vector<R> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) {
      std::rethrow_exception(errors[i]);
    }
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

/// Long-format result table: one number per row, each with its provenance.
class ResultTable {
public:
  struct Row {
    std::string mode;
    std::string label;
    std::optional<double> kappa;
    std::string quantity;
    double value = 0.0;
    Provenance provenance = Provenance::solver;
  };

  void add(std::string mode, std::string label, std::optional<double> kappa, std::string quantity, double value,
           Provenance provenance);
  const std::vector<Row> &rows() const { return rows_; }

  /// mode,case,kappa,quantity,value,provenance with 17 significant digits
  void write_csv(std::ostream &out) const;

private:
  std::vector<Row> rows_;
};

/// One row of the limit comparison: fitted quantities at κ against the
/// predicted limit.
struct RouteRow {
  double kappa = 0.0;
  double rho_over_kappa = 0.0;
  Vec2 center;
  double helicity = 0.0;
  double tilt = 0.0;
  double gap = 0.0;
  double predicted_r0 = 0.0;
  Vec2 predicted_center;
  double predicted_energy = 0.0;
  /// |ρ/κ - r0| / r0
  double radius_deviation = 0.0;
  /// |gap - 𝓔₀| / |𝓔₀|
  double energy_deviation = 0.0;
  /// |a - a0*|
  double center_deviation = 0.0;
};

struct RouteComparison {
  std::vector<RouteRow> rows;
  ValidationReport report;
  ResultTable table;
};

/// Tabulates a finished sweep against the prediction and checks the trends:
/// negative gaps, shrinking radius deviation, center/helicity/tilt bounds at
/// the smallest κ.
RouteComparison compare_routes(const ExperimentConfig &config, const std::vector<SweepPoint> &sweep,
                               const SkyrmionPrediction &prediction);
/// Runs the sweep described by the config first.
RouteComparison compare_routes(const ExperimentConfig &config);

struct RunOptions {
  /// overrides config.workers when set
  std::optional<int> workers;
  /// overrides config.outputs.directory when set
  std::optional<std::filesystem::path> output_directory;
  int verbosity = 0;
  /// progress messages; null for silence
  std::ostream *log = nullptr;
};

struct RunOutcome {
  int exit_code = 0;
  std::vector<std::filesystem::path> artifacts;
  /// validate mode only
  std::optional<ValidationReport> report;
  /// the main JSON artifact
  nlohmann::json summary;
};

/// Dispatches on config.mode and writes results.csv, results.json (and
/// mode-specific files) into the output directory. In validate mode the exit
/// code is 0 iff every check passes; the other modes return 0 on completion.
RunOutcome run(const ExperimentConfig &config, const RunOptions &options = {});

} // namespace skyrmion
