#pragma once

#include "skyrmion/domain.hpp"
#include "skyrmion/minimizer.hpp"
#include "skyrmion/tail_solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace skyrmion {

enum class Mode { minimize, tail, predict, sweep, validate, free_boundary };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view name);

/// Grid spacings and parameters of the acceptance suite run by validate mode.
struct SuiteOptions {
  /// coarsest spacing of the three-level disk tail extrapolation
  double disk_tail_h = 1.0 / 128;
  double strip_h = 1.0 / 256;
  double strip_length = 8.0;
  /// coarsest spacing of the route comparison
  double route_h = 1.0 / 64;
  int route_levels = 3;
  double sweep_h = 1.0 / 512;
  std::vector<double> sweep_kappas{0.2, 0.1, 0.05};
  double anisotropy_h = 1.0 / 1024;
  double anisotropy_kappa = 0.05;
  double free_boundary_h = 1.0 / 256;
  double free_boundary_kappa = 0.1;
  /// spacing of the random fields in the property checks
  double property_h = 1.0 / 32;
  int random_fields = 10;
  /// criteria to run (1..9); empty runs all of them
  std::vector<int> criteria;
};

struct OutputOptions {
  std::filesystem::path directory = "out";
  /// per-κ field snapshots (CSV)
  bool fields = false;
  /// per-κ iteration logs
  bool telemetry = false;
  /// tail solutions on the finest grid (CSV)
  bool tail_grids = false;
};

struct ExperimentConfig {
  Mode mode = Mode::validate;
  DomainSpec domain = DomainSpec::disk(1.0);
  double h = 1.0 / 256;
  std::vector<double> kappas{0.1};
  double lambda = 0.0;
  BoundaryMode boundary = BoundaryMode::pinned;
  /// seed a minimization from predict_skyrmion instead of the in-radius guess
  bool use_prediction = false;
  SolverOptions solver;
  /// tail centers; empty means the domain's incenter
  std::vector<Vec2> tail_centers;
  int tail_levels = 3;
  double tail_tolerance = 1e-10;
  ArgminOptions argmin;
  SuiteOptions suite;
  OutputOptions outputs;
  int workers = 1;
  std::uint64_t seed = 20240917;

  /// Checks the invariants: kappas nonempty and positive, h divides the
  /// bounding box, option ranges. Throws ConfigError naming the key.
  void validate() const;

  /// Canonical form; parse_config(to_json().dump()) reproduces the config.
  nlohmann::json to_json() const;
  /// FNV-1a over the canonical dump, 16 hex digits.
  std::string hash() const;
};

/// Parses a JSON config; unspecified keys keep their defaults. Syntax errors
/// report line and column, semantic errors the dotted key.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path &path);

nlohmann::json domain_to_json(const DomainSpec &domain);
DomainSpec domain_from_json(const nlohmann::json &j, const std::string &key = "domain");

std::uint64_t fnv1a(std::string_view bytes);

} // namespace skyrmion
