#include "skyrmion/harness.hpp"

#include "skyrmion/bp_profiles.hpp"
#include "skyrmion/errors.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

namespace skyrmion {

using nlohmann::json;

namespace {

struct Context {
  const ExperimentConfig &config;
  std::filesystem::path dir;
  int workers;
  int verbosity;
  std::ostream *log;
  RunOutcome outcome;
  ResultTable table;

  void say(int level, const std::string &msg) const {
    if (log && verbosity >= level) {
      *log << msg << '\n' << std::flush;
    }
  }

  std::string mode() const { return std::string(to_string(config.mode)); }

  std::filesystem::path path(const std::string &name) {
    const auto p = dir / name;
    outcome.artifacts.push_back(p);
    return p;
  }

  void write_json(const std::string &name, const json &j) {
    std::ofstream out(path(name));
    out << j.dump(2) << '\n';
    if (!out) {
      throw Error("cannot write " + (dir / name).string());
    }
  }

  void finish(json summary) {
    summary["config"] = config.to_json();
    summary["config"].erase("outputs");
    summary["config"].erase("workers");
    summary["config_hash"] = config.hash();
    write_json("results.json", summary);
    std::ofstream csv(path("results.csv"));
    table.write_csv(csv);
    outcome.summary = std::move(summary);
  }
};

std::string kappa_tag(double kappa) { return "kappa_" + format_number(kappa); }

json point_json(Vec2 p) { return json::array({p.x, p.y}); }

std::optional<SkyrmionPrediction> maybe_prediction(const ExperimentConfig &c) {
  if (!c.use_prediction) {
    return std::nullopt;
  }
  return predict_skyrmion(c.domain, c.lambda, c.argmin);
}

json prediction_json(const SkyrmionPrediction &p) {
  return {{"a0", point_json(p.center)}, {"r0", p.r0},           {"energy0", p.energy0},
          {"T_min", p.T_min},          {"lambda", p.lambda},   {"helicity", p.helicity},
          {"closed_form", p.closed_form}};
}

void add_prediction_rows(ResultTable &t, const std::string &mode, const SkyrmionPrediction &p) {
  const Provenance pv = p.closed_form ? Provenance::formula : Provenance::solver;
  t.add(mode, "prediction", std::nullopt, "a0_x", p.center.x, pv);
  t.add(mode, "prediction", std::nullopt, "a0_y", p.center.y, pv);
  t.add(mode, "prediction", std::nullopt, "T_min", p.T_min, pv);
  t.add(mode, "prediction", std::nullopt, "r0", p.r0, pv);
  t.add(mode, "prediction", std::nullopt, "energy0", p.energy0, pv);
}

struct KappaRun {
  double kappa = 0.0;
  std::string status;
  std::optional<MinimizeResult> result;
  std::optional<FitReport> fit;
  long jump_iteration = -1;
};

KappaRun minimize_one(Context &ctx, double kappa, BoundaryMode mode,
                      const std::optional<SkyrmionPrediction> &prediction, const std::string &tag) {
  const ExperimentConfig &c = ctx.config;
  KappaRun run;
  run.kappa = kappa;
  auto grid = Grid::make(c.domain, c.h);
  SolverOptions opts = c.solver;
  if (c.outputs.telemetry) {
    opts.telemetry = ctx.dir / ("telemetry_" + tag + ".csv");
  }
  try {
    const InitialGuess guess = initial_guess(grid, kappa, c.lambda, prediction, mode);
    run.result = minimize(guess.field, kappa, c.lambda, opts);
    run.status = run.result->converged ? "converged" : "max_iterations";
    if (run.result->reason == StopReason::stagnated) {
      run.status = "stagnated";
    }
    try {
      run.fit = fit_bp(run.result->field);
    } catch (const FitFailed &e) {
      run.status += "; fit failed: " + std::string(e.what());
    }
  } catch (const DegreeJump &e) {
    run.status = "degree_jump";
    run.jump_iteration = e.iteration();
  } catch (const NoDecrease &e) {
    run.status = std::string("no_decrease: ") + e.what();
  } catch (const GeometryTooTight &e) {
    run.status = std::string("geometry_too_tight: ") + e.what();
  }
  return run;
}

void add_run_rows(ResultTable &t, const std::string &mode, const std::string &label, const KappaRun &r) {
  const double k = r.kappa;
  if (r.jump_iteration >= 0) {
    t.add(mode, label, k, "degree_jump_iteration", static_cast<double>(r.jump_iteration), Provenance::solver);
  }
  if (r.result) {
    const MinimizeResult &m = *r.result;
    t.add(mode, label, k, "energy", m.breakdown.total, Provenance::solver);
    t.add(mode, label, k, "exchange", m.breakdown.exchange, Provenance::solver);
    t.add(mode, label, k, "dmi", m.breakdown.dmi, Provenance::solver);
    t.add(mode, label, k, "anisotropy", m.breakdown.anisotropy, Provenance::solver);
    t.add(mode, label, k, "gap", m.gap, Provenance::solver);
    t.add(mode, label, k, "degree", degree(m.field).value, Provenance::solver);
    t.add(mode, label, k, "grad_norm", m.grad_norm, Provenance::solver);
    t.add(mode, label, k, "iterations", static_cast<double>(m.iterations), Provenance::solver);
    t.add(mode, label, k, "converged", m.converged ? 1.0 : 0.0, Provenance::solver);
  }
  if (r.fit) {
    const FitReport &f = *r.fit;
    t.add(mode, label, k, "rho_over_kappa", rescaled_radius(f, k), Provenance::fit);
    t.add(mode, label, k, "center_x", f.params.center.x, Provenance::fit);
    t.add(mode, label, k, "center_y", f.params.center.y, Provenance::fit);
    t.add(mode, label, k, "helicity", f.helicity_angle, Provenance::fit);
    t.add(mode, label, k, "tilt", f.tilt_angle, Provenance::fit);
    t.add(mode, label, k, "dirichlet_distance", f.dirichlet_distance, Provenance::fit);
    t.add(mode, label, k, "excess", f.excess, Provenance::fit);
  }
}

json run_json(const KappaRun &r) {
  json j{{"kappa", r.kappa}, {"status", r.status}};
  if (r.jump_iteration >= 0) {
    j["degree_jump_iteration"] = r.jump_iteration;
  }
  if (r.result) {
    const MinimizeResult &m = *r.result;
    j["energy"] = {{"total", m.breakdown.total},
                   {"exchange", m.breakdown.exchange},
                   {"dmi", m.breakdown.dmi},
                   {"anisotropy", m.breakdown.anisotropy}};
    j["gap"] = m.gap;
    j["iterations"] = m.iterations;
    j["grad_norm"] = m.grad_norm;
    j["degree"] = degree(m.field).value;
  }
  if (r.fit) {
    const FitReport &f = *r.fit;
    j["fit"] = {{"rho_over_kappa", rescaled_radius(f, r.kappa)},
                {"center", point_json(f.params.center)},
                {"helicity", f.helicity_angle},
                {"tilt", f.tilt_angle},
                {"dirichlet_distance", f.dirichlet_distance},
                {"excess", f.excess}};
  }
  return j;
}

void run_minimize(Context &ctx) {
  const ExperimentConfig &c = ctx.config;
  const auto prediction = maybe_prediction(c);
  const auto runs = parallel_map(c.kappas.size(), ctx.workers, [&](std::size_t i) {
    const std::string tag = kappa_tag(c.kappas[i]);
    ctx.say(1, "minimize " + tag);
    return minimize_one(ctx, c.kappas[i], c.boundary, prediction, tag);
  });
  json results = json::array();
  for (const KappaRun &r : runs) {
    add_run_rows(ctx.table, ctx.mode(), "minimizer", r);
    results.push_back(run_json(r));
    if (c.outputs.fields && r.result) {
      write_csv(r.result->field, ctx.path("field_" + kappa_tag(r.kappa) + ".csv"));
    }
  }
  json summary{{"mode", ctx.mode()}, {"runs", results}};
  if (prediction) {
    summary["prediction"] = prediction_json(*prediction);
    add_prediction_rows(ctx.table, ctx.mode(), *prediction);
  }
  ctx.finish(summary);
}

void run_tail(Context &ctx) {
  const ExperimentConfig &c = ctx.config;
  std::vector<Vec2> centers = c.tail_centers;
  if (centers.empty()) {
    centers.push_back(c.domain.incenter());
  }
  struct TailResult {
    Vec2 a0;
    TailRoutes routes;
    std::optional<double> closed;
  };
  const auto results = parallel_map(centers.size(), ctx.workers, [&](std::size_t i) {
    ctx.say(1, "tail at " + format_number(centers[i].x) + "," + format_number(centers[i].y));
    TailResult r{centers[i], {}, std::nullopt};
    if (c.tail_levels >= 2) {
      r.routes = tail_routes(c.domain, centers[i], c.h, c.tail_levels, c.tail_tolerance);
    } else {
      const TailSolution s = solve_tail(c.domain, centers[i], c.h, c.tail_tolerance);
      const WirtingerEstimate w = tail_energy_via_derivative(s);
      r.routes.energy.h = {c.h};
      r.routes.energy.values = {s.T};
      r.routes.energy.extrapolated = s.T;
      r.routes.derivative.h = {c.h};
      r.routes.derivative.values = {w.T};
      r.routes.derivative.extrapolated = w.T;
      r.routes.imaginary = w.imaginary;
      r.routes.max_residual = s.max_residual;
    }
    try {
      r.closed = closed_form_T(c.domain, centers[i]);
    } catch (const UnsupportedKind &) {
    }
    return r;
  });
  json out = json::array();
  const std::string mode = ctx.mode();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const TailResult &r = results[i];
    const std::string label = "a0=(" + format_number(r.a0.x) + " " + format_number(r.a0.y) + ")";
    for (std::size_t l = 0; l < r.routes.energy.values.size(); ++l) {
      ctx.table.add(mode, label, std::nullopt, "T_energy[h=" + format_number(r.routes.energy.h[l]) + "]",
                    r.routes.energy.values[l], Provenance::solver);
      ctx.table.add(mode, label, std::nullopt, "T_derivative[h=" + format_number(r.routes.derivative.h[l]) + "]",
                    r.routes.derivative.values[l], Provenance::solver);
    }
    ctx.table.add(mode, label, std::nullopt, "T_energy", r.routes.energy.extrapolated, Provenance::solver);
    ctx.table.add(mode, label, std::nullopt, "T_derivative", r.routes.derivative.extrapolated, Provenance::solver);
    ctx.table.add(mode, label, std::nullopt, "T_energy_order", r.routes.energy.order, Provenance::solver);
    ctx.table.add(mode, label, std::nullopt, "imaginary", r.routes.imaginary, Provenance::solver);
    ctx.table.add(mode, label, std::nullopt, "max_residual", r.routes.max_residual, Provenance::solver);
    json j{{"a0", point_json(r.a0)},
           {"T_energy", r.routes.energy.extrapolated},
           {"T_energy_levels", r.routes.energy.values},
           {"T_energy_order", r.routes.energy.order},
           {"T_derivative", r.routes.derivative.extrapolated},
           {"T_derivative_levels", r.routes.derivative.values},
           {"imaginary", r.routes.imaginary},
           {"max_residual", r.routes.max_residual},
           {"h", r.routes.energy.h}};
    if (r.closed) {
      ctx.table.add(mode, label, std::nullopt, "T_closed_form", *r.closed, Provenance::formula);
      j["T_closed_form"] = *r.closed;
    }
    out.push_back(j);
    if (c.outputs.tail_grids) {
      const double finest = c.h / static_cast<double>(1 << (std::max(c.tail_levels, 1) - 1));
      const TailSolution s = solve_tail(c.domain, r.a0, finest, c.tail_tolerance);
      std::ofstream csv(ctx.path("tail_" + std::to_string(i) + ".csv"));
      write_csv(s, csv);
    }
  }
  ctx.finish({{"mode", mode}, {"centers", out}});
}

void run_predict(Context &ctx) {
  const SkyrmionPrediction p = predict_skyrmion(ctx.config.domain, ctx.config.lambda, ctx.config.argmin);
  add_prediction_rows(ctx.table, ctx.mode(), p);
  json j = prediction_json(p);
  j["mode"] = ctx.mode();
  ctx.finish(j);
}

void run_sweep(Context &ctx) {
  const ExperimentConfig &c = ctx.config;
  const SkyrmionPrediction p = predict_skyrmion(c.domain, c.lambda, c.argmin);
  ctx.say(1, "sweep over " + std::to_string(c.kappas.size()) + " kappas");
  auto grid = Grid::make(c.domain, c.h);
  SolverOptions opts = c.solver;
  if (c.outputs.telemetry) {
    opts.telemetry = ctx.dir / "telemetry_sweep.csv";
  }
  const std::vector<SweepPoint> pts =
      kappa_sweep(grid, c.kappas, c.lambda, opts, c.use_prediction ? std::optional(p) : std::nullopt);
  RouteComparison cmp = compare_routes(c, pts, p);
  ctx.table = cmp.table;
  json rows = json::array();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    KappaRun r{pts[i].kappa, pts[i].result.converged ? "converged" : "max_iterations", pts[i].result, pts[i].fit};
    add_run_rows(ctx.table, ctx.mode(), "minimizer", r);
    json j = run_json(r);
    j["radius_deviation"] = cmp.rows[i].radius_deviation;
    j["energy_deviation"] = cmp.rows[i].energy_deviation;
    j["center_deviation"] = cmp.rows[i].center_deviation;
    rows.push_back(j);
    if (c.outputs.fields) {
      write_csv(pts[i].result.field, ctx.path("field_" + kappa_tag(pts[i].kappa) + ".csv"));
    }
  }
  std::ofstream rep(ctx.path("checks.csv"));
  cmp.report.write_csv(rep);
  ctx.finish({{"mode", ctx.mode()},
              {"prediction", prediction_json(p)},
              {"points", rows},
              {"checks", cmp.report.to_json()}});
}

void run_free_boundary(Context &ctx) {
  const ExperimentConfig &c = ctx.config;
  const SkyrmionPrediction p = predict_skyrmion(c.domain, c.lambda, c.argmin);
  const std::string mode = ctx.mode();
  // two runs per κ: index 2k pinned, 2k+1 free
  const auto runs = parallel_map(2 * c.kappas.size(), ctx.workers, [&](std::size_t i) {
    const double kappa = c.kappas[i / 2];
    const bool pinned = i % 2 == 0;
    const std::string tag = kappa_tag(kappa) + (pinned ? "_pinned" : "_free");
    ctx.say(1, "free-boundary " + tag);
    return minimize_one(ctx, kappa, pinned ? BoundaryMode::pinned : BoundaryMode::free,
                        c.use_prediction ? std::optional(p) : std::nullopt, tag);
  });
  json out = json::array();
  for (std::size_t k = 0; k < c.kappas.size(); ++k) {
    const KappaRun &pin = runs[2 * k];
    const KappaRun &fre = runs[2 * k + 1];
    add_run_rows(ctx.table, mode, "pinned", pin);
    add_run_rows(ctx.table, mode, "free", fre);
    const double rho = c.kappas[k] * p.r0;
    const double deficit = free_boundary_deficit(c.domain, rho, p.center);
    ctx.table.add(mode, "prediction", c.kappas[k], "boundary_deficit", deficit, Provenance::formula);
    const bool divergent = (pin.status == "converged") != (fre.status == "converged");
    ctx.table.add(mode, "comparison", c.kappas[k], "divergent_outcomes", divergent ? 1.0 : 0.0, Provenance::solver);
    out.push_back({{"kappa", c.kappas[k]},
                   {"pinned", run_json(pin)},
                   {"free", run_json(fre)},
                   {"boundary_deficit", deficit},
                   {"divergent_outcomes", divergent}});
  }
  add_prediction_rows(ctx.table, mode, p);
  ctx.finish({{"mode", mode}, {"prediction", prediction_json(p)}, {"runs", out}});
}

void run_validate(Context &ctx) {
  const ExperimentConfig &c = ctx.config;
  AcceptanceSuite suite(c.suite, c.solver, c.seed);
  ValidationReport report = suite.run_all([&](const CriterionResult &r) {
    ctx.say(1, "criterion " + std::to_string(r.id) + " (" + r.title + "): " + (r.passed() ? "PASS" : "FAIL") +
                   (r.error.empty() ? "" : " [" + r.error + "]"));
  });
  report.config_hash = c.hash();
  const std::string mode = ctx.mode();
  for (const CheckRecord &r : report.records) {
    const std::string label = "criterion " + std::to_string(r.criterion);
    if (r.comparison == Comparison::relative || r.comparison == Comparison::absolute ||
        r.comparison == Comparison::less_than) {
      ctx.table.add(mode, label, std::nullopt, r.name + ".predicted", r.predicted, r.predicted_provenance);
    }
    if (!r.timing) {
      ctx.table.add(mode, label, std::nullopt, r.name + ".measured", r.measured, r.provenance);
    }
  }
  std::ofstream rep(ctx.path("report.csv"));
  report.write_csv(rep);
  rep.close();
  json summary = report.to_json();
  summary["mode"] = mode;
  ctx.outcome.exit_code = report.passed() ? 0 : 1;
  ctx.outcome.report = std::move(report);
  ctx.finish(summary);
}

} // namespace

void ResultTable::add(std::string mode, std::string label, std::optional<double> kappa, std::string quantity,
                      double value, Provenance provenance) {
  rows_.push_back({std::move(mode), std::move(label), kappa, std::move(quantity), value, provenance});
}

void ResultTable::write_csv(std::ostream &out) const {
  out << "mode,case,kappa,quantity,value,provenance\n";
  for (const Row &r : rows_) {
    out << r.mode << ',' << r.label << ',' << (r.kappa ? format_number(*r.kappa) : std::string()) << ','
        << r.quantity << ',' << format_number(r.value) << ',' << to_string(r.provenance) << '\n';
  }
}

RouteComparison compare_routes(const ExperimentConfig &config, const std::vector<SweepPoint> &sweep,
                               const SkyrmionPrediction &prediction) {
  if (sweep.empty()) {
    throw InvalidArgument("compare_routes needs sweep results");
  }
  RouteComparison cmp;
  const std::string mode = "compare";
  double previous = std::numeric_limits<double>::infinity();
  CriterionResult checks;
  checks.id = 0;
  checks.title = "limit comparison";
  for (const SweepPoint &p : sweep) {
    RouteRow row;
    row.kappa = p.kappa;
    row.rho_over_kappa = rescaled_radius(p.fit, p.kappa);
    row.center = p.fit.params.center;
    row.helicity = p.fit.helicity_angle;
    row.tilt = p.fit.tilt_angle;
    row.gap = p.result.gap;
    row.predicted_r0 = prediction.r0;
    row.predicted_center = prediction.center;
    row.predicted_energy = prediction.energy0;
    row.radius_deviation = std::abs(row.rho_over_kappa - prediction.r0) / prediction.r0;
    row.energy_deviation = std::abs(row.gap - prediction.energy0) / std::abs(prediction.energy0);
    row.center_deviation = norm(row.center - prediction.center);

    const std::string k = "[kappa=" + format_number(p.kappa) + "]";
    ResultTable &t = cmp.table;
    t.add(mode, "limit", p.kappa, "r0", prediction.r0, Provenance::formula);
    t.add(mode, "limit", p.kappa, "a0_x", prediction.center.x, Provenance::formula);
    t.add(mode, "limit", p.kappa, "a0_y", prediction.center.y, Provenance::formula);
    t.add(mode, "limit", p.kappa, "helicity", 0.0, Provenance::formula);
    t.add(mode, "limit", p.kappa, "tilt", 0.0, Provenance::formula);
    t.add(mode, "limit", p.kappa, "energy0", prediction.energy0, Provenance::formula);
    t.add(mode, "trend", p.kappa, "radius_deviation", row.radius_deviation, Provenance::fit);
    t.add(mode, "trend", p.kappa, "energy_deviation", row.energy_deviation, Provenance::solver);
    t.add(mode, "trend", p.kappa, "center_deviation", row.center_deviation, Provenance::fit);

    checks.records.push_back(check_less(0, "gap_negative" + k, row.gap, 0.0));
    if (std::isfinite(previous)) {
      checks.records.push_back(
          check_less(0, "radius_deviation_decreases" + k, row.radius_deviation, previous, Provenance::fit));
    }
    previous = row.radius_deviation;
    cmp.rows.push_back(row);
  }
  const RouteRow &last = cmp.rows.back();
  const std::string k = "[kappa=" + format_number(last.kappa) + "]";
  checks.records.push_back(
      check_relative(0, "rho_over_kappa" + k, prediction.r0, last.rho_over_kappa, 0.15, Provenance::fit));
  checks.records.push_back(check_relative(0, "gap" + k, prediction.energy0, last.gap, 0.20));
  checks.records.push_back(check_at_most(0, "center_offset" + k, last.center_deviation, 2.0 * config.h, Provenance::fit));
  checks.records.push_back(check_at_most(0, "abs_helicity" + k, std::abs(last.helicity), 0.1, Provenance::fit));
  checks.records.push_back(check_at_most(0, "tilt" + k, std::abs(last.tilt), 0.1, Provenance::fit));
  cmp.report.config_hash = config.hash();
  cmp.report.seed = config.seed;
  cmp.report.add(std::move(checks));
  return cmp;
}

RouteComparison compare_routes(const ExperimentConfig &config) {
  const SkyrmionPrediction p = predict_skyrmion(config.domain, config.lambda, config.argmin);
  auto grid = Grid::make(config.domain, config.h);
  const auto pts = kappa_sweep(grid, config.kappas, config.lambda, config.solver,
                               config.use_prediction ? std::optional(p) : std::nullopt);
  return compare_routes(config, pts, p);
}

RunOutcome run(const ExperimentConfig &config, const RunOptions &options) {
  config.validate();
  Context ctx{config,
              options.output_directory.value_or(config.outputs.directory),
              options.workers.value_or(config.workers),
              options.verbosity,
              options.log,
              {},
              {}};
  if (ctx.workers < 1) {
    throw ConfigError("workers: must be at least 1");
  }
  std::filesystem::create_directories(ctx.dir);
  ctx.write_json("config.json", [&] {
    json j = config.to_json();
    j.erase("outputs");
    j.erase("workers");
    return j;
  }());
  ctx.say(1, "mode " + ctx.mode() + ", config " + config.hash());
  switch (config.mode) {
  case Mode::minimize:
    run_minimize(ctx);
    break;
  case Mode::tail:
    run_tail(ctx);
    break;
  case Mode::predict:
    run_predict(ctx);
    break;
  case Mode::sweep:
    run_sweep(ctx);
    break;
  case Mode::free_boundary:
    run_free_boundary(ctx);
    break;
  case Mode::validate:
    run_validate(ctx);
    break;
  }
  return std::move(ctx.outcome);
}

} // namespace skyrmion
