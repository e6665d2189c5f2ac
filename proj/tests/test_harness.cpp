#include "skyrmion/errors.hpp"
#include "skyrmion/harness.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <numbers>
#include <sstream>

using namespace skyrmion;

namespace {
constexpr double pi = std::numbers::pi;

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string &name) {
  const auto p = std::filesystem::temp_directory_path() / ("skyrmion_harness_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string config_error(const std::string &text) {
  try {
    parse_config(text);
  } catch (const ConfigError &e) {
    return e.what();
  }
  return {};
}
} // namespace

TEST(Config, DefaultsAndFractions) {
  const ExperimentConfig c = parse_config(R"({"mode": "sweep", "h": "1/512", "kappas": [0.2, 0.1, 0.05]})");
  EXPECT_EQ(c.mode, Mode::sweep);
  EXPECT_DOUBLE_EQ(c.h, 1.0 / 512);
  EXPECT_EQ(c.kappas.size(), 3u);
  EXPECT_EQ(c.domain.kind(), DomainKind::disk);
}

TEST(Config, DomainKinds) {
  const ExperimentConfig s =
      parse_config(R"({"domain": {"kind": "strip", "width": 1, "length": 16}, "h": 0.0625})");
  EXPECT_EQ(s.domain, DomainSpec::strip(1, 16));
  const ExperimentConfig p = parse_config(
      R"({"domain": {"kind": "polygon", "vertices": [[0,0],[1,0],[1,1],[0,1]]}, "h": "1/64"})");
  EXPECT_EQ(p.domain.kind(), DomainKind::polygon);
  const ExperimentConfig hp = parse_config(
      R"({"mode": "tail", "domain": {"kind": "half_plane", "half_width": 4, "depth": 4}, "h": 0.125, "tail": {"centers": [[0, -1]]}})");
  EXPECT_EQ(hp.domain, DomainSpec::half_plane(4, 4));
}

TEST(Config, ErrorsNameTheKey) {
  EXPECT_NE(config_error(R"({"kappas": []})").find("kappas"), std::string::npos);
  EXPECT_NE(config_error(R"({"kappas": [0.1, -0.1]})").find("kappas[1]"), std::string::npos);
  EXPECT_NE(config_error(R"({"solver": {"memroy": 3}})").find("solver.memroy"), std::string::npos);
  EXPECT_NE(config_error(R"({"solver": {"max_iterations": "many"}})").find("solver.max_iterations"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"h": 0.3})").find("h:"), std::string::npos);
  EXPECT_NE(config_error(R"({"mode": "dance"})").find("mode"), std::string::npos);
  EXPECT_NE(config_error(R"({"domain": {"kind": "disk", "radius": -1}})").find("domain"), std::string::npos);
  EXPECT_NE(config_error(R"({"domain": {"kind": "disk", "radius": 1, "colour": 3}})").find("domain.colour"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"mode": "sweep", "kappas": [0.1, 0.2]})").find("descending"), std::string::npos);
}

TEST(Config, SyntaxErrorsCarryLineAndColumn) {
  const std::string msg = config_error("{\n  \"h\": 1/64\n}");
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("column"), std::string::npos) << msg;
}

TEST(Config, HashRoundTrips) {
  const ExperimentConfig c = parse_config(
      R"({"mode": "minimize", "h": "1/128", "kappas": [0.3], "lambda": 0.5, "solver": {"memory": 5, "grad_tolerance": 0.01}})");
  const ExperimentConfig back = parse_config(c.to_json().dump());
  EXPECT_EQ(c.hash(), back.hash());
  EXPECT_EQ(c.to_json(), back.to_json());
  ExperimentConfig moved = c;
  moved.outputs.directory = "elsewhere";
  moved.workers = 4;
  EXPECT_EQ(moved.hash(), c.hash());
  ExperimentConfig changed = c;
  changed.lambda = 0.6;
  EXPECT_NE(changed.hash(), c.hash());
  EXPECT_EQ(c.hash().size(), 16u);
}

TEST(Harness, Fnv1aReferenceValues) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Harness, ParallelMapKeepsOrder) {
  const auto v = parallel_map(50, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(v[i], static_cast<int>(i * i));
  }
  EXPECT_THROW(parallel_map(5, 3,
                            [](std::size_t i) {
                              if (i == 3) throw InvalidArgument("boom");
                              return 1;
                            }),
               InvalidArgument);
}

TEST(Harness, PredictDisk) {
  ExperimentConfig c;
  c.mode = Mode::predict;
  RunOptions o;
  o.output_directory = scratch("predict");
  const RunOutcome out = run(c, o);
  EXPECT_EQ(out.exit_code, 0);
  const auto j = nlohmann::json::parse(slurp(*o.output_directory / "results.json"));
  EXPECT_NEAR(j["r0"].get<double>(), 0.25, 1e-12);
  EXPECT_NEAR(j["energy0"].get<double>(), -pi, 1e-12);
  EXPECT_NEAR(j["a0"][0].get<double>(), 0.0, 1e-6);
  EXPECT_NEAR(j["a0"][1].get<double>(), 0.0, 1e-6);
  const std::string csv = slurp(*o.output_directory / "results.csv");
  EXPECT_EQ(csv.rfind("mode,case,kappa,quantity,value,provenance\n", 0), 0u);
  EXPECT_NE(csv.find("predict,prediction,,r0,0.25,formula"), std::string::npos);
}

TEST(Harness, TailArtifactsAreDeterministic) {
  ExperimentConfig c = parse_config(
      R"({"mode": "tail", "domain": {"kind": "rectangle", "width": 1, "height": 1}, "h": "1/32",
          "tail": {"centers": [[0.5, 0.5], [0.3, 0.6]]}})");
  RunOptions a;
  a.output_directory = scratch("tail_a");
  RunOptions b;
  b.output_directory = scratch("tail_b");
  b.workers = 2;
  run(c, a);
  run(c, b);
  for (const char *name : {"results.csv", "results.json", "config.json"}) {
    EXPECT_EQ(slurp(*a.output_directory / name), slurp(*b.output_directory / name)) << name;
  }
  // every row carries a provenance
  std::istringstream rows(slurp(*a.output_directory / "results.csv"));
  std::string line;
  std::getline(rows, line);
  while (std::getline(rows, line)) {
    const std::string last = line.substr(line.rfind(',') + 1);
    EXPECT_TRUE(last == "formula" || last == "solver" || last == "fit") << line;
  }
}

TEST(Harness, MinimizeWritesPerKappaResults) {
  ExperimentConfig c = parse_config(R"({"mode": "minimize", "h": "1/128", "kappas": [0.3, 0.25],
                                        "outputs": {"fields": true, "telemetry": true}})");
  RunOptions o;
  o.output_directory = scratch("minimize");
  const RunOutcome out = run(c, o);
  const auto j = out.summary;
  ASSERT_EQ(j["runs"].size(), 2u);
  EXPECT_EQ(j["runs"][0]["status"], "converged");
  EXPECT_LT(j["runs"][0]["gap"].get<double>(), 0.0);
  EXPECT_TRUE(std::filesystem::exists(*o.output_directory / "field_kappa_0.29999999999999999.csv"));
  EXPECT_TRUE(std::filesystem::exists(*o.output_directory / "telemetry_kappa_0.25.csv"));
}

TEST(Harness, CompareRoutesTable) {
  ExperimentConfig c = parse_config(R"({"mode": "sweep", "h": "1/128", "kappas": [0.4, 0.3]})");
  const RouteComparison cmp = compare_routes(c);
  ASSERT_EQ(cmp.rows.size(), 2u);
  for (const RouteRow &r : cmp.rows) {
    EXPECT_DOUBLE_EQ(r.predicted_r0, 0.25);
    EXPECT_DOUBLE_EQ(r.predicted_energy, -pi);
    EXPECT_LT(r.gap, 0.0);
  }
  EXPECT_FALSE(cmp.report.records.empty());
  EXPECT_FALSE(cmp.table.rows().empty());
}

TEST(Harness, ValidateSubsetReportsAndExitCode) {
  ExperimentConfig c = parse_config(R"({"mode": "validate", "validate": {"criteria": [2], "strip_h": "1/64"}})");
  RunOptions o;
  o.output_directory = scratch("validate");
  const RunOutcome out = run(c, o);
  ASSERT_TRUE(out.report);
  ASSERT_EQ(out.report->criteria.size(), 1u);
  EXPECT_EQ(out.report->criteria[0].id, 2);
  EXPECT_EQ(out.exit_code, out.report->passed() ? 0 : 1);
  EXPECT_TRUE(std::filesystem::exists(*o.output_directory / "report.csv"));
  const auto j = nlohmann::json::parse(slurp(*o.output_directory / "results.json"));
  EXPECT_EQ(j["config_hash"], c.hash());
}

TEST(Harness, ReportFailsWhenAnyRecordFails) {
  ValidationReport r;
  CriterionResult ok;
  ok.id = 1;
  ok.records.push_back(check_relative(1, "a", 1.0, 1.001, 0.01));
  r.add(ok);
  EXPECT_TRUE(r.passed());
  CriterionResult bad;
  bad.id = 2;
  bad.records.push_back(check_at_most(2, "b", 2.0, 1.0));
  r.add(bad);
  EXPECT_FALSE(r.passed());
  CriterionResult crashed;
  crashed.id = 3;
  crashed.error = "boom";
  ValidationReport r2;
  r2.add(crashed);
  EXPECT_FALSE(r2.passed());
}
