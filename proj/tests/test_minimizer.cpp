#include "skyrmion/errors.hpp"
#include "skyrmion/minimizer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace skyrmion;

namespace {
constexpr double pi = std::numbers::pi;

std::vector<std::vector<double>> read_rows(const std::filesystem::path &p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      row.push_back(std::stod(cell));
    }
    rows.push_back(row);
  }
  return rows;
}

// one shared minimization: disk, κ = 0.2, h = 1/256
const MinimizeResult &reference() {
  static const MinimizeResult r = [] {
    auto g = Grid::make(DomainSpec::disk(1.0), 1.0 / 256);
    SolverOptions o;
    o.telemetry = std::filesystem::temp_directory_path() / "skyrmion_telemetry_test.csv";
    return minimize(initial_guess(g, 0.2, 0.0).field, 0.2, 0.0, o);
  }();
  return r;
}
} // namespace

TEST(Minimizer, InitialGuessDisk) {
  auto g = Grid::make(DomainSpec::disk(1.0), 1.0 / 256);
  const InitialGuess ig = initial_guess(g, 0.05, 0.0);
  EXPECT_NEAR(norm(ig.center), 0.0, 1e-15);
  EXPECT_NEAR(ig.rho, 0.0125, 1e-15);
  EXPECT_GT(ig.L, 1.0);
  EXPECT_NEAR(degree(ig.field).value, 1.0, 1e-2);
  EXPECT_TRUE(ig.field.exterior_pinned());
}

TEST(Minimizer, InitialGuessStripFromPrediction) {
  const DomainSpec strip = DomainSpec::strip(1.0, 8.0);
  auto g = Grid::make(strip, 1.0 / 128);
  const InitialGuess ig = initial_guess(g, 0.05, 0.0, predict_skyrmion(strip, 0.0));
  EXPECT_NEAR(ig.center.y, 0.0, 1e-6);
  EXPECT_NEAR(ig.rho, 0.05 / (pi * pi), 1e-9);
}

TEST(Minimizer, InitialGuessTooTight) {
  auto g = Grid::make(DomainSpec::disk(1.0), 1.0 / 64);
  EXPECT_THROW(initial_guess(g, 10.0, 0.0), GeometryTooTight);
  EXPECT_THROW(initial_guess(g, -1.0, 0.0), InvalidArgument);
}

TEST(Minimizer, OptionsValidation) {
  SolverOptions o;
  o.memory = 0;
  EXPECT_THROW(o.validate(), InvalidArgument);
  o = {};
  o.grad_tolerance = -1.0;
  EXPECT_THROW(o.validate(), InvalidArgument);
  o = {};
  EXPECT_NEAR(o.tolerance_for(1.0 / 512), 1e-6 * 8 * pi * 512, 1e-12);
}

TEST(Minimizer, RejectsDegreeZeroStart) {
  auto g = Grid::make(DomainSpec::disk(1.0), 1.0 / 32);
  EXPECT_THROW(minimize(SpinField(g), 0.1, 0.0, {}), InvalidArgument);
}

TEST(Minimizer, ConvergesInsideTheAdmissibleClass) {
  const MinimizeResult &r = reference();
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.reason, StopReason::converged);
  EXPECT_LT(r.gap, 0.0);
  EXPECT_LT(r.breakdown.total, 8 * pi);
  EXPECT_NEAR(degree(r.field).value, 1.0, 0.05);
  EXPECT_TRUE(r.field.exterior_pinned());
  EXPECT_LE(r.field.max_norm_deviation(), 1e-12);
  SolverOptions o;
  EXPECT_LE(r.grad_norm, o.tolerance_for(1.0 / 256));
  EXPECT_LE(gradient_density_norm(riemannian_gradient(r.field, 0.2, 0.0)), o.tolerance_for(1.0 / 256));
}

TEST(Minimizer, EnergyIsMonotone) {
  reference();
  const auto rows = read_rows(std::filesystem::temp_directory_path() / "skyrmion_telemetry_test.csv");
  ASSERT_GT(rows.size(), 2u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LE(rows[i][1], rows[i - 1][1]) << "iteration " << rows[i][0];
  }
}

TEST(Minimizer, RestartAtCriticalPointTakesNoStep) {
  const MinimizeResult again = minimize(reference().field, 0.2, 0.0, {});
  EXPECT_TRUE(again.converged);
  EXPECT_EQ(again.accepted_steps, 0);
}

TEST(Minimizer, RigidityRatioOfMinimizer) {
  const FitReport f = fit_bp(reference().field);
  EXPECT_GE(f.excess, -1e-6);
  EXPECT_GE(f.excess / (f.dirichlet_distance * f.dirichlet_distance), 0.1);
  EXPECT_NEAR(rescaled_radius(f, 0.2), 0.25, 0.05);
}

TEST(Minimizer, SteepestDescentRespectsIterationCap) {
  auto g = Grid::make(DomainSpec::disk(1.0), 1.0 / 64);
  SolverOptions o;
  o.direction = Direction::steepest;
  o.step_rule = StepRule::fixed;
  o.initial_step = 0.01;
  o.max_iterations = 5;
  const InitialGuess ig = initial_guess(g, 0.3, 0.0);
  const MinimizeResult r = minimize(ig.field, 0.3, 0.0, o);
  EXPECT_EQ(r.iterations, 5);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.reason, StopReason::max_iterations);
  EXPECT_LT(r.breakdown.total, total_energy(ig.field, 0.3, 0.0).total);
}

TEST(Minimizer, FreeBoundaryEscapes) {
  auto g = Grid::make(DomainSpec::disk(1.0), 1.0 / 256);
  const InitialGuess ig = initial_guess(g, 0.1, 0.0, std::nullopt, BoundaryMode::free);
  EXPECT_THROW(minimize(ig.field, 0.1, 0.0, {}), DegreeJump);
}

TEST(Minimizer, SweepArguments) {
  auto g = Grid::make(DomainSpec::disk(1.0), 1.0 / 64);
  EXPECT_THROW(kappa_sweep(g, {}, 0.0, {}), InvalidArgument);
  EXPECT_THROW(kappa_sweep(g, {0.1, 0.2}, 0.0, {}), InvalidArgument);
  EXPECT_THROW(kappa_sweep(g, {0.1, -0.2}, 0.0, {}), InvalidArgument);
}
