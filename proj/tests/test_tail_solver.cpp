#include "skyrmion/errors.hpp"
#include "skyrmion/tail_solver.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace skyrmion;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(TailSolver, BoundaryData) {
  const Vec2 a = tail_boundary_data({0, 0}, {1, 0});
  EXPECT_DOUBLE_EQ(a.x, 2.0);
  EXPECT_DOUBLE_EQ(a.y, 0.0);
  const Vec2 b = tail_boundary_data({0, 0}, {0, 2});
  EXPECT_DOUBLE_EQ(b.x, 0.0);
  EXPECT_DOUBLE_EQ(b.y, 1.0);
}

TEST(TailSolver, ClosedFormExamples) {
  EXPECT_NEAR(closed_form_T(DomainSpec::disk(2.0), {0, 0}), 4 * pi, 1e-12);
  EXPECT_NEAR(closed_form_T(DomainSpec::disk(1.0), {0.5, 0}), 16 * pi / 0.5625, 1e-11);
  EXPECT_NEAR(closed_form_T(DomainSpec::strip(1.0, 8.0), {0, 0.25}), 8 * pi * pi * pi, 1e-10);
  EXPECT_NEAR(closed_form_T(DomainSpec::half_plane(8, 8), {0, -2}), pi, 1e-13);
  EXPECT_THROW(closed_form_T(DomainSpec::rectangle(1, 1), {0.5, 0.5}), UnsupportedKind);
}

TEST(TailSolver, ClosedFormTailIsHarmonicWithTheData) {
  const DomainSpec disk = DomainSpec::disk(1.0);
  const Vec2 a{0.3, -0.2};
  // boundary values match the data
  for (double t : {0.0, 1.0, 2.5}) {
    const Vec2 x{std::cos(t), std::sin(t)};
    const Vec2 u = *closed_form_tail(disk, a, x);
    const Vec2 d = tail_boundary_data(a, x);
    EXPECT_NEAR(norm(u - d), 0.0, 1e-12);
  }
  // 5-point Laplacian of the interior formula
  const double e = 1e-3;
  const Vec2 p{0.1, 0.2};
  const Vec2 lap = (*closed_form_tail(disk, a, p + Vec2{e, 0}) + *closed_form_tail(disk, a, p - Vec2{e, 0}) +
                    *closed_form_tail(disk, a, p + Vec2{0, e}) + *closed_form_tail(disk, a, p - Vec2{0, e}) -
                    4.0 * *closed_form_tail(disk, a, p)) /
                   (e * e);
  EXPECT_LE(norm(lap), 1e-4);
}

TEST(TailSolver, DiskCenterRichardson) {
  const Richardson r = tail_energy_extrapolated(DomainSpec::disk(1.0), {0, 0}, 1.0 / 128);
  EXPECT_NEAR(r.extrapolated, 16 * pi, 0.02 * 16 * pi);
  const Richardson off = tail_energy_extrapolated(DomainSpec::disk(1.0), {0.5, 0}, 1.0 / 128);
  EXPECT_NEAR(off.extrapolated, 89.361, 0.02 * 89.361);
}

TEST(TailSolver, StripMidline) {
  const TailSolution s = solve_tail(DomainSpec::strip(1.0, 8.0), {0, 0}, 1.0 / 256);
  EXPECT_NEAR(s.T, 4 * pi * pi * pi, 0.02 * 4 * pi * pi * pi);
  EXPECT_LE(s.max_residual, 1e-8);
}

TEST(TailSolver, DiscreteHarmonicity) {
  for (const auto &[d, a] : std::vector<std::pair<DomainSpec, Vec2>>{{DomainSpec::disk(1.0), {0.2, 0.1}},
                                                                       {DomainSpec::rectangle(1, 1), {0.3, 0.6}},
                                                                       {DomainSpec::strip(1, 8), {0.0, 0.2}}}) {
    const TailSolution s = solve_tail(d, a, 1.0 / 64);
    EXPECT_LE(s.max_residual, 1e-8);
    EXPECT_GT(s.iterations, 0);
    EXPECT_NEAR(s.T, s.energy_interior + s.energy_exterior, 1e-12 * s.T);
  }
}

TEST(TailSolver, ExteriorEnergyIsBoundaryIntegral) {
  // ∫_{|x|>1} 8/|x - a|⁴ by 2D polar quadrature about the origin
  const Vec2 a{0.4, 0.1};
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double oracle = GK::integrate(
      [&](double r) {
        return GK::integrate(
                   [&](double t) {
                     const double dx = r * std::cos(t) - a.x, dy = r * std::sin(t) - a.y;
                     const double s = dx * dx + dy * dy;
                     return 8.0 / (s * s);
                   },
                   0.0, 2 * pi, 10, 1e-13) *
               r;
      },
      1.0, std::numeric_limits<double>::infinity(), 15, 1e-12);
  const TailSolution s = solve_tail(DomainSpec::disk(1.0), a, 1.0 / 32);
  EXPECT_NEAR(s.energy_exterior, oracle, 1e-9 * oracle);
}

TEST(TailSolver, DerivativeRouteExamples) {
  const TailSolution disk = solve_tail(DomainSpec::disk(1.0), {0, 0}, 1.0 / 256);
  EXPECT_NEAR(tail_energy_via_derivative(disk).T, 16 * pi, 0.01 * 16 * pi);
  EXPECT_NEAR(tail_energy_via_derivative(disk).imaginary, 0.0, 1e-8);
  const TailSolution half = solve_tail(DomainSpec::half_plane(8, 8), {0, -1}, 1.0 / 64);
  EXPECT_NEAR(tail_energy_via_derivative(half).T, 4 * pi, 0.02 * 4 * pi);
}

TEST(TailSolver, RoutesAgreeOnSquare) {
  const TailRoutes r = tail_routes(DomainSpec::rectangle(1, 1), {0.5, 0.5}, 1.0 / 64);
  EXPECT_NEAR(r.derivative.extrapolated, r.energy.extrapolated, 0.01 * r.energy.extrapolated);
  EXPECT_LE(std::abs(r.imaginary), 1e-6 * r.energy.extrapolated);
}

TEST(TailSolver, ThreeRoutesAgree) {
  struct Case {
    DomainSpec d;
    std::vector<Vec2> centers;
  };
  const std::vector<Case> cases{
      {DomainSpec::disk(1.0),
       {{0, 0}, {0.1, 0}, {0.2, 0.1}, {-0.3, 0.2}, {0, -0.4}, {0.35, 0.35}, {-0.5, 0}, {0.1, 0.55}, {-0.2, -0.6}, {0.6, 0.1}}},
      {DomainSpec::strip(1.0, 8.0),
       {{0, 0}, {0, 0.05}, {0, 0.1}, {0, -0.15}, {0, 0.2}, {0.5, -0.25}, {1, 0.3}, {-1, -0.3}, {0, 0.32}, {2, -0.1}}},
      {DomainSpec::half_plane(8, 8),
       {{0, -0.5}, {0, -0.6}, {0, -0.7}, {0, -0.8}, {0, -0.9}, {0, -1.0}, {0.5, -0.75}, {-0.5, -0.65}, {1, -0.55}, {-1, -0.85}}}};
  for (const Case &c : cases) {
    for (Vec2 a : c.centers) {
      const double exact = closed_form_T(c.d, a);
      const TailRoutes r = tail_routes(c.d, a, c.d.kind() == DomainKind::half_plane ? 1.0 / 16 : 1.0 / 32);
      EXPECT_NEAR(r.energy.extrapolated, exact, 0.02 * exact) << to_string(c.d.kind()) << " " << a.x << "," << a.y;
      EXPECT_NEAR(r.derivative.extrapolated, exact, 0.02 * exact) << to_string(c.d.kind()) << " " << a.x << "," << a.y;
    }
  }
}

TEST(TailSolver, MeshConvergenceOrder) {
  const Richardson r = tail_energy_extrapolated(DomainSpec::disk(1.0), {0, 0}, 1.0 / 64);
  EXPECT_TRUE(r.order_estimated);
  EXPECT_GE(r.order, 1.0);
  const double coarse_err = std::abs(r.values[0] - r.extrapolated);
  const double fine_err = std::abs(r.values[2] - r.extrapolated);
  EXPECT_LT(fine_err, coarse_err / 2);
}

TEST(TailSolver, RichardsonOnKnownSequence) {
  // T(h) = 3 + 2h + ... exactly first order
  const Richardson r = richardson({0.1, 0.05, 0.025}, {3.2, 3.1, 3.05});
  EXPECT_NEAR(r.order, 1.0, 1e-12);
  EXPECT_NEAR(r.extrapolated, 3.0, 1e-12);
  EXPECT_THROW(richardson({0.1}, {1.0}), InvalidArgument);
}

TEST(TailSolver, BoundaryBlowUp) {
  const DomainSpec disk = DomainSpec::disk(1.0);
  double prev_f = 0, prev_s = 0;
  for (double r : {0.0, 0.2, 0.4, 0.6, 0.8}) {
    const Vec2 a{0, -r};
    const double f = closed_form_T(disk, a);
    const double s = solve_tail(disk, a, 1.0 / 64).T;
    EXPECT_GT(f, prev_f);
    EXPECT_GT(s, prev_s);
    prev_f = f;
    prev_s = s;
  }
}

TEST(TailSolver, CenterOnBoundaryRejected) {
  EXPECT_THROW(solve_tail(DomainSpec::disk(1.0), {0.999, 0}, 1.0 / 64), CenterOnBoundary);
}

TEST(TailSolver, ArgminExamples) {
  const TailMinimum disk = argmin_T(DomainSpec::disk(1.0));
  EXPECT_LE(norm(disk.a0), 1e-5);
  EXPECT_NEAR(disk.T, 16 * pi, 1e-9);
  const TailMinimum strip = argmin_T(DomainSpec::strip(1.0, 8.0));
  EXPECT_LE(std::abs(strip.a0.y), 1e-5);
  EXPECT_NEAR(strip.T, 4 * pi * pi * pi, 1e-8);
  ArgminOptions o;
  o.h = 1.0 / 64;
  const TailMinimum sq = argmin_T(DomainSpec::rectangle(1, 1), o);
  EXPECT_LE(norm(sq.a0 - Vec2{0.5, 0.5}), 1e-3);
  EXPECT_FALSE(sq.closed_form);
  // regression anchor for the unit square at its center
  EXPECT_NEAR(sq.T, 172.83, 0.01 * 172.83);
}

TEST(TailSolver, PredictionExamples) {
  const SkyrmionPrediction disk = predict_skyrmion(DomainSpec::disk(1.0), 0.0);
  EXPECT_NEAR(disk.r0, 0.25, 1e-12);
  EXPECT_NEAR(disk.energy0, -pi, 1e-12);
  const SkyrmionPrediction strip = predict_skyrmion(DomainSpec::strip(1.0, 8.0), 0.0);
  EXPECT_NEAR(strip.r0, 1 / (pi * pi), 1e-12);
  EXPECT_NEAR(strip.energy0, -4 / pi, 1e-12);
  const SkyrmionPrediction aniso = predict_skyrmion(DomainSpec::disk(1.0), 1.0);
  EXPECT_NEAR(aniso.r0, 1.0 / 6, 1e-12);
  EXPECT_NEAR(aniso.energy0, -2 * pi / 3, 1e-12);
  for (double T : {1.0, 16 * pi, 1e3}) {
    for (double lambda : {0.0, 0.3, 2.0}) {
      const SkyrmionPrediction p = prediction_from_T({}, T, lambda);
      EXPECT_NEAR(p.energy0, -4 * pi * p.r0, 4 * std::numeric_limits<double>::epsilon() * std::abs(p.energy0));
    }
  }
  EXPECT_THROW(prediction_from_T({}, 10.0, -1.0), InvalidArgument);
}

TEST(TailSolver, RenormalizedEnergy) {
  const DomainSpec disk = DomainSpec::disk(1.0);
  EXPECT_NEAR(renormalized_energy(0.0, 0.25, {0, 0}, disk), -pi, 1e-12);
  for (double r0 : {1e-3, 0.1, 2.0}) {
    EXPECT_GT(renormalized_energy(pi, r0, {0.2, 0}, disk), 0.0);
  }
  // minimizing over r0 at fixed a0 gives r0 = 4π/T and -16π²/T
  const Vec2 a{0.3, 0.1};
  const double T = closed_form_T(disk, a);
  const double best = 4 * pi / T;
  const double v = renormalized_energy(0.0, best, a, disk);
  EXPECT_NEAR(v, -16 * pi * pi / T, 1e-12);
  EXPECT_GT(renormalized_energy(0.0, best * 1.01, a, disk), v);
  EXPECT_GT(renormalized_energy(0.0, best * 0.99, a, disk), v);
}

TEST(TailSolver, FreeBoundaryDeficit) {
  EXPECT_NEAR(free_boundary_deficit(DomainSpec::half_plane(8, 8), 1.0, {0, -1}), -2 * pi, 1e-9);
  EXPECT_NEAR(free_boundary_deficit(DomainSpec::half_plane(8, 8), 0.5, {0, -2}), -2 * pi * 0.25 / 4, 1e-9);
  EXPECT_NEAR(free_boundary_deficit(DomainSpec::disk(1.0), 1.0, {0, 0}), -8 * pi, 1e-10);
  EXPECT_NEAR(free_boundary_deficit(DomainSpec::disk(1.0), 1e-8, {0, 0}), 0.0, 1e-13);
}

TEST(TailSolver, CsvExport) {
  const TailSolution s = solve_tail(DomainSpec::disk(1.0), {0, 0}, 1.0 / 16);
  std::ostringstream out;
  write_csv(s, out);
  EXPECT_EQ(out.str().rfind("x,y,u1,u2\n", 0), 0u);
}
