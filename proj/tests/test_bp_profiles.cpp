#include "skyrmion/bp_profiles.hpp"
#include "skyrmion/energy.hpp"
#include "skyrmion/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace skyrmion;

namespace {
constexpr double pi = std::numbers::pi;

Eigen::Matrix3d about(const Eigen::Vector3d &axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}
} // namespace

TEST(BPProfiles, EvaluateExamples) {
  BPParams p;
  const Vec3 c = evaluate_bp(p, {0, 0});
  EXPECT_NEAR(norm(c - e3), 0.0, 1e-15);
  const Vec3 far = evaluate_bp(p, {100, 0});
  EXPECT_LE(norm(far - minus_e3), 2.1e-2);
  const Vec3 ring = evaluate_bp(p, {1, 0});
  EXPECT_NEAR(norm(ring - Vec3{-1, 0, 0}), 0.0, 1e-15);
  // helicity rotates the in-plane part about e3
  const Vec3 q = evaluate_bp(BPParams::with_helicity(pi / 2, 1.0), {1, 0});
  EXPECT_NEAR(norm(q - Vec3{0, -1, 0}), 0.0, 1e-15);
}

TEST(BPProfiles, UnitNormOnRandomSamples) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    BPParams p;
    p.rotation = Eigen::Quaterniond(u(rng), u(rng), u(rng), u(rng)).normalized();
    p.rho = std::exp(4 * u(rng));
    p.center = {u(rng), u(rng)};
    const Vec2 x{10 * u(rng), 10 * u(rng)};
    worst = std::max(worst, std::abs(norm(evaluate_bp(p, x)) - 1.0));
  }
  EXPECT_LE(worst, 1e-14);
}

TEST(BPProfiles, ValidateRejectsBadParameters) {
  BPParams p;
  p.rho = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p.rho = 1.0;
  p.rotation = Eigen::Quaterniond(2, 0, 0, 0);
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(BPProfiles, TruncatedProfileExamples) {
  const double L = 2.0, rho = 0.3;
  const Vec2 a{0.1, -0.2};
  EXPECT_EQ(norm(evaluate_truncated_bp(L, rho, a, a + Vec2{2 * L * rho, 0}) - minus_e3), 0.0);
  EXPECT_EQ(norm(evaluate_truncated_bp(L, rho, a, a + Vec2{0, 3 * L * rho}) - minus_e3), 0.0);
  EXPECT_NEAR(norm(evaluate_truncated_bp(L, rho, a, a) - e3), 0.0, 1e-15);
  EXPECT_EQ(truncated_profile(L, 2 * L), 0.0);
  EXPECT_NEAR(truncated_profile(L, 1.0), 1.0, 1e-15);
}

TEST(BPProfiles, TruncatedProfileCoreEnergy) {
  // radial quadrature of |∂_r m|² + |m'|²/r² with a centered difference in r
  const double L = 2.0;
  auto m = [&](double r) { return evaluate_truncated_bp(L, 1.0, {}, {r, 0}); };
  auto density = [&](double r) {
    const double d = 1e-5;
    const Vec3 dr = (m(r + d) - m(r - d)) / (2 * d);
    const Vec3 v = m(r);
    return (norm2(dr) + (v.x * v.x + v.y * v.y) / (r * r)) * 2 * pi * r;
  };
  const double E = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(density, 1e-9, L, 10, 1e-12);
  EXPECT_NEAR(E, 6.4 * pi, 0.01 * 6.4 * pi);
}

TEST(BPProfiles, ExteriorEnergyConcentricDisk) {
  for (double R : {0.5, 1.0, 3.0}) {
    for (double rho : {2.0, 0.5, 0.1, 1e-2, 1e-4}) {
      BPParams p;
      p.rho = rho;
      p.center = {0.3, -0.7};
      const double exact = 8 * pi / (1 + R * R / (rho * rho));
      EXPECT_NEAR(exterior_bp_energy(p, DomainSpec::disk(R, p.center)), exact, 1e-6 * exact);
    }
  }
  BPParams tiny;
  tiny.rho = 1e-9;
  EXPECT_LT(exterior_bp_energy(tiny, DomainSpec::disk(1.0)), 1e-15);
}

TEST(BPProfiles, ExteriorEnergyHalfPlane) {
  const double rho = 0.05;
  BPParams p;
  p.rho = rho;
  p.center = {0, -1};
  // plain 2D quadrature of 8ρ²/(ρ² + |x-a|²)² over {y > 0}
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double inf = std::numeric_limits<double>::infinity();
  const double oracle = GK::integrate(
      [&](double y) {
        return GK::integrate(
            [&](double x) {
              const double s = rho * rho + x * x + (y + 1) * (y + 1);
              return 8 * rho * rho / (s * s);
            },
            -inf, inf, 15, 1e-13);
      },
      0.0, inf, 15, 1e-12);
  const double v = exterior_bp_energy(p, DomainSpec::half_plane(8, 8));
  EXPECT_NEAR(v, oracle, 1e-7 * oracle);
}

TEST(BPProfiles, SplitRotation) {
  double hel = 0, tilt = 0;
  split_rotation(about(Eigen::Vector3d::UnitZ(), 0.7), hel, tilt);
  EXPECT_NEAR(hel, 0.7, 1e-14);
  EXPECT_NEAR(tilt, 0.0, 1e-7);
  split_rotation(about(Eigen::Vector3d(1, 1, 0), 0.2) * about(Eigen::Vector3d::UnitZ(), -1.1), hel, tilt);
  EXPECT_NEAR(hel, -1.1, 1e-12);
  EXPECT_NEAR(tilt, 0.2, 1e-12);
}

TEST(BPProfiles, FitRecoversFamilyMember) {
  const double h = 1.0 / 256;
  auto g = Grid::make(DomainSpec::disk(1.0), h);
  for (const BPParams &truth : {BPParams::with_helicity(0.0, 0.05), BPParams::with_helicity(0.3, 0.07, {0.02, -0.03})}) {
    const auto f = SpinField::sample(g, [&](Vec2 x) { return evaluate_bp(truth, x); }, BoundaryMode::free);
    const FitReport r = fit_bp(f);
    EXPECT_NEAR(r.params.rho, truth.rho, 0.01 * truth.rho);
    EXPECT_LE(norm(r.params.center - truth.center), h);
    const Eigen::Matrix3d dR = truth.matrix().transpose() * r.params.matrix();
    EXPECT_LE(Eigen::AngleAxisd(dR).angle(), 1e-2);
    EXPECT_LE(r.dirichlet_distance, r.initial_distance);
    EXPECT_LE(r.dirichlet_distance, 1e-3);
  }
}

TEST(BPProfiles, FitOfTiltedProfileReportsTilt) {
  auto g = Grid::make(DomainSpec::disk(1.0), 1.0 / 256);
  BPParams truth = BPParams::with_helicity(0.2, 0.06);
  truth.rotation = Eigen::Quaterniond(about(Eigen::Vector3d::UnitX(), 0.15) * truth.matrix());
  const auto f = SpinField::sample(g, [&](Vec2 x) { return evaluate_bp(truth, x); }, BoundaryMode::free);
  const FitReport r = fit_bp(f);
  EXPECT_NEAR(r.tilt_angle, 0.15, 1e-2);
  EXPECT_NEAR(r.helicity_angle, 0.2, 1e-2);
}

TEST(BPProfiles, FitFailsWithoutCore) {
  auto g = Grid::make(DomainSpec::disk(1.0), 1.0 / 32);
  EXPECT_THROW(fit_bp(SpinField(g)), FitFailed);
}

TEST(BPProfiles, RescaledRadius) {
  FitReport r;
  r.params.rho = 0.0125;
  EXPECT_DOUBLE_EQ(rescaled_radius(r, 0.05), 0.25);
  r.params.rho = 0.05;
  EXPECT_DOUBLE_EQ(rescaled_radius(r, 0.05), 1.0);
  EXPECT_THROW(rescaled_radius(r, 0.0), InvalidArgument);
}
