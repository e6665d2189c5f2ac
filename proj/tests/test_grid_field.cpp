#include "skyrmion/bp_profiles.hpp"
#include "skyrmion/energy.hpp"
#include "skyrmion/errors.hpp"
#include "skyrmion/validation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace skyrmion;

namespace {
constexpr double pi = std::numbers::pi;

// independent copy of the profile; rotation by `helicity` about e3
Vec3 bp(Vec2 x, double rho, double helicity = 0.0) {
  const Vec2 y = x / rho;
  const double r2 = norm2(y);
  const double a = -2.0 * y.x / (1 + r2);
  const double b = -2.0 * y.y / (1 + r2);
  const double c = std::cos(helicity), s = std::sin(helicity);
  return {c * a - s * b, s * a + c * b, (1 - r2) / (1 + r2)};
}

// ∫ over |x| > R of the BP exchange density
double exterior(double rho, double R) { return 8 * pi / (1 + R * R / (rho * rho)); }

std::shared_ptr<const Grid> disk_grid(double h, double radius = 1.0) {
  return Grid::make(DomainSpec::disk(radius), h);
}
} // namespace

TEST(GridField, ConstantFieldHasNoEnergy) {
  auto g = disk_grid(1.0 / 64);
  SpinField f(g);
  EXPECT_EQ(exchange_energy(f), 0.0);
  EXPECT_EQ(dmi_energy(f, 1.0), 0.0);
  EXPECT_EQ(anisotropy_energy(f, 0.1, 1.0), 0.0);
  EXPECT_EQ(degree(f).value, 0.0);
  const auto grad = riemannian_gradient(f, 0.3, 1.0);
  EXPECT_EQ(grad.max_norm(), 0.0);
  const SquareCompletion sc = square_completion_check(f);
  EXPECT_EQ(sc.minus_square, 0.0);
  EXPECT_EQ(sc.plus_square, 0.0);
}

TEST(GridField, GridRejectsNonDividingSpacing) {
  EXPECT_THROW(Grid(DomainSpec::disk(1.0), 0.3), InvalidArgument);
  EXPECT_THROW(Grid(DomainSpec::disk(1.0), -0.1), InvalidArgument);
}

TEST(GridField, BPExchangePlusExteriorIsEightPi) {
  const double rho = 0.02;
  auto g = disk_grid(1.0 / 512);
  const auto f = SpinField::sample(g, [&](Vec2 x) { return bp(x, rho); }, BoundaryMode::free);
  EXPECT_NEAR(exchange_energy(f) + exterior(rho, 1.0), 8 * pi, 0.01 * 8 * pi);
}

TEST(GridField, TruncatedProfileEnergyOnItsCore) {
  const double L = 3.0;
  auto g = Grid::make(DomainSpec::disk(L), 3.0 / 256);
  const auto f = SpinField::sample(g, [&](Vec2 x) { return bp(x, 1.0); }, BoundaryMode::free);
  EXPECT_NEAR(exchange_energy(f), 8 * pi * L * L / (1 + L * L), 0.01 * 8 * pi * 0.9);
}

TEST(GridField, ExchangeConvergenceOrder) {
  const double rho = 0.02;
  std::vector<double> err;
  for (int n : {128, 256, 512}) {
    const auto f = SpinField::sample(disk_grid(1.0 / n), [&](Vec2 x) { return bp(x, rho); }, BoundaryMode::free);
    err.push_back(exchange_energy(f));
  }
  const double p = std::log2(std::abs(err[0] - err[1]) / std::abs(err[1] - err[2]));
  EXPECT_GE(p, 1.8);
}

TEST(GridField, DmiOfNeelProfile) {
  const double rho = 0.02;
  auto g = disk_grid(1.0 / 512);
  // ∫_{|x|<1} φ'·∇φ₃ = 8πρ ∫_0^U u/(1+u)³ du, U = ρ⁻²
  const double U = 1 / (rho * rho);
  const double inside = 8 * pi * (0.5 - 1 / (1 + U) + 0.5 / ((1 + U) * (1 + U)));
  const auto neel = SpinField::sample(g, [&](Vec2 x) { return bp(x, rho); }, BoundaryMode::free);
  EXPECT_NEAR(dmi_energy(neel, 1.0), -2 * rho * inside, 0.02 * 8 * pi * rho);
  const auto flipped = SpinField::sample(g, [&](Vec2 x) { return bp(x, rho, pi); }, BoundaryMode::free);
  EXPECT_NEAR(dmi_energy(flipped, 1.0), 2 * rho * inside, 0.02 * 8 * pi * rho);
  const auto bloch = SpinField::sample(g, [&](Vec2 x) { return bp(x, rho, pi / 2); }, BoundaryMode::free);
  EXPECT_NEAR(dmi_energy(bloch, 1.0), 0.0, 1e-10);
}

TEST(GridField, AnisotropyOfProfileHasLogGrowth) {
  const double rho = 1e-3;
  auto g = disk_grid(1.0 / 1024);
  const auto f = SpinField::sample(g, [&](Vec2 x) { return bp(x, rho); });
  const double unweighted = anisotropy_energy(f, 0.5, 1.0) / anisotropy_prefactor(0.5, 1.0);
  const double ratio = unweighted / (8 * pi * rho * rho * std::abs(std::log(rho)));
  EXPECT_GE(ratio, 0.9);
  EXPECT_LE(ratio, 1.1);
  EXPECT_EQ(anisotropy_energy(f, 0.5, 0.0), 0.0);
  EXPECT_THROW(anisotropy_energy(f, 1.5, 1.0), InvalidArgument);
}

TEST(GridField, TotalIsSumOfTerms) {
  auto g = disk_grid(1.0 / 64);
  const auto f = random_admissible_field(g, 11);
  const EnergyBreakdown e = total_energy(f, 0.2, 0.8);
  EXPECT_DOUBLE_EQ(e.total, e.exchange + e.dmi + e.anisotropy);
  EXPECT_EQ(e.exchange, exchange_energy(f));
  EXPECT_EQ(e.dmi, dmi_energy(f, 0.2));
  EXPECT_EQ(e.anisotropy, anisotropy_energy(f, 0.2, 0.8));
  VectorField grad(g);
  const EnergyBreakdown e2 = energy_and_gradient(f, 0.2, 0.8, grad);
  EXPECT_NEAR(e2.total, e.total, 1e-12 * std::abs(e.total));
}

TEST(GridField, DegreeOfProfiles) {
  auto g = disk_grid(1.0 / 512);
  const auto f = SpinField::sample(g, [&](Vec2 x) { return bp(x, 0.05); }, BoundaryMode::free);
  EXPECT_NEAR(degree(f).value, 1.0, 1e-2);
  // truncated profile, 2Lρ = 0.8 < 1: admissible
  const double L = 4.0, rho = 0.1;
  const auto t = SpinField::sample(g, [&](Vec2 x) { return evaluate_truncated_bp(L, rho, {}, x); });
  EXPECT_NEAR(degree(t).value, 1.0, 1e-2);
  EXPECT_EQ(degree(t).rounded, 1);
}

TEST(GridField, GradientMatchesDifferenceQuotients) {
  auto g = disk_grid(1.0 / 32);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const BoundaryMode mode = seed % 2 ? BoundaryMode::pinned : BoundaryMode::free;
    const auto f = random_admissible_field(g, seed, mode);
    for (std::uint64_t dir = 0; dir < 3; ++dir) {
      EXPECT_LE(gradient_fd_error(f, 0.3, 0.7, 100 * seed + dir), 1e-6) << "seed " << seed;
    }
  }
}

TEST(GridField, InvariantsUnitNormAndPinning) {
  auto g = disk_grid(1.0 / 64);
  auto f = random_admissible_field(g, 5);
  EXPECT_LE(f.max_norm_deviation(), 1e-12);
  EXPECT_TRUE(f.exterior_pinned());
  const auto grad = riemannian_gradient(f, 0.3, 0.5);
  // gradient vanishes off the mask and is tangent
  for (std::size_t k = 0; k < g->size(); ++k) {
    if (!g->interior(k)) {
      ASSERT_EQ(norm(grad.at(k)), 0.0);
    } else {
      ASSERT_NEAR(dot(grad.at(k), f.at(k)), 0.0, 1e-12 * (1 + norm(grad.at(k))));
    }
  }
  f.retract(grad, -0.5);
  EXPECT_LE(f.max_norm_deviation(), 1e-12);
  EXPECT_TRUE(f.exterior_pinned());
  EXPECT_THROW(f.set(-1, -1, e3), InvalidArgument);
}

TEST(GridField, SquareCompletionIdentity) {
  auto g = disk_grid(1.0 / 256);
  for (std::uint64_t seed : {3u, 4u}) {
    const SquareCompletion sc = square_completion_check(random_admissible_field(g, seed));
    EXPECT_LE(sc.relative_residual(), 1e-3);
  }
  // the vanishing square for the degree +1 profile
  const auto f = SpinField::sample(g, [&](Vec2 x) { return bp(x, 0.05); }, BoundaryMode::free);
  const SquareCompletion sc = square_completion_check(f);
  EXPECT_LE(sc.plus_square, 1e-3 * sc.dirichlet);
  EXPECT_NEAR(sc.minus_square, 16 * pi, 0.01 * 16 * pi);
}

TEST(GridField, SnapshotsRoundTrip) {
  auto g = disk_grid(1.0 / 32);
  const auto f = random_admissible_field(g, 9);
  const auto path = std::filesystem::temp_directory_path() / "skyrmion_field_roundtrip.bin";
  write_binary(f, path);
  const auto back = read_binary(g, path);
  for (std::size_t k = 0; k < g->size(); ++k) {
    ASSERT_EQ(norm(f.at(k) - back.at(k)), 0.0);
  }
  std::filesystem::remove(path);
  std::ostringstream csv;
  write_csv(f, csv);
  EXPECT_EQ(csv.str().rfind("x,y,m1,m2,m3\n", 0), 0u);
}

TEST(GridField, OutwardNormalsAreUnit) {
  for (const DomainSpec &d : {DomainSpec::disk(1.0), DomainSpec::rectangle(2.0, 1.0),
                              DomainSpec::polygon({{0, 0}, {2, 0}, {1, 1.5}})}) {
    const Box b = d.bounding_box();
    for (int i = 0; i < 20; ++i) {
      const Vec2 p{b.lo.x + (b.hi.x - b.lo.x) * (i + 0.5) / 20, b.lo.y + (b.hi.y - b.lo.y) * 0.37};
      EXPECT_NEAR(norm(d.outward_normal(p)), 1.0, 1e-14);
    }
  }
}
