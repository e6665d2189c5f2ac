#pragma once

#include "skyrmion/domain.hpp"
#include "skyrmion/grid.hpp"

#include <complex>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

namespace skyrmion {

/// 2(x - a0)/|x - a0|², the field a unit skyrmion at a0 leaves outside Ω.
Vec2 tail_boundary_data(Vec2 a0, Vec2 x);

/// The exact harmonic extension for disks, strips and half-planes (the
/// domain's own coordinates are used, so any center/offset is allowed).
std::optional<Vec2> closed_form_tail(const DomainSpec &domain, Vec2 a0, Vec2 x);

/// Discrete harmonic extension of the tail data on a grid.
struct TailSolution {
  DomainSpec domain;
  Vec2 center;
  std::shared_ptr<const Grid> grid;
  /// u on the padded storage: solved values on the mask, data elsewhere.
  std::vector<double> u1;
  std::vector<double> u2;
  /// Σ |u(q) - u(p)|² over 5-point edges touching the mask
  double energy_interior = 0.0;
  /// ∫ over the complement of the ideal domain of 8/|x - a0|⁴
  double energy_exterior = 0.0;
  double T = 0.0;
  int iterations = 0;
  /// max |5-point Laplacian| of u over the mask, relative to the largest data value
  double max_residual = 0.0;

  Vec2 u(int i, int j) const {
    const std::size_t k = grid->index(i, j);
    return {u1[k], u2[k]};
  }
};

/// Solves the tail problem on a grid of spacing h; the linear solver stops at
/// the given relative residual.
TailSolution solve_tail(const DomainSpec &domain, Vec2 a0, double h, double tolerance = 1e-10);

/// x,y,u1,u2 over interior nodes.
void write_csv(const TailSolution &solution, std::ostream &out);

struct Richardson {
  std::vector<double> h;
  std::vector<double> values;
  double extrapolated = 0.0;
  /// observed order from three levels (1 when the estimate is unusable)
  double order = 1.0;
  bool order_estimated = false;
};

/// Extrapolates values computed at h, h/2, h/4, ... (at least two levels).
Richardson richardson(std::vector<double> h, std::vector<double> values);

/// T(a0) from solve_tail at h, h/2, h/4 followed by Richardson extrapolation.
Richardson tail_energy_extrapolated(const DomainSpec &domain, Vec2 a0, double h, int levels = 3,
                                    double tolerance = 1e-10);

struct WirtingerEstimate {
  /// 8π Re ∂_z u(a0)
  double T = 0.0;
  /// 8π Im ∂_z u(a0)
  double imaginary = 0.0;
};

/// T(a0) = 8π ∂_z u(a0) from finite differences of the solved field.
WirtingerEstimate tail_energy_via_derivative(const TailSolution &solution);

/// Both routes at h, h/2, h/4, ..., each extrapolated.
struct TailRoutes {
  Richardson energy;
  Richardson derivative;
  /// 8π Im ∂_z u(a0) on the finest level
  double imaginary = 0.0;
  double max_residual = 0.0;
};

TailRoutes tail_routes(const DomainSpec &domain, Vec2 a0, double h, int levels = 3,
                       double tolerance = 1e-10);

/// Closed forms for disk, strip and half-plane; UnsupportedKind otherwise.
double closed_form_T(const DomainSpec &domain, Vec2 a0);

struct ArgminOptions {
  /// spacing of the coarse scan over candidate centers
  double coarse_step = 0.05;
  /// Nelder–Mead stops when the simplex is smaller than this
  double refine_tolerance = 1e-6;
  /// grid spacing for numeric tail solves
  double h = 1.0 / 128;
  /// numeric T_min at h, h/2, h/4 extrapolated
  bool extrapolate_value = true;
};

struct TailMinimum {
  Vec2 a0;
  double T = 0.0;
  bool closed_form = false;
};

TailMinimum argmin_T(const DomainSpec &domain, const ArgminOptions &options = {});

struct SkyrmionPrediction {
  Vec2 center;
  double T_min = 0.0;
  double lambda = 0.0;
  double r0 = 0.0;
  double energy0 = 0.0;
  /// helicity of the limiting rotation (0: Néel)
  double helicity = 0.0;
  bool closed_form = false;
};

SkyrmionPrediction prediction_from_T(Vec2 center, double T_min, double lambda);
SkyrmionPrediction predict_skyrmion(const DomainSpec &domain, double lambda,
                                    const ArgminOptions &options = {});

/// r0² T(a0) - 8π r0 cos(helicity); T from the closed form when available,
/// else from an extrapolated solve at spacing h.
double renormalized_energy(double helicity, double r0, Vec2 a0, const DomainSpec &domain,
                           double h = 1.0 / 128);

/// -4 r0² ∮ (x - a0)·ν / |x - a0|⁴ over the ideal boundary.
double free_boundary_deficit(const DomainSpec &domain, double r0, Vec2 a0);

} // namespace skyrmion
