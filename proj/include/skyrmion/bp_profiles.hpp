#pragma once

#include "skyrmion/domain.hpp"
#include "skyrmion/spin_field.hpp"

#include <Eigen/Geometry>

namespace skyrmion {

/// Rotation, radius and center of a Belavin–Polyakov profile R Φ((x - a)/ρ).
struct BPParams {
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  double rho = 1.0;
  Vec2 center;

  /// Néel profile rotated by `helicity` about e3.
  static BPParams with_helicity(double helicity, double rho, Vec2 center = {});

  Eigen::Matrix3d matrix() const { return rotation.normalized().toRotationMatrix(); }
  Vec3 rotate(Vec3 v) const;

  /// Throws InvalidArgument unless rho > 0 and the rotation is a unit quaternion.
  void validate() const;
};

/// Φ(y) = (-2y/(1+|y|²), (1-|y|²)/(1+|y|²)).
Vec3 standard_bp(Vec2 y);

Vec3 evaluate_bp(const BPParams &params, Vec2 x);

/// The three-piece radial profile: 2r/(1+r²), then linear down to 0 at 2L.
double truncated_profile(double L, double r);

/// Φ_L((x - a)/ρ); identically -e3 for |x - a| ≥ 2Lρ.
Vec3 evaluate_truncated_bp(double L, double rho, Vec2 a, Vec2 x);

/// |∇φ|² of a profile with radius ρ at squared distance r2 from its center.
inline double bp_energy_density(double rho, double r2) {
  const double d = rho * rho + r2;
  return 8.0 * rho * rho / (d * d);
}

/// ∫ over the complement of the (ideal) domain of |∇φ|², reduced to the
/// boundary integral 4ρ² ∮ (x-a)·ν / (|x-a|² (ρ² + |x-a|²)).
double exterior_bp_energy(const BPParams &params, const DomainSpec &domain);

/// Same integral over the complement of an axis-aligned box containing a.
double exterior_bp_energy(const BPParams &params, const Box &box);

struct FitReport {
  BPParams params;
  /// D(m; ℬ), the gradient-L² distance to the fitted profile
  double dirichlet_distance = 0.0;
  /// Z(m) = ∫|∇m|² - 8π
  double excess = 0.0;
  double helicity_angle = 0.0;
  double tilt_angle = 0.0;
  int iterations = 0;
  double initial_distance = 0.0;
};

/// Helicity α and tilt θ from R = R_tilt · R_e3(α).
void split_rotation(const Eigen::Matrix3d &R, double &helicity, double &tilt);

/// Closest Belavin–Polyakov profile in the gradient-L² sense.
FitReport fit_bp(const SpinField &field);

double rescaled_radius(const FitReport &fit, double kappa);

} // namespace skyrmion
