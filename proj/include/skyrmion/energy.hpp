#pragma once

#include "skyrmion/spin_field.hpp"

#include <array>

namespace skyrmion {

/// Finite-difference weights shared by every energy term.
///
/// Exchange: Σ_k w_k |m(x + k h e) - m(x)|² per axis, an
/// edge form of ∫|∂m|² (eighth order). First derivatives: Σ_k c_k (f(x + k) - f(x - k)) / h.
namespace stencil {
inline constexpr int reach = 4;
inline constexpr std::array<double, 4> exchange_weights{1.6, -0.2, 8.0 / 315.0, -1.0 / 560.0};
inline constexpr std::array<double, 4> derivative_weights{0.8, -0.2, 4.0 / 105.0, -1.0 / 280.0};
} // namespace stencil

struct EnergyBreakdown {
  double exchange = 0.0;
  double dmi = 0.0;
  double anisotropy = 0.0;
  double total = 0.0;
  double kappa = 0.0;
  double lambda = 0.0;
};

struct DegreeReport {
  double value = 0.0;
  /// |value - round(value)|
  double residual = 0.0;
  long rounded = 0;
};

struct SquareCompletion {
  /// ∫|∂₁m - m×∂₂m|², equals ∫|∇m|² + 8π𝒩(m)
  double minus_square = 0.0;
  /// ∫|∂₁m + m×∂₂m|², equals ∫|∇m|² - 8π𝒩(m); vanishes on degree +1 harmonic maps
  double plus_square = 0.0;
  /// exchange_energy(field)
  double dirichlet = 0.0;
  double degree = 0.0;

  double minus_residual() const;
  double plus_residual() const;
  /// max residual divided by the Dirichlet energy
  double relative_residual() const;
};

/// Discrete ∫|∇m|² with ghost values -e3 (pinned) or over in-mask edges (free).
double exchange_energy(const SpinField &field);

/// -2κ Σ m'·∇m₃ h², centered differences.
double dmi_energy(const SpinField &field, double kappa);

/// (λ/|log κ|) Σ |m'|² h². Requires 0 < κ < 1 unless λ = 0.
double anisotropy_energy(const SpinField &field, double kappa, double lambda);

/// λ/|log κ| with the same argument checks as anisotropy_energy.
double anisotropy_prefactor(double kappa, double lambda);

EnergyBreakdown total_energy(const SpinField &field, double kappa, double lambda);

/// (1/4π) Σ m·(∂₁m × ∂₂m) h².
DegreeReport degree(const SpinField &field);

/// Total energy plus the per-node Euclidean gradient of the discrete energy.
/// Gradient entries outside the mask are zero.
EnergyBreakdown energy_and_gradient(const SpinField &field, double kappa, double lambda,
                                    VectorField &gradient);

/// Euclidean gradient projected onto the tangent planes, g - (g·m)m.
VectorField riemannian_gradient(const SpinField &field, double kappa, double lambda);

/// In-place tangent projection of a per-node vector field.
void project_to_tangent(const SpinField &field, VectorField &v);

SquareCompletion square_completion_check(const SpinField &field);

/// The symmetric bilinear form behind exchange_energy, over all edges of the
/// padded storage: Σ_k w_k (a(x+k) - a(x))·(b(x+k) - b(x)).
double exchange_form(const VectorField &a, const VectorField &b);

/// The same form restricted to edges with both endpoints in the mask.
double masked_exchange_form(const VectorField &a, const VectorField &b);

} // namespace skyrmion
