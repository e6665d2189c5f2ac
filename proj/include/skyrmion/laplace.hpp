#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace skyrmion {

/// The 5-point operator 4u - Σ neighbours on a masked nx × ny node set, with
/// homogeneous Dirichlet values off the mask (unit spacing). Multigrid
/// V-cycles serve as an SPD preconditioner for conjugate gradients.
class MaskedPoisson {
public:
  /// mask is row-major nx × ny, nonzero on unknowns.
  MaskedPoisson(int nx, int ny, const std::vector<std::uint8_t> &mask);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }
  int levels() const { return static_cast<int>(levels_.size()); }

  /// y = A x on the mask, 0 elsewhere.
  void apply(std::span<const double> x, std::span<double> y) const;

  /// z = B r, one V-cycle from a zero start.
  void precondition(std::span<const double> r, std::span<double> z) const;

  struct Result {
    int iterations = 0;
    double relative_residual = 0.0;
  };

  /// Preconditioned CG on A x = b starting from the given x.
  Result solve(std::span<const double> b, std::span<double> x, double relative_tolerance,
               int max_iterations = 500) const;

private:
  struct Level {
    int nx = 0;
    int ny = 0;
    double inv_h2 = 1.0;
    // padded by one node on each side
    std::vector<std::uint8_t> mask;
    std::vector<double> u;
    std::vector<double> f;
    std::vector<double> r;
    int stride() const { return nx + 2; }
    std::size_t at(int i, int j) const {
      return static_cast<std::size_t>(j + 1) * static_cast<std::size_t>(nx + 2) + static_cast<std::size_t>(i + 1);
    }
  };

  void smooth(Level &l, bool forward) const;
  void residual(Level &l) const;
  void vcycle(std::size_t level) const;

  int nx_;
  int ny_;
  mutable std::vector<Level> levels_;
};

} // namespace skyrmion
