#pragma once

#include "skyrmion/grid.hpp"
#include "skyrmion/vec.hpp"

#include <array>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace skyrmion {

/// Whether nodes outside the mask act as the Dirichlet data -e3 (class 𝒜)
/// or are ignored by every energy term (free boundary).
enum class BoundaryMode { pinned, free };

/// Three scalar planes on the padded storage of a grid.
struct VectorField {
  std::shared_ptr<const Grid> grid;
  std::array<std::vector<double>, 3> c;

  VectorField() = default;
  explicit VectorField(std::shared_ptr<const Grid> g)
      : grid(std::move(g)), c{std::vector<double>(grid->size(), 0.0),
                              std::vector<double>(grid->size(), 0.0),
                              std::vector<double>(grid->size(), 0.0)} {}

  Vec3 at(std::size_t k) const { return {c[0][k], c[1][k], c[2][k]}; }
  void set(std::size_t k, Vec3 v) {
    c[0][k] = v.x;
    c[1][k] = v.y;
    c[2][k] = v.z;
  }
  /// Largest pointwise Euclidean norm.
  double max_norm() const;
  /// Sum over nodes of a·b.
  double dot(const VectorField &other) const;
};

/// S²-valued magnetization sampled on a grid.
///
/// Every node outside the interior mask holds -e3 and is never written.
class SpinField {
public:
  explicit SpinField(std::shared_ptr<const Grid> grid, BoundaryMode mode = BoundaryMode::pinned);

  /// Samples f at the interior nodes and normalizes.
  static SpinField sample(std::shared_ptr<const Grid> grid, const std::function<Vec3(Vec2)> &f,
                          BoundaryMode mode = BoundaryMode::pinned);

  const Grid &grid() const { return *grid_; }
  const std::shared_ptr<const Grid> &grid_ptr() const { return grid_; }

  BoundaryMode boundary_mode() const { return mode_; }
  void set_boundary_mode(BoundaryMode mode) { mode_ = mode; }

  Vec3 at(std::size_t k) const { return {m_[0][k], m_[1][k], m_[2][k]}; }
  Vec3 at(int i, int j) const { return at(grid_->index(i, j)); }

  /// Writes a normalized value; throws for nodes outside the mask.
  void set(int i, int j, Vec3 v);
  void set(std::size_t k, Vec3 v);

  std::span<const double> component(int c) const { return m_[static_cast<std::size_t>(c)]; }

  /// Interior-node update m ← normalize(m + step·d); exterior untouched.
  void retract(const VectorField &direction, double step);

  void renormalize();
  double max_norm_deviation() const;
  /// True when every exterior node is exactly -e3.
  bool exterior_pinned() const;

private:
  friend SpinField read_binary(std::shared_ptr<const Grid>, const std::filesystem::path &);

  std::shared_ptr<const Grid> grid_;
  BoundaryMode mode_;
  std::array<std::vector<double>, 3> m_;
};

/// Bilinear resampling: result(x) = normalize(src(map(x))) at interior nodes,
/// with -e3 for points outside the source storage.
SpinField resample(const SpinField &src, std::shared_ptr<const Grid> target,
                   const std::function<Vec2(Vec2)> &map);

/// CSV table x,y,m1,m2,m3 over interior nodes, 17 significant digits.
void write_csv(const SpinField &field, std::ostream &out);
void write_csv(const SpinField &field, const std::filesystem::path &path);

/// Flat little-endian binary snapshot: magic, nx, ny, h, origin, then
/// m1,m2,m3 per node (row-major over the unpadded grid).
void write_binary(const SpinField &field, const std::filesystem::path &path);
SpinField read_binary(std::shared_ptr<const Grid> grid, const std::filesystem::path &path);

} // namespace skyrmion
