#pragma once

#include "skyrmion/domain.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace skyrmion {

/// Uniform cell-centered grid over the bounding box of a domain.
///
/// Nodes sit at cell centers; a node is interior iff its center lies in the
/// (truncated) domain. Storage carries `pad` ghost layers on every side so
/// that the widest energy stencils never need bounds checks.
class Grid {
public:
  static constexpr int pad = 8;

  Grid(DomainSpec domain, double h);

  static std::shared_ptr<const Grid> make(DomainSpec domain, double h) {
    return std::make_shared<const Grid>(std::move(domain), h);
  }

  const DomainSpec &domain() const { return domain_; }
  double h() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  Vec2 origin() const { return origin_; }

  int stride() const { return nx_ + 2 * pad; }
  int rows() const { return ny_ + 2 * pad; }
  std::size_t size() const { return static_cast<std::size_t>(stride()) * rows(); }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j + pad) * stride() + static_cast<std::size_t>(i + pad);
  }
  Vec2 position(int i, int j) const {
    return {origin_.x + (i + 0.5) * h_, origin_.y + (j + 0.5) * h_};
  }
  bool in_storage(int i, int j) const {
    return i >= -pad && i < nx_ + pad && j >= -pad && j < ny_ + pad;
  }
  bool interior(int i, int j) const { return in_storage(i, j) && mask_[index(i, j)] != 0; }
  bool interior(std::size_t idx) const { return mask_[idx] != 0; }

  /// Padded mask, 1 on interior nodes.
  const std::vector<std::uint8_t> &mask() const { return mask_; }
  std::size_t interior_count() const { return interior_count_; }

  /// Fractional grid coordinates (node (i, j) at integer (i, j)).
  Vec2 to_grid_coords(Vec2 p) const {
    return {(p.x - origin_.x) / h_ - 0.5, (p.y - origin_.y) / h_ - 0.5};
  }

private:
  DomainSpec domain_;
  double h_;
  int nx_ = 0;
  int ny_ = 0;
  Vec2 origin_;
  std::vector<std::uint8_t> mask_;
  std::size_t interior_count_ = 0;
};

} // namespace skyrmion
