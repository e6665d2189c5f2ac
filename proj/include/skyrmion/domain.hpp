#pragma once

#include "skyrmion/vec.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace skyrmion {

enum class DomainKind { disk, strip, rectangle, polygon, half_plane };

std::string_view to_string(DomainKind kind);
DomainKind domain_kind_from_string(std::string_view name);

struct Box {
  Vec2 lo;
  Vec2 hi;
};

/// One smooth piece of an ideal boundary, used for line integrals over ∂Ω.
struct BoundaryPiece {
  enum class Kind { segment, circle, line };
  Kind kind = Kind::segment;
  Vec2 p0;         // segment start, circle center, or a point on the line
  Vec2 p1;         // segment end; for a line, its unit direction
  double radius = 0.0;
  Vec2 normal;     // outward normal of Ω for segments and lines
};

/// Geometry of the planar domain Ω.
///
/// Strips and half-planes are unbounded; they carry a truncation box that
/// defines the computational domain. `contains` answers for the truncated
/// domain, `in_ideal` for the unbounded one.
class DomainSpec {
public:
  static DomainSpec disk(double radius, Vec2 center = {});
  /// Strip of the given width around the line y = center.y, truncated to
  /// |x - center.x| < length / 2.
  static DomainSpec strip(double width, double length, Vec2 center = {});
  /// Axis-aligned rectangle with lower-left corner `origin`.
  static DomainSpec rectangle(double width, double height, Vec2 origin = {});
  /// Simple polygon; vertices may be given in either orientation.
  static DomainSpec polygon(std::vector<Vec2> vertices);
  /// Half-plane {y < boundary_y}, truncated to |x - center_x| < half_width and
  /// y > boundary_y - depth.
  static DomainSpec half_plane(double half_width, double depth, double boundary_y = 0.0,
                               double center_x = 0.0);

  DomainKind kind() const { return kind_; }

  bool contains(Vec2 p) const;
  bool in_ideal(Vec2 p) const;
  /// True for points of the unbounded domain cut away by the truncation box.
  bool in_truncation(Vec2 p) const { return in_ideal(p) && !contains(p); }

  Box bounding_box() const;

  /// Distance to the boundary of the computational (truncated) domain.
  double distance_to_boundary(Vec2 p) const;
  /// Distance to the ideal boundary (ignores truncation edges).
  double distance_to_ideal_boundary(Vec2 p) const;

  /// Outward unit normal of the boundary piece nearest to p.
  Vec2 outward_normal(Vec2 p) const;

  double inradius() const;
  Vec2 incenter() const;

  /// The length ℓ entering the closed-form results: disk radius, strip width.
  std::optional<double> length_scale() const;

  Vec2 center() const { return center_; }
  double radius() const { return a_; }
  double width() const { return a_; }
  double height() const { return b_; }
  double truncation_length() const { return b_; }
  double boundary_y() const { return center_.y; }
  double half_width() const { return a_; }
  double depth() const { return b_; }
  const std::vector<Vec2> &vertices() const { return vertices_; }

  /// Pieces of the ideal boundary (infinite lines for strips/half-planes).
  std::vector<BoundaryPiece> ideal_boundary() const;

  /// Boundary of the truncated domain as finite pieces.
  std::vector<BoundaryPiece> truncated_boundary() const;

  bool operator==(const DomainSpec &) const = default;

private:
  DomainKind kind_ = DomainKind::disk;
  Vec2 center_;
  double a_ = 0.0;
  double b_ = 0.0;
  std::vector<Vec2> vertices_;
};

/// ∮ (x - a)·ν(x) k(|x - a|²) dℋ¹(x) over the given boundary pieces, by
/// adaptive Gauss–Kronrod quadrature split at the point nearest to a.
double boundary_flux(const std::vector<BoundaryPiece> &pieces, Vec2 a,
                     const std::function<double(double)> &kernel_of_r2,
                     double tolerance = 1e-13);

} // namespace skyrmion
