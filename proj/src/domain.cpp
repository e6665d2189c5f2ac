#include "skyrmion/domain.hpp"

#include "skyrmion/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace skyrmion {

namespace {

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double t = std::clamp(dot(p - a, ab) / norm2(ab), 0.0, 1.0);
  return norm(p - (a + t * ab));
}

double signed_area(const std::vector<Vec2> &v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += cross(v[i], v[(i + 1) % v.size()]);
  }
  return 0.5 * s;
}

BoundaryPiece make_segment(Vec2 a, Vec2 b, Vec2 normal) {
  BoundaryPiece piece;
  piece.kind = BoundaryPiece::Kind::segment;
  piece.p0 = a;
  piece.p1 = b;
  piece.normal = normal;
  return piece;
}

BoundaryPiece make_line(Vec2 point, Vec2 direction, Vec2 normal) {
  BoundaryPiece piece;
  piece.kind = BoundaryPiece::Kind::line;
  piece.p0 = point;
  piece.p1 = direction;
  piece.normal = normal;
  return piece;
}

std::vector<BoundaryPiece> box_pieces(Box b) {
  const Vec2 ll = b.lo;
  const Vec2 lr{b.hi.x, b.lo.y};
  const Vec2 ur = b.hi;
  const Vec2 ul{b.lo.x, b.hi.y};
  return {make_segment(ll, lr, {0, -1}), make_segment(lr, ur, {1, 0}),
          make_segment(ur, ul, {0, 1}), make_segment(ul, ll, {-1, 0})};
}

double box_distance(Box b, Vec2 p) {
  return std::min({p.x - b.lo.x, b.hi.x - p.x, p.y - b.lo.y, b.hi.y - p.y});
}

using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;

double integrate(const std::function<double(double)> &f, double lo, double hi, double tol) {
  if (!(hi > lo)) {
    return 0.0;
  }
  double err = 0.0;
  return Quadrature::integrate(f, lo, hi, 20, tol, &err);
}

} // namespace

std::string_view to_string(DomainKind kind) {
  switch (kind) {
  case DomainKind::disk:
    return "disk";
  case DomainKind::strip:
    return "strip";
  case DomainKind::rectangle:
    return "rectangle";
  case DomainKind::polygon:
    return "polygon";
  case DomainKind::half_plane:
    return "half_plane";
  }
  return "unknown";
}

DomainKind domain_kind_from_string(std::string_view name) {
  for (auto k : {DomainKind::disk, DomainKind::strip, DomainKind::rectangle, DomainKind::polygon,
                 DomainKind::half_plane}) {
    if (to_string(k) == name) {
      return k;
    }
  }
  throw InvalidArgument("unknown domain kind '" + std::string(name) + "'");
}

DomainSpec DomainSpec::disk(double radius, Vec2 center) {
  if (!(radius > 0.0)) {
    throw InvalidArgument("disk radius must be positive");
  }
  DomainSpec d;
  d.kind_ = DomainKind::disk;
  d.center_ = center;
  d.a_ = radius;
  return d;
}

DomainSpec DomainSpec::strip(double width, double length, Vec2 center) {
  if (!(width > 0.0) || !(length > 0.0)) {
    throw InvalidArgument("strip width and truncation length must be positive");
  }
  DomainSpec d;
  d.kind_ = DomainKind::strip;
  d.center_ = center;
  d.a_ = width;
  d.b_ = length;
  return d;
}

DomainSpec DomainSpec::rectangle(double width, double height, Vec2 origin) {
  if (!(width > 0.0) || !(height > 0.0)) {
    throw InvalidArgument("rectangle sides must be positive");
  }
  DomainSpec d;
  d.kind_ = DomainKind::rectangle;
  d.center_ = origin;
  d.a_ = width;
  d.b_ = height;
  return d;
}

DomainSpec DomainSpec::polygon(std::vector<Vec2> vertices) {
  if (vertices.size() < 3) {
    throw InvalidArgument("polygon needs at least three vertices");
  }
  const double area = signed_area(vertices);
  if (std::abs(area) == 0.0) {
    throw InvalidArgument("polygon is degenerate");
  }
  if (area < 0.0) {
    std::reverse(vertices.begin(), vertices.end());
  }
  DomainSpec d;
  d.kind_ = DomainKind::polygon;
  d.vertices_ = std::move(vertices);
  return d;
}

DomainSpec DomainSpec::half_plane(double half_width, double depth, double boundary_y,
                                  double center_x) {
  if (!(half_width > 0.0) || !(depth > 0.0)) {
    throw InvalidArgument("half-plane truncation sizes must be positive");
  }
  DomainSpec d;
  d.kind_ = DomainKind::half_plane;
  d.center_ = {center_x, boundary_y};
  d.a_ = half_width;
  d.b_ = depth;
  return d;
}

bool DomainSpec::in_ideal(Vec2 p) const {
  switch (kind_) {
  case DomainKind::strip:
    return std::abs(p.y - center_.y) < 0.5 * a_;
  case DomainKind::half_plane:
    return p.y < center_.y;
  default:
    return contains(p);
  }
}

bool DomainSpec::contains(Vec2 p) const {
  switch (kind_) {
  case DomainKind::disk:
    return norm2(p - center_) < a_ * a_;
  case DomainKind::strip:
    return std::abs(p.y - center_.y) < 0.5 * a_ && std::abs(p.x - center_.x) < 0.5 * b_;
  case DomainKind::rectangle:
    return p.x > center_.x && p.x < center_.x + a_ && p.y > center_.y && p.y < center_.y + b_;
  case DomainKind::half_plane:
    return p.y < center_.y && p.y > center_.y - b_ && std::abs(p.x - center_.x) < a_;
  case DomainKind::polygon: {
    bool inside = false;
    const auto &v = vertices_;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
      if ((v[i].y > p.y) != (v[j].y > p.y)) {
        const double xc = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
        if (p.x < xc) {
          inside = !inside;
        }
      }
    }
    return inside;
  }
  }
  return false;
}

Box DomainSpec::bounding_box() const {
  switch (kind_) {
  case DomainKind::disk:
    return {{center_.x - a_, center_.y - a_}, {center_.x + a_, center_.y + a_}};
  case DomainKind::strip:
    return {{center_.x - 0.5 * b_, center_.y - 0.5 * a_}, {center_.x + 0.5 * b_, center_.y + 0.5 * a_}};
  case DomainKind::rectangle:
    return {center_, {center_.x + a_, center_.y + b_}};
  case DomainKind::half_plane:
    return {{center_.x - a_, center_.y - b_}, {center_.x + a_, center_.y}};
  case DomainKind::polygon: {
    Box b{vertices_.front(), vertices_.front()};
    for (const auto &v : vertices_) {
      b.lo.x = std::min(b.lo.x, v.x);
      b.lo.y = std::min(b.lo.y, v.y);
      b.hi.x = std::max(b.hi.x, v.x);
      b.hi.y = std::max(b.hi.y, v.y);
    }
    return b;
  }
  }
  return {};
}

double DomainSpec::distance_to_boundary(Vec2 p) const {
  switch (kind_) {
  case DomainKind::disk:
    return std::abs(a_ - norm(p - center_));
  case DomainKind::strip:
  case DomainKind::rectangle:
  case DomainKind::half_plane:
    return std::abs(box_distance(bounding_box(), p));
  case DomainKind::polygon: {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      d = std::min(d, segment_distance(p, vertices_[i], vertices_[(i + 1) % vertices_.size()]));
    }
    return d;
  }
  }
  return 0.0;
}

double DomainSpec::distance_to_ideal_boundary(Vec2 p) const {
  switch (kind_) {
  case DomainKind::strip:
    return std::abs(0.5 * a_ - std::abs(p.y - center_.y));
  case DomainKind::half_plane:
    return std::abs(center_.y - p.y);
  default:
    return distance_to_boundary(p);
  }
}

Vec2 DomainSpec::outward_normal(Vec2 p) const {
  if (kind_ == DomainKind::disk) {
    const Vec2 r = p - center_;
    const double n = norm(r);
    return n > 0.0 ? r / n : Vec2{1.0, 0.0};
  }
  const auto pieces = truncated_boundary();
  double best = std::numeric_limits<double>::infinity();
  Vec2 normal{1.0, 0.0};
  for (const auto &piece : pieces) {
    const double d = segment_distance(p, piece.p0, piece.p1);
    if (d < best) {
      best = d;
      normal = piece.normal;
    }
  }
  return normal;
}

double DomainSpec::inradius() const {
  switch (kind_) {
  case DomainKind::disk:
    return a_;
  case DomainKind::strip:
    return 0.5 * std::min(a_, b_);
  case DomainKind::rectangle:
    return 0.5 * std::min(a_, b_);
  case DomainKind::half_plane:
    return std::min(a_, 0.5 * b_);
  case DomainKind::polygon:
    return distance_to_boundary(incenter());
  }
  return 0.0;
}

Vec2 DomainSpec::incenter() const {
  switch (kind_) {
  case DomainKind::disk:
  case DomainKind::strip:
    return center_;
  case DomainKind::rectangle:
    return {center_.x + 0.5 * a_, center_.y + 0.5 * b_};
  case DomainKind::half_plane:
    return {center_.x, center_.y - std::min(a_, 0.5 * b_)};
  case DomainKind::polygon: {
    // Coarse scan followed by a shrinking compass search on the distance map.
    const Box b = bounding_box();
    const int n = 64;
    Vec2 best = 0.5 * (b.lo + b.hi);
    double best_d = -1.0;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const Vec2 p{b.lo.x + (i + 0.5) * (b.hi.x - b.lo.x) / n,
                     b.lo.y + (j + 0.5) * (b.hi.y - b.lo.y) / n};
        if (contains(p)) {
          const double d = distance_to_boundary(p);
          if (d > best_d) {
            best_d = d;
            best = p;
          }
        }
      }
    }
    double step = std::max(b.hi.x - b.lo.x, b.hi.y - b.lo.y) / n;
    while (step > 1e-12 * (1.0 + norm(best))) {
      bool moved = false;
      for (Vec2 dir : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}}) {
        const Vec2 q = best + step * dir;
        if (contains(q)) {
          const double d = distance_to_boundary(q);
          if (d > best_d) {
            best_d = d;
            best = q;
            moved = true;
          }
        }
      }
      if (!moved) {
        step *= 0.5;
      }
    }
    return best;
  }
  }
  return center_;
}

std::optional<double> DomainSpec::length_scale() const {
  switch (kind_) {
  case DomainKind::disk:
  case DomainKind::strip:
    return a_;
  default:
    return std::nullopt;
  }
}

std::vector<BoundaryPiece> DomainSpec::ideal_boundary() const {
  switch (kind_) {
  case DomainKind::disk: {
    BoundaryPiece c;
    c.kind = BoundaryPiece::Kind::circle;
    c.p0 = center_;
    c.radius = a_;
    return {c};
  }
  case DomainKind::strip:
    return {make_line({center_.x, center_.y + 0.5 * a_}, {1, 0}, {0, 1}),
            make_line({center_.x, center_.y - 0.5 * a_}, {1, 0}, {0, -1})};
  case DomainKind::half_plane:
    return {make_line({center_.x, center_.y}, {1, 0}, {0, 1})};
  default:
    return truncated_boundary();
  }
}

std::vector<BoundaryPiece> DomainSpec::truncated_boundary() const {
  switch (kind_) {
  case DomainKind::disk:
    return ideal_boundary();
  case DomainKind::polygon: {
    std::vector<BoundaryPiece> out;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const Vec2 a = vertices_[i];
      const Vec2 b = vertices_[(i + 1) % vertices_.size()];
      const Vec2 t = (b - a) / norm(b - a);
      out.push_back(make_segment(a, b, {t.y, -t.x}));
    }
    return out;
  }
  default:
    return box_pieces(bounding_box());
  }
}

double boundary_flux(const std::vector<BoundaryPiece> &pieces, Vec2 a,
                     const std::function<double(double)> &kernel_of_r2, double tolerance) {
  constexpr double pi = std::numbers::pi;
  double total = 0.0;
  for (const auto &piece : pieces) {
    switch (piece.kind) {
    case BoundaryPiece::Kind::segment: {
      const Vec2 d = piece.p1 - piece.p0;
      const double len = norm(d);
      const Vec2 t = d / len;
      const double offset = dot(piece.p0 - a, piece.normal);
      auto f = [&](double s) {
        const Vec2 x = piece.p0 + s * t;
        return offset * kernel_of_r2(norm2(x - a));
      };
      const double foot = std::clamp(dot(a - piece.p0, t), 0.0, len);
      total += integrate(f, 0.0, foot, tolerance) + integrate(f, foot, len, tolerance);
      break;
    }
    case BoundaryPiece::Kind::circle: {
      const Vec2 rel = a - piece.p0;
      const double phase = norm(rel) > 0.0 ? std::atan2(rel.y, rel.x) : 0.0;
      const double r = piece.radius;
      auto f = [&](double theta) {
        const Vec2 nu{std::cos(theta + phase), std::sin(theta + phase)};
        const Vec2 x = piece.p0 + r * nu;
        return r * dot(x - a, nu) * kernel_of_r2(norm2(x - a));
      };
      total += integrate(f, -pi, 0.0, tolerance) + integrate(f, 0.0, pi, tolerance);
      break;
    }
    case BoundaryPiece::Kind::line: {
      // Parametrize by the angle seen from a: s = D tan(θ).
      const Vec2 t = piece.p1;
      const double offset = dot(piece.p0 - a, piece.normal);
      const double dist = std::abs(offset);
      if (dist == 0.0) {
        throw InvalidArgument("boundary flux evaluated at a point on the boundary");
      }
      const Vec2 foot = piece.p0 + dot(a - piece.p0, t) * t;
      auto f = [&](double theta) {
        const double c = std::cos(theta);
        const Vec2 x = foot + dist * std::tan(theta) * t;
        return offset * kernel_of_r2(norm2(x - a)) * dist / (c * c);
      };
      total += integrate(f, -0.5 * pi, 0.0, tolerance) + integrate(f, 0.0, 0.5 * pi, tolerance);
      break;
    }
    }
  }
  return total;
}

} // namespace skyrmion
