#include "skyrmion/bp_profiles.hpp"

#include "skyrmion/energy.hpp"
#include "skyrmion/errors.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>

namespace skyrmion {

namespace {

constexpr double pi = std::numbers::pi;

Eigen::Quaterniond exp_map(const Eigen::Vector3d &w) {
  const double angle = w.norm();
  if (angle == 0.0) {
    return Eigen::Quaterniond::Identity();
  }
  return Eigen::Quaterniond(Eigen::AngleAxisd(angle, w / angle));
}

// ∮ (x-a)·ν 4ρ²/(r²(ρ²+r²)); the pure r⁻⁴ kernel once ρ is negligible.
double exterior_flux(const std::vector<BoundaryPiece> &pieces, double rho, Vec2 a, double dist) {
  const double r2 = rho * rho;
  if (rho <= 1e-3 * dist) {
    return boundary_flux(pieces, a, [r2](double s) { return 4.0 * r2 / (s * s); });
  }
  return boundary_flux(pieces, a, [r2](double s) { return 4.0 * r2 / (s * (r2 + s)); });
}

// Profile sampled on every storage node (ghosts included).
VectorField sample_storage(const Grid &g, const std::shared_ptr<const Grid> &gp, const BPParams &p) {
  VectorField out(gp);
  const Eigen::Matrix3d R = p.matrix();
  const double inv = 1.0 / p.rho;
  for (int j = -Grid::pad; j < g.ny() + Grid::pad; ++j) {
    for (int i = -Grid::pad; i < g.nx() + Grid::pad; ++i) {
      const Vec3 phi = standard_bp((g.position(i, j) - p.center) * inv);
      const Eigen::Vector3d v = R * Eigen::Vector3d(phi.x, phi.y, phi.z);
      out.set(g.index(i, j), {v.x(), v.y(), v.z()});
    }
  }
  return out;
}

// Pinned fields are compared on the whole plane (m = -e3 outside Ω); free
// fields only carry information on Ω.
struct Objective {
  const SpinField &field;
  Box box;

  bool pinned() const { return field.boundary_mode() == BoundaryMode::pinned; }

  double form(const VectorField &a, const VectorField &b) const {
    return pinned() ? exchange_form(a, b) : masked_exchange_form(a, b);
  }

  BPParams shifted(const BPParams &base, const std::array<double, 6> &d) const {
    BPParams p = base;
    p.rotation = (base.rotation * exp_map({d[0], d[1], d[2]})).normalized();
    p.rho = base.rho * std::exp(d[3]);
    p.center = base.center + Vec2{d[4], d[5]};
    return p;
  }

  VectorField residual(const BPParams &p) const {
    const Grid &g = field.grid();
    VectorField e = sample_storage(g, field.grid_ptr(), p);
    for (int c = 0; c < 3; ++c) {
      const auto m = field.component(c);
      auto &plane = e.c[static_cast<std::size_t>(c)];
      for (std::size_t k = 0; k < plane.size(); ++k) {
        plane[k] = m[k] - plane[k];
      }
    }
    return e;
  }

  double exterior(const BPParams &p) const {
    if (!pinned()) {
      return 0.0;
    }
    if (!(p.center.x > box.lo.x && p.center.x < box.hi.x && p.center.y > box.lo.y &&
          p.center.y < box.hi.y)) {
      return std::numeric_limits<double>::infinity();
    }
    return exterior_bp_energy(p, box);
  }
};

Vec3 to_vec(const Eigen::Vector3d &v) { return {v.x(), v.y(), v.z()}; }

} // namespace

BPParams BPParams::with_helicity(double helicity, double rho, Vec2 center) {
  BPParams p;
  p.rotation = Eigen::Quaterniond(Eigen::AngleAxisd(helicity, Eigen::Vector3d::UnitZ()));
  p.rho = rho;
  p.center = center;
  return p;
}

Vec3 BPParams::rotate(Vec3 v) const { return to_vec(matrix() * Eigen::Vector3d(v.x, v.y, v.z)); }

void BPParams::validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw InvalidArgument("BP radius rho must be positive");
  }
  if (std::abs(rotation.norm() - 1.0) > 1e-10) {
    throw InvalidArgument("BP rotation must be a unit quaternion");
  }
}

Vec3 standard_bp(Vec2 y) {
  const double r2 = norm2(y);
  const double d = 1.0 / (1.0 + r2);
  return {-2.0 * y.x * d, -2.0 * y.y * d, (1.0 - r2) * d};
}

Vec3 evaluate_bp(const BPParams &params, Vec2 x) {
  return params.rotate(standard_bp((x - params.center) / params.rho));
}

double truncated_profile(double L, double r) {
  if (r < L) {
    return 2.0 * r / (1.0 + r * r);
  }
  if (r < 2.0 * L) {
    return 2.0 * (2.0 * L - r) / (1.0 + L * L);
  }
  return 0.0;
}

Vec3 evaluate_truncated_bp(double L, double rho, Vec2 a, Vec2 x) {
  if (!(L > 1.0)) {
    throw InvalidArgument("truncation parameter L must exceed 1");
  }
  if (!(rho > 0.0)) {
    throw InvalidArgument("radius rho must be positive");
  }
  const Vec2 y = (x - a) / rho;
  const double r = norm(y);
  if (r == 0.0) {
    return e3;
  }
  const double f = truncated_profile(L, r);
  const double s = r < 1.0 ? 1.0 : (r > 1.0 ? -1.0 : 0.0);
  if (r < L) {
    const double r2 = r * r;
    return {-f * y.x / r, -f * y.y / r, (1.0 - r2) / (1.0 + r2)};
  }
  return {-f * y.x / r, -f * y.y / r, s * std::sqrt(std::max(0.0, 1.0 - f * f))};
}

double exterior_bp_energy(const BPParams &params, const DomainSpec &domain) {
  params.validate();
  if (!domain.in_ideal(params.center)) {
    throw InvalidArgument("profile center must lie inside the domain");
  }
  return exterior_flux(domain.ideal_boundary(), params.rho, params.center,
                       domain.distance_to_ideal_boundary(params.center));
}

double exterior_bp_energy(const BPParams &params, const Box &box) {
  params.validate();
  const DomainSpec rect = DomainSpec::rectangle(box.hi.x - box.lo.x, box.hi.y - box.lo.y, box.lo);
  if (!rect.contains(params.center)) {
    throw InvalidArgument("profile center must lie inside the box");
  }
  return exterior_flux(rect.ideal_boundary(), params.rho, params.center,
                       rect.distance_to_boundary(params.center));
}

void split_rotation(const Eigen::Matrix3d &R, double &helicity, double &tilt) {
  const Eigen::Vector3d n = R.col(2);
  tilt = std::acos(std::clamp(n.z(), -1.0, 1.0));
  Eigen::Matrix3d tilt_rot;
  const Eigen::Vector3d axis = Eigen::Vector3d::UnitZ().cross(n);
  if (axis.norm() < 1e-14) {
    tilt_rot = n.z() > 0 ? Eigen::Matrix3d::Identity()
                         : Eigen::Matrix3d(Eigen::AngleAxisd(pi, Eigen::Vector3d::UnitX()));
  } else {
    tilt_rot = Eigen::AngleAxisd(tilt, axis.normalized()).toRotationMatrix();
  }
  const Eigen::Matrix3d about_e3 = tilt_rot.transpose() * R;
  helicity = std::atan2(about_e3(1, 0), about_e3(0, 0));
}

FitReport fit_bp(const SpinField &field) {
  const Grid &g = field.grid();

  // Moments of the core region {m3 > 0}.
  double count = 0.0;
  Vec2 centroid;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (g.interior(i, j) && field.at(i, j).z > 0.0) {
        centroid += g.position(i, j);
        count += 1.0;
      }
    }
  }
  if (count == 0.0) {
    throw FitFailed("no skyrmion core: the region {m3 > 0} is empty");
  }
  centroid = centroid / count;
  const double area = count * g.h() * g.h();

  Eigen::Matrix2d M = Eigen::Matrix2d::Zero();
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.interior(i, j)) {
        continue;
      }
      const Vec2 d = g.position(i, j) - centroid;
      const double r = norm(d);
      if (r == 0.0) {
        continue;
      }
      const Vec3 m = field.at(i, j);
      M += Eigen::Vector2d(m.x, m.y) * Eigen::Vector2d(d.x / r, d.y / r).transpose();
    }
  }

  BPParams p = BPParams::with_helicity(std::atan2(-(M(1, 0) - M(0, 1)), -(M(0, 0) + M(1, 1))),
                                       std::sqrt(area / pi), centroid);

  const double ph = Grid::pad * g.h();
  const Objective obj{field,
                      Box{{g.origin().x - ph, g.origin().y - ph},
                          {g.origin().x + g.nx() * g.h() + ph, g.origin().y + g.ny() * g.h() + ph}}};

  VectorField e = obj.residual(p);
  double f = obj.form(e, e) + obj.exterior(p);
  const double f0 = f;

  double mu = 1e-3;
  int it = 0;
  bool done = false;
  for (; it < 60 && !done; ++it) {
    std::array<VectorField, 6> J;
    std::array<double, 6> steps{1e-6, 1e-6, 1e-6, 1e-6, 1e-6 * p.rho, 1e-6 * p.rho};
    std::array<double, 6> ext_grad{};
    for (std::size_t q = 0; q < 6; ++q) {
      std::array<double, 6> d{};
      d[q] = steps[q];
      const BPParams plus = obj.shifted(p, d);
      d[q] = -steps[q];
      const BPParams minus = obj.shifted(p, d);
      J[q] = sample_storage(g, field.grid_ptr(), plus);
      const VectorField lo = sample_storage(g, field.grid_ptr(), minus);
      for (int c = 0; c < 3; ++c) {
        auto &plane = J[q].c[static_cast<std::size_t>(c)];
        const auto &other = lo.c[static_cast<std::size_t>(c)];
        for (std::size_t k = 0; k < plane.size(); ++k) {
          plane[k] = (plane[k] - other[k]) / (2.0 * steps[q]);
        }
      }
      if (q >= 3) {
        ext_grad[q] = (obj.exterior(plus) - obj.exterior(minus)) / (2.0 * steps[q]);
      }
    }
    Eigen::Matrix<double, 6, 6> G;
    Eigen::Matrix<double, 6, 1> b;
    for (std::size_t r = 0; r < 6; ++r) {
      b(static_cast<Eigen::Index>(r)) = obj.form(J[r], e) - 0.5 * ext_grad[r];
      for (std::size_t c = r; c < 6; ++c) {
        const double v = obj.form(J[r], J[c]);
        G(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
        G(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = v;
      }
    }

    bool accepted = false;
    double last_step = 0.0;
    for (int tries = 0; tries < 12 && !accepted; ++tries) {
      Eigen::Matrix<double, 6, 6> A = G;
      for (int r = 0; r < 6; ++r) {
        A(r, r) *= 1.0 + mu;
      }
      const Eigen::Matrix<double, 6, 1> delta = A.ldlt().solve(b);
      std::array<double, 6> d{};
      for (std::size_t q = 0; q < 6; ++q) {
        d[q] = delta(static_cast<Eigen::Index>(q));
      }
      const BPParams trial = obj.shifted(p, d);
      VectorField et = obj.residual(trial);
      const double ft = obj.form(et, et) + obj.exterior(trial);
      if (std::isfinite(ft) && ft < f) {
        last_step = delta.norm();
        const double gain = f - ft;
        p = trial;
        e = std::move(et);
        f = ft;
        mu = std::max(mu / 4.0, 1e-9);
        accepted = true;
        done = gain <= 1e-13 * f0 || last_step < 1e-12;
      } else {
        mu *= 8.0;
      }
    }
    done = done || !accepted;
  }

  if (!std::isfinite(f) || f > f0) {
    throw FitFailed("profile fit did not reduce the Dirichlet distance");
  }

  FitReport rep;
  rep.params = p;
  rep.params.rotation.normalize();
  rep.dirichlet_distance = std::sqrt(std::max(0.0, f));
  rep.initial_distance = std::sqrt(std::max(0.0, f0));
  rep.excess = exchange_energy(field) - 8.0 * pi;
  rep.iterations = it;
  split_rotation(rep.params.matrix(), rep.helicity_angle, rep.tilt_angle);
  return rep;
}

double rescaled_radius(const FitReport &fit, double kappa) {
  if (!(kappa > 0.0)) {
    throw InvalidArgument("kappa must be positive");
  }
  return fit.params.rho / kappa;
}

} // namespace skyrmion
