#include "skyrmion/energy.hpp"

#include "skyrmion/errors.hpp"
#include "skyrmion/summation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace skyrmion {

namespace {

using stencil::derivative_weights;
using stencil::exchange_weights;
using stencil::reach;

constexpr double four_pi = 4.0 * std::numbers::pi;

// A first-derivative stencil at one node: offsets into the padded storage.
struct NodeStencil {
  std::array<std::ptrdiff_t, 2 * reach> offset{};
  std::array<double, 2 * reach> coef{};
  int count = 0;

  void add(std::ptrdiff_t off, double c) {
    offset[static_cast<std::size_t>(count)] = off;
    coef[static_cast<std::size_t>(count)] = c;
    ++count;
  }
  double apply(const double *f, std::size_t k) const {
    double s = 0.0;
    for (int n = 0; n < count; ++n) {
      s += coef[static_cast<std::size_t>(n)] * f[static_cast<std::ptrdiff_t>(k) + offset[static_cast<std::size_t>(n)]];
    }
    return s;
  }
};

// Free-boundary derivative at an interior node: the widest centered stencil
// whose nodes all lie in the mask, else a one-sided difference.
NodeStencil free_stencil(const Grid &g, std::size_t k, std::ptrdiff_t step) {
  const auto &mask = g.mask();
  int depth = 0;
  while (depth < reach && mask[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k) + (depth + 1) * step)] &&
         mask[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k) - (depth + 1) * step)]) {
    ++depth;
  }
  NodeStencil s;
  static constexpr std::array<std::array<double, 4>, 4> centered{
      std::array<double, 4>{0.5, 0.0, 0.0, 0.0}, std::array<double, 4>{2.0 / 3.0, -1.0 / 12.0, 0.0, 0.0},
      std::array<double, 4>{0.75, -0.15, 1.0 / 60.0, 0.0}, derivative_weights};
  if (depth > 0) {
    for (int j = 1; j <= depth; ++j) {
      const double c = centered[static_cast<std::size_t>(depth - 1)][static_cast<std::size_t>(j - 1)];
      s.add(j * step, c);
      s.add(-j * step, -c);
    }
  } else if (mask[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k) + step)]) {
    s.add(step, 1.0);
    s.add(0, -1.0);
  } else if (mask[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k) - step)]) {
    s.add(0, 1.0);
    s.add(-step, -1.0);
  }
  return s;
}

struct FieldView {
  const double *m1;
  const double *m2;
  const double *m3;
};

FieldView view(const SpinField &f) {
  return {f.component(0).data(), f.component(1).data(), f.component(2).data()};
}

// ---- exchange ------------------------------------------------------------

double exchange_pinned(const SpinField &field, VectorField *grad) {
  const Grid &g = field.grid();
  const auto [m1, m2, m3] = view(field);
  const std::size_t s = static_cast<std::size_t>(g.stride());
  const std::size_t rows = static_cast<std::size_t>(g.rows());
  std::vector<double> partial(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t base = r * s;
    double acc = 0.0;
    for (std::size_t kk = 1; kk <= reach; ++kk) {
      const double w = exchange_weights[kk - 1];
      double row = 0.0;
      for (std::size_t p = base; p + kk < base + s; ++p) {
        const double a = m1[p + kk] - m1[p];
        const double b = m2[p + kk] - m2[p];
        const double c = m3[p + kk] - m3[p];
        row += a * a + b * b + c * c;
      }
      if (r + kk < rows) {
        const std::size_t off = kk * s;
        for (std::size_t p = base; p < base + s; ++p) {
          const double a = m1[p + off] - m1[p];
          const double b = m2[p + off] - m2[p];
          const double c = m3[p + off] - m3[p];
          row += a * a + b * b + c * c;
        }
      }
      acc += w * row;
    }
    partial[r] = acc;
  }

  if (grad) {
    const auto &mask = g.mask();
    double *g1 = grad->c[0].data();
    double *g2 = grad->c[1].data();
    double *g3 = grad->c[2].data();
    for (int j = 0; j < g.ny(); ++j) {
      const std::size_t lo = g.index(0, j);
      const std::size_t hi = g.index(g.nx() - 1, j) + 1;
      for (std::size_t p = lo; p < hi; ++p) {
        double a = 0.0;
        double b = 0.0;
        double c = 0.0;
        for (std::size_t kk = 1; kk <= reach; ++kk) {
          const double w = 2.0 * exchange_weights[kk - 1];
          const std::size_t off = kk * s;
          a += w * (4.0 * m1[p] - m1[p + kk] - m1[p - kk] - m1[p + off] - m1[p - off]);
          b += w * (4.0 * m2[p] - m2[p + kk] - m2[p - kk] - m2[p + off] - m2[p - off]);
          c += w * (4.0 * m3[p] - m3[p + kk] - m3[p - kk] - m3[p + off] - m3[p - off]);
        }
        const double on = mask[p] ? 1.0 : 0.0;
        g1[p] += on * a;
        g2[p] += on * b;
        g3[p] += on * c;
      }
    }
  }
  return pairwise_sum(partial);
}

double exchange_free(const SpinField &field, VectorField *grad) {
  const Grid &g = field.grid();
  const auto [m1, m2, m3] = view(field);
  const auto &mask = g.mask();
  const std::ptrdiff_t s = g.stride();
  std::vector<double> partial(static_cast<std::size_t>(g.ny()), 0.0);
  for (int j = 0; j < g.ny(); ++j) {
    double acc = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t p = g.index(i, j);
      if (!mask[p]) {
        continue;
      }
      for (int kk = 1; kk <= reach; ++kk) {
        const double w = exchange_weights[static_cast<std::size_t>(kk - 1)];
        for (std::ptrdiff_t step : {std::ptrdiff_t{1}, s}) {
          const std::size_t q = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(p) + kk * step);
          if (!mask[q]) {
            continue;
          }
          const double a = m1[q] - m1[p];
          const double b = m2[q] - m2[p];
          const double c = m3[q] - m3[p];
          acc += w * (a * a + b * b + c * c);
          if (grad) {
            grad->c[0][p] -= 2.0 * w * a;
            grad->c[1][p] -= 2.0 * w * b;
            grad->c[2][p] -= 2.0 * w * c;
            grad->c[0][q] += 2.0 * w * a;
            grad->c[1][q] += 2.0 * w * b;
            grad->c[2][q] += 2.0 * w * c;
          }
        }
      }
    }
    partial[static_cast<std::size_t>(j)] = acc;
  }
  return pairwise_sum(partial);
}

// ---- DMI -----------------------------------------------------------------

double dmi_pinned(const SpinField &field, double kappa, VectorField *grad) {
  const Grid &g = field.grid();
  const auto [m1, m2, m3] = view(field);
  const auto &mask = g.mask();
  const std::size_t s = static_cast<std::size_t>(g.stride());
  const double pref = -2.0 * kappa * g.h();
  std::vector<double> partial(static_cast<std::size_t>(g.ny()), 0.0);
  for (int j = 0; j < g.ny(); ++j) {
    const std::size_t lo = g.index(0, j);
    const std::size_t hi = g.index(g.nx() - 1, j) + 1;
    double acc = 0.0;
    for (std::size_t p = lo; p < hi; ++p) {
      double d1m3 = 0.0;
      double d2m3 = 0.0;
      double d1m1 = 0.0;
      double d2m2 = 0.0;
      for (std::size_t kk = 1; kk <= reach; ++kk) {
        const double c = derivative_weights[kk - 1];
        const std::size_t off = kk * s;
        d1m3 += c * (m3[p + kk] - m3[p - kk]);
        d2m3 += c * (m3[p + off] - m3[p - off]);
        d1m1 += c * (m1[p + kk] - m1[p - kk]);
        d2m2 += c * (m2[p + off] - m2[p - off]);
      }
      const double on = mask[p] ? 1.0 : 0.0;
      acc += on * (m1[p] * d1m3 + m2[p] * d2m3);
      if (grad) {
        // Exterior in-plane components vanish, so the transpose of the
        // antisymmetric stencil is its negative.
        grad->c[0][p] += on * pref * d1m3;
        grad->c[1][p] += on * pref * d2m3;
        grad->c[2][p] -= on * pref * (d1m1 + d2m2);
      }
    }
    partial[static_cast<std::size_t>(j)] = acc;
  }
  return pref * pairwise_sum(partial);
}

double dmi_free(const SpinField &field, double kappa, VectorField *grad) {
  const Grid &g = field.grid();
  const auto [m1, m2, m3] = view(field);
  const auto &mask = g.mask();
  const std::ptrdiff_t s = g.stride();
  const double pref = -2.0 * kappa * g.h();
  std::vector<double> partial(static_cast<std::size_t>(g.ny()), 0.0);
  for (int j = 0; j < g.ny(); ++j) {
    double acc = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t p = g.index(i, j);
      if (!mask[p]) {
        continue;
      }
      const NodeStencil sx = free_stencil(g, p, 1);
      const NodeStencil sy = free_stencil(g, p, s);
      const double d1m3 = sx.apply(m3, p);
      const double d2m3 = sy.apply(m3, p);
      acc += m1[p] * d1m3 + m2[p] * d2m3;
      if (grad) {
        grad->c[0][p] += pref * d1m3;
        grad->c[1][p] += pref * d2m3;
        for (int n = 0; n < sx.count; ++n) {
          grad->c[2][static_cast<std::size_t>(static_cast<std::ptrdiff_t>(p) + sx.offset[static_cast<std::size_t>(n)])] +=
              pref * m1[p] * sx.coef[static_cast<std::size_t>(n)];
        }
        for (int n = 0; n < sy.count; ++n) {
          grad->c[2][static_cast<std::size_t>(static_cast<std::ptrdiff_t>(p) + sy.offset[static_cast<std::size_t>(n)])] +=
              pref * m2[p] * sy.coef[static_cast<std::size_t>(n)];
        }
      }
    }
    partial[static_cast<std::size_t>(j)] = acc;
  }
  return pref * pairwise_sum(partial);
}

// ---- anisotropy ------------------------------------------------------------

double anisotropy_impl(const SpinField &field, double prefactor, VectorField *grad) {
  if (prefactor == 0.0) {
    return 0.0;
  }
  const Grid &g = field.grid();
  const auto [m1, m2, m3] = view(field);
  const auto &mask = g.mask();
  const double h2 = g.h() * g.h();
  std::vector<double> partial(static_cast<std::size_t>(g.ny()), 0.0);
  for (int j = 0; j < g.ny(); ++j) {
    double acc = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t p = g.index(i, j);
      if (!mask[p]) {
        continue;
      }
      acc += m1[p] * m1[p] + m2[p] * m2[p];
      if (grad) {
        grad->c[0][p] += 2.0 * prefactor * h2 * m1[p];
        grad->c[1][p] += 2.0 * prefactor * h2 * m2[p];
      }
    }
    partial[static_cast<std::size_t>(j)] = acc;
  }
  (void)m3;
  return prefactor * h2 * pairwise_sum(partial);
}

// ---- node-wise derivative pairs for degree and square completion ----------

// Visits every node that carries a derivative pair: the mask plus the
// pinned ghost ring (where the discrete derivatives are still nonzero).
template <class F> void for_each_derivative_pair(const SpinField &field, F &&visit) {
  const Grid &g = field.grid();
  const auto [m1, m2, m3] = view(field);
  const std::size_t s = static_cast<std::size_t>(g.stride());
  const bool pinned = field.boundary_mode() == BoundaryMode::pinned;
  const int ext = pinned ? reach : 0;
  for (int j = -ext; j < g.ny() + ext; ++j) {
    for (int i = -ext; i < g.nx() + ext; ++i) {
      const std::size_t p = g.index(i, j);
      Vec3 a;
      Vec3 b;
      if (pinned) {
        for (std::size_t kk = 1; kk <= reach; ++kk) {
          const double c = derivative_weights[kk - 1];
          const std::size_t off = kk * s;
          a += c * Vec3{m1[p + kk] - m1[p - kk], m2[p + kk] - m2[p - kk], m3[p + kk] - m3[p - kk]};
          b += c * Vec3{m1[p + off] - m1[p - off], m2[p + off] - m2[p - off], m3[p + off] - m3[p - off]};
        }
      } else {
        if (!g.interior(p)) {
          continue;
        }
        const NodeStencil sx = free_stencil(g, p, 1);
        const NodeStencil sy = free_stencil(g, p, static_cast<std::ptrdiff_t>(s));
        a = {sx.apply(m1, p), sx.apply(m2, p), sx.apply(m3, p)};
        b = {sy.apply(m1, p), sy.apply(m2, p), sy.apply(m3, p)};
      }
      visit(j, field.at(p), a, b);
    }
  }
}

} // namespace

double SquareCompletion::minus_residual() const {
  return minus_square - (dirichlet + 8.0 * std::numbers::pi * degree);
}

double SquareCompletion::plus_residual() const {
  return plus_square - (dirichlet - 8.0 * std::numbers::pi * degree);
}

double SquareCompletion::relative_residual() const {
  const double scale = std::max(dirichlet, 1e-300);
  return std::max(std::abs(minus_residual()), std::abs(plus_residual())) / scale;
}

double exchange_energy(const SpinField &field) {
  return field.boundary_mode() == BoundaryMode::pinned ? exchange_pinned(field, nullptr)
                                                       : exchange_free(field, nullptr);
}

double dmi_energy(const SpinField &field, double kappa) {
  if (kappa == 0.0) {
    return 0.0;
  }
  return field.boundary_mode() == BoundaryMode::pinned ? dmi_pinned(field, kappa, nullptr)
                                                       : dmi_free(field, kappa, nullptr);
}

double anisotropy_prefactor(double kappa, double lambda) {
  if (lambda < 0.0) {
    throw InvalidArgument("anisotropy strength lambda must be nonnegative");
  }
  if (lambda == 0.0) {
    return 0.0;
  }
  if (!(kappa > 0.0) || !(kappa < 1.0)) {
    throw InvalidArgument("anisotropy scaling λ/|log κ| needs 0 < κ < 1");
  }
  return lambda / std::abs(std::log(kappa));
}

double anisotropy_energy(const SpinField &field, double kappa, double lambda) {
  return anisotropy_impl(field, anisotropy_prefactor(kappa, lambda), nullptr);
}

EnergyBreakdown total_energy(const SpinField &field, double kappa, double lambda) {
  EnergyBreakdown e;
  e.kappa = kappa;
  e.lambda = lambda;
  e.exchange = exchange_energy(field);
  e.dmi = dmi_energy(field, kappa);
  e.anisotropy = anisotropy_energy(field, kappa, lambda);
  e.total = e.exchange + e.dmi + e.anisotropy;
  return e;
}

EnergyBreakdown energy_and_gradient(const SpinField &field, double kappa, double lambda,
                                    VectorField &gradient) {
  if (!gradient.grid || gradient.grid.get() != field.grid_ptr().get()) {
    gradient = VectorField(field.grid_ptr());
  } else {
    for (auto &plane : gradient.c) {
      std::fill(plane.begin(), plane.end(), 0.0);
    }
  }
  const bool pinned = field.boundary_mode() == BoundaryMode::pinned;
  EnergyBreakdown e;
  e.kappa = kappa;
  e.lambda = lambda;
  e.exchange = pinned ? exchange_pinned(field, &gradient) : exchange_free(field, &gradient);
  if (kappa != 0.0) {
    e.dmi = pinned ? dmi_pinned(field, kappa, &gradient) : dmi_free(field, kappa, &gradient);
  }
  e.anisotropy = anisotropy_impl(field, anisotropy_prefactor(kappa, lambda), &gradient);
  e.total = e.exchange + e.dmi + e.anisotropy;
  // Scatter-style terms may touch exterior storage; the exterior is fixed.
  const auto &mask = field.grid().mask();
  for (std::size_t k = 0; k < mask.size(); ++k) {
    if (!mask[k]) {
      gradient.c[0][k] = gradient.c[1][k] = gradient.c[2][k] = 0.0;
    }
  }
  return e;
}

void project_to_tangent(const SpinField &field, VectorField &v) {
  const auto [m1, m2, m3] = view(field);
  const auto &mask = field.grid().mask();
  for (std::size_t k = 0; k < mask.size(); ++k) {
    if (!mask[k]) {
      v.c[0][k] = v.c[1][k] = v.c[2][k] = 0.0;
      continue;
    }
    const double d = v.c[0][k] * m1[k] + v.c[1][k] * m2[k] + v.c[2][k] * m3[k];
    v.c[0][k] -= d * m1[k];
    v.c[1][k] -= d * m2[k];
    v.c[2][k] -= d * m3[k];
  }
}

VectorField riemannian_gradient(const SpinField &field, double kappa, double lambda) {
  VectorField g(field.grid_ptr());
  energy_and_gradient(field, kappa, lambda, g);
  project_to_tangent(field, g);
  return g;
}

DegreeReport degree(const SpinField &field) {
  std::vector<double> partial(static_cast<std::size_t>(field.grid().rows()), 0.0);
  for_each_derivative_pair(field, [&](int j, Vec3 m, Vec3 a, Vec3 b) {
    partial[static_cast<std::size_t>(j + Grid::pad)] += dot(m, cross(a, b));
  });
  DegreeReport r;
  r.value = pairwise_sum(partial) / four_pi;
  r.rounded = std::lround(r.value);
  r.residual = std::abs(r.value - static_cast<double>(r.rounded));
  return r;
}

SquareCompletion square_completion_check(const SpinField &field) {
  const auto rows = static_cast<std::size_t>(field.grid().rows());
  std::vector<double> minus(rows, 0.0);
  std::vector<double> plus(rows, 0.0);
  std::vector<double> deg(rows, 0.0);
  for_each_derivative_pair(field, [&](int j, Vec3 m, Vec3 a, Vec3 b) {
    const auto r = static_cast<std::size_t>(j + Grid::pad);
    const Vec3 mb = cross(m, b);
    minus[r] += norm2(a - mb);
    plus[r] += norm2(a + mb);
    deg[r] += dot(m, cross(a, b));
  });
  SquareCompletion out;
  out.minus_square = pairwise_sum(minus);
  out.plus_square = pairwise_sum(plus);
  out.degree = pairwise_sum(deg) / four_pi;
  out.dirichlet = exchange_energy(field);
  return out;
}

double exchange_form(const VectorField &a, const VectorField &b) {
  const Grid &g = *a.grid;
  const std::size_t s = static_cast<std::size_t>(g.stride());
  const std::size_t rows = static_cast<std::size_t>(g.rows());
  std::vector<double> partial(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t base = r * s;
    double acc = 0.0;
    for (std::size_t kk = 1; kk <= reach; ++kk) {
      double row = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double *x = a.c[static_cast<std::size_t>(c)].data();
        const double *y = b.c[static_cast<std::size_t>(c)].data();
        for (std::size_t p = base; p + kk < base + s; ++p) {
          row += (x[p + kk] - x[p]) * (y[p + kk] - y[p]);
        }
        if (r + kk < rows) {
          const std::size_t off = kk * s;
          for (std::size_t p = base; p < base + s; ++p) {
            row += (x[p + off] - x[p]) * (y[p + off] - y[p]);
          }
        }
      }
      acc += exchange_weights[kk - 1] * row;
    }
    partial[r] = acc;
  }
  return pairwise_sum(partial);
}

double masked_exchange_form(const VectorField &a, const VectorField &b) {
  const Grid &g = *a.grid;
  const auto &mask = g.mask();
  const std::ptrdiff_t s = g.stride();
  std::vector<double> partial(static_cast<std::size_t>(g.ny()), 0.0);
  for (int j = 0; j < g.ny(); ++j) {
    double acc = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t p = g.index(i, j);
      if (!mask[p]) {
        continue;
      }
      for (int kk = 1; kk <= reach; ++kk) {
        for (std::ptrdiff_t step : {std::ptrdiff_t{1}, s}) {
          const std::size_t q = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(p) + kk * step);
          if (!mask[q]) {
            continue;
          }
          double row = 0.0;
          for (std::size_t c = 0; c < 3; ++c) {
            row += (a.c[c][q] - a.c[c][p]) * (b.c[c][q] - b.c[c][p]);
          }
          acc += exchange_weights[static_cast<std::size_t>(kk - 1)] * row;
        }
      }
    }
    partial[static_cast<std::size_t>(j)] = acc;
  }
  return pairwise_sum(partial);
}

} // namespace skyrmion
