#include "skyrmion/tail_solver.hpp"

#include "skyrmion/errors.hpp"
#include "skyrmion/laplace.hpp"
#include "skyrmion/summation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

namespace skyrmion {

namespace {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

Vec2 to_vec(cplx z) { return {z.real(), z.imag()}; }

// Cubic Lagrange weights for nodes at -1, 0, 1, 2 evaluated at t ∈ [0, 1).
std::array<double, 4> cubic_weights(double t) {
  return {-t * (t - 1.0) * (t - 2.0) / 6.0, (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
          -(t + 1.0) * t * (t - 2.0) / 2.0, (t + 1.0) * t * (t - 1.0) / 6.0};
}

// Nelder–Mead over n ≤ 2 coordinates.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double> &)> &f,
                                std::vector<double> x0, double initial_size, double tolerance,
                                int max_iterations = 2000) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> s(n + 1, x0);
  for (std::size_t k = 0; k < n; ++k) {
    s[k + 1][k] += initial_size;
  }
  std::vector<double> fs(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    fs[k] = f(s[k]);
  }
  auto lerp = [&](const std::vector<double> &a, const std::vector<double> &b, double t) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
      out[k] = a[k] + t * (b[k] - a[k]);
    }
    return out;
  };
  for (int it = 0; it < max_iterations; ++it) {
    std::vector<std::size_t> order(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      order[k] = k;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    std::vector<std::vector<double>> s2;
    std::vector<double> f2;
    for (std::size_t k : order) {
      s2.push_back(s[k]);
      f2.push_back(fs[k]);
    }
    s = std::move(s2);
    fs = std::move(f2);

    double size = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t c = 0; c < n; ++c) {
        size = std::max(size, std::abs(s[k][c] - s[0][c]));
      }
    }
    if (size < tolerance) {
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t c = 0; c < n; ++c) {
        centroid[c] += s[k][c] / static_cast<double>(n);
      }
    }
    const std::vector<double> xr = lerp(centroid, s[n], -1.0);
    const double fr = f(xr);
    if (fr < fs[0]) {
      const std::vector<double> xe = lerp(centroid, s[n], -2.0);
      const double fe = f(xe);
      if (fe < fr) {
        s[n] = xe;
        fs[n] = fe;
      } else {
        s[n] = xr;
        fs[n] = fr;
      }
      continue;
    }
    if (fr < fs[n - 1]) {
      s[n] = xr;
      fs[n] = fr;
      continue;
    }
    const bool outside = fr < fs[n];
    const std::vector<double> xc = lerp(centroid, outside ? xr : s[n], 0.5);
    const double fc = f(xc);
    if (fc < (outside ? fr : fs[n])) {
      s[n] = xc;
      fs[n] = fc;
      continue;
    }
    for (std::size_t k = 1; k <= n; ++k) {
      s[k] = lerp(s[0], s[k], 0.5);
      fs[k] = f(s[k]);
    }
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    if (fs[k] < fs[best]) {
      best = k;
    }
  }
  return s[best];
}

bool has_closed_form(const DomainSpec &d) {
  return d.kind() == DomainKind::disk || d.kind() == DomainKind::strip ||
         d.kind() == DomainKind::half_plane;
}

} // namespace

Vec2 tail_boundary_data(Vec2 a0, Vec2 x) {
  const Vec2 d = x - a0;
  const double r2 = norm2(d);
  if (r2 == 0.0) {
    throw InvalidArgument("tail data is singular at the skyrmion center");
  }
  return (2.0 / r2) * d;
}

std::optional<Vec2> closed_form_tail(const DomainSpec &domain, Vec2 a0, Vec2 x) {
  switch (domain.kind()) {
  case DomainKind::disk: {
    const double l2 = domain.radius() * domain.radius();
    const cplx z(x.x - domain.center().x, x.y - domain.center().y);
    const cplx z0(a0.x - domain.center().x, a0.y - domain.center().y);
    return to_vec(2.0 * z / (l2 - std::conj(z0) * z));
  }
  case DomainKind::strip: {
    const double l = domain.width();
    const cplx z(x.x - a0.x, x.y - domain.center().y);
    const cplx iy0(0.0, a0.y - domain.center().y);
    const double k = pi / (2.0 * l);
    const cplx zb = std::conj(z) + iy0;
    return to_vec((pi / l) * std::tanh(k * (z + iy0)) - (pi / l) / std::tanh(k * zb) + 2.0 / zb);
  }
  case DomainKind::half_plane: {
    const cplx z(x.x - a0.x, x.y - domain.boundary_y());
    const cplx iy0(0.0, a0.y - domain.boundary_y());
    return to_vec(2.0 / (z + iy0));
  }
  default:
    return std::nullopt;
  }
}

TailSolution solve_tail(const DomainSpec &domain, Vec2 a0, double h, double tolerance) {
  if (!domain.contains(a0)) {
    throw InvalidArgument("tail center must lie inside the domain");
  }
  if (domain.distance_to_ideal_boundary(a0) < 2.0 * h || domain.distance_to_boundary(a0) < 2.0 * h) {
    throw CenterOnBoundary("tail center is within 2h of the boundary");
  }
  TailSolution sol;
  sol.domain = domain;
  sol.center = a0;
  sol.grid = Grid::make(domain, h);
  const Grid &g = *sol.grid;
  const auto &mask = g.mask();
  sol.u1.assign(g.size(), 0.0);
  sol.u2.assign(g.size(), 0.0);

  double data_scale = 0.0;
  for (int j = -Grid::pad; j < g.ny() + Grid::pad; ++j) {
    for (int i = -Grid::pad; i < g.nx() + Grid::pad; ++i) {
      const std::size_t k = g.index(i, j);
      if (mask[k]) {
        continue;
      }
      const Vec2 x = g.position(i, j);
      Vec2 v;
      if (domain.in_truncation(x)) {
        const auto exact = closed_form_tail(domain, a0, x);
        if (!exact) {
          throw UnsupportedKind("truncated domain without far-field data");
        }
        v = *exact;
      } else {
        v = tail_boundary_data(a0, x);
      }
      sol.u1[k] = v.x;
      sol.u2[k] = v.y;
    }
  }

  const int nx = g.nx();
  const int ny = g.ny();
  const std::size_t s = static_cast<std::size_t>(g.stride());
  std::vector<std::uint8_t> flat(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  std::array<std::vector<double>, 2> rhs{std::vector<double>(flat.size(), 0.0),
                                         std::vector<double>(flat.size(), 0.0)};
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = g.index(i, j);
      const std::size_t f = static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
      flat[f] = mask[k];
      if (!mask[k]) {
        continue;
      }
      for (std::size_t q : {k - 1, k + 1, k - s, k + s}) {
        if (!mask[q]) {
          rhs[0][f] += sol.u1[q];
          rhs[1][f] += sol.u2[q];
        }
      }
      data_scale = std::max({data_scale, std::abs(rhs[0][f]), std::abs(rhs[1][f])});
    }
  }

  const MaskedPoisson poisson(nx, ny, flat);
  for (int c = 0; c < 2; ++c) {
    std::vector<double> x(flat.size(), 0.0);
    const auto r = poisson.solve(rhs[static_cast<std::size_t>(c)], x, tolerance, 2000);
    sol.iterations = std::max(sol.iterations, r.iterations);
    auto &u = c == 0 ? sol.u1 : sol.u2;
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const std::size_t k = g.index(i, j);
        if (mask[k]) {
          u[k] = x[static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i)];
        }
      }
    }
  }

  std::vector<double> partial(static_cast<std::size_t>(g.rows()), 0.0);
  double worst = 0.0;
  for (int j = -1; j <= ny; ++j) {
    double acc = 0.0;
    for (int i = -1; i <= nx; ++i) {
      const std::size_t k = g.index(i, j);
      for (std::size_t q : {k + 1, k + s}) {
        if (mask[k] || mask[q]) {
          const double a = sol.u1[q] - sol.u1[k];
          const double b = sol.u2[q] - sol.u2[k];
          acc += a * a + b * b;
        }
      }
      if (mask[k]) {
        for (const auto *u : {&sol.u1, &sol.u2}) {
          const auto &v = *u;
          worst = std::max(worst, std::abs(4.0 * v[k] - v[k - 1] - v[k + 1] - v[k - s] - v[k + s]));
        }
      }
    }
    partial[static_cast<std::size_t>(j + Grid::pad)] = acc;
  }
  sol.max_residual = data_scale > 0.0 ? worst / data_scale : worst;
  sol.energy_interior = pairwise_sum(partial);
  sol.energy_exterior =
      4.0 * boundary_flux(domain.ideal_boundary(), a0, [](double r2) { return 1.0 / (r2 * r2); });
  sol.T = sol.energy_interior + sol.energy_exterior;
  return sol;
}

void write_csv(const TailSolution &solution, std::ostream &out) {
  const Grid &g = *solution.grid;
  out << "x,y,u1,u2\n" << std::setprecision(17);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (g.interior(i, j)) {
        const Vec2 p = g.position(i, j);
        const Vec2 u = solution.u(i, j);
        out << p.x << ',' << p.y << ',' << u.x << ',' << u.y << '\n';
      }
    }
  }
}

Richardson richardson(std::vector<double> h, std::vector<double> values) {
  if (h.size() != values.size() || h.size() < 2) {
    throw InvalidArgument("Richardson extrapolation needs at least two levels");
  }
  Richardson r;
  r.h = std::move(h);
  r.values = std::move(values);
  const std::size_t n = r.values.size();
  const double ratio = r.h[n - 2] / r.h[n - 1];
  if (n >= 3) {
    const double d1 = r.values[n - 3] - r.values[n - 2];
    const double d2 = r.values[n - 2] - r.values[n - 1];
    const double q = d1 / d2;
    if (std::isfinite(q) && q > 1.0) {
      const double p = std::log(q) / std::log(ratio);
      if (p >= 0.5 && p <= 4.0) {
        r.order = p;
        r.order_estimated = true;
      }
    }
  }
  const double factor = std::pow(ratio, r.order) - 1.0;
  r.extrapolated = r.values[n - 1] + (r.values[n - 1] - r.values[n - 2]) / factor;
  return r;
}

Richardson tail_energy_extrapolated(const DomainSpec &domain, Vec2 a0, double h, int levels,
                                    double tolerance) {
  std::vector<double> hs;
  std::vector<double> vs;
  double step = h;
  for (int l = 0; l < levels; ++l, step /= 2.0) {
    hs.push_back(step);
    vs.push_back(solve_tail(domain, a0, step, tolerance).T);
  }
  return richardson(std::move(hs), std::move(vs));
}

WirtingerEstimate tail_energy_via_derivative(const TailSolution &solution) {
  const Grid &g = *solution.grid;
  const double h = g.h();
  if (solution.domain.distance_to_boundary(solution.center) < 4.0 * h) {
    throw CenterOnBoundary("derivative route needs the center 4h inside the boundary");
  }
  const Vec2 q = g.to_grid_coords(solution.center);
  const int i0 = static_cast<int>(std::floor(q.x));
  const int j0 = static_cast<int>(std::floor(q.y));
  const auto wx = cubic_weights(q.x - i0);
  const auto wy = cubic_weights(q.y - j0);

  auto value = [&](const std::vector<double> &u, int i, int j) {
    if (!g.interior(i, j)) {
      throw CenterOnBoundary("derivative stencil leaves the interior");
    }
    return u[g.index(i, j)];
  };
  auto d = [&](const std::vector<double> &u, int i, int j, int di, int dj) {
    return (-value(u, i + 2 * di, j + 2 * dj) + 8.0 * value(u, i + di, j + dj) -
            8.0 * value(u, i - di, j - dj) + value(u, i - 2 * di, j - 2 * dj)) /
           (12.0 * h);
  };

  double re = 0.0;
  double im = 0.0;
  for (int b = 0; b < 4; ++b) {
    for (int a = 0; a < 4; ++a) {
      const int i = i0 - 1 + a;
      const int j = j0 - 1 + b;
      const double w = wx[static_cast<std::size_t>(a)] * wy[static_cast<std::size_t>(b)];
      const double u1x = d(solution.u1, i, j, 1, 0);
      const double u1y = d(solution.u1, i, j, 0, 1);
      const double u2x = d(solution.u2, i, j, 1, 0);
      const double u2y = d(solution.u2, i, j, 0, 1);
      re += w * 0.5 * (u1x + u2y);
      im += w * 0.5 * (u2x - u1y);
    }
  }
  return {8.0 * pi * re, 8.0 * pi * im};
}

TailRoutes tail_routes(const DomainSpec &domain, Vec2 a0, double h, int levels, double tolerance) {
  std::vector<double> hs;
  std::vector<double> energy;
  std::vector<double> derivative;
  TailRoutes out;
  double step = h;
  for (int l = 0; l < levels; ++l, step /= 2.0) {
    const TailSolution s = solve_tail(domain, a0, step, tolerance);
    const WirtingerEstimate w = tail_energy_via_derivative(s);
    hs.push_back(step);
    energy.push_back(s.T);
    derivative.push_back(w.T);
    out.imaginary = w.imaginary;
    out.max_residual = std::max(out.max_residual, s.max_residual);
  }
  out.energy = richardson(hs, std::move(energy));
  out.derivative = richardson(std::move(hs), std::move(derivative));
  return out;
}

double closed_form_T(const DomainSpec &domain, Vec2 a0) {
  switch (domain.kind()) {
  case DomainKind::disk: {
    const double l2 = domain.radius() * domain.radius();
    const double r2 = norm2(a0 - domain.center());
    if (!(r2 < l2)) {
      throw InvalidArgument("center outside the disk");
    }
    return 16.0 * pi * l2 / ((l2 - r2) * (l2 - r2));
  }
  case DomainKind::strip: {
    const double l = domain.width();
    const double y0 = a0.y - domain.center().y;
    if (!(std::abs(y0) < l / 2.0)) {
      throw InvalidArgument("center outside the strip");
    }
    const double c = std::cos(pi * y0 / l);
    return 4.0 * pi * pi * pi / (l * l * c * c);
  }
  case DomainKind::half_plane: {
    const double y0 = a0.y - domain.boundary_y();
    if (!(y0 < 0.0)) {
      throw InvalidArgument("center outside the half-plane");
    }
    return 4.0 * pi / (y0 * y0);
  }
  default:
    throw UnsupportedKind(std::string("no closed-form tail energy for ") +
                          std::string(to_string(domain.kind())));
  }
}

TailMinimum argmin_T(const DomainSpec &domain, const ArgminOptions &options) {
  if (!(options.coarse_step > 0.0) || !(options.refine_tolerance > 0.0) || !(options.h > 0.0)) {
    throw InvalidArgument("argmin options must be positive");
  }
  const bool exact = has_closed_form(domain);
  const double margin = 4.0 * options.h;
  auto admissible = [&](Vec2 a) {
    return domain.contains(a) && domain.distance_to_ideal_boundary(a) >= margin &&
           domain.distance_to_boundary(a) >= margin;
  };
  auto T = [&](Vec2 a) {
    if (!admissible(a)) {
      return inf;
    }
    return exact ? closed_form_T(domain, a) : solve_tail(domain, a, options.h).T;
  };
  // Strips and half-planes are invariant along x; search y only.
  const bool one_d = domain.kind() == DomainKind::strip || domain.kind() == DomainKind::half_plane;
  const double x_fixed = domain.center().x;

  const Box box = domain.bounding_box();
  Vec2 best{};
  double best_T = inf;
  for (double y = box.lo.y + options.coarse_step / 2; y < box.hi.y; y += options.coarse_step) {
    for (double x = box.lo.x + options.coarse_step / 2; x < box.hi.x; x += options.coarse_step) {
      const Vec2 a = one_d ? Vec2{x_fixed, y} : Vec2{x, y};
      const double v = T(a);
      if (v < best_T) {
        best_T = v;
        best = a;
      }
      if (one_d) {
        break;
      }
    }
  }
  if (!std::isfinite(best_T)) {
    const Vec2 c = domain.incenter();
    best = one_d ? Vec2{x_fixed, c.y} : c;
    best_T = T(best);
  }

  std::vector<double> x0 = one_d ? std::vector<double>{best.y} : std::vector<double>{best.x, best.y};
  const auto to_point = [&](const std::vector<double> &v) {
    return one_d ? Vec2{x_fixed, v[0]} : Vec2{v[0], v[1]};
  };
  const auto xs = nelder_mead([&](const std::vector<double> &v) { return T(to_point(v)); }, x0,
                              options.coarse_step / 2, options.refine_tolerance);
  TailMinimum out;
  out.a0 = to_point(xs);
  out.closed_form = exact;
  if (exact) {
    out.T = closed_form_T(domain, out.a0);
  } else if (options.extrapolate_value) {
    out.T = tail_energy_extrapolated(domain, out.a0, options.h).extrapolated;
  } else {
    out.T = T(out.a0);
  }
  return out;
}

SkyrmionPrediction prediction_from_T(Vec2 center, double T_min, double lambda) {
  if (lambda < 0.0) {
    throw InvalidArgument("lambda must be nonnegative");
  }
  if (!(T_min > 0.0)) {
    throw InvalidArgument("tail energy must be positive");
  }
  SkyrmionPrediction p;
  p.center = center;
  p.T_min = T_min;
  p.lambda = lambda;
  const double denom = T_min + 8.0 * pi * lambda;
  p.r0 = 4.0 * pi / denom;
  p.energy0 = -16.0 * pi * pi / denom;
  return p;
}

SkyrmionPrediction predict_skyrmion(const DomainSpec &domain, double lambda, const ArgminOptions &options) {
  if (lambda < 0.0) {
    throw InvalidArgument("lambda must be nonnegative");
  }
  const TailMinimum m = argmin_T(domain, options);
  SkyrmionPrediction p = prediction_from_T(m.a0, m.T, lambda);
  p.closed_form = m.closed_form;
  return p;
}

double renormalized_energy(double helicity, double r0, Vec2 a0, const DomainSpec &domain, double h) {
  if (!(r0 > 0.0)) {
    throw InvalidArgument("r0 must be positive");
  }
  const double T = has_closed_form(domain) ? closed_form_T(domain, a0)
                                           : tail_energy_extrapolated(domain, a0, h).extrapolated;
  return r0 * r0 * T - 8.0 * pi * r0 * std::cos(helicity);
}

double free_boundary_deficit(const DomainSpec &domain, double r0, Vec2 a0) {
  if (!domain.in_ideal(a0)) {
    throw InvalidArgument("center must lie inside the domain");
  }
  return -4.0 * r0 * r0 *
         boundary_flux(domain.ideal_boundary(), a0, [](double r2) { return 1.0 / (r2 * r2); });
}

} // namespace skyrmion
