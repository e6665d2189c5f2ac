#include "skyrmion/laplace.hpp"

#include "skyrmion/errors.hpp"
#include "skyrmion/summation.hpp"

#include <algorithm>
#include <cmath>

namespace skyrmion {

namespace {

constexpr int kPreSweeps = 2;
constexpr int kCoarsestSweeps = 40;
constexpr int kMinCoarse = 4;

double dot(std::span<const double> a, std::span<const double> b, int nx, int ny) {
  std::vector<double> partial(static_cast<std::size_t>(ny), 0.0);
  for (int j = 0; j < ny; ++j) {
    double s = 0.0;
    const std::size_t base = static_cast<std::size_t>(j) * static_cast<std::size_t>(nx);
    for (std::size_t k = base; k < base + static_cast<std::size_t>(nx); ++k) {
      s += a[k] * b[k];
    }
    partial[static_cast<std::size_t>(j)] = s;
  }
  return pairwise_sum(partial);
}

} // namespace

MaskedPoisson::MaskedPoisson(int nx, int ny, const std::vector<std::uint8_t> &mask) : nx_(nx), ny_(ny) {
  if (nx <= 0 || ny <= 0 || mask.size() != size()) {
    throw InvalidArgument("Poisson mask does not match its dimensions");
  }
  Level fine;
  fine.nx = nx;
  fine.ny = ny;
  fine.mask.assign(static_cast<std::size_t>(nx + 2) * static_cast<std::size_t>(ny + 2), 0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      fine.mask[fine.at(i, j)] = mask[static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i)] ? 1 : 0;
    }
  }
  levels_.push_back(std::move(fine));

  while (true) {
    const Level &f = levels_.back();
    if (std::min(f.nx, f.ny) < 2 * kMinCoarse) {
      break;
    }
    Level c;
    c.nx = (f.nx + 1) / 2;
    c.ny = (f.ny + 1) / 2;
    c.inv_h2 = f.inv_h2 / 4.0;
    c.mask.assign(static_cast<std::size_t>(c.nx + 2) * static_cast<std::size_t>(c.ny + 2), 0);
    std::size_t count = 0;
    for (int J = 0; J < c.ny; ++J) {
      for (int I = 0; I < c.nx; ++I) {
        int children = 0;
        for (int dj = 0; dj < 2; ++dj) {
          for (int di = 0; di < 2; ++di) {
            const int i = 2 * I + di;
            const int j = 2 * J + dj;
            if (i < f.nx && j < f.ny && f.mask[f.at(i, j)]) {
              ++children;
            }
          }
        }
        if (children >= 2) {
          c.mask[c.at(I, J)] = 1;
          ++count;
        }
      }
    }
    if (count == 0) {
      break;
    }
    levels_.push_back(std::move(c));
  }
  for (Level &l : levels_) {
    const std::size_t n = l.mask.size();
    l.u.assign(n, 0.0);
    l.f.assign(n, 0.0);
    l.r.assign(n, 0.0);
  }
}

void MaskedPoisson::apply(std::span<const double> x, std::span<double> y) const {
  const Level &l = levels_.front();
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
      if (!l.mask[l.at(i, j)]) {
        y[k] = 0.0;
        continue;
      }
      double s = 4.0 * x[k];
      if (i > 0 && l.mask[l.at(i - 1, j)]) s -= x[k - 1];
      if (i + 1 < nx_ && l.mask[l.at(i + 1, j)]) s -= x[k + 1];
      if (j > 0 && l.mask[l.at(i, j - 1)]) s -= x[k - static_cast<std::size_t>(nx_)];
      if (j + 1 < ny_ && l.mask[l.at(i, j + 1)]) s -= x[k + static_cast<std::size_t>(nx_)];
      y[k] = s;
    }
  }
}

// Red-black Gauss–Seidel; the backward sweep visits the colours in reverse
// so that pre- and post-smoothing are adjoint.
void MaskedPoisson::smooth(Level &l, bool forward) const {
  const std::size_t s = static_cast<std::size_t>(l.stride());
  const double h2 = 1.0 / l.inv_h2;
  for (int pass = 0; pass < 2; ++pass) {
    const int colour = forward ? pass : 1 - pass;
    for (int j = 0; j < l.ny; ++j) {
      const int start = (j + colour) & 1;
      for (int i = start; i < l.nx; i += 2) {
        const std::size_t k = l.at(i, j);
        if (!l.mask[k]) {
          continue;
        }
        l.u[k] = 0.25 * (h2 * l.f[k] + l.u[k - 1] + l.u[k + 1] + l.u[k - s] + l.u[k + s]);
      }
    }
  }
}

void MaskedPoisson::residual(Level &l) const {
  const std::size_t s = static_cast<std::size_t>(l.stride());
  for (int j = 0; j < l.ny; ++j) {
    for (int i = 0; i < l.nx; ++i) {
      const std::size_t k = l.at(i, j);
      l.r[k] = l.mask[k] ? l.f[k] - l.inv_h2 * (4.0 * l.u[k] - l.u[k - 1] - l.u[k + 1] - l.u[k - s] - l.u[k + s])
                         : 0.0;
    }
  }
}

void MaskedPoisson::vcycle(std::size_t level) const {
  Level &f = levels_[level];
  if (level + 1 == levels_.size()) {
    for (int sweep = 0; sweep < kCoarsestSweeps; ++sweep) {
      smooth(f, true);
      smooth(f, false);
    }
    return;
  }
  for (int sweep = 0; sweep < kPreSweeps; ++sweep) {
    smooth(f, true);
  }
  residual(f);

  Level &c = levels_[level + 1];
  std::fill(c.f.begin(), c.f.end(), 0.0);
  std::fill(c.u.begin(), c.u.end(), 0.0);
  // Restriction = transpose of bilinear prolongation / 4.
  for (int j = 0; j < f.ny; ++j) {
    const int J = j / 2;
    const int sj = (j & 1) ? 1 : -1;
    for (int i = 0; i < f.nx; ++i) {
      const std::size_t k = f.at(i, j);
      if (!f.mask[k]) {
        continue;
      }
      const double r = 0.25 * f.r[k];
      const int I = i / 2;
      const int si = (i & 1) ? 1 : -1;
      // Coarse neighbours may fall into the padding; those entries are
      // masked out and cleared below.
      c.f[c.at(I, J)] += 0.5625 * r;
      c.f[c.at(I + si, J)] += 0.1875 * r;
      c.f[c.at(I, J + sj)] += 0.1875 * r;
      c.f[c.at(I + si, J + sj)] += 0.0625 * r;
    }
  }
  for (std::size_t k = 0; k < c.f.size(); ++k) {
    if (!c.mask[k]) {
      c.f[k] = 0.0;
    }
  }

  vcycle(level + 1);

  for (int j = 0; j < f.ny; ++j) {
    const int J = j / 2;
    const int sj = (j & 1) ? 1 : -1;
    for (int i = 0; i < f.nx; ++i) {
      const std::size_t k = f.at(i, j);
      if (!f.mask[k]) {
        continue;
      }
      const int I = i / 2;
      const int si = (i & 1) ? 1 : -1;
      f.u[k] += 0.5625 * c.u[c.at(I, J)] + 0.1875 * c.u[c.at(I + si, J)] + 0.1875 * c.u[c.at(I, J + sj)] +
                0.0625 * c.u[c.at(I + si, J + sj)];
    }
  }
  for (int sweep = 0; sweep < kPreSweeps; ++sweep) {
    smooth(f, false);
  }
}

void MaskedPoisson::precondition(std::span<const double> r, std::span<double> z) const {
  Level &l = levels_.front();
  std::fill(l.u.begin(), l.u.end(), 0.0);
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      const std::size_t k = l.at(i, j);
      l.f[k] = l.mask[k] ? r[static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i)] : 0.0;
    }
  }
  vcycle(0);
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      z[static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i)] = l.u[l.at(i, j)];
    }
  }
}

MaskedPoisson::Result MaskedPoisson::solve(std::span<const double> b, std::span<double> x,
                                           double relative_tolerance, int max_iterations) const {
  const std::size_t n = size();
  const Level &l0 = levels_.front();
  std::vector<double> r(n), z(n), p(n), q(n);
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      if (!l0.mask[l0.at(i, j)]) {
        x[static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i)] = 0.0;
      }
    }
  }
  apply(x, q);
  std::vector<double> bm(n);
  for (std::size_t k = 0; k < n; ++k) {
    const int i = static_cast<int>(k % static_cast<std::size_t>(nx_));
    const int j = static_cast<int>(k / static_cast<std::size_t>(nx_));
    bm[k] = l0.mask[l0.at(i, j)] ? b[k] : 0.0;
    r[k] = bm[k] - q[k];
  }
  const double bnorm = std::sqrt(dot(bm, bm, nx_, ny_));
  Result res;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return res;
  }
  double rnorm = std::sqrt(dot(r, r, nx_, ny_));
  if (rnorm <= relative_tolerance * bnorm) {
    res.relative_residual = rnorm / bnorm;
    return res;
  }
  precondition(r, z);
  p = z;
  double rz = dot(r, z, nx_, ny_);
  for (int it = 1; it <= max_iterations; ++it) {
    apply(p, q);
    const double alpha = rz / dot(p, q, nx_, ny_);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * q[k];
    }
    rnorm = std::sqrt(dot(r, r, nx_, ny_));
    res.iterations = it;
    res.relative_residual = rnorm / bnorm;
    if (rnorm <= relative_tolerance * bnorm) {
      break;
    }
    precondition(r, z);
    const double rz_new = dot(r, z, nx_, ny_);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t k = 0; k < n; ++k) {
      p[k] = z[k] + beta * p[k];
    }
  }
  return res;
}

} // namespace skyrmion
