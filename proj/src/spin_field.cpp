#include "skyrmion/spin_field.hpp"

#include "skyrmion/errors.hpp"
#include "skyrmion/summation.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace skyrmion {

double VectorField::max_norm() const {
  double best = 0.0;
  for (std::size_t k = 0; k < c[0].size(); ++k) {
    best = std::max(best, c[0][k] * c[0][k] + c[1][k] * c[1][k] + c[2][k] * c[2][k]);
  }
  return std::sqrt(best);
}

double VectorField::dot(const VectorField &other) const {
  const int rows = grid->rows();
  const std::size_t stride = static_cast<std::size_t>(grid->stride());
  std::vector<double> partial(static_cast<std::size_t>(rows), 0.0);
  for (int r = 0; r < rows; ++r) {
    double s = 0.0;
    const std::size_t base = static_cast<std::size_t>(r) * stride;
    for (std::size_t k = base; k < base + stride; ++k) {
      s += c[0][k] * other.c[0][k] + c[1][k] * other.c[1][k] + c[2][k] * other.c[2][k];
    }
    partial[static_cast<std::size_t>(r)] = s;
  }
  return pairwise_sum(partial);
}

SpinField::SpinField(std::shared_ptr<const Grid> grid, BoundaryMode mode)
    : grid_(std::move(grid)), mode_(mode),
      m_{std::vector<double>(grid_->size(), 0.0), std::vector<double>(grid_->size(), 0.0),
         std::vector<double>(grid_->size(), -1.0)} {}

SpinField SpinField::sample(std::shared_ptr<const Grid> grid, const std::function<Vec3(Vec2)> &f,
                            BoundaryMode mode) {
  SpinField field(std::move(grid), mode);
  const Grid &g = field.grid();
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (g.interior(i, j)) {
        field.set(i, j, f(g.position(i, j)));
      }
    }
  }
  return field;
}

void SpinField::set(int i, int j, Vec3 v) {
  if (!grid_->interior(i, j)) {
    throw InvalidArgument("cannot write a spin outside the interior mask");
  }
  set(grid_->index(i, j), v);
}

void SpinField::set(std::size_t k, Vec3 v) {
  if (!grid_->interior(k)) {
    throw InvalidArgument("cannot write a spin outside the interior mask");
  }
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw InvalidArgument("spin value must be a finite nonzero vector");
  }
  m_[0][k] = v.x / n;
  m_[1][k] = v.y / n;
  m_[2][k] = v.z / n;
}

void SpinField::retract(const VectorField &direction, double step) {
  const auto &mask = grid_->mask();
  for (std::size_t k = 0; k < mask.size(); ++k) {
    if (!mask[k]) {
      continue;
    }
    const double x = m_[0][k] + step * direction.c[0][k];
    const double y = m_[1][k] + step * direction.c[1][k];
    const double z = m_[2][k] + step * direction.c[2][k];
    const double inv = 1.0 / std::sqrt(x * x + y * y + z * z);
    m_[0][k] = x * inv;
    m_[1][k] = y * inv;
    m_[2][k] = z * inv;
  }
}

void SpinField::renormalize() {
  const auto &mask = grid_->mask();
  for (std::size_t k = 0; k < mask.size(); ++k) {
    if (mask[k]) {
      const double inv = 1.0 / std::sqrt(m_[0][k] * m_[0][k] + m_[1][k] * m_[1][k] + m_[2][k] * m_[2][k]);
      m_[0][k] *= inv;
      m_[1][k] *= inv;
      m_[2][k] *= inv;
    }
  }
}

double SpinField::max_norm_deviation() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < m_[0].size(); ++k) {
    worst = std::max(worst, std::abs(std::sqrt(norm2(at(k))) - 1.0));
  }
  return worst;
}

bool SpinField::exterior_pinned() const {
  const auto &mask = grid_->mask();
  for (std::size_t k = 0; k < mask.size(); ++k) {
    if (!mask[k] && (m_[0][k] != 0.0 || m_[1][k] != 0.0 || m_[2][k] != -1.0)) {
      return false;
    }
  }
  return true;
}

SpinField resample(const SpinField &src, std::shared_ptr<const Grid> target,
                   const std::function<Vec2(Vec2)> &map) {
  const Grid &sg = src.grid();
  SpinField out(std::move(target), src.boundary_mode());
  const Grid &tg = out.grid();
  for (int j = 0; j < tg.ny(); ++j) {
    for (int i = 0; i < tg.nx(); ++i) {
      if (!tg.interior(i, j)) {
        continue;
      }
      const Vec2 q = sg.to_grid_coords(map(tg.position(i, j)));
      const double fx = std::floor(q.x);
      const double fy = std::floor(q.y);
      const int i0 = static_cast<int>(fx);
      const int j0 = static_cast<int>(fy);
      const double tx = q.x - fx;
      const double ty = q.y - fy;
      auto value = [&](int ii, int jj) {
        return sg.in_storage(ii, jj) ? src.at(ii, jj) : minus_e3;
      };
      Vec3 v = (1 - tx) * (1 - ty) * value(i0, j0) + tx * (1 - ty) * value(i0 + 1, j0) +
               (1 - tx) * ty * value(i0, j0 + 1) + tx * ty * value(i0 + 1, j0 + 1);
      if (norm2(v) < 1e-24) {
        v = minus_e3;
      }
      out.set(i, j, v);
    }
  }
  return out;
}

void write_csv(const SpinField &field, std::ostream &out) {
  const Grid &g = field.grid();
  out << "x,y,m1,m2,m3\n";
  out << std::setprecision(17);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.interior(i, j)) {
        continue;
      }
      const Vec2 p = g.position(i, j);
      const Vec3 m = field.at(i, j);
      out << p.x << ',' << p.y << ',' << m.x << ',' << m.y << ',' << m.z << '\n';
    }
  }
}

void write_csv(const SpinField &field, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot open " + path.string() + " for writing");
  }
  write_csv(field, out);
}

namespace {
constexpr char kMagic[8] = {'S', 'K', 'Y', 'F', 'I', 'E', 'L', 'D'};

template <class T> void put(std::ofstream &out, T v) {
  out.write(reinterpret_cast<const char *>(&v), sizeof(T));
}
template <class T> T get(std::ifstream &in) {
  T v{};
  in.read(reinterpret_cast<char *>(&v), sizeof(T));
  return v;
}
} // namespace

void write_binary(const SpinField &field, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open " + path.string() + " for writing");
  }
  const Grid &g = field.grid();
  out.write(kMagic, sizeof kMagic);
  put<std::int32_t>(out, g.nx());
  put<std::int32_t>(out, g.ny());
  put<double>(out, g.h());
  put<double>(out, g.origin().x);
  put<double>(out, g.origin().y);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const Vec3 m = field.at(i, j);
      put(out, m.x);
      put(out, m.y);
      put(out, m.z);
    }
  }
}

SpinField read_binary(std::shared_ptr<const Grid> grid, const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw Error(path.string() + " is not a field snapshot");
  }
  const auto nx = get<std::int32_t>(in);
  const auto ny = get<std::int32_t>(in);
  const auto h = get<double>(in);
  get<double>(in);
  get<double>(in);
  if (nx != grid->nx() || ny != grid->ny() || h != grid->h()) {
    throw InvalidArgument("snapshot grid does not match the requested grid");
  }
  SpinField field(grid);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double x = get<double>(in);
      const double y = get<double>(in);
      const double z = get<double>(in);
      if (!grid->interior(i, j)) {
        continue;
      }
      if (std::abs(norm(Vec3{x, y, z}) - 1.0) <= 1e-12) {
        const std::size_t k = grid->index(i, j);
        field.m_[0][k] = x;
        field.m_[1][k] = y;
        field.m_[2][k] = z;
      } else {
        field.set(i, j, {x, y, z});
      }
    }
  }
  if (!in) {
    throw Error(path.string() + " is truncated");
  }
  return field;
}

} // namespace skyrmion
