#include "skyrmion/grid.hpp"

#include "skyrmion/errors.hpp"

#include <cmath>
#include <sstream>

namespace skyrmion {

namespace {

int cells_along(double length, double h, const char *axis) {
  const double n = length / h;
  const double rounded = std::round(n);
  if (rounded < 1.0 || std::abs(n - rounded) > 1e-8 * std::max(1.0, n)) {
    std::ostringstream msg;
    msg << "grid spacing " << h << " does not divide the bounding box " << axis << "-extent "
        << length;
    throw InvalidArgument(msg.str());
  }
  return static_cast<int>(rounded);
}

} // namespace

Grid::Grid(DomainSpec domain, double h) : domain_(std::move(domain)), h_(h) {
  if (!(h > 0.0)) {
    throw InvalidArgument("grid spacing must be positive");
  }
  const Box box = domain_.bounding_box();
  origin_ = box.lo;
  nx_ = cells_along(box.hi.x - box.lo.x, h, "x");
  ny_ = cells_along(box.hi.y - box.lo.y, h, "y");

  mask_.assign(size(), 0);
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      if (domain_.contains(position(i, j))) {
        mask_[index(i, j)] = 1;
        ++interior_count_;
      }
    }
  }
  if (interior_count_ == 0) {
    throw InvalidArgument("grid has no interior nodes");
  }

  // Connectivity of the interior mask (4-neighbour flood fill).
  std::vector<std::uint8_t> seen(size(), 0);
  std::vector<std::size_t> stack;
  for (std::size_t k = 0; k < mask_.size(); ++k) {
    if (mask_[k]) {
      stack.push_back(k);
      seen[k] = 1;
      break;
    }
  }
  std::size_t reached = 0;
  const std::size_t s = static_cast<std::size_t>(stride());
  while (!stack.empty()) {
    const std::size_t k = stack.back();
    stack.pop_back();
    ++reached;
    for (std::size_t n : {k - 1, k + 1, k - s, k + s}) {
      if (mask_[n] && !seen[n]) {
        seen[n] = 1;
        stack.push_back(n);
      }
    }
  }
  if (reached != interior_count_) {
    throw InvalidArgument("interior mask is not connected at this grid spacing");
  }
}

} // namespace skyrmion
