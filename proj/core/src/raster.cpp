#include "specstab/geom/raster.hpp"

#include <algorithm>
#include <limits>

namespace specstab::geom {

RasterSet::RasterSet(GridGeometry grid, std::vector<std::uint8_t> mask)
    : grid_(grid), mask_(std::move(mask)) {
  if (mask_.size() != static_cast<size_t>(grid_.cell_count()))
    throw DomainError("raster mask size does not match grid");
}

RasterSet RasterSet::full_box(const GridGeometry& grid) {
  return RasterSet(grid, std::vector<std::uint8_t>(static_cast<size_t>(grid.cell_count()), 1));
}

RasterSet RasterSet::empty(const GridGeometry& grid) {
  return RasterSet(grid, std::vector<std::uint8_t>(static_cast<size_t>(grid.cell_count()), 0));
}

std::size_t RasterSet::count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

double RasterSet::margin() const {
  double best = std::numeric_limits<double>::infinity();
  const int n = grid_.n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!at(i, j)) continue;
      Point c = grid_.center(i, j);
      double dx = std::min(c.x - grid_.origin.x, grid_.origin.x + grid_.side - c.x);
      double dy = std::min(c.y - grid_.origin.y, grid_.origin.y + grid_.side - c.y);
      best = std::min(best, std::min(dx, dy));
    }
  return best;
}

bool RasterSet::touches_frame() const {
  const int n = grid_.n;
  for (int i = 0; i < n; ++i)
    if (at(i, 0) || at(i, n - 1) || at(0, i) || at(n - 1, i)) return true;
  return false;
}

std::vector<Point> RasterSet::points() const {
  std::vector<Point> out;
  out.reserve(count());
  for (int j = 0; j < grid_.n; ++j)
    for (int i = 0; i < grid_.n; ++i)
      if (at(i, j)) out.push_back(grid_.center(i, j));
  return out;
}

RasterSet RasterSet::inner_boundary() const {
  RasterSet out = RasterSet::empty(grid_);
  const int n = grid_.n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!at(i, j)) continue;
      bool adj = false;
      for (int dj = -1; dj <= 1 && !adj; ++dj)
        for (int di = -1; di <= 1 && !adj; ++di) {
          if (di == 0 && dj == 0) continue;
          if (!at_clipped(i + di, j + dj)) adj = true;
        }
      if (adj) out.set(i, j, true);
    }
  return out;
}

RasterSet RasterSet::outer_boundary() const {
  RasterSet out = RasterSet::empty(grid_);
  const int n = grid_.n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (at(i, j)) continue;
      bool adj = false;
      for (int dj = -1; dj <= 1 && !adj; ++dj)
        for (int di = -1; di <= 1 && !adj; ++di) {
          if (di == 0 && dj == 0) continue;
          if (at_clipped(i + di, j + dj)) adj = true;
        }
      if (adj) out.set(i, j, true);
    }
  return out;
}

RasterSet RasterSet::boundary() const { return inner_boundary().set_union(outer_boundary()); }

namespace {
void check_grids(const RasterSet& a, const RasterSet& b) {
  if (!a.same_grid(b)) throw DomainError("raster sets live on different grids");
}
}  // namespace

RasterSet RasterSet::set_union(const RasterSet& other) const {
  check_grids(*this, other);
  RasterSet out = *this;
  for (size_t k = 0; k < mask_.size(); ++k)
    out.mask()[k] = (mask_[k] | other.mask()[k]) ? 1 : 0;
  return out;
}

RasterSet RasterSet::set_intersection(const RasterSet& other) const {
  check_grids(*this, other);
  RasterSet out = *this;
  for (size_t k = 0; k < mask_.size(); ++k)
    out.mask()[k] = (mask_[k] & other.mask()[k]) ? 1 : 0;
  return out;
}

RasterSet RasterSet::set_difference(const RasterSet& other) const {
  check_grids(*this, other);
  RasterSet out = *this;
  for (size_t k = 0; k < mask_.size(); ++k)
    out.mask()[k] = (mask_[k] && !other.mask()[k]) ? 1 : 0;
  return out;
}

RasterSet RasterSet::symmetric_difference(const RasterSet& other) const {
  check_grids(*this, other);
  RasterSet out = *this;
  for (size_t k = 0; k < mask_.size(); ++k)
    out.mask()[k] = (mask_[k] != other.mask()[k]) ? 1 : 0;
  return out;
}

RasterSet RasterSet::complement() const {
  RasterSet out = *this;
  for (size_t k = 0; k < mask_.size(); ++k) out.mask()[k] = mask_[k] ? 0 : 1;
  return out;
}

void RasterSet::require_nonempty(const char* who) const {
  if (empty_set()) throw EmptyDomain(std::string(who) + ": sampled set is empty");
}

void RasterSet::require_margin(const char* who) const {
  if (is_full()) return;
  if (touches_frame())
    throw MarginError(std::string(who) + ": set touches the ambient box frame");
}

}  // namespace specstab::geom
