#pragma once

#include <cstdint>
#include <vector>

#include "specstab/errors.hpp"
#include "specstab/geom/grid.hpp"

namespace specstab::geom {

// Sampled subset of an ambient box: one flag per grid cell, the sample point
// being the cell center.  Invariants (enforced by the producing factories, not
// by the raw container): the set is nonempty and keeps a positive margin to
// the ambient boundary unless it is the designated full-box value.
class RasterSet {
 public:
  RasterSet() = default;
  RasterSet(GridGeometry grid, std::vector<std::uint8_t> mask);

  // Every cell set; the only value allowed to touch the ambient boundary.
  static RasterSet full_box(const GridGeometry& grid);
  static RasterSet empty(const GridGeometry& grid);

  const GridGeometry& grid() const { return grid_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  std::vector<std::uint8_t>& mask() { return mask_; }

  bool at(int i, int j) const { return mask_[static_cast<size_t>(grid_.index(i, j))] != 0; }
  // Out-of-range coordinates count as complement.
  bool at_clipped(int i, int j) const {
    return grid_.in_range(i, j) && at(i, j);
  }
  void set(int i, int j, bool v) { mask_[static_cast<size_t>(grid_.index(i, j))] = v ? 1 : 0; }

  std::size_t count() const;
  bool empty_set() const { return count() == 0; }
  bool is_full() const { return count() == mask_.size(); }

  // Shortest distance from any member cell center to the ambient box boundary.
  // Infinity for the empty set.
  double margin() const;

  // True when the set touches the ambient boundary ring of cells.
  bool touches_frame() const;

  // Sample points of the member cells.
  std::vector<Point> points() const;

  // Member cells 8-adjacent to the complement (clipped: outside counts as
  // complement).  Used as the sampled boundary from the inside.
  RasterSet inner_boundary() const;
  // Complement cells 8-adjacent to the set, restricted to the grid.
  RasterSet outer_boundary() const;
  // Union of the two one-cell rings; the sampled topological boundary.
  RasterSet boundary() const;

  // Set algebra; grids must match (DomainError otherwise).
  RasterSet set_union(const RasterSet& other) const;
  RasterSet set_intersection(const RasterSet& other) const;
  RasterSet set_difference(const RasterSet& other) const;
  RasterSet symmetric_difference(const RasterSet& other) const;
  RasterSet complement() const;

  bool same_grid(const RasterSet& other) const { return grid_ == other.grid_; }

  // Throws EmptyDomain if no cell is set.
  void require_nonempty(const char* who) const;
  // Throws MarginError when a non-full set touches the ambient frame.
  void require_margin(const char* who) const;

 private:
  GridGeometry grid_{};
  std::vector<std::uint8_t> mask_;
};

}  // namespace specstab::geom
