#pragma once

#include <vector>

#include "banditnav/grid.hpp"
#include "banditnav/occupancy_map.hpp"

namespace banditnav {

struct RayTrace {
    std::vector<TraversedCell> cells;  // in visit order
    bool terminal = false;             // last cell is occupied
};

/// Casts one ray at `bearing` relative to the pose heading, stopping at the
/// first occupied cell (inclusive), the grid boundary or fov.max_range.
/// Throws if the pose lies outside the grid.
RayTrace raycast(const Pose& from, double bearing, const OccupancyMap& occ, const FovSpec& fov);

/// Union of fov.ray_count rays spanning the horizontal field of view. A cell
/// reached by several rays keeps the ray with the smallest |bearing|.
VisibleSet focal_cone(const Pose& from, const OccupancyMap& occ, const FovSpec& fov);

/// True when no occupied cell lies strictly between `from` and the center of
/// `target` (the target cell itself may be occupied).
bool line_of_sight(const OccupancyMap& occ, Vec2 from, Cell target);

/// Cells swept when moving in a straight line from `a` to `b`, end cell included.
std::vector<Cell> swept_cells(const GridSpec& spec, Vec2 a, Vec2 b);

}  // namespace banditnav
