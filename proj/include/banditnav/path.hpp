#pragma once
// 8-connected grid search with exact octile costs. Diagonal moves may not cut
// a corner: both orthogonal neighbours must be passable.

#include <cstdint>
#include <optional>
#include <vector>

#include "banditnav/grid.hpp"
#include "banditnav/occupancy_map.hpp"

namespace banditnav {

enum class UnknownPolicy { blocked, traversable };

/// Path cost straight + diagonal * sqrt(2), kept as integer counts so
/// comparisons are exact.
struct OctileCost {
    std::int32_t straight = 0;
    std::int32_t diagonal = 0;

    double value() const;
    double meters(double resolution) const { return value() * resolution; }

    friend OctileCost operator+(OctileCost a, OctileCost b) {
        return {a.straight + b.straight, a.diagonal + b.diagonal};
    }
    friend bool operator==(OctileCost, OctileCost) = default;
    friend bool operator<(OctileCost a, OctileCost b);
};

/// Admissible octile distance between two cells.
OctileCost octile_distance(Cell a, Cell b);

struct GridPath {
    std::vector<Cell> cells;  // from .. to inclusive
    OctileCost cost;
};

bool passable(CellState state, UnknownPolicy policy);

/// A* from `from` to `to`. Returns nullopt when unreachable. Throws if `from`
/// is occupied or either end lies outside the grid.
std::optional<GridPath> plan_path(const OccupancyMap& occ, Cell from, Cell to, UnknownPolicy policy);

/// Single-source costs to every cell (nullopt = unreachable).
std::vector<std::optional<OctileCost>> path_distances(const OccupancyMap& occ, Cell from,
                                                      UnknownPolicy policy);

}  // namespace banditnav
