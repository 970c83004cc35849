#pragma once

#include <span>
#include <vector>

#include "banditnav/grid.hpp"
#include "banditnav/occupancy_map.hpp"

namespace banditnav {

inline constexpr int kDefaultMinFrontierSize = 3;

/// One 8-connected cluster of frontier cells.
struct Frontier {
    std::vector<Cell> cells;  // sorted row-major
    Cell centroid;            // member closest to the cells' mean position

    std::size_t size() const { return cells.size(); }
    friend bool operator==(const Frontier&, const Frontier&) = default;
};

/// Free cells with at least one unknown 8-neighbour, in row-major order.
std::vector<Cell> detect_frontier_cells(const OccupancyMap& occ);

/// Same, from a precomputed CellState byte grid.
std::vector<Cell> detect_frontier_cells(std::span<const std::uint8_t> states, const GridSpec& spec);

/// 8-connected components of `cells`, dropping components smaller than
/// `min_size`. Output is sorted by centroid (row, col).
std::vector<Frontier> cluster_frontiers(std::span<const Cell> cells,
                                        int min_size = kDefaultMinFrontierSize);

inline std::size_t frontier_count(std::span<const Frontier> frontiers) { return frontiers.size(); }

}  // namespace banditnav
