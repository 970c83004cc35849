#pragma once
// Procedural indoor environments: rooms on a slot lattice joined by
// corridors, with one target object and a geodesic relevance field.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "banditnav/grid.hpp"
#include "banditnav/occupancy_map.hpp"
#include "banditnav/sensor.hpp"

namespace banditnav {

struct GenConfig {
    int width = 64;
    int height = 64;
    double resolution = 0.25;
    int rooms_x = 3;
    int rooms_y = 3;
    int min_room = 7;              // cells per side
    int corridor_width = 3;        // cells
    double extra_door_probability = 0.25;
    int furniture_per_room = 2;    // 2x2 obstacles
    int target_size = 2;           // target footprint side, cells
    /// Decay length of the relevance field, in cells. Infinity gives a flat field.
    double relevance_decay = 8.0;
    std::string category = "chair";

    void validate() const;
};

struct Room {
    int col0 = 0, row0 = 0, col1 = 0, row1 = 0;  // inclusive free interior

    bool contains(Cell c) const { return c.col >= col0 && c.col <= col1 && c.row >= row0 && c.row <= row1; }
};

struct Environment {
    OccupancyMap occ_truth;
    SemanticField semantic_truth;
    std::vector<Cell> target_cells;  // sorted
    std::string category;
    Pose start;
    double shortest_path_len = 0.0;  // meters, start to nearest target
    std::vector<Room> rooms;
    std::uint64_t seed = 0;
};

class GenerationError : public Error {
public:
    using Error::Error;
};

/// Deterministic per seed; retries internally up to 100 times.
Environment generate_environment(const GenConfig& config, std::uint64_t seed);

/// exp(-d/decay) of the 8-connected geodesic distance (in cells) from the
/// target cells through free space. Walls take the distance of the free cell
/// they bound; cells the flood never reaches get 0.
SemanticField geodesic_relevance(const OccupancyMap& truth, const std::vector<Cell>& targets,
                                 double decay);

}  // namespace banditnav
