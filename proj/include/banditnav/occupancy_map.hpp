#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "banditnav/grid.hpp"

namespace banditnav {

enum class CellState : std::uint8_t { unknown = 0, free = 1, occupied = 2 };

/// Log-odds evidence model for the tri-state occupancy map.
struct OccupancyParams {
    double occupied_threshold = 0.85;  // log-odds strictly above -> occupied
    double free_threshold = -0.85;     // log-odds strictly below -> free
    double hit_increment = 0.9;
    double miss_decrement = 0.9;
    double clamp = 10.0;

    void validate() const;
};

class OccupancyMap {
public:
    explicit OccupancyMap(GridSpec spec, OccupancyParams params = {});

    /// Fully known map: `occupied[i]` true cells saturate to occupied, the rest to free.
    static OccupancyMap from_mask(GridSpec spec, const std::vector<bool>& occupied,
                                  OccupancyParams params = {});

    const GridSpec& spec() const { return spec_; }
    const OccupancyParams& params() const { return params_; }

    CellState state(Cell c) const { return classify(log_odds_[spec_.index(c)]); }
    CellState state(std::size_t index) const { return classify(log_odds_[index]); }
    bool is_occupied(Cell c) const { return state(c) == CellState::occupied; }

    double log_odds(Cell c) const { return log_odds_[spec_.index(c)]; }
    std::span<const double> log_odds() const { return log_odds_; }
    std::span<double> log_odds_mut() { return log_odds_; }

    /// Adds evidence to one cell, clamped to +/-clamp.
    void add_evidence(Cell c, double delta);

    /// Classifies every cell into `out` (row-major, one CellState byte per cell)
    /// using the active kernel set.
    void classify_all(std::span<std::uint8_t> out) const;
    std::vector<std::uint8_t> states() const;

private:
    CellState classify(double lo) const {
        if (lo > params_.occupied_threshold) return CellState::occupied;
        if (lo < params_.free_threshold) return CellState::free;
        return CellState::unknown;
    }

    GridSpec spec_;
    OccupancyParams params_;
    std::vector<double> log_odds_;
};

/// Folds one focal cone into the map: terminal cells get occupied evidence,
/// every other visible cell free evidence.
void update_occupancy(OccupancyMap& map, const Pose& pose, const VisibleSet& visible);

}  // namespace banditnav
