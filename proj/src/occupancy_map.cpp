#include "banditnav/occupancy_map.hpp"

#include <algorithm>

#include "banditnav/kernels/kernels.hpp"

namespace banditnav {

void OccupancyParams::validate() const {
    if (!(occupied_threshold >= free_threshold)) {
        throw Error("OccupancyParams: occupied threshold below free threshold");
    }
    if (!(hit_increment > 0.0 && miss_decrement > 0.0 && clamp > 0.0)) {
        throw Error("OccupancyParams: increments and clamp must be positive");
    }
}

OccupancyMap::OccupancyMap(GridSpec spec, OccupancyParams params)
    : spec_(spec), params_(params) {
    spec_.validate();
    params_.validate();
    log_odds_.assign(spec_.cell_count(), 0.0);
}

OccupancyMap OccupancyMap::from_mask(GridSpec spec, const std::vector<bool>& occupied,
                                     OccupancyParams params) {
    OccupancyMap map(spec, params);
    if (occupied.size() != map.log_odds_.size()) {
        throw Error("OccupancyMap::from_mask: mask size does not match grid");
    }
    for (std::size_t i = 0; i < occupied.size(); ++i) {
        map.log_odds_[i] = occupied[i] ? params.clamp : -params.clamp;
    }
    return map;
}

void OccupancyMap::add_evidence(Cell c, double delta) {
    double& v = log_odds_[spec_.index(c)];
    v = std::clamp(v + delta, -params_.clamp, params_.clamp);
}

void OccupancyMap::classify_all(std::span<std::uint8_t> out) const {
    if (out.size() != log_odds_.size()) throw Error("OccupancyMap::classify_all: size mismatch");
    kernels::active().classify_log_odds(log_odds_.data(), log_odds_.size(),
                                        params_.occupied_threshold, params_.free_threshold,
                                        out.data());
}

std::vector<std::uint8_t> OccupancyMap::states() const {
    std::vector<std::uint8_t> out(log_odds_.size());
    classify_all(out);
    return out;
}

void update_occupancy(OccupancyMap& map, const Pose& /*pose*/, const VisibleSet& visible) {
    if (!(visible.spec == map.spec())) throw Error("update_occupancy: grid spec mismatch");
    for (const VisibleCell& v : visible.cells) {
        if (!map.spec().contains(v.cell)) throw Error("update_occupancy: cell outside grid");
        map.add_evidence(v.cell, v.terminal ? map.params().hit_increment
                                            : -map.params().miss_decrement);
    }
}

}  // namespace banditnav
