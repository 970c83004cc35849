#include "banditnav/semantic_map.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include "banditnav/kernels/kernels.hpp"
#include "banditnav/sensor.hpp"

namespace banditnav {

SemanticMap::SemanticMap(GridSpec spec) : spec_(spec) {
    spec_.validate();
    if (spec_.cell_count() > std::numeric_limits<std::uint32_t>::max()) {
        throw Error("SemanticMap: grid too large");
    }
    mu_.assign(spec_.cell_count(), kPriorRelevanceMean);
    var_.assign(spec_.cell_count(), kPriorRelevanceVariance);
}

Belief SemanticMap::query(Cell c) const {
    if (!spec_.contains(c)) throw Error("SemanticMap::query: cell outside grid");
    const std::size_t i = spec_.index(c);
    return {mu_[i], var_[i]};
}

void update_semantic(SemanticMap& map, const RelevanceObservation& observation,
                     const VisibleSet& visible) {
    if (!(visible.spec == map.spec())) throw Error("update_semantic: grid spec mismatch");
    if (!std::isfinite(observation.mean)) throw Error("update_semantic: non-finite measurement");
    std::vector<std::uint32_t> idx;
    std::vector<double> meas_var;
    idx.reserve(visible.size());
    meas_var.reserve(visible.size());
    for (const VisibleCell& v : visible.cells) {
        if (!map.spec().contains(v.cell)) throw Error("update_semantic: cell outside grid");
        if (v.ray < 0 || static_cast<std::size_t>(v.ray) >= observation.per_ray_variance.size()) {
            throw Error("update_semantic: observation does not cover ray " + std::to_string(v.ray));
        }
        const double r = observation.per_ray_variance[static_cast<std::size_t>(v.ray)];
        if (!(r > 0.0) || !std::isfinite(r)) {
            throw Error("update_semantic: degenerate measurement variance");
        }
        idx.push_back(static_cast<std::uint32_t>(map.spec().index(v.cell)));
        meas_var.push_back(r);
    }
    kernels::active().fuse_gaussian(map.means_mut().data(), map.variances_mut().data(), idx.data(),
                                    meas_var.data(), idx.size(), observation.mean);
}

}  // namespace banditnav
