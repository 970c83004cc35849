#include "banditnav/metrics.hpp"

#include <algorithm>

namespace banditnav {

double spl_term(bool success, double shortest, double travelled) {
    if (!success) return 0.0;
    return shortest / std::max(travelled, shortest);
}

Metrics compute_metrics(std::span<const EpisodeResult> results,
                        std::span<const double> shortest_path_len) {
    if (results.empty()) throw Error("compute_metrics: no results");
    if (results.size() != shortest_path_len.size()) {
        throw Error("compute_metrics: one shortest path length per result required");
    }
    Metrics m;
    m.episodes = results.size();
    double successes = 0.0, spl = 0.0, steps = 0.0, path = 0.0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const EpisodeResult& r = results[i];
        successes += r.success ? 1.0 : 0.0;
        spl += spl_term(r.success, shortest_path_len[i], r.path_length);
        steps += r.steps_used;
        path += r.path_length;
    }
    const double n = static_cast<double>(results.size());
    m.sr = 100.0 * successes / n;
    m.spl = 100.0 * spl / n;
    m.mean_steps = steps / n;
    m.mean_path_m = path / n;
    return m;
}

}  // namespace banditnav
