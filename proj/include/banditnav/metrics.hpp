#pragma once

#include <span>

#include "banditnav/episode.hpp"

namespace banditnav {

struct Metrics {
    std::size_t episodes = 0;
    double sr = 0.0;   // percent
    double spl = 0.0;  // percent
    double mean_steps = 0.0;
    double mean_path_m = 0.0;
};

/// Success rate and success weighted by path length, in percent.
/// `shortest_path_len[i]` pairs with `results[i]`.
Metrics compute_metrics(std::span<const EpisodeResult> results,
                        std::span<const double> shortest_path_len);

double spl_term(bool success, double shortest, double travelled);

}  // namespace banditnav
