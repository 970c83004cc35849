#pragma once
// Run configuration loaded from a JSON document with one table per module:
//
//   {"environment": {...}, "episode": {...}, "fov": {...}, "sensor": {...},
//    "planner": {...}, "detector": {...}, "occupancy": {...}, "rng_seed": 0}
//
// Every key is optional; unknown keys are rejected.

#include <cstdint>
#include <string>
#include <string_view>

#include "banditnav/environment.hpp"
#include "banditnav/episode.hpp"

namespace banditnav {

/// Bad configuration. `field()` is the dotted path of the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what);
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct RunConfig {
    GenConfig environment{};
    EpisodeConfig episode{};
};

RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::string& path);

/// Canonical JSON form of `config`; parse_run_config(dump) round-trips.
std::string dump_run_config(const RunConfig& config);

/// Episode configuration for one (strategy, seed) cell of a batch. The
/// episode and planner random streams are derived from the base seed and
/// the environment seed.
EpisodeConfig episode_config_for(const RunConfig& config, Strategy strategy, std::uint64_t seed);

}  // namespace banditnav
