#pragma once
// Episode state machine: sense, detect, select a frontier, move.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "banditnav/environment.hpp"
#include "banditnav/occupancy_map.hpp"
#include "banditnav/planner.hpp"
#include "banditnav/semantic_map.hpp"
#include "banditnav/sensor.hpp"

namespace banditnav {

enum class SensorKind { synthetic, replay, bridge };

std::string_view to_string(SensorKind k);
std::optional<SensorKind> parse_sensor_kind(std::string_view name);

struct SensorConfig {
    SensorKind kind = SensorKind::synthetic;
    SyntheticSensorOptions synthetic{};
    /// Map cosine scores from [-1, 1] onto [0, 1] before fusion.
    bool normalize_scores = false;
    PromptEnsemble prompts = default_prompt_ensemble();
    std::string trace_path;  // replay
    std::string endpoint;    // bridge; overridden by BANDITNAV_SENSOR_ENDPOINT
};

struct DetectorConfig {
    double detect_range = 4.0;
    double false_negative_rate = 0.0;
    double false_positive_rate = 0.0;
};

struct EpisodeConfig {
    int max_steps = 500;
    double clearance = 1.0;
    double step_size = 0.25;
    double turn_angle = deg_to_rad(30.0);
    FovSpec fov{};
    SensorConfig sensor{};
    PlannerConfig planner{};
    DetectorConfig detector{};
    OccupancyParams occupancy{};
    int min_frontier_size = kDefaultMinFrontierSize;
    std::uint64_t rng_seed = 0;
    std::uint64_t episode_id = 0;

    void validate() const;
};

enum class Action { forward, turn_left, turn_right, stop };

enum class FailureReason { timeout, no_frontier, sensor_failure, bad_stop };

std::string_view to_string(FailureReason r);
std::optional<FailureReason> parse_failure_reason(std::string_view name);

struct EpisodeResult {
    bool success = false;
    int steps_used = 0;
    double path_length = 0.0;  // meters actually travelled
    double spl_term = 0.0;
    std::optional<FailureReason> failure_reason;

    friend bool operator==(const EpisodeResult&, const EpisodeResult&) = default;
};

struct EpisodeState {
    Pose pose{};
    int steps = 0;
    double path_length = 0.0;
    bool collided = false;  // last forward action was blocked
    bool terminated = false;

    friend bool operator==(const EpisodeState&, const EpisodeState&) = default;
};

/// Applies one action against the ground truth. Throws after termination.
EpisodeState step(const EpisodeState& state, Action action, const OccupancyMap& truth,
                  const EpisodeConfig& config);

/// Success adjudication for a stop at `pose`: some target cell within
/// `clearance` and in line of sight.
bool stop_is_valid(const Environment& env, const Pose& pose, double clearance);

struct EpisodeOutcome {
    EpisodeResult result;
    std::vector<Pose> trajectory;  // start pose, then one entry per action
    std::vector<Action> actions;
    OccupancyMap occupancy;
    SemanticMap semantic;
    std::string sensor_error;  // set on sensor_failure
};

/// Runs one episode. When `source` is null the score source is built from
/// config.sensor.
EpisodeOutcome run_episode(const Environment& env, const EpisodeConfig& config,
                           ScoreSource* source = nullptr);

std::unique_ptr<ScoreSource> make_score_source(const Environment& env, const EpisodeConfig& config);

}  // namespace banditnav
