#include "banditnav/episode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

#include "banditnav/bridge.hpp"
#include "banditnav/frontier.hpp"
#include "banditnav/metrics.hpp"
#include "banditnav/path.hpp"
#include "banditnav/trace.hpp"
#include "banditnav/visibility.hpp"

namespace banditnav {

std::string_view to_string(SensorKind k) {
    switch (k) {
        case SensorKind::synthetic: return "synthetic";
        case SensorKind::replay: return "replay";
        case SensorKind::bridge: return "bridge";
    }
    return "unknown";
}

std::optional<SensorKind> parse_sensor_kind(std::string_view name) {
    for (SensorKind k : {SensorKind::synthetic, SensorKind::replay, SensorKind::bridge}) {
        if (name == to_string(k)) return k;
    }
    return std::nullopt;
}

std::string_view to_string(FailureReason r) {
    switch (r) {
        case FailureReason::timeout: return "timeout";
        case FailureReason::no_frontier: return "no_frontier";
        case FailureReason::sensor_failure: return "sensor_failure";
        case FailureReason::bad_stop: return "bad_stop";
    }
    return "unknown";
}

std::optional<FailureReason> parse_failure_reason(std::string_view name) {
    for (FailureReason r : {FailureReason::timeout, FailureReason::no_frontier,
                            FailureReason::sensor_failure, FailureReason::bad_stop}) {
        if (name == to_string(r)) return r;
    }
    return std::nullopt;
}

void EpisodeConfig::validate() const {
    if (max_steps < 1) throw Error("EpisodeConfig: max_steps must be >= 1");
    if (!(clearance > 0.0)) throw Error("EpisodeConfig: clearance must be positive");
    if (!(step_size > 0.0)) throw Error("EpisodeConfig: step_size must be positive");
    if (!(turn_angle > 0.0 && turn_angle < std::numbers::pi)) {
        throw Error("EpisodeConfig: turn_angle must lie in (0, pi)");
    }
    if (min_frontier_size < 1) throw Error("EpisodeConfig: min_frontier_size must be >= 1");
    if (!(detector.detect_range > 0.0)) throw Error("EpisodeConfig: detect_range must be positive");
    for (double p : {detector.false_negative_rate, detector.false_positive_rate}) {
        if (!(p >= 0.0 && p <= 1.0)) throw Error("EpisodeConfig: detector rates must lie in [0, 1]");
    }
    fov.validate();
    planner.validate();
    occupancy.validate();
}

namespace {

/// First ground-truth cell that blocks a forward move, or nullopt when the move is clear.
/// A move that would leave the grid is blocked by its own start cell.
std::optional<Cell> forward_blocker(const OccupancyMap& map, const Pose& pose, double length) {
    const GridSpec& spec = map.spec();
    const auto start = world_to_grid(pose.position, spec);
    if (!start) throw Error("step: pose outside grid");
    const Vec2 end{pose.position.x + length * std::cos(pose.heading),
                   pose.position.y + length * std::sin(pose.heading)};
    const auto end_cell = world_to_grid(end, spec);
    if (!end_cell) return start;
    std::vector<TraversedCell> cells;
    traverse_segment(spec, pose.position, pose.heading, length,
                     [&](Cell c) { return map.is_occupied(c); }, cells);
    if (!cells.empty() && map.is_occupied(cells.back().cell)) return cells.back().cell;
    // An end point on a cell boundary rounds into a cell the traversal may not report.
    if (map.is_occupied(*end_cell)) return end_cell;
    return std::nullopt;
}

}  // namespace

EpisodeState step(const EpisodeState& state, Action action, const OccupancyMap& truth,
                  const EpisodeConfig& config) {
    if (state.terminated) throw Error("step: episode already terminated");
    EpisodeState next = state;
    next.collided = false;
    ++next.steps;
    switch (action) {
        case Action::forward: {
            if (forward_blocker(truth, state.pose, config.step_size)) {
                next.collided = true;
            } else {
                next.pose.position.x += config.step_size * std::cos(state.pose.heading);
                next.pose.position.y += config.step_size * std::sin(state.pose.heading);
                next.path_length += distance(state.pose.position, next.pose.position);
            }
            break;
        }
        case Action::turn_left:
            next.pose.heading = normalize_angle(state.pose.heading + config.turn_angle);
            break;
        case Action::turn_right:
            next.pose.heading = normalize_angle(state.pose.heading - config.turn_angle);
            break;
        case Action::stop:
            next.terminated = true;
            break;
    }
    return next;
}

bool stop_is_valid(const Environment& env, const Pose& pose, double clearance) {
    const GridSpec& spec = env.occ_truth.spec();
    for (Cell t : env.target_cells) {
        if (distance(pose.position, spec.center(t)) <= clearance &&
            line_of_sight(env.occ_truth, pose.position, t)) {
            return true;
        }
    }
    return false;
}

std::unique_ptr<ScoreSource> make_score_source(const Environment& env, const EpisodeConfig& config) {
    switch (config.sensor.kind) {
        case SensorKind::synthetic:
            return std::make_unique<SyntheticSource>(env.semantic_truth, config.fov,
                                                     config.sensor.synthetic,
                                                     mix_seed(config.rng_seed, config.episode_id));
        case SensorKind::replay:
            return std::make_unique<ReplaySource>(read_trace_file(config.sensor.trace_path));
        case SensorKind::bridge: {
            std::string endpoint = config.sensor.endpoint;
            if (const char* env_endpoint = std::getenv(kSensorEndpointEnv); env_endpoint && *env_endpoint) {
                endpoint = env_endpoint;
            }
            if (endpoint.empty()) throw Error("bridge sensor: no endpoint configured");
            auto client = std::make_unique<BridgeClient>(open_transport(parse_endpoint(endpoint)));
            return std::make_unique<BridgeSource>(std::move(client));
        }
    }
    throw Error("make_score_source: unknown sensor kind");
}

namespace {

std::vector<std::string> episode_prompts(const PromptEnsemble& ensemble, std::string_view target) {
    if (ensemble.prompts.size() >= 2) return ensemble.instantiate(target);
    // Single-prompt runs: substitute without the ensemble checks.
    std::vector<std::string> out;
    for (std::string p : ensemble.prompts) {
        if (const auto pos = p.find(ensemble.target_token);
            !ensemble.target_token.empty() && pos != std::string::npos) {
            p.replace(pos, ensemble.target_token.size(), target);
        }
        out.push_back(std::move(p));
    }
    return out;
}

int chebyshev(Cell a, Cell b) { return std::max(std::abs(a.col - b.col), std::abs(a.row - b.row)); }

/// Every cell strictly between the robot and `target` is known free.
bool clear_in_belief(const OccupancyMap& occ, Vec2 from, Cell target) {
    const GridSpec& spec = occ.spec();
    const auto start = world_to_grid(from, spec);
    for (Cell c : swept_cells(spec, from, spec.center(target))) {
        if (c == target || (start && c == *start)) continue;
        if (occ.state(c) != CellState::free) return false;
    }
    return true;
}

class Runner {
public:
    Runner(const Environment& env, const EpisodeConfig& config, ScoreSource& source)
        : env_(env),
          cfg_(config),
          source_(source),
          spec_(env.occ_truth.spec()),
          occ_(spec_, config.occupancy),
          sem_(spec_),
          selector_(config.planner),
          detector_rng_(mix_seed(config.rng_seed, 0x5D3E7EC7ULL)),
          prompts_(episode_prompts(config.sensor.prompts, env.category)),
          blacklist_(spec_.cell_count(), false) {
        state_.pose = env.start;
    }

    EpisodeOutcome run() {
        EpisodeOutcome out{{}, {state_.pose}, {}, occ_, sem_, {}};
        std::optional<FailureReason> failure;
        while (state_.steps < cfg_.max_steps) {
            const VisibleSet visible = focal_cone(state_.pose, env_.occ_truth, cfg_.fov);
            update_occupancy(occ_, state_.pose, visible);
            try {
                sense(visible);
            } catch (const std::exception& e) {
                out.sensor_error = e.what();
                failure = FailureReason::sensor_failure;
                break;
            }
            detect(visible);
            const std::optional<Action> action = decide();
            if (!action) {
                failure = FailureReason::no_frontier;
                break;
            }
            apply(*action);
            out.actions.push_back(*action);
            out.trajectory.push_back(state_.pose);
            if (state_.terminated) break;
        }

        EpisodeResult& r = out.result;
        r.steps_used = state_.steps;
        r.path_length = state_.path_length;
        if (state_.terminated) {
            r.success = stop_is_valid(env_, state_.pose, cfg_.clearance);
            if (!r.success) failure = FailureReason::bad_stop;
        } else if (!failure) {
            failure = FailureReason::timeout;
        }
        r.failure_reason = r.success ? std::nullopt : failure;
        r.spl_term = spl_term(r.success, env_.shortest_path_len, r.path_length);
        out.occupancy = occ_;
        out.semantic = sem_;
        return out;
    }

private:
    void sense(const VisibleSet& visible) {
        if (visible.empty()) return;
        ViewContext view;
        view.episode = cfg_.episode_id;
        view.step = static_cast<std::uint64_t>(state_.steps);
        view.pose = state_.pose;
        view.visible = &visible;
        view.target = env_.category;
        view.prompts = prompts_;
        ScoreSample sample = source_.next(view);
        sample.validate();
        if (cfg_.sensor.normalize_scores) sample = normalize_scores(std::move(sample));
        const EnsembleStats stats =
            sample.scores.size() == 1 ? single_prompt_stats(sample) : ensemble_stats(sample);
        const RelevanceObservation obs =
            make_observation(stats, cfg_.fov, cfg_.sensor.synthetic.convention);
        update_semantic(sem_, obs, visible);
    }

    void detect(const VisibleSet& visible) {
        if (goal_) return;
        const DetectorConfig& d = cfg_.detector;
        auto event = check_detection(state_.pose, env_.target_cells, visible, d.detect_range,
                                     static_cast<std::uint64_t>(state_.steps));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        if (event && d.false_negative_rate > 0.0 && u(detector_rng_) < d.false_negative_rate) {
            event.reset();
        }
        if (!event && d.false_positive_rate > 0.0 && u(detector_rng_) < d.false_positive_rate) {
            std::vector<Cell> decoys;
            for (const VisibleCell& v : visible.cells) {
                if (!v.terminal && v.range <= d.detect_range) decoys.push_back(v.cell);
            }
            if (!decoys.empty()) {
                std::uniform_int_distribution<std::size_t> pick(0, decoys.size() - 1);
                event = DetectionEvent{decoys[pick(detector_rng_)],
                                       static_cast<std::uint64_t>(state_.steps)};
            }
        }
        if (event) goal_ = event->goal;
    }

    int full_turn() const {
        return static_cast<int>(std::ceil(2.0 * std::numbers::pi / cfg_.turn_angle - 1e-9));
    }

    Cell robot_cell() const {
        const auto c = world_to_grid(state_.pose.position, spec_);
        if (!c) throw Error("run_episode: robot left the grid");
        return *c;
    }

    std::optional<Action> decide() {
        const Cell rc = robot_cell();
        if (goal_) {
            if (distance(state_.pose.position, spec_.center(*goal_)) <= cfg_.clearance &&
                clear_in_belief(occ_, state_.pose.position, *goal_)) {
                return Action::stop;
            }
            auto path = plan_path(occ_, rc, *goal_, UnknownPolicy::blocked);
            if (!path) path = plan_path(occ_, rc, *goal_, UnknownPolicy::traversable);
            if (path && path->cells.size() > 1) return follow(*path);
            goal_.reset();
        }
        return explore(rc);
    }

    std::optional<Action> explore(Cell rc) {
        const std::vector<std::uint8_t> states = occ_.states();
        const std::vector<Cell> cells = detect_frontier_cells(states, spec_);
        const std::vector<Frontier> frontiers = cluster_frontiers(cells, cfg_.min_frontier_size);

        auto still_frontier = [&](const Frontier& f) {
            return std::any_of(f.cells.begin(), f.cells.end(), [&](Cell c) {
                return std::binary_search(cells.begin(), cells.end(), c);
            });
        };

        // Each pass either returns an action or blacklists the committed frontier.
        for (int attempt = 0; attempt < 64; ++attempt) {
            bool reselect = !committed_ || cfg_.planner.replan == ReplanTrigger::every_step ||
                            !still_frontier(*committed_);
            if (!reselect && chebyshev(rc, committed_->centroid) <= 1) {
                if (auto look = look_toward(*committed_, states)) return look;
                retire_committed();
                reselect = true;
            }
            if (reselect && !choose(frontiers, rc)) {
                // Nothing to explore in view: scan a full turn before giving up.
                if (scan_turns_ < full_turn()) {
                    ++scan_turns_;
                    return Action::turn_left;
                }
                return std::nullopt;
            }

            const auto path = plan_path(occ_, rc, committed_->centroid, UnknownPolicy::traversable);
            if (path && path->cells.size() > 1) return follow(*path);
            if (path && chebyshev(rc, committed_->centroid) <= 1) {
                if (auto look = look_toward(*committed_, states)) return look;
            }
            retire_committed();
        }
        return std::nullopt;
    }

    bool choose(const std::vector<Frontier>& frontiers, Cell rc) {
        if (frontiers.empty()) return false;
        const auto dist = path_distances(occ_, rc, UnknownPolicy::traversable);
        std::vector<FrontierBelief> beliefs;
        std::vector<double> costs;
        for (const Frontier& f : frontiers) {
            const std::size_t i = spec_.index(f.centroid);
            if (blacklist_[i] || !dist[i]) continue;
            const Belief b = sem_.query(f.centroid);
            beliefs.push_back({f, b.mean, std::sqrt(b.variance)});
            costs.push_back(dist[i]->value());
        }
        if (beliefs.empty()) return false;
        const std::size_t pick = selector_.select(beliefs, costs);
        committed_ = beliefs[pick].frontier;
        look_turns_ = 0;
        scan_turns_ = 0;
        return true;
    }

    void retire_committed() {
        if (!committed_) return;
        blacklist_[spec_.index(committed_->centroid)] = true;
        committed_.reset();
    }

    /// On arrival at a frontier that persists, turn toward its unknown side.
    std::optional<Action> look_toward(const Frontier& f, const std::vector<std::uint8_t>& states) {
        double sx = 0.0, sy = 0.0;
        int n = 0;
        for (Cell c : f.cells) {
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    const Cell m{c.col + dc, c.row + dr};
                    if (!spec_.contains(m) || states[spec_.index(m)] != 0) continue;
                    const Vec2 p = spec_.center(m);
                    sx += p.x;
                    sy += p.y;
                    ++n;
                }
            }
        }
        if (n == 0 || look_turns_ >= 12) return std::nullopt;
        const double bearing = normalize_angle(
            std::atan2(sy / n - state_.pose.position.y, sx / n - state_.pose.position.x) -
            state_.pose.heading);
        if (std::abs(bearing) <= cfg_.turn_angle / 2.0) return std::nullopt;
        ++look_turns_;
        return bearing > 0.0 ? Action::turn_left : Action::turn_right;
    }

    /// One action along `path`: turn toward a short lookahead, then move.
    Action follow(const GridPath& path) {
        if (detour_) {
            const double diff = normalize_angle(*detour_ - state_.pose.heading);
            if (std::abs(diff) > cfg_.turn_angle / 2.0) return diff > 0.0 ? Action::turn_left : Action::turn_right;
            detour_.reset();
            if (!forward_blocker(occ_, state_.pose, cfg_.step_size)) return Action::forward;
        }
        const std::size_t last = path.cells.size() - 1;
        const Vec2 target = spec_.center(path.cells[std::min<std::size_t>(2, last)]);
        const double desired =
            std::atan2(target.y - state_.pose.position.y, target.x - state_.pose.position.x);
        const double bearing = normalize_angle(desired - state_.pose.heading);
        if (std::abs(bearing) > cfg_.turn_angle / 2.0) {
            return bearing > 0.0 ? Action::turn_left : Action::turn_right;
        }
        if (!forward_blocker(occ_, state_.pose, cfg_.step_size)) return Action::forward;

        // Aligned but the move clips a known obstacle: commit to the nearest
        // reachable heading that gets closer to the next path cell.
        const Vec2 next = spec_.center(path.cells[1]);
        const double here = distance(state_.pose.position, next);
        for (int k = 1; k <= full_turn() / 2; ++k) {
            for (int sign : {1, -1}) {
                Pose probe = state_.pose;
                probe.heading = normalize_angle(state_.pose.heading + sign * k * cfg_.turn_angle);
                if (forward_blocker(occ_, probe, cfg_.step_size)) continue;
                const Vec2 moved{probe.position.x + cfg_.step_size * std::cos(probe.heading),
                                 probe.position.y + cfg_.step_size * std::sin(probe.heading)};
                if (distance(moved, next) >= here) continue;
                detour_ = probe.heading;
                return sign > 0 ? Action::turn_left : Action::turn_right;
            }
        }
        return bearing >= 0.0 ? Action::turn_left : Action::turn_right;
    }

    void apply(Action action) {
        if (action == Action::forward) {
            if (const auto blocker = forward_blocker(env_.occ_truth, state_.pose, cfg_.step_size);
                blocker && !occ_.is_occupied(*blocker)) {
                // Bump contact: the blocking cell becomes known.
                occ_.add_evidence(*blocker, cfg_.occupancy.hit_increment);
            }
        }
        state_ = step(state_, action, env_.occ_truth, cfg_);
    }

    const Environment& env_;
    const EpisodeConfig& cfg_;
    ScoreSource& source_;
    GridSpec spec_;
    OccupancyMap occ_;
    SemanticMap sem_;
    FrontierSelector selector_;
    std::mt19937_64 detector_rng_;
    std::vector<std::string> prompts_;
    std::vector<bool> blacklist_;
    EpisodeState state_;
    std::optional<Cell> goal_;
    std::optional<Frontier> committed_;
    std::optional<double> detour_;
    int look_turns_ = 0;
    int scan_turns_ = 0;
};

}  // namespace

EpisodeOutcome run_episode(const Environment& env, const EpisodeConfig& config, ScoreSource* source) {
    config.validate();
    std::unique_ptr<ScoreSource> owned;
    if (!source) {
        try {
            owned = make_score_source(env, config);
        } catch (const std::exception& e) {
            const GridSpec& spec = env.occ_truth.spec();
            EpisodeOutcome out{{}, {env.start}, {}, OccupancyMap(spec, config.occupancy),
                               SemanticMap(spec), e.what()};
            out.result.failure_reason = FailureReason::sensor_failure;
            return out;
        }
        source = owned.get();
    }
    return Runner(env, config, *source).run();
}

}  // namespace banditnav
