#pragma once
// Frontier selection as a multi-armed bandit over frontier relevance beliefs,
// plus the geometric baselines and the simulated target detector.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "banditnav/frontier.hpp"
#include "banditnav/grid.hpp"
#include "banditnav/occupancy_map.hpp"

namespace banditnav {

enum class Strategy {
    ifbe1,    // expected improvement over the best frontier mean
    ifbe2,    // GP upper confidence bound
    closest,  // nearest reachable frontier by path cost
    random,   // uniform draw
};

std::string_view to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);

enum class ReplanTrigger { on_arrival, every_step };

std::string_view to_string(ReplanTrigger t);
std::optional<ReplanTrigger> parse_replan_trigger(std::string_view name);

struct PlannerConfig {
    Strategy strategy = Strategy::ifbe2;
    double beta = 1.5;
    std::uint64_t rng_seed = 0;
    ReplanTrigger replan = ReplanTrigger::on_arrival;

    void validate() const;
};

struct FrontierBelief {
    Frontier frontier;
    double mu = 0.0;
    double sigma = 0.0;  // standard deviation of the centroid belief
};

/// Standard deviations at or below this are clamped before expected improvement.
inline constexpr double kMinSigma = 1e-9;

/// (mu - incumbent) * Phi(z) + sigma * phi(z), z = (mu - incumbent) / sigma.
/// Throws if sigma <= 0.
double expected_improvement(double mu, double sigma, double incumbent);

/// mu + sqrt(beta) * sigma
double gp_ucb(double mu, double sigma, double beta);

class NoFrontierError : public Error {
public:
    using Error::Error;
};

/// Stateful selector: owns the random stream used by the `random` strategy,
/// so a sequence of selections is reproducible from the config seed.
class FrontierSelector {
public:
    explicit FrontierSelector(PlannerConfig config);

    const PlannerConfig& config() const { return config_; }

    /// Index of the chosen belief. `path_cost` holds the travel cost to each
    /// frontier (infinity = unreachable) and is only read by `closest`.
    /// Ties resolve to the smaller centroid (row, col).
    std::size_t select(std::span<const FrontierBelief> beliefs,
                       std::span<const double> path_cost = {});

private:
    PlannerConfig config_;
    std::mt19937_64 rng_;
};

/// One-shot selection; computes path costs on `occ` for the closest strategy.
std::size_t select_frontier(std::span<const FrontierBelief> beliefs, const Pose& robot,
                            const OccupancyMap& occ, const PlannerConfig& config);

struct DetectionEvent {
    Cell goal;
    std::uint64_t step = 0;
};

/// Fires when a target cell is in the visible set within `detect_range`;
/// the goal is the nearest such cell.
std::optional<DetectionEvent> check_detection(const Pose& pose, std::span<const Cell> target_cells,
                                              const VisibleSet& visible, double detect_range,
                                              std::uint64_t step = 0);

}  // namespace banditnav
