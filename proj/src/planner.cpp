#include "banditnav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "banditnav/kernels/kernels.hpp"
#include "banditnav/path.hpp"

namespace banditnav {

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::ifbe1: return "ifbe1";
        case Strategy::ifbe2: return "ifbe2";
        case Strategy::closest: return "closest";
        case Strategy::random: return "random";
    }
    return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
    for (Strategy s : {Strategy::ifbe1, Strategy::ifbe2, Strategy::closest, Strategy::random}) {
        if (name == to_string(s)) return s;
    }
    return std::nullopt;
}

std::string_view to_string(ReplanTrigger t) {
    return t == ReplanTrigger::on_arrival ? "on_arrival" : "every_step";
}

std::optional<ReplanTrigger> parse_replan_trigger(std::string_view name) {
    if (name == "on_arrival") return ReplanTrigger::on_arrival;
    if (name == "every_step") return ReplanTrigger::every_step;
    return std::nullopt;
}

void PlannerConfig::validate() const {
    if (!std::isfinite(beta) || beta < 0.0) throw Error("PlannerConfig: beta must be finite and >= 0");
}

double expected_improvement(double mu, double sigma, double incumbent) {
    if (!(sigma > 0.0)) throw Error("expected_improvement: sigma must be positive");
    const double delta = mu - incumbent;
    const double z = delta / sigma;
    const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    return std::max(0.0, delta * cdf + sigma * pdf);
}

double gp_ucb(double mu, double sigma, double beta) { return mu + std::sqrt(beta) * sigma; }

FrontierSelector::FrontierSelector(PlannerConfig config) : config_(config), rng_(config.rng_seed) {
    config_.validate();
}

std::size_t FrontierSelector::select(std::span<const FrontierBelief> beliefs,
                                     std::span<const double> path_cost) {
    if (beliefs.empty()) throw NoFrontierError("select_frontier: no frontiers");
    const std::size_t n = beliefs.size();

    auto argmax = [&](std::span<const double> score) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::isnan(score[i])) continue;
            if (best == n || score[i] > score[best] ||
                (score[i] == score[best] && beliefs[i].frontier.centroid < beliefs[best].frontier.centroid)) {
                best = i;
            }
        }
        if (best == n) throw NoFrontierError("select_frontier: no selectable frontier");
        return best;
    };

    std::vector<double> score(n);
    switch (config_.strategy) {
        case Strategy::ifbe1: {
            double incumbent = -std::numeric_limits<double>::infinity();
            for (const auto& b : beliefs) incumbent = std::max(incumbent, b.mu);
            for (std::size_t i = 0; i < n; ++i) {
                score[i] = expected_improvement(beliefs[i].mu, std::max(beliefs[i].sigma, kMinSigma),
                                                incumbent);
            }
            return argmax(score);
        }
        case Strategy::ifbe2: {
            std::vector<double> mu(n), sigma(n);
            for (std::size_t i = 0; i < n; ++i) {
                mu[i] = beliefs[i].mu;
                sigma[i] = beliefs[i].sigma;
            }
            kernels::active().gp_ucb(mu.data(), sigma.data(), n, std::sqrt(config_.beta), score.data());
            return argmax(score);
        }
        case Strategy::closest: {
            if (path_cost.size() != n) throw Error("select_frontier: closest needs one path cost per frontier");
            for (std::size_t i = 0; i < n; ++i) {
                score[i] = std::isfinite(path_cost[i]) ? -path_cost[i]
                                                        : std::numeric_limits<double>::quiet_NaN();
            }
            return argmax(score);
        }
        case Strategy::random: {
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return beliefs[a].frontier.centroid < beliefs[b].frontier.centroid;
            });
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            return order[pick(rng_)];
        }
    }
    throw Error("select_frontier: unknown strategy");
}

std::size_t select_frontier(std::span<const FrontierBelief> beliefs, const Pose& robot,
                            const OccupancyMap& occ, const PlannerConfig& config) {
    FrontierSelector selector(config);
    std::vector<double> cost;
    if (config.strategy == Strategy::closest && !beliefs.empty()) {
        const auto from = world_to_grid(robot.position, occ.spec());
        if (!from) throw Error("select_frontier: robot outside grid");
        const auto dist = path_distances(occ, *from, UnknownPolicy::traversable);
        for (const auto& b : beliefs) {
            const auto& d = dist[occ.spec().index(b.frontier.centroid)];
            cost.push_back(d ? d->value() : std::numeric_limits<double>::infinity());
        }
    }
    return selector.select(beliefs, cost);
}

std::optional<DetectionEvent> check_detection(const Pose& /*pose*/, std::span<const Cell> target_cells,
                                              const VisibleSet& visible, double detect_range,
                                              std::uint64_t step) {
    std::vector<Cell> targets(target_cells.begin(), target_cells.end());
    std::sort(targets.begin(), targets.end());
    const VisibleCell* best = nullptr;
    for (const VisibleCell& v : visible.cells) {
        if (v.range > detect_range) continue;
        if (!std::binary_search(targets.begin(), targets.end(), v.cell)) continue;
        if (!best || v.range < best->range || (v.range == best->range && v.cell < best->cell)) {
            best = &v;
        }
    }
    if (!best) return std::nullopt;
    return DetectionEvent{best->cell, step};
}

}  // namespace banditnav
