#include "banditnav/sensor.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "banditnav/kernels/kernels.hpp"

namespace banditnav {

std::vector<std::string> PromptEnsemble::instantiate(std::string_view target) const {
    if (prompts.size() < 2) throw Error("PromptEnsemble: at least two prompts required");
    std::vector<std::string> out;
    out.reserve(prompts.size());
    for (std::string p : prompts) {
        if (!target_token.empty()) {
            for (std::size_t pos = p.find(target_token); pos != std::string::npos;
                 pos = p.find(target_token, pos + target.size())) {
                p.replace(pos, target_token.size(), target);
            }
        }
        out.push_back(std::move(p));
    }
    if (std::set<std::string>(out.begin(), out.end()).size() != out.size()) {
        throw Error("PromptEnsemble: prompts are not distinct after substitution");
    }
    return out;
}

PromptEnsemble default_prompt_ensemble() {
    return {{"there is a {target} ahead", "A {target} is in the vicinity",
             "a {target} can be seen nearby", "this room contains a {target}",
             "you are close to a {target}", "a {target} is somewhere in view",
             "the {target} is located around here"},
            "{target}"};
}

void ScoreSample::validate() const {
    if (scores.empty()) throw Error("ScoreSample: empty");
    for (double s : scores) {
        if (!(s >= -1.0 && s <= 1.0)) throw Error("ScoreSample: score outside [-1, 1]");
    }
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error("cosine_similarity: dimension mismatch");
    if (a.empty()) throw Error("cosine_similarity: empty vectors");
    const auto& k = kernels::active();
    const double na = std::sqrt(k.dot(a.data(), a.data(), a.size()));
    const double nb = std::sqrt(k.dot(b.data(), b.data(), b.size()));
    if (na == 0.0 || nb == 0.0) throw Error("cosine_similarity: zero vector");
    return std::clamp(k.dot(a.data(), b.data(), a.size()) / (na * nb), -1.0, 1.0);
}

EnsembleStats ensemble_stats(const ScoreSample& sample) {
    if (sample.scores.size() < 2) throw Error("ensemble_stats: ensemble needs N >= 2 scores");
    EnsembleStats s;
    kernels::active().mean_variance(sample.scores.data(), sample.scores.size(), &s.mean,
                                    &s.variance);
    return s;
}

EnsembleStats single_prompt_stats(const ScoreSample& sample) {
    if (sample.scores.size() != 1) throw Error("single_prompt_stats: expected exactly one score");
    return {sample.scores.front(), 0.0};
}

ScoreSample normalize_scores(ScoreSample sample) {
    for (double& s : sample.scores) s = 0.5 * (s + 1.0);
    return sample;
}

double viewpoint_confidence(double bearing, double fov, ConfidenceConvention convention) {
    if (!(fov > 0.0)) throw Error("viewpoint_confidence: fov must be positive");
    if (!(std::abs(bearing) <= 0.5 * fov * (1.0 + 1e-12))) {
        throw Error("viewpoint_confidence: bearing outside the field of view");
    }
    const double scale = convention == ConfidenceConvention::vlfm ? 1.0 : 2.0;
    const double c = std::cos(scale * bearing * std::numbers::pi / fov);
    return c * c;
}

double per_ray_variance(double ensemble_variance, double bearing, double fov,
                        ConfidenceConvention convention) {
    if (!(ensemble_variance >= 0.0)) throw Error("per_ray_variance: negative variance");
    return ensemble_variance + (1.0 - viewpoint_confidence(bearing, fov, convention));
}

RelevanceObservation make_observation(const EnsembleStats& stats, const FovSpec& fov,
                                      ConfidenceConvention convention) {
    RelevanceObservation obs{stats.mean, stats.variance, {}};
    obs.per_ray_variance.reserve(static_cast<std::size_t>(fov.ray_count));
    for (int i = 0; i < fov.ray_count; ++i) {
        const double v =
            per_ray_variance(stats.variance, fov.ray_bearing(i), fov.horizontal_fov, convention);
        obs.per_ray_variance.push_back(std::max(v, kMeasurementVarianceFloor));
    }
    return obs;
}

double view_relevance(const SemanticField& field, const VisibleSet& visible, const FovSpec& fov,
                      ConfidenceConvention convention) {
    if (visible.empty()) throw Error("observe_synthetic: empty visible set");
    if (!(field.spec == visible.spec)) throw Error("observe_synthetic: grid spec mismatch");
    double weighted = 0.0, weights = 0.0, plain = 0.0;
    for (const VisibleCell& v : visible.cells) {
        const double w = viewpoint_confidence(v.bearing, fov.horizontal_fov, convention);
        const double f = field.at(v.cell);
        weighted += w * f;
        weights += w;
        plain += f;
    }
    // Every cell on the FOV edge carries zero weight under the default convention.
    if (weights <= 0.0) return plain / static_cast<double>(visible.size());
    return weighted / weights;
}

ScoreSample synthetic_scores(const SemanticField& field, const VisibleSet& visible,
                             const FovSpec& fov, const SyntheticSensorOptions& options,
                             std::uint64_t seed) {
    if (options.ensemble_size < 1) throw Error("synthetic sensor: ensemble_size must be >= 1");
    if (!(options.noise_sigma >= 0.0)) throw Error("synthetic sensor: negative noise_sigma");
    if (!options.prompt_bias.empty() &&
        options.prompt_bias.size() != static_cast<std::size_t>(options.ensemble_size)) {
        throw Error("synthetic sensor: prompt_bias size must equal ensemble_size");
    }
    const double v = view_relevance(field, visible, fov, options.convention);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, options.noise_sigma > 0.0 ? options.noise_sigma : 1.0);
    ScoreSample sample;
    sample.scores.reserve(static_cast<std::size_t>(options.ensemble_size));
    for (int i = 0; i < options.ensemble_size; ++i) {
        double s = v;
        if (!options.prompt_bias.empty()) s += options.prompt_bias[static_cast<std::size_t>(i)];
        if (options.noise_sigma > 0.0) s += noise(rng);
        sample.scores.push_back(std::clamp(s, -1.0, 1.0));
    }
    return sample;
}

SyntheticObservation observe_synthetic(const SemanticField& field, const VisibleSet& visible,
                                       const FovSpec& fov, const SyntheticSensorOptions& options,
                                       std::uint64_t seed) {
    SyntheticObservation out;
    out.sample = synthetic_scores(field, visible, fov, options, seed);
    const EnsembleStats stats = out.sample.scores.size() == 1 ? single_prompt_stats(out.sample)
                                                              : ensemble_stats(out.sample);
    out.observation = make_observation(stats, fov, options.convention);
    return out;
}

SyntheticSource::SyntheticSource(const SemanticField& field, FovSpec fov,
                                 SyntheticSensorOptions options, std::uint64_t seed)
    : field_(&field), fov_(fov), options_(std::move(options)), seed_(seed) {}

ScoreSample SyntheticSource::next(const ViewContext& view) {
    if (!view.visible) throw Error("SyntheticSource: view has no visible set");
    return synthetic_scores(*field_, *view.visible, fov_, options_, mix_seed(seed_, view.step));
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw Error("normal_quantile: p must lie in (0, 1)");
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

std::optional<double> qq_correlation(std::span<const double> scores) {
    const std::size_t n = scores.size();
    if (n < 3) return std::nullopt;
    std::vector<double> sorted(scores.begin(), scores.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back()) return std::nullopt;
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (static_cast<double>(n) + 0.25));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += q[i];
        my += sorted[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = q[i] - mx, dy = sorted[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (syy <= 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace banditnav
