#pragma once
// Prompt-ensemble relevance sensor: ensemble statistics, viewpoint
// confidence, per-ray measurement variance, and the score sources that feed
// an episode (synthetic field, recorded trace, live bridge).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "banditnav/grid.hpp"

namespace banditnav {

/// Prompt variants for one target. `{target}` is substituted per episode.
struct PromptEnsemble {
    std::vector<std::string> prompts;
    std::string target_token = "{target}";

    /// Substitutes `target` and checks N >= 2 and distinctness.
    std::vector<std::string> instantiate(std::string_view target) const;
};

/// The seven default prompt templates.
PromptEnsemble default_prompt_ensemble();

/// Cosine similarities of one view against each prompt, in prompt order.
struct ScoreSample {
    std::vector<double> scores;

    /// Throws if empty or any score lies outside [-1, 1].
    void validate() const;
    friend bool operator==(const ScoreSample&, const ScoreSample&) = default;
};

struct EnsembleStats {
    double mean = 0.0;
    double variance = 0.0;  // population variance (divisor N)
};

enum class ConfidenceConvention {
    vlfm,     // cos^2(theta*pi/fov): 1 on the optical axis, 0 at the FOV edge
    literal,  // cos^2(2*theta*pi/fov)
};

/// Lower bound applied to every per-ray measurement variance.
inline constexpr double kMeasurementVarianceFloor = 1e-6;

struct RelevanceObservation {
    double mean = 0.0;
    double ensemble_variance = 0.0;
    std::vector<double> per_ray_variance;  // indexed by VisibleCell::ray, floored
};

double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Mean and population variance of an ensemble. Throws if N < 2.
EnsembleStats ensemble_stats(const ScoreSample& sample);

double viewpoint_confidence(double bearing, double fov,
                            ConfidenceConvention convention = ConfidenceConvention::vlfm);

double per_ray_variance(double ensemble_variance, double bearing, double fov,
                        ConfidenceConvention convention = ConfidenceConvention::vlfm);

/// Builds the observation for every ray of `fov`.
RelevanceObservation make_observation(const EnsembleStats& stats, const FovSpec& fov,
                                      ConfidenceConvention convention);

/// Single-prompt runs have no ensemble spread: mean is the one score and the
/// ensemble variance is zero (the per-ray floor still applies).
EnsembleStats single_prompt_stats(const ScoreSample& sample);

/// Affine map of cosine scores from [-1, 1] onto [0, 1].
ScoreSample normalize_scores(ScoreSample sample);

/// Ground-truth relevance surface in [0, 1] used by the synthetic sensor.
struct SemanticField {
    GridSpec spec;
    std::vector<double> values;

    double at(Cell c) const { return values[spec.index(c)]; }
};

struct SyntheticSensorOptions {
    int ensemble_size = 7;
    double noise_sigma = 0.05;
    /// Optional per-prompt additive bias ("prompt personalities"); empty or
    /// ensemble_size entries.
    std::vector<double> prompt_bias;
    ConfidenceConvention convention = ConfidenceConvention::vlfm;
};

struct SyntheticObservation {
    ScoreSample sample;
    RelevanceObservation observation;
};

/// C_V-weighted mean of the field over the visible cells.
double view_relevance(const SemanticField& field, const VisibleSet& visible, const FovSpec& fov,
                      ConfidenceConvention convention);

/// Draws `ensemble_size` scores around the view relevance, clamped to [-1, 1].
/// Deterministic for a fixed seed.
ScoreSample synthetic_scores(const SemanticField& field, const VisibleSet& visible,
                             const FovSpec& fov, const SyntheticSensorOptions& options,
                             std::uint64_t seed);

SyntheticObservation observe_synthetic(const SemanticField& field, const VisibleSet& visible,
                                       const FovSpec& fov, const SyntheticSensorOptions& options,
                                       std::uint64_t seed);

/// Everything a score source may need to know about the current view.
struct ViewContext {
    std::uint64_t episode = 0;
    std::uint64_t step = 0;
    Pose pose{};
    const VisibleSet* visible = nullptr;
    std::string_view target;
    std::span<const std::string> prompts;
    std::optional<std::string> image_path;
};

class ScoreSource {
public:
    virtual ~ScoreSource() = default;
    virtual ScoreSample next(const ViewContext& view) = 0;
};

/// Synthetic field sensor; each step draws with a seed derived from
/// (seed, step).
class SyntheticSource final : public ScoreSource {
public:
    SyntheticSource(const SemanticField& field, FovSpec fov, SyntheticSensorOptions options,
                    std::uint64_t seed);
    ScoreSample next(const ViewContext& view) override;

private:
    const SemanticField* field_;
    FovSpec fov_;
    SyntheticSensorOptions options_;
    std::uint64_t seed_;
};

/// Mixes a 64-bit seed with a stream index (SplitMix64 finaliser).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Probability-plot correlation of `scores` against standard normal quantiles
/// (Blom plotting positions). Returns nullopt for fewer than 3 values or zero
/// spread.
std::optional<double> qq_correlation(std::span<const double> scores);

/// Standard normal quantile function.
double normal_quantile(double p);

}  // namespace banditnav
