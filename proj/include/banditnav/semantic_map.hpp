#pragma once

#include <span>
#include <vector>

#include "banditnav/grid.hpp"

namespace banditnav {

struct RelevanceObservation;

/// Gaussian belief over one cell's semantic relevance.
struct Belief {
    double mean = 0.0;
    double variance = 0.0;

    friend bool operator==(const Belief&, const Belief&) = default;
};

inline constexpr double kPriorRelevanceMean = 0.5;
inline constexpr double kPriorRelevanceVariance = 0.5;

/// Per-cell Gaussian relevance belief, initialised to the uninformed prior
/// N(0.5, 0.5). Variances are strictly positive and never grow.
class SemanticMap {
public:
    explicit SemanticMap(GridSpec spec);

    const GridSpec& spec() const { return spec_; }

    /// Throws on out-of-bounds cells.
    Belief query(Cell c) const;

    std::span<const double> means() const { return mu_; }
    std::span<const double> variances() const { return var_; }

    // Raw layer access for the fusion kernel and snapshot loading.
    std::span<double> means_mut() { return mu_; }
    std::span<double> variances_mut() { return var_; }

private:
    GridSpec spec_;
    std::vector<double> mu_;
    std::vector<double> var_;
};

/// Fuses the observation into every focal-cone cell using the closed-form
/// conjugate update, with the measurement variance of the ray that reached
/// the cell. Cells outside the cone are untouched.
void update_semantic(SemanticMap& map, const RelevanceObservation& observation,
                     const VisibleSet& visible);

}  // namespace banditnav
