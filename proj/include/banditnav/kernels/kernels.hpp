#pragma once
// Data-parallel inner loops. Every kernel has a scalar reference and, where
// the target supports it, an AVX2 variant; the variant is picked once at
// runtime from the CPU features (override with BANDITNAV_ISA=scalar|avx2).
//
// Elementwise kernels (fuse_gaussian, gp_ucb, classify_log_odds,
// frontier_mask) produce bit-identical results across variants. Reductions
// (dot, mean_variance) differ only by summation order.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace banditnav::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;

    double (*dot)(const double* a, const double* b, std::size_t n);

    /// Two-pass mean and population variance (divisor n), n >= 1.
    void (*mean_variance)(const double* x, std::size_t n, double* mean, double* variance);

    /// Conjugate Gaussian fusion of one scalar measurement mean into the cells
    /// `idx[0..n)` of the (mu, var) layers, each with its own measurement
    /// variance. Indices must be distinct.
    void (*fuse_gaussian)(double* mu, double* var, const std::uint32_t* idx,
                          const double* meas_var, std::size_t n, double meas_mu);

    /// out[i] = mu[i] + sqrt_beta * sigma[i]
    void (*gp_ucb)(const double* mu, const double* sigma, std::size_t n, double sqrt_beta,
                   double* out);

    /// Log-odds -> CellState byte (0 unknown, 1 free, 2 occupied).
    void (*classify_log_odds)(const double* log_odds, std::size_t n, double occupied_threshold,
                              double free_threshold, std::uint8_t* out);

    /// out[i] = 1 iff state[i] is free and one of its 8 neighbours is unknown.
    void (*frontier_mask)(const std::uint8_t* state, int width, int height, std::uint8_t* out);
};

const KernelTable& scalar_table();
/// Null when the build or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

bool isa_available(Isa isa);
const KernelTable& table(Isa isa);

/// The table used by the library.
const KernelTable& active();
/// Forces the active table (tests, benchmarks). Throws if unavailable.
void select_isa(Isa isa);

std::string_view isa_name(Isa isa);

}  // namespace banditnav::kernels
