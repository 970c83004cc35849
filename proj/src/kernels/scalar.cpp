#include "kernels_internal.hpp"

namespace banditnav::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

void mean_variance_scalar(const double* x, std::size_t n, double* mean, double* variance) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += x[i];
    const double m = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - m;
        ss += d * d;
    }
    *mean = m;
    *variance = ss / static_cast<double>(n);
}

void fuse_gaussian_scalar(double* mu, double* var, const std::uint32_t* idx,
                          const double* meas_var, std::size_t n, double meas_mu) {
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t j = idx[i];
        const double prior_var = var[j];
        const double r = meas_var[i];
        const double den = prior_var + r;
        mu[j] = (prior_var * meas_mu + r * mu[j]) / den;
        var[j] = prior_var * r / den;
    }
}

void gp_ucb_scalar(const double* mu, const double* sigma, std::size_t n, double sqrt_beta,
                   double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = mu[i] + sqrt_beta * sigma[i];
}

void classify_scalar(const double* lo, std::size_t n, double occ, double fr, std::uint8_t* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = classify_one(lo[i], occ, fr);
}

void frontier_mask_scalar(const std::uint8_t* state, int width, int height, std::uint8_t* out) {
    frontier_rows_scalar(state, width, height, 0, height, 0, width, out);
}

}  // namespace

std::uint8_t classify_one(double lo, double occupied_threshold, double free_threshold) {
    if (lo > occupied_threshold) return 2;
    if (lo < free_threshold) return 1;
    return 0;
}

void frontier_rows_scalar(const std::uint8_t* state, int width, int height, int row_begin,
                          int row_end, int col_begin, int col_end, std::uint8_t* out) {
    for (int r = row_begin; r < row_end; ++r) {
        for (int c = col_begin; c < col_end; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * width + c;
            std::uint8_t hit = 0;
            if (state[i] == 1) {
                for (int dr = -1; dr <= 1 && !hit; ++dr) {
                    const int rr = r + dr;
                    if (rr < 0 || rr >= height) continue;
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int cc = c + dc;
                        if ((dr == 0 && dc == 0) || cc < 0 || cc >= width) continue;
                        if (state[static_cast<std::size_t>(rr) * width + cc] == 0) {
                            hit = 1;
                            break;
                        }
                    }
                }
            }
            out[i] = hit;
        }
    }
}

const KernelTable& scalar_table() {
    static const KernelTable t{Isa::scalar,         dot_scalar,      mean_variance_scalar,
                               fuse_gaussian_scalar, gp_ucb_scalar, classify_scalar,
                               frontier_mask_scalar};
    return t;
}

}  // namespace banditnav::kernels
