// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and
// is only entered after the dispatcher has checked the CPU.

#include <immintrin.h>

#include "kernels_internal.hpp"

namespace banditnav::kernels {
namespace {

double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    double sum = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

void mean_variance_avx2(const double* x, std::size_t n, double* mean, double* variance) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double sum = hsum(acc);
    for (; i < n; ++i) sum += x[i];
    const double m = sum / static_cast<double>(n);

    const __m256d mv = _mm256_set1_pd(m);
    __m256d ss = _mm256_setzero_pd();
    i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), mv);
        ss = _mm256_fmadd_pd(d, d, ss);
    }
    double ssum = hsum(ss);
    for (; i < n; ++i) {
        const double d = x[i] - m;
        ssum += d * d;
    }
    *mean = m;
    *variance = ssum / static_cast<double>(n);
}

// Same operation order as the scalar reference and no fused multiply-add, so
// the posterior is bit-identical.
void fuse_gaussian_avx2(double* mu, double* var, const std::uint32_t* idx,
                        const double* meas_var, std::size_t n, double meas_mu) {
    const __m256d mz = _mm256_set1_pd(meas_mu);
    alignas(32) double new_mu[4];
    alignas(32) double new_var[4];
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
        const __m256d m = _mm256_i32gather_pd(mu, vi, 8);
        const __m256d s = _mm256_i32gather_pd(var, vi, 8);
        const __m256d r = _mm256_loadu_pd(meas_var + i);
        const __m256d den = _mm256_add_pd(s, r);
        const __m256d num = _mm256_add_pd(_mm256_mul_pd(s, mz), _mm256_mul_pd(r, m));
        _mm256_store_pd(new_mu, _mm256_div_pd(num, den));
        _mm256_store_pd(new_var, _mm256_div_pd(_mm256_mul_pd(s, r), den));
        for (int k = 0; k < 4; ++k) {
            mu[idx[i + k]] = new_mu[k];
            var[idx[i + k]] = new_var[k];
        }
    }
    for (; i < n; ++i) {
        const std::uint32_t j = idx[i];
        const double prior_var = var[j];
        const double r = meas_var[i];
        const double den = prior_var + r;
        mu[j] = (prior_var * meas_mu + r * mu[j]) / den;
        var[j] = prior_var * r / den;
    }
}

void gp_ucb_avx2(const double* mu, const double* sigma, std::size_t n, double sqrt_beta,
                 double* out) {
    const __m256d sb = _mm256_set1_pd(sqrt_beta);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v =
            _mm256_add_pd(_mm256_loadu_pd(mu + i), _mm256_mul_pd(sb, _mm256_loadu_pd(sigma + i)));
        _mm256_storeu_pd(out + i, v);
    }
    for (; i < n; ++i) out[i] = mu[i] + sqrt_beta * sigma[i];
}

void classify_avx2(const double* lo, std::size_t n, double occ, double fr, std::uint8_t* out) {
    const __m256d occ_v = _mm256_set1_pd(occ);
    const __m256d fr_v = _mm256_set1_pd(fr);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(lo + i);
        const int mo = _mm256_movemask_pd(_mm256_cmp_pd(v, occ_v, _CMP_GT_OQ));
        const int mf = _mm256_movemask_pd(_mm256_cmp_pd(v, fr_v, _CMP_LT_OQ));
        for (int k = 0; k < 4; ++k) {
            out[i + k] = (mo >> k) & 1 ? 2 : ((mf >> k) & 1 ? 1 : 0);
        }
    }
    for (; i < n; ++i) out[i] = classify_one(lo[i], occ, fr);
}

void frontier_mask_avx2(const std::uint8_t* state, int width, int height, std::uint8_t* out) {
    if (height < 3 || width < 34) {
        frontier_rows_scalar(state, width, height, 0, height, 0, width, out);
        return;
    }
    frontier_rows_scalar(state, width, height, 0, 1, 0, width, out);
    frontier_rows_scalar(state, width, height, height - 1, height, 0, width, out);

    const __m256i zero = _mm256_setzero_si256();
    const __m256i one = _mm256_set1_epi8(1);
    auto load = [](const std::uint8_t* p) {
        return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
    };
    for (int r = 1; r < height - 1; ++r) {
        const std::uint8_t* up = state + static_cast<std::size_t>(r - 1) * width;
        const std::uint8_t* mid = up + width;
        const std::uint8_t* down = mid + width;
        std::uint8_t* dst = out + static_cast<std::size_t>(r) * width;
        int c = 1;
        for (; c + 32 <= width - 1; c += 32) {
            const __m256i is_free = _mm256_cmpeq_epi8(load(mid + c), one);
            __m256i unknown = _mm256_cmpeq_epi8(load(up + c - 1), zero);
            unknown = _mm256_or_si256(unknown, _mm256_cmpeq_epi8(load(up + c), zero));
            unknown = _mm256_or_si256(unknown, _mm256_cmpeq_epi8(load(up + c + 1), zero));
            unknown = _mm256_or_si256(unknown, _mm256_cmpeq_epi8(load(mid + c - 1), zero));
            unknown = _mm256_or_si256(unknown, _mm256_cmpeq_epi8(load(mid + c + 1), zero));
            unknown = _mm256_or_si256(unknown, _mm256_cmpeq_epi8(load(down + c - 1), zero));
            unknown = _mm256_or_si256(unknown, _mm256_cmpeq_epi8(load(down + c), zero));
            unknown = _mm256_or_si256(unknown, _mm256_cmpeq_epi8(load(down + c + 1), zero));
            const __m256i hit = _mm256_and_si256(_mm256_and_si256(is_free, unknown), one);
            _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + c), hit);
        }
        frontier_rows_scalar(state, width, height, r, r + 1, 0, 1, out);
        frontier_rows_scalar(state, width, height, r, r + 1, c, width, out);
    }
}

}  // namespace

const KernelTable& avx2_table_impl() {
    static const KernelTable t{Isa::avx2,         dot_avx2,      mean_variance_avx2,
                               fuse_gaussian_avx2, gp_ucb_avx2, classify_avx2,
                               frontier_mask_avx2};
    return t;
}

}  // namespace banditnav::kernels
