// Compiled with -mavx2 (see src/CMakeLists.txt); only reached through the
// dispatcher after a CPUID check.
#include <immintrin.h>

#include <cmath>

#include "ydde/simd/kernels.hpp"

namespace ydde::simd::avx2 {

namespace {

inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// Lane-wise running max with the lag that produced it. Strict comparison
// keeps the earliest lag within each lane.
struct LaneMax {
    __m256d value = _mm256_setzero_pd();
    __m256d lag = _mm256_setzero_pd();

    void update(__m256d v, __m256d k) {
        const __m256d gt = _mm256_cmp_pd(v, value, _CMP_GT_OQ);
        value = _mm256_blendv_pd(value, v, gt);
        lag = _mm256_blendv_pd(lag, k, gt);
    }

    ArgMax reduce() const {
        alignas(32) double vals[4];
        alignas(32) double lags[4];
        _mm256_store_pd(vals, value);
        _mm256_store_pd(lags, lag);
        ArgMax best;
        for (int i = 0; i < 4; ++i) {
            const auto k = static_cast<std::size_t>(lags[i]);
            if (vals[i] > best.value || (vals[i] == best.value && vals[i] > 0.0 && k < best.offset))
                best = {vals[i], k};
        }
        return best;
    }
};

}  // namespace

ArgMax max_weighted_increment(Components comps, std::size_t s, std::size_t len,
                              const double* weights) {
    LaneMax lanes;
    std::size_t k = 1;
    __m256d lag = _mm256_setr_pd(1.0, 2.0, 3.0, 4.0);
    const __m256d step = _mm256_set1_pd(4.0);

    if (comps.size() == 1) {
        const double* x = comps[0] + s;
        const __m256d x0 = _mm256_set1_pd(x[0]);
        for (; k + 4 <= len; k += 4) {
            const __m256d d = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(x + k), x0));
            lanes.update(_mm256_mul_pd(d, _mm256_loadu_pd(weights + k)), lag);
            lag = _mm256_add_pd(lag, step);
        }
        ArgMax best = lanes.reduce();
        for (; k < len; ++k) {
            const double v = std::fabs(x[k] - x[0]) * weights[k];
            if (v > best.value) best = {v, k};
        }
        return best;
    }

    for (; k + 4 <= len; k += 4) {
        __m256d sq = _mm256_setzero_pd();
        for (const double* x : comps) {
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + s + k), _mm256_set1_pd(x[s]));
            sq = _mm256_add_pd(sq, _mm256_mul_pd(d, d));
        }
        lanes.update(_mm256_mul_pd(_mm256_sqrt_pd(sq), _mm256_loadu_pd(weights + k)), lag);
        lag = _mm256_add_pd(lag, step);
    }
    ArgMax best = lanes.reduce();
    for (; k < len; ++k) {
        double sq = 0.0;
        for (const double* x : comps) {
            const double d = x[s + k] - x[s];
            sq += d * d;
        }
        const double v = std::sqrt(sq) * weights[k];
        if (v > best.value) best = {v, k};
    }
    return best;
}

double increment_dot(const double* integrand, const double* driver, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d dw = _mm256_sub_pd(_mm256_loadu_pd(driver + k + 1), _mm256_loadu_pd(driver + k));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(integrand + k), dw));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; k < n; ++k) total += integrand[k] * (driver[k + 1] - driver[k]);
    return total;
}

}  // namespace ydde::simd::avx2
