#include <arm_neon.h>

#include <cmath>

#include "ydde/simd/kernels.hpp"

namespace ydde::simd::neon {

namespace {

struct LaneMax {
    float64x2_t value = vdupq_n_f64(0.0);
    float64x2_t lag = vdupq_n_f64(0.0);

    void update(float64x2_t v, float64x2_t k) {
        const uint64x2_t gt = vcgtq_f64(v, value);
        value = vbslq_f64(gt, v, value);
        lag = vbslq_f64(gt, k, lag);
    }

    ArgMax reduce() const {
        ArgMax best;
        const double vals[2] = {vgetq_lane_f64(value, 0), vgetq_lane_f64(value, 1)};
        const double lags[2] = {vgetq_lane_f64(lag, 0), vgetq_lane_f64(lag, 1)};
        for (int i = 0; i < 2; ++i) {
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
    const double init[2] = {1.0, 2.0};
    float64x2_t lag = vld1q_f64(init);
    const float64x2_t step = vdupq_n_f64(2.0);

    for (; k + 2 <= len; k += 2) {
        float64x2_t v;
        if (comps.size() == 1) {
            const double* x = comps[0] + s;
            v = vabsq_f64(vsubq_f64(vld1q_f64(x + k), vdupq_n_f64(x[0])));
        } else {
            float64x2_t sq = vdupq_n_f64(0.0);
            for (const double* x : comps) {
                const float64x2_t d = vsubq_f64(vld1q_f64(x + s + k), vdupq_n_f64(x[s]));
                sq = vaddq_f64(sq, vmulq_f64(d, d));
            }
            v = vsqrtq_f64(sq);
        }
        lanes.update(vmulq_f64(v, vld1q_f64(weights + k)), lag);
        lag = vaddq_f64(lag, step);
    }
    ArgMax best = lanes.reduce();
    for (; k < len; ++k) {
        double v;
        if (comps.size() == 1) {
            v = std::fabs(comps[0][s + k] - comps[0][s]);
        } else {
            double sq = 0.0;
            for (const double* x : comps) {
                const double d = x[s + k] - x[s];
                sq += d * d;
            }
            v = std::sqrt(sq);
        }
        v *= weights[k];
        if (v > best.value) best = {v, k};
    }
    return best;
}

double increment_dot(const double* integrand, const double* driver, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const float64x2_t dw = vsubq_f64(vld1q_f64(driver + k + 1), vld1q_f64(driver + k));
        acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(integrand + k), dw));
    }
    double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; k < n; ++k) total += integrand[k] * (driver[k + 1] - driver[k]);
    return total;
}

}  // namespace ydde::simd::neon
