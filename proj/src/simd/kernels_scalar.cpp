#include <cmath>

#include "ydde/simd/kernels.hpp"

namespace ydde::simd::scalar {

ArgMax max_weighted_increment(Components comps, std::size_t s, std::size_t len,
                              const double* weights) {
    ArgMax best;
    if (comps.size() == 1) {
        const double* x = comps[0] + s;
        for (std::size_t k = 1; k < len; ++k) {
            const double v = std::fabs(x[k] - x[0]) * weights[k];
            if (v > best.value) best = {v, k};
        }
        return best;
    }
    for (std::size_t k = 1; k < len; ++k) {
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
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += integrand[k] * (driver[k + 1] - driver[k]);
    return acc;
}

}  // namespace ydde::simd::scalar
