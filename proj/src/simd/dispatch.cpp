#include <atomic>
#include <cstdlib>
#include <string>

#include "ydde/error.hpp"
#include "ydde/simd/kernels.hpp"

namespace ydde::simd {

namespace {

Backend detect() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2")) return Backend::Avx2;
#elif defined(__aarch64__)
    return Backend::Neon;
#endif
    return Backend::Scalar;
}

Backend initial() noexcept {
    const Backend hw = detect();
    if (const char* env = std::getenv("YDDE_SIMD")) {
        const std::string want(env);
        if (want == "scalar") return Backend::Scalar;
        if (want == "avx2" && available(Backend::Avx2)) return Backend::Avx2;
        if (want == "neon" && available(Backend::Neon)) return Backend::Neon;
    }
    return hw;
}

std::atomic<Backend>& current() {
    static std::atomic<Backend> b{initial()};
    return b;
}

}  // namespace

std::string_view name(Backend b) noexcept {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
    }
    return "unknown";
}

bool available(Backend b) noexcept {
    switch (b) {
        case Backend::Scalar: return true;
        case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            __builtin_cpu_init();
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Backend::Neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void force_backend(std::optional<Backend> b) {
    const Backend want = b.value_or(initial());
    if (!available(want)) throw DomainError("SIMD backend not available: " + std::string(name(want)));
    current().store(want, std::memory_order_relaxed);
}

ArgMax max_weighted_increment(Components comps, std::size_t s, std::size_t len,
                              const double* weights) {
    switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::Avx2: return avx2::max_weighted_increment(comps, s, len, weights);
#endif
#if defined(__aarch64__)
        case Backend::Neon: return neon::max_weighted_increment(comps, s, len, weights);
#endif
        default: return scalar::max_weighted_increment(comps, s, len, weights);
    }
}

double increment_dot(const double* integrand, const double* driver, std::size_t n) {
    switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::Avx2: return avx2::increment_dot(integrand, driver, n);
#endif
#if defined(__aarch64__)
        case Backend::Neon: return neon::increment_dot(integrand, driver, n);
#endif
        default: return scalar::increment_dot(integrand, driver, n);
    }
}

}  // namespace ydde::simd
