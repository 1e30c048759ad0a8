#pragma once

// Inner loops of the seminorm scans and Young sums.
//
// Every kernel has a portable scalar reference and, where the target allows,
// an AVX2 (x86-64) or NEON (aarch64) variant. The active variant is chosen
// once at first use from the CPU features, can be pinned with the
// YDDE_SIMD=scalar|avx2|neon environment variable, and can be overridden in
// tests with force_backend().
//
// The increment-scan kernel is exact: every variant performs the same IEEE
// operations per element (subtract, square, sum over components in order,
// sqrt, multiply), so results and argmax offsets match bit for bit. The dot
// kernel reassociates the sum and agrees only to rounding.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace ydde::simd {

enum class Backend { Scalar, Avx2, Neon };

std::string_view name(Backend b) noexcept;
bool available(Backend b) noexcept;
Backend active_backend() noexcept;
/// Pin a backend (tests, benchmarks); std::nullopt restores auto-detection.
/// Throws DomainError if the backend is not available on this CPU.
void force_backend(std::optional<Backend> b);

struct ArgMax {
    double value = 0.0;
    std::size_t offset = 0;  ///< lag k of the first maximizer; 0 when len < 2
};

/// Components of a path in structure-of-arrays form; comps[c][k] is
/// component c at node k.
using Components = std::span<const double* const>;

/// max over k in [1, len) of weights[k] * ||x(s + k) - x(s)||, with the first
/// maximizing k. Euclidean norm over components, |.| when there is one.
ArgMax max_weighted_increment(Components comps, std::size_t s, std::size_t len,
                              const double* weights);

/// sum_{k < n} integrand[k] * (driver[k + 1] - driver[k])
double increment_dot(const double* integrand, const double* driver, std::size_t n);

// Individual variants, exposed for equivalence tests.
namespace scalar {
ArgMax max_weighted_increment(Components comps, std::size_t s, std::size_t len,
                              const double* weights);
double increment_dot(const double* integrand, const double* driver, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
ArgMax max_weighted_increment(Components comps, std::size_t s, std::size_t len,
                              const double* weights);
double increment_dot(const double* integrand, const double* driver, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
ArgMax max_weighted_increment(Components comps, std::size_t s, std::size_t len,
                              const double* weights);
double increment_dot(const double* integrand, const double* driver, std::size_t n);
}  // namespace neon
#endif

}  // namespace ydde::simd
