#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ydde/grid_path.hpp"

namespace ydde {

enum class DriverKind { Fbm, Power, Sine, Zero, CustomSamples };

std::string_view to_string(DriverKind k) noexcept;
DriverKind driver_kind_from_string(std::string_view s);

/// Scalar driver omega on [0, T].
struct DriverSpec {
    DriverKind kind = DriverKind::Zero;
    double hurst = 0.75;          ///< fbm
    std::uint64_t seed = 0;       ///< fbm
    double T = 1.0;
    double mesh = 1.0 / 1024.0;
    double amplitude = 1.0;       ///< sine
    double frequency = 1.0;       ///< sine
    double exponent = 0.75;       ///< power: omega(t) = t^exponent
    std::vector<double> samples;  ///< custom-samples, T/mesh + 1 values

    std::size_t cells() const;
    /// Throws DomainError on inconsistent fields.
    void validate() const;
};

DriverSpec driver_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DriverSpec& spec);

/// Identifier of the pseudo-random source, recorded in output metadata.
inline constexpr std::string_view kRngAlgorithm = "splitmix64-counter/box-muller";

/// Counter-based normal source: the k-th draw depends only on (seed, k).
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : seed_(seed) {}
    double operator()();
    /// Uniform on (0, 1) from counter k.
    static double uniform(std::uint64_t seed, std::uint64_t k) noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct FbmOptions {
    /// Permit H = 1/2 (standard Brownian motion). Generator tests only; the
    /// solver never accepts such drivers.
    bool allow_standard_bm = false;
};

/// Exact fBm sampler on a fixed grid: Cholesky factor of the fractional
/// Gaussian noise covariance, reused across seeds.
class FbmGenerator {
public:
    static constexpr std::size_t kMaxCells = std::size_t{1} << 14;

    FbmGenerator(double hurst, double T, double mesh, FbmOptions opts = {});
    ~FbmGenerator();
    FbmGenerator(FbmGenerator&&) noexcept;
    FbmGenerator& operator=(FbmGenerator&&) noexcept;

    GridPath sample(std::uint64_t seed) const;
    double hurst() const noexcept { return hurst_; }
    /// Diagonal jitter that was needed to factor the covariance (0 if none).
    double jitter() const noexcept { return jitter_; }

private:
    struct Factor;
    double hurst_;
    double mesh_;
    std::size_t cells_;
    double jitter_ = 0.0;
    std::unique_ptr<Factor> factor_;
};

/// fBm covariance E[B(s) B(t)] = (s^{2H} + t^{2H} - |t - s|^{2H}) / 2.
double fbm_covariance(double hurst, double s, double t);

GridPath gen_fbm(const DriverSpec& spec);
GridPath gen_deterministic(const DriverSpec& spec);
/// Dispatches on spec.kind.
GridPath generate(const DriverSpec& spec);

/// Grid Hölder seminorm of the whole path for each beta.
std::vector<std::pair<double, double>> empirical_holder_exponent(const GridPath& path,
                                                                 const std::vector<double>& betas);

}  // namespace ydde
