#include "ydde/driver.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "ydde/error.hpp"
#include "ydde/norms.hpp"

namespace ydde {

std::string_view to_string(DriverKind k) noexcept {
    switch (k) {
        case DriverKind::Fbm: return "fbm";
        case DriverKind::Power: return "power";
        case DriverKind::Sine: return "sine";
        case DriverKind::Zero: return "zero";
        case DriverKind::CustomSamples: return "custom-samples";
    }
    return "unknown";
}

DriverKind driver_kind_from_string(std::string_view s) {
    if (s == "fbm") return DriverKind::Fbm;
    if (s == "power") return DriverKind::Power;
    if (s == "sine") return DriverKind::Sine;
    if (s == "zero") return DriverKind::Zero;
    if (s == "custom-samples") return DriverKind::CustomSamples;
    throw DomainError("unknown driver kind: " + std::string(s));
}

std::size_t DriverSpec::cells() const { return cells_in(T, mesh, "driver horizon T"); }

void DriverSpec::validate() const {
    if (!(T > 0.0)) throw DomainError("driver horizon must be positive");
    const std::size_t n = cells();
    switch (kind) {
        case DriverKind::Fbm:
            if (!(hurst > 0.5 && hurst < 1.0)) throw DomainError("fbm needs hurst in (1/2, 1)");
            if (n > FbmGenerator::kMaxCells) throw DomainError("fbm grid exceeds 2^14 cells");
            break;
        case DriverKind::CustomSamples:
            if (samples.size() != n + 1) throw DomainError("custom driver needs T/mesh + 1 samples");
            break;
        default: break;
    }
}

DriverSpec driver_spec_from_json(const nlohmann::json& j) {
    DriverSpec s;
    s.kind = driver_kind_from_string(j.at("kind").get<std::string>());
    s.hurst = j.value("hurst", s.hurst);
    s.seed = j.value("seed", s.seed);
    s.T = j.value("T", s.T);
    s.mesh = j.value("mesh", s.mesh);
    s.amplitude = j.value("amplitude", s.amplitude);
    s.frequency = j.value("frequency", s.frequency);
    s.exponent = j.value("exponent", s.exponent);
    if (j.contains("samples")) s.samples = j.at("samples").get<std::vector<double>>();
    return s;
}

nlohmann::json to_json(const DriverSpec& s) {
    nlohmann::json j{{"kind", to_string(s.kind)}, {"T", s.T}, {"mesh", s.mesh}};
    switch (s.kind) {
        case DriverKind::Fbm:
            j["hurst"] = s.hurst;
            j["seed"] = s.seed;
            j["rng"] = kRngAlgorithm;
            break;
        case DriverKind::Sine:
            j["amplitude"] = s.amplitude;
            j["frequency"] = s.frequency;
            break;
        case DriverKind::Power: j["exponent"] = s.exponent; break;
        case DriverKind::CustomSamples: j["samples"] = s.samples; break;
        case DriverKind::Zero: break;
    }
    return j;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

double NormalStream::uniform(std::uint64_t seed, std::uint64_t k) noexcept {
    const std::uint64_t bits = splitmix64(splitmix64(seed) ^ (k * 0xd1b54a32d192ed03ULL));
    // 53 random bits, shifted off zero.
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double NormalStream::operator()() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform(seed_, counter_++);
    const double u2 = uniform(seed_, counter_++);
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(ang);
    has_spare_ = true;
    return rad * std::cos(ang);
}

double fbm_covariance(double hurst, double s, double t) {
    const double e = 2.0 * hurst;
    return 0.5 * (std::pow(std::abs(s), e) + std::pow(std::abs(t), e) - std::pow(std::abs(t - s), e));
}

struct FbmGenerator::Factor {
    Eigen::MatrixXd lower;
};

FbmGenerator::FbmGenerator(double hurst, double T, double mesh, FbmOptions opts)
    : hurst_(hurst), mesh_(mesh), cells_(cells_in(T, mesh, "driver horizon T")) {
    const bool ok = (hurst > 0.5 && hurst < 1.0) || (opts.allow_standard_bm && hurst == 0.5);
    if (!ok) throw DomainError("fbm needs hurst in (1/2, 1)");
    if (cells_ == 0) throw DomainError("driver horizon must be positive");
    if (cells_ > kMaxCells) throw DomainError("fbm grid exceeds 2^14 cells");

    // Fractional Gaussian noise autocovariance for step h.
    const double e = 2.0 * hurst;
    const double scale = 0.5 * std::pow(mesh, e);
    std::vector<double> gamma(cells_);
    for (std::size_t k = 0; k < cells_; ++k) {
        const double kk = static_cast<double>(k);
        gamma[k] = scale * (std::pow(kk + 1.0, e) - 2.0 * std::pow(kk, e) + std::pow(std::abs(kk - 1.0), e));
    }
    const auto n = static_cast<Eigen::Index>(cells_);
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) cov(i, j) = gamma[static_cast<std::size_t>(std::abs(i - j))];

    for (double rel : {0.0, 1e-12, 1e-10, 1e-8}) {
        jitter_ = rel * gamma[0];
        Eigen::LLT<Eigen::MatrixXd> llt(cov + jitter_ * Eigen::MatrixXd::Identity(n, n));
        if (llt.info() == Eigen::Success) {
            factor_ = std::make_unique<Factor>(Factor{llt.matrixL()});
            return;
        }
    }
    throw GenerationError("fbm increment covariance is not positive definite after jitter");
}

FbmGenerator::~FbmGenerator() = default;
FbmGenerator::FbmGenerator(FbmGenerator&&) noexcept = default;
FbmGenerator& FbmGenerator::operator=(FbmGenerator&&) noexcept = default;

GridPath FbmGenerator::sample(std::uint64_t seed) const {
    const auto n = static_cast<Eigen::Index>(cells_);
    NormalStream normal(seed);
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = normal();
    const Eigen::VectorXd inc = factor_->lower.triangularView<Eigen::Lower>() * z;
    std::vector<double> w(cells_ + 1, 0.0);
    for (std::size_t k = 0; k < cells_; ++k) w[k + 1] = w[k] + inc(static_cast<Eigen::Index>(k));
    return GridPath::scalar(0.0, mesh_, std::move(w));
}

GridPath gen_fbm(const DriverSpec& spec) {
    if (spec.kind != DriverKind::Fbm) throw DomainError("gen_fbm needs kind = fbm");
    spec.validate();
    return FbmGenerator(spec.hurst, spec.T, spec.mesh).sample(spec.seed);
}

GridPath gen_deterministic(const DriverSpec& spec) {
    spec.validate();
    const std::size_t nodes = spec.cells() + 1;
    switch (spec.kind) {
        case DriverKind::Zero: return GridPath::scalar(0.0, spec.mesh, std::vector<double>(nodes, 0.0));
        case DriverKind::Power:
            return GridPath::from_function(0.0, spec.mesh, nodes, 1, [&](double t, std::span<double> v) {
                v[0] = std::pow(t, spec.exponent);
            });
        case DriverKind::Sine:
            return GridPath::from_function(0.0, spec.mesh, nodes, 1, [&](double t, std::span<double> v) {
                v[0] = spec.amplitude * std::sin(2.0 * std::numbers::pi * spec.frequency * t);
            });
        case DriverKind::CustomSamples: return GridPath::scalar(0.0, spec.mesh, spec.samples);
        case DriverKind::Fbm: break;
    }
    throw DomainError("gen_deterministic does not handle fbm");
}

GridPath generate(const DriverSpec& spec) {
    return spec.kind == DriverKind::Fbm ? gen_fbm(spec) : gen_deterministic(spec);
}

std::vector<std::pair<double, double>> empirical_holder_exponent(const GridPath& path,
                                                                 const std::vector<double>& betas) {
    std::vector<std::pair<double, double>> table;
    table.reserve(betas.size());
    const NodeRange all{0, path.size() - 1};
    for (double b : betas) table.emplace_back(b, holder_seminorm(path.view(all), b).seminorm);
    return table;
}

}  // namespace ydde
