#include "ydde/coefficients.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "ydde/driver.hpp"
#include "ydde/error.hpp"

namespace ydde {

namespace {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Mat to_matrix(const std::vector<double>& v, std::size_t d, const char* name) {
    const auto n = static_cast<Eigen::Index>(d);
    if (v.empty()) return Mat::Zero(n, n);
    if (v.size() != d * d) throw DomainError(std::string(name) + " must have dim*dim entries");
    return Eigen::Map<const Mat>(v.data(), n, n);
}

double spectral_norm(const Mat& m) {
    if (m.isZero(0.0)) return 0.0;
    return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

Eigen::Map<const Eigen::VectorXd> as_vec(std::span<const double> s) {
    return {s.data(), static_cast<Eigen::Index>(s.size())};
}

Eigen::Map<Eigen::VectorXd> as_vec(std::span<double> s) {
    return {s.data(), static_cast<Eigen::Index>(s.size())};
}

double euclid(std::span<const double> v) {
    double sq = 0.0;
    for (double c : v) sq += c * c;
    return std::sqrt(sq);
}

CoefficientSet linear_delay(const FamilyParams& p) {
    const std::size_t d = p.dim;
    const Mat A = to_matrix(p.A, d, "A");
    const Mat B = to_matrix(p.B, d, "B");
    const Mat S = to_matrix(p.Sigma, d, "Sigma");
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    if (!p.c.empty()) {
        if (p.c.size() != d) throw DomainError("c must have dim entries");
        c = as_vec(std::span<const double>(p.c));
    }

    CoefficientSet cs;
    cs.family = "linear_delay";
    cs.dim = d;
    cs.f = [A, B](const SegmentView& xi, std::span<double> out) {
        as_vec(out) = A * as_vec(xi.head()) + B * as_vec(xi.tail());
    };
    cs.g = [S, c](const SegmentView& xi, std::span<double> out) { as_vec(out) = S * as_vec(xi.tail()) + c; };
    cs.Df = [A, B](const SegmentView&, const SegmentView& dir, std::span<double> out) {
        as_vec(out) = A * as_vec(dir.head()) + B * as_vec(dir.tail());
    };
    cs.Dg = [S](const SegmentView&, const SegmentView& dir, std::span<double> out) {
        as_vec(out) = S * as_vec(dir.tail());
    };
    cs.L_f = spectral_norm(A) + spectral_norm(B);
    cs.L_g = spectral_norm(S);
    cs.L_M = [](double) { return 0.0; };
    cs.delta = 1.0;
    cs.f0_norm = 0.0;
    cs.g0_norm = c.norm();
    return cs;
}

CoefficientSet sin_delay(const FamilyParams& p) {
    const double a = p.a, b = p.b, sigma = p.sigma;
    CoefficientSet cs;
    cs.family = "sin_delay";
    cs.dim = p.dim;
    cs.f = [a, b](const SegmentView& xi, std::span<double> out) {
        const auto x0 = xi.head(), xr = xi.tail();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x0[i] + b * xr[i];
    };
    cs.g = [sigma](const SegmentView& xi, std::span<double> out) {
        const auto xr = xi.tail();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = sigma * std::sin(xr[i]);
    };
    cs.Df = [a, b](const SegmentView&, const SegmentView& dir, std::span<double> out) {
        const auto d0 = dir.head(), dr = dir.tail();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * d0[i] + b * dr[i];
    };
    cs.Dg = [sigma](const SegmentView& xi, const SegmentView& dir, std::span<double> out) {
        const auto xr = xi.tail(), dr = dir.tail();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = sigma * std::cos(xr[i]) * dr[i];
    };
    cs.L_f = std::abs(a) + std::abs(b);
    cs.L_g = std::abs(sigma);
    // |cos u - cos v| <= |u - v|
    cs.L_M = [s = std::abs(sigma)](double) { return s; };
    cs.delta = 1.0;
    return cs;
}

CoefficientSet scalar_logistic_bounded(const FamilyParams& p) {
    if (p.dim != 1) throw DomainError("scalar_logistic_bounded is one-dimensional");
    if (!(p.domain_radius > 0.0)) throw DomainError("domain_radius must be positive");
    const double a = p.a, sigma = p.sigma;
    CoefficientSet cs;
    cs.family = "scalar_logistic_bounded";
    cs.dim = 1;
    cs.f = [a](const SegmentView& xi, std::span<double> out) {
        out[0] = a * xi.head()[0] * (1.0 - std::tanh(xi.tail()[0]));
    };
    cs.g = [sigma](const SegmentView& xi, std::span<double> out) { out[0] = sigma * std::tanh(xi.tail()[0]); };
    cs.Df = [a](const SegmentView& xi, const SegmentView& dir, std::span<double> out) {
        const double th = std::tanh(xi.tail()[0]);
        out[0] = a * (1.0 - th) * dir.head()[0] - a * xi.head()[0] * (1.0 - th * th) * dir.tail()[0];
    };
    cs.Dg = [sigma](const SegmentView& xi, const SegmentView& dir, std::span<double> out) {
        const double th = std::tanh(xi.tail()[0]);
        out[0] = sigma * (1.0 - th * th) * dir.tail()[0];
    };
    // On the domain ball: |d f / d xi(0)| <= 2|a|, |d f / d xi(-r)| <= |a| R.
    cs.L_f = std::abs(a) * (2.0 + p.domain_radius);
    cs.L_g = std::abs(sigma);
    // sup |d/du sech^2 u| = 4 / (3 sqrt 3)
    cs.L_M = [s = std::abs(sigma) * 4.0 / (3.0 * std::sqrt(3.0))](double) { return s; };
    cs.delta = 1.0;
    return cs;
}

// Ratio num / den with 0/0 = 0.
double ratio(double num, double den) {
    if (num == 0.0) return 0.0;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
}

}  // namespace

Family family_from_string(const std::string& s) {
    if (s == "linear_delay") return Family::LinearDelay;
    if (s == "sin_delay") return Family::SinDelay;
    if (s == "scalar_logistic_bounded") return Family::ScalarLogisticBounded;
    throw DomainError("unknown coefficient family: " + s);
}

std::string to_string(Family f) {
    switch (f) {
        case Family::LinearDelay: return "linear_delay";
        case Family::SinDelay: return "sin_delay";
        case Family::ScalarLogisticBounded: return "scalar_logistic_bounded";
    }
    return "unknown";
}

CoefficientSet make_builtin(Family family, const FamilyParams& params) {
    if (params.dim == 0) throw DomainError("dimension must be positive");
    switch (family) {
        case Family::LinearDelay: return linear_delay(params);
        case Family::SinDelay: return sin_delay(params);
        case Family::ScalarLogisticBounded: return scalar_logistic_bounded(params);
    }
    throw DomainError("unknown coefficient family");
}

FamilyParams family_params_from_json(const nlohmann::json& j) {
    FamilyParams p;
    p.dim = j.value("dim", p.dim);
    auto vec = [&](const char* key, std::vector<double>& out) {
        if (!j.contains(key)) return;
        const auto& v = j.at(key);
        if (v.is_number()) {
            // scalar shorthand: s * identity for matrices, s in every slot for c
            const double s = v.get<double>();
            out.assign(std::string(key) == "c" ? p.dim : p.dim * p.dim, 0.0);
            if (std::string(key) == "c")
                std::fill(out.begin(), out.end(), s);
            else
                for (std::size_t i = 0; i < p.dim; ++i) out[i * p.dim + i] = s;
        } else {
            out.clear();
            for (const auto& row : v) {
                if (row.is_array())
                    for (const auto& x : row) out.push_back(x.get<double>());
                else
                    out.push_back(row.get<double>());
            }
        }
    };
    vec("A", p.A);
    vec("B", p.B);
    vec("Sigma", p.Sigma);
    vec("c", p.c);
    p.a = j.value("a", p.a);
    p.b = j.value("b", p.b);
    p.sigma = j.value("sigma", p.sigma);
    p.domain_radius = j.value("domain_radius", p.domain_radius);
    return p;
}

CoefficientSet coefficients_from_json(const nlohmann::json& j) {
    const Family fam = family_from_string(j.at("family").get<std::string>());
    return make_builtin(fam, family_params_from_json(j.value("params", nlohmann::json::object())));
}

RegularityReport verify_regularity(const CoefficientSet& coeffs, double delay, double mesh, double M,
                                   std::size_t trials, std::uint64_t seed) {
    if (trials == 0) throw DomainError("verify_regularity needs at least one trial");
    const std::size_t d = coeffs.dim;
    const std::size_t nodes = cells_in(delay, mesh, "delay") + 1;
    std::uint64_t counter = 0;
    auto uniform = [&] { return 2.0 * NormalStream::uniform(seed, counter++) - 1.0; };

    // Each node uniform in the cube of half-side M / sqrt(d), so ||.||_inf <= M.
    const double side = M / std::sqrt(static_cast<double>(d));
    auto random_segment = [&](std::vector<double>& v) {
        v.resize(nodes * d);
        for (double& x : v) x = side * uniform();
    };
    auto sup_diff = [&](const std::vector<double>& x, const std::vector<double>& y) {
        double m = 0.0;
        for (std::size_t j = 0; j < nodes; ++j) {
            double sq = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double e = x[j * d + c] - y[j * d + c];
                sq += e * e;
            }
            m = std::max(m, std::sqrt(sq));
        }
        return m;
    };

    RegularityReport rep;
    rep.trials = trials;
    const double LM = coeffs.L_M(M);
    std::vector<double> xi, eta, dir, fa(d), fb(d), ga(d), gb(d);
    for (std::size_t t = 0; t < trials; ++t) {
        random_segment(xi);
        random_segment(eta);
        // Every other pair is a close one, where a Hölder bound with
        // delta < 1 is hardest to meet.
        if (t % 2 == 1) {
            const double eps = std::pow(10.0, -1.0 - 4.0 * NormalStream::uniform(seed, counter++));
            for (std::size_t i = 0; i < xi.size(); ++i) {
                eta[i] = xi[i] + eps * side * uniform();
                eta[i] = std::clamp(eta[i], -side, side);
            }
        }
        random_segment(dir);
        const double dir_norm = SegmentView(dir, d, mesh).sup_norm();
        for (double& x : dir) x /= dir_norm;

        const SegmentView vx(xi, d, mesh), ve(eta, d, mesh), vu(dir, d, mesh);
        const double dist = sup_diff(xi, eta);

        coeffs.f(vx, fa);
        coeffs.f(ve, fb);
        double df = 0.0;
        for (std::size_t c = 0; c < d; ++c) df += (fa[c] - fb[c]) * (fa[c] - fb[c]);
        rep.worst_lipschitz_f = std::max(rep.worst_lipschitz_f, ratio(std::sqrt(df), coeffs.L_f * dist));

        coeffs.Dg(vx, vu, ga);
        coeffs.Dg(ve, vu, gb);
        rep.worst_dg_bound = std::max(rep.worst_dg_bound, ratio(euclid(ga), coeffs.L_g));
        double dg = 0.0;
        for (std::size_t c = 0; c < d; ++c) dg += (ga[c] - gb[c]) * (ga[c] - gb[c]);
        rep.worst_dg_holder =
            std::max(rep.worst_dg_holder, ratio(std::sqrt(dg), LM * std::pow(dist, coeffs.delta)));
    }
    constexpr double slack = 1.0 + 1e-9;
    rep.valid = rep.worst_lipschitz_f <= slack && rep.worst_dg_bound <= slack && rep.worst_dg_holder <= slack;
    return rep;
}

GridPath eval_along(const CoefficientSet& coeffs, Which which, const GridPath& path, double r,
                    NodeRange range) {
    const std::size_t cells = cells_in(r, path.mesh(), "delay");
    if (range.first < cells) throw DomainError("segment precedes history");
    if (range.last >= path.size()) throw DomainError("range outside path");
    const auto& map = which == Which::F ? coeffs.f : coeffs.g;
    std::vector<double> out(range.count() * coeffs.dim);
    for (std::size_t k = range.first; k <= range.last; ++k)
        map(path.view({k - cells, k}),
            std::span<double>(out).subspan((k - range.first) * coeffs.dim, coeffs.dim));
    return GridPath(path.time(range.first), path.mesh(), coeffs.dim, std::move(out));
}

CompositionReport composition_holder(const CoefficientSet& coeffs, const GridPath& path, double beta,
                                     double r, const Window& window) {
    const NodeRange win = path.range_of(window);
    const GridPath gx = eval_along(coeffs, Which::G, path, r, win);
    CompositionReport rep;
    rep.lhs = holder_seminorm(gx.view({0, gx.size() - 1}), beta);
    for (auto& i : rep.lhs.witness) i += win.first;
    rep.bound = coeffs.L_g * holder_seminorm(path, beta, {window.a - r, window.b}).seminorm;
    return rep;
}

CompositionReport composition_difference(const CoefficientSet& coeffs, const GridPath& x,
                                         const GridPath& y, double beta, double r, const Window& window,
                                         double M) {
    const NodeRange win = x.range_of(window);
    const Window big{window.a - r, window.b};
    if (M <= 0.0) M = std::max(holder_norm(x, beta, big), holder_norm(y, beta, big));
    const GridPath gd = difference(eval_along(coeffs, Which::G, x, r, win), eval_along(coeffs, Which::G, y, r, win));
    const double db = coeffs.delta * beta;
    CompositionReport rep;
    rep.lhs = holder_seminorm(gd.view({0, gd.size() - 1}), db);
    for (auto& i : rep.lhs.witness) i += win.first;
    const GridPath xy = difference(x, y);
    rep.bound = coeffs.L_g * std::pow(window.b - window.a, beta - db) * holder_seminorm(xy, beta, big).seminorm +
                coeffs.L_M(M) * std::pow(M, coeffs.delta) * sup_norm(xy, big);
    return rep;
}

}  // namespace ydde
