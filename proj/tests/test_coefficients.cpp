#include <cmath>
#include <random>

#include "doctest.h"

#include "ydde/coefficients.hpp"
#include "ydde/error.hpp"

#include "draws.hpp"

using namespace ydde;

namespace {

Segment random_segment(std::mt19937_64& rng, std::size_t dim, double scale = 1.0) {
    const GridPath p = draws::random_path(rng, -0.25, 1.0 / 32, 9, dim, scale);
    return Segment(0.25, 1.0 / 32, dim, p.values());
}

std::vector<double> apply(const CoefficientSet::Map& m, const Segment& s, std::size_t dim) {
    std::vector<double> out(dim);
    m(s.view(), out);
    return out;
}

}  // namespace

TEST_CASE("linear delay family evaluates A xi(0) + B xi(-r) and Sigma xi(-r) + c") {
    FamilyParams p;
    p.dim = 2;
    p.A = {1, 2, 3, 4};
    p.B = {0, 1, 1, 0};
    p.Sigma = {2, 0, 0, 3};
    p.c = {0.5, -0.5};
    const CoefficientSet cs = make_builtin(Family::LinearDelay, p);
    const Segment s = Segment::from_function(0.25, 0.125, 2, [](double u, std::span<double> v) {
        v[0] = 1 + u;
        v[1] = 2 * u;
    });
    const auto f = apply(cs.f, s, 2);
    // xi(0) = (1, 0), xi(-r) = (0.75, -0.5)
    CHECK(f[0] == doctest::Approx(1.0 - 0.5));
    CHECK(f[1] == doctest::Approx(3.0 + 0.75));
    const auto g = apply(cs.g, s, 2);
    CHECK(g[0] == doctest::Approx(2.0));
    CHECK(g[1] == doctest::Approx(-2.0));
    CHECK(cs.g0_norm == doctest::Approx(std::sqrt(0.5)));
    CHECK(cs.L_M(5.0) == 0.0);
}

TEST_CASE("sin delay family") {
    FamilyParams p;
    p.a = -1.0;
    p.b = 0.5;
    p.sigma = 0.3;
    const CoefficientSet cs = make_builtin(Family::SinDelay, p);
    const Segment s = Segment::from_function(0.25, 0.125, 1, [](double u, std::span<double> v) { v[0] = 1 + 4 * u; });
    CHECK(apply(cs.f, s, 1)[0] == doctest::Approx(-1.0 + 0.0));
    CHECK(apply(cs.g, s, 1)[0] == doctest::Approx(0.0));
    CHECK(cs.L_f == doctest::Approx(1.5));
    CHECK(cs.L_g == doctest::Approx(0.3));
}

TEST_CASE("derivatives are linear in the direction and match finite differences") {
    std::mt19937_64 rng(11);
    for (std::size_t fam = 0; fam < 3; ++fam) {
        const CoefficientSet cs = draws::probe_coefficients(fam);
        const std::size_t d = cs.dim;
        for (int trial = 0; trial < 10; ++trial) {
            const Segment x = random_segment(rng, d);
            const Segment u = random_segment(rng, d);
            const Segment v = random_segment(rng, d);
            std::vector<double> du(d), dv(d), duv(d);
            std::vector<double> comb(u.values().size());
            for (std::size_t i = 0; i < comb.size(); ++i) comb[i] = 2.0 * u.values()[i] - v.values()[i];
            const Segment w(0.25, 1.0 / 32, d, comb);
            for (const auto* D : {&cs.Df, &cs.Dg}) {
                (*D)(x.view(), u.view(), du);
                (*D)(x.view(), v.view(), dv);
                (*D)(x.view(), w.view(), duv);
                for (std::size_t c = 0; c < d; ++c) CHECK(duv[c] == doctest::Approx(2 * du[c] - dv[c]).epsilon(1e-12));
            }
            const double eps = 1e-6;
            std::vector<double> shifted(x.values().size());
            for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] = x.values()[i] + eps * u.values()[i];
            const Segment xs(0.25, 1.0 / 32, d, shifted);
            for (auto [map, D] : {std::pair{&cs.f, &cs.Df}, std::pair{&cs.g, &cs.Dg}}) {
                const auto a = apply(*map, x, d), b = apply(*map, xs, d);
                (*D)(x.view(), u.view(), du);
                for (std::size_t c = 0; c < d; ++c) CHECK((b[c] - a[c]) / eps == doctest::Approx(du[c]).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("declared constants survive random probing") {
    for (std::size_t fam = 0; fam < 3; ++fam) {
        const RegularityReport r = verify_regularity(draws::probe_coefficients(fam), 0.25, 1.0 / 32, 3.0, 300, 5);
        CHECK(r.valid);
        CHECK(r.worst_lipschitz_f <= 1.0 + 1e-9);
        CHECK(r.worst_dg_bound <= 1.0 + 1e-9);
        CHECK(r.worst_dg_holder <= 1.0 + 1e-9);
    }
}

TEST_CASE("composition estimates on random draws") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        const CoefficientSet cs = draws::probe_coefficients(static_cast<std::size_t>(trial));
        const draws::InequalityDraw d = draws::inequality_draw(rng, cs.dim);
        CHECK(composition_holder(cs, d.x, d.beta, d.r, d.window).holds());
        CHECK(composition_difference(cs, d.x, d.y, d.beta, d.r, d.window).holds());
    }
}

TEST_CASE("json construction and validation") {
    const nlohmann::json j = {{"family", "sin_delay"}, {"params", {{"a", -0.1}, {"b", 0.0}, {"sigma", 0.2}}}};
    CHECK(coefficients_from_json(j).L_g == doctest::Approx(0.2));
    CHECK_THROWS_AS(coefficients_from_json({{"family", "cubic"}, {"params", nlohmann::json::object()}}), DomainError);
    FamilyParams p;
    p.dim = 2;
    p.A = {1, 2, 3};
    CHECK_THROWS_AS(make_builtin(Family::LinearDelay, p), DomainError);
    p = {};
    p.dim = 2;
    CHECK_THROWS_AS(make_builtin(Family::ScalarLogisticBounded, p), DomainError);
}
