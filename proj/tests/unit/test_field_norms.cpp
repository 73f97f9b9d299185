#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "plap/errors.hpp"
#include "plap/field_norms.hpp"

using namespace plap;

namespace {

constexpr double kPi = std::numbers::pi;

SpatialField mode_field(const TorusGrid& g, int kx, int ky, int component) {
    SpatialField u(g);
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j) u(component, i, j) = std::sin(kx * g.coord(i) + ky * g.coord(j));
    return u;
}

}  // namespace

TEST_CASE("norm tags parse and print") {
    CHECK(NormSpec::parse("L2") == NormSpec::L(2));
    CHECK(NormSpec::parse("Lp(4)") == NormSpec::L(4));
    CHECK(std::isinf(NormSpec::parse("Linf").q));
    CHECK(NormSpec::parse("W12") == NormSpec::W1(2));
    CHECK(NormSpec::parse("W1p(3)") == NormSpec::W1(3));
    CHECK(NormSpec::parse("Wm12") == NormSpec::Wm1(2));
    CHECK(NormSpec::parse("Wm1p(1.5)") == NormSpec::Wm1(1.5));
    CHECK(NormSpec::parse("EUCLID") == NormSpec::euclid());
    CHECK_THROWS_AS(NormSpec::parse("H1"), DomainError);
    CHECK_THROWS_AS(NormSpec::parse("Lp(0.5)"), DomainError);
    CHECK(NormSpec::W1(3).label() == "W1,3");
}

TEST_CASE("zero field has zero norm in every tag") {
    const TorusGrid g(16);
    const SpatialField zero(g);
    for (const char* tag : {"L2", "Lp(3)", "Linf", "W12", "W1p(4)", "Wm12", "Wm1p(1.5)", "EUCLID"})
        CHECK(spatial_norm(zero, NormSpec::parse(tag)) == 0.0);
}

TEST_CASE("L2 of sin(x1) e1") {
    const TorusGrid g(64);
    const double v = spatial_norm(mode_field(g, 1, 0, 0), NormSpec::L(2));
    CHECK(std::abs(v - std::sqrt(2 * kPi * kPi)) < 1e-3 * std::sqrt(2 * kPi * kPi));
}

TEST_CASE("constant field on a unit-measure domain") {
    // The torus has measure 4 pi^2; rescaling the constant recovers |c| on unit measure.
    const TorusGrid g(16);
    SpatialField u(g);
    const double c0 = 0.6, c1 = -0.8;
    for (std::size_t k = 0; k < g.points(); ++k) {
        u.component(0)[k] = c0;
        u.component(1)[k] = c1;
    }
    CHECK(spatial_norm(u, NormSpec::L(2)) / (2 * kPi) == doctest::Approx(1.0));
    CHECK(spatial_norm(u, NormSpec::L(std::numeric_limits<double>::infinity())) == doctest::Approx(1.0));
}

TEST_CASE("Sobolev norms of a single mode") {
    const TorusGrid g(32);
    const auto u = mode_field(g, 2, 1, 1);
    const double l2 = std::sqrt(2 * kPi * kPi);
    // centered differences see the symbol sin(k h)/h
    const double s1 = std::sin(2 * g.h()) / g.h(), s2 = std::sin(g.h()) / g.h();
    const double sym = s1 * s1 + s2 * s2;
    CHECK(spatial_norm(u, NormSpec::W1(2)) == doctest::Approx(l2 * std::sqrt(1 + sym)).epsilon(1e-12));
    // spectral W^{-1,2} uses the exact symbol |k|^2 = 5
    CHECK(spatial_norm(u, NormSpec::Wm1(2)) == doctest::Approx(l2 / std::sqrt(6.0)).epsilon(1e-12));
}

TEST_CASE("interpolation between W^{1,2} and W^{-1,2}") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    const TorusGrid g(16);
    for (int trial = 0; trial < 10; ++trial) {
        SpatialField u(g);
        for (double& x : u.data()) x = gauss(rng);
        const double l2 = spatial_norm(u, NormSpec::L(2));
        const double w1 = spatial_norm(u, NormSpec::W1(2));
        const double wm1 = spatial_norm(u, NormSpec::Wm1(2));
        CHECK(wm1 <= l2 * (1 + 1e-12));
        CHECK(l2 > 0.0);
        CHECK(w1 >= l2);
    }
}

TEST_CASE("dictionary W^{-1,q} lower bound") {
    const TorusGrid g(32);
    const auto u = mode_field(g, 1, 0, 0);
    const FieldLayout layout = FieldLayout::vector_field(g);
    SpatialNormEvaluator eval(&layout, NormSpec::Wm1(1.5));
    CHECK(eval.is_lower_bound());
    const double v = eval(u.data());
    CHECK(v > 0.0);
    // same order of magnitude as the exact q = 2 value
    const double spectral = spatial_norm(u, NormSpec::Wm1(2));
    CHECK(v > 0.1 * spectral);
}

TEST_CASE("restriction to a ball") {
    const TorusGrid g(32);
    const auto region = std::make_shared<Region>(Region::ball(g, kPi, kPi, 1.0));
    std::size_t expected = 0;
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            if (std::hypot(g.coord(i) - kPi, g.coord(j) - kPi) <= 1.0) ++expected;
    CHECK(region->nodes.size() == expected);

    FieldLayout local = FieldLayout::vector_field(g);
    local.region = region;
    const FieldLayout full = FieldLayout::vector_field(g);
    const auto u = mode_field(g, 1, 1, 0);
    for (const char* tag : {"L2", "Linf", "W12", "Wm12"}) {
        const NormSpec spec = NormSpec::parse(tag);
        CHECK(spatial_norm(u.data(), local, spec) <= spatial_norm(u.data(), full, spec) * (1 + 1e-12));
    }
    // wraparound: a ball centred at the origin collects nodes from all four corners
    const Region corner = Region::ball(g, 0.0, 0.0, 0.5);
    CHECK(corner.nodes.size() > 1);
}

TEST_CASE("sym tensor layout counts the off-diagonal twice") {
    const TorusGrid g(8);
    const FieldLayout layout = FieldLayout::sym_tensor_field(g);
    std::vector<double> snap(layout.snapshot_size(), 0.0);
    for (std::size_t k = 0; k < g.points(); ++k) snap[g.points() + k] = 1.0;
    CHECK(spatial_norm(snap, layout, NormSpec::L(2)) == doctest::Approx(std::sqrt(2.0) * 2 * kPi));
}
