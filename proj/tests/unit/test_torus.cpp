#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "plap/errors.hpp"
#include "plap/torus.hpp"

using namespace plap;

namespace {

template <class F0, class F1>
SpatialField make_field(const TorusGrid& g, F0&& f0, F1&& f1) {
    SpatialField u(g);
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j) {
            u(0, i, j) = f0(g.coord(i), g.coord(j));
            u(1, i, j) = f1(g.coord(i), g.coord(j));
        }
    return u;
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(TorusGrid(4), DomainError);
    CHECK_THROWS_AS(TorusGrid(24), DomainError);
    const TorusGrid g(16);
    CHECK(g.h() == doctest::Approx(2 * std::numbers::pi / 16));
    CHECK(g.index(-1, 16) == g.index(15, 0));
}

TEST_CASE("symmetric gradient of trigonometric fields") {
    for (int n : {32, 64}) {
        const TorusGrid g(n);
        const double h2 = g.h() * g.h();
        auto u = make_field(g, [](double x, double) { return std::sin(x); }, [](double, double) { return 0.0; });
        auto du = sym_gradient(u);
        double err = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) err = std::max(err, std::abs(du.plane(0)[g.index(i, j)] - std::cos(g.coord(i))));
        CHECK(err < h2);
        CHECK(max_abs(du.plane(1)) == 0.0);

        u = make_field(g, [](double, double y) { return std::sin(y); }, [](double, double) { return 0.0; });
        du = sym_gradient(u);
        err = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                err = std::max(err, std::abs(du.plane(1)[g.index(i, j)] - 0.5 * std::cos(g.coord(j))));
        CHECK(err < h2);
    }
    const TorusGrid g(8);
    const auto c = make_field(g, [](double, double) { return 3.0; }, [](double, double) { return -1.0; });
    CHECK(max_abs(sym_gradient(c).data()) == 0.0);
}

TEST_CASE("discrete duality of divergence and symmetric gradient") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    for (int n : {8, 16, 64}) {
        const TorusGrid g(n);
        SymTensorField t(g);
        SpatialField v(g);
        for (double& x : t.data()) x = gauss(rng);
        for (double& x : v.data()) x = gauss(rng);
        const double a = inner(divergence(t), v);
        const double b = inner(t, sym_gradient(v));
        const double scale = std::sqrt(inner(t, t) * inner(v, v));
        CHECK(std::abs(a + b) < 1e-10 * scale);
    }
}

TEST_CASE("divergence of the linear stress on the eigenfield") {
    for (int n : {32, 64}) {
        const TorusGrid g(n);
        const auto u = make_field(
            g, [](double x, double y) { return std::sin(x) * std::cos(y); },
            [](double x, double y) { return -std::cos(x) * std::sin(y); });
        ModelParams m;
        m.p = 2.0;
        m.mu = 1.0;
        m.model = Model::A2;
        const auto div = divergence(apply_stress(sym_gradient(u), m));
        double err = 0.0;
        for (std::size_t k = 0; k < u.data().size(); ++k) err = std::max(err, std::abs(div.data()[k] + u.data()[k]));
        CHECK(err < 2.0 * g.h() * g.h());
    }
    const TorusGrid g(8);
    SymTensorField constant(g);
    for (std::size_t k = 0; k < g.points(); ++k) constant.set(k, SymMatrix::from_upper(2, {1.0, 2.0, 3.0}));
    CHECK(divergence(constant).max_abs() == 0.0);
}

TEST_CASE("energy and mean") {
    const TorusGrid g(16);
    SpatialField zero(g);
    ModelParams m;
    CHECK(energy(zero, m) == 0.0);
    const auto u = make_field(g, [](double x, double) { return 2.0 + std::sin(x); }, [](double, double) { return 0.5; });
    CHECK(mean(u, 0) == doctest::Approx(2.0));
    CHECK(mean(u, 1) == doctest::Approx(0.5));
    CHECK(energy(u, m) > 0.0);
}
