#include <cmath>
#include <random>

#include "doctest.h"
#include "plap/errors.hpp"
#include "plap/tensor_models.hpp"

using namespace plap;

namespace {

ModelParams params(Model model, double p, double mu) {
    ModelParams m;
    m.model = model;
    m.p = p;
    m.mu = mu;
    return m;
}

SymMatrix sample_matrix(std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> g(0.0, scale);
    return SymMatrix::from_upper(2, {g(rng), g(rng), g(rng)});
}

double max_entry_diff(const SymMatrix& a, const SymMatrix& b) {
    double m = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

}  // namespace

TEST_CASE("potential closed forms") {
    for (Model model : {Model::A1, Model::A2}) CHECK(phi(0.0, params(model, 3.0, 0.5)) == 0.0);
    CHECK(phi(1.0, params(Model::A1, 2.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-15));
    for (double t : {0.0, 1e-6, 0.3, 1.0, 7.5}) {
        CHECK(phi(t, params(Model::A2, 2.0, 1.0)) == doctest::Approx(t * t / 2).epsilon(1e-13));
    }
    // small-t form agrees with the naive formula where the latter is accurate
    const auto m = params(Model::A2, 3.5, 0.7);
    const double t = 2.0;
    CHECK(phi(t, m) == doctest::Approx((std::pow(m.mu + t * t, m.p / 2) - std::pow(m.mu, m.p / 2)) / m.p));
    CHECK_THROWS_AS(phi(-1.0, m), DomainError);
    CHECK_THROWS_AS(phi_d(-1.0, m), DomainError);
    CHECK_THROWS_AS(phi_dd(-0.1, m), DomainError);
}

TEST_CASE("derivatives at zero") {
    for (double p : {2.0, 2.5, 3.0, 4.0}) {
        for (double mu : {0.1, 1.0}) {
            CHECK(phi_d(0.0, params(Model::A1, p, mu)) == 0.0);
            CHECK(phi_d(0.0, params(Model::A2, p, mu)) == 0.0);
            CHECK(phi_dd(0.0, params(Model::A2, p, mu)) == doctest::Approx(std::pow(mu, (p - 2) / 2)));
            CHECK(params(Model::A1, p, mu).phi_dd0() > 0.0);
        }
    }
}

TEST_CASE("derivatives match finite differences of phi") {
    for (Model model : {Model::A1, Model::A2}) {
        const auto m = params(model, 3.0, 0.5);
        for (double t : {0.2, 1.0, 3.0}) {
            const double e = 1e-5;
            CHECK(phi_d(t, m) == doctest::Approx((phi(t + e, m) - phi(t - e, m)) / (2 * e)).epsilon(1e-8));
            CHECK(phi_dd(t, m) == doctest::Approx((phi_d(t + e, m) - phi_d(t - e, m)) / (2 * e)).epsilon(1e-8));
        }
    }
}

TEST_CASE("growth band holds with the measured K") {
    for (Model model : {Model::A1, Model::A2}) {
        for (double p : {2.0, 2.5, 3.0, 4.0}) {
            const auto m = params(model, p, 1.0);
            const double k = growth_constant(m);
            for (double t : {0.0, 0.5, 1.0, 10.0}) {
                const double band = 1.0 + std::pow(t, p - 2);
                CHECK(phi_dd(t, m) <= k * band);
                CHECK(phi_dd(t, m) >= m.phi_dd0() * band / k);
            }
        }
    }
}

TEST_CASE("stress and V map") {
    const SymMatrix zero(2);
    for (Model model : {Model::A1, Model::A2}) {
        CHECK(stress(zero, params(model, 3.0, 1.0)).is_zero());
        CHECK(v_map(zero, params(model, 3.0, 1.0)).is_zero());
    }
    const auto q = SymMatrix::from_upper(2, {0.3, -1.2, 2.0});
    const double t = q.norm();
    for (double p : {2.0, 3.0, 4.5}) {
        const auto m = params(Model::A2, p, 0.4);
        CHECK(max_entry_diff(stress(q, m), std::pow(0.4 + t * t, (p - 2) / 2) * q) < 1e-14);
    }
    // A1 at p = 2 is the linear law (1 + mu) Q
    CHECK(max_entry_diff(stress(q, params(Model::A1, 2.0, 1.0)), 2.0 * q) < 1e-15);
    CHECK(max_entry_diff(v_map(q, params(Model::A2, 2.0, 1.0)), q) < 1e-15);
    CHECK(max_entry_diff(v_map(q, params(Model::A2, 4.0, 1.0)), std::sqrt(1 + t * t) * q) < 1e-14);

    const auto s = stress(q, params(Model::A1, 3.3, 0.2));
    CHECK(s(0, 1) == s(1, 0));
}

TEST_CASE("stress is the gradient of phi(|Q|)") {
    std::mt19937_64 rng(11);
    for (Model model : {Model::A1, Model::A2}) {
        for (double p : {2.0, 2.5, 3.0, 4.0}) {
            const auto m = params(model, p, 0.1);
            for (int trial = 0; trial < 50; ++trial) {
                const SymMatrix q = sample_matrix(rng, 2.0);
                const SymMatrix s = stress(q, m);
                const double e = 1e-5;
                // independent coordinates: diagonal entries and the symmetric off-diagonal pair
                for (auto [i, j] : {std::pair{0, 0}, std::pair{1, 1}, std::pair{0, 1}}) {
                    SymMatrix qp = q, qm = q;
                    qp.set(i, j, q(i, j) + e);
                    qm.set(i, j, q(i, j) - e);
                    double fd = (phi(qp.norm(), m) - phi(qm.norm(), m)) / (2 * e);
                    if (i != j) fd /= 2.0;
                    CHECK(std::abs(fd - s(i, j)) <= 1e-6 * std::max(1.0, s.norm()));
                }
            }
        }
    }
}

TEST_CASE("tangent matches directional derivative of the stress") {
    std::mt19937_64 rng(5);
    for (Model model : {Model::A1, Model::A2}) {
        const auto m = params(model, 3.0, 0.5);
        for (int trial = 0; trial < 20; ++trial) {
            const SymMatrix q = sample_matrix(rng, 1.5), e = sample_matrix(rng, 1.0);
            const auto tg = stress_tangent(q.norm(), m);
            const SymMatrix analytic = tg.scalar * e + tg.rank_one * contract(q, e) * q;
            const double eps = 1e-6;
            const SymMatrix fd = (1.0 / (2 * eps)) * (stress(q + eps * e, m) - stress(q - eps * e, m));
            CHECK(max_entry_diff(analytic, fd) <= 1e-6 * std::max(1.0, analytic.norm()));
        }
    }
}

TEST_CASE("equivalence ratios") {
    const auto m = params(Model::A2, 2.0, 1.0);
    const auto q = SymMatrix::from_upper(2, {0.5, 0.1, -0.3});
    const auto r = equivalence_ratios(q + 1e-6 * SymMatrix::identity(2), q, m);
    CHECK(r.monotone == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.v_quadratic == doctest::Approx(1.0).epsilon(1e-6));

    const auto pdiag = SymMatrix::from_upper(2, {1.0, 0.0, 0.0});
    const auto sym = equivalence_ratios(pdiag, -1.0 * pdiag, params(Model::A1, 3.0, 1.0));
    CHECK(std::isfinite(sym.monotone));
    CHECK(sym.monotone > 0.0);
    CHECK(sym.v_quadratic > 0.0);
    CHECK_THROWS_AS(equivalence_ratios(q, q, m), DegeneratePairError);
    CHECK_THROWS_AS(lipschitz_ratio(q, q, m), DegeneratePairError);
}

TEST_CASE("structure band over random pairs, p = 3") {
    const auto band = sample_structure_band(params(Model::A2, 3.0, 1.0), 10000, 2024);
    CHECK(band.samples == 10000);
    CHECK(band.pairing_min >= 0.0);
    CHECK(band.monotone_min > 0.0);
    CHECK(band.monotone_max < 10.0);
    CHECK(band.v_quadratic_min > 0.0);
    CHECK(band.v_quadratic_max < 10.0);
    CHECK(band.lipschitz_max < 10.0);
}

TEST_CASE("potential bracket with the growth constant") {
    for (Model model : {Model::A1, Model::A2}) {
        for (double p : {2.0, 2.5, 3.0, 4.0}) {
            for (double mu : {0.1, 1.0}) {
                const auto m = params(model, p, mu);
                const double k = growth_constant(m);
                for (int i = 0; i <= 60; ++i) {
                    const double t = std::pow(10.0, -3.0 + 6.0 * i / 60.0);
                    const double s = t * t + std::pow(t, p);
                    CHECK(phi(t, m) >= m.phi_dd0() / (k * p * (p - 1)) * s);
                    CHECK(phi(t, m) <= k * s / 2);
                }
            }
        }
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(params(Model::A1, 1.5, 1.0).validate(), DomainError);
    CHECK_THROWS_AS(params(Model::A1, 3.0, 0.0).validate(), DomainError);
    ModelParams m;
    m.d = 4;
    CHECK_THROWS_AS(m.validate(), DomainError);
    CHECK(parse_model("A1") == Model::A1);
    CHECK_THROWS_AS(parse_model("A3"), DomainError);
}
