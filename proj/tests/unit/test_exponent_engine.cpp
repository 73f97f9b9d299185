#include <cmath>

#include "doctest.h"
#include "plap/exponent_engine.hpp"

using namespace plap;

TEST_CASE("gamma values") {
    CHECK(gamma0(3.0, 3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gamma0(4.0, 2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(gamma0(Rational(3), 3) == Rational(1));
    CHECK(gamma0(Rational(4), 2) == Rational(1, 2));
    for (int d : {2, 3, 4}) {
        CHECK(gamma1(Rational(2), d) == Rational(3, 2));
        CHECK(std::abs(gamma0(regime_threshold(d), d) - 1.0) < 1e-9);
    }
    CHECK(gamma1(Rational(3), 3) == Rational(1));
    CHECK_THROWS_AS(gamma0(2.0, 2), DomainError);
    CHECK_THROWS_AS(gamma1(1.9, 2), DomainError);
    for (int d : {2, 3}) {
        const double thr = regime_threshold(d);
        for (int i = 1; i < 20; ++i) {
            const double p = 2.0 + (thr - 2.0) * i / 20.0;
            CHECK(gamma1(p, d) > 1.0);
            CHECK(gamma1(p, d) <= 1.5);
        }
    }
}

TEST_CASE("exact fixed point and boundary identities") {
    for (int d : {2, 3}) {
        for (int num = 21; num <= 60; num += 3) {
            const Rational p(num, 10);
            const auto [a, b] = recurrence(p, d);
            CHECK(b / (Rational(1) - a) == gamma0(p, d));
            CHECK(a + b == gamma1(p, d));
            CHECK(a > 0);
            CHECK(a < 1);
            CHECK(b > 0);
        }
    }
    const auto heat = recurrence(Rational(2), 3);
    CHECK(heat.A == Rational(1));
    CHECK(heat.B == Rational(1, 2));
}

TEST_CASE("classification") {
    CHECK(classify(2.0, 3).kind == RegimeKind::Heat);
    CHECK(classify(3.0, 3).kind == RegimeKind::Fractional);
    CHECK(classify(2.5, 3).kind == RegimeKind::FullDerivative);
    CHECK(classify(3.0, 2).kind == RegimeKind::FullDerivative);
    for (int d : {2, 3}) {
        const double thr = regime_threshold(d);
        CHECK(classify(thr, d).kind == RegimeKind::Fractional);
        CHECK(classify(std::nextafter(thr, 0.0), d).kind == RegimeKind::FullDerivative);
    }
    CHECK_THROWS_AS(classify(1.5, 2), DomainError);
}

TEST_CASE("iteration traces") {
    const auto heat = iterate(2.0, 3, 0.0, 1.4);
    REQUIRE(heat.alphas.size() == 3);
    CHECK(heat.alphas[0] == 0.0);
    CHECK(heat.alphas[1] == 0.5);
    CHECK(heat.alphas[2] == 1.0);
    CHECK(heat.crossed_one);
    CHECK(heat.steps == 3);
    CHECK(heat.achievable_sup == 1.5);
    CHECK_FALSE(heat.limit_finite);

    const auto exact = formal_sequence(Rational(3), 3, Rational(0), 2);
    CHECK(exact[1] == Rational(2, 9));
    CHECK(exact[2] == Rational(32, 81));

    const auto frac = iterate(3.0, 3, 0.0, 0.999);
    CHECK(frac.limit == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(frac.A == doctest::Approx(7.0 / 9));
    CHECK(frac.B == doctest::Approx(2.0 / 9));
    CHECK_FALSE(frac.crossed_one);
    for (std::size_t n = 0; n < frac.alphas.size(); ++n) {
        const double closed = frac.B * (1 - std::pow(frac.A, static_cast<double>(n))) / (1 - frac.A);
        CHECK(std::abs(frac.alphas[n] - closed) < 1e-12);
        if (n > 0) CHECK(frac.alphas[n] > frac.alphas[n - 1]);
        CHECK(frac.alphas[n] < frac.limit);
    }

    const auto p4 = iterate(4.0, 2, 0.0, 0.49);
    CHECK(p4.limit == doctest::Approx(0.5));
    CHECK(p4.alphas.back() >= 0.49);
    CHECK(p4.steps == p4.alphas.size() - 1);
    CHECK(p4.alphas[p4.steps - 1] < 0.49);

    CHECK_THROWS_AS(iterate(4.0, 2, 0.0, 0.5), UnreachableTargetError);
    CHECK_THROWS_AS(iterate(2.0, 2, 0.0, 1.5), UnreachableTargetError);
    CHECK_THROWS_AS(iterate(2.5, 3, 0.0, gamma1(2.5, 3)), UnreachableTargetError);

    // full-derivative regime crosses one and then reaches any gamma below A + B
    const auto full = iterate(3.0, 2, 0.0, 1.0);
    CHECK(full.crossed_one);
    CHECK(full.achievable_sup == doctest::Approx(gamma1(3.0, 2)));
    CHECK(full.alphas.back() <= 1.0);
    CHECK(full.crossing_value > 1.0);
}

TEST_CASE("interpolation parameters") {
    const auto zero = interp_params(Rational(0), Rational(3), 3);
    CHECK(zero.p0 == Rational(3));
    CHECK(zero.alpha_coeff == Rational(2, 3));
    CHECK(zero.alpha_shift == 0);

    const auto heat = interp_params(Rational(1), Rational(2), 2);
    CHECK(heat.alpha_coeff == 1);
    CHECK(heat.alpha_shift == Rational(1, 2));
    CHECK(heat.p0 == 2);
    REQUIRE(heat.q0.has_value());
    CHECK(*heat.q0 == 2);

    const Rational theta = natural_theta(Rational(3), 3);
    CHECK(theta == Rational(2, 3));
    const auto nat = interp_params(theta, Rational(3), 3);
    CHECK(nat.p0 == Rational(9, 4));
    CHECK(nat.next_coeff == Rational(7, 9));
    CHECK(nat.next_shift == Rational(2, 9));

    for (int d : {2, 3}) {
        for (int num = 21; num <= 60; num += 7) {
            const Rational p(num, 10);
            const auto ip = interp_params(natural_theta(p, d), p, d);
            const auto rec = recurrence(p, d);
            REQUIRE(ip.q0.has_value());
            CHECK(*ip.q0 == p);
            CHECK(ip.next_coeff == rec.A);
            CHECK(ip.next_shift == rec.B);
            const double pd = static_cast<double>(p);
            const auto ipd = interp_params(natural_theta(pd, d), pd, d);
            CHECK(std::abs(ipd.next_coeff - static_cast<double>(rec.A)) < 1e-12);
            CHECK(std::abs(ipd.next_shift - static_cast<double>(rec.B)) < 1e-12);
        }
    }
    CHECK_THROWS_AS(interp_params(1.5, 3.0, 2), DomainError);
    // the q0 formula leaves (1, inf) for theta = 0 once p >= d
    CHECK(interp_params(0.0, 3.0, 2).q0_free);
}

TEST_CASE("generic interpolation step reproduces the recurrence") {
    for (int d : {2, 3}) {
        for (double p : {2.2, 3.0, 4.5}) {
            const double alpha = 0.3;
            const double dual = p / (p - 1);
            const auto s = formal_interpolation_step(InterpolationLeg<double>{2 * alpha / p, p, p, 1},
                                                     InterpolationLeg<double>{1 + alpha, dual, dual, -1}, p, d);
            const auto rec = recurrence(p, d);
            CHECK(s.b == doctest::Approx(natural_theta(p, d) / 2));
            CHECK(s.next_alpha == doctest::Approx(rec.A * alpha + rec.B).epsilon(1e-12));
        }
    }
}

TEST_CASE("alternate interpolation leg") {
    for (int d : {2, 3, 4}) {
        const double bound = alternate_leg_bound(d);
        CHECK(std::abs(alternate_leg_gain(bound, d)) < 1e-12);
        for (double p = 2.0; p <= 6.0; p += 0.05) {
            if (std::abs(p - bound) < 1e-9) continue;
            CHECK(alternate_leg_gains(p, d) == (p <= bound));
        }
    }
}

TEST_CASE("Holder range and Sobolev exponent") {
    CHECK(holder_range(2).second == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(holder_range(3).second == doctest::Approx((9 + std::sqrt(33.0)) / 4).epsilon(1e-15));
    CHECK(holder_range(3).second == doctest::Approx(3 + (std::sqrt(33.0) - 3) / 4));
    CHECK(holder_range(2).first == 2.0);
    CHECK_THROWS_AS(holder_range(4), UnsupportedDimensionError);
    CHECK(std::isinf(sobolev_star(2)));
    CHECK(sobolev_star(3) == 6.0);
}
