#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "plap/calibrated_constants.hpp"
#include "plap/errors.hpp"
#include "plap/field_norms.hpp"
#include "plap/regularity_analyzer.hpp"

using namespace plap;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams linear_model() {
    ModelParams m;
    m.model = Model::A2;
    m.p = 2.0;
    m.mu = 1.0;
    return m;
}

// p = 2 eigenfield on n = 16, shared by several cases
const Trajectory& eigen_run() {
    static const Trajectory tr = solve(eigenfield(TorusGrid(16)), 1.6, 2e-3, linear_model());
    return tr;
}

Trajectory zero_run(double t_final = 1.6, double dt = 2e-3) {
    const TorusGrid g(16);
    return solve(SpatialField(g), t_final, dt, linear_model());
}

SpaceRow linf_l2(double predicted) {
    SpaceRow s;
    s.name = "test";
    s.time_p = kInfinity;
    s.x_norm = NormSpec::L(2);
    s.predicted = predicted;
    return s;
}

}  // namespace

TEST_CASE("restriction of the zero trajectory and norm monotonicity") {
    // the time window scales with r^2, so the widest ball needs a long run
    const Trajectory z = zero_run(16.0, 0.1);
    const SubCylinder widest{kPi, kPi, 8.0, 0.8 * kPi - 1e-9};
    const auto f = restrict(z, widest);
    CHECK(f.count() > 0);
    for (const auto& s : f.values)
        for (double x : s) CHECK(x == 0.0);

    const auto& tr = eigen_run();
    const SubCylinder cyl{kPi, kPi, 0.8, 0.5};
    const auto u = restrict(tr, cyl);
    const SnapshotNorm local(u, NormSpec::L(2));
    const std::size_t first = static_cast<std::size_t>(std::lround(u.t0 / tr.dt));
    for (std::size_t i = 0; i < u.count(); ++i) {
        CHECK(u.values[i] == tr.snapshots[first + i].data());
        CHECK(local(u.values[i]) <= spatial_norm(tr.snapshots[first + i], NormSpec::L(2)));
    }
    CHECK(u.t0 >= 0.8 - 0.25 - 1e-12);
    CHECK(u.interval_len() <= 0.5 + 1e-12);
}

TEST_CASE("ball node count matches direct enumeration") {
    const TorusGrid g(32);
    for (double r : {0.3, 0.7, 1.9}) {
        const auto reg = Region::ball(g, 1.0, 5.5, r);
        std::size_t count = 0;
        for (int i = 0; i < g.n(); ++i) {
            for (int j = 0; j < g.n(); ++j) {
                double dx = std::abs(g.coord(i) - 1.0), dy = std::abs(g.coord(j) - 5.5);
                dx = std::min(dx, 2 * kPi - dx);
                dy = std::min(dy, 2 * kPi - dy);
                if (dx * dx + dy * dy <= r * r) ++count;
            }
        }
        CHECK(reg.nodes.size() == count);
    }
}

TEST_CASE("geometry errors") {
    const auto& tr = eigen_run();
    CHECK_THROWS_AS(restrict(tr, SubCylinder{kPi, kPi, 0.8, 2.6}), GeometryError);
    CHECK_THROWS_AS(restrict(tr, SubCylinder{kPi, kPi, 0.8, 1.0}), GeometryError);
    CHECK_THROWS_AS(restrict(tr, SubCylinder{kPi, kPi, 0.2, 0.3}), GeometryError);
    CHECK_THROWS_AS(restrict(tr, SubCylinder{kPi, kPi, 0.8, 0.0}), GeometryError);
    CHECK_NOTHROW(restrict(tr, SubCylinder{kPi, kPi, 0.8, 0.75}));
}

TEST_CASE("exponent estimates") {
    std::vector<double> h, lin, sq, cst(4, 0.0);
    for (int k = 1; k <= 8; k *= 2) {
        h.push_back(k / 1024.0);
        lin.push_back(k / 1024.0);
    }
    const auto fit = estimate_exponent(h, lin);
    CHECK(fit.alpha_hat == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    CHECK(std::isinf(estimate_exponent(h, cst).alpha_hat));
    CHECK_THROWS_AS(estimate_exponent(std::span(h).first(3), std::span(lin).first(3)), InsufficientResolutionError);

    // |t - t0|^beta sampled at 2^12 points with t0 on a node, first differences in sup norm
    const std::size_t n = 1 << 12;
    for (double beta : {0.25, 0.5, 0.75}) {
        std::vector<double> s(n + 1);
        for (std::size_t i = 0; i <= n; ++i) s[i] = std::pow(std::abs(static_cast<double>(i) / n - 0.5), beta);
        const auto f = TimeGridFunction::scalar(s, 0.0, 1.0 / n);
        const auto ks = dyadic_steps(f, 1, 0.125);
        std::vector<double> hs, norms;
        for (auto k : ks) {
            hs.push_back(static_cast<double>(k) / n);
            norms.push_back(difference_norm(f, 1, k, kInfinity, NormSpec::euclid()));
        }
        CHECK(std::abs(estimate_exponent(hs, norms).alpha_hat - beta) <= 0.05);
    }
}

TEST_CASE("dyadic steps need four points") {
    const auto f = TimeGridFunction::scalar(std::vector<double>(40, 1.0), 0.0, 0.01);
    CHECK_THROWS_AS(dyadic_steps(f, 1, 0.125), InsufficientResolutionError);
    const auto ks = dyadic_steps(TimeGridFunction::scalar(std::vector<double>(200, 1.0), 0.0, 0.001), 2, 0.125);
    CHECK(ks == std::vector<std::size_t>{2, 4, 8, 16, 32, 64});
}

TEST_CASE("analytic trajectory saturates at the difference order") {
    const auto& tr = eigen_run();
    const SubCylinder cyl{kPi, kPi, 0.8, 0.5};
    const double grid[] = {0.5};
    const auto rows = seminorm_sweep(tr, cyl, {linf_l2(0.5), linf_l2(1.5)}, 0.125, grid);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].r == 1);
    CHECK(rows[1].r == 2);
    CHECK(rows[0].fit.alpha_hat == doctest::Approx(1.0).epsilon(0.02));
    CHECK(rows[1].fit.alpha_hat == doctest::Approx(2.0).epsilon(0.02));
    CHECK(rows[0].fit.r_squared > 0.999);
    CHECK(rows[0].floor_ok);
    CHECK(rows[1].floor_ok);

    // a stationary trajectory has vanishing seminorms
    const auto zr = seminorm_sweep(zero_run(), SubCylinder{kPi, kPi, 0.8, 0.5}, {linf_l2(0.5)}, 0.125, grid);
    CHECK(std::isinf(zr[0].fit.alpha_hat));
    CHECK(zr[0].seminorms[0].second == 0.0);
}

TEST_CASE("seminorms grow with the cylinder") {
    const auto& tr = eigen_run();
    const double grid[] = {0.25, 0.75};
    SpaceRow l2 = linf_l2(0.5);
    l2.time_p = 2.0;
    const std::vector<SpaceRow> rows{linf_l2(0.5), l2};
    const auto small = seminorm_sweep(tr, SubCylinder{kPi, kPi, 0.8, 0.4}, rows, 0.125, grid);
    const auto big = seminorm_sweep(tr, SubCylinder{kPi, kPi, 0.8, 0.7}, rows, 0.125, grid);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::size_t m = std::min(small[r].h.size(), big[r].h.size());
        for (std::size_t i = 0; i < m; ++i) {
            REQUIRE(small[r].h[i] == big[r].h[i]);
            CHECK(small[r].norms[i] <= big[r].norms[i]);
        }
    }
}

TEST_CASE("V(Du) is applied before differencing") {
    const auto& tr = eigen_run();
    const SubCylinder cyl{kPi, kPi, 0.8, 0.5};
    const auto v = v_field(tr, cyl);
    const std::size_t first = static_cast<std::size_t>(std::lround(v.t0 / tr.dt));
    for (std::size_t i = 0; i < v.count(); i += 37)
        CHECK(v.values[i] == apply_v_map(sym_gradient(tr.snapshots[first + i]), tr.model).data());
    const auto d = higher_difference(v, 1, 4 * tr.dt);
    for (std::size_t i = 0; i < d.count(); i += 41) {
        const auto a = apply_v_map(sym_gradient(tr.snapshots[first + i + 4]), tr.model).data();
        const auto b = apply_v_map(sym_gradient(tr.snapshots[first + i]), tr.model).data();
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(d.values[i][k] == a[k] - b[k]);
    }
}

TEST_CASE("Caccioppoli check structure") {
    const auto& tr = eigen_run();
    const auto [first, last] = interior_window(tr);
    CHECK(first >= 1);
    CHECK(static_cast<double>(first) * tr.dt >= 0.16 - 1e-12);
    const auto a = check_theorem2(tr, kPi, kPi, 0.5, 0.75, first, last, calibrated::kCaccioppoli);
    const auto b = check_theorem2(tr, kPi, kPi, 0.5, 1.0, first, last, calibrated::kCaccioppoli);
    CHECK(a.lhs == b.lhs);
    CHECK(a.lhs > 0);
    CHECK(a.applicable);
    CHECK(a.passed);
    // the outer ball fixed, the gap halved
    const auto c = check_theorem2(tr, kPi, kPi, 0.25, 1.0, first, last, 1.0);
    const auto e = check_theorem2(tr, kPi, kPi, 0.625, 1.0, first, last, 1.0);
    CHECK(e.rhs == doctest::Approx(4 * c.rhs).epsilon(1e-12));

    const Trajectory z = zero_run();
    const auto [zf, zl] = interior_window(z);
    const auto zr = check_theorem2(z, kPi, kPi, 0.5, 0.75, zf, zl, calibrated::kCaccioppoli);
    CHECK(zr.lhs == 0.0);
    CHECK(zr.rhs == 0.0);
    CHECK(zr.passed);

    CHECK_THROWS_AS(check_theorem2(tr, kPi, kPi, 0.75, 0.5, first, last, 1.0), PreconditionError);
    CHECK_THROWS_AS(check_theorem2(tr, kPi, kPi, 0.5, 2.7, first, last, 1.0), GeometryError);
}

TEST_CASE("nested-cylinder check preconditions") {
    const auto& tr = eigen_run();
    const SubCylinder inner{kPi, kPi, 0.8, 0.5};
    // p = 2 is the heat regime with bound 3/2
    CHECK_THROWS_AS(check_theorem1(tr, tr, inner, 0.75, 1.6, 0.125), PreconditionError);
    CHECK_THROWS_AS(check_theorem1(tr, tr, inner, 0.4, 1.0, 0.125), PreconditionError);
    const auto res = check_theorem1(tr, tr, inner, 0.75, 1.0, 0.125);
    CHECK(res.regime == RegimeKind::Heat);
    CHECK(res.passed);
    for (const auto& row : res.rows) CHECK(row.growth == 1.0);
    CHECK(std::isfinite(res.kappa_hat));
}

TEST_CASE("sweep csv layout") {
    const auto& tr = eigen_run();
    const double grid[] = {0.25, 0.5};
    const auto rows = seminorm_sweep(tr, SubCylinder{kPi, kPi, 0.8, 0.5}, {linf_l2(0.5)}, 0.125, grid);
    CHECK(sweep_csv_header() ==
          "space,quantity,time_p,x_norm,r,alpha,seminorm,alpha_hat,r_squared,h_min,h_max,predicted,floor_ok,lower_bound");
    CHECK(sweep_csv_rows(rows[0]).size() == 2);
    const std::string plot = plot_data(rows[0]);
    CHECK(std::count(plot.begin(), plot.end(), '\n') == static_cast<long>(rows[0].h.size()) + 2);
    CHECK(plot.rfind("# test r=1\n", 0) == 0);
}

TEST_CASE("space lists follow the regime") {
    for (const auto& row : predicted_spaces(3.0, 2)) CHECK(row.predicted >= 0);
    const auto frac = predicted_spaces(4.0, 2);
    const double g0 = gamma0(4.0, 2);
    bool has_v = false;
    for (const auto& row : frac) {
        CHECK(row.predicted <= 1 + g0 + 1e-12);
        has_v = has_v || row.of_v;
    }
    CHECK(has_v);
}
