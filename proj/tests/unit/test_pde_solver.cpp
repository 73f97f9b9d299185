#include <cmath>
#include <random>

#include "doctest.h"
#include "plap/errors.hpp"
#include "plap/field_norms.hpp"
#include "plap/pde_solver.hpp"

using namespace plap;

namespace {

ModelParams model(Model m, double p, double mu) {
    ModelParams out;
    out.model = m;
    out.p = p;
    out.mu = mu;
    return out;
}

double l2_diff(const SpatialField& a, const SpatialField& b) {
    SpatialField d(a.grid());
    for (std::size_t k = 0; k < d.data().size(); ++k) d.data()[k] = a.data()[k] - b.data()[k];
    return spatial_norm(d, NormSpec::L(2));
}

}  // namespace

TEST_CASE("constant state is a fixed point") {
    const TorusGrid g(16);
    SpatialField u(g);
    for (std::size_t k = 0; k < g.points(); ++k) {
        u.component(0)[k] = 1.5;
        u.component(1)[k] = -0.25;
    }
    StepDiagnostics diag;
    const auto next = step(u, 0.01, model(Model::A2, 3.0, 1.0), &diag);
    CHECK(next.data() == u.data());
    CHECK(diag.newton_iterations == 0);
}

TEST_CASE("linear eigenfield decays by the discrete rate") {
    const TorusGrid g(32);
    const auto u0 = eigenfield(g);
    const double dt = 0.01;
    StepDiagnostics diag;
    const auto u1 = step(u0, dt, model(Model::A2, 2.0, 1.0), &diag);
    const double factor = 1.0 / (1.0 + eigenfield_rate(g) * dt);
    double err = 0.0;
    for (std::size_t k = 0; k < u1.data().size(); ++k) err = std::max(err, std::abs(u1.data()[k] - factor * u0.data()[k]));
    CHECK(err < 1e-10);
    CHECK(diag.newton_iterations <= 2);
}

TEST_CASE("p = 3 step converges quickly from smooth data") {
    const TorusGrid g(32);
    const auto u0 = random_smooth(g, 17, 4);
    StepDiagnostics diag;
    step(u0, 1e-3, model(Model::A2, 3.0, 1.0), &diag);
    CHECK(diag.newton_iterations <= 10);
    CHECK(diag.residual < 1e-10 * (1 + u0.max_abs()));
}

TEST_CASE("Jacobian matches finite differences of the residual") {
    const TorusGrid g(16);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> gauss;
    for (Model m : {Model::A1, Model::A2}) {
        const auto params = model(m, 3.0, 0.5);
        Stepper stepper(g, params);
        const auto u_prev = random_smooth(g, 5, 3, 2.0);
        const auto u = random_smooth(g, 6, 3, 2.0);
        const double dt = 0.05;
        for (int dir = 0; dir < 20; ++dir) {
            SpatialField v(g);
            for (double& x : v.data()) x = gauss(rng);
            const double eps = 1e-6;
            SpatialField up = u, um = u;
            for (std::size_t k = 0; k < v.data().size(); ++k) {
                up.data()[k] += eps * v.data()[k];
                um.data()[k] -= eps * v.data()[k];
            }
            const auto fp = stepper.residual(up, u_prev, dt), fm = stepper.residual(um, u_prev, dt);
            const auto jv = stepper.jacobian_apply(u, v, dt);
            double diff = 0.0, scale = 0.0;
            for (std::size_t k = 0; k < v.data().size(); ++k) {
                const double fd = (fp.data()[k] - fm.data()[k]) / (2 * eps);
                diff = std::max(diff, std::abs(fd - jv.data()[k]));
                scale = std::max(scale, std::abs(jv.data()[k]));
            }
            CHECK(diff <= 1e-5 * scale);
        }
    }
}

TEST_CASE("zero data gives the zero trajectory") {
    const TorusGrid g(8);
    const auto tr = solve(SpatialField(g), 0.1, 0.01, model(Model::A1, 3.0, 1.0));
    CHECK(tr.steps() == 10);
    for (const auto& s : tr.snapshots) CHECK(s.max_abs() == 0.0);
    for (const auto& d : tr.diagnostics) CHECK(d.energy == 0.0);
    CHECK_THROWS_AS(solve(SpatialField(g), 0.105, 0.01, model(Model::A1, 3.0, 1.0)), DomainError);
}

TEST_CASE("dissipation, mean preservation and vanishing forcing") {
    const TorusGrid g(16);
    const auto params = model(Model::A2, 3.0, 1.0);
    auto u0 = random_smooth(g, 21, 3, 1.5);
    for (std::size_t k = 0; k < g.points(); ++k) u0.component(0)[k] += 0.3;
    const double dt = 2e-3;
    const auto tr = solve(u0, 200 * dt, dt, params);
    REQUIRE(tr.diagnostics.size() == 200);
    double prev = tr.initial_energy;
    int violations = 0;
    Stepper stepper(g, params);
    for (std::size_t k = 0; k < tr.diagnostics.size(); ++k) {
        if (tr.diagnostics[k].energy > prev) ++violations;
        prev = tr.diagnostics[k].energy;
        const auto f = stepper.residual(tr.snapshots[k + 1], tr.snapshots[k], dt);
        CHECK(f.max_abs() < 1e-10 * (1 + tr.snapshots[k].max_abs()));
    }
    CHECK(violations == 0);
    for (int c = 0; c < 2; ++c) CHECK(std::abs(mean(tr.snapshots.back(), c) - mean(u0, c)) < 1e-13);
}

TEST_CASE("linear case converges to the exact solution") {
    const double t_final = 0.25;
    double prev = 0.0;
    for (int n : {16, 32}) {
        const TorusGrid g(n);
        const double dt = t_final / std::round(t_final / (0.5 * g.h() * g.h()));
        const auto u0 = eigenfield(g);
        const auto tr = solve(u0, t_final, dt, model(Model::A2, 2.0, 1.0));
        SpatialField exact = u0;
        for (double& v : exact.data()) v *= std::exp(-t_final);
        const double err = l2_diff(tr.snapshots.back(), exact);
        if (prev > 0.0) CHECK(std::log2(prev / err) > 1.8);
        prev = err;
    }
}

TEST_CASE("solver failure carries the residual history") {
    const TorusGrid g(16);
    SolverOptions opts;
    opts.max_iterations = 1;
    const auto u0 = kink_field(g, 5.0);
    Trajectory partial;
    try {
        solve(u0, 0.1, 0.05, model(Model::A1, 4.0, 0.1), opts, &partial);
        FAIL("expected a solver failure");
    } catch (const SolverFailure& e) {
        CHECK(e.step_index() == 1);
        CHECK(e.residuals().size() == 2);
        CHECK_FALSE(partial.complete);
        CHECK(partial.snapshots.size() == 1);
    }
}
