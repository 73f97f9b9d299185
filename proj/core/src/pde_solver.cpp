#include "plap/pde_solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "plap/errors.hpp"

namespace plap {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Vector = Eigen::VectorXd;

double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Symmetric gradient as a (3N x 2N) matrix, plane-major rows (11, 12, 22).
SparseMatrix gradient_matrix(const TorusGrid& g) {
    const int n = g.n();
    const auto np = static_cast<Eigen::Index>(g.points());
    const double c = 1.0 / (2.0 * g.h());
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(8 * np));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const auto k = static_cast<Eigen::Index>(g.index(i, j));
            const auto ip = static_cast<Eigen::Index>(g.index(i + 1, j));
            const auto im = static_cast<Eigen::Index>(g.index(i - 1, j));
            const auto jp = static_cast<Eigen::Index>(g.index(i, j + 1));
            const auto jm = static_cast<Eigen::Index>(g.index(i, j - 1));
            t.emplace_back(k, ip, c);
            t.emplace_back(k, im, -c);
            t.emplace_back(np + k, jp, 0.5 * c);
            t.emplace_back(np + k, jm, -0.5 * c);
            t.emplace_back(np + k, np + ip, 0.5 * c);
            t.emplace_back(np + k, np + im, -0.5 * c);
            t.emplace_back(2 * np + k, np + jp, c);
            t.emplace_back(2 * np + k, np + jm, -c);
        }
    }
    SparseMatrix m(3 * np, 2 * np);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

}  // namespace

struct Stepper::Impl {
    TorusGrid grid;
    ModelParams model;
    SolverOptions options;
    SparseMatrix g;
    SparseMatrix gt;
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
    Eigen::SimplicialLDLT<SparseMatrix> ldlt;
    Eigen::Index analyzed_nnz = -1;

    Impl(const TorusGrid& grid_, ModelParams model_, SolverOptions options_)
        : grid(grid_), model(model_), options(options_), g(gradient_matrix(grid_)), gt(g.transpose()) {
        cg.setTolerance(1e-13);
    }

    // J is SPD and, for parabolic step sizes, well conditioned; Jacobi-preconditioned
    // CG is tried first and the sparse LDL^T factorization is the fallback.
    Vector solve_newton_system(const SparseMatrix& j, const Vector& rhs, const std::vector<double>& history) {
        cg.setMaxIterations(std::max<Eigen::Index>(200, j.rows() / 8));
        cg.compute(j);
        Vector x = cg.solve(rhs);
        if (cg.info() == Eigen::Success) return x;
        if (j.nonZeros() != analyzed_nnz) {
            ldlt.analyzePattern(j);
            analyzed_nnz = j.nonZeros();
        }
        ldlt.factorize(j);
        if (ldlt.info() != Eigen::Success) throw SolverFailure("Newton system factorization failed", history);
        return ldlt.solve(rhs);
    }

    // Pointwise stress tangent in the weighted form W dA/dQ, assembled block-diagonally.
    SparseMatrix tangent_matrix(const SpatialField& u) const {
        const SymTensorField du = sym_gradient(u);
        const std::size_t np = grid.points();
        const auto n = static_cast<Eigen::Index>(np);
        std::vector<Triplet> t;
        t.reserve(9 * np);
        for (std::size_t k = 0; k < np; ++k) {
            const double q11 = du.plane(0)[k], q12 = du.plane(1)[k], q22 = du.plane(2)[k];
            const double norm = std::sqrt(q11 * q11 + 2.0 * q12 * q12 + q22 * q22);
            const StressTangent tg = stress_tangent(norm, model);
            const double wq[3] = {q11, 2.0 * q12, q22};
            const double w[3] = {1.0, 2.0, 1.0};
            const auto kk = static_cast<Eigen::Index>(k);
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    double v = tg.rank_one * wq[a] * wq[b];
                    if (a == b) v += tg.scalar * w[a];
                    t.emplace_back(a * n + kk, b * n + kk, v);
                }
            }
        }
        SparseMatrix m(3 * n, 3 * n);
        m.setFromTriplets(t.begin(), t.end());
        return m;
    }

    SparseMatrix jacobian(const SpatialField& u, double dt) const {
        SparseMatrix j = dt * (gt * (tangent_matrix(u) * g));
        const auto n = j.rows();
        SparseMatrix id(n, n);
        id.setIdentity();
        j += id;
        return j;
    }

    SpatialField residual(const SpatialField& u, const SpatialField& u_prev, double dt) const {
        const SpatialField div = divergence(apply_stress(sym_gradient(u), model));
        SpatialField f(grid);
        auto& fd = f.data();
        const auto& ud = u.data();
        const auto& pd = u_prev.data();
        for (std::size_t k = 0; k < fd.size(); ++k) fd[k] = ud[k] - pd[k] - dt * div.data()[k];
        return f;
    }
};

Stepper::Stepper(const TorusGrid& grid, ModelParams model, SolverOptions options) {
    model.validate();
    if (model.d != 2) throw DomainError("the solver is two-dimensional");
    if (!(options.tolerance > 0.0) || options.max_iterations < 1) throw DomainError("invalid solver options");
    impl_ = std::make_unique<Impl>(grid, model, options);
}

Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;
Stepper& Stepper::operator=(Stepper&&) noexcept = default;

SpatialField Stepper::residual(const SpatialField& u, const SpatialField& u_prev, double dt) const {
    return impl_->residual(u, u_prev, dt);
}

SpatialField Stepper::jacobian_apply(const SpatialField& u, const SpatialField& v, double dt) const {
    const SparseMatrix j = impl_->jacobian(u, dt);
    const Eigen::Map<const Vector> x(v.data().data(), static_cast<Eigen::Index>(v.data().size()));
    const Vector y = j * x;
    return SpatialField(impl_->grid, std::vector<double>(y.data(), y.data() + y.size()));
}

SpatialField Stepper::step(const SpatialField& u_prev, double dt, StepDiagnostics* diag) {
    Impl& s = *impl_;
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time step dt must be positive");
    if (!(u_prev.grid() == s.grid)) throw DomainError("field and stepper live on different grids");
    if (!u_prev.all_finite()) throw DomainError("non-finite entries in the previous state");

    const double tol = s.options.tolerance * (1.0 + u_prev.max_abs());
    SpatialField u = u_prev;
    SpatialField f = s.residual(u, u_prev, dt);
    double r = sup_norm(f.data());
    std::vector<double> history{r};
    int iterations = 0;

    while (!(r < tol)) {
        if (iterations >= s.options.max_iterations)
            throw SolverFailure("Newton iteration did not converge in " + std::to_string(iterations) + " iterations",
                                history);
        const SparseMatrix j = s.jacobian(u, dt);
        const Eigen::Map<const Vector> rhs(f.data().data(), static_cast<Eigen::Index>(f.data().size()));
        const Vector delta = s.solve_newton_system(j, -rhs, history);

        double lambda = 1.0;
        SpatialField trial(s.grid);
        SpatialField f_trial(s.grid);
        double r_trial = 0.0;
        for (int halving = 0; halving <= s.options.max_halvings; ++halving) {
            for (std::size_t k = 0; k < trial.data().size(); ++k)
                trial.data()[k] = u.data()[k] + lambda * delta[static_cast<Eigen::Index>(k)];
            f_trial = s.residual(trial, u_prev, dt);
            r_trial = all_finite(f_trial.data()) ? sup_norm(f_trial.data()) : std::numeric_limits<double>::infinity();
            if (r_trial < r) break;
            lambda *= 0.5;
        }
        if (!std::isfinite(r_trial)) throw SolverFailure("Newton iterate became non-finite", history);
        u = std::move(trial);
        f = std::move(f_trial);
        r = r_trial;
        history.push_back(r);
        ++iterations;
    }

    if (diag) {
        diag->newton_iterations = iterations;
        diag->residual = r;
        diag->energy = energy(u, s.model);
        diag->residual_history = std::move(history);
    }
    return u;
}

SpatialField step(const SpatialField& u_prev, double dt, const ModelParams& model, StepDiagnostics* diag,
                  const SolverOptions& options) {
    Stepper stepper(u_prev.grid(), model, options);
    return stepper.step(u_prev, dt, diag);
}

std::size_t step_count_for(double t_final, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time step dt must be positive");
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw DomainError("final time must be nonnegative");
    const double ratio = t_final / dt;
    const double k = std::round(ratio);
    if (std::abs(ratio - k) > 1e-9 * std::max(1.0, k)) throw DomainError("T_final must be an integer multiple of dt");
    return static_cast<std::size_t>(k);
}

Trajectory solve(const SpatialField& u0, double t_final, double dt, const ModelParams& model,
                 const SolverOptions& options, Trajectory* partial) {
    const std::size_t steps = step_count_for(t_final, dt);
    Stepper stepper(u0.grid(), model, options);
    Trajectory tr;
    tr.grid = u0.grid();
    tr.dt = dt;
    tr.model = model;
    tr.snapshots.reserve(steps + 1);
    tr.snapshots.push_back(u0);
    tr.diagnostics.reserve(steps);
    tr.initial_energy = energy(u0, model);
    for (std::size_t k = 0; k < steps; ++k) {
        StepDiagnostics diag;
        try {
            tr.snapshots.push_back(stepper.step(tr.snapshots.back(), dt, &diag));
        } catch (const SolverFailure& e) {
            const int index = static_cast<int>(k + 1);
            if (partial) {
                tr.complete = false;
                tr.status = "failed at step " + std::to_string(index);
                *partial = std::move(tr);
            }
            throw SolverFailure(std::string(e.what()) + " (step " + std::to_string(index) + ")", e.residuals(), index);
        }
        tr.diagnostics.push_back(std::move(diag));
    }
    return tr;
}

// ---------------------------------------------------------------------------
// Initial data

SpatialField eigenfield(const TorusGrid& grid, double amplitude) {
    SpatialField u(grid);
    for (int i = 0; i < grid.n(); ++i) {
        for (int j = 0; j < grid.n(); ++j) {
            const double x = grid.coord(i), y = grid.coord(j);
            u(0, i, j) = amplitude * std::sin(x) * std::cos(y);
            u(1, i, j) = -amplitude * std::cos(x) * std::sin(y);
        }
    }
    return u;
}

double eigenfield_rate(const TorusGrid& grid) {
    const double s = std::sin(grid.h()) / grid.h();
    return s * s;
}

SpatialField random_smooth(const TorusGrid& grid, std::uint64_t seed, int cutoff, double amplitude) {
    if (cutoff < 1 || cutoff >= grid.n() / 2) throw DomainError("cutoff must lie in [1, n/2)");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpatialField u(grid);
    for (int c = 0; c < 2; ++c) {
        for (int k1 = -cutoff; k1 <= cutoff; ++k1) {
            for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
                if (k1 == 0 && k2 == 0) continue;
                const double decay = 1.0 / (1.0 + k1 * k1 + k2 * k2);
                const double a = gauss(rng) * decay, b = gauss(rng) * decay;
                for (int i = 0; i < grid.n(); ++i) {
                    for (int j = 0; j < grid.n(); ++j) {
                        const double arg = k1 * grid.coord(i) + k2 * grid.coord(j);
                        u(c, i, j) += a * std::cos(arg) + b * std::sin(arg);
                    }
                }
            }
        }
    }
    const double m = u.max_abs();
    if (m > 0.0)
        for (double& v : u.data()) v *= amplitude / m;
    return u;
}

SpatialField kink_field(const TorusGrid& grid, double amplitude) {
    const double pi = std::numbers::pi;
    auto tri = [pi](double s) { return std::abs(s - pi) - 0.5 * pi; };
    SpatialField u(grid);
    for (int i = 0; i < grid.n(); ++i) {
        for (int j = 0; j < grid.n(); ++j) {
            u(0, i, j) = amplitude * tri(grid.coord(j));
            u(1, i, j) = amplitude * tri(grid.coord(i));
        }
    }
    return u;
}

}  // namespace plap
