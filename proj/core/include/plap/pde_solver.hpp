#pragma once

// Backward Euler for u_t = div A(Du) on the periodic square. Each step solves
//   F(u) = u - u_prev - dt div A(Du) = 0
// by Newton's method with the exact Jacobian I + dt G^T W (dA/dQ) G, where G
// is the centered-difference symmetric gradient and W = diag(1, 2, 1) weights
// the tensor planes. The Jacobian is symmetric positive definite; each Newton
// system is solved by Jacobi-preconditioned conjugate gradients, falling back
// to a sparse LDL^T factorization when CG stalls.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "plap/tensor_models.hpp"
#include "plap/torus.hpp"

namespace plap {

struct SolverOptions {
    /// Converged when |F|_inf < tolerance * (1 + |u_prev|_inf).
    double tolerance = 1e-10;
    int max_iterations = 50;
    /// Smallest damping factor tried before a non-decreasing step is accepted.
    int max_halvings = 12;
};

struct StepDiagnostics {
    int newton_iterations = 0;
    /// Final |F|_inf.
    double residual = 0.0;
    /// h^2 sum phi(|Du|) after the step.
    double energy = 0.0;
    std::vector<double> residual_history;
};

struct Trajectory {
    TorusGrid grid{8};
    double dt = 0.0;
    ModelParams model;
    /// snapshots[k] is u at time k dt; snapshots[0] is the initial datum.
    std::vector<SpatialField> snapshots;
    /// One entry per completed step.
    std::vector<StepDiagnostics> diagnostics;
    /// Energy of the initial datum.
    double initial_energy = 0.0;
    bool complete = true;
    std::string status = "ok";

    std::size_t steps() const noexcept { return snapshots.empty() ? 0 : snapshots.size() - 1; }
    double final_time() const noexcept { return dt * static_cast<double>(steps()); }
};

/// Reusable Newton solver; keeps the gradient matrix and the symbolic
/// factorization between steps on the same grid.
class Stepper {
public:
    Stepper(const TorusGrid& grid, ModelParams model, SolverOptions options = {});
    ~Stepper();
    Stepper(Stepper&&) noexcept;
    Stepper& operator=(Stepper&&) noexcept;

    /// Throws SolverFailure (carrying the residual history) after max_iterations.
    SpatialField step(const SpatialField& u_prev, double dt, StepDiagnostics* diag = nullptr);

    /// F(u) = u - u_prev - dt div A(Du).
    SpatialField residual(const SpatialField& u, const SpatialField& u_prev, double dt) const;
    /// J(u) v, evaluated through the assembled sparse Jacobian.
    SpatialField jacobian_apply(const SpatialField& u, const SpatialField& v, double dt) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

SpatialField step(const SpatialField& u_prev, double dt, const ModelParams& model, StepDiagnostics* diag = nullptr,
                  const SolverOptions& options = {});

/// Integrates to T_final = k dt. On failure throws SolverFailure with the
/// step index; when partial is non-null it receives the steps completed so far.
Trajectory solve(const SpatialField& u0, double t_final, double dt, const ModelParams& model,
                 const SolverOptions& options = {}, Trajectory* partial = nullptr);

/// Number of steps k with k dt = t_final; throws DomainError otherwise.
std::size_t step_count_for(double t_final, double dt);

// Initial data.

/// a (sin x1 cos x2, -cos x1 sin x2): divergence free, and an eigenfield of the
/// discrete operator div D with eigenvalue -(sin h / h)^2.
SpatialField eigenfield(const TorusGrid& grid, double amplitude = 1.0);
/// (sin h / h)^2: decay rate of the eigenfield under the linear law A(Q) = Q.
double eigenfield_rate(const TorusGrid& grid);
/// Random trigonometric polynomial with modes |k|_inf <= cutoff and coefficients
/// decaying like (1+|k|^2)^{-1}, scaled to sup norm amplitude.
SpatialField random_smooth(const TorusGrid& grid, std::uint64_t seed, int cutoff, double amplitude = 1.0);
/// Lipschitz field with kinks: a (tri(x2), tri(x1)), tri(s) = |s - pi| - pi/2.
SpatialField kink_field(const TorusGrid& grid, double amplitude = 1.0);

}  // namespace plap
