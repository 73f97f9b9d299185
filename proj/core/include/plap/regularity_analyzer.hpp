#pragma once

// Time regularity of computed trajectories on interior parabolic cylinders
// Q_r(z) = B_r(x0) x [t0 - r^2, t0 + r^2]: dyadic seminorm sweeps, slope
// estimates of |Delta_h^r u| ~ h^alpha, and the two interior estimates
// (nested-cylinder bound for the seminorms, stationary Caccioppoli bound).

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "plap/exponent_engine.hpp"
#include "plap/function_spaces.hpp"
#include "plap/pde_solver.hpp"

namespace plap {

/// Interior margin as a fraction of the domain extent, per axis.
inline constexpr double kInteriorMargin = 0.1;

struct SubCylinder {
    double x0 = 0.0;
    double y0 = 0.0;
    double t0 = 0.0;
    double r = 0.0;

    double time_halfwidth() const noexcept { return r * r; }
};

/// Exponent bound of the regime: gamma_0 when fractional, gamma_1 otherwise.
double regime_bound(double p, int d);

/// Throws GeometryError unless B_r plus the spatial margin fits in a period
/// cell and the time window lies in [m T, (1 - m) T].
void check_geometry(const Trajectory& traj, const SubCylinder& cyl);

/// Snapshots whose time lies in the cylinder's window; norms are restricted to B_r.
TimeGridFunction restrict(const Trajectory& traj, const SubCylinder& cyl);
/// V(Du) on the same samples, as a symmetric-tensor field restricted to B_r.
TimeGridFunction v_field(const Trajectory& traj, const SubCylinder& cyl);

/// A space X-valued N^{alpha,p} (or W^{k,p}) in which u or V(Du) is measured.
struct SpaceRow {
    std::string name;
    /// Measured quantity is V(Du) rather than u.
    bool of_v = false;
    double time_p = 2.0;
    NormSpec x_norm = NormSpec::L(2);
    /// Exponent the membership is predicted for (any alpha below it).
    double predicted = 0.0;
    /// Integer Sobolev order (W^{k,p} rows); -1 for Nikolskii rows.
    int sobolev_order = -1;

    /// Difference order used by the sweep: [predicted] + 1.
    int order() const noexcept { return natural_order(predicted); }
};

/// Space lists for smooth-data predictions: the full-derivative list for
/// 2 <= p < 2 + 2/sqrt(d+1), the fractional list with gamma_0 otherwise.
/// Rows without a discrete counterpart (second spatial derivatives) are omitted.
std::vector<SpaceRow> predicted_spaces(double p, int d = 2);

/// Dyadic step counts k = 2, 4, 8, ... with k dt <= delta and r k < count - 1.
/// Throws InsufficientResolutionError when fewer than four remain.
std::vector<std::size_t> dyadic_steps(const TimeGridFunction& f, int r, double delta);

struct ExponentFit {
    /// +infinity when all differences vanish.
    double alpha_hat = 0.0;
    double r_squared = 1.0;
};

/// Least-squares slope of log norm against log h. Needs at least four points.
ExponentFit estimate_exponent(std::span<const double> h, std::span<const double> norms);

struct SweepRow {
    SpaceRow space;
    int r = 1;
    std::vector<double> h;
    std::vector<double> norms;
    ExponentFit fit;
    /// (alpha, max over the dyadic h of h^{-alpha} |Delta_h^r|) for each alpha of the grid.
    std::vector<std::pair<double, double>> seminorms;
    bool floor_ok = false;
    /// Spatial norm is a dictionary lower bound.
    bool lower_bound = false;
};

/// Predicted-floor tolerance: alpha_hat >= predicted - kFloorTolerance.
inline constexpr double kFloorTolerance = 0.15;

SweepRow sweep_row(const TimeGridFunction& u, const TimeGridFunction& v, const SpaceRow& space, double delta,
                   std::span<const double> alpha_grid);
std::vector<SweepRow> seminorm_sweep(const Trajectory& traj, const SubCylinder& cyl, const std::vector<SpaceRow>& rows,
                                     double delta, std::span<const double> alpha_grid);

struct Theorem1Row {
    std::string name;
    double coarse = 0.0;
    double fine = 0.0;
    /// fine / coarse
    double growth = 0.0;
    bool stable = false;
};

struct Theorem1Result {
    RegimeKind regime = RegimeKind::Heat;
    double alpha = 0.0;
    double bound = 0.0;
    std::vector<Theorem1Row> rows;
    double lhs = 0.0;
    /// (1 + |u|_{L^inf L^2(Q_R)} + |u|_{L^p W^{1,p}(Q_R)}) / (R - r)
    double bundle = 0.0;
    /// log(lhs) / log(bundle)
    double kappa_hat = 0.0;
    bool passed = false;
};

/// Refinement growth limit for the left-hand-side norms.
inline constexpr double kRefinementGrowth = 1.5;

/// Left-hand-side norms of the applicable case on Q_r for the trajectory and
/// its time refinement, and the data bundle on Q_R (same center). Throws
/// PreconditionError when alpha is not below the regime's bound or R <= r.
Theorem1Result check_theorem1(const Trajectory& coarse, const Trajectory& fine, const SubCylinder& inner, double R,
                              double alpha, double delta);

struct Theorem2Result {
    double lhs = 0.0;
    double rhs = 0.0;
    double observed = 0.0;
    double c_frozen = 0.0;
    /// max / median of |u_t|_{L^2(B_R)} over the window
    double ut_ratio = 0.0;
    bool applicable = true;
    bool passed = false;
};

/// Inapplicable when u_t is non-finite or max / median of |u_t| exceeds this.
inline constexpr double kTimeDerivativeSpread = 10.0;

/// Sample indices of the interior time window [m T, (1 - m) T].
std::pair<std::size_t, std::size_t> interior_window(const Trajectory& traj);

/// lhs = max over the window of h^2 sum_{B_r} (|grad V(Du)|^2 + phi''(0) |grad Du|^2);
/// rhs = (1 + 1/phi''(0)) / (R - r)^2 max h^2 sum_{B_R} (phi(|grad u|) + |u_t|^2),
/// u_t the backward divided difference. passed: lhs <= c_frozen rhs.
Theorem2Result check_theorem2(const Trajectory& traj, double x0, double y0, double r, double R, std::size_t first,
                              std::size_t last, double c_frozen);

struct RegularityReport {
    std::vector<SweepRow> sweep;
    Regime regime;
    double gamma0 = std::numeric_limits<double>::quiet_NaN();
    double gamma1 = std::numeric_limits<double>::quiet_NaN();
};

std::string sweep_csv_header();
std::vector<std::string> sweep_csv_rows(const SweepRow& row);
/// Whitespace two-column "log_h log_norm" lines.
std::string plot_data(const SweepRow& row);

}  // namespace plap
