#pragma once

// Time-sampled Banach-space-valued functions and their discrete Bochner and
// Nikolskii-Bochner (semi)norms.
//
// A function is stored as count() samples f(t0 + i dt). Steps h are exact
// multiples k dt. Time integrals use the trapezoid rule on the sample set of
// the (shrunken) interval, so a constant c on a unit interval has L^p norm |c|.

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "plap/field_norms.hpp"

namespace plap {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct TimeGridFunction {
    /// values[i] is the snapshot at t0 + i dt (size 1 for scalar functions).
    std::vector<std::vector<double>> values;
    double t0 = 0.0;
    double dt = 1.0;
    /// Layout of the snapshots; null for scalar or plain vector data.
    std::shared_ptr<const FieldLayout> layout;

    static TimeGridFunction scalar(const std::vector<double>& samples, double t0, double dt);
    /// Samples g at t0 + i dt, i = 0..steps.
    template <class G>
    static TimeGridFunction sample(G&& g, double t0, double dt, std::size_t steps) {
        std::vector<double> s(steps + 1);
        for (std::size_t i = 0; i <= steps; ++i) s[i] = g(t0 + dt * static_cast<double>(i));
        return scalar(s, t0, dt);
    }

    std::size_t count() const noexcept { return values.size(); }
    std::size_t snapshot_size() const noexcept { return values.empty() ? 0 : values.front().size(); }
    double interval_len() const noexcept { return dt * static_cast<double>(count() > 0 ? count() - 1 : 0); }
    bool is_scalar() const noexcept { return snapshot_size() == 1 && !layout; }

    /// Throws DomainError unless dt > 0, count >= 2 and all snapshots agree in size.
    void validate() const;

    TimeGridFunction& operator*=(double c);
    TimeGridFunction& operator+=(const TimeGridFunction& o);
};

TimeGridFunction operator*(double c, TimeGridFunction f);
TimeGridFunction operator+(TimeGridFunction f, const TimeGridFunction& g);

struct SeminormSpec {
    double alpha = 0.0;
    double p = 2.0;
    /// Difference order; 0 selects the natural order [alpha] + 1.
    int r = 0;
    double delta = 1.0;
    NormSpec x_norm = NormSpec::euclid();

    int order() const noexcept;
    /// Throws DomainError when r <= [alpha], delta outside (0, 1] or alpha < 0.
    void validate() const;
};

/// Natural difference order [alpha] + 1.
int natural_order(double alpha) noexcept;

/// Evaluates the spatial norm matching f's layout.
class SnapshotNorm {
public:
    SnapshotNorm(const TimeGridFunction& f, NormSpec spec);
    double operator()(std::span<const double> snapshot) const { return eval_(snapshot); }
    bool is_lower_bound() const noexcept { return eval_.is_lower_bound(); }

private:
    SpatialNormEvaluator eval_;
};

/// Number of grid steps k with h = k dt; throws GridMismatchError otherwise.
std::size_t step_count(const TimeGridFunction& f, double h);

/// Delta_h^r f on I_{rh}; throws EmptyDomainError when r h >= |I|.
TimeGridFunction higher_difference(const TimeGridFunction& f, int r, double h);

/// Trapezoid-rule L^p norm of equally spaced nonnegative samples.
double time_lebesgue(std::span<const double> samples, double dt, double p);

/// |f|_{L^p(I;X)}
double bochner_norm(const TimeGridFunction& f, double p, NormSpec x_norm);

/// |Delta_{k dt}^r f|_{L^p(I_{rh};X)} for one step count k >= 1.
double difference_norm(const TimeGridFunction& f, int r, std::size_t k, double p, const SnapshotNorm& norm);
double difference_norm(const TimeGridFunction& f, int r, std::size_t k, double p, NormSpec x_norm);

/// Difference norms for a list of step counts (used for slope estimates).
std::vector<double> difference_norms(const TimeGridFunction& f, int r, std::span<const std::size_t> ks, double p,
                                     NormSpec x_norm);

/// Admissible step counts k >= 1 with k dt <= delta and r k dt < |I|.
std::vector<std::size_t> admissible_steps(const TimeGridFunction& f, int r, double delta);

/// [f]_{r,delta,N^{alpha,p}(I;X)}: max over admissible h of h^{-alpha} |Delta_h^r f|.
double nikolskii_seminorm(const TimeGridFunction& f, const SeminormSpec& spec);
/// The same supremum restricted to the given step counts.
double nikolskii_seminorm_over(const TimeGridFunction& f, const SeminormSpec& spec,
                               std::span<const std::size_t> ks);

/// |f|_{r,delta,N^{alpha,p}(I;X)} = seminorm + |f|_{L^p(I;X)}.
double nikolskii_norm(const TimeGridFunction& f, const SeminormSpec& spec);

/// omega_r(f, h) = max over admissible t <= h of |Delta_t^r f|_{L^p(I_{rt};X)}.
double modulus_of_continuity(const TimeGridFunction& f, int r, double h, double p = kInfinity,
                             NormSpec x_norm = NormSpec::euclid());

}  // namespace plap
