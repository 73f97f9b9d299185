#include "plap/function_spaces.hpp"

#include <algorithm>
#include <cmath>

#include "plap/errors.hpp"

namespace plap {

namespace {

std::vector<double> signed_binomials(int r) {
    // coefficient of f(t + j h) in Delta_h^r f(t) is (-1)^{r-j} C(r, j)
    std::vector<double> c(static_cast<std::size_t>(r) + 1);
    double binom = 1.0;
    for (int j = 0; j <= r; ++j) {
        c[static_cast<std::size_t>(j)] = ((r - j) % 2 == 0 ? 1.0 : -1.0) * binom;
        binom = binom * (r - j) / (j + 1);
    }
    return c;
}

void require_order(int r) {
    if (r < 1) throw DomainError("difference order must be at least 1");
}

// Writes Delta^r at base index i with stride k into out.
void difference_at(const TimeGridFunction& f, const std::vector<double>& coeffs, std::size_t i, std::size_t k,
                   std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        const auto& s = f.values[i + j * k];
        const double c = coeffs[j];
        for (std::size_t m = 0; m < out.size(); ++m) out[m] += c * s[m];
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// TimeGridFunction

TimeGridFunction TimeGridFunction::scalar(const std::vector<double>& samples, double t0, double dt) {
    TimeGridFunction f;
    f.t0 = t0;
    f.dt = dt;
    f.values.reserve(samples.size());
    for (double v : samples) f.values.push_back({v});
    return f;
}

void TimeGridFunction::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time step dt must be positive");
    if (count() < 2) throw DomainError("a time-grid function needs at least two samples");
    const std::size_t m = snapshot_size();
    for (const auto& v : values)
        if (v.size() != m) throw DomainError("snapshots of a time-grid function differ in size");
    if (layout && layout->snapshot_size() != m) throw DomainError("snapshot size does not match the field layout");
}

TimeGridFunction& TimeGridFunction::operator*=(double c) {
    for (auto& v : values)
        for (double& x : v) x *= c;
    return *this;
}

TimeGridFunction& TimeGridFunction::operator+=(const TimeGridFunction& o) {
    if (o.count() != count() || o.snapshot_size() != snapshot_size() || o.dt != dt)
        throw GridMismatchError("adding time-grid functions sampled on different grids");
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t m = 0; m < values[i].size(); ++m) values[i][m] += o.values[i][m];
    return *this;
}

TimeGridFunction operator*(double c, TimeGridFunction f) { return f *= c; }
TimeGridFunction operator+(TimeGridFunction f, const TimeGridFunction& g) { return f += g; }

// ---------------------------------------------------------------------------
// SeminormSpec

int natural_order(double alpha) noexcept { return static_cast<int>(std::floor(alpha)) + 1; }

int SeminormSpec::order() const noexcept { return r > 0 ? r : natural_order(alpha); }

void SeminormSpec::validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be finite and nonnegative");
    if (!(p >= 1.0)) throw DomainError("time exponent p must be >= 1");
    if (order() < natural_order(alpha)) throw DomainError("difference order r must exceed [alpha]");
    if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("step cap delta must lie in (0, 1]");
}

// ---------------------------------------------------------------------------
// Norms

SnapshotNorm::SnapshotNorm(const TimeGridFunction& f, NormSpec spec) : eval_(f.layout.get(), spec) {}

std::size_t step_count(const TimeGridFunction& f, double h) {
    const double ratio = h / f.dt;
    const double k = std::round(ratio);
    if (!(k >= 1.0) || std::abs(ratio - k) > 1e-9 * std::max(1.0, k))
        throw GridMismatchError("step h is not a positive integer multiple of dt");
    return static_cast<std::size_t>(k);
}

TimeGridFunction higher_difference(const TimeGridFunction& f, int r, double h) {
    require_order(r);
    f.validate();
    const std::size_t k = step_count(f, h);
    const std::size_t shift = static_cast<std::size_t>(r) * k;
    if (shift >= f.count() - 1) throw EmptyDomainError("r h must be smaller than the interval length");
    const auto coeffs = signed_binomials(r);
    TimeGridFunction out;
    out.t0 = f.t0;
    out.dt = f.dt;
    out.layout = f.layout;
    out.values.resize(f.count() - shift, std::vector<double>(f.snapshot_size()));
    for (std::size_t i = 0; i < out.values.size(); ++i) difference_at(f, coeffs, i, k, out.values[i]);
    return out;
}

double time_lebesgue(std::span<const double> samples, double dt, double p) {
    if (samples.empty()) return 0.0;
    if (std::isinf(p)) return *std::max_element(samples.begin(), samples.end());
    if (samples.size() == 1) return 0.0;
    double s = 0.0;
    const std::size_t last = samples.size() - 1;
    for (std::size_t i = 0; i <= last; ++i) {
        const double w = (i == 0 || i == last) ? 0.5 : 1.0;
        const double a = samples[i];
        s += w * (p == 1.0 ? a : p == 2.0 ? a * a : std::pow(a, p));
    }
    s *= dt;
    return p == 1.0 ? s : p == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / p);
}

double bochner_norm(const TimeGridFunction& f, double p, NormSpec x_norm) {
    f.validate();
    const SnapshotNorm norm(f, x_norm);
    std::vector<double> g(f.count());
    for (std::size_t i = 0; i < f.count(); ++i) g[i] = norm(f.values[i]);
    return time_lebesgue(g, f.dt, p);
}

double difference_norm(const TimeGridFunction& f, int r, std::size_t k, double p, const SnapshotNorm& norm) {
    require_order(r);
    const std::size_t shift = static_cast<std::size_t>(r) * k;
    if (k == 0 || shift >= f.count() - 1) throw EmptyDomainError("r h must be smaller than the interval length");
    const auto coeffs = signed_binomials(r);
    const std::size_t m = f.count() - shift;
    std::vector<double> g(m), buf(f.snapshot_size());
    for (std::size_t i = 0; i < m; ++i) {
        difference_at(f, coeffs, i, k, buf);
        g[i] = norm(buf);
    }
    return time_lebesgue(g, f.dt, p);
}

double difference_norm(const TimeGridFunction& f, int r, std::size_t k, double p, NormSpec x_norm) {
    f.validate();
    return difference_norm(f, r, k, p, SnapshotNorm(f, x_norm));
}

std::vector<double> difference_norms(const TimeGridFunction& f, int r, std::span<const std::size_t> ks, double p,
                                     NormSpec x_norm) {
    f.validate();
    const SnapshotNorm norm(f, x_norm);
    std::vector<double> out;
    out.reserve(ks.size());
    for (std::size_t k : ks) out.push_back(difference_norm(f, r, k, p, norm));
    return out;
}

std::vector<std::size_t> admissible_steps(const TimeGridFunction& f, int r, double delta) {
    std::vector<std::size_t> ks;
    const std::size_t n = f.count() - 1;
    for (std::size_t k = 1;; ++k) {
        if (static_cast<double>(k) * f.dt > delta * (1.0 + 1e-12)) break;
        if (static_cast<std::size_t>(r) * k >= n) break;
        ks.push_back(k);
    }
    return ks;
}

double nikolskii_seminorm_over(const TimeGridFunction& f, const SeminormSpec& spec,
                               std::span<const std::size_t> ks) {
    spec.validate();
    f.validate();
    if (ks.empty()) throw EmptyDomainError("no admissible step h for the seminorm");
    const int r = spec.order();
    const SnapshotNorm norm(f, spec.x_norm);
    double best = 0.0;
    for (std::size_t k : ks) {
        const double h = static_cast<double>(k) * f.dt;
        const double v = difference_norm(f, r, k, spec.p, norm);
        best = std::max(best, spec.alpha == 0.0 ? v : v * std::pow(h, -spec.alpha));
    }
    return best;
}

double nikolskii_seminorm(const TimeGridFunction& f, const SeminormSpec& spec) {
    spec.validate();
    f.validate();
    return nikolskii_seminorm_over(f, spec, admissible_steps(f, spec.order(), spec.delta));
}

double nikolskii_norm(const TimeGridFunction& f, const SeminormSpec& spec) {
    return nikolskii_seminorm(f, spec) + bochner_norm(f, spec.p, spec.x_norm);
}

double modulus_of_continuity(const TimeGridFunction& f, int r, double h, double p, NormSpec x_norm) {
    require_order(r);
    f.validate();
    const std::size_t kmax = step_count(f, h);
    if (static_cast<std::size_t>(r) * kmax >= f.count() - 1)
        throw EmptyDomainError("r h must be smaller than the interval length");
    const SnapshotNorm norm(f, x_norm);
    double best = 0.0;
    for (std::size_t k = 1; k <= kmax; ++k) best = std::max(best, difference_norm(f, r, k, p, norm));
    return best;
}

}  // namespace plap
