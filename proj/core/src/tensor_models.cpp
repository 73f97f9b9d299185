#include "plap/tensor_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "plap/errors.hpp"

namespace plap {

std::string_view to_string(Model m) { return m == Model::A1 ? "A1" : "A2"; }

Model parse_model(std::string_view name) {
    if (name == "A1") return Model::A1;
    if (name == "A2") return Model::A2;
    throw DomainError("unknown model '" + std::string(name) + "' (expected A1 or A2)");
}

void ModelParams::validate() const {
    if (!(p >= 2.0) || !std::isfinite(p)) throw DomainError("growth exponent p must satisfy p >= 2");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("safety parameter mu must be positive");
    if (d != 2 && d != 3) throw DomainError("dimension d must be 2 or 3");
}

double ModelParams::phi_dd0() const { return phi_dd(0.0, *this); }

// ---------------------------------------------------------------------------
// SymMatrix

SymMatrix::SymMatrix(int d) : d_(d) {
    if (d != 2 && d != 3) throw DomainError("SymMatrix dimension must be 2 or 3");
}

SymMatrix SymMatrix::from_upper(int d, std::initializer_list<double> upper) {
    SymMatrix m(d);
    const std::size_t expected = static_cast<std::size_t>(d * (d + 1) / 2);
    if (upper.size() != expected) throw DomainError("wrong number of upper-triangle entries");
    auto it = upper.begin();
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) m.set(i, j, *it++);
    return m;
}

SymMatrix SymMatrix::identity(int d) {
    SymMatrix m(d);
    for (int i = 0; i < d; ++i) m.set(i, i, 1.0);
    return m;
}

void SymMatrix::set(int i, int j, double v) noexcept {
    a_[static_cast<std::size_t>(3 * i + j)] = v;
    a_[static_cast<std::size_t>(3 * j + i)] = v;
}

double SymMatrix::norm() const noexcept { return std::sqrt(contract(*this, *this)); }

bool SymMatrix::is_zero() const noexcept {
    return std::all_of(a_.begin(), a_.end(), [](double v) { return v == 0.0; });
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) noexcept {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) noexcept {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

SymMatrix& SymMatrix::operator*=(double s) noexcept {
    for (double& v : a_) v *= s;
    return *this;
}

double contract(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim()) throw DomainError("contraction of matrices of different dimension");
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) s += a(i, j) * b(i, j);
    return s;
}

// ---------------------------------------------------------------------------
// Potentials

namespace {

void require_nonnegative(double t) {
    if (!(t >= 0.0)) throw DomainError("potential evaluated at negative argument");
}

}  // namespace

double phi(double t, const ModelParams& m) {
    require_nonnegative(t);
    const double p = m.p;
    if (m.model == Model::A1) return 0.5 * m.mu * t * t + std::pow(t, p) / p;
    // ((mu+t^2)^{p/2} - mu^{p/2})/p without cancellation for small t
    return std::pow(m.mu, 0.5 * p) * std::expm1(0.5 * p * std::log1p(t * t / m.mu)) / p;
}

double phi_d(double t, const ModelParams& m) {
    require_nonnegative(t);
    return stress_coefficient(t, m) * t;
}

double phi_dd(double t, const ModelParams& m) {
    require_nonnegative(t);
    const double p = m.p;
    if (m.model == Model::A1) return m.mu + (p - 1.0) * std::pow(t, p - 2.0);
    const double s = m.mu + t * t;
    return std::pow(s, 0.5 * (p - 4.0)) * (m.mu + (p - 1.0) * t * t);
}

double stress_coefficient(double t, const ModelParams& m) {
    require_nonnegative(t);
    // pow(0, 0) == 1 gives the p = 2 limit of A1 for free.
    if (m.model == Model::A1) return m.mu + std::pow(t, m.p - 2.0);
    return std::pow(m.mu + t * t, 0.5 * (m.p - 2.0));
}

SymMatrix stress(const SymMatrix& q, const ModelParams& m) {
    return stress_coefficient(q.norm(), m) * q;
}

SymMatrix v_map(const SymMatrix& q, const ModelParams& m) {
    return std::sqrt(stress_coefficient(q.norm(), m)) * q;
}

StressTangent stress_tangent(double t, const ModelParams& m) {
    require_nonnegative(t);
    const double a = stress_coefficient(t, m);
    if (t == 0.0) return {a, 0.0};
    // rank_one = (phi'' - phi'/t) / t^2 in closed form
    double b = 0.0;
    if (m.model == Model::A1)
        b = (m.p - 2.0) * std::pow(t, m.p - 4.0);
    else
        b = (m.p - 2.0) * std::pow(m.mu + t * t, 0.5 * (m.p - 4.0));
    return {a, b};
}

EquivalenceRatios equivalence_ratios(const SymMatrix& p, const SymMatrix& q, const ModelParams& m) {
    if (p == q) throw DegeneratePairError("equivalence ratios undefined for P == Q");
    const SymMatrix dq = p - q;
    const double pairing = contract(stress(p, m) - stress(q, m), dq);
    const double dist2 = contract(dq, dq);
    const double weight = phi_dd(p.norm() + q.norm(), m);
    const SymMatrix dv = v_map(p, m) - v_map(q, m);
    return {pairing / (weight * dist2), pairing / contract(dv, dv)};
}

double lipschitz_ratio(const SymMatrix& p, const SymMatrix& q, const ModelParams& m) {
    if (p == q) throw DegeneratePairError("Lipschitz ratio undefined for P == Q");
    const SymMatrix dq = p - q;
    const double weight = phi_dd(p.norm() + q.norm(), m);
    return (stress(p, m) - stress(q, m)).norm() / (weight * dq.norm());
}

double growth_constant(const ModelParams& m) {
    m.validate();
    const double f0 = m.phi_dd0();
    double k = 1.0;
    auto visit = [&](double t) {
        const double band = 1.0 + std::pow(t, m.p - 2.0);
        const double f = phi_dd(t, m);
        k = std::max({k, f / band, f0 * band / f});
    };
    visit(0.0);
    constexpr int kPoints = 20000;
    for (int i = 0; i <= kPoints; ++i) visit(std::pow(10.0, -8.0 + 16.0 * i / kPoints));
    return k * (1.0 + 1e-3);
}

namespace {

SymMatrix random_sym(std::mt19937_64& rng, int d, double max_norm) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SymMatrix m(d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) m.set(i, j, gauss(rng));
    const double n = m.norm();
    if (n == 0.0) return m;
    // half of the radii uniform, half log-uniform down to 1e-3
    const double radius =
        unit(rng) < 0.5 ? max_norm * unit(rng) : max_norm * std::pow(10.0, -4.0 * unit(rng));
    return (radius / n) * m;
}

}  // namespace

StructureBand sample_structure_band(const ModelParams& m, std::size_t samples, std::uint64_t seed,
                                    double max_norm) {
    m.validate();
    std::mt19937_64 rng(seed);
    StructureBand band;
    constexpr double inf = std::numeric_limits<double>::infinity();
    band.monotone_min = band.v_quadratic_min = band.pairing_min = inf;
    band.monotone_max = band.v_quadratic_max = band.lipschitz_max = -inf;
    while (band.samples < samples) {
        const SymMatrix p = random_sym(rng, m.d, max_norm);
        const SymMatrix q = random_sym(rng, m.d, max_norm);
        if (p == q) continue;
        const auto r = equivalence_ratios(p, q, m);
        const double pairing = contract(stress(p, m) - stress(q, m), p - q);
        band.monotone_min = std::min(band.monotone_min, r.monotone);
        band.monotone_max = std::max(band.monotone_max, r.monotone);
        band.v_quadratic_min = std::min(band.v_quadratic_min, r.v_quadratic);
        band.v_quadratic_max = std::max(band.v_quadratic_max, r.v_quadratic);
        band.lipschitz_max = std::max(band.lipschitz_max, lipschitz_ratio(p, q, m));
        band.pairing_min = std::min(band.pairing_min, pairing);
        ++band.samples;
    }
    return band;
}

}  // namespace plap
