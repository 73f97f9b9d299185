#include "plap/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plap/errors.hpp"

namespace plap {

TorusGrid::TorusGrid(int n) : n_(n), h_(2.0 * std::numbers::pi / n) {
    if (n < 8 || (n & (n - 1)) != 0) throw DomainError("torus grid needs n >= 8 and a power of two");
}

SpatialField::SpatialField(const TorusGrid& grid) : grid_(grid), data_(2 * grid.points(), 0.0) {}

SpatialField::SpatialField(const TorusGrid& grid, std::vector<double> data)
    : grid_(grid), data_(std::move(data)) {
    if (data_.size() != 2 * grid_.points()) throw DomainError("field data size does not match the grid");
}

double SpatialField::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool SpatialField::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

SymTensorField::SymTensorField(const TorusGrid& grid) : grid_(grid), data_(planes * grid.points(), 0.0) {}

SymMatrix SymTensorField::at(std::size_t node) const {
    const std::size_t np = grid_.points();
    return SymMatrix::from_upper(2, {data_[node], data_[np + node], data_[2 * np + node]});
}

void SymTensorField::set(std::size_t node, const SymMatrix& m) {
    const std::size_t np = grid_.points();
    data_[node] = m(0, 0);
    data_[np + node] = m(0, 1);
    data_[2 * np + node] = m(1, 1);
}

void centered_difference(const TorusGrid& grid, std::span<const double> f, int axis, std::span<double> out) {
    const int n = grid.n();
    const double inv = 1.0 / (2.0 * grid.h());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const std::size_t plus = axis == 0 ? grid.index(i + 1, j) : grid.index(i, j + 1);
            const std::size_t minus = axis == 0 ? grid.index(i - 1, j) : grid.index(i, j - 1);
            out[grid.index(i, j)] = (f[plus] - f[minus]) * inv;
        }
    }
}

SymTensorField sym_gradient(const SpatialField& u) {
    const TorusGrid& g = u.grid();
    const std::size_t np = g.points();
    std::vector<double> d2u1(np), d1u2(np);
    SymTensorField du(g);
    centered_difference(g, u.component(0), 0, du.plane(0));
    centered_difference(g, u.component(1), 1, du.plane(2));
    centered_difference(g, u.component(0), 1, d2u1);
    centered_difference(g, u.component(1), 0, d1u2);
    auto off = du.plane(1);
    for (std::size_t k = 0; k < np; ++k) off[k] = 0.5 * (d2u1[k] + d1u2[k]);
    return du;
}

SpatialField divergence(const SymTensorField& t) {
    const TorusGrid& g = t.grid();
    const std::size_t np = g.points();
    std::vector<double> a(np), b(np);
    SpatialField out(g);
    // (div T)_1 = d1 T11 + d2 T12
    centered_difference(g, t.plane(0), 0, a);
    centered_difference(g, t.plane(1), 1, b);
    auto c0 = out.component(0);
    for (std::size_t k = 0; k < np; ++k) c0[k] = a[k] + b[k];
    // (div T)_2 = d1 T12 + d2 T22
    centered_difference(g, t.plane(1), 0, a);
    centered_difference(g, t.plane(2), 1, b);
    auto c1 = out.component(1);
    for (std::size_t k = 0; k < np; ++k) c1[k] = a[k] + b[k];
    return out;
}

namespace {

template <class Coefficient>
SymTensorField scale_pointwise(const SymTensorField& q, Coefficient&& coeff) {
    const std::size_t np = q.grid().points();
    SymTensorField out(q.grid());
    auto q11 = q.plane(0), q12 = q.plane(1), q22 = q.plane(2);
    auto o11 = out.plane(0), o12 = out.plane(1), o22 = out.plane(2);
    for (std::size_t k = 0; k < np; ++k) {
        const double t = std::sqrt(q11[k] * q11[k] + 2.0 * q12[k] * q12[k] + q22[k] * q22[k]);
        const double c = coeff(t);
        o11[k] = c * q11[k];
        o12[k] = c * q12[k];
        o22[k] = c * q22[k];
    }
    return out;
}

}  // namespace

SymTensorField apply_stress(const SymTensorField& q, const ModelParams& m) {
    return scale_pointwise(q, [&](double t) { return stress_coefficient(t, m); });
}

SymTensorField apply_v_map(const SymTensorField& q, const ModelParams& m) {
    return scale_pointwise(q, [&](double t) { return std::sqrt(stress_coefficient(t, m)); });
}

double inner(const SpatialField& u, const SpatialField& v) {
    double s = 0.0;
    for (std::size_t k = 0; k < u.data().size(); ++k) s += u.data()[k] * v.data()[k];
    return s * u.grid().cell_area();
}

double inner(const SymTensorField& a, const SymTensorField& b) {
    const std::size_t np = a.grid().points();
    double s = 0.0;
    for (std::size_t k = 0; k < np; ++k)
        s += a.plane(0)[k] * b.plane(0)[k] + 2.0 * a.plane(1)[k] * b.plane(1)[k] + a.plane(2)[k] * b.plane(2)[k];
    return s * a.grid().cell_area();
}

double energy(const SpatialField& u, const ModelParams& m) {
    const SymTensorField du = sym_gradient(u);
    const std::size_t np = u.grid().points();
    double s = 0.0;
    for (std::size_t k = 0; k < np; ++k) {
        const double a = du.plane(0)[k], b = du.plane(1)[k], c = du.plane(2)[k];
        s += phi(std::sqrt(a * a + 2.0 * b * b + c * c), m);
    }
    return s * u.grid().cell_area();
}

double mean(const SpatialField& u, int c) {
    double s = 0.0;
    for (double v : u.component(c)) s += v;
    return s / static_cast<double>(u.grid().points());
}

}  // namespace plap
