#pragma once

// Periodic 2-D grid on [0, 2pi)^2 together with the centered-difference
// symmetric gradient and divergence. The pair is exactly adjoint:
//   <div T, v> = -<T, Dv>
// on every grid, which is the discrete counterpart of integration by parts.

#include <cstddef>
#include <span>
#include <vector>

#include "plap/tensor_models.hpp"

namespace plap {

class TorusGrid {
public:
    static constexpr int dim = 2;

    /// n >= 8 and a power of two.
    explicit TorusGrid(int n);

    int n() const noexcept { return n_; }
    double h() const noexcept { return h_; }
    std::size_t points() const noexcept { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }
    /// Quadrature weight h^2 of a single node.
    double cell_area() const noexcept { return h_ * h_; }
    double coord(int i) const noexcept { return h_ * i; }

    int wrap(int i) const noexcept { return ((i % n_) + n_) % n_; }
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(wrap(i)) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(wrap(j));
    }

    friend bool operator==(const TorusGrid& a, const TorusGrid& b) noexcept { return a.n_ == b.n_; }

private:
    int n_;
    double h_;
};

/// R^2-valued field sampled on the torus; component-major storage.
class SpatialField {
public:
    explicit SpatialField(const TorusGrid& grid);
    SpatialField(const TorusGrid& grid, std::vector<double> data);

    const TorusGrid& grid() const noexcept { return grid_; }
    double& operator()(int c, int i, int j) noexcept { return data_[offset(c) + grid_.index(i, j)]; }
    double operator()(int c, int i, int j) const noexcept { return data_[offset(c) + grid_.index(i, j)]; }

    std::span<double> component(int c) noexcept { return {data_.data() + offset(c), grid_.points()}; }
    std::span<const double> component(int c) const noexcept { return {data_.data() + offset(c), grid_.points()}; }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    double max_abs() const noexcept;
    bool all_finite() const noexcept;

private:
    std::size_t offset(int c) const noexcept { return static_cast<std::size_t>(c) * grid_.points(); }

    TorusGrid grid_;
    std::vector<double> data_;
};

/// Symmetric 2x2 tensor field stored as the three planes (11, 12, 22).
class SymTensorField {
public:
    static constexpr int planes = 3;

    explicit SymTensorField(const TorusGrid& grid);

    const TorusGrid& grid() const noexcept { return grid_; }
    std::span<double> plane(int k) noexcept { return {data_.data() + offset(k), grid_.points()}; }
    std::span<const double> plane(int k) const noexcept { return {data_.data() + offset(k), grid_.points()}; }

    SymMatrix at(std::size_t node) const;
    void set(std::size_t node, const SymMatrix& m);

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

private:
    std::size_t offset(int k) const noexcept { return static_cast<std::size_t>(k) * grid_.points(); }

    TorusGrid grid_;
    std::vector<double> data_;
};

/// Centered difference along axis 0 (x1) or 1 (x2) of one scalar plane.
void centered_difference(const TorusGrid& grid, std::span<const double> f, int axis, std::span<double> out);

/// Du = (grad u + grad u^T)/2 with centered differences.
SymTensorField sym_gradient(const SpatialField& u);

/// Row-wise centered-difference divergence; equals -D^T in the h^2-weighted pairing.
SpatialField divergence(const SymTensorField& t);

/// Applies the stress law pointwise.
SymTensorField apply_stress(const SymTensorField& q, const ModelParams& m);
/// Applies V pointwise.
SymTensorField apply_v_map(const SymTensorField& q, const ModelParams& m);

/// h^2 sum u.v
double inner(const SpatialField& u, const SpatialField& v);
/// h^2 sum A:B with the off-diagonal plane counted twice.
double inner(const SymTensorField& a, const SymTensorField& b);

/// Discrete energy h^2 sum phi(|Du|).
double energy(const SpatialField& u, const ModelParams& m);

/// Spatial mean of component c.
double mean(const SpatialField& u, int c);

}  // namespace plap
