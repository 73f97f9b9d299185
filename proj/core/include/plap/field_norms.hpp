#pragma once

// Discrete spatial norms of sampled fields: rectangle-rule L^q, W^{1,q}
// with centered-difference gradients, and W^{-1,q}. W^{-1,2} is evaluated
// spectrally as the l^2 Fourier norm with weight (1+|k|^2)^{-1/2}; for other
// exponents a fixed dictionary of smooth test fields gives a lower bound.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "plap/torus.hpp"

namespace plap {

enum class NormTag { Lebesgue, Sobolev1, SobolevMinus1, Euclid };

/// Norm selector; q may be +infinity for Lebesgue and Sobolev1.
struct NormSpec {
    NormTag tag = NormTag::Lebesgue;
    double q = 2.0;

    static NormSpec L(double q) { return {NormTag::Lebesgue, q}; }
    static NormSpec W1(double q) { return {NormTag::Sobolev1, q}; }
    static NormSpec Wm1(double q) { return {NormTag::SobolevMinus1, q}; }
    static NormSpec euclid() { return {NormTag::Euclid, 2.0}; }

    /// "L2", "Lp(4)", "Linf", "W12", "W1p(3)", "Wm12", "Wm1p(1.5)", "EUCLID".
    static NormSpec parse(const std::string& text);
    std::string label() const;

    friend bool operator==(const NormSpec&, const NormSpec&) = default;
};

/// Nodes of a ball B_r(x0) on the torus (torus metric) plus a smooth bump
/// cos^2(pi |x-x0| / (2r)) supported in it.
struct Region {
    double center_x = 0.0;
    double center_y = 0.0;
    double radius = 0.0;
    std::vector<std::size_t> nodes;
    std::vector<double> bump;  // one value per grid node, zero outside the ball

    static Region ball(const TorusGrid& grid, double cx, double cy, double radius);
};

/// Shape of the snapshots of a field-valued time function.
struct FieldLayout {
    TorusGrid grid;
    int components = 2;
    /// Pointwise |u|^2 = sum_c weight_c u_c^2. Symmetric tensors use (1, 2, 1).
    std::vector<double> weights{1.0, 1.0};
    std::shared_ptr<const Region> region;  // null: the whole torus

    static FieldLayout vector_field(const TorusGrid& g) { return {g, 2, {1.0, 1.0}, nullptr}; }
    static FieldLayout sym_tensor_field(const TorusGrid& g) { return {g, 3, {1.0, 2.0, 1.0}, nullptr}; }

    std::size_t snapshot_size() const noexcept { return static_cast<std::size_t>(components) * grid.points(); }
};

/// Evaluates one spatial norm on many snapshots; precomputes FFT plans and
/// dictionary fields once. A null layout means plain Euclidean vectors.
class SpatialNormEvaluator {
public:
    SpatialNormEvaluator(const FieldLayout* layout, NormSpec spec);
    ~SpatialNormEvaluator();
    SpatialNormEvaluator(SpatialNormEvaluator&&) noexcept;
    SpatialNormEvaluator& operator=(SpatialNormEvaluator&&) noexcept;

    double operator()(std::span<const double> snapshot) const;

    NormSpec spec() const noexcept { return spec_; }
    /// True when the value is a dictionary lower bound rather than the exact discrete norm.
    bool is_lower_bound() const noexcept;

private:
    struct Impl;
    NormSpec spec_;
    std::unique_ptr<Impl> impl_;
};

/// Norm of a full-torus vector field.
double spatial_norm(const SpatialField& field, NormSpec spec);
/// Norm of a snapshot with the given layout.
double spatial_norm(std::span<const double> snapshot, const FieldLayout& layout, NormSpec spec);

}  // namespace plap
