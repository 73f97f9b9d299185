#pragma once

// Pointwise algebra of the p-potentials, the stress tensors they generate
// and the square-root tensor V. Everything here is a pure function of its
// arguments.

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

namespace plap {

enum class Model { A1, A2 };

std::string_view to_string(Model m);
Model parse_model(std::string_view name);

/// Growth exponent, safety parameter and potential selector.
struct ModelParams {
    double p = 2.0;
    double mu = 1.0;
    Model model = Model::A2;
    int d = 2;

    /// Throws DomainError unless p >= 2, mu > 0, d in {2, 3}.
    void validate() const;
    /// phi''(0); strictly positive for every valid parameter set.
    double phi_dd0() const;
};

/// Symmetric d x d matrix, d in {2, 3}. Writes always touch both (i,j) and (j,i).
class SymMatrix {
public:
    explicit SymMatrix(int d = 2);

    /// Row-major upper triangle: (11, 12, 22) for d = 2, (11, 12, 13, 22, 23, 33) for d = 3.
    static SymMatrix from_upper(int d, std::initializer_list<double> upper);
    static SymMatrix identity(int d);

    int dim() const noexcept { return d_; }
    double operator()(int i, int j) const noexcept { return a_[static_cast<std::size_t>(3 * i + j)]; }
    void set(int i, int j, double v) noexcept;

    /// Frobenius norm, consistent with the contraction A:B.
    double norm() const noexcept;
    bool is_zero() const noexcept;

    SymMatrix& operator+=(const SymMatrix& o) noexcept;
    SymMatrix& operator-=(const SymMatrix& o) noexcept;
    SymMatrix& operator*=(double s) noexcept;

    friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) noexcept { return a += b; }
    friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) noexcept { return a -= b; }
    friend SymMatrix operator*(double s, SymMatrix a) noexcept { return a *= s; }
    friend SymMatrix operator*(SymMatrix a, double s) noexcept { return a *= s; }
    friend bool operator==(const SymMatrix& a, const SymMatrix& b) noexcept = default;

private:
    int d_;
    std::array<double, 9> a_{};
};

/// Full contraction A:B = sum_ij A_ij B_ij.
double contract(const SymMatrix& a, const SymMatrix& b);

// Potentials. A1: phi(t) = mu t^2/2 + t^p/p, A2: phi(t) = ((mu+t^2)^{p/2} - mu^{p/2})/p.
double phi(double t, const ModelParams& m);
double phi_d(double t, const ModelParams& m);
double phi_dd(double t, const ModelParams& m);

/// phi'(t)/t, extended continuously by phi''(0) at t = 0.
double stress_coefficient(double t, const ModelParams& m);

/// A(Q) = phi'(|Q|) Q/|Q|, zero at Q = 0.
SymMatrix stress(const SymMatrix& q, const ModelParams& m);

/// V(Q) = sqrt(phi'(|Q|)/|Q|) Q, with sqrt(phi''(0)) Q as the limit at zero.
SymMatrix v_map(const SymMatrix& q, const ModelParams& m);

/// Derivative of the stress: dA(Q)[E] = scalar * E + rank_one * (Q:E) Q.
struct StressTangent {
    double scalar;
    double rank_one;
};
StressTangent stress_tangent(double t, const ModelParams& m);

struct EquivalenceRatios {
    /// (A(P)-A(Q)):(P-Q) / [phi''(|P|+|Q|) |P-Q|^2]
    double monotone;
    /// (A(P)-A(Q)):(P-Q) / |V(P)-V(Q)|^2
    double v_quadratic;
};

/// Throws DegeneratePairError for P == Q.
EquivalenceRatios equivalence_ratios(const SymMatrix& p, const SymMatrix& q, const ModelParams& m);

/// |A(P)-A(Q)| / [phi''(|P|+|Q|) |P-Q|]; throws DegeneratePairError for P == Q.
double lipschitz_ratio(const SymMatrix& p, const SymMatrix& q, const ModelParams& m);

/// Smallest K (measured on a dense log sweep, padded by 1e-3 relative) with
/// K^{-1} phi''(0) (1 + t^{p-2}) <= phi''(t) <= K (1 + t^{p-2}).
double growth_constant(const ModelParams& m);

/// Empirical band of the structure ratios over seeded random symmetric pairs.
struct StructureBand {
    double monotone_min = 0.0;
    double monotone_max = 0.0;
    double v_quadratic_min = 0.0;
    double v_quadratic_max = 0.0;
    double lipschitz_max = 0.0;
    /// Smallest raw pairing (A(P)-A(Q)):(P-Q); must be >= 0.
    double pairing_min = 0.0;
    std::size_t samples = 0;
};

StructureBand sample_structure_band(const ModelParams& m, std::size_t samples, std::uint64_t seed,
                                    double max_norm = 10.0);

}  // namespace plap
