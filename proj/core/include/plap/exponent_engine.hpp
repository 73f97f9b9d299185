#pragma once

// Closed-form regularity exponents: gamma_0, gamma_1, the regime split, the
// affine recurrence alpha_{i+1} = A alpha_i + B, and the interpolation
// parameters that generate it.
//
// The algebraic parts are templates over the scalar type so that identities
// can be checked exactly with boost::multiprecision::cpp_rational as well as
// in double precision.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "plap/errors.hpp"

namespace plap {

using Rational = boost::multiprecision::cpp_rational;

enum class RegimeKind { Heat, FullDerivative, Fractional };
std::string_view to_string(RegimeKind k);

struct Regime {
    RegimeKind kind;
    /// 2 + 2/sqrt(d+1)
    double threshold;
};

/// 2 + 2/sqrt(d+1); gamma_0 equals 1 exactly there.
double regime_threshold(int d);

/// Heat for p = 2, Fractional for p at or above the threshold, FullDerivative between.
Regime classify(double p, int d);

template <class T>
T gamma0(const T& p, int d) {
    if (!(p > T(2))) throw DomainError("gamma_0 needs p > 2");
    if (d < 2) throw DomainError("gamma_0 needs d >= 2");
    return T(2) * p / ((p - T(2)) * (T(d) * (p - T(2)) + p));
}

template <class T>
T gamma1(const T& p, int d) {
    if (!(p >= T(2))) throw DomainError("gamma_1 needs p >= 2");
    if (d < 2) throw DomainError("gamma_1 needs d >= 2");
    return T(2) / p + p / (T(d) * (p - T(2)) + T(2) * p);
}

/// Coefficients of alpha_{i+1} = A alpha_i + B. At p = 2 they reduce to A = 1, B = 1/2.
template <class T>
struct Recurrence {
    T A;
    T B;
};

template <class T>
Recurrence<T> recurrence(const T& p, int d) {
    if (!(p >= T(2))) throw DomainError("the recurrence needs p >= 2");
    if (d < 2) throw DomainError("the recurrence needs d >= 2");
    const T denom = T(d) * (p - T(2)) + T(2) * p;
    return {T(2) / p + (p - T(2)) / denom, T(2) / denom};
}

/// alpha_0 .. alpha_n of the formal recurrence (no crossing rule applied).
template <class T>
std::vector<T> formal_sequence(const T& p, int d, const T& alpha0, std::size_t n) {
    const auto [a, b] = recurrence(p, d);
    std::vector<T> out{alpha0};
    out.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) out.push_back(a * out.back() + b);
    return out;
}

/// Interpolation parameter theta = 2p/(d(p-2)+2p) for which the interpolated space is L^p.
template <class T>
T natural_theta(const T& p, int d) {
    return T(2) * p / (T(d) * (p - T(2)) + T(2) * p);
}

template <class T>
struct InterpParams {
    /// alpha' = alpha_coeff * alpha_i + alpha_shift
    T alpha_coeff;
    T alpha_shift;
    T p0;
    /// (2 d p)/(p theta d + (1-theta)(2d - 2p)); meaningful only when q0_free is false.
    std::optional<T> q0;
    /// The formula leaves (1, inf); any finite exponent is admissible.
    bool q0_free;
    /// alpha_{i+1} = alpha' - 1/p0 + 1/p = next_coeff * alpha_i + next_shift
    T next_coeff;
    T next_shift;
};

/// Interpolation of N^{2 alpha_i/p, p}(W^{1,p}) with N^{1+alpha_i, p'}(W^{-1,p'})
/// at weight theta/2 on the second leg.
template <class T>
InterpParams<T> interp_params(const T& theta, const T& p, int d) {
    if (!(theta >= T(0) && theta <= T(1))) throw DomainError("theta must lie in [0, 1]");
    if (!(p >= T(2))) throw DomainError("interp_params needs p >= 2");
    if (d < 2) throw DomainError("interp_params needs d >= 2");
    const T half = theta / T(2);
    InterpParams<T> out;
    out.alpha_coeff = (T(1) - half) * T(2) / p + half;
    out.alpha_shift = half;
    out.p0 = T(2) * p / (theta * (p - T(2)) + T(2));
    const T denom = p * theta * T(d) + (T(1) - theta) * (T(2 * d) - T(2) * p);
    out.q0_free = true;
    if (denom > T(0)) {
        const T q = T(2 * d) * p / denom;
        if (q > T(1)) {
            out.q0 = q;
            out.q0_free = false;
        }
    }
    out.next_coeff = out.alpha_coeff;
    out.next_shift = out.alpha_shift - T(1) / out.p0 + T(1) / p;
    return out;
}

/// One endpoint of a formal interpolation: N^{alpha, time_p}(W^{smoothness, space_q}).
template <class T>
struct InterpolationLeg {
    T alpha;
    T time_p;
    T space_q;
    int smoothness;  // +1 or -1
};

template <class T>
struct FormalStep {
    /// Weight on the second leg chosen so that the interpolated space embeds into L^p.
    T b;
    T alpha;
    T p0;
    /// alpha - 1/p0 + 1/p
    T next_alpha;
};

/// Generic interpolation step: the interpolated space W^{s_b, q_b} with
/// s_b = (1-b)s_1 + b s_2 and 1/q_b = (1-b)/q_1 + b/q_2 is placed in L^p through
/// 1/p = 1/q_b - s_b/d; then alpha_{i+1} = alpha_b - 1/p_b + 1/p.
template <class T>
FormalStep<T> formal_interpolation_step(const InterpolationLeg<T>& a, const InterpolationLeg<T>& b_leg, const T& p,
                                        int d) {
    const T e1 = T(1) / a.space_q - T(a.smoothness) / T(d);
    const T e2 = T(1) / b_leg.space_q - T(b_leg.smoothness) / T(d);
    if (e1 == e2) throw DomainError("interpolation legs embed into the same Lebesgue space");
    FormalStep<T> s;
    s.b = (T(1) / p - e1) / (e2 - e1);
    s.alpha = (T(1) - s.b) * a.alpha + s.b * b_leg.alpha;
    s.p0 = T(1) / ((T(1) - s.b) / a.time_p + s.b / b_leg.time_p);
    s.next_alpha = s.alpha - T(1) / s.p0 + T(1) / p;
    return s;
}

/// Gain alpha_{i+1} - alpha_i when N^{alpha_i,2}(W^{1,2}) replaces the
/// high-space-regularity leg (independent of alpha_i).
double alternate_leg_gain(double p, int d);
/// True iff the alternate leg gives alpha_{i+1} >= alpha_i.
bool alternate_leg_gains(double p, int d);
/// 2 + 4/(d+1): the largest p for which the alternate leg gains.
double alternate_leg_bound(int d);

struct IterationTrace {
    /// alpha_0, ..., alpha_{i0}: terms up to and including the last one <= 1
    /// (all terms when the sequence never crosses 1).
    std::vector<double> alphas;
    double A = 0.0;
    double B = 0.0;
    /// B/(1-A); +inf when A = 1 (p = 2).
    double limit = 0.0;
    bool limit_finite = true;
    /// First formal term above 1 (only when crossed_one).
    double crossing_value = 0.0;
    bool crossed_one = false;
    /// Open upper bound of achievable exponents: A + B after crossing, the limit otherwise.
    double achievable_sup = 0.0;
    double target = 0.0;
    /// Number of iteration steps N(target).
    std::size_t steps = 0;
};

/// Runs the recurrence from alpha0 (0 <= alpha0 <= 1, alpha0 < target) and
/// applies the crossing rule. Throws UnreachableTargetError when the target
/// is at or above the achievable supremum.
IterationTrace iterate(double p, int d, double alpha0, double target);

/// Parameter interval of Holder continuity: [2, (3+2d+sqrt(8d+9))/(d+1)).
std::pair<double, double> holder_range(int d);

/// Sobolev exponent 2d/(d-2) for d >= 3, +inf for d = 2.
double sobolev_star(int d);

}  // namespace plap
