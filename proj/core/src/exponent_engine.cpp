#include "plap/exponent_engine.hpp"

#include <limits>
#include <string>

namespace plap {

std::string_view to_string(RegimeKind k) {
    switch (k) {
        case RegimeKind::Heat: return "Heat";
        case RegimeKind::FullDerivative: return "FullDerivative";
        case RegimeKind::Fractional: return "Fractional";
    }
    return "?";
}

double regime_threshold(int d) {
    if (d < 2) throw DomainError("dimension must be at least 2");
    return 2.0 + 2.0 / std::sqrt(static_cast<double>(d) + 1.0);
}

Regime classify(double p, int d) {
    if (!(p >= 2.0) || !std::isfinite(p)) throw DomainError("classify needs p >= 2");
    const double thr = regime_threshold(d);
    if (p == 2.0) return {RegimeKind::Heat, thr};
    // the boundary belongs to the fractional case
    return {p >= thr ? RegimeKind::Fractional : RegimeKind::FullDerivative, thr};
}

double alternate_leg_gain(double p, int d) {
    if (!(p >= 2.0)) throw DomainError("alternate_leg_gain needs p >= 2");
    const double dual = p / (p - 1.0);
    // alpha_i drops out of the gain; evaluate at alpha_i = 0
    const InterpolationLeg<double> high{0.0, 2.0, 2.0, +1};
    const InterpolationLeg<double> low{1.0, dual, dual, -1};
    return formal_interpolation_step(high, low, p, d).next_alpha;
}

bool alternate_leg_gains(double p, int d) { return alternate_leg_gain(p, d) >= -1e-12; }

double alternate_leg_bound(int d) {
    if (d < 2) throw DomainError("dimension must be at least 2");
    return 2.0 + 4.0 / (static_cast<double>(d) + 1.0);
}

IterationTrace iterate(double p, int d, double alpha0, double target) {
    const Regime regime = classify(p, d);
    if (!(alpha0 >= 0.0 && alpha0 <= 1.0)) throw DomainError("alpha0 must lie in [0, 1]");
    if (!(alpha0 < target)) throw DomainError("alpha0 must be smaller than the target");

    IterationTrace tr;
    const auto rec = recurrence(p, d);
    tr.A = rec.A;
    tr.B = rec.B;
    tr.target = target;
    tr.limit_finite = tr.A < 1.0;
    tr.limit = tr.limit_finite ? tr.B / (1.0 - tr.A) : std::numeric_limits<double>::infinity();

    if (regime.kind == RegimeKind::Fractional) {
        tr.achievable_sup = tr.limit;
        if (target >= tr.limit)
            throw UnreachableTargetError("target " + std::to_string(target) + " is not below the limit " +
                                         std::to_string(tr.limit));
    } else {
        tr.achievable_sup = tr.A + tr.B;
        if (target >= tr.achievable_sup)
            throw UnreachableTargetError("target " + std::to_string(target) + " is not below A + B = " +
                                         std::to_string(tr.achievable_sup));
    }

    tr.alphas.push_back(alpha0);
    constexpr std::size_t kMaxSteps = 1000000;
    while (tr.alphas.size() < kMaxSteps) {
        if (tr.alphas.back() >= target) {
            tr.steps = tr.alphas.size() - 1;
            return tr;
        }
        const double next = tr.A * tr.alphas.back() + tr.B;
        if (next > 1.0 && regime.kind != RegimeKind::Fractional) {
            // The formal term above 1 is used once; past it only exponents
            // below A + B are reachable, with one more step.
            tr.crossed_one = true;
            tr.crossing_value = next;
            const std::size_t i0 = tr.alphas.size() - 1;
            tr.steps = target < next ? i0 + 1 : i0 + 2;
            return tr;
        }
        tr.alphas.push_back(next);
    }
    throw UnreachableTargetError("iteration did not reach the target");
}

std::pair<double, double> holder_range(int d) {
    if (d != 2 && d != 3) throw UnsupportedDimensionError("holder_range supports d = 2 and d = 3 only");
    const double dd = static_cast<double>(d);
    return {2.0, (3.0 + 2.0 * dd + std::sqrt(8.0 * dd + 9.0)) / (dd + 1.0)};
}

double sobolev_star(int d) {
    if (d < 2) throw DomainError("dimension must be at least 2");
    if (d == 2) return std::numeric_limits<double>::infinity();
    return 2.0 * d / (d - 2.0);
}

}  // namespace plap
