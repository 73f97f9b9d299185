#include "plap/corpus.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "plap/errors.hpp"
#include "plap/pde_solver.hpp"

namespace plap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kLacunaryTerms = 5;
constexpr double kKinkExponents[4] = {0.25, 0.5, 0.75, 1.5};
constexpr double kTimeExponents[4] = {1.0, 2.0, 4.0, kInfinity};

using Scalar = std::function<double(double)>;

struct Member {
    Scalar f;
    Scalar df;  // empty when f' is unbounded
    std::string label;
};

Member sinusoid(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> amp(0.5, 2.0), freq(0.5, 8.0), phase(0.0, kTwoPi);
    const double a = amp(rng), w = freq(rng), ph = phase(rng);
    return {[=](double t) { return a * std::sin(kTwoPi * w * t + ph); },
            [=](double t) { return a * kTwoPi * w * std::cos(kTwoPi * w * t + ph); }, "sin"};
}

Member polynomial(std::mt19937_64& rng, int degree) {
    std::normal_distribution<double> gauss;
    std::vector<double> c(static_cast<std::size_t>(degree) + 1);
    // dyadic coefficients keep low-degree samples exact on the dyadic time grid,
    // so differences that vanish identically also vanish numerically
    for (double& x : c) x = std::ldexp(std::round(std::ldexp(gauss(rng), 8)), -8);
    auto eval = [c](double t) {
        double v = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
        return v;
    };
    auto deriv = [c](double t) {
        double v = 0.0;
        for (std::size_t j = c.size() - 1; j >= 1; --j) v = v * t + static_cast<double>(j) * c[j];
        return v;
    };
    return {eval, deriv, "poly" + std::to_string(degree)};
}

Member kink(std::mt19937_64& rng, double beta) {
    std::uniform_real_distribution<double> amp(0.5, 2.0), centre(0.2, 0.8);
    const double a = amp(rng), t0 = centre(rng);
    Member m;
    m.f = [=](double t) { return a * std::pow(std::abs(t - t0), beta); };
    if (beta >= 1.0) {
        m.df = [=](double t) {
            const double s = t - t0;
            return s == 0.0 ? 0.0 : a * beta * std::pow(std::abs(s), beta - 1.0) * (s > 0 ? 1.0 : -1.0);
        };
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "kink%.2f", beta);
    m.label = buf;
    return m;
}

Member lacunary(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ratio(0.3, 0.7), phase(0.0, kTwoPi);
    const double a = ratio(rng);
    std::vector<double> ph(kLacunaryTerms);
    for (double& x : ph) x = phase(rng);
    return {[=](double t) {
                double v = 0.0, w = 1.0, f = 1.0;
                for (int j = 0; j < kLacunaryTerms; ++j, w *= a, f *= 2.0) v += w * std::cos(kTwoPi * f * t + ph[j]);
                return v;
            },
            [=](double t) {
                double v = 0.0, w = 1.0, f = 1.0;
                for (int j = 0; j < kLacunaryTerms; ++j, w *= a, f *= 2.0)
                    v -= w * kTwoPi * f * std::sin(kTwoPi * f * t + ph[j]);
                return v;
            },
            "lacunary"};
}

}  // namespace

std::string to_string(CorpusFamily f) {
    switch (f) {
        case CorpusFamily::Sinusoid: return "sinusoid";
        case CorpusFamily::Polynomial: return "polynomial";
        case CorpusFamily::Kink: return "kink";
        case CorpusFamily::Lacunary: return "lacunary";
    }
    return "unknown";
}

std::vector<CorpusFunction> make_corpus(const CorpusOptions& options) {
    if (options.intervals < 8) throw DomainError("corpus grid needs at least 8 intervals");
    std::mt19937_64 rng(options.seed);
    const std::size_t n = options.intervals;
    const double dt = 1.0 / static_cast<double>(n);
    std::vector<CorpusFunction> out;
    out.reserve(options.size);
    for (std::size_t i = 0; i < options.size; ++i) {
        const auto family = static_cast<CorpusFamily>(i % 4);
        const std::size_t round = i / 4;
        Member m;
        switch (family) {
            case CorpusFamily::Sinusoid: m = sinusoid(rng); break;
            case CorpusFamily::Polynomial: m = polynomial(rng, static_cast<int>(round % 5) + 1); break;
            case CorpusFamily::Kink: m = kink(rng, kKinkExponents[round % 4]); break;
            case CorpusFamily::Lacunary: m = lacunary(rng); break;
        }
        CorpusFunction c;
        c.name = std::to_string(i) + ":" + m.label;
        c.family = family;
        c.p = kTimeExponents[round % 4];
        c.f = TimeGridFunction::sample(m.f, 0.0, dt, n);
        if (m.df) {
            c.derivative = TimeGridFunction::sample(m.df, 0.0, dt, n);
            c.derivative_fine = TimeGridFunction::sample(m.df, 0.0, dt / 4.0, 4 * n);
        }
        out.push_back(std::move(c));
    }
    return out;
}

TimeGridFunction interpolation_field(const std::vector<CorpusFunction>& corpus, std::size_t i, std::uint64_t seed) {
    if (corpus.empty() || i >= corpus.size()) throw DomainError("corpus index out of range");
    const TorusGrid grid(8);
    const auto& ga = corpus[i].f;
    const auto& gb = corpus[(i + 1) % corpus.size()].f;
    const SpatialField pa = random_smooth(grid, seed * 7919 + 2 * i, 3);
    const SpatialField pb = random_smooth(grid, seed * 7919 + 2 * i + 1, 3);
    TimeGridFunction out;
    out.t0 = ga.t0;
    out.dt = ga.dt;
    out.layout = std::make_shared<const FieldLayout>(FieldLayout::vector_field(grid));
    out.values.resize(ga.count());
    for (std::size_t k = 0; k < ga.count(); ++k) {
        auto& v = out.values[k];
        v.resize(pa.data().size());
        const double a = ga.values[k][0], b = gb.values[k][0];
        for (std::size_t m = 0; m < v.size(); ++m) v[m] = a * pa.data()[m] + b * pb.data()[m];
    }
    return out;
}

}  // namespace plap
