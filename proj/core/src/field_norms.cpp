#include "plap/field_norms.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <regex>
#include <sstream>

#include "plap/errors.hpp"

namespace plap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

std::string format_exponent(double q) {
    if (std::isinf(q)) return "inf";
    std::ostringstream os;
    os << q;
    return os.str();
}

double conjugate_exponent(double q) {
    if (q == 1.0) return kInf;
    if (std::isinf(q)) return 1.0;
    return q / (q - 1.0);
}

/// (h^2 sum_{nodes} a^q)^{1/q}, or the max for q = inf.
double lebesgue_sum(std::span<const double> magnitude, const std::vector<std::size_t>* nodes, double q,
                    double cell_area) {
    auto visit = [&](auto&& fn) {
        if (nodes)
            for (std::size_t k : *nodes) fn(magnitude[k]);
        else
            for (double a : magnitude) fn(a);
    };
    if (std::isinf(q)) {
        double m = 0.0;
        visit([&](double a) { m = std::max(m, a); });
        return m;
    }
    double s = 0.0;
    if (q == 2.0)
        visit([&](double a) { s += a * a; });
    else
        visit([&](double a) { s += std::pow(a, q); });
    return std::pow(s * cell_area, 1.0 / q);
}

}  // namespace

// ---------------------------------------------------------------------------
// NormSpec

NormSpec NormSpec::parse(const std::string& text) {
    static const std::regex pattern(R"(^(L|W1|Wm1)(p\(([0-9.]+|inf)\)|([0-9.]+|inf))$)");
    if (text == "EUCLID") return euclid();
    std::smatch match;
    if (!std::regex_match(text, match, pattern)) throw DomainError("unknown spatial norm tag '" + text + "'");
    const std::string exponent = match[3].matched ? match[3].str() : match[4].str();
    const double q = exponent == "inf" ? kInf : std::stod(exponent);
    if (!(q >= 1.0)) throw DomainError("spatial norm exponent must be >= 1 in '" + text + "'");
    const std::string kind = match[1].str();
    if (kind == "L") return L(q);
    if (kind == "W1") return W1(q);
    if (std::isinf(q) || q == 1.0) throw DomainError("W^{-1,q} needs 1 < q < inf");
    return Wm1(q);
}

std::string NormSpec::label() const {
    switch (tag) {
        case NormTag::Lebesgue: return "L" + format_exponent(q);
        case NormTag::Sobolev1: return "W1," + format_exponent(q);
        case NormTag::SobolevMinus1: return "W-1," + format_exponent(q);
        case NormTag::Euclid: return "EUCLID";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Region

Region Region::ball(const TorusGrid& grid, double cx, double cy, double radius) {
    Region r;
    r.center_x = cx;
    r.center_y = cy;
    r.radius = radius;
    r.bump.assign(grid.points(), 0.0);
    const double period = 2.0 * std::numbers::pi;
    auto torus_delta = [&](double a, double b) {
        double d = std::fmod(std::abs(a - b), period);
        return std::min(d, period - d);
    };
    for (int i = 0; i < grid.n(); ++i) {
        for (int j = 0; j < grid.n(); ++j) {
            const double dx = torus_delta(grid.coord(i), cx);
            const double dy = torus_delta(grid.coord(j), cy);
            const double dist = std::hypot(dx, dy);
            if (dist <= radius) {
                const std::size_t k = grid.index(i, j);
                r.nodes.push_back(k);
                const double c = std::cos(0.5 * std::numbers::pi * dist / radius);
                r.bump[k] = c * c;
            }
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// SpatialNormEvaluator

struct SpatialNormEvaluator::Impl {
    const FieldLayout* layout = nullptr;
    NormSpec spec;
    fftw_plan plan = nullptr;
    // Dictionary of test fields for W^{-1,q}, q != 2: weighted pairing
    // vectors and their W^{1,q'} norms.
    std::vector<std::vector<double>> dictionary;
    std::vector<double> dictionary_norms;

    ~Impl() {
        if (plan) {
            std::lock_guard lock(fftw_planner_mutex());
            fftw_destroy_plan(plan);
        }
    }

    const std::vector<std::size_t>* nodes() const { return layout->region ? &layout->region->nodes : nullptr; }

    std::vector<double> magnitude(std::span<const double> s) const {
        const std::size_t np = layout->grid.points();
        std::vector<double> mag(np, 0.0);
        for (int c = 0; c < layout->components; ++c) {
            const double w = layout->weights[static_cast<std::size_t>(c)];
            const double* u = s.data() + static_cast<std::size_t>(c) * np;
            for (std::size_t k = 0; k < np; ++k) mag[k] += w * u[k] * u[k];
        }
        for (double& m : mag) m = std::sqrt(m);
        return mag;
    }

    std::vector<double> gradient_magnitude(std::span<const double> s) const {
        const TorusGrid& g = layout->grid;
        const std::size_t np = g.points();
        std::vector<double> mag(np, 0.0), d(np);
        for (int c = 0; c < layout->components; ++c) {
            const double w = layout->weights[static_cast<std::size_t>(c)];
            std::span<const double> u = s.subspan(static_cast<std::size_t>(c) * np, np);
            for (int axis = 0; axis < 2; ++axis) {
                centered_difference(g, u, axis, d);
                for (std::size_t k = 0; k < np; ++k) mag[k] += w * d[k] * d[k];
            }
        }
        for (double& m : mag) m = std::sqrt(m);
        return mag;
    }

    double lebesgue(std::span<const double> s, double q, const std::vector<std::size_t>* over) const {
        return lebesgue_sum(magnitude(s), over, q, layout->grid.cell_area());
    }

    double sobolev1(std::span<const double> s, double q, const std::vector<std::size_t>* over) const {
        const auto a = magnitude(s);
        const auto b = gradient_magnitude(s);
        if (std::isinf(q)) {
            return std::max(lebesgue_sum(a, over, q, 1.0), lebesgue_sum(b, over, q, 1.0));
        }
        const double area = layout->grid.cell_area();
        const double la = lebesgue_sum(a, over, q, area), lb = lebesgue_sum(b, over, q, area);
        return std::pow(std::pow(la, q) + std::pow(lb, q), 1.0 / q);
    }

    double spectral_minus1(std::span<const double> s) const {
        const TorusGrid& g = layout->grid;
        const int n = g.n();
        const std::size_t np = g.points();
        auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * np));
        std::vector<double> mask(np, 1.0);
        if (layout->region) {
            std::fill(mask.begin(), mask.end(), 0.0);
            for (std::size_t k : layout->region->nodes) mask[k] = 1.0;
        }
        double total = 0.0;
        for (int c = 0; c < layout->components; ++c) {
            const double* u = s.data() + static_cast<std::size_t>(c) * np;
            for (std::size_t k = 0; k < np; ++k) {
                buf[k][0] = u[k] * mask[k];
                buf[k][1] = 0.0;
            }
            fftw_execute_dft(plan, buf, buf);
            double sum = 0.0;
            for (int i = 0; i < n; ++i) {
                const double ki = i < n / 2 ? i : i - n;
                for (int j = 0; j < n; ++j) {
                    const double kj = j < n / 2 ? j : j - n;
                    const std::size_t k = static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                                          static_cast<std::size_t>(j);
                    sum += (buf[k][0] * buf[k][0] + buf[k][1] * buf[k][1]) / (1.0 + ki * ki + kj * kj);
                }
            }
            total += layout->weights[static_cast<std::size_t>(c)] * sum;
        }
        fftw_free(buf);
        const double period = 2.0 * std::numbers::pi;
        const double nn = static_cast<double>(np);
        return std::sqrt(total * period * period / (nn * nn));
    }

    void build_dictionary() {
        const TorusGrid& g = layout->grid;
        const std::size_t np = g.points();
        static constexpr std::array<std::array<int, 2>, 8> waves{
            {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 0}, {0, 2}, {2, 1}, {1, 2}}};
        const double q_dual = conjugate_exponent(spec.q);
        for (int c = 0; c < layout->components; ++c) {
            for (const auto& k : waves) {
                for (int phase = 0; phase < 2; ++phase) {
                    std::vector<double> field(layout->snapshot_size(), 0.0);
                    for (int i = 0; i < g.n(); ++i) {
                        for (int j = 0; j < g.n(); ++j) {
                            const double arg = k[0] * g.coord(i) + k[1] * g.coord(j);
                            const std::size_t node = g.index(i, j);
                            const double bump = layout->region ? layout->region->bump[node] : 1.0;
                            field[static_cast<std::size_t>(c) * np + node] =
                                bump * (phase == 0 ? std::sin(arg) : std::cos(arg));
                        }
                    }
                    const double norm = sobolev1(field, q_dual, nullptr);
                    if (norm == 0.0) continue;
                    const double w = layout->weights[static_cast<std::size_t>(c)] * g.cell_area();
                    for (double& v : field) v *= w;
                    dictionary.push_back(std::move(field));
                    dictionary_norms.push_back(norm);
                }
            }
        }
    }

    double dictionary_minus1(std::span<const double> s) const {
        double best = 0.0;
        for (std::size_t m = 0; m < dictionary.size(); ++m) {
            const auto& psi = dictionary[m];
            double pairing = 0.0;
            for (std::size_t k = 0; k < psi.size(); ++k) pairing += psi[k] * s[k];
            best = std::max(best, std::abs(pairing) / dictionary_norms[m]);
        }
        return best;
    }
};

SpatialNormEvaluator::SpatialNormEvaluator(const FieldLayout* layout, NormSpec spec)
    : spec_(spec), impl_(std::make_unique<Impl>()) {
    impl_->layout = layout;
    impl_->spec = spec;
    if (spec.tag == NormTag::Euclid) return;
    if (!layout) throw DomainError("spatial norm " + spec.label() + " needs a field layout");
    if (layout->weights.size() != static_cast<std::size_t>(layout->components))
        throw DomainError("field layout weights do not match the component count");
    if (spec.tag == NormTag::SobolevMinus1) {
        if (spec.q == 2.0) {
            const int n = layout->grid.n();
            auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * layout->grid.points()));
            {
                std::lock_guard lock(fftw_planner_mutex());
                impl_->plan = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
            }
            fftw_free(buf);
        } else {
            impl_->build_dictionary();
        }
    }
}

SpatialNormEvaluator::~SpatialNormEvaluator() = default;
SpatialNormEvaluator::SpatialNormEvaluator(SpatialNormEvaluator&&) noexcept = default;
SpatialNormEvaluator& SpatialNormEvaluator::operator=(SpatialNormEvaluator&&) noexcept = default;

bool SpatialNormEvaluator::is_lower_bound() const noexcept {
    return spec_.tag == NormTag::SobolevMinus1 && spec_.q != 2.0;
}

double SpatialNormEvaluator::operator()(std::span<const double> snapshot) const {
    if (spec_.tag == NormTag::Euclid) {
        double s = 0.0;
        for (double v : snapshot) s += v * v;
        return std::sqrt(s);
    }
    if (snapshot.size() != impl_->layout->snapshot_size())
        throw DomainError("snapshot size does not match the field layout");
    switch (spec_.tag) {
        case NormTag::Lebesgue: return impl_->lebesgue(snapshot, spec_.q, impl_->nodes());
        case NormTag::Sobolev1: return impl_->sobolev1(snapshot, spec_.q, impl_->nodes());
        case NormTag::SobolevMinus1:
            return spec_.q == 2.0 ? impl_->spectral_minus1(snapshot) : impl_->dictionary_minus1(snapshot);
        case NormTag::Euclid: break;
    }
    throw DomainError("unknown spatial norm tag");
}

double spatial_norm(std::span<const double> snapshot, const FieldLayout& layout, NormSpec spec) {
    return SpatialNormEvaluator(&layout, spec)(snapshot);
}

double spatial_norm(const SpatialField& field, NormSpec spec) {
    const FieldLayout layout = FieldLayout::vector_field(field.grid());
    return spatial_norm(field.data(), layout, spec);
}

}  // namespace plap
