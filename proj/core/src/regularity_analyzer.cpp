#include "plap/regularity_analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "plap/errors.hpp"
#include "plap/format.hpp"

namespace plap {

namespace {

constexpr double kEps = 1e-9;

std::pair<std::size_t, std::size_t> window_indices(const Trajectory& traj, double lo, double hi) {
    const double a = std::ceil(lo / traj.dt - kEps);
    const double b = std::floor(hi / traj.dt + kEps);
    if (a < 0 || b < a || b > static_cast<double>(traj.steps()))
        throw GeometryError("time window outside the trajectory");
    return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

TimeGridFunction make_function(const Trajectory& traj, const SubCylinder& cyl, std::shared_ptr<const FieldLayout> layout,
                               bool v_map) {
    check_geometry(traj, cyl);
    const auto [lo, hi] = window_indices(traj, cyl.t0 - cyl.time_halfwidth(), cyl.t0 + cyl.time_halfwidth());
    TimeGridFunction f;
    f.dt = traj.dt;
    f.t0 = static_cast<double>(lo) * traj.dt;
    f.layout = std::move(layout);
    f.values.reserve(hi - lo + 1);
    for (std::size_t i = lo; i <= hi; ++i) {
        if (v_map) f.values.push_back(apply_v_map(sym_gradient(traj.snapshots[i]), traj.model).data());
        else f.values.push_back(traj.snapshots[i].data());
    }
    f.validate();
    return f;
}

std::shared_ptr<const Region> ball(const Trajectory& traj, const SubCylinder& cyl) {
    return std::make_shared<const Region>(Region::ball(traj.grid, cyl.x0, cyl.y0, cyl.r));
}

SpaceRow nikolskii(std::string name, bool of_v, double p, NormSpec x, double alpha) {
    return {std::move(name), of_v, p, x, alpha, -1};
}

SpaceRow sobolev(std::string name, bool of_v, double p, NormSpec x, int k) {
    return {std::move(name), of_v, p, x, static_cast<double>(k), k};
}

std::string exp_label(double p) { return std::isinf(p) ? "inf" : format_double(p); }

// Rows of the applicable case at exponent a (the alpha or gamma of the statement).
std::vector<SpaceRow> case_rows(double p, int d, double a, bool with_bochner_rows) {
    const Regime reg = classify(p, d);
    const double dual = p / (p - 1);
    const std::string ps = exp_label(p), ds = exp_label(dual);
    std::vector<SpaceRow> rows;
    if (reg.kind == RegimeKind::Fractional) {
        rows.push_back(nikolskii("N^{a,inf}(L2)", false, kInfinity, NormSpec::L(2), a));
        rows.push_back(nikolskii("V(Du) N^{a,2}(L2)", true, 2.0, NormSpec::L(2), a));
        rows.push_back(nikolskii("N^{1+a," + ds + "}(W^{-1," + ds + "})", false, dual, NormSpec::Wm1(dual), 1 + a));
        rows.push_back(nikolskii("N^{a,2}(W^{1,2})", false, 2.0, NormSpec::W1(2), a));
        rows.push_back(nikolskii("N^{a," + ps + "}(L" + ps + ")", false, p, NormSpec::L(p), a));
        rows.push_back(nikolskii("N^{2a/p," + ps + "}(W^{1," + ps + "})", false, p, NormSpec::W1(p), 2 * a / p));
        return rows;
    }
    rows.push_back(nikolskii("N^{g," + ps + "}(L" + ps + ")", false, p, NormSpec::L(p), a));
    rows.push_back(sobolev("W^{2," + ds + "}(W^{-1," + ds + "})", false, dual, NormSpec::Wm1(dual), 2));
    rows.push_back(sobolev("W^{1,inf}(L2)", false, kInfinity, NormSpec::L(2), 1));
    rows.push_back(sobolev("V(Du) W^{1,2}(L2)", true, 2.0, NormSpec::L(2), 1));
    rows.push_back(sobolev("W^{1,2}(W^{1,2})", false, 2.0, NormSpec::W1(2), 1));
    if (p > 2) rows.push_back(nikolskii("N^{2/p," + ps + "}(W^{1," + ps + "})", false, p, NormSpec::W1(p), 2 / p));
    if (with_bochner_rows) {
        const double star = sobolev_star(d);
        const double q = std::isinf(star) ? kInfinity : star * p / 2;
        rows.push_back(sobolev("L^inf(W^{1," + exp_label(q) + "})", false, kInfinity, NormSpec::W1(q), 0));
        rows.push_back(sobolev("V(Du) L^inf(W^{1,2})", true, kInfinity, NormSpec::W1(2), 0));
    }
    return rows;
}

// |f|_{L^p(X)} + sup_h h^{-a} |Delta_h^r f| (Nikolskii rows), or the sum of the
// difference quotients of orders 1..k (Sobolev rows), over dyadic steps.
double row_norm(const TimeGridFunction& f, const SpaceRow& row, double delta) {
    const SnapshotNorm norm(f, row.x_norm);
    std::vector<double> g(f.count());
    for (std::size_t i = 0; i < f.count(); ++i) g[i] = norm(f.values[i]);
    double total = time_lebesgue(g, f.dt, row.time_p);
    auto sup = [&](int r, double a) {
        double best = 0.0;
        for (std::size_t k : dyadic_steps(f, r, delta)) {
            const double h = static_cast<double>(k) * f.dt;
            best = std::max(best, std::pow(h, -a) * difference_norm(f, r, k, row.time_p, norm));
        }
        return best;
    };
    if (row.sobolev_order >= 0) {
        for (int j = 1; j <= row.sobolev_order; ++j) total += sup(j, j);
    } else {
        total += sup(row.order(), row.predicted);
    }
    return total;
}

}  // namespace

double regime_bound(double p, int d) {
    const Regime reg = classify(p, d);
    if (reg.kind == RegimeKind::Fractional) return gamma0(p, d);
    return gamma1(p, d);
}

void check_geometry(const Trajectory& traj, const SubCylinder& cyl) {
    if (!(cyl.r > 0)) throw GeometryError("cylinder radius must be positive");
    const double extent = 2 * std::numbers::pi;
    if (cyl.r + kInteriorMargin * extent > extent / 2 + kEps)
        throw GeometryError("ball plus interior margin does not fit in a period cell");
    const double t_final = traj.final_time();
    const double margin = kInteriorMargin * t_final;
    if (cyl.t0 - cyl.time_halfwidth() < margin - kEps || cyl.t0 + cyl.time_halfwidth() > t_final - margin + kEps)
        throw GeometryError("time window leaves the interior [" + format_double(margin) + ", " +
                            format_double(t_final - margin) + "]");
}

TimeGridFunction restrict(const Trajectory& traj, const SubCylinder& cyl) {
    auto layout = std::make_shared<FieldLayout>(FieldLayout::vector_field(traj.grid));
    layout->region = ball(traj, cyl);
    return make_function(traj, cyl, std::move(layout), false);
}

TimeGridFunction v_field(const Trajectory& traj, const SubCylinder& cyl) {
    auto layout = std::make_shared<FieldLayout>(FieldLayout::sym_tensor_field(traj.grid));
    layout->region = ball(traj, cyl);
    return make_function(traj, cyl, std::move(layout), true);
}

std::vector<SpaceRow> predicted_spaces(double p, int d) { return case_rows(p, d, regime_bound(p, d), true); }

std::vector<std::size_t> dyadic_steps(const TimeGridFunction& f, int r, double delta) {
    std::vector<std::size_t> ks;
    const std::size_t n = f.count() - 1;
    for (std::size_t k = 2; static_cast<double>(k) * f.dt <= delta * (1 + 1e-12) && static_cast<std::size_t>(r) * k < n;
         k *= 2)
        ks.push_back(k);
    if (ks.size() < 4)
        throw InsufficientResolutionError("only " + std::to_string(ks.size()) +
                                          " dyadic steps fit; refine dt, enlarge delta or the time window");
    return ks;
}

ExponentFit estimate_exponent(std::span<const double> h, std::span<const double> norms) {
    if (h.size() != norms.size()) throw DomainError("step and norm lists differ in length");
    if (h.size() < 4) throw InsufficientResolutionError("at least four steps are needed for a slope");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(h[i] > 0)) throw DomainError("steps must be positive");
        if (norms[i] > 0) {
            x.push_back(std::log(h[i]));
            y.push_back(std::log(norms[i]));
        }
    }
    if (x.size() < 2) return {kInfinity, 1.0};
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    const double r2 = syy > 0 ? (slope * sxy) / syy : 1.0;
    return {slope, r2};
}

SweepRow sweep_row(const TimeGridFunction& u, const TimeGridFunction& v, const SpaceRow& space, double delta,
                   std::span<const double> alpha_grid) {
    const TimeGridFunction& f = space.of_v ? v : u;
    SweepRow row;
    row.space = space;
    row.r = space.order();
    const SnapshotNorm norm(f, space.x_norm);
    row.lower_bound = norm.is_lower_bound();
    for (std::size_t k : dyadic_steps(f, row.r, delta)) {
        row.h.push_back(static_cast<double>(k) * f.dt);
        row.norms.push_back(difference_norm(f, row.r, k, space.time_p, norm));
    }
    row.fit = estimate_exponent(row.h, row.norms);
    for (double a : alpha_grid) {
        double best = 0.0;
        for (std::size_t i = 0; i < row.h.size(); ++i) best = std::max(best, std::pow(row.h[i], -a) * row.norms[i]);
        row.seminorms.emplace_back(a, best);
    }
    row.floor_ok = row.fit.alpha_hat >= space.predicted - kFloorTolerance;
    return row;
}

std::vector<SweepRow> seminorm_sweep(const Trajectory& traj, const SubCylinder& cyl, const std::vector<SpaceRow>& rows,
                                     double delta, std::span<const double> alpha_grid) {
    const TimeGridFunction u = restrict(traj, cyl);
    const bool need_v = std::any_of(rows.begin(), rows.end(), [](const SpaceRow& r) { return r.of_v; });
    const TimeGridFunction v = need_v ? v_field(traj, cyl) : TimeGridFunction{};
    std::vector<SweepRow> out;
    out.reserve(rows.size());
    for (const auto& s : rows) out.push_back(sweep_row(u, v, s, delta, alpha_grid));
    return out;
}

Theorem1Result check_theorem1(const Trajectory& coarse, const Trajectory& fine, const SubCylinder& inner, double R,
                              double alpha, double delta) {
    const double p = coarse.model.p;
    const int d = coarse.model.d;
    Theorem1Result res;
    res.regime = classify(p, d).kind;
    res.alpha = alpha;
    res.bound = regime_bound(p, d);
    if (!(alpha > 0 && alpha < res.bound))
        throw PreconditionError("alpha must lie in (0, " + format_double(res.bound) + ") for p = " + format_double(p));
    if (!(R > inner.r)) throw PreconditionError("outer radius R must exceed r");
    if (!(fine.model.p == p && fine.grid == coarse.grid)) throw PreconditionError("refined run differs in model or grid");
    SubCylinder outer = inner;
    outer.r = R;
    check_geometry(coarse, outer);

    const auto rows = case_rows(p, d, alpha, false);
    const auto uc = restrict(coarse, inner), uf = restrict(fine, inner);
    const auto vc = v_field(coarse, inner), vf = v_field(fine, inner);
    res.passed = true;
    for (const auto& row : rows) {
        Theorem1Row t;
        t.name = row.name;
        t.coarse = row_norm(row.of_v ? vc : uc, row, delta);
        t.fine = row_norm(row.of_v ? vf : uf, row, delta);
        t.growth = t.coarse > 0 ? t.fine / t.coarse : (t.fine > 0 ? kInfinity : 1.0);
        t.stable = std::isfinite(t.coarse) && std::isfinite(t.fine) && t.growth < kRefinementGrowth;
        res.passed = res.passed && t.stable;
        res.lhs += t.coarse;
        res.rows.push_back(std::move(t));
    }
    const auto big = restrict(coarse, outer);
    const double linf_l2 = bochner_norm(big, kInfinity, NormSpec::L(2));
    const double lp_w1p = bochner_norm(big, p, NormSpec::W1(p));
    res.bundle = (1 + linf_l2 + lp_w1p) / (R - inner.r);
    res.kappa_hat = std::log(res.lhs) / std::log(res.bundle);
    return res;
}

std::pair<std::size_t, std::size_t> interior_window(const Trajectory& traj) {
    const double t_final = traj.final_time();
    auto w = window_indices(traj, kInteriorMargin * t_final, (1 - kInteriorMargin) * t_final);
    w.first = std::max<std::size_t>(w.first, 1);
    return w;
}

Theorem2Result check_theorem2(const Trajectory& traj, double x0, double y0, double r, double R, std::size_t first,
                              std::size_t last, double c_frozen) {
    if (!(r > 0 && R > r)) throw PreconditionError("balls must satisfy 0 < r < R");
    const double extent = 2 * std::numbers::pi;
    if (R + kInteriorMargin * extent > extent / 2 + kEps)
        throw GeometryError("outer ball plus interior margin does not fit in a period cell");
    if (first < 1 || last < first || last > traj.steps())
        throw GeometryError("time window must lie in 1..steps for backward differences");

    const TorusGrid& g = traj.grid;
    const Region inner = Region::ball(g, x0, y0, r);
    const Region outer = Region::ball(g, x0, y0, R);
    const double area = g.cell_area();
    const double phi0 = traj.model.phi_dd0();
    const std::size_t np = g.points();
    std::vector<double> dx(np), dy(np);
    const double w[3] = {1.0, 2.0, 1.0};

    auto add_tensor_gradient = [&](const SymTensorField& t, double scale, std::vector<double>& acc) {
        for (int c = 0; c < 3; ++c) {
            centered_difference(g, t.plane(c), 0, dx);
            centered_difference(g, t.plane(c), 1, dy);
            for (std::size_t k = 0; k < np; ++k) acc[k] += scale * w[c] * (dx[k] * dx[k] + dy[k] * dy[k]);
        }
    };

    Theorem2Result res;
    res.c_frozen = c_frozen;
    std::vector<double> ut_norms;
    double lhs = 0.0, rhs_max = 0.0;
    bool finite = true;
    for (std::size_t i = first; i <= last; ++i) {
        const SpatialField& u = traj.snapshots[i];
        const SpatialField& prev = traj.snapshots[i - 1];
        const SymTensorField du = sym_gradient(u);
        std::vector<double> density(np, 0.0);
        add_tensor_gradient(apply_v_map(du, traj.model), 1.0, density);
        add_tensor_gradient(du, phi0, density);
        double l = 0.0;
        for (std::size_t k : inner.nodes) l += density[k];
        lhs = std::max(lhs, l * area);

        std::vector<double> grad_sq(np, 0.0);
        for (int c = 0; c < 2; ++c) {
            centered_difference(g, u.component(c), 0, dx);
            centered_difference(g, u.component(c), 1, dy);
            for (std::size_t k = 0; k < np; ++k) grad_sq[k] += dx[k] * dx[k] + dy[k] * dy[k];
        }
        double energy_part = 0.0, ut_sq = 0.0;
        for (std::size_t k : outer.nodes) {
            energy_part += phi(std::sqrt(grad_sq[k]), traj.model);
            for (int c = 0; c < 2; ++c) {
                const double ut = (u.component(c)[k] - prev.component(c)[k]) / traj.dt;
                ut_sq += ut * ut;
            }
        }
        finite = finite && std::isfinite(ut_sq) && std::isfinite(energy_part);
        ut_norms.push_back(std::sqrt(ut_sq * area));
        rhs_max = std::max(rhs_max, (energy_part + ut_sq) * area);
    }
    res.lhs = lhs;
    res.rhs = (1 + 1 / phi0) / ((R - r) * (R - r)) * rhs_max;
    res.observed = res.rhs > 0 ? res.lhs / res.rhs : (res.lhs > 0 ? kInfinity : 0.0);

    std::vector<double> sorted = ut_norms;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double mx = *std::max_element(ut_norms.begin(), ut_norms.end());
    res.ut_ratio = median > 0 ? mx / median : (mx > 0 ? kInfinity : 1.0);
    res.applicable = finite && res.ut_ratio <= kTimeDerivativeSpread;
    res.passed = res.applicable && res.lhs <= c_frozen * res.rhs + 1e-12 * std::max(1.0, c_frozen * res.rhs);
    return res;
}

std::string sweep_csv_header() {
    return "space,quantity,time_p,x_norm,r,alpha,seminorm,alpha_hat,r_squared,h_min,h_max,predicted,floor_ok,lower_bound";
}

std::vector<std::string> sweep_csv_rows(const SweepRow& row) {
    std::vector<std::string> out;
    for (const auto& [a, s] : row.seminorms) {
        std::ostringstream os;
        os << '"' << row.space.name << '"' << ',' << (row.space.of_v ? "V(Du)" : "u") << ','
           << format_double(row.space.time_p) << ',' << row.space.x_norm.label() << ',' << row.r << ','
           << format_double(a) << ',' << format_double(s) << ',' << format_double(row.fit.alpha_hat) << ','
           << format_double(row.fit.r_squared) << ',' << format_double(row.h.front()) << ','
           << format_double(row.h.back()) << ',' << format_double(row.space.predicted) << ','
           << (row.floor_ok ? 1 : 0) << ',' << (row.lower_bound ? 1 : 0);
        out.push_back(os.str());
    }
    return out;
}

std::string plot_data(const SweepRow& row) {
    std::ostringstream os;
    os << "# " << row.space.name << " r=" << row.r << "\n# log_h log_norm\n";
    for (std::size_t i = 0; i < row.h.size(); ++i)
        os << format_double(std::log(row.h[i])) << ' '
           << format_double(row.norms[i] > 0 ? std::log(row.norms[i]) : -kInfinity) << '\n';
    return os.str();
}

}  // namespace plap
