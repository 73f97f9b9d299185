#include "plap/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <exception>
#include <sstream>
#include <thread>

#include "plap/calibrated_constants.hpp"
#include "plap/errors.hpp"
#include "plap/format.hpp"

namespace plap {

namespace {

int floor_int(double x) { return static_cast<int>(std::floor(x)); }

bool close_to(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

void require(bool ok, const std::string& condition) {
    if (!ok) throw PreconditionError("hypothesis violated: " + condition);
}

// Sup over admissible h <= delta of h^{-alpha} |Delta_h^r f|_{L^p(I_{rh};X)}.
// Unlike nikolskii_seminorm it accepts r = [alpha] (first differences at
// alpha = 1), which the W^{1,p} norms need.
double seminorm(const TimeGridFunction& f, double alpha, double p, int r, double delta, const SnapshotNorm& norm) {
    const auto ks = admissible_steps(f, r, delta);
    if (ks.empty()) throw EmptyDomainError("no admissible step h for the seminorm");
    double best = 0.0;
    for (std::size_t k : ks) {
        const double v = difference_norm(f, r, k, p, norm);
        best = std::max(best, alpha == 0.0 ? v : v * std::pow(static_cast<double>(k) * f.dt, -alpha));
    }
    return best;
}

// |f|_{r,delta,N^{alpha,p}(I;X)} = seminorm + L^p norm.
double full_norm(const TimeGridFunction& f, double alpha, double p, int r, double delta, const SnapshotNorm& norm) {
    std::vector<double> g(f.count());
    for (std::size_t i = 0; i < f.count(); ++i) g[i] = norm(f.values[i]);
    return seminorm(f, alpha, p, r, delta, norm) + time_lebesgue(g, f.dt, p);
}

double lebesgue(const TimeGridFunction& f, double p, const SnapshotNorm& norm) {
    std::vector<double> g(f.count());
    for (std::size_t i = 0; i < f.count(); ++i) g[i] = norm(f.values[i]);
    return time_lebesgue(g, f.dt, p);
}

NormSpec default_space(const TimeGridFunction& f) { return f.layout ? NormSpec::L(2) : NormSpec::euclid(); }

class Echo {
public:
    Echo& operator()(const std::string& key, double v) {
        append(key, format_double(v));
        return *this;
    }
    Echo& operator()(const std::string& key, int v) {
        append(key, std::to_string(v));
        return *this;
    }
    Echo& operator()(const std::string& key, const std::string& v) {
        append(key, v);
        return *this;
    }
    std::string str() const { return s_; }

private:
    void append(const std::string& key, const std::string& v) {
        if (!s_.empty()) s_ += ';';
        s_ += key + '=' + v;
    }
    std::string s_;
};

InequalityReport finish(InequalityId id, double lhs, double rhs, double constant, std::string params,
                        bool extra_ok = true) {
    InequalityReport rep;
    rep.id = id;
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.constant_used = constant;
    rep.margin = rhs - lhs;
    rep.passed = extra_ok && within_slack(lhs, rhs);
    rep.params = std::move(params);
    return rep;
}

double calibrated_or(double given, double frozen) { return std::isnan(given) ? frozen : given; }

void require_derivative(const TimeGridFunction& f, const TimeGridFunction* df) {
    require(df != nullptr, "the derivative of f must be supplied");
    df->validate();
    require(df->snapshot_size() == f.snapshot_size(), "derivative and f have the same snapshot shape");
    require(close_to(df->t0, f.t0) && close_to(df->interval_len(), f.interval_len()),
            "derivative sampled on the interval of f");
}

// ---------------------------------------------------------------------------

InequalityReport delta_eq(const TimeGridFunction& f, const InequalityParams& q) {
    require(q.delta > 0 && q.delta <= q.delta2 && q.delta2 <= 1.0, "0 < delta1 <= delta2 <= 1");
    require(q.r >= natural_order(q.alpha), "r > [alpha]");
    const SnapshotNorm norm(f, default_space(f));
    const double n1 = full_norm(f, q.alpha, q.p, q.r, q.delta, norm);
    const double n2 = full_norm(f, q.alpha, q.p, q.r, q.delta2, norm);
    const double stated = std::pow(3.0, q.r) / std::pow(q.delta, q.alpha);
    const double proof = (std::pow(2.0, q.r) + 1.0) / std::pow(q.delta, q.alpha);
    const double c = q.corrupt ? std::pow(2.0, q.r) * 0.5 : stated;
    auto rep = finish(InequalityId::DeltaEq, n2, c * n1, c,
                      Echo()("alpha", q.alpha)("p", q.p)("r", q.r)("delta1", q.delta)("delta2", q.delta2)(
                          "corrupt", q.corrupt ? 1 : 0)
                          .str(),
                      within_slack(n1, n2));
    rep.extras = {{"lower_margin", n2 - n1}, {"proof_constant", proof}, {"proof_margin", proof * n1 - n2}};
    return rep;
}

InequalityReport step_change(const TimeGridFunction& f, const InequalityParams& q) {
    require(q.r0 >= natural_order(q.alpha), "r0 > [alpha]");
    require(q.r > q.r0, "r > r0");
    require(q.delta > 0 && q.delta <= 1.0, "0 < delta <= 1");
    const double cap = step_change_delta_cap(q.alpha, q.r0, q.r, f.interval_len());
    require(q.delta <= cap * (1 + 1e-12), "delta <= |I| / (r 2^{[1/(2(r0-alpha))]+2}) = " + format_double(cap));
    const SnapshotNorm norm(f, default_space(f));
    const double high = full_norm(f, q.alpha, q.p, q.r, q.delta, norm);
    const double low = full_norm(f, q.alpha, q.p, q.r0, q.delta, norm);
    const double lower_c = std::pow(2.0, q.r0 - q.r);
    const double c = std::pow(4.0 * q.r * q.r / ((q.r0 - q.alpha) * std::pow(q.delta, q.alpha)), q.r - q.r0);
    auto rep = finish(InequalityId::StepChange, low, c * high, c,
                      Echo()("alpha", q.alpha)("p", q.p)("r0", q.r0)("r", q.r)("delta", q.delta).str(),
                      within_slack(lower_c * high, low));
    rep.extras = {{"lower_margin", low - lower_c * high}, {"delta_cap", cap}};
    return rep;
}

InequalityReport marchaud(const TimeGridFunction& f, const InequalityParams& q) {
    require(q.r >= 1, "r >= 1");
    const std::size_t k = step_count(f, q.h);
    const std::size_t n = f.count() - 1;
    require(2 * static_cast<std::size_t>(q.r) * k < n, "2 r h < |I|");
    const SnapshotNorm norm(f, default_space(f));
    // coefficient vectors of Delta_h^r and Delta_{2h}^r on the stride-h lattice
    const std::size_t len = 2 * static_cast<std::size_t>(q.r) + 1;
    std::vector<double> coeff(len, 0.0);
    double binom = 1.0;
    for (int j = 0; j <= q.r; ++j) {
        const double sign = ((q.r - j) % 2 == 0) ? 1.0 : -1.0;
        coeff[static_cast<std::size_t>(j)] += sign * binom;
        coeff[2 * static_cast<std::size_t>(j)] -= std::pow(2.0, -q.r) * sign * binom;
        binom = binom * (q.r - j) / (j + 1);
    }
    const std::size_t m = n + 1 - 2 * static_cast<std::size_t>(q.r) * k;
    std::vector<double> g(m), buf(f.snapshot_size());
    for (std::size_t i = 0; i < m; ++i) {
        std::fill(buf.begin(), buf.end(), 0.0);
        for (std::size_t j = 0; j < len; ++j) {
            if (coeff[j] == 0.0) continue;
            const auto& s = f.values[i + j * k];
            for (std::size_t c = 0; c < buf.size(); ++c) buf[c] += coeff[j] * s[c];
        }
        g[i] = norm(buf);
    }
    const double lhs = time_lebesgue(g, f.dt, q.p);
    const double c = 0.5 * q.r;
    const double rhs = c * difference_norm(f, q.r + 1, k, q.p, norm);
    return finish(InequalityId::Marchaud, lhs, rhs, c, Echo()("p", q.p)("r", q.r)("h", q.h).str());
}

InequalityReport reduction(const TimeGridFunction& f, const TimeGridFunction* df, const InequalityParams& q) {
    require(q.beta == 1, "derivative order beta = 1");
    require(q.r >= natural_order(q.alpha), "r > [alpha]");
    require(q.delta > 0 && q.delta <= 1.0, "0 < delta <= 1");
    require_derivative(f, df);
    const SnapshotNorm norm(f, default_space(f));
    const SnapshotNorm dnorm(*df, default_space(*df));
    const double lhs = seminorm(f, q.alpha + q.beta, q.p, q.r + q.beta, q.delta, norm);
    const double rhs = seminorm(*df, q.alpha, q.p, q.r, q.delta, dnorm);
    return finish(InequalityId::Reduction, lhs, rhs, 1.0,
                  Echo()("alpha", q.alpha)("p", q.p)("r", q.r)("beta", q.beta)("delta", q.delta)(
                      "derivative_dt", df->dt)
                      .str());
}

InequalityReport accession(const TimeGridFunction& f, const TimeGridFunction* df, const InequalityParams& q) {
    require(q.beta == 1, "derivative order beta = 1");
    require(q.alpha > q.beta, "alpha > beta");
    require(q.r >= natural_order(q.alpha), "r > [alpha]");
    require(q.delta > 0 && q.delta <= 1.0, "0 < delta <= 1");
    require_derivative(f, df);
    const SnapshotNorm norm(f, default_space(f));
    const SnapshotNorm dnorm(*df, default_space(*df));
    const double lhs = full_norm(*df, q.alpha - q.beta, q.p, q.r - q.beta, q.delta, dnorm);
    const double inner = calibrated_or(q.constant, calibrated::kAccession);
    const double c = inner * std::pow(6.0, q.r) / std::pow(q.delta, q.alpha);
    const double rhs = c * full_norm(f, q.alpha, q.p, q.r, q.delta, norm);
    auto rep = finish(InequalityId::Accession, lhs, rhs, c,
                      Echo()("alpha", q.alpha)("p", q.p)("r", q.r)("beta", q.beta)("delta", q.delta)(
                          "C", inner)
                          .str());
    return rep;
}

InequalityReport interpolation(const TimeGridFunction& f, const InequalityParams& q) {
    require(f.layout != nullptr, "f takes values in a space of fields");
    require(q.z == NormSpec::L(2) && q.x == NormSpec::W1(2) && q.y == NormSpec::Wm1(2) && q.b == 0.5,
            "(Z, X, Y, b) = (L2, W12, Wm12, 1/2), the configuration with |g|_Z <= C |g|_X^{1/2} |g|_Y^{1/2}");
    require(q.alpha1 >= 0 && q.alpha2 >= 0, "alpha1, alpha2 >= 0");
    require(q.r >= natural_order(std::max(q.alpha1, q.alpha2)), "r > [max(alpha1, alpha2)]");
    require(q.delta > 0 && q.delta <= 1.0, "0 < delta <= 1");
    const double ab = (1 - q.b) * q.alpha1 + q.b * q.alpha2;
    const SnapshotNorm nz(f, q.z), nx(f, q.x), ny(f, q.y);
    const double lhs = seminorm(f, ab, q.p, q.r, q.delta, nz);
    const double sx = seminorm(f, q.alpha1, q.p, q.r, q.delta, nx);
    const double sy = seminorm(f, q.alpha2, q.p, q.r, q.delta, ny);
    const double c = calibrated_or(q.constant, calibrated::kInterpolation);
    const double rhs = c * std::pow(sx, 1 - q.b) * std::pow(sy, q.b);
    return finish(InequalityId::Interpolation, lhs, rhs, c,
                  Echo()("Z", q.z.label())("X", q.x.label())("Y", q.y.label())("b", q.b)("alpha1", q.alpha1)(
                      "alpha2", q.alpha2)("alpha_b", ab)("p", q.p)("r", q.r)("delta", q.delta)
                      .str());
}

InequalityReport embed_sobolev(const TimeGridFunction& f, const TimeGridFunction* df, const InequalityParams& q) {
    require(q.beta == 0 || q.beta == 1, "[alpha] in {0, 1}");
    require(q.gamma > 0 && q.gamma < 1, "0 < gamma < 1");
    require(q.delta > 0 && q.delta <= 1.0, "0 < delta <= 1");
    const SnapshotNorm norm(f, default_space(f));
    double lhs = lebesgue(f, q.p, norm);
    if (q.beta == 1) {
        require_derivative(f, df);
        lhs += lebesgue(*df, q.p, SnapshotNorm(*df, default_space(*df)));
    }
    const double inner = calibrated_or(q.constant, calibrated::kEmbedSobolev);
    const double c = inner * std::pow(6.0, q.beta) / (q.gamma * std::pow(q.delta, q.beta + q.gamma));
    const double a = q.beta + q.gamma;
    const double rhs = c * full_norm(f, a, q.p, natural_order(a), q.delta, norm);
    return finish(InequalityId::EmbedSobolev, lhs, rhs, c,
                  Echo()("k", q.beta)("gamma", q.gamma)("p", q.p)("delta", q.delta)("C", inner).str());
}

InequalityReport embed_nik(const TimeGridFunction& f, const InequalityParams& q) {
    require(q.alpha >= q.alpha_prime && q.alpha_prime >= 0, "alpha >= alpha' >= 0");
    require(q.p >= 1 && q.q >= 1, "p, q in [1, inf]");
    const double beta = q.alpha - 1.0 / q.p - (q.alpha_prime - 1.0 / q.q);
    require(beta > 0, "beta = alpha - 1/p - (alpha' - 1/q) > 0");
    require(q.delta > 0 && q.delta <= 1.0, "0 < delta <= 1");
    const double cap = embed_nik_delta_cap(q.alpha, q.alpha_prime, beta, f.interval_len());
    require(q.delta <= cap * (1 + 1e-12), "delta <= " + format_double(cap));
    const SnapshotNorm norm(f, default_space(f));
    const double lhs = full_norm(f, q.alpha_prime, q.q, natural_order(q.alpha_prime), q.delta, norm);
    const double inner = calibrated_or(q.constant, calibrated::kEmbedNik);
    const double c = q.alpha == q.alpha_prime
                         ? inner
                         : embed_nik_scale(q.alpha, q.alpha_prime, beta, q.delta) *
                               std::pow(inner, q.alpha - q.alpha_prime + 2);
    const double rhs = c * full_norm(f, q.alpha, q.p, natural_order(q.alpha), q.delta, norm);
    auto rep = finish(InequalityId::EmbedNik, lhs, rhs, c,
                      Echo()("alpha", q.alpha)("p", q.p)("alpha_prime", q.alpha_prime)("q", q.q)("beta", beta)(
                          "delta", q.delta)("C", inner)
                          .str());
    rep.extras = {{"delta_cap", cap}};
    return rep;
}

InequalityReport holder(const TimeGridFunction& f, const InequalityParams& q) {
    require(q.alpha > 0 && q.alpha < 1, "0 < alpha < 1");
    const double s = q.alpha - 1.0 / q.p;
    require(s > 0, "alpha - 1/p > 0");
    require(q.delta > 0 && q.delta <= 1.0, "0 < delta <= 1");
    const SnapshotNorm norm(f, default_space(f));
    const std::size_t n = f.count();
    double sup = 0.0, hold = 0.0;
    std::vector<double> buf(f.snapshot_size());
    for (std::size_t i = 0; i < n; ++i) {
        sup = std::max(sup, norm(f.values[i]));
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t c = 0; c < buf.size(); ++c) buf[c] = f.values[j][c] - f.values[i][c];
            hold = std::max(hold, norm(buf) / std::pow(static_cast<double>(j - i) * f.dt, s));
        }
    }
    const double c = 3.0 / std::pow(q.delta, q.alpha);
    const double rhs = c * full_norm(f, q.alpha, q.p, natural_order(q.alpha), q.delta, norm);
    return finish(InequalityId::Holder, sup + hold, rhs, c,
                  Echo()("alpha", q.alpha)("p", q.p)("exponent", s)("delta", q.delta).str());
}

InequalityReport sobolev_eq(const TimeGridFunction& f, const InequalityParams& q) {
    require(q.delta > 0 && q.delta <= q.delta2 && q.delta2 <= 1.0, "0 < delta1 <= delta2 <= 1");
    const SnapshotNorm norm(f, default_space(f));
    const double n1 = full_norm(f, 1.0, q.p, 1, q.delta, norm);
    const double n2 = full_norm(f, 1.0, q.p, 1, q.delta2, norm);
    const double c = 3.0 / q.delta;
    auto rep = finish(InequalityId::SobolevEq, n2, c * n1, c,
                      Echo()("p", q.p)("delta1", q.delta)("delta2", q.delta2).str(), within_slack(n1, n2));
    rep.extras = {{"lower_margin", n2 - n1}};
    return rep;
}

}  // namespace

std::string to_string(InequalityId id) {
    switch (id) {
        case InequalityId::DeltaEq: return "DELTA_EQ";
        case InequalityId::StepChange: return "STEP_CHANGE";
        case InequalityId::Marchaud: return "MARCHAUD";
        case InequalityId::Reduction: return "REDUCTION";
        case InequalityId::Accession: return "ACCESSION";
        case InequalityId::Interpolation: return "INTERPOLATION";
        case InequalityId::EmbedSobolev: return "EMBED_SOBOLEV";
        case InequalityId::EmbedNik: return "EMBED_NIK";
        case InequalityId::Holder: return "HOLDER";
        case InequalityId::SobolevEq: return "SOBOLEV_EQ";
    }
    return "UNKNOWN";
}

InequalityId parse_inequality_id(const std::string& text) {
    for (InequalityId id : kAllInequalities)
        if (to_string(id) == text) return id;
    throw ValidationError("unknown inequality id '" + text + "'");
}

bool is_calibrated(InequalityId id) {
    return id == InequalityId::Accession || id == InequalityId::Interpolation || id == InequalityId::EmbedSobolev ||
           id == InequalityId::EmbedNik;
}

bool within_slack(double lhs, double rhs) { return lhs <= rhs + 1e-12 * std::max(1.0, rhs); }

double step_change_delta_cap(double alpha, int r0, int r, double len) {
    if (!(r0 > alpha)) throw PreconditionError("hypothesis violated: alpha < r0");
    const int e = floor_int(1.0 / (2.0 * (r0 - alpha))) + 2;
    return len / (static_cast<double>(r) * std::pow(2.0, e));
}

double embed_nik_delta_cap(double alpha, double alpha_prime, double beta, double len) {
    const double whole = std::floor(alpha);
    const double base = (alpha - alpha_prime + 2) / (std::floor(alpha_prime) + 1 - alpha_prime);
    const double tilde = alpha == whole ? base : base / (alpha - whole);
    return std::min(len / std::pow(2.0, floor_int(tilde / beta) + 3), 1.0);
}

double embed_nik_scale(double alpha, double alpha_prime, double beta, double delta) {
    const double whole = std::floor(alpha);
    const double gap = alpha - alpha_prime;
    const double frac = std::floor(alpha_prime) + 1 - alpha_prime;
    const double first = alpha == whole ? (gap + 2) * (gap + 2) / std::pow(frac, 3)
                                        : (gap + 2) * (gap + 2) / (frac * std::pow(alpha - whole, 3));
    const double m = std::min(beta, gap);
    const double base = std::max(first, 1.0 / gap) * std::pow(6.0, alpha) /
                        (std::min(m * m, 1.0) * std::pow(delta, 1 + alpha));
    return std::pow(base, gap + 2);
}

InequalityParams default_params(InequalityId id, double p, double dt) {
    InequalityParams q;
    q.p = p;
    switch (id) {
        case InequalityId::DeltaEq:
            q.alpha = 0.5, q.r = 1, q.delta = 0.125, q.delta2 = 0.25;
            break;
        case InequalityId::StepChange:
            q.alpha = 0.5, q.r0 = 1, q.r = 2, q.delta = 1.0 / 16;
            break;
        case InequalityId::Marchaud:
            q.r = 1, q.h = 8 * dt;
            break;
        case InequalityId::Reduction:
            q.alpha = 0.5, q.r = 1, q.beta = 1, q.delta = 0.125;
            break;
        case InequalityId::Accession:
            q.alpha = 1.5, q.r = 2, q.beta = 1, q.delta = 0.125;
            break;
        case InequalityId::Interpolation:
            q.r = 1, q.b = 0.5, q.alpha1 = 0.25, q.alpha2 = 0.75, q.delta = 0.125;
            break;
        case InequalityId::EmbedSobolev:
            q.beta = 1, q.gamma = 0.5, q.delta = 0.125;
            break;
        case InequalityId::EmbedNik:
            q.alpha = 0.9, q.p = kInfinity, q.alpha_prime = 0.25, q.q = 2.0, q.delta = 1.0 / 64;
            break;
        case InequalityId::Holder:
            q.alpha = 0.75, q.p = kInfinity, q.delta = 0.125;
            break;
        case InequalityId::SobolevEq:
            q.delta = 0.125, q.delta2 = 0.25;
            break;
    }
    return q;
}

InequalityReport check_inequality(InequalityId id, const TimeGridFunction& f, const InequalityParams& params,
                                  const TimeGridFunction* derivative) {
    f.validate();
    require(params.p >= 1.0, "p >= 1");
    switch (id) {
        case InequalityId::DeltaEq: return delta_eq(f, params);
        case InequalityId::StepChange: return step_change(f, params);
        case InequalityId::Marchaud: return marchaud(f, params);
        case InequalityId::Reduction: return reduction(f, derivative, params);
        case InequalityId::Accession: return accession(f, derivative, params);
        case InequalityId::Interpolation: return interpolation(f, params);
        case InequalityId::EmbedSobolev: return embed_sobolev(f, derivative, params);
        case InequalityId::EmbedNik: return embed_nik(f, params);
        case InequalityId::Holder: return holder(f, params);
        case InequalityId::SobolevEq: return sobolev_eq(f, params);
    }
    throw DomainError("unknown inequality id");
}

std::string csv_header_inequalities() { return "id,function,lhs,rhs,constant_used,margin,passed,params,extras"; }

std::string csv_row(const InequalityReport& r, const std::string& function_name) {
    std::string extras;
    for (const auto& [k, v] : r.extras) {
        if (!extras.empty()) extras += ';';
        extras += k + '=' + format_double(v);
    }
    std::ostringstream os;
    os << to_string(r.id) << ',' << function_name << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
       << format_double(r.constant_used) << ',' << format_double(r.margin) << ',' << (r.passed ? 1 : 0) << ','
       << r.params << ',' << extras;
    return os.str();
}

}  // namespace plap

namespace plap {

std::size_t CorpusCheckResult::failures() const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [](const CorpusCheck& c) { return !c.report.passed; }));
}

namespace {

std::vector<CorpusCheck> check_member(const std::vector<CorpusFunction>& corpus, std::size_t i,
                                      const CorpusCheckOptions& opt, std::size_t& skipped) {
    const CorpusFunction& m = corpus[i];
    std::vector<CorpusCheck> out;
    auto run = [&](InequalityId id, InequalityParams q, const TimeGridFunction& f, const TimeGridFunction* df) {
        if (opt.unit_constants && is_calibrated(id)) q.constant = 1.0;
        out.push_back({m.name, check_inequality(id, f, q, df)});
    };
    const double dt = m.f.dt;
    for (InequalityId id : kAllInequalities) {
        InequalityParams q = default_params(id, m.p, dt);
        switch (id) {
            case InequalityId::DeltaEq:
                q.corrupt = opt.corrupt;
                run(id, q, m.f, nullptr);
                break;
            case InequalityId::Marchaud:
                for (int r = 1; r <= 3; ++r) {
                    for (double h : {dt, 8 * dt}) {
                        q.r = r;
                        q.h = h;
                        run(id, q, m.f, nullptr);
                    }
                }
                break;
            case InequalityId::Reduction:
                if (m.derivative_fine) run(id, q, m.f, &*m.derivative_fine);
                else ++skipped;
                break;
            case InequalityId::Accession:
            case InequalityId::EmbedSobolev:
                if (m.derivative) run(id, q, m.f, &*m.derivative);
                else ++skipped;
                break;
            case InequalityId::Interpolation: {
                const auto field = interpolation_field(corpus, i, opt.field_seed);
                run(id, q, field, nullptr);
                break;
            }
            default: run(id, q, m.f, nullptr); break;
        }
    }
    return out;
}

}  // namespace

CorpusCheckResult check_corpus(const std::vector<CorpusFunction>& corpus, const CorpusCheckOptions& options) {
    const std::size_t n = corpus.size();
    std::vector<std::vector<CorpusCheck>> per(n);
    std::vector<std::size_t> skipped(n, 0);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                per[i] = check_member(corpus, i, options, skipped[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    CorpusCheckResult res;
    for (std::size_t i = 0; i < n; ++i) {
        res.skipped += skipped[i];
        for (auto& c : per[i]) res.checks.push_back(std::move(c));
    }
    return res;
}

}  // namespace plap
