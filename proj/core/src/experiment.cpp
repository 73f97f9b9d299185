#include "plap/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "plap/calibrated_constants.hpp"
#include "plap/corpus.hpp"
#include "plap/errors.hpp"
#include "plap/exponent_engine.hpp"
#include "plap/format.hpp"
#include "plap/inequalities.hpp"
#include "plap/regularity_analyzer.hpp"
#include "plap/trajectory_io.hpp"

namespace plap {

namespace fs = std::filesystem;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"model", {"model", "p", "mu"}},
        {"grid", {"n"}},
        {"time", {"dt", "T_final"}},
        {"initial", {"type", "seed", "cutoff", "amplitude"}},
        {"solver", {"tolerance", "max_iterations"}},
        {"analyze", {"trajectory", "refined", "x0", "y0", "t0", "r", "R", "delta", "alpha", "alpha_grid", "assert"}},
        {"exponents", {"p", "d", "targets", "alpha0"}},
        {"verify", {"size", "seed", "corrupt", "threads", "intervals"}},
    };
    return keys;
}

// A typo in a key would otherwise silently fall back to the default.
void reject_unknown_keys(const Config& cfg) {
    for (const auto& [section, body] : cfg) {
        const auto it = known_keys().find(section);
        if (it == known_keys().end()) throw ValidationError("unknown config section [" + section + "]");
        if (!body.data().empty()) throw ValidationError("key '" + section + "' outside any section");
        for (const auto& [key, value] : body)
            if (!it->second.count(key)) throw ValidationError("unknown key '" + key + "' in [" + section + "]");
    }
}

std::optional<std::string> raw(const Config& cfg, const std::string& path) {
    auto v = cfg.get_optional<std::string>(Config::path_type(path, '.'));
    if (!v) return std::nullopt;
    std::string s = *v;
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& text, const std::string& key) {
    T value{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty())
        throw ValidationError("'" + key + "' = '" + text + "' is not a valid number");
    return value;
}

template <class T>
T number(const Config& cfg, const std::string& key, T fallback) {
    const auto v = raw(cfg, key);
    return v ? parse_number<T>(*v, key) : fallback;
}

template <class T>
std::optional<T> optional_number(const Config& cfg, const std::string& key) {
    const auto v = raw(cfg, key);
    if (!v) return std::nullopt;
    return parse_number<T>(*v, key);
}

template <class T>
std::vector<T> number_list(const Config& cfg, const std::string& key, std::vector<T> fallback) {
    const auto v = raw(cfg, key);
    if (!v) return fallback;
    std::string text = *v;
    std::replace(text.begin(), text.end(), ',', ' ');
    std::istringstream in(text);
    std::vector<T> out;
    for (std::string tok; in >> tok;) out.push_back(parse_number<T>(tok, key));
    if (out.empty()) throw ValidationError("'" + key + "' is an empty list");
    return out;
}

bool boolean(const Config& cfg, const std::string& key, bool fallback) {
    const auto v = raw(cfg, key);
    if (!v) return fallback;
    if (*v == "true" || *v == "yes" || *v == "1") return true;
    if (*v == "false" || *v == "no" || *v == "0") return false;
    throw ValidationError("'" + key + "' = '" + *v + "' is not a boolean");
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(message);
}

std::ofstream open_output(const fs::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot write " + file.string());
    return out;
}

std::string slug(const std::string& name) {
    std::string out;
    for (char c : name) {
        if (std::isalnum(static_cast<unsigned char>(c))) out += c;
        else if (!out.empty() && out.back() != '_') out += '_';
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out;
}

}  // namespace

Config parse_config(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    try {
        boost::property_tree::ini_parser::read_ini(in, cfg);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ValidationError(std::string("malformed config: ") + e.what());
    }
    reject_unknown_keys(cfg);
    return cfg;
}

Config load_config(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot read config " + file.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

SolveSettings solve_settings(const Config& cfg, std::optional<std::uint64_t> seed) {
    reject_unknown_keys(cfg);
    SolveSettings s;
    try {
        s.model.model = parse_model(raw(cfg, "model.model").value_or("A2"));
        s.model.p = number(cfg, "model.p", 2.0);
        s.model.mu = number(cfg, "model.mu", 1.0);
        s.model.validate();
        s.n = number(cfg, "grid.n", s.n);
        (void)TorusGrid(s.n);
    } catch (const DomainError& e) {
        throw ValidationError(e.what());
    }
    s.dt = number(cfg, "time.dt", s.dt);
    s.t_final = number(cfg, "time.T_final", s.t_final);
    require(s.dt > 0 && std::isfinite(s.dt), "time step dt must be positive");
    require(s.t_final > 0 && std::isfinite(s.t_final), "T_final must be positive");
    try {
        (void)step_count_for(s.t_final, s.dt);
    } catch (const DomainError& e) {
        throw ValidationError(e.what());
    }
    s.initial = raw(cfg, "initial.type").value_or(s.initial);
    require(s.initial == "eigenfield" || s.initial == "random_smooth" || s.initial == "kink",
            "initial type must be eigenfield, random_smooth or kink");
    s.seed = seed ? *seed : number<std::uint64_t>(cfg, "initial.seed", s.seed);
    s.cutoff = number(cfg, "initial.cutoff", s.cutoff);
    require(s.cutoff >= 1 && s.cutoff < s.n / 2, "cutoff must lie in [1, n/2)");
    s.amplitude = number(cfg, "initial.amplitude", s.amplitude);
    require(std::isfinite(s.amplitude), "amplitude must be finite");
    s.solver.tolerance = number(cfg, "solver.tolerance", s.solver.tolerance);
    s.solver.max_iterations = number(cfg, "solver.max_iterations", s.solver.max_iterations);
    require(s.solver.tolerance > 0, "solver tolerance must be positive");
    require(s.solver.max_iterations >= 1, "max_iterations must be at least 1");
    return s;
}

AnalyzeSettings analyze_settings(const Config& cfg, const fs::path& base_dir) {
    reject_unknown_keys(cfg);
    AnalyzeSettings s;
    auto resolve = [&](const std::string& p) {
        const fs::path path(p);
        return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
    };
    const auto traj = raw(cfg, "analyze.trajectory");
    require(traj && !traj->empty(), "[analyze] trajectory is required");
    s.trajectory = resolve(*traj);
    if (const auto ref = raw(cfg, "analyze.refined"); ref && !ref->empty()) s.refined = resolve(*ref);
    s.x0 = number(cfg, "analyze.x0", s.x0);
    s.y0 = number(cfg, "analyze.y0", s.y0);
    s.t0 = optional_number<double>(cfg, "analyze.t0");
    s.r = number(cfg, "analyze.r", s.r);
    s.R = number(cfg, "analyze.R", s.R);
    s.delta = number(cfg, "analyze.delta", s.delta);
    s.alpha = optional_number<double>(cfg, "analyze.alpha");
    s.alpha_grid = number_list(cfg, "analyze.alpha_grid", s.alpha_grid);
    s.assert_checks = boolean(cfg, "analyze.assert", s.assert_checks);
    require(s.r > 0 && s.R > s.r, "radii must satisfy 0 < r < R");
    require(s.delta > 0 && s.delta <= 1, "delta must lie in (0, 1]");
    for (double a : s.alpha_grid) require(a >= 0 && std::isfinite(a), "alpha_grid entries must be nonnegative");
    if (s.alpha) require(*s.alpha > 0, "alpha must be positive");
    return s;
}

ExponentSettings exponent_settings(const Config& cfg) {
    reject_unknown_keys(cfg);
    ExponentSettings s;
    s.p = number_list(cfg, "exponents.p", s.p);
    s.d = number_list(cfg, "exponents.d", s.d);
    s.targets = number_list(cfg, "exponents.targets", s.targets);
    s.alpha0 = number(cfg, "exponents.alpha0", s.alpha0);
    for (double p : s.p) require(p >= 2 && std::isfinite(p), "exponent sweep needs p >= 2");
    for (int d : s.d) require(d == 2 || d == 3, "exponent sweep needs d in {2, 3}");
    require(s.alpha0 >= 0 && s.alpha0 <= 1, "alpha0 must lie in [0, 1]");
    for (double t : s.targets) require(t > s.alpha0 && std::isfinite(t), "targets must exceed alpha0");
    return s;
}

VerifySettings verify_settings(const Config& cfg, std::optional<std::uint64_t> seed) {
    reject_unknown_keys(cfg);
    VerifySettings s;
    s.size = number<std::size_t>(cfg, "verify.size", s.size);
    s.seed = seed ? *seed : number<std::uint64_t>(cfg, "verify.seed", s.seed);
    s.corrupt = boolean(cfg, "verify.corrupt", s.corrupt);
    s.threads = number<unsigned>(cfg, "verify.threads", s.threads);
    s.intervals = number(cfg, "verify.intervals", s.intervals);
    require(s.intervals >= 64, "verify intervals must be at least 64");
    return s;
}

RunResult run_solve(const SolveSettings& s, const fs::path& out_dir) {
    const TorusGrid grid(s.n);
    SpatialField u0 = s.initial == "eigenfield"      ? eigenfield(grid, s.amplitude)
                      : s.initial == "random_smooth" ? random_smooth(grid, s.seed, s.cutoff, s.amplitude)
                                                     : kink_field(grid, s.amplitude);
    RunResult res;
    Trajectory tr, partial;
    Metadata extra{{"initial", s.initial},
                   {"seed", std::to_string(s.seed)},
                   {"cutoff", std::to_string(s.cutoff)},
                   {"amplitude", format_double(s.amplitude)}};
    try {
        tr = solve(u0, s.t_final, s.dt, s.model, s.solver, &partial);
        res.summary = "solved " + std::to_string(tr.steps()) + " steps";
    } catch (const SolverFailure& e) {
        tr = std::move(partial);
        res.exit_code = kExitComputation;
        res.summary = e.what();
        extra["failure"] = e.what();
    }

    fs::create_directories(out_dir);
    const fs::path file = out_dir / "trajectory.bin";
    write_trajectory(file, tr, extra);
    res.files = {file, meta_path(file), out_dir / "diagnostics.csv"};
    auto out = open_output(res.files.back());
    out << "step,time,newton_iterations,residual,energy\n";
    out << "0,0,0,0," << format_double(tr.initial_energy) << '\n';
    for (std::size_t k = 0; k < tr.diagnostics.size(); ++k) {
        const auto& d = tr.diagnostics[k];
        out << k + 1 << ',' << format_double(static_cast<double>(k + 1) * tr.dt) << ',' << d.newton_iterations << ','
            << format_double(d.residual) << ',' << format_double(d.energy) << '\n';
    }
    return res;
}

RunResult run_analyze(const AnalyzeSettings& s, const fs::path& out_dir) {
    if (!fs::exists(s.trajectory)) throw IoError("trajectory file not found: " + s.trajectory.string());
    if (s.refined && !fs::exists(*s.refined))
        throw IoError("refined trajectory file not found: " + s.refined->string());
    const Trajectory tr = read_trajectory(s.trajectory);
    const double p = tr.model.p;
    const SubCylinder cyl{s.x0, s.y0, s.t0.value_or(0.5 * tr.final_time()), s.r};

    // everything is computed before the first file is written
    const auto sweep = seminorm_sweep(tr, cyl, predicted_spaces(p, tr.model.d), s.delta, s.alpha_grid);
    const auto [first, last] = interior_window(tr);
    const auto t2 = check_theorem2(tr, s.x0, s.y0, s.r, s.R, first, last, calibrated::kCaccioppoli);
    std::optional<Theorem1Result> t1;
    if (s.refined) {
        const Trajectory fine = read_trajectory(*s.refined);
        t1 = check_theorem1(tr, fine, cyl, s.R, s.alpha.value_or(0.9 * regime_bound(p, tr.model.d)), s.delta);
    }

    std::ostringstream sweep_csv, checks;
    sweep_csv << sweep_csv_header() << '\n';
    std::size_t floor_failures = 0;
    for (const auto& row : sweep) {
        for (const auto& line : sweep_csv_rows(row)) sweep_csv << line << '\n';
        if (!row.floor_ok) ++floor_failures;
    }
    checks << "check,item,value\n";
    checks << "floors,rows," << sweep.size() << '\n';
    checks << "floors,failed," << floor_failures << '\n';
    checks << "caccioppoli,lhs," << format_double(t2.lhs) << '\n';
    checks << "caccioppoli,rhs," << format_double(t2.rhs) << '\n';
    checks << "caccioppoli,observed," << format_double(t2.observed) << '\n';
    checks << "caccioppoli,c_frozen," << format_double(t2.c_frozen) << '\n';
    checks << "caccioppoli,ut_ratio," << format_double(t2.ut_ratio) << '\n';
    checks << "caccioppoli,applicable," << (t2.applicable ? 1 : 0) << '\n';
    checks << "caccioppoli,passed," << (t2.passed ? 1 : 0) << '\n';
    if (t1) {
        checks << "nested_cylinder,regime," << to_string(t1->regime) << '\n';
        checks << "nested_cylinder,alpha," << format_double(t1->alpha) << '\n';
        for (const auto& row : t1->rows)
            checks << "nested_cylinder,growth " << row.name << ',' << format_double(row.growth) << '\n';
        checks << "nested_cylinder,lhs," << format_double(t1->lhs) << '\n';
        checks << "nested_cylinder,bundle," << format_double(t1->bundle) << '\n';
        checks << "nested_cylinder,kappa_hat," << format_double(t1->kappa_hat) << '\n';
        checks << "nested_cylinder,passed," << (t1->passed ? 1 : 0) << '\n';
    }

    RunResult res;
    fs::create_directories(out_dir);
    res.files.push_back(out_dir / "sweep.csv");
    open_output(res.files.back()) << sweep_csv.str();
    for (std::size_t k = 0; k < sweep.size(); ++k) {
        res.files.push_back(out_dir / ("plot_" + std::to_string(k) + "_" + slug(sweep[k].space.name) + ".dat"));
        open_output(res.files.back()) << plot_data(sweep[k]);
    }
    res.files.push_back(out_dir / "checks.csv");
    open_output(res.files.back()) << checks.str();

    const bool t2_failed = t2.applicable && !t2.passed;
    const bool t1_failed = t1 && !t1->passed;
    std::ostringstream summary;
    summary << sweep.size() << " space rows, " << floor_failures << " below the predicted floor; Caccioppoli ratio "
            << format_double(t2.observed) << (t2.applicable ? "" : " (hypothesis not met)");
    if (t1) summary << "; nested-cylinder refinement " << (t1->passed ? "stable" : "unstable");
    res.summary = summary.str();
    if (s.assert_checks && (floor_failures > 0 || t2_failed || t1_failed)) res.exit_code = kExitAssertion;
    return res;
}

RunResult run_exponents(const ExponentSettings& s, const fs::path& out_dir) {
    std::ostringstream csv;
    csv << "p,d,regime,gamma0,gamma1,target,N\n";
    for (double p : s.p) {
        for (int d : s.d) {
            const Regime reg = classify(p, d);
            const double g0 = p > 2 ? gamma0(p, d) : std::numeric_limits<double>::quiet_NaN();
            const double g1 = gamma1(p, d);
            for (double target : s.targets) {
                std::string steps;
                try {
                    steps = std::to_string(iterate(p, d, s.alpha0, target).steps);
                } catch (const UnreachableTargetError&) {
                    steps = "unreachable";
                }
                csv << format_double(p) << ',' << d << ',' << to_string(reg.kind) << ',' << format_double(g0) << ','
                    << format_double(g1) << ',' << format_double(target) << ',' << steps << '\n';
            }
        }
    }
    RunResult res;
    fs::create_directories(out_dir);
    res.files.push_back(out_dir / "exponents.csv");
    open_output(res.files.back()) << csv.str();
    res.summary = std::to_string(s.p.size() * s.d.size() * s.targets.size()) + " exponent rows";
    return res;
}

RunResult run_verify(const VerifySettings& s, const fs::path& out_dir) {
    CorpusOptions co;
    co.size = s.size;
    co.seed = s.seed;
    co.intervals = static_cast<std::size_t>(s.intervals);
    const auto corpus = make_corpus(co);
    CorpusCheckOptions opt;
    opt.field_seed = s.seed;
    opt.corrupt = s.corrupt;
    opt.threads = s.threads;
    const auto result = check_corpus(corpus, opt);

    std::ostringstream csv;
    csv << csv_header_inequalities() << '\n';
    for (const auto& c : result.checks) csv << csv_row(c.report, c.function) << '\n';
    RunResult res;
    fs::create_directories(out_dir);
    res.files.push_back(out_dir / "inequalities.csv");
    open_output(res.files.back()) << csv.str();
    const std::size_t failures = result.failures();
    res.summary = std::to_string(result.checks.size()) + " checks, " + std::to_string(failures) + " failed, " +
                  std::to_string(result.skipped) + " skipped";
    if (failures > 0) res.exit_code = kExitAssertion;
    return res;
}

}  // namespace plap
