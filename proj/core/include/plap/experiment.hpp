#pragma once

// Batch experiments driven by INI configuration files. Every run_* function
// takes settings that were fully validated by the matching *_settings
// parser, so an invalid configuration is rejected before any file is written.
//
//   [model]    model = A1|A2, p, mu
//   [grid]     n
//   [time]     dt, T_final
//   [initial]  type = eigenfield|random_smooth|kink, seed, cutoff, amplitude
//   [solver]   tolerance, max_iterations
//   [analyze]  trajectory, refined, x0, y0, t0, r, R, delta, alpha, alpha_grid, assert
//   [exponents] p, d, targets, alpha0         (lists: comma or space separated)
//   [verify]   size, seed, corrupt, threads, intervals

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "plap/pde_solver.hpp"

namespace plap {

using Config = boost::property_tree::ptree;

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitComputation = 2;
inline constexpr int kExitAssertion = 3;

/// Throws ValidationError for unreadable or malformed files.
Config load_config(const std::filesystem::path& file);
Config parse_config(const std::string& text);

struct SolveSettings {
    ModelParams model;
    int n = 32;
    double dt = 4e-3;
    double t_final = 1.6;
    std::string initial = "eigenfield";
    std::uint64_t seed = 1;
    int cutoff = 3;
    double amplitude = 1.0;
    SolverOptions solver;
};

struct AnalyzeSettings {
    std::filesystem::path trajectory;
    /// Same run with dt halved; enables the nested-cylinder refinement check.
    std::optional<std::filesystem::path> refined;
    double x0 = 3.141592653589793;
    double y0 = 3.141592653589793;
    /// Defaults to the midpoint of the run.
    std::optional<double> t0;
    double r = 0.5;
    double R = 0.75;
    double delta = 0.125;
    /// Exponent of the nested-cylinder check; defaults to 0.9 times the regime bound.
    std::optional<double> alpha;
    std::vector<double> alpha_grid{0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
    /// When false, failed floors and bounds are reported with exit code 0.
    bool assert_checks = true;
};

struct ExponentSettings {
    std::vector<double> p{2.0, 2.5, 3.0, 4.0};
    std::vector<int> d{2, 3};
    std::vector<double> targets{0.5, 1.0};
    double alpha0 = 0.0;
};

struct VerifySettings {
    std::size_t size = 100;
    std::uint64_t seed = 1;
    bool corrupt = false;
    unsigned threads = 0;
    int intervals = 1024;
};

/// The seed override replaces [initial] seed or [verify] seed.
SolveSettings solve_settings(const Config& cfg, std::optional<std::uint64_t> seed = {});
/// Relative trajectory paths are resolved against base_dir.
AnalyzeSettings analyze_settings(const Config& cfg, const std::filesystem::path& base_dir = {});
ExponentSettings exponent_settings(const Config& cfg);
VerifySettings verify_settings(const Config& cfg, std::optional<std::uint64_t> seed = {});

struct RunResult {
    int exit_code = kExitOk;
    std::vector<std::filesystem::path> files;
    std::string summary;
};

/// trajectory.bin (+ .meta) and diagnostics.csv. A solver failure keeps the
/// completed steps, marks the sidecar status and returns kExitComputation.
RunResult run_solve(const SolveSettings& s, const std::filesystem::path& out_dir);
/// sweep.csv, one plot_<k>.dat per space row and checks.csv. Throws IoError
/// for a missing trajectory, before anything is written.
RunResult run_analyze(const AnalyzeSettings& s, const std::filesystem::path& out_dir);
/// exponents.csv with columns p,d,regime,gamma0,gamma1,target,N.
RunResult run_exponents(const ExponentSettings& s, const std::filesystem::path& out_dir);
/// inequalities.csv; kExitAssertion when any inequality fails.
RunResult run_verify(const VerifySettings& s, const std::filesystem::path& out_dir);

}  // namespace plap
