#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "plap/errors.hpp"
#include "plap/experiment.hpp"

namespace fs = std::filesystem;

namespace {

int exit_code_for(const std::exception& e) {
    // inputs that do not fit the request are validation problems, not computation failures
    if (dynamic_cast<const plap::ValidationError*>(&e) || dynamic_cast<const plap::IoError*>(&e) ||
        dynamic_cast<const plap::GeometryError*>(&e) || dynamic_cast<const plap::InsufficientResolutionError*>(&e) ||
        dynamic_cast<const plap::PreconditionError*>(&e))
        return plap::kExitValidation;
    return plap::kExitComputation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time regularity experiments for the symmetric p-Laplacian gradient flow"};
    app.require_subcommand(1);

    std::string config_file;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* c = sub->add_option("--config", config_file, "INI experiment file");
        if (config_required) c->required();
        c->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        return sub;
    };
    auto* solve = add_common(app.add_subcommand("solve", "integrate the flow and persist the trajectory"), true);
    solve->add_option("--seed", seed, "overrides [initial] seed");
    auto* analyze = add_common(app.add_subcommand("analyze", "regularity report of a persisted trajectory"), true);
    auto* exponents = add_common(app.add_subcommand("exponents", "exponent sweep over p, d and targets"), false);
    auto* verify =
        add_common(app.add_subcommand("verify-inequalities", "inequality matrix over the seeded corpus"), false);
    verify->add_option("--seed", seed, "overrides [verify] seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? plap::kExitOk : plap::kExitValidation;
    }

    try {
        const plap::Config cfg = config_file.empty() ? plap::Config{} : plap::load_config(config_file);
        const fs::path base = config_file.empty() ? fs::path{} : fs::path(config_file).parent_path();
        plap::RunResult res;
        if (*solve) res = plap::run_solve(plap::solve_settings(cfg, seed), out_dir);
        else if (*analyze) res = plap::run_analyze(plap::analyze_settings(cfg, base), out_dir);
        else if (*exponents) res = plap::run_exponents(plap::exponent_settings(cfg), out_dir);
        else res = plap::run_verify(plap::verify_settings(cfg, seed), out_dir);
        std::cout << res.summary << '\n';
        for (const auto& f : res.files) std::cout << "  " << f.string() << '\n';
        return res.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}
