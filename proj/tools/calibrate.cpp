// Recomputes the frozen constants of calibrated_constants.hpp on the
// calibration corpus and prints the worst ratios and the values to freeze.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "plap/calibrated_constants.hpp"
#include "plap/corpus.hpp"
#include "plap/format.hpp"
#include "plap/inequalities.hpp"
#include "plap/regularity_analyzer.hpp"

int main() {
    using namespace plap;
    CorpusOptions co;
    co.seed = calibrated::kCalibrationSeed;
    const auto corpus = make_corpus(co);
    CorpusCheckOptions opt;
    opt.field_seed = calibrated::kCalibrationSeed;
    opt.unit_constants = true;
    const auto res = check_corpus(corpus, opt);

    std::map<InequalityId, double> worst;
    std::map<InequalityId, double> exponent;
    for (const auto& c : res.checks) {
        const auto& r = c.report;
        if (!is_calibrated(r.id)) continue;
        const double ratio = r.rhs > 0 ? r.lhs / r.rhs : 0.0;
        worst[r.id] = std::max(worst[r.id], ratio);
        if (r.id == InequalityId::EmbedNik) {
            const auto q = default_params(r.id, kInfinity, 0);
            exponent[r.id] = q.alpha - q.alpha_prime + 2;
        }
    }
    std::printf("checks %zu, skipped %zu, explicit-constant failures %zu\n", res.checks.size(), res.skipped,
                static_cast<std::size_t>(std::count_if(res.checks.begin(), res.checks.end(), [](const CorpusCheck& c) {
                    return !is_calibrated(c.report.id) && !c.report.passed;
                })));
    for (const auto& [id, w] : worst) {
        double frozen = calibrated::kSafetyFactor * w;
        if (exponent.count(id)) frozen = std::pow(frozen, 1.0 / exponent[id]);
        std::printf("%-14s worst ratio %s  freeze %s\n", to_string(id).c_str(), format_double(w).c_str(),
                    format_double(frozen).c_str());
    }

    // Caccioppoli constant: n = 32 runs with data other than the acceptance runs
    double worst_t2 = 0.0;
    const TorusGrid grid(32);
    for (double p : {2.0, 2.5, 3.0}) {
        ModelParams m;
        m.p = p;
        for (int data = 0; data < 4; ++data) {
            const SpatialField u0 = data == 0 ? eigenfield(grid) : random_smooth(grid, 100 + data, 3, 2.0);
            const Trajectory tr = solve(u0, 1.6, 4e-3, m);
            const auto [first, last] = interior_window(tr);
            const auto res = check_theorem2(tr, std::numbers::pi, std::numbers::pi, 0.5, 0.75, first, last, 1.0);
            std::printf("caccioppoli p=%g data=%d observed %s applicable %d\n", p, data, format_double(res.observed).c_str(),
                        res.applicable ? 1 : 0);
            if (res.applicable) worst_t2 = std::max(worst_t2, res.observed);
        }
    }
    std::printf("CACCIOPPOLI    worst ratio %s  freeze %s\n", format_double(worst_t2).c_str(),
                format_double(calibrated::kSafetyFactor * worst_t2).c_str());
    return 0;
}
