#pragma once

// Numerical checks of the time-regularity inequalities for sampled functions:
// delta-equivalence, change of difference order, the Marchaud-type bound,
// reduction and accession of derivatives, interpolation, the embeddings and
// the first-order Sobolev equivalence.
//
// Notation: [f]_{r,delta,N^{alpha,p}} is nikolskii_seminorm and
// |f|_{r,delta,N^{alpha,p}} = [f] + |f|_{L^p}. Constants that are only known to
// exist are taken from calibrated_constants.hpp unless overridden.

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "plap/corpus.hpp"
#include "plap/function_spaces.hpp"

namespace plap {

enum class InequalityId {
    DeltaEq,
    StepChange,
    Marchaud,
    Reduction,
    Accession,
    Interpolation,
    EmbedSobolev,
    EmbedNik,
    Holder,
    SobolevEq,
};

inline constexpr InequalityId kAllInequalities[] = {
    InequalityId::DeltaEq,      InequalityId::StepChange,    InequalityId::Marchaud,
    InequalityId::Reduction,    InequalityId::Accession,     InequalityId::Interpolation,
    InequalityId::EmbedSobolev, InequalityId::EmbedNik,      InequalityId::Holder,
    InequalityId::SobolevEq,
};

/// "DELTA_EQ", "STEP_CHANGE", ...
std::string to_string(InequalityId id);
InequalityId parse_inequality_id(const std::string& text);
/// Whether the inequality carries a calibrated (existential) constant.
bool is_calibrated(InequalityId id);

struct InequalityParams {
    double alpha = 0.5;
    double p = 2.0;
    int r = 1;
    /// Lower difference order (STEP_CHANGE).
    int r0 = 1;
    double delta = 0.125;
    /// Larger step cap (DELTA_EQ, SOBOLEV_EQ).
    double delta2 = 0.25;
    /// Marchaud step h.
    double h = 0.0;
    /// Derivative order (REDUCTION, ACCESSION) and the integer part [alpha] of EMBED_SOBOLEV.
    int beta = 1;
    /// Excess smoothness of EMBED_SOBOLEV: N^{beta + gamma, p} into W^{beta, p}.
    double gamma = 0.5;
    /// INTERPOLATION: weight b and the two outer exponents (time exponents both p).
    double b = 0.5;
    double alpha1 = 0.25;
    double alpha2 = 0.75;
    NormSpec z = NormSpec::L(2);
    NormSpec x = NormSpec::W1(2);
    NormSpec y = NormSpec::Wm1(2);
    /// EMBED_NIK target space N^{alpha', q}.
    double alpha_prime = 0.25;
    double q = 2.0;
    /// Existential constant; NaN selects the frozen calibrated value.
    double constant = std::numeric_limits<double>::quiet_NaN();
    /// Harness self-test: replaces the DELTA_EQ constant 3^r / delta1^alpha by 2^r / 2.
    bool corrupt = false;
};

/// Default parameters of each id for a member with time exponent p.
InequalityParams default_params(InequalityId id, double p, double dt);

struct InequalityReport {
    InequalityId id = InequalityId::DeltaEq;
    double lhs = 0.0;
    double rhs = 0.0;
    double constant_used = 0.0;
    /// rhs - lhs of the main (upper) inequality.
    double margin = 0.0;
    bool passed = false;
    /// Echo of the inputs, "key=value;..."
    std::string params;
    /// Further named quantities (lower-side margins, alternative constants, ...).
    std::vector<std::pair<std::string, double>> extras;
};

/// lhs <= rhs up to an absolute slack 1e-12 max(1, rhs).
bool within_slack(double lhs, double rhs);

/// `derivative` is f' sampled on f's grid or a refinement of it; required by
/// REDUCTION, ACCESSION and EMBED_SOBOLEV. INTERPOLATION needs a field-valued f.
/// Throws PreconditionError when the parameters violate the inequality's hypotheses.
InequalityReport check_inequality(InequalityId id, const TimeGridFunction& f, const InequalityParams& params,
                                  const TimeGridFunction* derivative = nullptr);

/// Inner constant C of the EMBED_NIK constant formula, as a function of C:
/// C_embed(C) = K * C^{alpha - alpha' + 2}. Returns K.
double embed_nik_scale(double alpha, double alpha_prime, double beta, double delta);
/// Largest admissible step cap of EMBED_NIK on an interval of length len.
double embed_nik_delta_cap(double alpha, double alpha_prime, double beta, double len);
/// Largest admissible step cap of STEP_CHANGE on an interval of length len.
double step_change_delta_cap(double alpha, int r0, int r, double len);

struct CorpusCheckOptions {
    /// Seed of the spatial profiles of the INTERPOLATION fields.
    std::uint64_t field_seed = 1;
    bool corrupt = false;
    /// Evaluate the calibrated ids with C = 1 (their ratio lhs / rhs is then the calibration sample).
    bool unit_constants = false;
    /// Worker threads; 0 uses the hardware concurrency.
    unsigned threads = 0;
};

struct CorpusCheck {
    std::string function;
    InequalityReport report;
};

struct CorpusCheckResult {
    /// Ordered by member, then by id; independent of the thread count.
    std::vector<CorpusCheck> checks;
    /// Checks not run because the member has no bounded derivative.
    std::size_t skipped = 0;
    std::size_t failures() const;
};

/// The full matrix: every id on every member, MARCHAUD for r in {1, 2, 3} and h in {dt, 8 dt}.
CorpusCheckResult check_corpus(const std::vector<CorpusFunction>& corpus, const CorpusCheckOptions& options);

std::string csv_header_inequalities();
std::string csv_row(const InequalityReport& report, const std::string& function_name);

}  // namespace plap
