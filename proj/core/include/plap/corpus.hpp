#pragma once

// Seeded corpus of scalar test functions on [0, 1] used to exercise the
// time-regularity inequalities. Every member carries its exact derivative,
// sampled both on the base grid and on a grid refined four times.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plap/function_spaces.hpp"

namespace plap {

enum class CorpusFamily { Sinusoid, Polynomial, Kink, Lacunary };

std::string to_string(CorpusFamily f);

struct CorpusFunction {
    std::string name;
    CorpusFamily family = CorpusFamily::Sinusoid;
    /// Time integrability exponent assigned to this member (cycles 1, 2, 4, inf).
    double p = 2.0;
    TimeGridFunction f;
    /// f' on the base grid and on the grid with dt / 4; empty when f' is not locally bounded.
    std::optional<TimeGridFunction> derivative;
    std::optional<TimeGridFunction> derivative_fine;
};

struct CorpusOptions {
    std::size_t size = 100;
    std::uint64_t seed = 1;
    /// Number of intervals of the base grid on [0, 1].
    std::size_t intervals = 1024;
};

/// Members cycle through the four families; member i has time exponent {1, 2, 4, inf}[i / 4 mod 4].
std::vector<CorpusFunction> make_corpus(const CorpusOptions& options);

/// A vector field on the 8 x 8 torus, g_a(t) Phi_a(x) + g_b(t) Phi_b(x), built
/// from corpus members i and i + 1 with seeded smooth spatial profiles.
TimeGridFunction interpolation_field(const std::vector<CorpusFunction>& corpus, std::size_t i, std::uint64_t seed);

}  // namespace plap
