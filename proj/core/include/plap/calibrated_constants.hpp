#pragma once

// Frozen values of the constants that the inequalities only assert to exist.
// Each is 1.5 times the worst ratio lhs / (rhs with C = 1) observed on the
// calibration corpus (seed kCalibrationSeed, 100 members, 1024 intervals);
// regenerate with `plap_calibrate`. The verification corpus uses other seeds.

#include <cstdint>

namespace plap::calibrated {

inline constexpr std::uint64_t kCalibrationSeed = 20240917;
inline constexpr double kSafetyFactor = 1.5;

inline constexpr double kAccession = 0.003369750578754354;
inline constexpr double kInterpolation = 1.6500165279435604;
inline constexpr double kEmbedSobolev = 0.015606067631656225;
/// Inner constant C of the EMBED_NIK constant formula.
inline constexpr double kEmbedNik = 2.823249025468944e-06;

/// Stationary Caccioppoli bound, calibrated on n = 32 runs (p in {2, 2.5, 3},
/// eigenfield and random_smooth seeds 101..103) distinct from the acceptance runs.
inline constexpr double kCaccioppoli = 0.04947531843649183;

}  // namespace plap::calibrated
