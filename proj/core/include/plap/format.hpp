#pragma once

#include <string>

namespace plap {

/// Shortest round-trip decimal representation used in every text artifact;
/// "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double v);

}  // namespace plap
