#pragma once

// Flat binary trajectory files. Layout, all little-endian:
//   uint64 n, uint64 d, float64 dt, uint64 steps,
//   then steps+1 snapshots of d*n*n float64 (component-major, row index i major).
// A sidecar "<file>.meta" holds key = value lines (model, p, mu, n, dt, ...).

#include <filesystem>
#include <map>
#include <string>

#include "plap/format.hpp"
#include "plap/pde_solver.hpp"

namespace plap {

using Metadata = std::map<std::string, std::string>;

std::filesystem::path meta_path(const std::filesystem::path& trajectory_file);

/// Writes the binary file and its sidecar; the sidecar always carries model,
/// p, mu, n, dt, T_final, steps and status, plus the extra entries.
void write_trajectory(const std::filesystem::path& file, const Trajectory& tr, const Metadata& extra = {});

/// Reads a trajectory and its sidecar (model parameters come from the sidecar).
/// Throws IoError for missing or malformed files.
Trajectory read_trajectory(const std::filesystem::path& file, Metadata* meta = nullptr);

Metadata read_metadata(const std::filesystem::path& meta_file);
void write_metadata(const std::filesystem::path& meta_file, const Metadata& meta);

}  // namespace plap
