#pragma once

#include <filesystem>

#include "frontlearn/phasefield/phasefield.hpp"

namespace frontlearn::eval {

/// "FTRJ": u32 n_t, u32 n_x, f64 L, f64 t0, f64 dt, then n_t*n_x f64 row-major.
/// Times are stored as t0 and dt, so they read back as t0 + k dt.
void write_trajectory(const phasefield::FrontTrajectory& traj, const std::filesystem::path& path);
phasefield::FrontTrajectory read_trajectory(const std::filesystem::path& path);

}  // namespace frontlearn::eval
