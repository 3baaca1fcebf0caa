#pragma once

// Trajectory export: one binary snapshot per stored field and time plus a
// manifest.json describing times, grid, material, tensor and step settings.

#include <string>
#include <vector>

#include "elastowave/nonlinear.hpp"
#include "elastowave/report.hpp"

namespace elastowave {

struct TrajectoryInfo {
  LameParams lame;
  std::string tensor = "standard";
  EvolveConfig config;
};

/// Writes u_NNNN.bin, v_NNNN.bin (and F_NNNN.bin when forcing was stored) as
/// full spectral snapshots, then manifest.json. Returns the file names.
/// Throws insufficient-samples for a trajectory without stored states.
std::vector<std::string> export_trajectory(const Trajectory& traj, const TrajectoryInfo& info, const std::string& dir);

Json trajectory_manifest(const Trajectory& traj, const TrajectoryInfo& info);

}  // namespace elastowave
