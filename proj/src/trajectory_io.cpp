#include "elastowave/trajectory_io.hpp"

#include <cstdio>
#include <filesystem>

namespace elastowave {

namespace {

std::string numbered(const char* stem, size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%04zu.bin", stem, i);
  return buf;
}

}  // namespace

Json trajectory_manifest(const Trajectory& traj, const TrajectoryInfo& info) {
  Json m;
  m["version"] = toolkit_version();
  m["grid"] = {{"n", traj.grid.n}, {"L", traj.grid.box_length}};
  m["lame"] = {{"lambda", info.lame.lambda}, {"mu", info.lame.mu}, {"nu", info.lame.nu}};
  m["tensor"] = info.tensor;
  const EvolveConfig& c = info.config;
  m["config"] = {{"dt", c.dt},
                 {"t_end", c.t_end},
                 {"dealias", c.dealias == DealiasRule::two_thirds ? "two_thirds" : "none"},
                 {"store_every", c.store_every},
                 {"state_cutoff", traj.u.empty() ? -1 : traj.u.front().cutoff()}};
  Json states = Json::array();
  const bool forcing = traj.forcing.size() == traj.u.size() && !traj.forcing.empty();
  for (size_t i = 0; i < traj.u.size(); ++i) {
    Json s = {{"t", traj.times[i]}, {"u", numbered("u", i)}, {"v", numbered("v", i)}};
    if (forcing) s["F"] = numbered("F", i);
    states.push_back(s);
  }
  m["states"] = states;
  m["times"] = std::vector<double>(traj.times.begin(), traj.times.begin() + std::ptrdiff_t(traj.u.size()));
  return m;
}

std::vector<std::string> export_trajectory(const Trajectory& traj, const TrajectoryInfo& info, const std::string& dir) {
  namespace fs = std::filesystem;
  if (traj.u.empty()) throw Error(Errc::insufficient_samples, "trajectory has no stored states to export");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::io, "cannot create '" + dir + "': " + ec.message());
  const Json m = trajectory_manifest(traj, info);
  std::vector<std::string> files;
  for (size_t i = 0; i < traj.u.size(); ++i) {
    const auto& s = m["states"][i];
    const ElasticState st = traj.state(i);
    write_snapshot((fs::path(dir) / s["u"].get<std::string>()).string(), st.u_hat, traj.times[i]);
    write_snapshot((fs::path(dir) / s["v"].get<std::string>()).string(), st.v_hat, traj.times[i]);
    files.push_back(s["u"]);
    files.push_back(s["v"]);
    if (s.contains("F")) {
      write_snapshot((fs::path(dir) / s["F"].get<std::string>()).string(), traj.forcing[i].expand(traj.grid),
                     traj.times[i]);
      files.push_back(s["F"]);
    }
  }
  write_json((fs::path(dir) / "manifest.json").string(), m);
  files.push_back("manifest.json");
  return files;
}

}  // namespace elastowave
