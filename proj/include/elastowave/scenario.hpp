#pragma once

// Scenario files: INI sections [scenario], [lame], [data], [grid], [times]
// and [suite] (free numeric parameters of the chosen suite). Every key is
// checked; anything unknown or out of range raises a config error before
// any work starts.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "elastowave/elastic.hpp"
#include "elastowave/grid.hpp"

namespace elastowave {

enum class DataFamily { gaussian, dgaussian, band_random };

std::string to_string(DataFamily f);

struct Scenario {
  std::string name = "default";
  std::string suite;
  std::uint64_t seed = 1;
  std::string tensor = "standard";  // contraction of the nonlinearity

  LameParams lame;

  DataFamily family = DataFamily::gaussian;
  double width = 1.0;
  double amplitude = 1.0;
  Eigen::Vector3d direction = Eigen::Vector3d::UnitZ();

  int n = 32;
  double box = 16.0;

  double t0 = 100.0, t1 = 1e4;  // log-spaced sampling schedule
  int count = 12;
  double dt = 0.5, t_end = 25.0;  // marching schedule

  std::map<std::string, double> params;  // [suite]
  std::string text;                      // canonical source text

  double param(const std::string& key, double fallback) const;
};

const std::vector<std::string>& suite_names();

/// Throws config on any syntax, key or range problem. A given suite fills in
/// a missing [scenario] suite and must match a present one.
Scenario parse_scenario(std::string_view text, const std::optional<std::string>& suite = std::nullopt);
Scenario load_scenario(const std::string& path, const std::optional<std::string>& suite = std::nullopt);

/// Built-in defaults for a suite (lambda = 0, mu = 1, nu = 1).
Scenario default_scenario(const std::string& suite);

/// Initial data (f0, f1) in physical space on the scenario grid. gaussian:
/// f0 = 0 and f1 = amplitude * unit-mass Gaussian * direction; dgaussian:
/// the same with f1 replaced by its derivative along x (zero mean);
/// band_random: f1 a seeded random field on the spectral band
/// 0 < |xi| < 2 / width.
std::pair<VectorField, VectorField> initial_data(const Scenario& sc);

}  // namespace elastowave
