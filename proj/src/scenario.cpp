#include "elastowave/scenario.hpp"

#include "elastowave/nonlinear.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace elastowave {

namespace pt = boost::property_tree;

std::string to_string(DataFamily f) {
  switch (f) {
    case DataFamily::gaussian: return "gaussian";
    case DataFamily::dgaussian: return "dgaussian";
    case DataFamily::band_random: return "band_random";
  }
  return "?";
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"kernels",   "linear-decay", "smoothing", "profile-error",
                                                 "nonlinear", "picard",       "audit"};
  return names;
}

double Scenario::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::config, what); }

double number(const pt::ptree& sec, const std::string& section, const std::string& key, double fallback) {
  const auto v = sec.get_optional<std::string>(key);
  if (!v) return fallback;
  std::istringstream in(*v);
  double x = 0.0;
  if (!(in >> x) || !(in >> std::ws).eof() || !std::isfinite(x)) {
    bad("[" + section + "] " + key + " is not a finite number: '" + *v + "'");
  }
  return x;
}

long integer(const pt::ptree& sec, const std::string& section, const std::string& key, long fallback) {
  const double x = number(sec, section, key, double(fallback));
  if (x != std::floor(x) || std::abs(x) > 9e15) bad("[" + section + "] " + key + " must be an integer");
  return long(x);
}

void allow(const pt::ptree& sec, const std::string& section, const std::set<std::string>& keys) {
  for (const auto& [k, v] : sec) {
    if (!v.empty()) bad("[" + section + "] nested entries are not allowed");
    if (!keys.count(k)) bad("unknown key '" + k + "' in [" + section + "]");
  }
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::optional<std::string>& suite_hint) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    bad(std::string("malformed scenario file: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  const std::set<std::string> sections = {"scenario", "lame", "data", "grid", "times", "suite"};
  for (const auto& [k, v] : tree) {
    if (!sections.count(k)) bad("unknown section [" + k + "]");
    if (v.empty() && !v.data().empty()) bad("entry '" + k + "' outside any section");
  }
  const pt::ptree empty;
  auto section = [&](const std::string& s) -> const pt::ptree& {
    const auto c = tree.get_child_optional(s);
    return c ? *c : empty;
  };

  const auto& head = section("scenario");
  allow(head, "scenario", {"name", "suite", "seed", "tensor"});
  std::optional<std::string> suite;
  if (const auto s = head.get_optional<std::string>("suite")) suite = *s;
  if (suite && suite_hint && *suite != *suite_hint) {
    bad("scenario suite '" + *suite + "' does not match the requested suite '" + *suite_hint + "'");
  }
  if (!suite) suite = suite_hint;
  if (!suite) bad("[scenario] suite is required");
  bool known = false;
  for (const auto& s : suite_names()) known = known || (s == *suite);
  if (!known) bad("unknown suite '" + *suite + "'");
  Scenario sc = default_scenario(*suite);
  sc.name = head.get<std::string>("name", sc.name);
  if (sc.name.empty()) bad("[scenario] name must not be empty");
  const long seed = integer(head, "scenario", "seed", long(sc.seed));
  if (seed < 0) bad("[scenario] seed must be nonnegative");
  sc.seed = std::uint64_t(seed);
  sc.tensor = head.get<std::string>("tensor", sc.tensor);
  ContractionTensor::from_id(sc.tensor);  // config error when unknown

  const auto& lame = section("lame");
  allow(lame, "lame", {"lambda", "mu", "nu"});
  try {
    sc.lame = LameParams::make(number(lame, "lame", "lambda", sc.lame.lambda), number(lame, "lame", "mu", sc.lame.mu),
                               number(lame, "lame", "nu", sc.lame.nu));
  } catch (const Error& e) {
    bad(std::string("[lame] ") + e.what());
  }

  const auto& data = section("data");
  allow(data, "data", {"family", "width", "amplitude", "direction"});
  const std::string fam = data.get<std::string>("family", to_string(sc.family));
  if (fam == "gaussian") {
    sc.family = DataFamily::gaussian;
  } else if (fam == "dgaussian") {
    sc.family = DataFamily::dgaussian;
  } else if (fam == "band_random") {
    sc.family = DataFamily::band_random;
  } else {
    bad("[data] unknown family '" + fam + "'");
  }
  sc.width = number(data, "data", "width", sc.width);
  sc.amplitude = number(data, "data", "amplitude", sc.amplitude);
  if (!(sc.width > 0.0)) bad("[data] width must be positive");
  if (!(sc.amplitude > 0.0)) bad("[data] amplitude must be positive");
  if (const auto d = data.get_optional<std::string>("direction")) {
    std::istringstream in(*d);
    Eigen::Vector3d v;
    char c1 = 0, c2 = 0;
    if (!(in >> v(0) >> c1 >> v(1) >> c2 >> v(2)) || c1 != ',' || c2 != ',' || !(in >> std::ws).eof() ||
        !(v.norm() > 0.0) || !v.allFinite()) {
      bad("[data] direction must be three comma-separated numbers, not all zero");
    }
    sc.direction = v.normalized();
  }

  const auto& grid = section("grid");
  allow(grid, "grid", {"n", "L"});
  sc.n = int(integer(grid, "grid", "n", sc.n));
  sc.box = number(grid, "grid", "L", sc.box);
  if (sc.n < 8 || sc.n % 2 != 0 || sc.n > 512) bad("[grid] n must be even and in [8, 512]");
  if (!(sc.box > 0.0)) bad("[grid] L must be positive");

  const auto& times = section("times");
  allow(times, "times", {"t0", "t1", "count", "dt", "t_end"});
  sc.t0 = number(times, "times", "t0", sc.t0);
  sc.t1 = number(times, "times", "t1", sc.t1);
  sc.count = int(integer(times, "times", "count", sc.count));
  sc.dt = number(times, "times", "dt", sc.dt);
  sc.t_end = number(times, "times", "t_end", sc.t_end);
  if (!(sc.t0 > 0.0) || !(sc.t1 > sc.t0) || sc.count < 2) bad("[times] schedule must satisfy 0 < t0 < t1, count >= 2");
  if (!(sc.dt > 0.0) || !(sc.t_end > 0.0)) bad("[times] dt and t_end must be positive");
  const double steps = sc.t_end / sc.dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * steps) bad("[times] t_end must be a whole number of dt steps");

  for (const auto& [k, v] : section("suite")) {
    if (!v.empty()) bad("[suite] nested entries are not allowed");
    sc.params[k] = number(section("suite"), "suite", k, 0.0);
  }

  // canonical text: the parsed tree, so comments and spacing do not matter
  std::ostringstream canon;
  pt::write_ini(canon, tree);
  sc.text = canon.str();
  return sc;
}

Scenario load_scenario(const std::string& path, const std::optional<std::string>& suite) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::config, "cannot read scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), suite);
}

Scenario default_scenario(const std::string& suite) {
  Scenario sc;
  sc.suite = suite;
  sc.name = suite + "-default";
  sc.lame = LameParams::make(0.0, 1.0, 1.0);
  if (suite == "picard") {
    sc.n = 64;
    sc.box = 16.0;
    sc.dt = 0.5;
    sc.t_end = 25.0;
  } else if (suite == "nonlinear") {
    sc.n = 32;
    sc.box = 16.0;
    sc.dt = 0.25;
    sc.t_end = 4.0;
  }
  sc.text = "[scenario]\nsuite=" + suite + "\n";  // hashed when no file is given
  return sc;
}

std::pair<VectorField, VectorField> initial_data(const Scenario& sc) {
  const Grid3 g = make_grid(sc.n, sc.box);
  VectorField f0(g, Space::physical);
  const double s = sc.width;
  const double norm = sc.amplitude * std::pow(2.0 * M_PI * s * s, -1.5);
  const Eigen::Vector3d e = sc.direction;
  if (sc.family == DataFamily::band_random) {
    // Hermitian random spectrum: fill, then keep the real part in x-space
    std::mt19937_64 rng(sc.seed);
    std::normal_distribution<double> nd;
    VectorField h(g, Space::spectral);
    const double rmax = 2.0 / s;
    for (Index idx = 0; idx < g.size(); ++idx) {
      const double r = std::sqrt(g.xi_norm2(idx));
      const double w = (r > 0.0 && r < rmax) ? std::exp(-1.0 / (1.0 - (r / rmax) * (r / rmax)) + 1.0) : 0.0;
      for (int c = 0; c < 3; ++c) {
        const double re = nd(rng), im = nd(rng);
        h[c](idx) = w * cplx(re, im);
      }
    }
    VectorField f1 = to_physical(h);
    for (int c = 0; c < 3; ++c) f1[c] = f1[c].real().cast<cplx>();
    const double l2 = lp_norm(f1, 2.0);
    if (l2 > 0.0) f1 *= sc.amplitude / l2;
    return {f0, f1};
  }
  VectorField f1 = VectorField::sample(g, [&](const Eigen::Vector3d& x) {
    const double gauss = norm * std::exp(-x.squaredNorm() / (2 * s * s));
    const double v = sc.family == DataFamily::dgaussian ? -x(0) / (s * s) * gauss : gauss;
    return Eigen::Vector3d(v * e);
  });
  return {f0, f1};
}

}  // namespace elastowave
