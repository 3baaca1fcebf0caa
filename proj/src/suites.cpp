#include "elastowave/suites.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <set>

#include "elastowave/asymptotics.hpp"
#include "elastowave/audit.hpp"
#include "elastowave/kernels.hpp"
#include "elastowave/nonlinear.hpp"

namespace elastowave {

bool SuiteResult::passed() const {
  return !assertions.empty() &&
         std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

Json SuiteResult::summary() const {
  Json j;
  j["suite"] = suite;
  j["criteria"] = criteria;
  j["passed"] = passed();
  j["measurements"] = measurements;
  Json list = Json::array();
  for (const auto& a : assertions) {
    Json e;
    e["criterion"] = a.criterion;
    e["name"] = a.name;
    e["observed"] = a.observed;
    e["relation"] = a.relation;
    e["bound"] = a.bound;
    e["passed"] = a.passed;
    // signed slack, positive when the assertion holds
    e["margin"] = a.relation == "<=" ? a.bound - a.observed : a.observed - a.bound;
    list.push_back(e);
  }
  j["assertions"] = list;
  return j;
}

namespace {

double u01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

void check(SuiteResult& r, const std::string& crit, const std::string& name, double observed,
           const std::string& rel, double bound) {
  Assertion a;
  a.criterion = crit;
  a.name = name;
  a.observed = observed;
  a.relation = rel;
  a.bound = bound;
  a.passed = rel == "<=" ? observed <= bound : observed >= bound;
  r.assertions.push_back(a);
}

double max_abs(const VectorField& a) {
  double m = 0.0;
  for (int c = 0; c < a.components(); ++c) m = std::max(m, a[c].abs().maxCoeff());
  return m;
}

double max_abs_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (int c = 0; c < a.components(); ++c) m = std::max(m, (a[c] - b[c]).abs().maxCoeff());
  return m;
}

VectorField gaussian(const Grid3& g, double s, const Eigen::Vector3d& e) {
  return VectorField::sample(g, [&](const Eigen::Vector3d& x) {
    return Eigen::Vector3d(std::exp(-x.squaredNorm() / (2 * s * s)) * e);
  });
}

std::vector<double> schedule(const Scenario& sc) { return log_times(sc.t0, sc.t1, sc.count); }

LinearSource source(const Scenario& sc) { return {sc.lame, sc.width, sc.direction}; }

// ---------------------------------------------------------------- kernels

SuiteResult suite_kernels(const Scenario& sc) {
  SuiteResult r;
  r.criteria = {"C1", "C2", "C11"};
  std::mt19937_64 rng(sc.seed);

  // closed form against the adaptive ODE integration of each mode
  const int samples = int(sc.param("samples", 200));
  Series table{"kernel_table", {"beta", "nu", "r", "t", "k0", "k0_oracle", "k1", "k1_oracle"}, {}};
  double worst = 0.0, worst_rel = 0.0;
  for (int i = 0; i < samples; ++i) {
    const DampingParams p{0.1 + 3.9 * u01(rng), 0.1 + 3.9 * u01(rng)};
    const double rr = 8.0 * u01(rng), t = 20.0 * u01(rng);
    const double o0 = mode_oracle(t, rr, p, 1.0, 0.0).w, o1 = mode_oracle(t, rr, p, 0.0, 1.0).w;
    const double k0 = kernel_hat(t, rr, p, Kernel::K0), k1 = kernel_hat(t, rr, p, Kernel::K1);
    for (auto [k, o] : {std::pair{k0, o0}, {k1, o1}}) {
      worst = std::max(worst, std::abs(k - o) / std::max(1e-8 * std::abs(o), 1e-10));
      if (o != 0.0) worst_rel = std::max(worst_rel, std::abs(k - o) / std::abs(o));
    }
    table.rows.push_back({p.beta, p.nu, rr, t, k0, o0, k1, o1});
  }
  r.series.push_back(table);
  r.measurements["oracle_samples"] = samples;
  r.measurements["oracle_max_relative_error"] = worst_rel;
  check(r, "C1", "kernel_oracle_error_over_tolerance", worst, "<=", 1.0);

  // oscillatory-branch representation inside the low-frequency support
  const int pts = int(sc.param("lowfreq_points", 50));
  const double tmax = sc.param("lowfreq_tmax", 100.0);
  const double c0 = sc.lame.cutoffs().c0;
  Series low{"lowfreq_residuals", {"beta", "t", "r", "res_24", "res_25"}, {}};
  double lw = 0.0;
  for (const DampingParams& p : {sc.lame.longitudinal(), sc.lame.transverse()}) {
    for (int i = 0; i < pts; ++i)
      for (int j = 0; j < pts; ++j) {
        const double t = tmax * i / (pts - 1), rr = c0 * (j + 1) / pts;
        const LowFreqResidual res = lowfreq_residual(t, rr, p);
        lw = std::max(lw, std::max(res.res_24, res.res_25) / (1e-10 * (1.0 + t)));
        low.rows.push_back({p.beta, t, rr, res.res_24, res.res_25});
      }
  }
  r.series.push_back(low);
  check(r, "C2", "lowfreq_residual_over_tolerance", lw, "<=", 1.0);

  // structural identities
  double diag = 0.0;
  for (int i = 0; i < 200; ++i) {
    Eigen::Vector3d xi(u01(rng) - 0.5, u01(rng) - 0.5, u01(rng) - 0.5);
    xi *= 8.0 * u01(rng) / std::max(xi.norm(), 1e-300);
    const double t = 20.0 * u01(rng);
    for (Kernel k : {Kernel::K0, Kernel::K1})
      for (int l = 0; l <= 2; ++l) diag = std::max(diag, diagonalize_check(xi, sc.lame, t, k, l));
  }
  r.measurements["diagonalization_max"] = diag;
  check(r, "C11", "diagonalization_difference", diag, "<=", 1e-12);

  const Grid3 g = make_grid(16, 8.0);
  const VectorField f0 = to_spectral(gaussian(g, 1.0, {1.0, 0.5, 0.0}));
  const VectorField f1 = to_spectral(gaussian(g, 0.9, {0.0, 1.0, -0.5}));
  const ElasticState whole = linear_propagate(f0, f1, 2.0, sc.lame);
  const ElasticState split = linear_propagate(linear_propagate(f0, f1, 0.7, sc.lame), 1.3, sc.lame);
  const double scale = std::max(max_abs(whole.u_hat), max_abs(whole.v_hat));
  const double semi = std::max(max_abs_diff(whole.u_hat, split.u_hat), max_abs_diff(whole.v_hat, split.v_hat)) / scale;
  r.measurements["semigroup_relative"] = semi;
  check(r, "C11", "semigroup_composition", semi, "<=", 1e-10);

  // lambda + mu = 0: both speeds agree and components never mix
  const LameParams iso = LameParams::make(-sc.lame.mu, sc.lame.mu, sc.lame.nu);
  const VectorField fx = to_spectral(gaussian(g, 1.0, {1.0, 0.0, 0.0}));
  const ElasticState dec = linear_propagate(VectorField(g, Space::spectral), fx, 2.0, iso);
  double leak = 0.0;
  for (int c = 1; c < 3; ++c) leak = std::max({leak, dec.u_hat[c].abs().maxCoeff(), dec.v_hat[c].abs().maxCoeff()});
  leak /= std::max(dec.u_hat[0].abs().maxCoeff(), dec.v_hat[0].abs().maxCoeff());
  r.measurements["decoupling_leak"] = leak;
  check(r, "C11", "lambda_plus_mu_zero_decoupling", leak, "<=", 1e-14);
  return r;
}

// ---------------------------------------------------------------- decay rates

SuiteResult slope_suite(const Scenario& sc, const std::string& crit, const std::vector<NormId>& ids, double tol,
                        const std::string& series_name) {
  SuiteResult r;
  r.criteria = {crit};
  const auto ts = schedule(sc);
  const LinearSource src = source(sc);
  Series s{series_name, {"t"}, {}};
  for (double t : ts) s.rows.push_back({t});
  for (const NormId& id : ids) {
    std::vector<double> v;
    for (double t : ts) v.push_back(linear_source_norm(src, id, t));
    const DecayReport rep = decay_slope(ts, v, expected_exponent(id), id);
    s.columns.push_back(id.label());
    for (size_t i = 0; i < ts.size(); ++i) s.rows[i].push_back(v[i]);
    Json m;
    m["slope"] = rep.slope;
    m["slope_ci"] = rep.slope_ci;
    m["expected"] = rep.expected;
    m["drift"] = rep.drift;
    r.measurements[id.label()] = m;
    check(r, crit, id.label() + "_slope_deviation", std::abs(rep.slope - rep.expected), "<=", tol);
  }
  r.series.push_back(s);
  return r;
}

SuiteResult suite_profile(const Scenario& sc) {
  SuiteResult r;
  r.criteria = {"C5"};
  const auto ts = schedule(sc);
  const LinearSource src = source(sc);
  const std::vector<NormId> ids = {{0, 0, 2.0}, {1, 0, 2.0}, {2, 0, 2.0},  {3, 0, 2.0},  {0, 0, kInf}, {1, 0, kInf},
                                   {0, 1, 2.0}, {1, 1, 2.0}, {2, 1, 2.0}, {0, 1, kInf}, {1, 1, kInf}, {0, 2, 2.0}};
  Series s{"profile_error", {"t"}, {}};
  for (double t : ts) s.rows.push_back({t});
  for (const NormId& id : ids) {
    const ProfileErrorReport rep = profile_error_series(src, id, ts);
    s.columns.push_back(id.label() + "_solution");
    s.columns.push_back(id.label() + "_error");
    for (size_t i = 0; i < ts.size(); ++i) {
      s.rows[i].push_back(rep.solution.values[i]);
      s.rows[i].push_back(rep.error.values[i]);
    }
    const double gain = rep.solution.slope - rep.error.slope;
    Json m;
    m["solution_slope"] = rep.solution.slope;
    m["error_slope"] = rep.error.slope;
    m["expected"] = expected_exponent(id);
    m["gain"] = gain;
    r.measurements[id.label()] = m;
    check(r, "C5", id.label() + "_gain", gain, ">=", 0.35);
  }
  r.series.push_back(s);
  return r;
}

// ---------------------------------------------------------------- nonlinear

std::pair<VectorField, VectorField> scaled_data(const Scenario& sc, double x1) {
  auto [f0, f1] = initial_data(sc);
  const double s = x1 / x1_data_seminorm(f0, f1);
  f0 *= s;
  f1 *= s;
  return {f0, f1};
}

SuiteResult suite_nonlinear(const Scenario& sc) {
  SuiteResult r;
  r.criteria = {"C8"};
  EvolveConfig cfg;
  cfg.dt = sc.dt;
  cfg.t_end = sc.t_end;
  const double eps = sc.param("epsilon", 1e-2);

  const auto [f0, f1] = scaled_data(sc, eps);
  const VectorField f0h = to_spectral(f0), f1h = to_spectral(f1);
  const Trajectory tr = evolve(f0, f1, sc.lame, ContractionTensor::zero(), cfg);
  double diff = 0.0, scale = 0.0;
  for (size_t i = 0; i < tr.times.size(); ++i) {
    const ElasticState lin = linear_propagate(f0h, f1h, tr.times[i], sc.lame);
    const ElasticState st = tr.state(i);
    diff = std::max({diff, max_abs_diff(st.u_hat, lin.u_hat), max_abs_diff(st.v_hat, lin.v_hat)});
    scale = std::max({scale, max_abs(lin.u_hat), max_abs(lin.v_hat)});
  }
  r.measurements["zero_tensor_relative"] = diff / scale;
  check(r, "C8", "zero_tensor_equals_linear", diff / scale, "<=", 1e-10);

  // relative deviation from the linear solution at amplitude eps and eps / 2
  Series s{"amplitude_scaling", {"epsilon", "relative_deviation"}, {}};
  std::vector<double> rel;
  for (double e : {eps, 0.5 * eps}) {
    const auto [g0, g1] = scaled_data(sc, e);
    cfg.store_states = e == eps;  // keep the first run for export
    const Trajectory run = evolve(g0, g1, sc.lame, ContractionTensor::from_id(sc.tensor), cfg);
    const VectorField u = run.final_state.u_hat;
    if (e == eps) {
      r.trajectory = std::make_shared<const Trajectory>(run);
      r.trajectory_info = {sc.lame, sc.tensor, cfg};
    }
    const VectorField lin = linear_propagate(to_spectral(g0), to_spectral(g1), cfg.t_end, sc.lame).u_hat;
    rel.push_back(spectral_l2_norm(u - lin) / spectral_l2_norm(lin));
    s.rows.push_back({e, rel.back()});
  }
  r.series.push_back(s);
  const double ratio = rel[1] / rel[0];
  r.measurements["deviation_ratio"] = ratio;
  check(r, "C8", "deviation_ratio_distance_from_half", std::abs(ratio - 0.5), "<=", 0.1);
  return r;
}

SuiteResult suite_picard(const Scenario& sc) {
  SuiteResult r;
  r.criteria = {"C7"};
  const auto [f0, f1] = scaled_data(sc, sc.param("x1_target", 1e-3));
  PicardConfig pc;
  pc.march.dt = sc.dt;
  pc.march.t_end = sc.t_end;
  pc.march.state_cutoff = std::min(20, sc.n / 2 - 1);  // the Gaussian spectrum is ~e^{-30} beyond
  pc.tol = sc.param("tol", 1e-10);
  pc.max_iter = int(sc.param("max_iter", 30));
  const auto T = ContractionTensor::from_id(sc.tensor);
  const auto ev = std::make_shared<const Trajectory>(evolve(f0, f1, sc.lame, T, pc.march));
  const PicardResult pr = picard_iterate(f0, f1, sc.lame, T, pc);
  Series s{"picard", {"iteration", "distance", "ratio"}, {}};
  for (size_t i = 0; i < pr.distances.size(); ++i) {
    s.rows.push_back({double(i + 1), pr.distances[i], i == 0 ? 0.0 : pr.ratios[i - 1]});
  }
  r.series.push_back(s);
  Series x{"x1_history", {"t", "x1_evolve", "x1_picard"}, {}};
  for (size_t i = 0; i < ev->norms.size() && i < pr.trajectory.norms.size(); ++i) {
    x.rows.push_back({ev->norms[i].t, x1_weighted(ev->norms[i]), x1_weighted(pr.trajectory.norms[i])});
  }
  r.series.push_back(x);
  const double worst = pr.ratios.empty() ? 0.0 : *std::max_element(pr.ratios.begin(), pr.ratios.end());
  const double dist = x1_distance(pr.trajectory, *ev);
  r.measurements["iterations"] = pr.distances.size();
  r.measurements["converged"] = pr.converged;
  r.measurements["x1_data"] = x1_data_seminorm(f0, f1);
  r.measurements["x1_solution"] = x1_norm(*ev);
  r.measurements["max_ratio"] = worst;
  r.measurements["picard_vs_march"] = dist;
  r.trajectory = ev;
  r.trajectory_info = {sc.lame, sc.tensor, pc.march};

  // horizon check: the same march over twice the interval
  EvolveConfig twice = pc.march;
  twice.t_end = 2.0 * sc.t_end;
  twice.store_states = false;
  const double x1_long = x1_norm(evolve(f0, f1, sc.lame, T, twice));
  r.measurements["x1_doubled_horizon"] = x1_long;
  r.measurements["x1_tail_ratio"] = x1_long / x1_norm(*ev);
  check(r, "C7", "converged", pr.converged ? 1.0 : 0.0, ">=", 1.0);
  check(r, "C7", "max_contraction_ratio", worst, "<=", 0.5);
  check(r, "C7", "picard_vs_march_x1", dist, "<=", 5.0 * pc.tol);
  return r;
}

// ---------------------------------------------------------------- audit

SuiteResult suite_audit(const Scenario& sc) {
  SuiteResult r;
  r.criteria = {"C6", "C9", "C10"};

  // mid / high exponential decay on a spectral shell
  const Grid3 fg = make_grid(int(sc.param("fit_n", 32)), 8.0);
  const VectorField band = band_field(fg, 6.0, 10.0, sc.direction);
  Series fits{"decay_fits", {"t"}, {}};
  bool first = true;
  for (FreqPart part : {FreqPart::MID, FreqPart::HIGH})
    for (Kernel k : {Kernel::K0, Kernel::K1}) {
      const ExpFitReport rep = decay_fit(part, k, band, sc.lame);
      const std::string tag = to_string(part) + (k == Kernel::K0 ? "_K0" : "_K1");
      if (first) {
        for (double t : rep.times) fits.rows.push_back({t});
        first = false;
      }
      fits.columns.push_back(tag);
      for (size_t i = 0; i < rep.values.size(); ++i) fits.rows[i].push_back(rep.values[i]);
      Json m;
      m["c_fit"] = rep.c_fit;
      m["c_ci"] = rep.c_ci;
      m["residual"] = rep.residual;
      m["prefactor"] = rep.prefactor;
      r.measurements["decay_" + tag] = m;
      check(r, "C6", tag + "_rate", rep.c_fit, ">=", 1e-12);
      check(r, "C6", tag + "_residual", rep.residual, "<=", 0.05);
      check(r, "C6", tag + "_relative_ci", rep.c_ci / rep.c_fit, "<=", 0.25);
      if (part == FreqPart::HIGH && k == Kernel::K1) {
        double excess = 0.0;
        for (size_t i = 0; i < rep.times.size(); ++i) {
          excess = std::max(excess, rep.values[i] / (rep.prefactor * std::exp(-rep.c_fit * rep.times[i]) * rep.reference));
        }
        check(r, "C6", "HIGH_K1_smoothing_bound", excess, "<=", 1.0 + 1e-12);
        // the same constants applied to another shell; informational, the
        // fitted prefactor is field dependent
        const VectorField other = to_spectral(band_field(fg, 7.0, 11.0, Eigen::Vector3d(1.0, -1.0, 0.5).normalized()));
        const double ref = sobolev_seminorm(other, 1);
        double transfer = 0.0;
        for (double t : rep.times) {
          const double y = part_norm(FreqPart::HIGH, Kernel::K1, other, sc.lame, t);
          transfer = std::max(transfer, y / (rep.prefactor * std::exp(-rep.c_fit * t) * ref));
        }
        r.measurements["HIGH_K1_transfer_ratio"] = transfer;
      }
    }
  r.series.push_back(fits);

  // dilation invariance of the scale-invariant ratios
  const Grid3 gg = make_grid(int(sc.param("gn_n", 128)), 24.0);
  auto dilated = [&](double lambda) {
    VectorField f(gg, Space::physical, 1);
    for (Index i = 0; i < gg.size(); ++i) f[0](i) = std::exp(-0.5 * lambda * lambda * gg.position(i).squaredNorm());
    return f;
  };
  Series gn{"dilation_ratios", {"lambda", "GN_INF", "GN_L1", "GRAD_2P", "SOB_6"}, {}};
  std::map<std::string, std::vector<double>> by_id;
  for (double lambda : {0.5, 1.0, 2.0}) {
    const VectorField f = dilated(lambda);
    std::vector<double> row{lambda};
    for (Inequality id : {Inequality::GN_INF, Inequality::GN_L1, Inequality::GRAD_2P, Inequality::SOB_6}) {
      row.push_back(inequality_check(id, f));
      by_id[to_string(id)].push_back(row.back());
    }
    gn.rows.push_back(row);
  }
  r.series.push_back(gn);
  for (const auto& [name, v] : by_id) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    check(r, "C9", name + "_dilation_spread", (*hi - *lo) / *lo, "<=", 1e-6);
  }

  // Riesz at p = 2 on seeded random fields
  std::mt19937_64 rng(sc.seed);
  double riesz = 0.0;
  for (int i = 0; i < 8; ++i) {
    Scenario data = sc;
    data.family = DataFamily::band_random;
    data.n = 32;
    data.box = 12.0;
    data.seed = rng();
    InequalityOptions o;
    o.riesz_axis = i % 3;
    riesz = std::max(riesz, inequality_check(Inequality::RIESZ, initial_data(data).second, o));
  }
  r.measurements["riesz_max_ratio"] = riesz;
  check(r, "C9", "riesz_l2_ratio", riesz, "<=", 1.0);

  // heat multiplier L1 decay
  Series heat{"heat_l1", {"t", "a1_l0", "a2_l0", "a0_l1"}, {}};
  const auto hts = log_times(20.0, 2000.0, 10);
  for (double t : hts) heat.rows.push_back({t});
  for (auto [a, l] : {std::pair{1, 0}, {2, 0}, {0, 1}}) {
    HeatL1Spec spec;
    spec.alpha = a;
    spec.ell = l;
    spec.nu = sc.lame.nu;
    spec.n = int(sc.param("heat_n", 128));
    const DecayReport rep = heat_l1_decay(spec, hts);
    for (size_t i = 0; i < hts.size(); ++i) heat.rows[i].push_back(rep.values[i]);
    const std::string tag = "heat_a" + std::to_string(a) + "_l" + std::to_string(l);
    Json m;
    m["slope"] = rep.slope;
    m["expected"] = rep.expected;
    r.measurements[tag] = m;
    check(r, "C9", tag + "_slope", rep.slope, "<=", rep.expected + 0.1);
  }
  r.series.push_back(heat);

  // symbol bound scans under density doubling
  const double c0 = sc.lame.cutoffs().c0;
  ScanOptions so;
  so.nt = so.nr = int(sc.param("scan_n", 40));
  so.seed = sc.seed;
  Series scans{"symbol_scans", {"bound", "coarse_sup", "fine_sup", "variation", "arg_t", "arg_r"}, {}};
  for (int b = 0; b < 7; ++b) {
    const ScanStability st = symbol_bound_stability(BoundId(b), sc.lame, {1.0, 1e3}, {1e-3, c0}, so);
    scans.rows.push_back({331.0 + b, st.coarse.max_ratio, st.fine.max_ratio, st.variation, st.fine.arg_t,
                          st.fine.arg_r});
    Json m;
    m["coarse_sup"] = st.coarse.max_ratio;
    m["fine_sup"] = st.fine.max_ratio;
    m["samples"] = st.fine.samples;
    m["seed"] = st.fine.seed;
    r.measurements["scan_" + st.coarse.bound_id] = m;
    check(r, "C10", st.coarse.bound_id + "_variation", std::isfinite(st.variation) ? st.variation : 1e300, "<=", 2.0);
  }
  r.series.push_back(scans);
  return r;
}

const std::map<std::string, std::set<std::string>>& allowed_params() {
  static const std::map<std::string, std::set<std::string>> m = {
      {"kernels", {"samples", "lowfreq_points", "lowfreq_tmax"}},
      {"linear-decay", {}},
      {"smoothing", {}},
      {"profile-error", {}},
      {"nonlinear", {"epsilon"}},
      {"picard", {"x1_target", "tol", "max_iter"}},
      {"audit", {"fit_n", "gn_n", "heat_n", "scan_n"}},
  };
  return m;
}

}  // namespace

void validate_scenario(const Scenario& sc) {
  if (sc.n < 8 || sc.n % 2 != 0 || sc.n > 512) throw Error(Errc::config, "grid n must be even and in [8, 512]");
  if (!(sc.box > 0.0) || !std::isfinite(sc.box)) throw Error(Errc::config, "box length L must be positive");
  if (!(sc.dt > 0.0) || !(sc.t_end > 0.0) || !std::isfinite(sc.t_end)) {
    throw Error(Errc::config, "dt and t_end must be positive");
  }
  const double steps = sc.t_end / sc.dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * steps) {
    throw Error(Errc::config, "t_end must be a whole number of dt steps");
  }
  ContractionTensor::from_id(sc.tensor);
  const auto it = allowed_params().find(sc.suite);
  if (it == allowed_params().end()) throw Error(Errc::config, "unknown suite '" + sc.suite + "'");
  for (const auto& [k, v] : sc.params) {
    if (!it->second.count(k)) throw Error(Errc::config, "unknown [suite] key '" + k + "' for suite " + sc.suite);
    if (!(v > 0.0)) throw Error(Errc::config, "[suite] " + k + " must be positive");
  }
  auto integral = [&](const char* key, double lo, double hi) {
    const double v = sc.param(key, lo);
    if (v != std::floor(v) || v < lo || v > hi) {
      throw Error(Errc::config, std::string("[suite] ") + key + " must be an integer in [" + std::to_string(int(lo)) +
                                    ", " + std::to_string(int(hi)) + "]");
    }
  };
  if (sc.suite == "kernels") {
    integral("samples", 1, 100000);
    integral("lowfreq_points", 2, 2000);
  }
  if (sc.suite == "picard") integral("max_iter", 1, 1000);
  if (sc.suite == "audit") {
    for (const char* k : {"fit_n", "gn_n", "heat_n"}) {
      const double v = sc.param(k, 32);
      if (v != std::floor(v) || v < 8 || v > 512 || int(v) % 2 != 0) {
        throw Error(Errc::config, std::string("[suite] ") + k + " must be an even integer in [8, 512]");
      }
    }
    integral("scan_n", 32, 4000);
  }
  if (sc.suite == "linear-decay" || sc.suite == "smoothing" || sc.suite == "profile-error") {
    if (sc.family != DataFamily::gaussian) {
      throw Error(Errc::config, "suite " + sc.suite + " measures the Gaussian source; set [data] family = gaussian");
    }
    if (sc.count < 8 || std::log10(sc.t1 / sc.t0) < 1.5) {
      throw Error(Errc::config, "[times] decay fits need count >= 8 and t1 / t0 >= 10^1.5");
    }
  }
}

SuiteResult run_suite(const Scenario& sc) {
  validate_scenario(sc);
  SuiteResult r;
  if (sc.suite == "kernels") {
    r = suite_kernels(sc);
  } else if (sc.suite == "linear-decay") {
    r = slope_suite(sc, "C3", {{1, 0, 2.0}, {2, 0, 2.0}, {3, 0, 2.0}, {0, 1, 2.0}, {1, 1, 2.0}}, 0.05, "linear_decay");
  } else if (sc.suite == "smoothing") {
    r = slope_suite(sc, "C4", {{0, 0, kInf}, {1, 0, kInf}, {0, 2, 2.0}}, 0.1, "smoothing");
  } else if (sc.suite == "profile-error") {
    r = suite_profile(sc);
  } else if (sc.suite == "nonlinear") {
    r = suite_nonlinear(sc);
  } else if (sc.suite == "picard") {
    r = suite_picard(sc);
  } else {
    r = suite_audit(sc);
  }
  r.suite = sc.suite;
  return r;
}

Json effective_config(const Scenario& sc) {
  Json j;
  j["name"] = sc.name;
  j["suite"] = sc.suite;
  j["seed"] = sc.seed;
  j["tensor"] = sc.tensor;
  j["lame"] = {{"lambda", sc.lame.lambda}, {"mu", sc.lame.mu}, {"nu", sc.lame.nu}};
  j["data"] = {{"family", to_string(sc.family)},
               {"width", sc.width},
               {"amplitude", sc.amplitude},
               {"direction", {sc.direction(0), sc.direction(1), sc.direction(2)}}};
  j["grid"] = {{"n", sc.n}, {"L", sc.box}};
  j["times"] = {{"t0", sc.t0}, {"t1", sc.t1}, {"count", sc.count}, {"dt", sc.dt}, {"t_end", sc.t_end}};
  Json params = Json::object();
  for (const auto& [k, v] : sc.params) params[k] = v;
  j["suite_params"] = params;
  return j;
}

std::string config_hash(const Scenario& sc) { return hex64(fnv1a(dump_json(effective_config(sc)))); }

std::vector<std::string> write_outputs(const Scenario& sc, const SuiteResult& res, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(Errc::io, "cannot create output directory '" + out_dir + "': " + ec.message());
  std::vector<std::string> files;
  for (const Series& s : res.series) {
    const std::string name = s.name + ".csv";
    write_csv((fs::path(out_dir) / name).string(), s);
    files.push_back(name);
  }
  Json summary = res.summary();
  summary["scenario"] = sc.name;
  write_json((fs::path(out_dir) / "summary.json").string(), summary);
  files.push_back("summary.json");
  Json manifest;
  manifest["config"] = effective_config(sc);
  manifest["config_hash"] = config_hash(sc);
  manifest["version"] = toolkit_version();
  manifest["scenario"] = sc.name;
  manifest["suite"] = sc.suite;
  manifest["seed"] = sc.seed;
  manifest["files"] = files;
  manifest["passed"] = res.passed();
  write_json((fs::path(out_dir) / "manifest.json").string(), manifest);
  files.push_back("manifest.json");
  return files;
}

}  // namespace elastowave
