#include "elastowave/audit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "elastowave/jet.hpp"

namespace elastowave {

namespace {

int pow3(int k) {
  int v = 1;
  for (int i = 0; i < k; ++i) v *= 3;
  return v;
}

// sum over j of |F^{-1}[spectrum_j]|^2, two real inverse transforms at a time
Eigen::ArrayXd accumulate_magnitude(const Grid3& g, int count, const std::function<void(int, Eigen::ArrayXcd&)>& fill) {
  Eigen::ArrayXd mag2 = Eigen::ArrayXd::Zero(g.size());
  Eigen::ArrayXcd a(g.size()), b(g.size());
  Eigen::ArrayXd pa, pb;
  for (int j = 0; j < count; j += 2) {
    fill(j, a);
    if (j + 1 < count) {
      fill(j + 1, b);
    } else {
      b.setZero();
    }
    to_physical_pair(g, a, b, pa, pb);
    mag2 += pa.square();
    if (j + 1 < count) mag2 += pb.square();
  }
  return mag2;
}

// L^p norm from squared pointwise magnitudes
double lp_from_mag2(const Eigen::ArrayXd& mag2, double p, double cell) {
  if (std::isinf(p)) return std::sqrt(mag2.maxCoeff());
  if (p == 2.0) return std::sqrt(mag2.sum() * cell);
  if (p == 1.0) return mag2.sqrt().sum() * cell;
  return std::pow(mag2.pow(0.5 * p).sum() * cell, 1.0 / p);
}

// derivative multi-index digits of j in base 3 (order digits)
std::array<int, 3> axis_counts(int j, int order) {
  std::array<int, 3> cnt{0, 0, 0};
  for (int d = 0; d < order; ++d) {
    ++cnt[size_t(j % 3)];
    j /= 3;
  }
  return cnt;
}

cplx derivative_factor(const std::array<int, 3>& cnt, const Eigen::Vector3i& k, const Eigen::Vector3d& xi, int n) {
  cplx v = 1.0;
  for (int d = 0; d < 3; ++d) {
    if (cnt[size_t(d)] % 2 == 1 && k(d) == -n / 2) return 0.0;
    for (int j = 0; j < cnt[size_t(d)]; ++j) v *= cplx(0.0, xi(d));
  }
  return v;
}

void require_rhs(double rhs, const char* what) {
  if (!(rhs > 0.0) || !std::isfinite(rhs)) {
    throw Error(Errc::degenerate_input, std::string(what) + ": right side vanishes");
  }
}

struct Line {
  double slope, intercept, se;
};

Line fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Line l{};
  l.slope = sxy / sxx;
  l.intercept = my - l.slope * mx;
  double ss = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - l.intercept - l.slope * x[i];
    ss += e * e;
  }
  l.se = std::sqrt(ss / (n - 2.0) / sxx);
  return l;
}

}  // namespace

// ---------------------------------------------------------------- ids

Inequality inequality_from_id(std::string_view id) {
  static const std::pair<const char*, Inequality> table[] = {
      {"GN_INF", Inequality::GN_INF}, {"GN_L1", Inequality::GN_L1},
      {"GRAD_2P", Inequality::GRAD_2P}, {"SOB_6", Inequality::SOB_6},
      {"LOW_HIGH_SPLIT", Inequality::LOW_HIGH_SPLIT}, {"RIESZ", Inequality::RIESZ},
      {"HEAT_L1", Inequality::HEAT_L1}};
  for (const auto& [name, v] : table)
    if (id == name) return v;
  throw Error(Errc::config, "unknown inequality '" + std::string(id) + "'");
}

std::string to_string(Inequality id) {
  switch (id) {
    case Inequality::GN_INF: return "GN_INF";
    case Inequality::GN_L1: return "GN_L1";
    case Inequality::GRAD_2P: return "GRAD_2P";
    case Inequality::SOB_6: return "SOB_6";
    case Inequality::LOW_HIGH_SPLIT: return "LOW_HIGH_SPLIT";
    case Inequality::RIESZ: return "RIESZ";
    case Inequality::HEAT_L1: return "HEAT_L1";
  }
  return "?";
}

FreqPart freq_part_from_id(std::string_view id) {
  if (id == "LOW") return FreqPart::LOW;
  if (id == "MID") return FreqPart::MID;
  if (id == "HIGH") return FreqPart::HIGH;
  throw Error(Errc::config, "unknown frequency part '" + std::string(id) + "'");
}

std::string to_string(FreqPart part) {
  switch (part) {
    case FreqPart::LOW: return "LOW";
    case FreqPart::MID: return "MID";
    case FreqPart::HIGH: return "HIGH";
  }
  return "?";
}

BoundId bound_from_id(std::string_view id) {
  static const char* names[] = {"B331", "B332", "B333", "B334", "B335", "B336", "B337"};
  for (int i = 0; i < 7; ++i)
    if (id == names[i]) return BoundId(i);
  throw Error(Errc::config, "unknown bound '" + std::string(id) + "'");
}

std::string to_string(BoundId id) {
  static const char* names[] = {"B331", "B332", "B333", "B334", "B335", "B336", "B337"};
  return names[int(id)];
}

// ---------------------------------------------------------------- field norms

Eigen::ArrayXd derivative_magnitude(const VectorField& field, int order) {
  if (order < 0) throw Error(Errc::invalid_exponent, "derivative order must be nonnegative");
  const VectorField gh = to_spectral(field);
  const Grid3& g = gh.grid();
  const int tuples = pow3(order);
  return accumulate_magnitude(g, gh.components() * tuples, [&](int j, Eigen::ArrayXcd& out) {
    const auto cnt = axis_counts(j % tuples, order);
    const Eigen::ArrayXcd& src = gh[j / tuples];
    for (Index idx = 0; idx < g.size(); ++idx) {
      const Eigen::Vector3i k = g.wavevector_index(idx);
      out(idx) = derivative_factor(cnt, k, g.dk() * k.cast<double>(), g.n) * src(idx);
    }
  });
}

double heat_l1_norm(const HeatL1Spec& s) {
  if (s.alpha < 0 || s.alpha > 3 || s.ell < 0 || s.ell > 2) {
    throw Error(Errc::unsupported_order, "heat multiplier supports alpha <= 3 and ell <= 2");
  }
  if (s.alpha + s.ell < 1) throw Error(Errc::unsupported_combination, "alpha + ell must be at least 1");
  if (s.a < 0 || s.a > 2 || s.b < 0 || s.b > 2) throw Error(Errc::domain, "Riesz axes must be 0, 1 or 2");
  if (!(s.t >= 0.0) || !(s.nu > 0.0)) throw Error(Errc::domain, "heat multiplier needs t >= 0 and nu > 0");
  const double len = s.box_factor * std::max(std::sqrt(s.nu * s.t), 2.0 / s.cutoff.c0);
  const Grid3 g = make_grid(s.n, len);
  // the sampled band must reach the cutoff support or the heat factor floor
  const double kmax = M_PI * s.n / len;
  if (kmax < s.cutoff.c0 && 0.5 * s.nu * s.t * kmax * kmax < 37.0) {
    throw Error(Errc::accuracy, "heat multiplier grid does not resolve the symbol");
  }
  const int tuples = pow3(s.alpha);
  const Eigen::ArrayXd mag2 = accumulate_magnitude(g, tuples, [&](int j, Eigen::ArrayXcd& out) {
    const auto cnt = axis_counts(j, s.alpha);
    for (Index idx = 0; idx < g.size(); ++idx) {
      const Eigen::Vector3i k = g.wavevector_index(idx);
      const Eigen::Vector3d xi = g.dk() * k.cast<double>();
      const double r2 = xi.squaredNorm();
      if (r2 == 0.0 || (k.array() == -g.n / 2).any()) {
        out(idx) = 0.0;
        continue;
      }
      const double m = xi(s.a) * xi(s.b) / r2 * std::pow(-0.5 * s.nu * r2, s.ell) *
                       std::exp(-0.5 * s.nu * s.t * r2) * s.cutoff.low(std::sqrt(r2));
      out(idx) = derivative_factor(cnt, k, xi, g.n) * m;
    }
  });
  return lp_from_mag2(mag2, 1.0, g.cell_volume());
}

DecayReport heat_l1_decay(const HeatL1Spec& base, const std::vector<double>& times) {
  std::vector<double> v;
  v.reserve(times.size());
  for (double t : times) {
    HeatL1Spec s = base;
    s.t = t;
    v.push_back(heat_l1_norm(s));
  }
  return decay_slope(times, v, -(0.5 * base.alpha + base.ell), NormId{base.alpha, base.ell, 1.0});
}

double inequality_check(Inequality id, const VectorField& field, const InequalityOptions& opt) {
  if (id == Inequality::HEAT_L1) {
    const HeatL1Spec& s = opt.heat;
    return heat_l1_norm(s) * std::pow(1.0 + s.t, 0.5 * s.alpha + s.ell);
  }
  const VectorField gh = to_spectral(field);
  const Grid3& g = gh.grid();
  const double cell = g.cell_volume();
  switch (id) {
    case Inequality::GN_INF: {
      const double rhs = std::pow(sobolev_seminorm(gh, 0), 0.25) * std::pow(sobolev_seminorm(gh, 2), 0.75);
      require_rhs(rhs, "GN_INF");
      return lp_from_mag2(derivative_magnitude(gh, 0), kInf, cell) / rhs;
    }
    case Inequality::GN_L1: {
      const Eigen::ArrayXd mag2 = derivative_magnitude(gh, 0);
      double moment = 0.0;
      for (Index idx = 0; idx < g.size(); ++idx) {
        const double x2 = g.position(idx).squaredNorm();
        moment += x2 * x2 * mag2(idx);
      }
      const double rhs = std::pow(std::sqrt(mag2.sum() * cell), 0.25) * std::pow(std::sqrt(moment * cell), 0.75);
      require_rhs(rhs, "GN_L1");
      return lp_from_mag2(mag2, 1.0, cell) / rhs;
    }
    case Inequality::GRAD_2P: {
      if (!(opt.p >= 1.0) || std::isinf(opt.p)) throw Error(Errc::invalid_exponent, "GRAD_2P needs 1 <= p < inf");
      const double rhs = std::sqrt(lp_from_mag2(derivative_magnitude(gh, 0), kInf, cell)) *
                         std::sqrt(lp_from_mag2(derivative_magnitude(gh, 2), opt.p, cell));
      require_rhs(rhs, "GRAD_2P");
      return lp_from_mag2(derivative_magnitude(gh, 1), 2.0 * opt.p, cell) / rhs;
    }
    case Inequality::SOB_6: {
      const double rhs = sobolev_seminorm(gh, 1);
      require_rhs(rhs, "SOB_6");
      return lp_from_mag2(derivative_magnitude(gh, 0), 6.0, cell) / rhs;
    }
    case Inequality::LOW_HIGH_SPLIT: {
      const double rhs = lp_from_mag2(derivative_magnitude(gh, 1), 1.0, cell) + sobolev_seminorm(gh, 3);
      require_rhs(rhs, "LOW_HIGH_SPLIT");
      return sobolev_seminorm(gh, 1) / rhs;
    }
    case Inequality::RIESZ: {
      if (!(opt.p > 1.0)) throw Error(Errc::invalid_exponent, "RIESZ needs p > 1");
      if (opt.riesz_axis < 0 || opt.riesz_axis > 2) throw Error(Errc::domain, "Riesz axis must be 0, 1 or 2");
      const double rhs = lp_from_mag2(derivative_magnitude(gh, 0), opt.p, cell);
      require_rhs(rhs, "RIESZ");
      // -i xi_a / |xi| keeps real fields real
      VectorField rg = apply_symbol(gh, Symbol::riesz(opt.riesz_axis));
      for (int c = 0; c < rg.components(); ++c) rg[c] *= cplx(0.0, -1.0);
      return lp_from_mag2(derivative_magnitude(rg, 0), opt.p, cell) / rhs;
    }
    case Inequality::HEAT_L1: break;
  }
  throw Error(Errc::config, "unknown inequality");
}

// ---------------------------------------------------------------- mid / high decay

double part_norm(FreqPart part, Kernel which, const VectorField& field, const LameParams& lame, double t) {
  const VectorField gh = to_spectral(field);
  if (gh.components() != 3) throw Error(Errc::shape, "part_norm needs a 3-component field");
  const Grid3& g = gh.grid();
  const CutoffSpec cut = lame.cutoffs();
  const DampingParams pl = lame.longitudinal(), pt = lame.transverse();
  double sum = 0.0;
  for (Index idx = 0; idx < g.size(); ++idx) {
    const Eigen::Vector3cd v(gh[0](idx), gh[1](idx), gh[2](idx));
    if (v.squaredNorm() == 0.0) continue;
    const Eigen::Vector3d xi = g.xi(idx);
    const double r = xi.norm();
    const double chi = part == FreqPart::LOW ? cut.low(r) : part == FreqPart::MID ? cut.mid(r) : cut.high(r);
    if (chi == 0.0) continue;
    const double kl = kernel_hat(t, r, pl, which), kt = kernel_hat(t, r, pt, which);
    Eigen::Vector3cd out;
    if (r == 0.0) {
      out = kt * v;
    } else {
      const Eigen::Vector3d e = xi / r;
      const Eigen::Vector3cd par = e.cast<cplx>() * e.cast<cplx>().dot(v);
      out = kl * par + kt * (v - par);
    }
    sum += chi * chi * out.squaredNorm();
  }
  return std::sqrt(sum * g.mode_volume());
}

VectorField band_field(const Grid3& grid, double r_lo, double r_hi, const Eigen::Vector3d& e) {
  if (!(r_lo >= 0.0) || !(r_hi > r_lo)) throw Error(Errc::domain, "band needs 0 <= r_lo < r_hi");
  VectorField out(grid, Space::spectral);
  for (Index idx = 0; idx < grid.size(); ++idx) {
    const Eigen::Vector3i k = grid.wavevector_index(idx);
    if ((k.array() == -grid.n / 2).any()) continue;
    const double s = (grid.dk() * k.cast<double>().norm() - r_lo) / (r_hi - r_lo);
    if (s <= 0.0 || s >= 1.0) continue;
    const double bump = std::exp(-1.0 / (s * (1.0 - s)) + 4.0);
    for (int c = 0; c < 3; ++c) out[c](idx) = bump * e(c);
  }
  return out;
}

ExpFitReport decay_fit(FreqPart part, Kernel which, const VectorField& field, const LameParams& lame,
                       const DecayFitOptions& opt) {
  if (part == FreqPart::LOW) throw Error(Errc::unsupported_combination, "decay_fit covers MID and HIGH");
  if (!(opt.t0 >= 0.1 - 1e-12) || !(opt.t1 <= 30.0 + 1e-12) || !(opt.t1 > opt.t0) || opt.samples < 8) {
    throw Error(Errc::window, "decay fit window must lie in [0.1, 30] with at least 8 samples");
  }
  ExpFitReport rep;
  rep.part = part;
  rep.which = which;
  const VectorField gh = to_spectral(field);
  rep.reference = which == Kernel::K0 ? sobolev_seminorm(gh, 0) : sobolev_seminorm(gh, 1);
  std::vector<double> y;
  for (int i = 0; i < opt.samples; ++i) {
    const double t = opt.t0 + (opt.t1 - opt.t0) * i / (opt.samples - 1);
    const double v = part_norm(part, which, gh, lame, t);
    if (!(v > 0.0)) throw Error(Errc::degenerate_input, "frequency part of the field vanishes");
    if (!rep.values.empty() && v > rep.values.back() * (1.0 + 1e-3)) {
      throw Error(Errc::fit, "series is not monotone at t = " + std::to_string(t));
    }
    rep.times.push_back(t);
    rep.values.push_back(v);
    y.push_back(std::log(v));
  }
  const Line l = fit_line(rep.times, y);
  rep.c_fit = -l.slope;
  rep.intercept = l.intercept;
  const boost::math::students_t dist(double(y.size() - 2));
  rep.c_ci = boost::math::quantile(boost::math::complement(dist, 0.025)) * l.se;
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  double dev = 0.0, pre = 0.0;
  for (size_t i = 0; i < y.size(); ++i) {
    dev = std::max(dev, std::abs(y[i] - l.intercept - l.slope * rep.times[i]));
    pre = std::max(pre, rep.values[i] * std::exp(rep.c_fit * rep.times[i]));
  }
  rep.residual = dev / (*hi - *lo);
  rep.prefactor = pre / rep.reference;
  if (!(rep.c_fit > 0.0)) throw Error(Errc::fit, "fitted decay rate is not positive");
  return rep;
}

// ---------------------------------------------------------------- symbol bounds

namespace {

double grad_abs(const Jet2& f) { return std::abs(f.d); }
double hess_abs(const Jet2& f, double r) { return std::sqrt(f.dd * f.dd + 2.0 * (f.d / r) * (f.d / r)); }

}  // namespace

BoundTerms bound_terms(BoundId id, double t, double r, const DampingParams& p) {
  if (!(r > 0.0) || !(r < p.threshold())) throw Error(Errc::out_of_domain, "r must lie in (0, 2 beta / nu)");
  if (!(t >= 0.0)) throw Error(Errc::domain, "t must be nonnegative");
  const Jet2 x = Jet2::variable(r);
  const Jet2 ph = phi(x, p);
  const Jet2 w = Jet2(t * p.beta) * x * ph;  // damped phase
  const Jet2 v = Jet2(t * p.beta) * x;       // undamped phase
  const double t2 = t * t, r2 = r * r;
  switch (id) {
    case BoundId::B331: return {grad_abs(cos(w)) + grad_abs(sin(w)), t};
    case BoundId::B332: return {hess_abs(cos(w), r) + hess_abs(sin(w), r), t2 + t / r};
    case BoundId::B333: return {grad_abs(cos(w) - cos(v)), t2 * r2 * r + t * r2};
    case BoundId::B334: return {hess_abs(cos(w) - cos(v), r), t2 * r2 + t * r};
    case BoundId::B335:
    case BoundId::B336: {
      const Jet2 f = sin(w) - sin(v) - v * (ph - Jet2(1.0)) * cos(v);
      const double r6 = r2 * r2 * r2;
      if (id == BoundId::B335) return {grad_abs(f), t2 * t * r6 + t2 * r6 / r + t * r2};
      return {hess_abs(f, r), t2 * t2 * r6 + t2 * r2 + t * r};
    }
    case BoundId::B337: {
      // the O(|xi|^2) factor is phi - 1; decay constant c = nu / 4
      const Jet2 f = exp(Jet2(-0.5 * p.nu * t) * x * x) * (ph - Jet2(1.0));
      const double env = std::exp(-0.25 * p.nu * (1.0 + t) * r2);
      const BoundTerms k1{grad_abs(f), env * r}, k2{hess_abs(f, r), env};
      return k1.lhs / k1.majorant >= k2.lhs / k2.majorant ? k1 : k2;
    }
  }
  throw Error(Errc::config, "unknown bound");
}

double central_difference(const std::function<double(double)>& f, double r, double rel_step) {
  const double h = rel_step * (r == 0.0 ? 1.0 : std::abs(r));
  return (f(r + h) - f(r - h)) / (2.0 * h);
}

namespace {

std::vector<double> scan_axis(double lo, double hi, int count, bool logarithmic, bool jitter, std::mt19937_64& rng) {
  std::vector<double> v(static_cast<size_t>(count));
  const double a = logarithmic ? std::log(lo) : lo, b = logarithmic ? std::log(hi) : hi;
  const double cell = (b - a) / (count - 1);
  for (int i = 0; i < count; ++i) {
    double s = a + cell * i;
    if (jitter && i > 0 && i + 1 < count) {
      const double u = double(rng() >> 11) * 0x1.0p-53;  // portable uniform in [0, 1)
      s += (u - 0.5) * 0.5 * cell;
    }
    v[size_t(i)] = logarithmic ? std::exp(s) : s;
  }
  v.front() = lo;
  v.back() = hi;
  return v;
}

}  // namespace

BoundScanReport symbol_bound_scan(BoundId id, const LameParams& lame, std::pair<double, double> t_range,
                                  std::pair<double, double> r_range, const ScanOptions& opt) {
  const double c0 = lame.cutoffs().c0;
  if (!(r_range.first > 0.0) || !(r_range.second <= c0 * (1.0 + 1e-12)) || !(r_range.second > r_range.first)) {
    throw Error(Errc::out_of_domain, "scanned r must lie in (0, c0] with c0 = " + std::to_string(c0));
  }
  if (!(t_range.first >= 0.0) || !(t_range.second > t_range.first)) throw Error(Errc::domain, "invalid t range");
  if (opt.nt < 2 || opt.nr < 2) throw Error(Errc::domain, "a scan needs at least two nodes per axis");
  BoundScanReport rep;
  rep.bound_id = to_string(id);
  rep.t_lo = t_range.first;
  rep.t_hi = t_range.second;
  rep.r_lo = r_range.first;
  rep.r_hi = r_range.second;
  rep.seed = opt.seed;
  rep.nt = opt.nt;
  rep.nr = opt.nr;
  std::mt19937_64 rng(opt.seed);
  const auto ts = scan_axis(t_range.first, t_range.second, opt.nt, t_range.first > 0.0, opt.jitter, rng);
  const auto rs = scan_axis(r_range.first, r_range.second, opt.nr, true, opt.jitter, rng);
  for (const DampingParams& p : {lame.longitudinal(), lame.transverse()}) {
    for (double t : ts)
      for (double r : rs) {
        const BoundTerms b = bound_terms(id, t, r, p);
        ++rep.samples;
        if (!(b.majorant > 0.0)) {
          ++rep.excluded;
          continue;
        }
        const double ratio = b.lhs / b.majorant;
        if (!(ratio <= rep.max_ratio)) {
          rep.max_ratio = ratio;
          rep.arg_t = t;
          rep.arg_r = r;
        }
      }
  }
  return rep;
}

ScanStability symbol_bound_stability(BoundId id, const LameParams& lame, std::pair<double, double> t_range,
                                     std::pair<double, double> r_range, const ScanOptions& opt) {
  ScanStability s;
  s.coarse = symbol_bound_scan(id, lame, t_range, r_range, opt);
  ScanOptions fine = opt;
  fine.nt = 2 * opt.nt;
  fine.nr = 2 * opt.nr;
  s.fine = symbol_bound_scan(id, lame, t_range, r_range, fine);
  const double a = s.coarse.max_ratio, b = s.fine.max_ratio;
  s.variation = (a > 0.0 && b > 0.0) ? std::max(a, b) / std::min(a, b) : (a == b ? 1.0 : kInf);
  s.stable = std::isfinite(a) && std::isfinite(b) && s.variation < 2.0;
  return s;
}

}  // namespace elastowave
