#include "elastowave/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "elastowave/radial.hpp"

namespace elastowave {

namespace {

const double kInvCube = std::pow(2.0 * M_PI, -1.5);  // (2 pi)^{-3/2}

double boundary_mass(const VectorField& f, double* total) {
  const Grid3& g = f.grid();
  const int n = g.n;
  double edge = 0.0, all = 0.0;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const Index idx = g.index(ix, iy, iz);
        double v = 0.0;
        for (int c = 0; c < f.components(); ++c) v += std::abs(f[c](idx));
        all += v;
        if (ix == 0 || iy == 0 || iz == 0 || ix == n - 1 || iy == n - 1 || iz == n - 1) edge += v;
      }
  *total = all;
  return edge;
}

}  // namespace

Moments moments(const VectorField& f0_in, const VectorField& f1_in) {
  const VectorField f0 = to_physical(f0_in), f1 = to_physical(f1_in);
  require_compatible(f0, f1);
  if (f0.components() != 3) throw Error(Errc::shape, "moments need 3-vector fields");
  const Grid3& g = f0.grid();
  const double h3 = g.cell_volume();
  Moments m;
  for (int k = 0; k < 3; ++k) m.m1(k) = f1[k].real().sum() * h3;
  const VectorField f0h = to_spectral(f0);
  for (int i = 0; i < 3; ++i) {
    std::array<int, 3> a{0, 0, 0};
    a[size_t(i)] = 1;
    const VectorField d = to_physical(apply_symbol(f0h, Symbol::derivative(a[0], a[1], a[2])));
    for (int k = 0; k < 3; ++k) m.m0(k, i) = d[k].real().sum() * h3;
  }
  for (const VectorField* f : {&f0, &f1}) {
    double total = 0.0;
    const double edge = boundary_mass(*f, &total);
    if (total > 0.0 && edge > 1e-8 * total) m.support_warning = true;
  }
  return m;
}

NonlinearMoment nonlinear_moment(const Trajectory& traj, double t_trunc) {
  NonlinearMoment out;
  if (traj.f_mean.empty() || traj.norms.size() != traj.f_mean.size()) {
    throw Error(Errc::range, "trajectory has no cached nonlinearity");
  }
  const double h = 0.5 * traj.dt;
  const double t_last = traj.norms.back().t;
  if (!(t_trunc >= 0.0) || t_trunc > t_last + 1e-9 * (1.0 + t_last)) {
    throw Error(Errc::range, "trajectory is shorter than the truncation time");
  }
  const long full = long(std::floor(t_trunc / traj.dt + 1e-9));
  out.t_trunc = full * traj.dt;
  const double scale = std::pow(2.0 * M_PI, 1.5);
  // running Simpson integral at every full-step node
  std::vector<Eigen::Vector3d> run(size_t(full) + 1, Eigen::Vector3d::Zero());
  for (long m = 0; m < full; ++m) {
    const size_t j = size_t(2 * m);
    const Eigen::Vector3d seg = (h / 3.0) * scale *
                                (traj.f_mean[j] + 4.0 * traj.f_mean[j + 1] + traj.f_mean[j + 2]).real();
    run[size_t(m) + 1] = run[size_t(m)] + seg;
  }
  out.M = run.back();
  // sup of (1 + t) |int_t^T F| over the last decade
  for (long m = 0; m < full; ++m) {
    const double t = m * traj.dt;
    if (t < 0.1 * out.t_trunc) continue;
    out.c_fit = std::max(out.c_fit, (1.0 + t) * (out.M - run[size_t(m)]).norm());
  }
  out.tail_bound = out.tail_at(out.t_trunc);
  return out;
}

// ---------------------------------------------------------------- profiles

namespace {

struct Channels {
  double l, t;  // multipliers of P and I - P
};

// m1 multipliers (without the (2 pi)^{-3/2}) and m0 multipliers
Channels m1_channels(double t, double r, const LameParams& lame, Profile which) {
  const auto L = lame.longitudinal(), T = lame.transverse();
  switch (which) {
    case Profile::G:
      return {diffusion_hat(t, r, L, Diffusion::G1), diffusion_hat(t, r, T, Diffusion::G1)};
    case Profile::H:
      return {diffusion_hat(t, r, L, Diffusion::G0), diffusion_hat(t, r, T, Diffusion::G0)};
    case Profile::Gtilde: {
      const double r2 = r * r;
      return {-r2 * L.beta * L.beta * diffusion_hat(t, r, L, Diffusion::G1),
              -r2 * T.beta * T.beta * diffusion_hat(t, r, T, Diffusion::G1)};
    }
  }
  return {0.0, 0.0};
}

Channels m0_channels(double t, double r, const LameParams& lame, Profile which) {
  const auto L = lame.longitudinal(), T = lame.transverse();
  const double r2 = r * r;
  switch (which) {
    case Profile::G:
      return {diffusion_hat(t, r, L, Diffusion::G0), diffusion_hat(t, r, T, Diffusion::G0)};
    case Profile::H:
      return {-r2 * L.beta * L.beta * diffusion_hat(t, r, L, Diffusion::G1),
              -r2 * T.beta * T.beta * diffusion_hat(t, r, T, Diffusion::G1)};
    case Profile::Gtilde:
      return {-r2 * L.beta * L.beta * diffusion_hat(t, r, L, Diffusion::G0),
              -r2 * T.beta * T.beta * diffusion_hat(t, r, T, Diffusion::G0)};
  }
  return {0.0, 0.0};
}

Eigen::Vector3cd apply_channels(const Channels& c, const Eigen::Matrix3d& P, const Eigen::Vector3d& v) {
  const Eigen::Vector3d pv = P * v;
  return (c.l * pv + c.t * (v - pv)).cast<cplx>();
}

cplx derivative_factor(const Eigen::Vector3d& xi, const std::vector<int>& axes, size_t from) {
  cplx f = 1.0;
  for (size_t k = from; k < axes.size(); ++k) f *= cplx(0.0, xi(axes[k]));
  return f;
}

}  // namespace

Eigen::Vector3cd profile_hat(double t, const Eigen::Vector3d& xi, const LameParams& lame, const Moments& mom,
                             Profile which, const std::vector<int>& derivative) {
  for (int a : derivative)
    if (a < 0 || a > 2) throw Error(Errc::domain, "derivative axes must be 0, 1 or 2");
  const bool has_m0 = !mom.m0.isZero(0.0);
  if (has_m0 && derivative.empty()) {
    throw Error(Errc::unsupported_combination, "the inverse-gradient term needs at least one derivative");
  }
  const double r = xi.norm();
  const Eigen::Matrix3d P = projection(xi);
  Eigen::Vector3cd out = derivative_factor(xi, derivative, 0) *
                         apply_channels(m1_channels(t, r, lame, which), P, mom.m1 + mom.M);
  if (has_m0) {
    const Eigen::Vector3d col = mom.m0.col(derivative.front());
    out += derivative_factor(xi, derivative, 1) * apply_channels(m0_channels(t, r, lame, which), P, col);
  }
  return kInvCube * out;
}

// ---------------------------------------------------------------- norm ids

std::string NormId::label() const {
  std::ostringstream s;
  s << "a" << alpha << "_l" << ell << "_p" << (std::isinf(p) ? std::string("inf") : std::to_string(int(p)));
  return s.str();
}

double expected_exponent(const NormId& id) {
  const bool two = id.p == 2.0, inf = std::isinf(id.p) && id.p > 0;
  const double a = id.alpha;
  if (id.ell == 0 && two && id.alpha >= 0 && id.alpha <= 3) return -(0.25 + 0.5 * a);
  if (id.ell == 0 && inf && id.alpha >= 0 && id.alpha <= 1) return -(1.5 + 0.5 * a);
  if (id.ell == 1 && two && id.alpha >= 0 && id.alpha <= 2) return -(0.75 + 0.5 * a);
  if (id.ell == 1 && inf && id.alpha >= 0 && id.alpha <= 1) return -(2.0 + 0.5 * a);
  if (id.ell == 2 && two && id.alpha == 0) return -1.25;
  throw Error(Errc::unsupported_norm, "no measured rate for " + id.label());
}

Profile profile_for(const NormId& id) {
  if (id.ell == 0) return Profile::G;
  if (id.ell == 1) return Profile::H;
  if (id.ell == 2) return Profile::Gtilde;
  throw Error(Errc::unsupported_norm, "time derivative order must be 0, 1 or 2");
}

// ---------------------------------------------------------------- fits

namespace {

struct Line {
  double slope, intercept, se;
};

Line fit_line(const std::vector<double>& x, const std::vector<double>& y, size_t b, size_t e) {
  const double n = double(e - b);
  double mx = 0.0, my = 0.0;
  for (size_t i = b; i < e; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = b; i < e; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Line L{sxy / sxx, 0.0, 0.0};
  L.intercept = my - L.slope * mx;
  if (n > 2) {
    double ss = 0.0;
    for (size_t i = b; i < e; ++i) {
      const double r = y[i] - L.intercept - L.slope * x[i];
      ss += r * r;
    }
    L.se = std::sqrt(ss / (n - 2.0) / sxx);
  }
  return L;
}

}  // namespace

DecayReport decay_slope(const std::vector<double>& times, const std::vector<double>& values, double expected,
                        NormId id) {
  if (times.size() != values.size()) throw Error(Errc::shape, "times and values differ in length");
  if (times.size() < 8) throw Error(Errc::window, "decay fit needs at least 8 points");
  for (size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || !(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw Error(Errc::domain, "decay fit needs positive times and values");
    }
    if (i > 0 && !(times[i] > times[i - 1])) throw Error(Errc::domain, "times must increase");
  }
  if (std::log10(times.back() / times.front()) < 1.5 - 1e-12) {
    throw Error(Errc::window, "decay fit window spans less than 1.5 decades");
  }
  std::vector<double> x(times.size()), y(times.size());
  for (size_t i = 0; i < times.size(); ++i) {
    x[i] = std::log(times[i]);
    y[i] = std::log(values[i]);
  }
  DecayReport r;
  r.times = times;
  r.values = values;
  r.expected = expected;
  r.norm_id = id;
  const Line all = fit_line(x, y, 0, x.size());
  r.slope = all.slope;
  r.intercept = all.intercept;
  const boost::math::students_t dist(double(x.size() - 2));
  r.slope_ci = boost::math::quantile(boost::math::complement(dist, 0.025)) * all.se;
  const size_t half = x.size() / 2;
  const Line a = fit_line(x, y, 0, half), b = fit_line(x, y, half, x.size());
  r.drift = b.slope - a.slope;
  r.non_power_law = std::abs(r.drift) > 0.02;
  return r;
}

std::vector<double> log_times(double t0, double t1, int count) {
  if (!(t0 > 0.0) || !(t1 > t0) || count < 2) throw Error(Errc::domain, "invalid log-spaced schedule");
  std::vector<double> t(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) t[size_t(i)] = t0 * std::pow(t1 / t0, double(i) / (count - 1));
  t.back() = t1;
  return t;
}

// ---------------------------------------------------------------- linear source

namespace {

// Multipliers of P e and (I - P) e in the Fourier transform of
// d_t^ell u_lin (or of its profile error), including the data transform.
Channels source_channels(const LinearSource& src, const NormId& id, double t, double r, bool error) {
  const double gh = kInvCube * std::exp(-0.5 * src.width * src.width * r * r);
  Channels c{kernel_hat(t, r, src.lame.longitudinal(), Kernel::K1, id.ell) * gh,
             kernel_hat(t, r, src.lame.transverse(), Kernel::K1, id.ell) * gh};
  if (error) {
    const Channels p = m1_channels(t, r, src.lame, profile_for(id));
    c.l -= kInvCube * p.l;
    c.t -= kInvCube * p.t;
  }
  return c;
}

}  // namespace

double linear_source_norm(const LinearSource& src, const NormId& id, double t, bool error) {
  expected_exponent(id);  // validates the combination
  if (!(t > 0.0)) throw Error(Errc::domain, "linear source norms need t > 0");
  const double nu = src.lame.nu, s2 = src.width * src.width;
  const double bl = std::max(src.lame.beta_long(), src.lame.beta_trans());
  const double spread = nu * t + (error ? 0.0 : s2);
  if (id.p == 2.0) {
    RadialQuadOptions opt;
    opt.scale = 1.0 / std::sqrt(spread);
    opt.oscillation = 2.0 * bl * t;
    opt.rel_tol = 1e-8;
    auto ml = [&](double r) { return source_channels(src, id, t, r, error).l; };
    auto mt = [&](double r) { return source_channels(src, id, t, r, error).t; };
    return radial_l2_norm(ml, mt, [](double) { return 1.0; }, id.alpha, AngularWeights{1.0, 1.0}, opt);
  }
  // p = inf: u = B e - Hess Psi e with e along z
  const double r_max = std::sqrt(80.0 / spread);
  SupOptions so;
  so.rho_max = bl * t + 12.0 * std::sqrt(nu * t + s2);
  so.rho_step = 0.25 * std::sqrt(nu * t);
  const double freq = so.rho_max + bl * t;
  const RadialTransform B([&](double r) { return source_channels(src, id, t, r, error).t; }, r_max, freq);
  const RadialTransform Psi(
      [&](double r) {
        const Channels c = source_channels(src, id, t, r, error);
        return (c.l - c.t) / (r * r);
      },
      r_max, freq);
  return axisymmetric_sup(B, Psi, id.alpha, so);
}

ProfileErrorReport profile_error_series(const LinearSource& src, const NormId& id, const std::vector<double>& times) {
  const double expected = expected_exponent(id);
  std::vector<double> sol(times.size()), err(times.size());
  for (size_t i = 0; i < times.size(); ++i) {
    sol[i] = linear_source_norm(src, id, times[i], false);
    err[i] = linear_source_norm(src, id, times[i], true);
  }
  return {decay_slope(times, sol, expected, id), decay_slope(times, err, expected - 0.5, id)};
}

ProfileErrorReport profile_error_series(const Trajectory& traj, const Moments& mom, const LameParams& lame,
                                        const NormId& id, const std::vector<double>& times) {
  const double expected = expected_exponent(id);
  if (id.ell > 1) throw Error(Errc::unsupported_norm, "trajectories store u and u_t only");
  if (!mom.m0.isZero(1e-10)) {
    throw Error(Errc::unsupported_combination, "grid profiles need m0 = 0");
  }
  if (times.empty()) throw Error(Errc::window, "no measurement window");
  const Grid3& g = traj.grid;
  const double cap = g.box_length / (4.0 * std::max(lame.beta_long(), lame.beta_trans()));
  const Profile which = profile_for(id);
  Moments m = mom;
  m.m0.setZero();
  std::vector<double> ts, sol, err;
  for (size_t i = 0; i < traj.times.size() && i < traj.u.size(); ++i) {
    const double t = traj.times[i];
    if (t <= 0.0 || t < times.front() * (1 - 1e-12) || t > times.back() * (1 + 1e-12) || t > cap) continue;
    const ElasticState s = traj.state(i);
    const VectorField& f = id.ell == 0 ? s.u_hat : s.v_hat;
    VectorField prof(g, Space::spectral);
    for (Index idx = 0; idx < g.size(); ++idx) {
      const Eigen::Vector3cd v = profile_hat(t, g.xi(idx), lame, m, which);
      for (int c = 0; c < 3; ++c) prof[c](idx) = v(c);
    }
    const VectorField e = f - prof;
    auto norm = [&](const VectorField& w) {
      if (id.p == 2.0) return sobolev_seminorm(w, id.alpha);
      if (id.alpha == 0) return lp_norm(to_physical(w), kInf);
      VectorField grad(g, Space::spectral, 9);
      for (int a = 0; a < 3; ++a) {
        std::array<int, 3> d{0, 0, 0};
        d[size_t(a)] = 1;
        const VectorField da = apply_symbol(w, Symbol::derivative(d[0], d[1], d[2]));
        for (int c = 0; c < 3; ++c) grad[3 * a + c] = da[c];
      }
      return lp_norm(to_physical(grad), kInf);
    };
    ts.push_back(t);
    sol.push_back(norm(f));
    err.push_back(norm(e));
  }
  return {decay_slope(ts, sol, expected, id), decay_slope(ts, err, expected - 0.5, id)};
}

}  // namespace elastowave
