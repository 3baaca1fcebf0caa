#include "elastowave/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Core>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace elastowave {

AngularConstants angular_constants() { return {4.0 * M_PI / 3.0, 8.0 * M_PI / 3.0}; }

double radial_l2_norm(const RadialFn& m_long, const RadialFn& m_trans, const RadialFn& h, int alpha,
                      AngularWeights w, const RadialQuadOptions& opt) {
  if (alpha < 0) throw Error(Errc::invalid_exponent, "derivative order must be nonnegative");
  if (!(opt.scale > 0.0)) throw Error(Errc::domain, "radial quadrature needs a positive scale");
  const auto ang = angular_constants();
  const double cl = w.w_long * ang.parallel, ct = w.w_trans * ang.perpendicular;
  auto integrand = [&](double r) {
    if (r == 0.0 && alpha > 0) return 0.0;
    const double hv = h(r);
    if (hv == 0.0) return 0.0;
    double m2 = 0.0;
    if (cl != 0.0) { const double a = m_long(r); m2 += cl * a * a; }
    if (ct != 0.0) { const double b = m_trans(r); m2 += ct * b * b; }
    return std::pow(r, 2 * alpha + 2) * m2 * hv * hv;
  };

  double width = 0.5 * opt.scale;
  if (opt.oscillation > 0.0) width = std::min(width, 2.0 * M_PI / opt.oscillation);
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double total = 0.0, err_total = 0.0;
  int quiet = 0;
  const long max_panels = 4'000'000;
  for (long k = 0; k < max_panels; ++k) {
    const double a = k * width;
    double b = a + width;
    const bool last = opt.r_max > 0.0 && b >= opt.r_max;
    if (last) b = opt.r_max;
    double err = 0.0;
    // integrate on [-1, 1]: this Boost version reports the error estimate
    // without the half-width factor, which inflates it on narrow panels
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const double v = GK::integrate([&](double x) { return half * integrand(mid + half * x); }, -1.0, 1.0, 12,
                                   0.1 * opt.rel_tol, &err);
    total += v;
    err_total += err;
    if (last) break;
    if (opt.r_max <= 0.0) {
      quiet = (v <= 1e-6 * opt.rel_tol * total) ? quiet + 1 : 0;
      if (quiet >= 8 && a > 2.0 * opt.scale) break;
    }
    if (k + 1 == max_panels) throw Error(Errc::accuracy, "radial quadrature did not reach a negligible tail");
  }
  if (!(err_total <= opt.rel_tol * total) && total > 0.0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", err_total / total);
    throw Error(Errc::accuracy, std::string("radial quadrature reached only relative accuracy ") + buf);
  }
  return std::sqrt(std::max(total, 0.0));
}

double radial_l2_norm(const std::function<double(double, double)>& multiplier, double t, const RadialFn& h,
                      int alpha, AngularWeights w, const RadialQuadOptions& opt) {
  auto m = [&](double r) { return multiplier(t, r); };
  return radial_l2_norm(m, m, h, alpha, w, opt);
}

// ---------------------------------------------------------------- Bessel terms

namespace {

struct BesselTerms {
  double j0, j1, j2, j3;  // j0 and its derivatives
  double g1;              // j0'(x) / x
  double g2;              // (j0''(x) - j0'(x) / x) / x
};

BesselTerms bessel_terms(double x) {
  BesselTerms b{};
  if (std::abs(x) < 1.0) {
    // power series; 13 terms are far below rounding for |x| < 1
    double pw[28];
    pw[0] = 1.0;
    for (int m = 1; m < 28; ++m) pw[m] = pw[m - 1] * x;
    double fact = 1.0;  // (2k+1)!
    double sign = 1.0;
    for (int k = 0; k <= 13; ++k) {
      if (k > 0) fact *= double(2 * k) * double(2 * k + 1);
      const double c = sign / fact;
      const double tk = 2.0 * k;
      b.j0 += c * pw[2 * k];
      if (k >= 1) {
        b.j1 += c * tk * pw[2 * k - 1];
        b.j2 += c * tk * (tk - 1) * pw[2 * k - 2];
        b.g1 += c * tk * pw[2 * k - 2];
      }
      if (k >= 2) {
        b.j3 += c * tk * (tk - 1) * (tk - 2) * pw[2 * k - 3];
        b.g2 += c * tk * (tk - 2) * pw[2 * k - 3];
      }
      sign = -sign;
    }
    return b;
  }
  const double s = std::sin(x), c = std::cos(x);
  const double i1 = 1.0 / x, i2 = i1 * i1, i3 = i2 * i1, i4 = i2 * i2;
  b.j0 = s * i1;
  b.j1 = c * i1 - s * i2;
  b.j2 = -s * i1 - 2.0 * c * i2 + 2.0 * s * i3;
  b.j3 = -c * i1 + 3.0 * s * i2 + 6.0 * c * i3 - 6.0 * s * i4;
  b.g1 = b.j1 * i1;
  b.g2 = (b.j2 - b.g1) * i1;
  return b;
}

}  // namespace

std::array<double, 4> j0_derivatives(double x) {
  const auto b = bessel_terms(x);
  return {b.j0, b.j1, b.j2, b.j3};
}

RadialTransform::RadialTransform(const RadialFn& f, double r_max, double max_frequency) {
  if (!(r_max > 0.0)) throw Error(Errc::domain, "radial transform needs r_max > 0");
  using GL = boost::math::quadrature::gauss<double, 10>;
  const auto& xa = GL::abscissa();
  const auto& wa = GL::weights();
  double width = r_max / 16.0;
  if (max_frequency > 0.0) width = std::min(width, M_PI / max_frequency);
  const long panels = long(std::ceil(r_max / width));
  width = r_max / double(panels);
  const double norm = std::pow(2.0 * M_PI, -1.5) * 4.0 * M_PI;
  r_.reserve(size_t(panels) * 10);
  wf_.reserve(size_t(panels) * 10);
  for (long p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * width, half = 0.5 * width;
    for (size_t i = 0; i < xa.size(); ++i) {
      for (int sgn : {-1, 1}) {
        if (xa[i] == 0.0 && sgn > 0) continue;
        const double r = mid + sgn * half * xa[i];
        r_.push_back(r);
        wf_.push_back(norm * half * wa[i] * f(r) * r * r);
      }
    }
  }
}

RadialJet RadialTransform::jet(double rho) const {
  RadialJet j;
  for (size_t i = 0; i < r_.size(); ++i) {
    const double r = r_[i], w = wf_[i];
    const auto b = bessel_terms(r * rho);
    const double r2 = r * r;
    j.d0 += w * b.j0;
    j.d1 += w * r * b.j1;
    j.d2 += w * r2 * b.j2;
    j.d3 += w * r2 * r * b.j3;
    j.d1_over_rho += w * r2 * b.g1;
    j.q += w * r2 * r * b.g2;
  }
  return j;
}

std::array<double, 4> RadialTransform::derivatives(double rho) const {
  std::array<double, 4> d{};
  for (size_t i = 0; i < r_.size(); ++i) {
    const double r = r_[i];
    const auto b = bessel_terms(r * rho);
    d[0] += wf_[i] * b.j0;
    d[1] += wf_[i] * r * b.j1;
    d[2] += wf_[i] * r * r * b.j2;
    d[3] += wf_[i] * r * r * r * b.j3;
  }
  return d;
}

namespace {

double value_from(const RadialJet& B, const RadialJet& P, int alpha, double theta) {
  const Eigen::Vector3d e(0.0, 0.0, 1.0);
  const Eigen::Vector3d xh(std::sin(theta), 0.0, std::cos(theta));
  const double c = xh.dot(e);
  if (alpha == 0) {
    const Eigen::Vector3d u = e * (B.d0 - P.d1_over_rho) - xh * c * (P.d2 - P.d1_over_rho);
    return u.norm();
  }
  Eigen::Matrix3d m;
  for (int k = 0; k < 3; ++k)
    for (int jx = 0; jx < 3; ++jx) {
      const double dkj = (k == jx) ? 1.0 : 0.0;
      m(k, jx) = B.d1 * xh(k) * e(jx) -
                 (P.d3 * xh(k) * xh(jx) * c + P.q * (dkj * c + e(k) * xh(jx) + e(jx) * xh(k) - 3.0 * xh(k) * xh(jx) * c));
    }
  return m.norm();
}

}  // namespace

double axisymmetric_value(const RadialTransform& b_hat, const RadialTransform& psi_hat, int alpha, double rho,
                          double theta) {
  if (alpha < 0 || alpha > 1) throw Error(Errc::unsupported_norm, "pointwise evaluation supports alpha 0 or 1");
  return value_from(b_hat.jet(rho), psi_hat.jet(rho), alpha, theta);
}

double axisymmetric_sup(const RadialTransform& b_hat, const RadialTransform& psi_hat, int alpha,
                        const SupOptions& opt) {
  if (alpha < 0 || alpha > 1) throw Error(Errc::unsupported_norm, "sup norm supports alpha 0 or 1");
  if (!(opt.rho_step > 0.0) || !(opt.rho_max > 0.0) || opt.theta_points < 2) {
    throw Error(Errc::domain, "invalid sup sampling");
  }
  const double dtheta = 0.5 * M_PI / (opt.theta_points - 1);
  struct Cand {
    double v, rho, theta;
  };
  std::vector<Cand> best;
  const long nrho = long(std::ceil(opt.rho_max / opt.rho_step));
  for (long i = 0; i <= nrho; ++i) {
    const double rho = i * opt.rho_step;
    const RadialJet B = b_hat.jet(rho), P = psi_hat.jet(rho);
    for (int j = 0; j < opt.theta_points; ++j) {
      const double th = j * dtheta;
      best.push_back({value_from(B, P, alpha, th), rho, th});
    }
  }
  // refine the few largest samples on shrinking local grids
  std::partial_sort(best.begin(), best.begin() + std::min<size_t>(4, best.size()), best.end(),
                    [](const Cand& x, const Cand& y) { return x.v > y.v; });
  best.resize(std::min<size_t>(4, best.size()));
  double sup = 0.0;
  for (Cand c : best) {
    double hr = opt.rho_step, ht = dtheta;
    for (int round = 0; round < opt.refine_rounds; ++round) {
      Cand top = c;
      for (int a = -2; a <= 2; ++a) {
        const double rho = std::max(0.0, c.rho + 0.5 * a * hr);
        const RadialJet B = b_hat.jet(rho), P = psi_hat.jet(rho);
        for (int b = -2; b <= 2; ++b) {
          const double th = std::clamp(c.theta + 0.5 * b * ht, 0.0, 0.5 * M_PI);
          const double v = value_from(B, P, alpha, th);
          if (v > top.v) top = {v, rho, th};
        }
      }
      c = top;
      hr *= 0.5;
      ht *= 0.5;
    }
    sup = std::max(sup, c.v);
  }
  return sup;
}

}  // namespace elastowave
