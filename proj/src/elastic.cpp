#include "elastowave/elastic.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace elastowave {

LameParams LameParams::make(double lambda, double mu, double nu) {
  if (!(mu > 0.0) || !(lambda + 2.0 * mu > 0.0) || !(nu > 0.0) || !std::isfinite(lambda)) {
    throw Error(Errc::domain, "Lame parameters need mu > 0, lambda + 2 mu > 0 and nu > 0");
  }
  return {lambda, mu, nu};
}

double LameParams::beta_long() const { return std::sqrt(lambda + 2.0 * mu); }
double LameParams::beta_trans() const { return std::sqrt(mu); }

CutoffSpec LameParams::cutoffs() const {
  const double lo = std::min(beta_long(), beta_trans()), hi = std::max(beta_long(), beta_trans());
  return CutoffSpec::make(lo / nu, 4.0 * hi / nu);
}

Eigen::Matrix3d projection(const Eigen::Vector3d& xi, bool* degenerate) {
  const double r2 = xi.squaredNorm();
  if (degenerate) *degenerate = (r2 == 0.0);
  if (r2 == 0.0) return Eigen::Matrix3d::Zero();
  return xi * xi.transpose() / r2;
}

Eigen::Matrix3d matrix_kernel(double t, const Eigen::Vector3d& xi, const LameParams& lame, Kernel which, int l) {
  const double r = xi.norm();
  const double kl = kernel_hat(t, r, lame.longitudinal(), which, l);
  const double kt = kernel_hat(t, r, lame.transverse(), which, l);
  const Eigen::Matrix3d P = projection(xi);
  return kl * P + kt * (Eigen::Matrix3d::Identity() - P);
}

namespace {

void require_spectral(const VectorField& f, const char* what) {
  if (f.space() != Space::spectral || f.components() != 3) {
    throw Error(Errc::shape, std::string(what) + " must be a spectral 3-vector field");
  }
}

}  // namespace

Propagator::Propagator(const Grid3& grid, const LameParams& lame, double dt) : grid_(grid), dt_(dt) {
  if (!(dt >= 0.0)) throw Error(Errc::domain, "propagator step must be nonnegative");
  const int h = grid.n / 2;
  table_.resize(size_t(3 * h * h + 1));
  const auto L = lame.longitudinal(), T = lame.transverse();
  for (size_t m = 0; m < table_.size(); ++m) {
    const double r = grid.dk() * std::sqrt(double(m));
    const auto ql = kernel_quad(dt, r, L), qt = kernel_quad(dt, r, T);
    table_[m] = {ql.k0, ql.k1, ql.dk0, ql.dk1, qt.k0, qt.k1, qt.dk0, qt.dk1};
  }
}

namespace {

// Visits every mode with its integer wave vector. P is odd in each component,
// so it has no consistent value on the Nyquist planes; those modes are zeroed
// (through `nyq`) to keep the output real and rotation covariant.
template <class Coef, class Nyq>
void mode_loop(const Grid3& g, Coef&& coef, Nyq&& nyq) {
  const int n = g.n, h = n / 2;
  Index idx = 0;
  for (int iz = 0; iz < n; ++iz) {
    const int kz = g.wavenumber(iz);
    for (int iy = 0; iy < n; ++iy) {
      const int ky = g.wavenumber(iy);
      for (int ix = 0; ix < n; ++ix, ++idx) {
        const int kx = g.wavenumber(ix);
        if (kx == -h || ky == -h || kz == -h) {
          nyq(idx);
        } else {
          coef(idx, kx, ky, kz);
        }
      }
    }
  }
}

}  // namespace

void Propagator::advance(VectorField& u, VectorField& v) const {
  require_spectral(u, "displacement");
  require_spectral(v, "velocity");
  if (!u.grid().same_as(grid_) || !v.grid().same_as(grid_)) throw Error(Errc::shape, "propagator grid mismatch");
  mode_loop(grid_, [&](Index idx, int kx, int ky, int kz) {
    const int m = kx * kx + ky * ky + kz * kz;
    const Entry& e = table_[size_t(m)];
    const cplx u0 = u[0](idx), u1 = u[1](idx), u2 = u[2](idx);
    const cplx v0 = v[0](idx), v1 = v[1](idx), v2 = v[2](idx);
    cplx pu = 0.0, pv = 0.0;  // (k.u) / |k|^2
    if (m > 0) {
      const double inv = 1.0 / m;
      pu = (double(kx) * u0 + double(ky) * u1 + double(kz) * u2) * inv;
      pv = (double(kx) * v0 + double(ky) * v1 + double(kz) * v2) * inv;
    }
    const cplx su = (e.k0l - e.k0t) * pu + (e.k1l - e.k1t) * pv;
    const cplx sv = (e.dk0l - e.dk0t) * pu + (e.dk1l - e.dk1t) * pv;
    const double k[3] = {double(kx), double(ky), double(kz)};
    const cplx uu[3] = {u0, u1, u2}, vv[3] = {v0, v1, v2};
    for (int c = 0; c < 3; ++c) {
      u[c](idx) = e.k0t * uu[c] + e.k1t * vv[c] + su * k[c];
      v[c](idx) = e.dk0t * uu[c] + e.dk1t * vv[c] + sv * k[c];
    }
  }, [&](Index idx) {
    for (int c = 0; c < 3; ++c) u[c](idx) = v[c](idx) = 0.0;
  });
}

void Propagator::add_forced(const VectorField& F, double w, VectorField& u, VectorField& v) const {
  require_spectral(F, "forcing");
  require_spectral(u, "displacement");
  require_spectral(v, "velocity");
  mode_loop(grid_, [&](Index idx, int kx, int ky, int kz) {
    const int m = kx * kx + ky * ky + kz * kz;
    const Entry& e = table_[size_t(m)];
    const cplx f[3] = {F[0](idx), F[1](idx), F[2](idx)};
    cplx pf = 0.0;
    if (m > 0) pf = (double(kx) * f[0] + double(ky) * f[1] + double(kz) * f[2]) / double(m);
    const double k[3] = {double(kx), double(ky), double(kz)};
    for (int c = 0; c < 3; ++c) {
      u[c](idx) += w * (e.k1t * f[c] + (e.k1l - e.k1t) * pf * k[c]);
      v[c](idx) += w * (e.dk1t * f[c] + (e.dk1l - e.dk1t) * pf * k[c]);
    }
  }, [](Index) {});
}

ElasticState linear_propagate(const ElasticState& s, double dt, const LameParams& lame) {
  require_spectral(s.u_hat, "displacement");
  require_spectral(s.v_hat, "velocity");
  require_compatible(s.u_hat, s.v_hat);
  ElasticState out{s.u_hat, s.v_hat, s.time + dt};
  Propagator(s.u_hat.grid(), lame, dt).advance(out.u_hat, out.v_hat);
  return out;
}

ElasticState linear_propagate(const VectorField& f0_hat, const VectorField& f1_hat, double t, const LameParams& lame) {
  return linear_propagate(ElasticState{f0_hat, f1_hat, 0.0}, t, lame);
}

DuhamelIncrement duhamel_increment_pair(const std::vector<VectorField>& F_samples, double Delta,
                                        const LameParams& lame) {
  const size_t ns = F_samples.size();
  if (ns < 3 || ns % 2 == 0) {
    throw Error(Errc::insufficient_samples, "Simpson's rule needs an odd number of at least 3 samples");
  }
  for (const auto& F : F_samples) {
    require_spectral(F, "forcing sample");
    require_compatible(F, F_samples.front());
  }
  if (!(Delta >= 0.0)) throw Error(Errc::domain, "Duhamel interval must be nonnegative");
  const Grid3& g = F_samples.front().grid();
  DuhamelIncrement out{VectorField(g, Space::spectral), VectorField(g, Space::spectral)};
  const double step = Delta / double(ns - 1);
  for (size_t j = 0; j < ns; ++j) {
    const double w = (j == 0 || j + 1 == ns) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    Propagator(g, lame, Delta - j * step).add_forced(F_samples[j], w * step / 3.0, out.du, out.dv);
  }
  return out;
}

VectorField duhamel_increment(const std::vector<VectorField>& F_samples, double Delta, const LameParams& lame) {
  return duhamel_increment_pair(F_samples, Delta, lame).du;
}

double diagonalize_check(const Eigen::Vector3d& xi, const LameParams& lame, double t, Kernel which, int l,
                         int completion) {
  const double r = xi.norm();
  if (r == 0.0) throw Error(Errc::domain, "diagonalisation needs xi != 0");
  Eigen::Matrix3d Q;
  Q.col(0) = xi / r;
  // order basis vectors by alignment with xi
  std::array<int, 3> ord{0, 1, 2};
  std::sort(ord.begin(), ord.end(), [&](int a, int b) { return std::abs(xi(a)) < std::abs(xi(b)); });
  Eigen::Vector3d e1 = Eigen::Vector3d::Unit(ord[0]), e2 = Eigen::Vector3d::Unit(ord[1]);
  if (completion != 0) {
    e1 = (e1 + 0.3 * e2).eval();
    e2 = (e2 - 0.7 * e1).eval();
  }
  for (int c = 1; c < 3; ++c) {
    Eigen::Vector3d w = (c == 1) ? e1 : e2;
    for (int p = 0; p < c; ++p) w -= Q.col(p).dot(w) * Q.col(p);
    Q.col(c) = w.normalized();
  }
  const double kl = kernel_hat(t, r, lame.longitudinal(), which, l);
  const double kt = kernel_hat(t, r, lame.transverse(), which, l);
  const Eigen::Matrix3d D = Eigen::Vector3d(kl, kt, kt).asDiagonal();
  return (Q * D * Q.transpose() - matrix_kernel(t, xi, lame, which, l)).cwiseAbs().maxCoeff();
}

double linear_energy(const ElasticState& s, const LameParams& lame) {
  require_spectral(s.u_hat, "displacement");
  require_spectral(s.v_hat, "velocity");
  const Grid3& g = s.u_hat.grid();
  double e = 0.0;
  for (Index idx = 0; idx < g.size(); ++idx) {
    const Eigen::Vector3d xi = g.xi(idx);
    const double r2 = g.xi_norm2(idx);
    cplx div = 0.0;
    double uu = 0.0, vv = 0.0;
    for (int c = 0; c < 3; ++c) {
      div += xi(c) * s.u_hat[c](idx);
      uu += std::norm(s.u_hat[c](idx));
      vv += std::norm(s.v_hat[c](idx));
    }
    e += vv + lame.mu * r2 * uu + (lame.lambda + lame.mu) * std::norm(div);
  }
  return e * g.mode_volume();
}

}  // namespace elastowave
