#pragma once

// Continuum norms of fields whose Fourier transform is radial up to the
// projection structure a(r) P e + b(r) (I - P) e, e a fixed unit vector.
// No periodic box is involved, so algebraic decay can be measured cleanly.

#include <array>
#include <functional>
#include <vector>

#include "elastowave/error.hpp"

namespace elastowave {

using RadialFn = std::function<double(double)>;

struct AngularConstants {
  double parallel;       // int |P e|^2 over the unit sphere
  double perpendicular;  // int |(I - P) e|^2
};
AngularConstants angular_constants();

struct AngularWeights {
  double w_long = 1.0;
  double w_trans = 0.0;
};

struct RadialQuadOptions {
  double rel_tol = 1e-8;
  double scale = 1.0;        // typical radius of the integrand
  double oscillation = 0.0;  // angular frequency of the integrand in r
  double r_max = 0.0;        // optional hard upper limit (0: automatic)
};

/// ( int_0^inf r^{2 alpha} (w_l c_par |m_l|^2 + w_t c_perp |m_t|^2) h^2 r^2 dr )^{1/2}
/// by panel-wise adaptive Gauss-Kronrod. Raises accuracy when the estimated
/// relative error exceeds rel_tol.
double radial_l2_norm(const RadialFn& m_long, const RadialFn& m_trans, const RadialFn& h, int alpha,
                      AngularWeights w, const RadialQuadOptions& opt = {});

/// Single multiplier applied to both channels.
double radial_l2_norm(const std::function<double(double, double)>& multiplier, double t, const RadialFn& h,
                      int alpha, AngularWeights w, const RadialQuadOptions& opt = {});

/// Spherical Bessel j0 and its first three derivatives at x.
std::array<double, 4> j0_derivatives(double x);

struct RadialJet {
  double d0 = 0, d1 = 0, d2 = 0, d3 = 0;
  double d1_over_rho = 0;  // f' / rho, finite at rho = 0
  double q = 0;            // f'' / rho - f' / rho^2
};

/// Inverse (2 pi)^{-3/2}-normalised Fourier transform of a radial symbol,
/// sampled once on Gauss-Legendre panels; returns d^n/drho^n for n <= 3.
class RadialTransform {
 public:
  RadialTransform() = default;
  RadialTransform(const RadialFn& f, double r_max, double max_frequency);

  std::array<double, 4> derivatives(double rho) const;
  RadialJet jet(double rho) const;
  std::size_t nodes() const { return r_.size(); }

 private:
  std::vector<double> r_;
  std::vector<double> wf_;  // weight * f(r) * r^2
};

struct SupOptions {
  double rho_max = 10.0;
  double rho_step = 0.1;
  int theta_points = 17;
  int refine_rounds = 4;
};

/// sup_x |grad^alpha u(x)| (pointwise Euclidean / Frobenius) for
/// u = F^{-1}[b g] e - Hess F^{-1}[(a - b) g / r^2] e, alpha in {0, 1}.
/// b_hat = b g and psi_hat = (a - b) g / r^2 are the radial inputs.
double axisymmetric_sup(const RadialTransform& b_hat, const RadialTransform& psi_hat, int alpha,
                        const SupOptions& opt);

/// Pointwise |grad^alpha u| at (rho, theta), theta measured from e.
double axisymmetric_value(const RadialTransform& b_hat, const RadialTransform& psi_hat, int alpha, double rho,
                          double theta);

}  // namespace elastowave
