#pragma once

// Moments of the data, the diffusion-wave profiles G, H, G~ and decay-rate
// measurements (log-log fits) for linear and nonlinear solutions.

#include <string>
#include <vector>

#include <Eigen/Core>

#include "elastowave/nonlinear.hpp"

namespace elastowave {

struct Moments {
  Eigen::Matrix3d m0 = Eigen::Matrix3d::Zero();  // m0(k, i) = int d_i f0_k
  Eigen::Vector3d m1 = Eigen::Vector3d::Zero();  // int f1
  Eigen::Vector3d M = Eigen::Vector3d::Zero();   // int_0^inf int F(u)
  double M_tail_bound = 0.0;
  bool support_warning = false;  // data has mass on the box boundary
};

/// Riemann sums with h^3 weights; m0 from the spectral derivative of f0.
Moments moments(const VectorField& f0, const VectorField& f1);

struct NonlinearMoment {
  Eigen::Vector3d M = Eigen::Vector3d::Zero();
  double tail_bound = 0.0;  // c_fit / (1 + t_trunc)
  double c_fit = 0.0;
  double t_trunc = 0.0;
  double tail_at(double t) const { return c_fit / (1.0 + t); }
};

/// Simpson's rule in time over the cached spatial integrals of F(u) up to
/// t_trunc (rounded down to a full step). Raises range if the trajectory is
/// shorter than t_trunc.
NonlinearMoment nonlinear_moment(const Trajectory& traj, double t_trunc);

enum class Profile { G, H, Gtilde };

/// Fourier transform of the requested derivative of a profile. `derivative`
/// lists axes (0..2); the first one absorbs the inverse gradient on the m0
/// terms. Raises unsupported-combination for an empty list with m0 != 0.
Eigen::Vector3cd profile_hat(double t, const Eigen::Vector3d& xi, const LameParams& lame, const Moments& mom,
                             Profile which, const std::vector<int>& derivative = {});

struct NormId {
  int alpha = 0;  // spatial derivative order
  int ell = 0;    // time derivative order
  double p = 2.0;
  std::string label() const;
};

/// Exponent of the sharp decay rate of ||grad^alpha d_t^ell u||_p for the
/// supported combinations; raises unsupported-norm otherwise.
double expected_exponent(const NormId& id);
/// Profile matching a time-derivative order (0: G, 1: H, 2: G~).
Profile profile_for(const NormId& id);

struct DecayReport {
  std::vector<double> times, values;
  double slope = 0.0;
  double slope_ci = 0.0;  // 95% half-width
  double intercept = 0.0;
  double expected = 0.0;
  NormId norm_id;
  double drift = 0.0;  // slope(second half) - slope(first half)
  bool non_power_law = false;
};

/// Least-squares slope of log value against log time. Needs >= 8 points
/// spanning >= 1.5 decades (window) and positive values (domain).
DecayReport decay_slope(const std::vector<double>& times, const std::vector<double>& values,
                        double expected = 0.0, NormId id = {});

std::vector<double> log_times(double t0, double t1, int count);

/// f0 = 0, f1 = unit-mass Gaussian of the given width times a unit vector.
struct LinearSource {
  LameParams lame;
  double width = 1.0;
  Eigen::Vector3d direction = Eigen::Vector3d::UnitX();
};

/// ||grad^alpha d_t^ell u_lin(t)||_p (error = false) or of u_lin minus its
/// profile (error = true), p in {2, inf}, through continuum radial formulas.
double linear_source_norm(const LinearSource& src, const NormId& id, double t, bool error = false);

struct ProfileErrorReport {
  DecayReport solution;
  DecayReport error;
};

ProfileErrorReport profile_error_series(const LinearSource& src, const NormId& id, const std::vector<double>& times);

/// Grid path for a stored trajectory: uses stored times inside
/// [times.front(), times.back()] capped at L / (4 beta_long). Supports
/// ell in {0, 1} and requires m0 = 0.
ProfileErrorReport profile_error_series(const Trajectory& traj, const Moments& mom, const LameParams& lame,
                                        const NormId& id, const std::vector<double>& times);

}  // namespace elastowave
