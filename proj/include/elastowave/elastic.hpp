#pragma once

// Linear viscoelastic propagator
//   u_tt - mu Lap u - (lambda + mu) grad div u - nu Lap u_t = F
// in Fourier variables: longitudinal modes (along xi) travel with speed
// sqrt(lambda + 2 mu), transverse ones with sqrt(mu).

#include <Eigen/Core>
#include <vector>

#include "elastowave/grid.hpp"
#include "elastowave/kernels.hpp"

namespace elastowave {

struct LameParams {
  double lambda = 0.0;
  double mu = 1.0;
  double nu = 1.0;

  /// Throws domain unless mu > 0, lambda + 2 mu > 0 and nu > 0.
  static LameParams make(double lambda, double mu, double nu);

  double beta_long() const;
  double beta_trans() const;
  DampingParams longitudinal() const { return {beta_long(), nu}; }
  DampingParams transverse() const { return {beta_trans(), nu}; }
  /// c0 = min speed / nu, c1 = 4 max speed / nu.
  CutoffSpec cutoffs() const;
};

/// xi xi^T / |xi|^2; the zero matrix (and *degenerate = true) at xi = 0.
Eigen::Matrix3d projection(const Eigen::Vector3d& xi, bool* degenerate = nullptr);

/// d^l/dt^l of K^{long} P + K^{trans} (I - P); the r = 0 kernel times I at xi = 0.
Eigen::Matrix3d matrix_kernel(double t, const Eigen::Vector3d& xi, const LameParams& lame, Kernel which, int l = 0);

struct ElasticState {
  VectorField u_hat;  // displacement, spectral
  VectorField v_hat;  // velocity, spectral
  double time = 0.0;
};

/// Homogeneous solution at time t from spectral data (f0_hat, f1_hat).
/// Nyquist-plane modes of the result are zero.
ElasticState linear_propagate(const VectorField& f0_hat, const VectorField& f1_hat, double t, const LameParams& lame);

/// Advances a state by dt (semigroup form).
ElasticState linear_propagate(const ElasticState& s, double dt, const LameParams& lame);

/// Per-mode kernel tables for one time increment. Kernels depend on the
/// wave vector only through the integer |k|^2, so the tables are short.
/// Modes on a Nyquist plane are set to zero (the projection is undefined there).
class Propagator {
 public:
  Propagator() = default;
  Propagator(const Grid3& grid, const LameParams& lame, double dt);

  double dt() const { return dt_; }
  /// (u, v) <- evolution over dt of (u, v).
  void advance(VectorField& u, VectorField& v) const;
  /// u += w M1(dt) F and v += w d/dt M1(dt) F.
  void add_forced(const VectorField& F, double w, VectorField& u, VectorField& v) const;

 private:
  struct Entry {
    double k0l, k1l, dk0l, dk1l;  // longitudinal
    double k0t, k1t, dk0t, dk1t;  // transverse
  };
  Grid3 grid_;
  double dt_ = 0.0;
  std::vector<Entry> table_;  // indexed by integer |k|^2
};

struct DuhamelIncrement {
  VectorField du;
  VectorField dv;
};

/// Composite Simpson approximation of int_0^Delta M1(Delta - s) F(t + s) ds
/// (and of its time derivative) from an odd number >= 3 of equally spaced
/// samples. Raises insufficient-samples otherwise.
DuhamelIncrement duhamel_increment_pair(const std::vector<VectorField>& F_samples, double Delta,
                                        const LameParams& lame);
VectorField duhamel_increment(const std::vector<VectorField>& F_samples, double Delta, const LameParams& lame);

/// max |Q diag(K_l, K_t, K_t) Q^T - matrix_kernel| with Q orthogonal and first
/// column xi / |xi|. completion = 0 uses the two basis vectors least aligned
/// with xi; any other value uses a rotated completion.
double diagonalize_check(const Eigen::Vector3d& xi, const LameParams& lame, double t = 1.0, Kernel which = Kernel::K1,
                         int l = 0, int completion = 0);

/// |v|^2 + mu |xi u|^2 + (lambda + mu) |xi . u|^2 summed over modes.
double linear_energy(const ElasticState& s, const LameParams& lame);

}  // namespace elastowave
