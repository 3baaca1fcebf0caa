#pragma once

// Closed-form Fourier symbols of the strongly damped wave equation
//   w'' - beta^2 Lap w - nu Lap w' = f
// evaluated at a radial frequency r = |xi|. Everything here is templated on
// the scalar type of r so the same formulas serve double evaluation and the
// Jet2 differentiation used by the bound scans.

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "elastowave/error.hpp"
#include "elastowave/jet.hpp"

namespace elastowave {

struct DampingParams {
  double beta = 1.0;  // wave speed
  double nu = 1.0;    // viscosity

  /// Validating constructor; throws Errc::domain unless beta > 0 and nu > 0.
  static DampingParams make(double beta, double nu);

  /// Radius 2 beta / nu separating oscillatory and overdamped modes.
  double threshold() const { return 2.0 * beta / nu; }
};

inline DampingParams DampingParams::make(double beta, double nu) {
  if (!(beta > 0.0) || !(nu > 0.0)) {
    throw Error(Errc::domain, "damping parameters require beta > 0 and nu > 0");
  }
  return {beta, nu};
}

enum class Branch { complex_roots, real_roots, degenerate };
enum class Kernel { K0, K1 };
enum class Diffusion { G0, G1, K00, PHI };
enum class Wave { W0, W1 };

/// Relative width of the confluent window around a double root.
inline constexpr double kDegenerateWindow = 1e-6;

struct CharRoots {
  std::complex<double> plus;
  std::complex<double> minus;
  Branch branch;
};

/// Roots of s^2 + nu r^2 s + beta^2 r^2 = 0, larger real part first.
inline CharRoots char_roots(const DampingParams& p, double r) {
  const double a = -0.5 * p.nu * r * r;
  const double q = r * r * (p.beta * p.beta - 0.25 * p.nu * p.nu * r * r);
  const double gap = 2.0 * std::sqrt(std::abs(q));
  const double mag = (q >= 0.0) ? p.beta * r : std::abs(a) + 0.5 * gap;
  if (gap < kDegenerateWindow * mag + 1e-300) {
    return {{a, 0.0}, {a, 0.0}, Branch::degenerate};
  }
  if (q > 0.0) {
    const double omega = 0.5 * gap;
    return {{a, omega}, {a, -omega}, Branch::complex_roots};
  }
  const double minus = a - 0.5 * gap;
  const double plus = (p.beta * p.beta * r * r) / minus;
  return {{plus, 0.0}, {minus, 0.0}, Branch::real_roots};
}

namespace detail {

// (K1, dK1/dt) at (t, r): all other kernels follow from the ODE relations.
template <class T>
std::pair<T, T> k1_pair(double t, const T& r, const DampingParams& p) {
  using std::cos;
  using std::exp;
  using std::expm1;
  using std::sin;
  using std::sqrt;
  const T r2 = r * r;
  const T a = T(-0.5 * p.nu) * r2;
  const T q = r2 * (T(p.beta * p.beta) - T(0.25 * p.nu * p.nu) * r2);
  const double qv = value_of(q);
  const double gap = 2.0 * std::sqrt(std::abs(qv));
  const double mag = (qv >= 0.0) ? p.beta * value_of(r) : std::abs(value_of(a)) + 0.5 * gap;
  if (gap < kDegenerateWindow * mag + 1e-300) {
    const T e = exp(a * T(t));
    return {T(t) * e, e * (T(1.0) + a * T(t))};
  }
  if (qv > 0.0) {
    const T omega = sqrt(q);
    const T e = exp(a * T(t));
    const T s = sin(omega * T(t)) / omega;
    return {e * s, e * (cos(omega * T(t)) + a * s)};
  }
  const T delta = sqrt(T(0.0) - q);
  const T minus = a - delta;
  const T plus = T(p.beta * p.beta) * r2 / minus;
  const T e = exp(plus * T(t));
  const T spread = (T(0.0) - expm1(T(-2.0 * t) * delta)) / (T(2.0) * delta);
  return {e * spread, e * (T(1.0) + minus * spread)};
}

}  // namespace detail

/// d^l/dt^l of K0 or K1 at (t, r), l <= 2.
template <class T>
T kernel_hat(double t, const T& r, const DampingParams& p, Kernel which, int l = 0) {
  if (l < 0 || l > 2) throw Error(Errc::unsupported_order, "time derivative order must be 0, 1 or 2");
  if (t < 0.0) throw Error(Errc::domain, "kernel_hat requires t >= 0");
  const auto [k1, dk1] = detail::k1_pair(t, r, p);
  const T nur2 = T(p.nu) * r * r;
  const T b2r2 = T(p.beta * p.beta) * r * r;
  if (which == Kernel::K1) {
    if (l == 0) return k1;
    if (l == 1) return dk1;
    return T(0.0) - b2r2 * k1 - nur2 * dk1;
  }
  if (l == 0) return dk1 + nur2 * k1;
  if (l == 1) return T(0.0) - b2r2 * k1;
  return T(0.0) - b2r2 * dk1;
}

/// All four time-derivative-0/1 kernel values at once (used by propagators).
struct KernelQuad {
  double k0, k1, dk0, dk1;
};

inline KernelQuad kernel_quad(double t, double r, const DampingParams& p) {
  const auto [k1, dk1] = detail::k1_pair(t, r, p);
  const double nur2 = p.nu * r * r;
  const double b2r2 = p.beta * p.beta * r * r;
  return {dk1 + nur2 * k1, k1, -b2r2 * k1, dk1};
}

/// sqrt(1 - nu^2 r^2 / (4 beta^2)), factored for accuracy near the threshold.
template <class T>
T phi(const T& r, const DampingParams& p) {
  using std::sqrt;
  if (!(value_of(r) < p.threshold())) {
    throw Error(Errc::out_of_domain, "phi requires r < 2 beta / nu");
  }
  const T x = T(p.nu / (2.0 * p.beta)) * r;
  return sqrt((T(1.0) - x) * (T(1.0) + x));
}

/// Diffusion waves G0, G1, the low-frequency kernel K00 and phi.
template <class T>
T diffusion_hat(double t, const T& r, const DampingParams& p, Diffusion which) {
  using std::cos;
  using std::exp;
  using std::sin;
  if (which == Diffusion::PHI) return phi(r, p);
  const T heat = exp(T(-0.5 * p.nu * t) * r * r);
  const T phase = T(p.beta * t) * r;
  switch (which) {
    case Diffusion::G0: return heat * cos(phase);
    case Diffusion::G1:
      if (value_of(r) == 0.0) return T(t);
      return heat * sin(phase) / (T(p.beta) * r);
    case Diffusion::K00: return heat * cos(phase * phi(r, p));
    case Diffusion::PHI: break;
  }
  return T(0.0);
}

/// Undamped wave kernels W0 = cos(t beta r), W1 = sin(t beta r) / (beta r).
template <class T>
T wave_hat(double t, const T& r, const DampingParams& p, Wave which) {
  using std::cos;
  using std::sin;
  if (t < 0.0) throw Error(Errc::domain, "wave_hat requires t >= 0");
  const T phase = T(p.beta * t) * r;
  if (which == Wave::W0) return cos(phase);
  if (value_of(r) == 0.0) return T(t);
  return sin(phase) / (T(p.beta) * r);
}

/// K0 and K1 straight from the root definition, in complex arithmetic.
/// Independent of kernel_hat's trigonometric/expm1 evaluation.
struct RootFormKernels {
  double k0, k1;
};
RootFormKernels kernel_root_form(double t, double r, const DampingParams& p);

struct LowFreqResidual {
  double res_24;  // |K0 - (nu r^2 / 2) K1 - K00|
  double res_25;  // |K1 - e^{-nu r^2 t/2} sin(t beta r phi) / (beta r phi)|
};

/// Residuals of the oscillatory-branch representation of K0 and K1.
/// The kernels come from the root definition; throws out_of_domain for
/// r >= 2 beta / nu.
LowFreqResidual lowfreq_residual(double t, double r, const DampingParams& p);

/// Forcing samples on a uniform time grid starting at t = 0.
struct ForcingSeries {
  double dt = 0.0;
  std::vector<double> values;
  double at(double t) const;  // 4-point Lagrange interpolation
};

struct ModeState {
  double w;
  double dw;
};

/// Integrates w'' + nu r^2 w' + beta^2 r^2 w = f with an adaptive
/// Dormand-Prince 5(4) pair to relative tolerance rel_tol.
ModeState mode_oracle(double t, double r, const DampingParams& p, double w0, double w1,
                      const std::optional<ForcingSeries>& forcing = std::nullopt,
                      double rel_tol = 1e-12);

/// Same ODE with a smooth forcing given as a callable of time.
ModeState mode_oracle_fn(double t, double r, const DampingParams& p, double w0, double w1,
                         const std::function<double(double)>& forcing, double rel_tol = 1e-12);

}  // namespace elastowave
