#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include <boost/numeric/odeint.hpp>

#include "elastowave/kernels.hpp"

namespace elastowave {

RootFormKernels kernel_root_form(double t, double r, const DampingParams& p) {
  using cd = std::complex<double>;
  const auto roots = char_roots(p, r);
  if (roots.branch == Branch::degenerate) {
    const double a = roots.plus.real();
    const double e = std::exp(a * t);
    return {(1.0 - a * t) * e, t * e};
  }
  // Straight from the definition: no stabilised differences here.
  const cd sp = roots.plus, sm = roots.minus;
  const cd ep = std::exp(sp * t), em = std::exp(sm * t);
  const cd k0 = (-sm * ep + sp * em) / (sp - sm);
  const cd k1 = (ep - em) / (sp - sm);
  return {k0.real(), k1.real()};
}

LowFreqResidual lowfreq_residual(double t, double r, const DampingParams& p) {
  if (!(r < p.threshold()) || r < 0.0) {
    throw Error(Errc::out_of_domain, "trigonometric representation needs 0 <= r < 2 beta / nu");
  }
  const auto [k0, k1] = kernel_root_form(t, r, p);
  const double k00 = diffusion_hat(t, r, p, Diffusion::K00);
  const double heat = std::exp(-0.5 * p.nu * r * r * t);
  double trig = t * heat;
  if (r > 0.0) {
    const double omega = p.beta * r * phi(r, p);
    trig = heat * std::sin(omega * t) / omega;
  }
  return {std::abs(k0 - 0.5 * p.nu * r * r * k1 - k00), std::abs(k1 - trig)};
}

double ForcingSeries::at(double t) const {
  const auto n = static_cast<long>(values.size());
  if (n == 0) return 0.0;
  if (n < 4) throw Error(Errc::insufficient_samples, "forcing interpolation needs at least 4 samples");
  const double s = t / dt;
  long i0 = static_cast<long>(std::floor(s)) - 1;
  i0 = std::clamp(i0, 0L, n - 4);
  double out = 0.0;
  for (long j = 0; j < 4; ++j) {
    double w = 1.0;
    for (long m = 0; m < 4; ++m) {
      if (m != j) w *= (s - static_cast<double>(i0 + m)) / static_cast<double>(j - m);
    }
    out += w * values[static_cast<size_t>(i0 + j)];
  }
  return out;
}

namespace {

ModeState integrate_mode(double t, double r, const DampingParams& p, double w0, double w1,
                         const std::function<double(double)>& forcing, double rel_tol) {
  using State = std::array<double, 2>;
  namespace ode = boost::numeric::odeint;
  if (t < 0.0) throw Error(Errc::domain, "mode_oracle requires t >= 0");
  State x{w0, w1};
  if (t == 0.0) return {w0, w1};
  const double damp = p.nu * r * r;
  const double stiff = p.beta * p.beta * r * r;
  auto rhs = [&](const State& s, State& ds, double tau) {
    ds[0] = s[1];
    ds[1] = -damp * s[1] - stiff * s[0] + (forcing ? forcing(tau) : 0.0);
  };
  const double scale = std::max({std::abs(w0), std::abs(w1), 1.0});
  const double abs_tol = rel_tol * 1e-3 * scale;
  auto stepper = ode::make_controlled(abs_tol, rel_tol, ode::runge_kutta_dopri5<State>());
  const double dt0 = std::min(t, 1e-3 / (1.0 + damp + std::sqrt(stiff)));
  size_t steps = 0;
  try {
    steps = ode::integrate_adaptive(stepper, rhs, x, 0.0, t, dt0);
  } catch (const std::exception& e) {
    throw Error(Errc::stiffness, std::string("mode oracle step control failed: ") + e.what());
  }
  if (steps > 50'000'000) throw Error(Errc::stiffness, "mode oracle exceeded the step budget");
  return {x[0], x[1]};
}

}  // namespace

ModeState mode_oracle(double t, double r, const DampingParams& p, double w0, double w1,
                      const std::optional<ForcingSeries>& forcing, double rel_tol) {
  std::function<double(double)> f;
  if (forcing) f = [&forcing](double tau) { return forcing->at(tau); };
  return integrate_mode(t, r, p, w0, w1, f, rel_tol);
}

ModeState mode_oracle_fn(double t, double r, const DampingParams& p, double w0, double w1,
                         const std::function<double(double)>& forcing, double rel_tol) {
  return integrate_mode(t, r, p, w0, w1, forcing, rel_tol);
}

}  // namespace elastowave
