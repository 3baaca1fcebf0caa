#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Geometry>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "elastowave/elastic.hpp"

using namespace elastowave;

namespace {

// smooth, non-symmetric, real data
VectorField bumpy(const Grid3& g, double shift) {
  return to_spectral(VectorField::sample(g, [&](const Eigen::Vector3d& x) {
    const double e = std::exp(-0.5 * (x - Eigen::Vector3d(shift, -0.3, 0.2)).squaredNorm());
    return Eigen::Vector3d(e * (1.0 + x(1)), e * std::sin(x(0) + 0.4), e * x(2) * x(0));
  }));
}

double max_abs_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c) m = std::max(m, (a[c] - b[c]).abs().maxCoeff());
  return m;
}

double max_abs(const VectorField& a) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c) m = std::max(m, a[c].abs().maxCoeff());
  return m;
}

}  // namespace

TEST_CASE("Lame parameters and projection") {
  CHECK_THROWS_AS(LameParams::make(0.0, 0.0, 1.0), Error);
  CHECK_THROWS_AS(LameParams::make(-3.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(LameParams::make(0.0, 1.0, 0.0), Error);
  const auto lame = LameParams::make(0.0, 1.0, 1.0);
  CHECK(lame.beta_long() == doctest::Approx(std::sqrt(2.0)));
  CHECK(lame.cutoffs().c0 == doctest::Approx(1.0));
  CHECK(lame.cutoffs().c1 == doctest::Approx(4.0 * std::sqrt(2.0)));

  bool deg = false;
  CHECK(projection(Eigen::Vector3d::Zero(), &deg).isZero());
  CHECK(deg);
  const Eigen::Vector3d xi(0.3, -1.2, 0.7);
  const Eigen::Matrix3d P = projection(xi, &deg);
  CHECK_FALSE(deg);
  CHECK((P * P - P).norm() < 1e-15);
  CHECK((P * xi - xi).norm() < 1e-15);
  CHECK(P.trace() == doctest::Approx(1.0));
}

TEST_CASE("diagonalisation is independent of the completion") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  const auto lame = LameParams::make(0.7, 1.3, 0.9);
  for (int s = 0; s < 50; ++s) {
    const Eigen::Vector3d xi(U(rng), U(rng), U(rng));
    const double t = 0.1 + std::abs(U(rng));
    for (Kernel w : {Kernel::K0, Kernel::K1})
      for (int l = 0; l <= 2; ++l)
        for (int comp = 0; comp <= 1; ++comp) CHECK(diagonalize_check(xi, lame, t, w, l, comp) < 1e-13);
  }
  // axis-aligned vectors, where a careless completion would break down
  CHECK(diagonalize_check(Eigen::Vector3d(0.0, 0.0, 2.0), lame) < 1e-14);
  CHECK(diagonalize_check(Eigen::Vector3d(1e-3, 0.0, 0.0), lame) < 1e-14);
}

TEST_CASE("semigroup and zero mode") {
  const Grid3 g = make_grid(16, 8.0);
  const auto lame = LameParams::make(0.5, 1.0, 0.8);
  const VectorField f0 = bumpy(g, 0.1), f1 = bumpy(g, -0.4);
  const ElasticState direct = linear_propagate(f0, f1, 1.7, lame);
  const ElasticState split = linear_propagate(linear_propagate(f0, f1, 0.6, lame), 1.1, lame);
  const double scale = max_abs(direct.u_hat) + max_abs(direct.v_hat);
  CHECK(max_abs_diff(direct.u_hat, split.u_hat) < 1e-12 * scale);
  CHECK(max_abs_diff(direct.v_hat, split.v_hat) < 1e-12 * scale);
  CHECK(split.time == doctest::Approx(1.7));

  for (int c = 0; c < 3; ++c) {
    const cplx want = f0[c](0) + 1.7 * f1[c](0);
    CHECK(std::abs(direct.u_hat[c](0) - want) < 1e-14 * (1.0 + std::abs(want)));
    CHECK(std::abs(direct.v_hat[c](0) - f1[c](0)) < 1e-14 * (1.0 + std::abs(f1[c](0))));
  }
  // t = 0 is the identity away from the Nyquist planes
  const ElasticState same = linear_propagate(f0, f1, 0.0, lame);
  double moved = 0.0, nyq = 0.0;
  for (Index idx = 0; idx < g.size(); ++idx) {
    const bool on_plane = (g.wavevector_index(idx).array() == -g.n / 2).any();
    for (int c = 0; c < 3; ++c) {
      const double d = std::abs(same.u_hat[c](idx) - f0[c](idx)) + std::abs(same.v_hat[c](idx) - f1[c](idx));
      if (on_plane) {
        nyq = std::max(nyq, std::abs(same.u_hat[c](idx)) + std::abs(same.v_hat[c](idx)));
      } else {
        moved = std::max(moved, d);
      }
    }
  }
  CHECK(moved < 1e-15 * scale);
  CHECK(nyq == 0.0);
  // physical output stays real
  const VectorField up = to_physical(direct.u_hat);
  CHECK(hermitian_defect(direct.u_hat) < 1e-13);
  (void)up;
}

TEST_CASE("energy does not increase") {
  const Grid3 g = make_grid(16, 8.0);
  const auto lame = LameParams::make(0.2, 1.0, 0.5);
  ElasticState s{bumpy(g, 0.0), bumpy(g, 0.5), 0.0};
  double e = linear_energy(s, lame);
  CHECK(e > 0.0);
  for (int k = 0; k < 40; ++k) {
    s = linear_propagate(s, 0.05, lame);
    const double e2 = linear_energy(s, lame);
    CHECK(e2 <= e * (1.0 + 1e-13));
    e = e2;
  }
}

TEST_CASE("rotation and reflection invariance") {
  const Grid3 g = make_grid(16, 2.0 * M_PI);
  const auto lame = LameParams::make(0.5, 1.0, 0.8);
  Eigen::Matrix3d R;  // quarter turn about z
  R << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  // periodic, with no symmetry of its own
  auto f = [](const Eigen::Vector3d& x) {
    return Eigen::Vector3d(std::sin(x(0) + 2.0 * x(1)) * std::cos(x(2)) + 0.3, std::cos(x(0)) * std::sin(3.0 * x(2) + 1.0),
                           std::sin(x(1) - x(2)) + std::cos(2.0 * x(0) - 0.5));
  };
  for (const Eigen::Matrix3d& Q : {Eigen::Matrix3d(R), Eigen::Matrix3d(Eigen::Vector3d(1, -1, 1).asDiagonal())}) {
    const VectorField a = to_spectral(VectorField::sample(g, f));
    const VectorField b = to_spectral(VectorField::sample(g, [&](const Eigen::Vector3d& x) {
      return Eigen::Vector3d(Q * f(Q.transpose() * x));
    }));
    const VectorField ua = to_physical(linear_propagate(a, a, 1.3, lame).u_hat);
    const VectorField ub = to_physical(linear_propagate(b, b, 1.3, lame).u_hat);
    // compare ub(x) with Q ua(Q^T x) at every grid point
    double err = 0.0, ref = 0.0;
    for (Index idx = 0; idx < g.size(); ++idx) {
      const Eigen::Vector3d y = Q.transpose() * g.position(idx);
      int ii[3];
      for (int c = 0; c < 3; ++c) {
        const long j = std::lround((y(c) + 0.5 * g.box_length) / g.spacing());
        ii[c] = int(((j % g.n) + g.n) % g.n);
      }
      const Index src = g.index(ii[0], ii[1], ii[2]);
      const Eigen::Vector3d va(ua[0](src).real(), ua[1](src).real(), ua[2](src).real());
      const Eigen::Vector3d vb(ub[0](idx).real(), ub[1](idx).real(), ub[2](idx).real());
      err = std::max(err, (vb - Q * va).cwiseAbs().maxCoeff());
      ref = std::max(ref, va.cwiseAbs().maxCoeff());
    }
    CHECK(err < 1e-12 * ref);
  }
}

TEST_CASE("longitudinal and transverse parts decouple") {
  const Grid3 g = make_grid(16, 8.0);
  const auto lame = LameParams::make(1.0, 0.6, 0.9);
  // gradient (curl-free) and curl (divergence-free) data
  const VectorField pot = bumpy(g, 0.2);
  VectorField grad(g, Space::spectral), curl(g, Space::spectral);
  for (Index idx = 0; idx < g.size(); ++idx) {
    const Eigen::Vector3i k = g.wavevector_index(idx);
    if ((k.array().abs() == g.n / 2).any()) continue;
    const Eigen::Vector3d xi = g.xi(idx);
    const cplx I(0.0, 1.0);
    for (int c = 0; c < 3; ++c) grad[c](idx) = I * xi(c) * pot[0](idx);
    curl[0](idx) = I * (xi(1) * pot[2](idx) - xi(2) * pot[1](idx));
    curl[1](idx) = I * (xi(2) * pot[0](idx) - xi(0) * pot[2](idx));
    curl[2](idx) = I * (xi(0) * pot[1](idx) - xi(1) * pot[0](idx));
  }
  const double t = 0.9;
  const ElasticState sg = linear_propagate(grad, VectorField(g, Space::spectral), t, lame);
  const ElasticState sc = linear_propagate(curl, VectorField(g, Space::spectral), t, lame);
  double div_c = 0.0, curl_g = 0.0, lerr = 0.0, terr = 0.0;
  for (Index idx = 0; idx < g.size(); ++idx) {
    const Eigen::Vector3d xi = g.xi(idx);
    const double r = xi.norm();
    cplx d = 0.0;
    for (int c = 0; c < 3; ++c) d += xi(c) * sc.u_hat[c](idx);
    div_c = std::max(div_c, std::abs(d));
    const Eigen::Vector3cd u(sg.u_hat[0](idx), sg.u_hat[1](idx), sg.u_hat[2](idx));
    curl_g = std::max(curl_g, xi.cast<cplx>().cross(u).norm());
    const double kl = kernel_hat(t, r, lame.longitudinal(), Kernel::K0);
    const double kt = kernel_hat(t, r, lame.transverse(), Kernel::K0);
    for (int c = 0; c < 3; ++c) {
      lerr = std::max(lerr, std::abs(sg.u_hat[c](idx) - kl * grad[c](idx)));
      terr = std::max(terr, std::abs(sc.u_hat[c](idx) - kt * curl[c](idx)));
    }
  }
  CHECK(div_c < 1e-13 * max_abs(curl));
  CHECK(curl_g < 1e-13 * max_abs(grad));
  CHECK(lerr < 1e-14 * max_abs(grad));
  CHECK(terr < 1e-14 * max_abs(curl));
}

TEST_CASE("per-mode agreement with the ODE oracle on 8^3") {
  const Grid3 g = make_grid(8, 2.0 * M_PI);
  const auto lame = LameParams::make(0.3, 1.0, 0.7);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N(0.0, 1.0);
  VectorField a(g, Space::physical), b(g, Space::physical);
  for (int c = 0; c < 3; ++c)
    for (Index i = 0; i < g.size(); ++i) {
      a[c](i) = N(rng);
      b[c](i) = N(rng);
    }
  const VectorField f0 = to_spectral(a), f1 = to_spectral(b);
  const double t = 1.4;
  const ElasticState s = linear_propagate(f0, f1, t, lame);
  double worst = 0.0;
  for (Index idx = 0; idx < g.size(); ++idx) {
    const Eigen::Vector3d xi = g.xi(idx);
    const double r = xi.norm();
    if ((g.wavevector_index(idx).array() == -g.n / 2).any()) {
      for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(s.u_hat[c](idx)) + std::abs(s.v_hat[c](idx)));
      continue;
    }
    const Eigen::Matrix3d P = projection(xi);
    const Eigen::Matrix3d Qm = Eigen::Matrix3d::Identity() - P;
    Eigen::Vector3cd u0, u1, got_u, got_v;
    for (int c = 0; c < 3; ++c) {
      u0(c) = f0[c](idx);
      u1(c) = f1[c](idx);
      got_u(c) = s.u_hat[c](idx);
      got_v(c) = s.v_hat[c](idx);
    }
    Eigen::Vector3cd want_u = Eigen::Vector3cd::Zero(), want_v = Eigen::Vector3cd::Zero();
    // every component of each channel solves the scalar ODE with linear data
    for (int ch = 0; ch < 2; ++ch) {
      const Eigen::Matrix3d& M = ch == 0 ? P : Qm;
      const DampingParams dp = ch == 0 ? lame.longitudinal() : lame.transverse();
      const Eigen::Vector3cd p0 = M * u0, p1 = M * u1;
      for (int c = 0; c < 3; ++c) {
        const auto re = mode_oracle(t, r, dp, p0(c).real(), p1(c).real());
        const auto im = mode_oracle(t, r, dp, p0(c).imag(), p1(c).imag());
        want_u(c) += cplx(re.w, im.w);
        want_v(c) += cplx(re.dw, im.dw);
      }
    }
    const double scale = 1.0 + u0.norm() + u1.norm();
    worst = std::max(worst, ((got_u - want_u).norm() + (got_v - want_v).norm()) / scale);
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("Duhamel increment by Simpson's rule") {
  const Grid3 g = make_grid(8, 2.0 * M_PI);
  const auto lame = LameParams::make(0.0, 1.0, 1.0);
  VectorField F = bumpy(g, 0.0);
  CHECK_THROWS_AS(duhamel_increment({F, F}, 0.5, lame), Error);
  CHECK_THROWS_AS(duhamel_increment({F, F, F, F}, 0.5, lame), Error);
  try {
    duhamel_increment({F}, 0.5, lame);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::insufficient_samples);
  }

  // F(s) = cos(s) F: the oracle is int_0^D K1(D - s) cos(s) ds per channel
  const double D = 0.8;
  std::vector<VectorField> samples;
  const int ns = 129;
  for (int j = 0; j < ns; ++j) samples.push_back(std::cos(D * j / (ns - 1)) * F);
  const auto inc = duhamel_increment_pair(samples, D, lame);
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double worst = 0.0;
  for (Index idx = 0; idx < g.size(); ++idx) {
    const Eigen::Vector3d xi = g.xi(idx);
    const double r = xi.norm();
    if ((g.wavevector_index(idx).array() == -g.n / 2).any()) continue;
    auto w = [&](const DampingParams& p, int l) {
      return GK::integrate([&](double s) { return kernel_hat(D - s, r, p, Kernel::K1, l) * std::cos(s); }, 0.0, D,
                           10, 1e-14);
    };
    const double wl = w(lame.longitudinal(), 0), wt = w(lame.transverse(), 0);
    const double vl = w(lame.longitudinal(), 1), vt = w(lame.transverse(), 1);
    const Eigen::Matrix3d P = projection(xi);
    Eigen::Vector3cd f;
    for (int c = 0; c < 3; ++c) f(c) = F[c](idx);
    // d/dD of the Duhamel integral adds K1(0) cos(D) = 0
    const Eigen::Vector3cd want_u = (wl * P + wt * (Eigen::Matrix3d::Identity() - P)) * f;
    const Eigen::Vector3cd want_v = (vl * P + vt * (Eigen::Matrix3d::Identity() - P)) * f;
    for (int c = 0; c < 3; ++c) {
      worst = std::max(worst, std::abs(inc.du[c](idx) - want_u(c)));
      worst = std::max(worst, std::abs(inc.dv[c](idx) - want_v(c)));
    }
  }
  CHECK(worst < 1e-8 * max_abs(F));
}
