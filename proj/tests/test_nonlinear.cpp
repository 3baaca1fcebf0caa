#include <doctest.h>

#include <cmath>
#include <random>

#include "elastowave/nonlinear.hpp"

using namespace elastowave;

namespace {

double max_abs(const VectorField& a) {
  double m = 0.0;
  for (int c = 0; c < a.components(); ++c) m = std::max(m, a[c].abs().maxCoeff());
  return m;
}

double max_abs_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (int c = 0; c < a.components(); ++c) m = std::max(m, (a[c] - b[c]).abs().maxCoeff());
  return m;
}

// derivatives of u = (sin x cos y, cos(x + z), sin 2y)
struct Trig {
  Eigen::Matrix3d grad(const Eigen::Vector3d& p) const {  // (i, m) = d_i u_m
    const double x = p(0), y = p(1), z = p(2);
    Eigen::Matrix3d G = Eigen::Matrix3d::Zero();
    G(0, 0) = std::cos(x) * std::cos(y);
    G(1, 0) = -std::sin(x) * std::sin(y);
    G(0, 1) = -std::sin(x + z);
    G(2, 1) = -std::sin(x + z);
    G(1, 2) = 2.0 * std::cos(2.0 * y);
    return G;
  }
  double hess(const Eigen::Vector3d& p, int i, int j, int m) const {
    const double x = p(0), y = p(1), z = p(2);
    if (m == 0) {
      if (i == 2 || j == 2) return 0.0;
      if (i == j) return -std::sin(x) * std::cos(y);
      return -std::cos(x) * std::sin(y);
    }
    if (m == 1) {
      if (i == 1 || j == 1) return 0.0;
      return -std::cos(x + z);
    }
    if (i == 1 && j == 1) return -4.0 * std::sin(2.0 * y);
    return 0.0;
  }
  Eigen::Vector3d value(const Eigen::Vector3d& p) const {
    return {std::sin(p(0)) * std::cos(p(1)), std::cos(p(0) + p(2)), std::sin(2.0 * p(1))};
  }
};

VectorField gaussian_data(const Grid3& g, double amp, double sigma, Eigen::Vector3d dir) {
  dir.normalize();
  return VectorField::sample(g, [&](const Eigen::Vector3d& x) {
    return Eigen::Vector3d(amp * std::exp(-x.squaredNorm() / (2 * sigma * sigma)) * dir);
  });
}

}  // namespace

TEST_CASE("contraction tensors") {
  CHECK(ContractionTensor::zero().is_zero());
  CHECK_FALSE(ContractionTensor::standard().is_zero());
  CHECK(ContractionTensor::standard()(1, 0, 2, 1) == 1.0);
  CHECK(ContractionTensor::standard()(1, 0, 2, 0) == 0.0);
  CHECK(ContractionTensor::transposed()(2, 1, 2, 0) == 1.0);
  CHECK_THROWS_AS(ContractionTensor::from_id("other"), Error);
}

TEST_CASE("nonlinearity against hand-expanded products") {
  const Grid3 g = make_grid(16, 2.0 * M_PI);
  // single longitudinal mode: F_1 = -eps^2 sin(2x)/2, transverse: F = 0
  const double eps = 0.3;
  const VectorField ul = VectorField::sample(g, [&](const Eigen::Vector3d& x) {
    return Eigen::Vector3d(eps * std::sin(x(0)), 0, 0);
  });
  const VectorField ut = VectorField::sample(g, [&](const Eigen::Vector3d& x) {
    return Eigen::Vector3d(0, eps * std::sin(x(0)), 0);
  });
  const auto Fl = nonlinearity(ul, ContractionTensor::standard());
  const auto Ft = nonlinearity(ut, ContractionTensor::standard());
  CHECK(Fl.space() == Space::physical);
  double err = 0.0;
  for (Index i = 0; i < g.size(); ++i) {
    const double x = g.position(i)(0);
    err = std::max(err, std::abs(Fl[0](i).real() + 0.5 * eps * eps * std::sin(2.0 * x)));
  }
  CHECK(err < 1e-14);
  CHECK(max_abs(Ft) < 1e-15);

  const Trig tr;
  const VectorField u = VectorField::sample(g, [&](const Eigen::Vector3d& x) { return tr.value(x); });
  for (const auto& T : {ContractionTensor::standard(), ContractionTensor::transposed()}) {
    for (DealiasRule rule : {DealiasRule::none, DealiasRule::two_thirds}) {
      const VectorField F = nonlinearity(u, T, rule);
      double e = 0.0;
      for (Index idx = 0; idx < g.size(); ++idx) {
        const Eigen::Vector3d p = g.position(idx);
        const Eigen::Matrix3d G = tr.grad(p);
        for (int k = 0; k < 3; ++k) {
          double want = 0.0;
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
              for (int m = 0; m < 3; ++m) want += T(k, i, j, m) * G(i, j) * tr.hess(p, i, j, m);
          e = std::max(e, std::abs(F[k](idx).real() - want));
        }
      }
      CHECK(e < 1e-12);
    }
  }
}

TEST_CASE("dealiased product equals the truncated convolution on 8^3") {
  const Grid3 g = make_grid(8, 5.0);
  const int n = g.n;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N(0.0, 1.0);
  // random spectrum with |k_i| <= 3: the dealias mask must remove the 3s
  VectorField phys(g, Space::physical);
  for (int c = 0; c < 3; ++c)
    for (Index i = 0; i < g.size(); ++i) phys[c](i) = N(rng);
  VectorField uh = to_spectral(phys);
  for (Index idx = 0; idx < g.size(); ++idx) {
    const Eigen::Vector3i k = g.wavevector_index(idx);
    if ((k.array() == -n / 2).any())
      for (int c = 0; c < 3; ++c) uh[c](idx) = 0.0;
  }
  const auto T = ContractionTensor::standard();
  const VectorField F = nonlinearity(uh, T, DealiasRule::two_thirds);

  // direct sum over retained modes p, q - p
  std::vector<Index> kept;
  for (Index idx = 0; idx < g.size(); ++idx)
    if (dealias_keeps(g.wavevector_index(idx), n)) kept.push_back(idx);
  const double norm = std::pow(2.0 * M_PI, -1.5) * g.mode_volume();
  double err = 0.0;
  const cplx I(0.0, 1.0);
  for (Index q : kept) {
    const Eigen::Vector3i kq = g.wavevector_index(q);
    Eigen::Vector3cd want = Eigen::Vector3cd::Zero();
    for (Index p : kept) {
      const Eigen::Vector3i kp = g.wavevector_index(p);
      const Eigen::Vector3i kr = kq - kp;
      if (!dealias_keeps(kr, n)) continue;
      const Index r = g.index(g.storage(kr(0)), g.storage(kr(1)), g.storage(kr(2)));
      const Eigen::Vector3d xp = g.xi(p), xr = g.xi(r);
      for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            for (int m = 0; m < 3; ++m) {
              const double c = T(k, i, j, m);
              if (c == 0.0) continue;
              want(k) += c * (I * xp(i) * uh[j](p)) * (-xr(i) * xr(j) * uh[m](r)) * norm;
            }
    }
    for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(F[k](q) - want(k)));
  }
  CHECK(err < 1e-12 * max_abs(F));
  // everything outside the mask is zero
  for (Index idx = 0; idx < g.size(); ++idx)
    if (!dealias_keeps(g.wavevector_index(idx), n))
      for (int c = 0; c < 3; ++c) CHECK(F[c](idx) == cplx(0.0));
}

TEST_CASE("quadratic homogeneity") {
  const Grid3 g = make_grid(16, 8.0);
  const VectorField u = gaussian_data(g, 1.0, 1.0, {1, 2, 0.5});
  const VectorField F1 = nonlinearity(u, ContractionTensor::standard());
  const VectorField F3 = nonlinearity(3.0 * u, ContractionTensor::standard());
  CHECK(max_abs_diff(F3, 9.0 * F1) < 1e-13 * max_abs(F3));
  CHECK(max_abs(nonlinearity(u, ContractionTensor::zero())) == 0.0);
}

TEST_CASE("zero tensor reproduces the linear propagator") {
  const Grid3 g = make_grid(16, 8.0);
  const auto lame = LameParams::make(0.0, 1.0, 1.0);
  const VectorField f0 = gaussian_data(g, 1.0, 1.0, {1, 0, 0});
  const VectorField f1 = gaussian_data(g, 0.5, 0.8, {0, 1, 1});
  EvolveConfig cfg;
  cfg.dt = 0.25;
  cfg.t_end = 3.0;
  const Trajectory tr = evolve(f0, f1, lame, ContractionTensor::zero(), cfg);
  const ElasticState lin = linear_propagate(to_spectral(f0), to_spectral(f1), 3.0, lame);
  const double scale = max_abs(lin.u_hat);
  CHECK(max_abs_diff(tr.final_state.u_hat, lin.u_hat) < 1e-10 * scale);
  CHECK(max_abs_diff(tr.final_state.v_hat, lin.v_hat) < 1e-10 * scale);
  CHECK(tr.times.size() == 13);
  CHECK(tr.norms.size() == 25);
  CHECK(tr.final_state.time == doctest::Approx(3.0));
  // stored states round-trip through compact storage
  const ElasticState mid = tr.state(4);
  const ElasticState lin1 = linear_propagate(to_spectral(f0), to_spectral(f1), 1.0, lame);
  CHECK(max_abs_diff(mid.u_hat, lin1.u_hat) < 1e-10 * scale);

  cfg.t_end = 3.1;
  CHECK_THROWS_AS(evolve(f0, f1, lame, ContractionTensor::zero(), cfg), Error);
}

TEST_CASE("time step refinement") {
  const Grid3 g = make_grid(16, 8.0);
  const auto lame = LameParams::make(0.0, 1.0, 1.0);
  const VectorField f0 = gaussian_data(g, 0.3, 1.0, {1, 0.5, 0});
  const VectorField f1 = gaussian_data(g, 0.3, 1.0, {0, 1, -0.5});
  const auto T = ContractionTensor::standard();
  std::vector<VectorField> u;
  for (double dt : {0.4, 0.2, 0.1, 0.05}) {
    EvolveConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 2.0;
    cfg.store_states = false;
    u.push_back(evolve(f0, f1, lame, T, cfg).final_state.u_hat);
  }
  const double e1 = spectral_l2_norm(u[0] - u[1]);
  const double e2 = spectral_l2_norm(u[1] - u[2]);
  const double e3 = spectral_l2_norm(u[2] - u[3]);
  MESSAGE("successive differences " << e1 << " " << e2 << " " << e3);
  CHECK(e1 / e2 >= 8.0);
  CHECK(e2 / e3 >= 8.0);
}

TEST_CASE("amplitude scaling of the nonlinear correction") {
  const Grid3 g = make_grid(16, 8.0);
  const auto lame = LameParams::make(0.0, 1.0, 1.0);
  const auto T = ContractionTensor::standard();
  EvolveConfig cfg;
  cfg.dt = 0.25;
  cfg.t_end = 2.0;
  cfg.store_states = false;
  std::vector<double> rel;
  for (double eps : {1e-2, 5e-3, 2.5e-3}) {
    const VectorField f0 = gaussian_data(g, eps, 1.2, {1, 0.3, 0});
    const VectorField f1 = gaussian_data(g, eps, 1.2, {0, 1, 0.2});
    const auto u = evolve(f0, f1, lame, T, cfg).final_state.u_hat;
    const auto lin = linear_propagate(to_spectral(f0), to_spectral(f1), cfg.t_end, lame).u_hat;
    rel.push_back(spectral_l2_norm(u - lin) / spectral_l2_norm(lin));
  }
  CHECK(rel[1] / rel[0] == doctest::Approx(0.5).epsilon(0.1));
  CHECK(rel[2] / rel[1] == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("Picard iteration") {
  const Grid3 g = make_grid(16, 8.0);
  const auto lame = LameParams::make(0.0, 1.0, 1.0);
  const auto T = ContractionTensor::standard();
  const VectorField f0 = gaussian_data(g, 3e-3, 1.2, {1, 0.3, 0});
  const VectorField f1 = gaussian_data(g, 3e-3, 1.2, {0, 1, 0.2});
  PicardConfig pc;
  pc.march.dt = 0.25;
  pc.march.t_end = 4.0;
  pc.tol = 1e-11;
  const PicardResult pr = picard_iterate(f0, f1, lame, T, pc);
  CHECK(pr.converged);
  for (double r : pr.ratios) CHECK(r <= 0.5);
  const Trajectory ev = evolve(f0, f1, lame, T, pc.march);
  const double d = x1_distance(pr.trajectory, ev);
  MESSAGE("Picard vs evolve X1 distance " << d << " after " << pr.distances.size() << " iterations");
  CHECK(d <= 5.0 * pc.tol);
  CHECK(std::abs(x1_norm(pr.trajectory) - x1_norm(ev)) <= 5.0 * pc.tol);

  // without stored states there is nothing to measure, which must not read as 0
  EvolveConfig bare = pc.march;
  bare.store_states = false;
  const Trajectory nb = evolve(f0, f1, lame, T, bare);
  CHECK_THROWS_AS(x1_distance(nb, ev), Error);
  CHECK_THROWS_AS(x1_distance(ev, nb), Error);

  // zero tensor: the first iterate is already the fixed point
  const PicardResult lin = picard_iterate(f0, f1, lame, ContractionTensor::zero(), pc);
  CHECK(lin.converged);
  CHECK(lin.distances.size() == 1);
  CHECK(lin.distances[0] == 0.0);

  // large data does not contract
  const VectorField big0 = gaussian_data(g, 40.0, 1.2, {1, 0.3, 0});
  pc.march.t_end = 2.0;
  try {
    picard_iterate(big0, f1, lame, T, pc);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.code() == Errc::no_contraction || e.code() == Errc::divergence));
  }
}

TEST_CASE("X1 functional") {
  const Grid3 g = make_grid(16, 8.0);
  const VectorField f0 = gaussian_data(g, 1.0, 1.0, {1, 0, 0});
  const VectorField z(g, Space::physical);
  const NormRecord r = state_norms(to_spectral(f0), to_spectral(z), 0.0);
  CHECK(r.grad1 == doctest::Approx(sobolev_seminorm(to_spectral(f0), 1)));
  CHECK(r.grad3 == doctest::Approx(sobolev_seminorm(to_spectral(f0), 3)));
  CHECK(x1_data_seminorm(f0, z) == doctest::Approx(r.grad1 + r.grad3));
  NormRecord later = r;
  later.t = 3.0;
  CHECK(x1_weighted(later) == doctest::Approx(std::pow(4.0, 1.75) * r.grad3 + std::pow(4.0, 0.75) * r.grad1));
}

TEST_CASE("small data stay bounded in X1 up to t = 50") {
  const Grid3 g = make_grid(32, 16.0);
  const auto lame = LameParams::make(0.0, 1.0, 1.0);
  VectorField f0(g, Space::physical);
  VectorField f1 = gaussian_data(g, 1.0, 1.0, {0, 0, 1});
  f1 *= 1e-3 / x1_data_seminorm(f0, f1);
  EvolveConfig cfg;
  cfg.dt = 0.5;
  cfg.t_end = 50.0;
  cfg.store_states = false;
  const Trajectory tr = evolve(f0, f1, lame, ContractionTensor::standard(), cfg);
  double head = 0.0, all = 0.0;
  for (const auto& r : tr.norms) {
    if (r.t <= 1.0) head = std::max(head, x1_weighted(r));
    all = std::max(all, x1_weighted(r));
  }
  MESSAGE("running X1 " << all << ", initial segment [0, 1] " << head);
  CHECK(tr.norms.back().t == doctest::Approx(50.0));
  CHECK(all <= 2.0 * head);
}
