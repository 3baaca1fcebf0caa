#include "elastowave/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace elastowave {

ContractionTensor ContractionTensor::standard() {
  ContractionTensor t;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) t(k, i, j, k) = 1.0;
  return t;
}

ContractionTensor ContractionTensor::zero() { return {}; }

ContractionTensor ContractionTensor::transposed() {
  ContractionTensor t;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int m = 0; m < 3; ++m) t(k, i, k, m) = 1.0;
  return t;
}

ContractionTensor ContractionTensor::from_id(std::string_view id) {
  if (id == "standard") return standard();
  if (id == "zero") return zero();
  if (id == "transposed") return transposed();
  throw Error(Errc::config, "unknown contraction tensor '" + std::string(id) + "'");
}

bool ContractionTensor::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](double x) { return x == 0.0; });
}

// ---------------------------------------------------------------- F(u)

namespace {

// Wave numbers along one axis. First-order (odd) factors vanish on the
// Nyquist plane; squares keep it.
struct AxisXi {
  std::vector<double> odd, full;
};

AxisXi axis_xi(const Grid3& g) {
  AxisXi a;
  a.odd.resize(size_t(g.n));
  a.full.resize(size_t(g.n));
  for (int i = 0; i < g.n; ++i) {
    const int k = g.wavenumber(i);
    a.full[size_t(i)] = g.dk() * k;
    a.odd[size_t(i)] = (k == -g.n / 2) ? 0.0 : g.dk() * k;
  }
  return a;
}

// spectrum of d_i u (j < 0) or d_i d_j u
Eigen::ArrayXcd derivative_spectrum(const Grid3& g, const AxisXi& ax, const Eigen::ArrayXcd& u, int i, int j) {
  Eigen::ArrayXcd out(g.size());
  const int n = g.n;
  const auto& xi_i = (j == i) ? ax.full : ax.odd;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy) {
      const Index row = g.index(0, iy, iz);
      const int id[3] = {0, iy, iz};
      // factor from the y/z axes (constant along the row)
      double fac = 1.0;
      bool along_x = false;
      auto take = [&](int axis, const std::vector<double>& xs) {
        if (axis == 0) {
          along_x = true;
        } else {
          fac *= xs[size_t(id[axis])];
        }
      };
      take(i, xi_i);
      if (j >= 0) take(j, j == i ? ax.full : ax.odd);
      // first derivatives multiply by i fac, second ones by -fac
      const bool imag = j < 0;
      const double f0 = imag ? fac : -fac;
      const cplx* src = u.data() + row;
      cplx* dst = out.data() + row;
      auto put = [&](int ix, double f) {
        const cplx z = src[ix];
        dst[ix] = imag ? cplx(-f * z.imag(), f * z.real()) : cplx(f * z.real(), f * z.imag());
      };
      if (!along_x) {
        for (int ix = 0; ix < n; ++ix) put(ix, f0);
      } else if (i == 0 && j == 0) {
        for (int ix = 0; ix < n; ++ix) put(ix, f0 * ax.full[size_t(ix)] * ax.full[size_t(ix)]);
      } else {
        for (int ix = 0; ix < n; ++ix) put(ix, f0 * ax.odd[size_t(ix)]);
      }
    }
  return out;
}

VectorField nonlinearity_hat(const VectorField& u_in, const ContractionTensor& tensor, DealiasRule rule) {
  const Grid3& g = u_in.grid();
  VectorField F(g, Space::spectral);
  if (tensor.is_zero()) return F;
  VectorField u = u_in;
  if (rule == DealiasRule::two_thirds) dealias(u);

  bool needA[3][3] = {}, needH[3][3][3] = {};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int m = 0; m < 3; ++m)
          if (tensor(k, i, j, m) != 0.0) {
            needA[i][j] = true;
            needH[std::min(i, j)][std::max(i, j)][m] = true;
          }

  // physical derivative fields, transformed two at a time
  struct Job {
    int i, j, m;  // j < 0: first derivative d_i u_m
    Eigen::ArrayXd* out;
  };
  std::vector<Eigen::ArrayXd> A(9), H(27);
  std::vector<Job> jobs;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (needA[i][j]) jobs.push_back({i, -1, j, &A[size_t(3 * i + j)]});
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      for (int m = 0; m < 3; ++m)
        if (needH[i][j][m]) jobs.push_back({i, j, m, &H[size_t(9 * i + 3 * j + m)]});
  const AxisXi ax = axis_xi(g);
  Eigen::ArrayXd scratch;
  for (size_t p = 0; p < jobs.size(); p += 2) {
    const Job& a = jobs[p];
    const Eigen::ArrayXcd sa = derivative_spectrum(g, ax, u[a.m], a.i, a.j);
    if (p + 1 < jobs.size()) {
      const Job& b = jobs[p + 1];
      to_physical_pair(g, sa, derivative_spectrum(g, ax, u[b.m], b.i, b.j), *a.out, *b.out);
    } else {
      to_physical_pair(g, sa, Eigen::ArrayXcd::Zero(g.size()), *a.out, scratch);
    }
  }

  std::array<Eigen::ArrayXd, 3> Fp;
  for (int k = 0; k < 3; ++k) {
    Fp[size_t(k)] = Eigen::ArrayXd::Zero(g.size());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int m = 0; m < 3; ++m) {
          const double c = tensor(k, i, j, m);
          if (c == 0.0) continue;
          const auto& h = H[size_t(9 * std::min(i, j) + 3 * std::max(i, j) + m)];
          Fp[size_t(k)] += c * A[size_t(3 * i + j)] * h;
        }
  }
  Eigen::ArrayXcd dummy;
  to_spectral_pair(g, Fp[0], Fp[1], F[0], F[1]);
  to_spectral_pair(g, Fp[2], Eigen::ArrayXd::Zero(g.size()), F[2], dummy);
  if (rule == DealiasRule::two_thirds) dealias(F);
  return F;
}

}  // namespace

VectorField nonlinearity(const VectorField& u, const ContractionTensor& tensor, DealiasRule rule) {
  if (u.components() != 3) throw Error(Errc::shape, "nonlinearity needs a 3-vector field");
  if (u.space() == Space::spectral) return nonlinearity_hat(u, tensor, rule);
  return to_physical(nonlinearity_hat(to_spectral(u), tensor, rule));
}

// ---------------------------------------------------------------- norms

double x1_weighted(const NormRecord& r) {
  const double s = 1.0 + r.t;
  return std::pow(s, 1.75) * r.grad3 + std::pow(s, 0.75) * (r.grad1 + r.vel) + std::pow(s, 1.25) * r.grad_vel;
}

NormRecord state_norms(const VectorField& u_hat, const VectorField& v_hat, double t) {
  const Grid3& g = u_hat.grid();
  double g1 = 0.0, g3 = 0.0, v0 = 0.0, v1 = 0.0;
  const int n = g.n;
  const double dk2 = g.dk() * g.dk();
  Index idx = 0;
  for (int iz = 0; iz < n; ++iz) {
    const int kz = g.wavenumber(iz);
    for (int iy = 0; iy < n; ++iy) {
      const int ky = g.wavenumber(iy);
      for (int ix = 0; ix < n; ++ix, ++idx) {
        const int kx = g.wavenumber(ix);
        const double r2 = dk2 * double(kx * kx + ky * ky + kz * kz);
        const double uu = std::norm(u_hat[0](idx)) + std::norm(u_hat[1](idx)) + std::norm(u_hat[2](idx));
        const double vv = std::norm(v_hat[0](idx)) + std::norm(v_hat[1](idx)) + std::norm(v_hat[2](idx));
        g1 += r2 * uu;
        g3 += r2 * r2 * r2 * uu;
        v0 += vv;
        v1 += r2 * vv;
      }
    }
  }
  const double w = g.mode_volume();
  return {t, std::sqrt(g1 * w), std::sqrt(g3 * w), std::sqrt(v0 * w), std::sqrt(v1 * w)};
}

double x1_norm(const Trajectory& traj) {
  double s = 0.0;
  for (const auto& r : traj.norms) s = std::max(s, x1_weighted(r));
  return s;
}

double x1_data_seminorm(const VectorField& f0, const VectorField& f1) {
  return x1_weighted(state_norms(to_spectral(f0), to_spectral(f1), 0.0));
}

ElasticState Trajectory::state(size_t i) const {
  if (i >= times.size() || i >= u.size()) throw Error(Errc::range, "no stored state with that index");
  return {u[i].expand(grid), v[i].expand(grid), times[i]};
}

double x1_distance(const Trajectory& a, const Trajectory& b) {
  if (!a.grid.same_as(b.grid)) throw Error(Errc::shape, "trajectories live on different grids");
  double d = 0.0;
  size_t j = 0, matched = 0;
  for (size_t i = 0; i < a.times.size() && i < a.u.size(); ++i) {
    while (j < b.times.size() && b.times[j] < a.times[i] - 1e-9 * (1.0 + a.times[i])) ++j;
    if (j >= b.times.size() || j >= b.u.size()) break;
    if (std::abs(b.times[j] - a.times[i]) > 1e-9 * (1.0 + a.times[i])) continue;
    const ElasticState sa = a.state(i), sb = b.state(j);
    d = std::max(d, x1_weighted(state_norms(sa.u_hat - sb.u_hat, sa.v_hat - sb.v_hat, a.times[i])));
    ++matched;
  }
  // trajectories run without stored states have nothing to compare
  if (matched == 0) throw Error(Errc::insufficient_samples, "no stored states at common times");
  return d;
}

// ---------------------------------------------------------------- time stepping

namespace {

// Propagators for one full step dt, half step h and quarter step h/2, plus
// the instantaneous velocity kick (M1 at lag 0).
struct StepKit {
  Propagator full, half, quarter, kick;
  double dt;

  StepKit(const Grid3& g, const LameParams& lame, double dt_)
      : full(g, lame, dt_), half(g, lame, 0.5 * dt_), quarter(g, lame, 0.25 * dt_), kick(g, lame, 0.0), dt(dt_) {}

  // From (u, v) at t with forcing F0 at t, F1 at t + dt/2, F2 at t + dt:
  // states at t + dt/2 (mid) and t + dt (end).
  void step(const VectorField& u, const VectorField& v, const VectorField& F0, const VectorField& F1,
            const VectorField& F2, ElasticState& mid, ElasticState& end) const {
    const double h = 0.5 * dt;
    end.u_hat = u;
    end.v_hat = v;
    full.advance(end.u_hat, end.v_hat);
    full.add_forced(F0, dt / 6.0, end.u_hat, end.v_hat);
    half.add_forced(F1, 4.0 * dt / 6.0, end.u_hat, end.v_hat);
    kick.add_forced(F2, dt / 6.0, end.u_hat, end.v_hat);

    mid.u_hat = u;
    mid.v_hat = v;
    half.advance(mid.u_hat, mid.v_hat);
    // F at the quarter point from the quadratic through F0, F1, F2
    VectorField Fq = F0;
    Fq *= 3.0 / 8.0;
    Fq.axpy(6.0 / 8.0, F1);
    Fq.axpy(-1.0 / 8.0, F2);
    half.add_forced(F0, h / 6.0, mid.u_hat, mid.v_hat);
    quarter.add_forced(Fq, 4.0 * h / 6.0, mid.u_hat, mid.v_hat);
    kick.add_forced(F1, h / 6.0, mid.u_hat, mid.v_hat);
  }
};

int step_count(const EvolveConfig& cfg) {
  if (!(cfg.dt > 0.0) || !(cfg.t_end >= 0.0)) throw Error(Errc::config, "need dt > 0 and t_end >= 0");
  const double steps = cfg.t_end / cfg.dt;
  const long N = std::lround(steps);
  if (std::abs(steps - double(N)) > 1e-9 * std::max(1.0, steps)) {
    throw Error(Errc::config, "t_end must be a whole number of steps dt");
  }
  if (cfg.store_every < 1) throw Error(Errc::config, "store_every must be >= 1");
  return int(N);
}

int forcing_cutoff(const Grid3& g, DealiasRule rule) {
  return rule == DealiasRule::two_thirds ? (g.n - 1) / 3 : g.n / 2 - 1;
}

class Recorder {
 public:
  Recorder(Trajectory& traj, const EvolveConfig& cfg, double scale)
      : traj_(traj), cfg_(cfg), limit_(cfg.divergence_factor * std::max(scale, 1e-300)) {}

  void node(const ElasticState& s, const VectorField& F) {
    const NormRecord r = state_norms(s.u_hat, s.v_hat, s.time);
    const double w = x1_weighted(r);
    if (!std::isfinite(w) || w > limit_) {
      throw Error(Errc::divergence, "solution norm left the admissible range at t = " + std::to_string(s.time));
    }
    traj_.norms.push_back(r);
    traj_.f_mean.push_back(Eigen::Vector3cd(F[0](0), F[1](0), F[2](0)));
  }

  void store(const ElasticState& s, const VectorField& F, int full_step) {
    if (full_step % cfg_.store_every != 0) return;
    traj_.times.push_back(s.time);
    if (cfg_.store_states) {
      traj_.u.emplace_back(s.u_hat, cfg_.state_cutoff);
      traj_.v.emplace_back(s.v_hat, cfg_.state_cutoff);
    }
    if (cfg_.store_forcing) traj_.forcing.emplace_back(F, forcing_cutoff(F.grid(), cfg_.dealias));
  }

 private:
  Trajectory& traj_;
  const EvolveConfig& cfg_;
  double limit_;
};

ElasticState initial_state(const VectorField& f0, const VectorField& f1) {
  if (f0.components() != 3 || f1.components() != 3) throw Error(Errc::shape, "initial data must be 3-vector fields");
  ElasticState s{to_spectral(f0), to_spectral(f1), 0.0};
  require_compatible(s.u_hat, s.v_hat);
  return s;
}

}  // namespace

Trajectory evolve(const VectorField& f0, const VectorField& f1, const LameParams& lame,
                  const ContractionTensor& tensor, const EvolveConfig& cfg) {
  const int N = step_count(cfg);
  ElasticState s = initial_state(f0, f1);
  const Grid3 g = s.u_hat.grid();
  Trajectory traj;
  traj.grid = g;
  traj.dt = cfg.dt;
  Recorder rec(traj, cfg, x1_data_seminorm(s.u_hat, s.v_hat));
  const StepKit kit(g, lame, cfg.dt);
  auto F = [&](const ElasticState& st) { return nonlinearity_hat(st.u_hat, tensor, cfg.dealias); };

  VectorField F0 = F(s);
  rec.node(s, F0);
  rec.store(s, F0, 0);
  std::optional<VectorField> Fm1, Fm2;  // F at the previous two nodes
  ElasticState mid, end;
  for (int m = 0; m < N; ++m) {
    const double t = m * cfg.dt;
    VectorField F1, F2;
    int passes = 1;
    if (Fm1 && Fm2) {
      // quadratic extrapolation from nodes -2, -1, 0 (in half steps)
      F1 = 3.0 * F0 - 3.0 * *Fm1 + *Fm2;
      F2 = 6.0 * F0 - 8.0 * *Fm1 + 3.0 * *Fm2;
    } else {
      F1 = F0;
      F2 = F0;
      passes = std::max(1, cfg.first_step_passes);
    }
    for (int p = 0; p < passes; ++p) {
      kit.step(s.u_hat, s.v_hat, F0, F1, F2, mid, end);
      mid.time = t + 0.5 * cfg.dt;
      end.time = t + cfg.dt;
      F1 = F(mid);
      F2 = F(end);
    }
    kit.step(s.u_hat, s.v_hat, F0, F1, F2, mid, end);
    mid.time = t + 0.5 * cfg.dt;
    end.time = t + cfg.dt;
    F2 = F(end);
    rec.node(mid, F1);
    rec.node(end, F2);
    rec.store(end, F2, m + 1);
    Fm2 = std::move(F0);
    Fm1 = std::move(F1);
    F0 = std::move(F2);
    s = std::move(end);
  }
  traj.final_state = s;
  return traj;
}

PicardResult picard_iterate(const VectorField& f0, const VectorField& f1, const LameParams& lame,
                            const ContractionTensor& tensor, const PicardConfig& cfg) {
  const int N = step_count(cfg.march);
  if (!(cfg.tol > 0.0) || cfg.max_iter < 1) throw Error(Errc::config, "Picard needs tol > 0 and max_iter >= 1");
  const ElasticState s0 = initial_state(f0, f1);
  const Grid3 g = s0.u_hat.grid();
  const StepKit kit(g, lame, cfg.march.dt);
  const int K = forcing_cutoff(g, cfg.march.dealias);
  const size_t nodes = size_t(2 * N + 1);
  const double scale = x1_data_seminorm(s0.u_hat, s0.v_hat);
  auto F = [&](const VectorField& u) { return nonlinearity_hat(u, tensor, cfg.march.dealias); };
  const VectorField zero(g, Space::spectral);

  // previous two forcing series; iterate 0 is the linear solution (F = 0)
  std::vector<CompactSpectrum> A, B;  // F^{n-1}, F^{n-2}
  bool have_A = false, have_B = false;
  PicardResult res;
  int above_one = 0;
  for (int it = 0; it <= cfg.max_iter; ++it) {
    Trajectory traj;
    traj.grid = g;
    traj.dt = cfg.march.dt;
    Recorder rec(traj, cfg.march, scale);
    std::vector<CompactSpectrum> Fn(nodes);
    auto getA = [&](size_t j) { return have_A ? A[j].expand(g) : zero; };
    auto getB = [&](size_t j) { return have_B ? B[j].expand(g) : zero; };

    ElasticState s = s0;
    ElasticState d{zero, zero, 0.0};  // iterate difference
    double dist = 0.0;
    VectorField Fs = F(s.u_hat);
    Fn[0] = CompactSpectrum(Fs, K);
    rec.node(s, Fs);
    rec.store(s, Fs, 0);
    VectorField a0 = getA(0), b0 = getB(0);
    ElasticState mid, end, dmid, dend;
    for (int m = 0; m < N; ++m) {
      const double t = m * cfg.march.dt;
      const size_t j = size_t(2 * m);
      VectorField a1 = getA(j + 1), a2 = getA(j + 2);
      kit.step(s.u_hat, s.v_hat, a0, a1, a2, mid, end);
      mid.time = t + 0.5 * cfg.march.dt;
      end.time = t + cfg.march.dt;
      if (it > 0) {
        VectorField b1 = getB(j + 1), b2 = getB(j + 2);
        kit.step(d.u_hat, d.v_hat, a0 - b0, a1 - b1, a2 - b2, dmid, dend);
        dmid.time = mid.time;
        dend.time = end.time;
        dist = std::max({dist, x1_weighted(state_norms(dmid.u_hat, dmid.v_hat, dmid.time)),
                         x1_weighted(state_norms(dend.u_hat, dend.v_hat, dend.time))});
        d = std::move(dend);
        b0 = std::move(b2);
      }
      const VectorField Fm = F(mid.u_hat);
      Fs = F(end.u_hat);
      Fn[j + 1] = CompactSpectrum(Fm, K);
      Fn[j + 2] = CompactSpectrum(Fs, K);
      rec.node(mid, Fm);
      rec.node(end, Fs);
      rec.store(end, Fs, m + 1);
      s = std::move(end);
      a0 = std::move(a2);
    }
    traj.final_state = s;
    res.trajectory = std::move(traj);
    B = std::move(A);
    have_B = have_A;
    A = std::move(Fn);
    have_A = true;
    if (it == 0) continue;
    res.distances.push_back(dist);
    if (res.distances.size() >= 2) {
      const double prev = res.distances[res.distances.size() - 2];
      const double ratio = prev > 0.0 ? dist / prev : 0.0;
      res.ratios.push_back(ratio);
      above_one = ratio >= 1.0 ? above_one + 1 : 0;
      if (above_one >= 3) throw Error(Errc::no_contraction, "Picard distances grew three times in a row");
    }
    if (dist < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace elastowave
