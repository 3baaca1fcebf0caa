#pragma once

// Quadratic nonlinearity F_k = c_kijm (d_i u_j)(d_i d_j u_m), a
// predictor-corrector time stepper built on the exact linear propagator, and
// the Picard iteration of the Duhamel formulation.

#include <array>
#include <string_view>
#include <vector>

#include "elastowave/elastic.hpp"

namespace elastowave {

struct ContractionTensor {
  std::array<double, 81> c{};

  double& operator()(int k, int i, int j, int m) { return c[size_t(((k * 3 + i) * 3 + j) * 3 + m)]; }
  double operator()(int k, int i, int j, int m) const { return c[size_t(((k * 3 + i) * 3 + j) * 3 + m)]; }

  /// c_kijm = delta_km: F = sum_ij (d_i u_j) d_i d_j u.
  static ContractionTensor standard();
  static ContractionTensor zero();
  /// c_kijm = delta_kj: F_k = sum_im (d_i u_k) d_i d_k u_m.
  static ContractionTensor transposed();
  /// "standard", "zero" or "transposed"; anything else raises config.
  static ContractionTensor from_id(std::string_view id);
  bool is_zero() const;
};

enum class DealiasRule { none, two_thirds };

/// F(u) on the grid. Input may be physical or spectral; the output is in the
/// same space. With two_thirds the input and output keep only 3|k_i| < n.
VectorField nonlinearity(const VectorField& u, const ContractionTensor& tensor,
                         DealiasRule rule = DealiasRule::two_thirds);

struct NormRecord {
  double t = 0.0;
  double grad1 = 0.0;     // ||grad u||
  double grad3 = 0.0;     // ||grad^3 u||
  double vel = 0.0;       // ||u_t||
  double grad_vel = 0.0;  // ||grad u_t||
};

/// Weighted X1 integrand at the record's time.
double x1_weighted(const NormRecord& r);
NormRecord state_norms(const VectorField& u_hat, const VectorField& v_hat, double t);

struct EvolveConfig {
  double dt = 0.1;
  double t_end = 1.0;
  DealiasRule dealias = DealiasRule::two_thirds;
  bool store_states = true;
  bool store_forcing = false;
  int store_every = 1;     // in full steps
  int state_cutoff = -1;   // compact cutoff of stored states (-1: n/2 - 1)
  int first_step_passes = 3;
  double divergence_factor = 1e6;
};

struct Trajectory {
  Grid3 grid;
  double dt = 0.0;
  std::vector<double> times;             // stored state times (full steps)
  std::vector<CompactSpectrum> u, v;     // stored states
  std::vector<CompactSpectrum> forcing;  // F at the stored times (optional)
  std::vector<NormRecord> norms;         // every half-step node
  std::vector<Eigen::Vector3cd> f_mean;  // F_hat(0) at every half-step node
  ElasticState final_state;

  ElasticState state(size_t i) const;
};

/// Spectral or physical initial data; the nonlinearity is sampled on a
/// half-step grid and integrated by the Duhamel-Simpson step.
Trajectory evolve(const VectorField& f0, const VectorField& f1, const LameParams& lame,
                  const ContractionTensor& tensor, const EvolveConfig& cfg);

struct PicardConfig {
  EvolveConfig march;
  double tol = 1e-10;  // stop when the X1 distance of successive iterates drops below
  int max_iter = 30;
};

struct PicardResult {
  Trajectory trajectory;          // last iterate
  std::vector<double> distances;  // X1 distance between iterates n and n-1
  std::vector<double> ratios;     // distances[n] / distances[n-1]
  bool converged = false;
};

/// Raises no-contraction after three consecutive ratios >= 1.
PicardResult picard_iterate(const VectorField& f0, const VectorField& f1, const LameParams& lame,
                            const ContractionTensor& tensor, const PicardConfig& cfg);

/// sup over recorded nodes of the weighted integrand.
double x1_norm(const Trajectory& traj);
/// Weighted integrand at t = 0 of the data (f0, f1).
double x1_data_seminorm(const VectorField& f0, const VectorField& f1);
/// sup over common stored times of the X1 integrand of the difference.
/// Throws insufficient-samples when no stored times coincide.
double x1_distance(const Trajectory& a, const Trajectory& b);

}  // namespace elastowave
