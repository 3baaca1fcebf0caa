#pragma once

// Numerical audit of the inequality toolkit: interpolation ratios on grid
// fields, L^1 norms of heat-type multipliers, exponential decay of the middle
// and high frequency parts, and pointwise symbol bounds near xi = 0.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "elastowave/asymptotics.hpp"
#include "elastowave/elastic.hpp"
#include "elastowave/grid.hpp"

namespace elastowave {

// ---------------------------------------------------------------- inequalities

enum class Inequality { GN_INF, GN_L1, GRAD_2P, SOB_6, LOW_HIGH_SPLIT, RIESZ, HEAT_L1 };

Inequality inequality_from_id(std::string_view id);
std::string to_string(Inequality id);

/// Kernel of the heat-multiplier family
///   d_t^ell grad^alpha R_a R_b F^{-1}[exp(-nu t |xi|^2 / 2) chi_L].
/// The box is L = box_factor * max(sqrt(nu t), 2 / c0), so the sampled
/// kernel is the same picture in scaled variables once the heat factor
/// dominates the cutoff.
struct HeatL1Spec {
  double t = 1.0;
  double nu = 1.0;
  int alpha = 1;
  int ell = 0;
  int a = 0, b = 0;
  CutoffSpec cutoff;
  int n = 128;
  double box_factor = 20.0;
};

double heat_l1_norm(const HeatL1Spec& spec);

/// Fitted log-log slope of heat_l1_norm over the given times, against the
/// expected -(alpha / 2 + ell).
DecayReport heat_l1_decay(const HeatL1Spec& base, const std::vector<double>& times);

struct InequalityOptions {
  double p = 2.0;     // GRAD_2P exponent, RIESZ exponent
  int riesz_axis = 0;
  HeatL1Spec heat;    // HEAT_L1 only
};

/// Left side over right side without the constant. HEAT_L1 ignores the
/// field and returns ||kernel||_1 (1 + t)^{alpha/2 + ell}.
/// Throws degenerate_input when the right side vanishes.
double inequality_check(Inequality id, const VectorField& g, const InequalityOptions& opt = {});

// pointwise |grad^order g| over components and ordered index tuples
Eigen::ArrayXd derivative_magnitude(const VectorField& g, int order);

// ---------------------------------------------------------------- mid / high decay

enum class FreqPart { LOW, MID, HIGH };

FreqPart freq_part_from_id(std::string_view id);
std::string to_string(FreqPart part);

/// ||chi_part K(t) g||_2 with the matrix kernel of the elastic system.
double part_norm(FreqPart part, Kernel which, const VectorField& g, const LameParams& lame, double t);

/// Smooth radial spectral shell supported in r_lo < |xi| < r_hi, times e.
VectorField band_field(const Grid3& grid, double r_lo, double r_hi, const Eigen::Vector3d& e);

struct ExpFitReport {
  FreqPart part = FreqPart::MID;
  Kernel which = Kernel::K0;
  std::vector<double> times, values;
  double c_fit = 0.0;
  double c_ci = 0.0;        // 95% half-width
  double intercept = 0.0;
  double residual = 0.0;    // max |log y - fit| / log-range
  double reference = 0.0;   // ||g||_2 for K0, ||grad g||_2 for K1
  double prefactor = 0.0;   // sup y e^{c t} / reference
};

struct DecayFitOptions {
  double t0 = 0.1;
  double t1 = 30.0;
  int samples = 60;
};

/// Linear fit of log ||chi_part K(t) g||_2 in t. Throws window outside
/// [0.1, 30], degenerate_input for a vanishing series, fit for a series that
/// grows or a nonpositive rate.
ExpFitReport decay_fit(FreqPart part, Kernel which, const VectorField& g, const LameParams& lame,
                       const DecayFitOptions& opt = {});

// ---------------------------------------------------------------- symbol bounds

enum class BoundId { B331, B332, B333, B334, B335, B336, B337 };

BoundId bound_from_id(std::string_view id);
std::string to_string(BoundId id);

struct BoundTerms {
  double lhs = 0.0;
  double majorant = 0.0;
};

/// Left side and majorant (without C) of a pointwise bound at (t, r) for one
/// wave family. xi-derivatives of the radial symbols come from Jet2:
/// |grad f| = |f'|, |Hess f| = sqrt(f''^2 + 2 (f'/r)^2).
BoundTerms bound_terms(BoundId id, double t, double r, const DampingParams& p);

/// First derivative by a central difference with step rel_step * r.
double central_difference(const std::function<double(double)>& f, double r, double rel_step = 1e-5);

struct ScanOptions {
  int nt = 40;
  int nr = 40;
  std::uint64_t seed = 1;
  bool jitter = true;  // interior nodes move within their log cell
};

struct BoundScanReport {
  std::string bound_id;
  double t_lo = 0, t_hi = 0, r_lo = 0, r_hi = 0;
  double max_ratio = 0.0;
  double arg_t = 0.0, arg_r = 0.0;
  long samples = 0;
  long excluded = 0;  // points where the majorant vanishes
  std::uint64_t seed = 0;
  int nt = 0, nr = 0;
};

/// Sup of lhs / majorant over a (t, r) box for both wave families. The r box
/// must lie in (0, c0], the support of chi_L; t_lo = 0 switches the t axis to
/// uniform spacing.
BoundScanReport symbol_bound_scan(BoundId id, const LameParams& lame, std::pair<double, double> t_range,
                                  std::pair<double, double> r_range, const ScanOptions& opt = {});

struct ScanStability {
  BoundScanReport coarse, fine;
  double variation = 0.0;  // max / min of the two sup ratios
  bool stable = false;     // finite and variation < 2
};

/// Runs the scan at the given density and at twice the density per axis.
ScanStability symbol_bound_stability(BoundId id, const LameParams& lame, std::pair<double, double> t_range,
                                     std::pair<double, double> r_range, const ScanOptions& opt = {});

}  // namespace elastowave
