#pragma once

// Periodic 3-D lattice, the unitary-normalised discrete Fourier transform and
// Fourier multipliers acting on vector fields.
//
// Transform convention (continuum-consistent):
//   g_hat(xi) = (2 pi)^{-3/2} h^3 sum_x g(x) exp(-i xi.x),   x_j = -L/2 + j h
// so that sum |g|^2 h^3 = sum |g_hat|^2 (2 pi / L)^3 exactly, and g_hat
// approximates the continuum (2 pi)^{-3/2} integral transform.

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "elastowave/error.hpp"
#include "elastowave/kernels.hpp"

namespace elastowave {

namespace detail {
struct FftPlans;
}

using Index = Eigen::Index;
using cplx = std::complex<double>;

struct Grid3 {
  int n = 0;
  double box_length = 0.0;
  std::shared_ptr<const detail::FftPlans> plans;

  double spacing() const { return box_length / n; }
  double dk() const { return 2.0 * M_PI / box_length; }
  Index size() const { return Index(n) * n * n; }
  double cell_volume() const { double h = spacing(); return h * h * h; }
  double mode_volume() const { double d = dk(); return d * d * d; }

  // signed wavenumber of a storage index along one axis
  int wavenumber(int i) const { return i < n / 2 ? i : i - n; }
  int storage(int k) const { return k >= 0 ? k : k + n; }
  Index index(int ix, int iy, int iz) const { return ix + Index(n) * (iy + Index(n) * iz); }
  Eigen::Vector3i wavevector_index(Index idx) const;
  Eigen::Vector3d xi(Index idx) const { return dk() * wavevector_index(idx).cast<double>(); }
  // |xi|^2 from the integer lattice, exact under axis permutations
  double xi_norm2(Index idx) const {
    const Eigen::Vector3i k = wavevector_index(idx);
    return dk() * dk() * double(k.squaredNorm());
  }
  double coordinate(int i) const { return -0.5 * box_length + i * spacing(); }
  Eigen::Vector3d position(Index idx) const;

  bool same_as(const Grid3& o) const { return n == o.n && box_length == o.box_length; }
};

/// Throws invalid-grid unless n is even, n >= 8 and box_length > 0.
Grid3 make_grid(int n, double box_length);

enum class Space { physical, spectral };

/// Vector field on a grid. Both spaces use complex storage; physical values
/// are kept real (imaginary parts are zero).
class VectorField {
 public:
  VectorField() = default;
  VectorField(Grid3 grid, Space space, int components = 3);

  template <class F>
  static VectorField sample(const Grid3& grid, F&& f) {
    VectorField out(grid, Space::physical, 3);
    for (Index idx = 0; idx < grid.size(); ++idx) {
      const Eigen::Vector3d v = f(grid.position(idx));
      for (int c = 0; c < 3; ++c) out.comp_[c](idx) = v(c);
    }
    return out;
  }

  const Grid3& grid() const { return grid_; }
  Space space() const { return space_; }
  int components() const { return static_cast<int>(comp_.size()); }
  Eigen::ArrayXcd& operator[](int c) { return comp_[static_cast<size_t>(c)]; }
  const Eigen::ArrayXcd& operator[](int c) const { return comp_[static_cast<size_t>(c)]; }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);
  VectorField& axpy(cplx a, const VectorField& x);  // this += a x
  void set_zero();
  bool empty() const { return comp_.empty(); }

 private:
  Grid3 grid_;
  Space space_ = Space::physical;
  std::vector<Eigen::ArrayXcd> comp_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

/// Throws shape unless both fields share grid, space and component count.
void require_compatible(const VectorField& a, const VectorField& b);

/// Toggles the space tag. The inverse direction returns real values.
VectorField transform(const VectorField& field);
VectorField to_spectral(const VectorField& field);
VectorField to_physical(const VectorField& field);

/// Two real fields through one complex transform. The inverse assumes both
/// spectra are Hermitian; the forward splits the result by symmetry.
void to_physical_pair(const Grid3& g, const Eigen::ArrayXcd& a_hat, const Eigen::ArrayXcd& b_hat,
                      Eigen::ArrayXd& a, Eigen::ArrayXd& b);
void to_spectral_pair(const Grid3& g, const Eigen::ArrayXd& a, const Eigen::ArrayXd& b, Eigen::ArrayXcd& a_hat,
                      Eigen::ArrayXcd& b_hat);

// ---------------------------------------------------------------- cutoffs

struct CutoffSpec {
  double c0 = 1.0;
  double c1 = 4.0;

  static CutoffSpec make(double c0, double c1);  // throws domain unless 0 < c0 < c1
  double low(double r) const;
  double high(double r) const;
  double mid(double r) const { return 1.0 - low(r) - high(r); }
};

/// C-infinity step: 1 for s <= 0, 0 for s >= 1.
double smooth_step(double s);

// ---------------------------------------------------------------- symbols

enum class SymbolKind {
  identity,
  derivative,
  riesz,
  chi_low,
  chi_mid,
  chi_high,
  kernel,
  inverse_gradient,
  heat,
  custom,
};

struct Symbol {
  SymbolKind kind = SymbolKind::identity;
  std::array<int, 3> alpha{0, 0, 0};
  int axis = 0;
  CutoffSpec cutoff;
  DampingParams damping;
  Kernel kernel = Kernel::K0;
  int t_derivative = 0;
  double t = 0.0;
  double nu = 1.0;
  std::function<cplx(const Eigen::Vector3d&)> fn;
  bool odd = false;  // custom symbols odd in xi lose their Nyquist plane

  static Symbol identity() { return {}; }
  static Symbol derivative(int ax, int ay, int az);
  static Symbol riesz(int axis);
  static Symbol chi_low(CutoffSpec c);
  static Symbol chi_mid(CutoffSpec c);
  static Symbol chi_high(CutoffSpec c);
  static Symbol scalar_kernel(double t, DampingParams p, Kernel which, int l = 0);
  static Symbol inverse_gradient();
  static Symbol heat(double t, double nu);
  static Symbol custom(std::function<cplx(const Eigen::Vector3d&)> fn, bool odd = false);

  cplx operator()(const Eigen::Vector3d& xi, const Eigen::Vector3i& k, int n) const;
};

/// Builds a parameter-free symbol from its identifier ("identity", "riesz:2",
/// "deriv:1,0,0", "inverse-gradient"). Unknown ids raise unsupported-symbol.
Symbol symbol_from_id(std::string_view id);

struct SymbolFlags {
  bool mean_not_zero = false;
};

/// Pointwise multiplication of every component by the symbol; the xi = 0
/// value of Riesz and |grad|^{-1} is 0.
VectorField apply_symbol(const VectorField& field, const Symbol& symbol, SymbolFlags* flags = nullptr);

// ---------------------------------------------------------------- norms

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Riemann-sum L^p norm (pointwise Euclidean length) for p < inf; the max
/// absolute component value for p = inf.
double lp_norm(const VectorField& field, double p);

/// sqrt(sum |g_hat|^2 (2 pi / L)^3).
double spectral_l2_norm(const VectorField& field);

/// ||grad^alpha u||_2 through Plancherel, alpha >= 0.
double sobolev_seminorm(const VectorField& field, int alpha);

/// Keeps only modes with 3 |k_i| < n on every axis.
void dealias(VectorField& field);
bool dealias_keeps(const Eigen::Vector3i& k, int n);

/// Hermitian-symmetry defect max |g(-k) - conj g(k)| / max |g|.
double hermitian_defect(const VectorField& field);

// ---------------------------------------------------------------- storage

/// Spectrum restricted to |k_i| <= K with k_z >= 0; the rest is implied by
/// Hermitian symmetry (and zero outside the cube).
class CompactSpectrum {
 public:
  CompactSpectrum() = default;
  CompactSpectrum(const VectorField& spectral, int K);

  VectorField expand(const Grid3& grid) const;
  int cutoff() const { return K_; }
  int components() const { return static_cast<int>(data_.size()); }
  std::size_t bytes() const;

 private:
  int n_ = 0;
  int K_ = 0;
  std::vector<Eigen::ArrayXcd> data_;
};

/// Binary container: magic, n, L, space tag, component count, time, then
/// little-endian doubles component-major, x fastest (re/im pairs if spectral).
void write_snapshot(const std::string& path, const VectorField& field, double time = 0.0);
VectorField read_snapshot(const std::string& path, double* time = nullptr);

}  // namespace elastowave
