#include "elastowave/grid.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fftw3.h>

namespace elastowave {

namespace detail {

struct FftPlans {
  int n = 0;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit FftPlans(int n_) : n(n_) {
    const std::size_t total = std::size_t(n) * n * n;
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_FORWARD, flags);
    backward = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
  }
  ~FftPlans() {
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void run(bool fwd, Eigen::ArrayXcd& a) const {
    auto* p = reinterpret_cast<fftw_complex*>(a.data());
    fftw_execute_dft(fwd ? forward : backward, p, p);
  }
};

}  // namespace detail

Eigen::Vector3i Grid3::wavevector_index(Index idx) const {
  const int ix = int(idx % n);
  const int iy = int((idx / n) % n);
  const int iz = int(idx / (Index(n) * n));
  return {wavenumber(ix), wavenumber(iy), wavenumber(iz)};
}

Eigen::Vector3d Grid3::position(Index idx) const {
  const int ix = int(idx % n);
  const int iy = int((idx / n) % n);
  const int iz = int(idx / (Index(n) * n));
  return {coordinate(ix), coordinate(iy), coordinate(iz)};
}

Grid3 make_grid(int n, double box_length) {
  if (n < 8 || n % 2 != 0) throw Error(Errc::invalid_grid, "n must be even and at least 8, got " + std::to_string(n));
  if (!(box_length > 0.0) || !std::isfinite(box_length)) throw Error(Errc::invalid_grid, "box length must be positive");
  Grid3 g;
  g.n = n;
  g.box_length = box_length;
  g.plans = std::make_shared<const detail::FftPlans>(n);
  return g;
}

// ---------------------------------------------------------------- fields

VectorField::VectorField(Grid3 grid, Space space, int components)
    : grid_(std::move(grid)), space_(space) {
  if (components < 1) throw Error(Errc::shape, "a field needs at least one component");
  comp_.assign(static_cast<size_t>(components), Eigen::ArrayXcd::Zero(grid_.size()));
}

void require_compatible(const VectorField& a, const VectorField& b) {
  if (!a.grid().same_as(b.grid()) || a.space() != b.space() || a.components() != b.components()) {
    throw Error(Errc::shape, "fields differ in grid, space or component count");
  }
}

VectorField& VectorField::operator+=(const VectorField& o) {
  require_compatible(*this, o);
  for (size_t c = 0; c < comp_.size(); ++c) comp_[c] += o.comp_[c];
  return *this;
}
VectorField& VectorField::operator-=(const VectorField& o) {
  require_compatible(*this, o);
  for (size_t c = 0; c < comp_.size(); ++c) comp_[c] -= o.comp_[c];
  return *this;
}
VectorField& VectorField::operator*=(double s) {
  for (auto& a : comp_) a *= s;
  return *this;
}
VectorField& VectorField::axpy(cplx a, const VectorField& x) {
  require_compatible(*this, x);
  for (size_t c = 0; c < comp_.size(); ++c) comp_[c] += a * x.comp_[c];
  return *this;
}
void VectorField::set_zero() {
  for (auto& a : comp_) a.setZero();
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

// ---------------------------------------------------------------- transform

namespace {

// (-1)^(ix+iy+iz): the shift from x_0 = -L/2
void checkerboard(const Grid3& g, Eigen::ArrayXcd& a) {
  const int n = g.n;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy) {
      const Index row = g.index(0, iy, iz);
      for (int ix = 1 - ((iy + iz) & 1); ix < n; ix += 2) a(row + ix) = -a(row + ix);
    }
}

}  // namespace

VectorField transform(const VectorField& field) {
  const Grid3& g = field.grid();
  if (!g.plans) throw Error(Errc::shape, "field has no grid");
  for (int c = 0; c < field.components(); ++c) {
    if (field[c].size() != g.size()) throw Error(Errc::shape, "component size does not match grid");
  }
  const bool fwd = field.space() == Space::physical;
  VectorField out(g, fwd ? Space::spectral : Space::physical, field.components());
  const double scale_fwd = g.cell_volume() * std::pow(2.0 * M_PI, -1.5);
  const double scale_bwd = g.mode_volume() * std::pow(2.0 * M_PI, -1.5);
  for (int c = 0; c < field.components(); ++c) {
    Eigen::ArrayXcd a = field[c];
    if (fwd) {
      g.plans->run(true, a);
      checkerboard(g, a);
      a *= scale_fwd;
    } else {
      checkerboard(g, a);
      g.plans->run(false, a);
      a = a.real().cast<cplx>() * scale_bwd;
    }
    out[c] = std::move(a);
  }
  return out;
}

VectorField to_spectral(const VectorField& field) {
  return field.space() == Space::spectral ? field : transform(field);
}
VectorField to_physical(const VectorField& field) {
  return field.space() == Space::physical ? field : transform(field);
}

void to_physical_pair(const Grid3& g, const Eigen::ArrayXcd& a_hat, const Eigen::ArrayXcd& b_hat,
                      Eigen::ArrayXd& a, Eigen::ArrayXd& b) {
  if (a_hat.size() != g.size() || b_hat.size() != g.size()) throw Error(Errc::shape, "pair size does not match grid");
  Eigen::ArrayXcd z = a_hat + cplx(0.0, 1.0) * b_hat;
  checkerboard(g, z);
  g.plans->run(false, z);
  const double s = g.mode_volume() * std::pow(2.0 * M_PI, -1.5);
  a = z.real() * s;
  b = z.imag() * s;
}

void to_spectral_pair(const Grid3& g, const Eigen::ArrayXd& a, const Eigen::ArrayXd& b, Eigen::ArrayXcd& a_hat,
                      Eigen::ArrayXcd& b_hat) {
  if (a.size() != g.size() || b.size() != g.size()) throw Error(Errc::shape, "pair size does not match grid");
  Eigen::ArrayXcd z(g.size());
  z.real() = a;
  z.imag() = b;
  g.plans->run(true, z);
  checkerboard(g, z);
  z *= g.cell_volume() * std::pow(2.0 * M_PI, -1.5);
  a_hat.resize(g.size());
  b_hat.resize(g.size());
  const int n = g.n;
  auto mirror = [n](int i) { return i == 0 ? 0 : n - i; };
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const Index idx = g.index(ix, iy, iz);
        const cplx zc = std::conj(z(g.index(mirror(ix), mirror(iy), mirror(iz))));
        a_hat(idx) = 0.5 * (z(idx) + zc);
        b_hat(idx) = cplx(0.0, -0.5) * (z(idx) - zc);
      }
}

// ---------------------------------------------------------------- cutoffs

double smooth_step(double s) {
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / (1.0 - s));
  const double b = std::exp(-1.0 / s);
  return a / (a + b);
}

CutoffSpec CutoffSpec::make(double c0, double c1) {
  if (!(c0 > 0.0) || !(c1 > c0)) throw Error(Errc::domain, "cutoffs need 0 < c0 < c1");
  return {c0, c1};
}

double CutoffSpec::low(double r) const { return smooth_step((r - 0.5 * c0) / (0.5 * c0)); }
double CutoffSpec::high(double r) const { return 1.0 - smooth_step((r - c1) / c1); }

// ---------------------------------------------------------------- symbols

Symbol Symbol::derivative(int ax, int ay, int az) {
  if (ax < 0 || ay < 0 || az < 0) throw Error(Errc::unsupported_symbol, "negative derivative order");
  Symbol s;
  s.kind = SymbolKind::derivative;
  s.alpha = {ax, ay, az};
  return s;
}
Symbol Symbol::riesz(int axis) {
  if (axis < 0 || axis > 2) throw Error(Errc::unsupported_symbol, "Riesz axis must be 0, 1 or 2");
  Symbol s;
  s.kind = SymbolKind::riesz;
  s.axis = axis;
  return s;
}
Symbol Symbol::chi_low(CutoffSpec c) { Symbol s; s.kind = SymbolKind::chi_low; s.cutoff = c; return s; }
Symbol Symbol::chi_mid(CutoffSpec c) { Symbol s; s.kind = SymbolKind::chi_mid; s.cutoff = c; return s; }
Symbol Symbol::chi_high(CutoffSpec c) { Symbol s; s.kind = SymbolKind::chi_high; s.cutoff = c; return s; }
Symbol Symbol::scalar_kernel(double t, DampingParams p, Kernel which, int l) {
  if (l < 0 || l > 2) throw Error(Errc::unsupported_order, "time derivative order must be 0, 1 or 2");
  Symbol s;
  s.kind = SymbolKind::kernel;
  s.t = t;
  s.damping = p;
  s.kernel = which;
  s.t_derivative = l;
  return s;
}
Symbol Symbol::inverse_gradient() { Symbol s; s.kind = SymbolKind::inverse_gradient; return s; }
Symbol Symbol::heat(double t, double nu) {
  Symbol s;
  s.kind = SymbolKind::heat;
  s.t = t;
  s.nu = nu;
  return s;
}
Symbol Symbol::custom(std::function<cplx(const Eigen::Vector3d&)> fn, bool odd) {
  Symbol s;
  s.kind = SymbolKind::custom;
  s.fn = std::move(fn);
  s.odd = odd;
  return s;
}

cplx Symbol::operator()(const Eigen::Vector3d& xi, const Eigen::Vector3i& k, int n) const {
  const double r2 = xi.squaredNorm();
  const double r = std::sqrt(r2);
  switch (kind) {
    case SymbolKind::identity: return 1.0;
    case SymbolKind::derivative: {
      cplx v = 1.0;
      for (int d = 0; d < 3; ++d) {
        if (alpha[d] % 2 == 1 && k(d) == -n / 2) return 0.0;
        for (int j = 0; j < alpha[d]; ++j) v *= cplx(0.0, xi(d));
      }
      return v;
    }
    case SymbolKind::riesz:
      if (r2 == 0.0 || k(axis) == -n / 2) return 0.0;
      return xi(axis) / r;
    case SymbolKind::chi_low: return cutoff.low(r);
    case SymbolKind::chi_mid: return cutoff.mid(r);
    case SymbolKind::chi_high: return cutoff.high(r);
    case SymbolKind::kernel: return kernel_hat(t, r, damping, kernel, t_derivative);
    case SymbolKind::inverse_gradient: return r2 == 0.0 ? 0.0 : 1.0 / r;
    case SymbolKind::heat: return std::exp(-0.5 * nu * r2 * t);
    case SymbolKind::custom:
      if (odd && (k.array() == -n / 2).any()) return 0.0;
      return fn(xi);
  }
  throw Error(Errc::unsupported_symbol, "unknown symbol kind");
}

Symbol symbol_from_id(std::string_view id) {
  if (id == "identity") return Symbol::identity();
  if (id == "inverse-gradient") return Symbol::inverse_gradient();
  if (id.starts_with("riesz:")) {
    const std::string rest(id.substr(6));
    if (rest == "0" || rest == "1" || rest == "2") return Symbol::riesz(rest[0] - '0');
  }
  if (id.starts_with("deriv:")) {
    std::istringstream in{std::string(id.substr(6))};
    int a[3];
    char sep1 = 0, sep2 = 0;
    if (in >> a[0] >> sep1 >> a[1] >> sep2 >> a[2] && sep1 == ',' && sep2 == ',' && in.eof()) {
      return Symbol::derivative(a[0], a[1], a[2]);
    }
  }
  throw Error(Errc::unsupported_symbol, "unknown symbol id '" + std::string(id) + "'");
}

VectorField apply_symbol(const VectorField& field, const Symbol& symbol, SymbolFlags* flags) {
  if (field.space() != Space::spectral) throw Error(Errc::shape, "apply_symbol needs a spectral field");
  const Grid3& g = field.grid();
  VectorField out = field;
  const bool zeroes_mean = symbol.kind == SymbolKind::riesz || symbol.kind == SymbolKind::inverse_gradient;
  if (flags) flags->mean_not_zero = false;
  if (zeroes_mean && flags) {
    for (int c = 0; c < field.components(); ++c) {
      if (std::abs(field[c](0)) > 0.0) flags->mean_not_zero = true;
    }
  }
  for (Index idx = 0; idx < g.size(); ++idx) {
    const Eigen::Vector3i k = g.wavevector_index(idx);
    const cplx m = symbol(g.dk() * k.cast<double>(), k, g.n);
    for (int c = 0; c < out.components(); ++c) out[c](idx) *= m;
  }
  return out;
}

// ---------------------------------------------------------------- norms

double lp_norm(const VectorField& field, double p) {
  if (!(p >= 1.0)) throw Error(Errc::invalid_exponent, "p must be at least 1");
  if (field.space() != Space::physical) throw Error(Errc::shape, "lp_norm needs a physical field");
  const Index N = field.grid().size();
  if (std::isinf(p)) {
    double m = 0.0;
    for (int c = 0; c < field.components(); ++c) m = std::max(m, field[c].abs().maxCoeff());
    return m;
  }
  Eigen::ArrayXd mag2 = Eigen::ArrayXd::Zero(N);
  for (int c = 0; c < field.components(); ++c) mag2 += field[c].abs2();
  double sum = 0.0;
  if (p == 2.0) {
    sum = mag2.sum();
  } else if (p == 1.0) {
    sum = mag2.sqrt().sum();
  } else {
    sum = mag2.pow(0.5 * p).sum();
  }
  return std::pow(sum * field.grid().cell_volume(), 1.0 / p);
}

double spectral_l2_norm(const VectorField& field) {
  if (field.space() != Space::spectral) throw Error(Errc::shape, "spectral norm needs a spectral field");
  double sum = 0.0;
  for (int c = 0; c < field.components(); ++c) sum += field[c].abs2().sum();
  return std::sqrt(sum * field.grid().mode_volume());
}

double sobolev_seminorm(const VectorField& field, int alpha) {
  if (alpha < 0) throw Error(Errc::invalid_exponent, "derivative order must be nonnegative");
  const VectorField s = to_spectral(field);
  const Grid3& g = s.grid();
  double sum = 0.0;
  for (Index idx = 0; idx < g.size(); ++idx) {
    double m2 = 0.0;
    for (int c = 0; c < s.components(); ++c) m2 += std::norm(s[c](idx));
    if (m2 == 0.0) continue;
    sum += std::pow(g.xi_norm2(idx), alpha) * m2;
  }
  return std::sqrt(sum * g.mode_volume());
}

bool dealias_keeps(const Eigen::Vector3i& k, int n) {
  return 3 * std::abs(k(0)) < n && 3 * std::abs(k(1)) < n && 3 * std::abs(k(2)) < n;
}

void dealias(VectorField& field) {
  if (field.space() != Space::spectral) throw Error(Errc::shape, "dealias needs a spectral field");
  const Grid3& g = field.grid();
  const int n = g.n;
  std::vector<char> mask(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) mask[size_t(i)] = 3 * std::abs(g.wavenumber(i)) < n;
  for (int c = 0; c < field.components(); ++c) {
    cplx* a = field[c].data();
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy) {
        cplx* row = a + g.index(0, iy, iz);
        if (!mask[size_t(iz)] || !mask[size_t(iy)]) {
          std::fill(row, row + n, cplx(0.0));
          continue;
        }
        for (int ix = 0; ix < n; ++ix)
          if (!mask[size_t(ix)]) row[ix] = 0.0;
      }
  }
}

double hermitian_defect(const VectorField& field) {
  const Grid3& g = field.grid();
  double defect = 0.0, scale = 0.0;
  for (int c = 0; c < field.components(); ++c) {
    const auto& a = field[c];
    scale = std::max(scale, a.abs().maxCoeff());
    for (Index idx = 0; idx < g.size(); ++idx) {
      const Eigen::Vector3i k = g.wavevector_index(idx);
      // the Nyquist planes are their own mirror images
      const Index mirror = g.index(g.storage(-k(0) == g.n / 2 ? -g.n / 2 : -k(0)),
                                   g.storage(-k(1) == g.n / 2 ? -g.n / 2 : -k(1)),
                                   g.storage(-k(2) == g.n / 2 ? -g.n / 2 : -k(2)));
      defect = std::max(defect, std::abs(a(mirror) - std::conj(a(idx))));
    }
  }
  return scale > 0.0 ? defect / scale : 0.0;
}

// ---------------------------------------------------------------- compact spectra

CompactSpectrum::CompactSpectrum(const VectorField& spectral, int K) : n_(spectral.grid().n), K_(K) {
  if (spectral.space() != Space::spectral) throw Error(Errc::shape, "compact storage needs a spectral field");
  if (K < 0 || K > n_ / 2 - 1) K_ = n_ / 2 - 1;
  const Grid3& g = spectral.grid();
  const int w = 2 * K_ + 1;
  const Index count = Index(w) * w * (K_ + 1);
  data_.assign(static_cast<size_t>(spectral.components()), Eigen::ArrayXcd(count));
  for (int c = 0; c < spectral.components(); ++c) {
    Index m = 0;
    for (int kz = 0; kz <= K_; ++kz)
      for (int ky = -K_; ky <= K_; ++ky)
        for (int kx = -K_; kx <= K_; ++kx)
          data_[size_t(c)](m++) = spectral[c](g.index(g.storage(kx), g.storage(ky), g.storage(kz)));
  }
}

VectorField CompactSpectrum::expand(const Grid3& g) const {
  if (g.n != n_) throw Error(Errc::shape, "compact spectrum belongs to a different grid");
  VectorField out(g, Space::spectral, components());
  for (int c = 0; c < components(); ++c) {
    Index m = 0;
    for (int kz = 0; kz <= K_; ++kz)
      for (int ky = -K_; ky <= K_; ++ky)
        for (int kx = -K_; kx <= K_; ++kx) {
          const cplx v = data_[size_t(c)](m++);
          out[c](g.index(g.storage(kx), g.storage(ky), g.storage(kz))) = v;
          if (kz > 0) out[c](g.index(g.storage(-kx), g.storage(-ky), g.storage(-kz))) = std::conj(v);
        }
  }
  return out;
}

std::size_t CompactSpectrum::bytes() const {
  std::size_t b = 0;
  for (const auto& a : data_) b += std::size_t(a.size()) * sizeof(cplx);
  return b;
}

// ---------------------------------------------------------------- snapshots

namespace {

constexpr char kMagic[8] = {'E', 'W', 'S', 'N', 'A', 'P', '1', '\0'};

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

template <class T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const VectorField& field, double time) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot open " + path);
  out.write(kMagic, sizeof kMagic);
  put<std::int64_t>(out, field.grid().n);
  put<double>(out, field.grid().box_length);
  put<std::int32_t>(out, field.space() == Space::physical ? 0 : 1);
  put<std::int32_t>(out, field.components());
  put<double>(out, time);
  for (int c = 0; c < field.components(); ++c) {
    const auto& a = field[c];
    if (field.space() == Space::physical) {
      for (Index i = 0; i < a.size(); ++i) put<double>(out, a(i).real());
    } else {
      out.write(reinterpret_cast<const char*>(a.data()), std::streamsize(a.size() * sizeof(cplx)));
    }
  }
  if (!out) throw Error(Errc::io, "write failed for " + path);
}

VectorField read_snapshot(const std::string& path, double* time) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw Error(Errc::io, "not a snapshot file: " + path);
  const auto n = get<std::int64_t>(in);
  const auto L = get<double>(in);
  const auto tag = get<std::int32_t>(in);
  const auto comps = get<std::int32_t>(in);
  const auto t = get<double>(in);
  if (!in || comps < 1 || (tag != 0 && tag != 1)) throw Error(Errc::io, "corrupt snapshot header in " + path);
  VectorField f(make_grid(int(n), L), tag == 0 ? Space::physical : Space::spectral, comps);
  for (int c = 0; c < comps; ++c) {
    auto& a = f[c];
    if (tag == 0) {
      for (Index i = 0; i < a.size(); ++i) a(i) = get<double>(in);
    } else {
      in.read(reinterpret_cast<char*>(a.data()), std::streamsize(a.size() * sizeof(cplx)));
    }
  }
  if (!in) throw Error(Errc::io, "truncated snapshot " + path);
  if (time) *time = t;
  return f;
}

}  // namespace elastowave
