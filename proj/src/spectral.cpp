#include "erz/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

#include "erz/errors.hpp"
#include "erz/summation.hpp"

namespace erz {

namespace {

// FFTW planning is not thread safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (&a != &b) throw DomainError("fields live on different grids");
}

}  // namespace

struct Grid::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

GridPtr Grid::make(int d, int n, double L) {
  if (d < 1) throw ConfigError("dimension", "dimension must be >= 1, got " + std::to_string(d));
  if (n < 4 || n % 2 != 0)
    throw ConfigError("points_per_axis",
                      "points per axis must be an even integer >= 4, got " + std::to_string(n));
  if (!(L > 0.0) || !std::isfinite(L))
    throw ConfigError("box_length", "box length must be positive and finite");
  return GridPtr(new Grid(d, n, L));
}

Grid::Grid(int d, int n, double L)
    : d_(d), n_(n), L_(L), size_(1), plans_(std::make_unique<Plans>()) {
  for (int a = 0; a < d; ++a) size_ *= static_cast<std::size_t>(n);
  volume_ = std::pow(L, d);
  kappa_unit_ = 2.0 * std::numbers::pi / L;
  kappa_max_ = kappa_unit_ * (n / 2) * std::sqrt(static_cast<double>(d));

  lattice_.resize(size_ * d);
  deriv_.resize(size_ * d);
  norm_.resize(size_);
  deriv_norm_.resize(size_);
  for (std::size_t mode = 0; mode < size_; ++mode) {
    std::size_t rem = mode;
    double k2 = 0.0;
    double kd2 = 0.0;
    for (int a = d - 1; a >= 0; --a) {
      const int i = static_cast<int>(rem % n);
      rem /= n;
      const int m = i < n / 2 ? i : i - n;
      lattice_[mode * d + a] = m;
      const double k = kappa_unit_ * m;
      const double kd = (m == -n / 2) ? 0.0 : k;
      deriv_[mode * d + a] = kd;
      k2 += k * k;
      kd2 += kd * kd;
    }
    norm_[mode] = std::sqrt(k2);
    deriv_norm_[mode] = std::sqrt(kd2);
  }

  std::vector<int> dims(d, n);
  std::vector<Complex> scratch(size_);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  std::lock_guard lock(planner_mutex());
  plans_->forward = fftw_plan_dft(d, dims.data(), buf, buf, FFTW_FORWARD,
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->backward = fftw_plan_dft(d, dims.data(), buf, buf, FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
}

Grid::~Grid() = default;

bool Grid::is_nyquist(std::size_t mode) const noexcept {
  for (int a = 0; a < d_; ++a)
    if (lattice_[mode * d_ + a] == -n_ / 2) return true;
  return false;
}

std::size_t Grid::mirror(std::size_t mode) const noexcept {
  std::size_t idx = 0;
  for (int a = 0; a < d_; ++a) {
    const int m = lattice_[mode * d_ + a];
    const int i = ((-m) % n_ + n_) % n_;
    idx = idx * n_ + i;
  }
  return idx;
}

std::size_t Grid::mode_index(std::span<const int> m) const {
  if (static_cast<int>(m.size()) != d_) throw DomainError("mode index has wrong dimension");
  std::size_t idx = 0;
  for (int a = 0; a < d_; ++a) {
    if (m[a] < -n_ / 2 || m[a] >= n_ / 2) throw DomainError("mode index out of lattice range");
    idx = idx * n_ + static_cast<std::size_t>((m[a] + n_) % n_);
  }
  return idx;
}

double Grid::coordinate(std::size_t point, int axis) const noexcept {
  std::size_t stride = 1;
  for (int a = d_ - 1; a > axis; --a) stride *= n_;
  const std::size_t i = (point / stride) % n_;
  return L_ * static_cast<double>(i) / n_;
}

void Grid::fft_forward(std::span<Complex> data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->forward, p, p);
}

void Grid::fft_backward(std::span<Complex> data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->backward, p, p);
}

// ---------------------------------------------------------------------------

RealField::RealField(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size(), 0.0) {}

RealField::RealField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size()) throw DomainError("sample count does not match grid size");
}

RealField& RealField::operator+=(const RealField& other) {
  require_same_grid(*grid_, *other.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

RealField& RealField::operator-=(const RealField& other) {
  require_same_grid(*grid_, *other.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

RealField& RealField::operator*=(double a) {
  for (double& v : values_) v *= a;
  return *this;
}

SpectralField::SpectralField(GridPtr grid)
    : grid_(std::move(grid)), coeffs_(grid_->size(), Complex(0.0, 0.0)) {}

SpectralField::SpectralField(GridPtr grid, std::vector<Complex> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_->size()) throw DomainError("coefficient count does not match grid size");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(*grid_, *other.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(*grid_, *other.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(Complex a) {
  for (Complex& c : coeffs_) c *= a;
  return *this;
}

SpectralField& SpectralField::axpy(Complex a, const SpectralField& other) {
  require_same_grid(*grid_, *other.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += a * other.coeffs_[i];
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(Complex a, SpectralField b) { return b *= a; }

// ---------------------------------------------------------------------------

SpectralField transform(const RealField& f) {
  const Grid& g = f.grid();
  std::vector<Complex> data(g.size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = Complex(f[i], 0.0);
  g.fft_forward(data);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (Complex& c : data) c *= scale;
  return SpectralField(f.grid_ptr(), std::move(data));
}

RealField inverse_transform(const SpectralField& f) {
  const Grid& g = f.grid();
  std::vector<Complex> data(f.coeffs().begin(), f.coeffs().end());
  g.fft_backward(data);
  std::vector<double> values(g.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = data[i].real();
  return RealField(f.grid_ptr(), std::move(values));
}

SpectralVector transform(const RealVector& v) {
  SpectralVector out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(transform(c));
  return out;
}

RealVector inverse_transform(const SpectralVector& v) {
  RealVector out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(inverse_transform(c));
  return out;
}

bool is_zero_mean(const SpectralField& f) noexcept {
  double largest = 0.0;
  for (const Complex& c : f.coeffs()) largest = std::max(largest, std::abs(c));
  return std::abs(f.mean()) <= 1e-13 * largest;
}

SpectralField apply_lambda(const SpectralField& f, double s) {
  if (s == 0.0) return f;
  if (s < 0.0 && !is_zero_mean(f))
    throw DomainError("Riesz potential Lambda^" + std::to_string(s) +
                      " applied to a field with nonzero mean");
  const Grid& g = f.grid();
  SpectralField out(f.grid_ptr());
  for (std::size_t m = 1; m < g.size(); ++m) out[m] = f[m] * std::pow(g.kappa_norm(m), s);
  return out;
}

SpectralVector apply_lambda(const SpectralVector& v, double s) {
  SpectralVector out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(apply_lambda(c, s));
  return out;
}

SpectralField partial(const SpectralField& f, int axis) {
  const Grid& g = f.grid();
  SpectralField out(f.grid_ptr());
  for (std::size_t m = 0; m < g.size(); ++m) out[m] = Complex(0.0, g.deriv_kappa(m, axis)) * f[m];
  return out;
}

SpectralField partial(const SpectralField& f, std::span<const int> k) {
  const Grid& g = f.grid();
  if (static_cast<int>(k.size()) != g.dim()) throw DomainError("multi-index has wrong dimension");
  int order = 0;
  for (int ki : k) order += ki;
  // i^order * prod kappa_a^{k_a}
  static const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex phase = ipow[order % 4];
  SpectralField out(f.grid_ptr());
  for (std::size_t m = 0; m < g.size(); ++m) {
    double sym = 1.0;
    for (int a = 0; a < g.dim(); ++a)
      for (int r = 0; r < k[a]; ++r) sym *= g.deriv_kappa(m, a);
    out[m] = phase * sym * f[m];
  }
  return out;
}

SpectralVector gradient(const SpectralField& f) {
  SpectralVector out;
  out.reserve(f.grid().dim());
  for (int a = 0; a < f.grid().dim(); ++a) out.push_back(partial(f, a));
  return out;
}

SpectralField divergence(const SpectralVector& v) {
  if (v.empty()) throw DomainError("divergence of an empty vector field");
  const Grid& g = v.front().grid();
  if (static_cast<int>(v.size()) != g.dim()) throw DomainError("vector field has wrong component count");
  SpectralField out(v.front().grid_ptr());
  for (std::size_t m = 0; m < g.size(); ++m) {
    Complex acc(0.0, 0.0);
    for (int a = 0; a < g.dim(); ++a) acc += Complex(0.0, g.deriv_kappa(m, a)) * v[a][m];
    out[m] = acc;
  }
  return out;
}

double sobolev_norm(const SpectralField& f, double s, Norm kind) {
  const Grid& g = f.grid();
  CompensatedSum acc;
  if (kind == Norm::homogeneous) {
    if (s < 0.0 && !is_zero_mean(f))
      throw DomainError("negative-order homogeneous norm of a field with nonzero mean");
    for (std::size_t m = 1; m < g.size(); ++m)
      acc.add(std::pow(g.kappa_norm(m), 2.0 * s) * std::norm(f[m]));
  } else {
    for (std::size_t m = 0; m < g.size(); ++m) {
      const double k = g.kappa_norm(m);
      acc.add(std::pow(1.0 + k * k, s) * std::norm(f[m]));
    }
  }
  return std::sqrt(g.volume() * acc.value());
}

double sobolev_norm(const SpectralVector& v, double s, Norm kind) {
  double sq = 0.0;
  for (const auto& c : v) {
    const double n = sobolev_norm(c, s, kind);
    sq += n * n;
  }
  return std::sqrt(sq);
}

double derivative_energy(const SpectralField& f, int j, double s) {
  const Grid& g = f.grid();
  if (s < 0.0 && !is_zero_mean(f))
    throw DomainError("negative-order derivative energy of a field with nonzero mean");
  CompensatedSum acc;
  for (std::size_t m = 1; m < g.size(); ++m) {
    const double kd = g.deriv_norm(m);
    double w = std::pow(kd, 2.0 * j);
    if (s != 0.0) w *= std::pow(g.kappa_norm(m), 2.0 * s);
    acc.add(w * std::norm(f[m]));
  }
  double total = acc.value();
  if (j == 0 && s == 0.0) total += std::norm(f[0]);
  return g.volume() * total;
}

double derivative_energy(const SpectralVector& v, int j, double s) {
  double total = 0.0;
  for (const auto& c : v) total += derivative_energy(c, j, s);
  return total;
}

bool is_dealiased(std::size_t mode, const Grid& g) noexcept {
  for (int a = 0; a < g.dim(); ++a)
    if (3 * std::abs(g.lattice(mode, a)) > g.points()) return false;
  return true;
}

SpectralField dealias(const SpectralField& f) {
  const Grid& g = f.grid();
  SpectralField out = f;
  for (std::size_t m = 0; m < g.size(); ++m)
    if (!is_dealiased(m, g)) out[m] = Complex(0.0, 0.0);
  return out;
}

SpectralVector dealias(const SpectralVector& v) {
  SpectralVector out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(dealias(c));
  return out;
}

SpectralField zero_mean_project(const SpectralField& f) {
  SpectralField out = f;
  out[0] = Complex(0.0, 0.0);
  return out;
}

SpectralVector zero_mean_project(const SpectralVector& v) {
  SpectralVector out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(zero_mean_project(c));
  return out;
}

double integrate(const RealField& f) {
  return compensated_sum(f.values()) * f.grid().volume() / static_cast<double>(f.size());
}

double inner(const RealField& f, const RealField& g) {
  require_same_grid(f.grid(), g.grid());
  CompensatedSum acc;
  for (std::size_t i = 0; i < f.size(); ++i) acc.add(f[i] * g[i]);
  return acc.value() * f.grid().volume() / static_cast<double>(f.size());
}

double inner(const RealVector& f, const RealVector& g) {
  if (f.size() != g.size()) throw DomainError("vector fields have different component counts");
  double total = 0.0;
  for (std::size_t a = 0; a < f.size(); ++a) total += inner(f[a], g[a]);
  return total;
}

double l2_norm(const RealField& f) { return std::sqrt(inner(f, f)); }

double l2_norm(const RealVector& v) {
  double sq = 0.0;
  for (const auto& c : v) sq += inner(c, c);
  return std::sqrt(sq);
}

double max_abs(const RealField& f) {
  double out = 0.0;
  for (double v : f.values()) out = std::max(out, std::abs(v));
  return out;
}

double min_value(const RealField& f) {
  return *std::min_element(f.values().begin(), f.values().end());
}

RealField multiply(const RealField& f, const RealField& g) {
  require_same_grid(f.grid(), g.grid());
  RealField out(f.grid_ptr());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] * g[i];
  return out;
}

RealField pointwise_norm(const RealVector& v) {
  RealField out(v.front().grid_ptr());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double sq = 0.0;
    for (const auto& c : v) sq += c[i] * c[i];
    out[i] = std::sqrt(sq);
  }
  return out;
}

double spectral_inner(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f.grid(), g.grid());
  CompensatedSum acc;
  for (std::size_t m = 0; m < f.size(); ++m) acc.add((f[m] * std::conj(g[m])).real());
  return f.grid().volume() * acc.value();
}

double spectral_inner(const SpectralVector& f, const SpectralVector& g) {
  if (f.size() != g.size()) throw DomainError("vector fields have different component counts");
  double total = 0.0;
  for (std::size_t a = 0; a < f.size(); ++a) total += spectral_inner(f[a], g[a]);
  return total;
}

std::vector<MultiIndex> multi_indices(int d, int order) {
  std::vector<MultiIndex> out;
  std::vector<int> k(d, 0);
  auto factorial = [](int x) {
    double r = 1.0;
    for (int i = 2; i <= x; ++i) r *= i;
    return r;
  };
  // Enumerate compositions of `order` into d nonnegative parts, lexicographic
  // with axis 0 most significant (descending).
  auto recurse = [&](auto&& self, int axis, int remaining) -> void {
    if (axis == d - 1) {
      k[axis] = remaining;
      double w = factorial(order);
      for (int ki : k) w /= factorial(ki);
      out.push_back({k, w});
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      k[axis] = v;
      self(self, axis + 1, remaining - v);
    }
  };
  recurse(recurse, 0, order);
  return out;
}

SpectralVector zeros(const GridPtr& grid, int components) {
  return SpectralVector(static_cast<std::size_t>(components), SpectralField(grid));
}

}  // namespace erz
