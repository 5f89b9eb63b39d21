#pragma once
//
// Periodic box, spectral transforms and Fourier multipliers.
//
// Coefficients use the average convention
//     f_hat(m) = |Omega|^{-1} * integral f(x) exp(-i kappa(m).x) dx,
// so a single Fourier mode has coefficient 1/2 at +-m and the L2 norm carries
// an explicit |Omega| factor:  ||f||^2 = |Omega| * sum_m |f_hat(m)|^2.
//

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace erz {

using Complex = std::complex<double>;

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Uniform periodic grid [0, L)^d with n points per axis and its dual
/// wavenumber lattice kappa = (2 pi / L) m, m_j in {-n/2, ..., n/2 - 1}.
///
/// Flat indices are row-major with axis 0 slowest; the same flat index
/// addresses a grid point in real space and a lattice mode in spectral space.
class Grid {
 public:
  /// Throws ConfigError for d < 1, odd n, n < 4 or L <= 0.
  static GridPtr make(int d, int n, double L);

  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  int dim() const noexcept { return d_; }
  int points() const noexcept { return n_; }
  double length() const noexcept { return L_; }
  std::size_t size() const noexcept { return size_; }
  double volume() const noexcept { return volume_; }
  double dx() const noexcept { return L_ / n_; }
  double kappa_min() const noexcept { return kappa_unit_; }
  /// Largest lattice modulus, attained at the all-Nyquist corner.
  double kappa_max() const noexcept { return kappa_max_; }

  int lattice(std::size_t mode, int axis) const noexcept {
    return lattice_[mode * d_ + axis];
  }
  double kappa(std::size_t mode, int axis) const noexcept {
    return kappa_unit_ * lattice_[mode * d_ + axis];
  }
  /// Wavenumber used by odd (derivative) multipliers: Nyquist components are
  /// zero so that i*kappa maps real fields to real fields.
  double deriv_kappa(std::size_t mode, int axis) const noexcept {
    return deriv_[mode * d_ + axis];
  }
  double kappa_norm(std::size_t mode) const noexcept { return norm_[mode]; }
  double deriv_norm(std::size_t mode) const noexcept { return deriv_norm_[mode]; }
  bool is_nyquist(std::size_t mode) const noexcept;
  /// Flat index of the mode -m.
  std::size_t mirror(std::size_t mode) const noexcept;
  std::size_t mode_index(std::span<const int> m) const;
  /// Real-space coordinate of grid point `point` along `axis`.
  double coordinate(std::size_t point, int axis) const noexcept;

  /// Unnormalised in-place transforms (exp(-i...) forward, exp(+i...) back).
  void fft_forward(std::span<Complex> data) const;
  void fft_backward(std::span<Complex> data) const;

 private:
  Grid(int d, int n, double L);

  struct Plans;
  int d_;
  int n_;
  double L_;
  std::size_t size_;
  double volume_;
  double kappa_unit_;
  double kappa_max_;
  std::vector<int> lattice_;
  std::vector<double> deriv_;
  std::vector<double> norm_;
  std::vector<double> deriv_norm_;
  std::unique_ptr<Plans> plans_;
};

/// Real samples of a scalar field on a grid.
class RealField {
 public:
  explicit RealField(GridPtr grid);
  RealField(GridPtr grid, std::vector<double> values);

  template <class F>
  static RealField from_function(GridPtr grid, F&& f) {
    RealField out(grid);
    std::vector<double> x(grid->dim());
    for (std::size_t p = 0; p < grid->size(); ++p) {
      for (int a = 0; a < grid->dim(); ++a) x[a] = grid->coordinate(p, a);
      out.values_[p] = f(std::span<const double>(x));
    }
    return out;
  }

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  RealField& operator+=(const RealField& other);
  RealField& operator-=(const RealField& other);
  RealField& operator*=(double a);

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Average-convention Fourier coefficients of a real field.
class SpectralField {
 public:
  explicit SpectralField(GridPtr grid);
  SpectralField(GridPtr grid, std::vector<Complex> coeffs);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }
  Complex operator[](std::size_t m) const noexcept { return coeffs_[m]; }
  Complex& operator[](std::size_t m) noexcept { return coeffs_[m]; }
  Complex mean() const noexcept { return coeffs_[0]; }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(Complex a);
  /// this += a * other
  SpectralField& axpy(Complex a, const SpectralField& other);

 private:
  GridPtr grid_;
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(Complex a, SpectralField b);

using RealVector = std::vector<RealField>;
using SpectralVector = std::vector<SpectralField>;

SpectralField transform(const RealField& f);
RealField inverse_transform(const SpectralField& f);
SpectralVector transform(const RealVector& v);
RealVector inverse_transform(const SpectralVector& v);

/// Zero-mean test used throughout: |f_hat(0)| <= 1e-13 * max_m |f_hat(m)|.
bool is_zero_mean(const SpectralField& f) noexcept;

/// Riesz multiplier |kappa|^s. The zero mode is set to 0 for every s != 0.
/// Throws DomainError when s < 0 and f is not zero-mean.
SpectralField apply_lambda(const SpectralField& f, double s);
SpectralVector apply_lambda(const SpectralVector& v, double s);

SpectralField partial(const SpectralField& f, int axis);
/// Mixed partial derivative d^k with k a multi-index of length d.
SpectralField partial(const SpectralField& f, std::span<const int> k);
SpectralVector gradient(const SpectralField& f);
SpectralField divergence(const SpectralVector& v);

enum class Norm { homogeneous, inhomogeneous };

/// Homogeneous: sqrt(|Omega| sum_{m != 0} |kappa|^{2s} |f_hat|^2).
/// Inhomogeneous: sqrt(|Omega| sum_m (1 + |kappa|^2)^s |f_hat|^2).
double sobolev_norm(const SpectralField& f, double s, Norm kind);
/// Euclidean combination over components.
double sobolev_norm(const SpectralVector& v, double s, Norm kind);

/// |Omega| sum_m |deriv_kappa|^{2j} |kappa|^{2s} |f_hat|^2, which equals the
/// multinomially weighted sum over |k| = j of ||Lambda^s d^k f||^2.
double derivative_energy(const SpectralField& f, int j, double s);
double derivative_energy(const SpectralVector& v, int j, double s);

/// 2/3 rule: zero every mode with some |m_j| > n/3.
SpectralField dealias(const SpectralField& f);
SpectralVector dealias(const SpectralVector& v);
bool is_dealiased(std::size_t mode, const Grid& g) noexcept;

SpectralField zero_mean_project(const SpectralField& f);
SpectralVector zero_mean_project(const SpectralVector& v);

// Real-space quadrature (rectangle rule, exact for trigonometric
// polynomials resolved on the grid).
double integrate(const RealField& f);
double inner(const RealField& f, const RealField& g);
double inner(const RealVector& f, const RealVector& g);
double l2_norm(const RealField& f);
double l2_norm(const RealVector& v);
double max_abs(const RealField& f);
double min_value(const RealField& f);
RealField multiply(const RealField& f, const RealField& g);
/// Pointwise Euclidean norm of a vector field.
RealField pointwise_norm(const RealVector& v);

/// |Omega| * Re sum_m f_hat(m) conj(g_hat(m)), the L2 pairing via Parseval.
double spectral_inner(const SpectralField& f, const SpectralField& g);
double spectral_inner(const SpectralVector& f, const SpectralVector& g);

/// Multi-index k with |k| = order and multinomial weight order! / prod k_i!.
struct MultiIndex {
  std::vector<int> k;
  double weight;
};
std::vector<MultiIndex> multi_indices(int d, int order);

SpectralVector zeros(const GridPtr& grid, int components);

}  // namespace erz
