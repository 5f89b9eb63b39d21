#pragma once
//
// Direct O(n^{2d}) discrete Fourier sums, written without the Grid class or
// FFTW, used to cross-check the fast spectral layer.
//

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace erz::oracle {

using Complex = std::complex<double>;

struct Box {
  int d;
  int n;
  double L;
  std::size_t size() const;
  /// Integer lattice vector of flat index `idx` (axis 0 slowest).
  std::vector<int> lattice(std::size_t idx) const;
};

/// Average-convention coefficients: (1/n^d) sum_x f(x) exp(-i kappa.x).
std::vector<Complex> dft(const Box& box, std::span<const double> f);
/// Real part of sum_m c_m exp(i kappa.x).
std::vector<double> idft_real(const Box& box, std::span<const Complex> c);

using Symbol = std::function<Complex(std::span<const int> m)>;
std::vector<double> apply_symbol(const Box& box, std::span<const double> f, const Symbol& sym);

std::vector<double> lambda(const Box& box, std::span<const double> f, double s);
std::vector<double> partial(const Box& box, std::span<const double> f, int axis);
std::vector<double> divergence(const Box& box, const std::vector<std::vector<double>>& v);

/// Product of f and g with both factors and the result truncated to the
/// 2/3-rule retained set, by explicit convolution of coefficients.
std::vector<double> truncated_product(const Box& box, std::span<const double> f,
                                      std::span<const double> g);

/// |Omega| * sum_m w(m) |c_m|^2.
double weighted_mode_sum(const Box& box, std::span<const Complex> c,
                         const std::function<double(std::span<const int>)>& w);

struct SuiteEntry {
  std::string name;
  double max_abs_error;
};

/// Compares every multiplier of the fast layer (Lambda^s for several s,
/// gradient, divergence, transforms) with the direct sums on random
/// zero-mean fields over d = 1 and d = 2 grids with n points per axis.
std::vector<SuiteEntry> spectral_suite(int n, unsigned long seed);

using Matrix2 = std::array<std::array<Complex, 2>, 2>;
/// exp(a) by scaling and squaring of a 30-term Taylor series.
Matrix2 expm_taylor(const Matrix2& a);

}  // namespace erz::oracle
