#include "erz/dft_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "erz/spectral.hpp"

namespace erz::oracle {

namespace {

int wrap(int i, int n) { return i < n / 2 ? i : i - n; }

bool retained(std::span<const int> m, int n) {
  return std::all_of(m.begin(), m.end(), [n](int v) { return 3 * std::abs(v) <= n; });
}

std::vector<double> coordinates(const Box& box, std::size_t idx) {
  std::vector<double> x(box.d);
  for (int a = box.d - 1; a >= 0; --a) {
    x[a] = box.L * static_cast<double>(idx % box.n) / box.n;
    idx /= box.n;
  }
  return x;
}

double phase(const Box& box, std::span<const int> m, std::span<const double> x) {
  double p = 0.0;
  for (int a = 0; a < box.d; ++a) p += 2.0 * std::numbers::pi / box.L * m[a] * x[a];
  return p;
}

std::size_t index_of(const Box& box, std::span<const int> m) {
  std::size_t idx = 0;
  for (int a = 0; a < box.d; ++a) idx = idx * box.n + static_cast<std::size_t>((m[a] + box.n) % box.n);
  return idx;
}

}  // namespace

std::size_t Box::size() const {
  std::size_t s = 1;
  for (int a = 0; a < d; ++a) s *= static_cast<std::size_t>(n);
  return s;
}

std::vector<int> Box::lattice(std::size_t idx) const {
  std::vector<int> m(d);
  for (int a = d - 1; a >= 0; --a) {
    m[a] = wrap(static_cast<int>(idx % n), n);
    idx /= n;
  }
  return m;
}

std::vector<Complex> dft(const Box& box, std::span<const double> f) {
  const std::size_t N = box.size();
  std::vector<Complex> c(N);
  for (std::size_t k = 0; k < N; ++k) {
    const auto m = box.lattice(k);
    Complex acc(0.0, 0.0);
    for (std::size_t p = 0; p < N; ++p) {
      const auto x = coordinates(box, p);
      acc += f[p] * std::polar(1.0, -phase(box, m, x));
    }
    c[k] = acc / static_cast<double>(N);
  }
  return c;
}

std::vector<double> idft_real(const Box& box, std::span<const Complex> c) {
  const std::size_t N = box.size();
  std::vector<double> f(N);
  for (std::size_t p = 0; p < N; ++p) {
    const auto x = coordinates(box, p);
    Complex acc(0.0, 0.0);
    for (std::size_t k = 0; k < N; ++k) acc += c[k] * std::polar(1.0, phase(box, box.lattice(k), x));
    f[p] = acc.real();
  }
  return f;
}

std::vector<double> apply_symbol(const Box& box, std::span<const double> f, const Symbol& sym) {
  auto c = dft(box, f);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= sym(box.lattice(k));
  return idft_real(box, c);
}

std::vector<double> lambda(const Box& box, std::span<const double> f, double s) {
  const double unit = 2.0 * std::numbers::pi / box.L;
  return apply_symbol(box, f, [&](std::span<const int> m) -> Complex {
    double k2 = 0.0;
    for (int v : m) k2 += unit * v * unit * v;
    if (k2 == 0.0) return 0.0;
    return std::pow(std::sqrt(k2), s);
  });
}

std::vector<double> partial(const Box& box, std::span<const double> f, int axis) {
  const double unit = 2.0 * std::numbers::pi / box.L;
  return apply_symbol(box, f, [&](std::span<const int> m) -> Complex {
    if (m[axis] == -box.n / 2) return 0.0;
    return Complex(0.0, unit * m[axis]);
  });
}

std::vector<double> divergence(const Box& box, const std::vector<std::vector<double>>& v) {
  std::vector<double> out(box.size(), 0.0);
  for (int a = 0; a < box.d; ++a) {
    const auto da = partial(box, v[a], a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += da[i];
  }
  return out;
}

std::vector<double> truncated_product(const Box& box, std::span<const double> f,
                                      std::span<const double> g) {
  const auto cf = dft(box, f);
  const auto cg = dft(box, g);
  const std::size_t N = box.size();
  std::vector<Complex> out(N, Complex(0.0, 0.0));
  std::vector<int> r(box.d);
  for (std::size_t p = 0; p < N; ++p) {
    const auto mp = box.lattice(p);
    if (!retained(mp, box.n)) continue;
    for (std::size_t q = 0; q < N; ++q) {
      const auto mq = box.lattice(q);
      if (!retained(mq, box.n)) continue;
      for (int a = 0; a < box.d; ++a) r[a] = mp[a] + mq[a];
      if (!retained(r, box.n)) continue;
      out[index_of(box, r)] += cf[p] * cg[q];
    }
  }
  return idft_real(box, out);
}

double weighted_mode_sum(const Box& box, std::span<const Complex> c,
                         const std::function<double(std::span<const int>)>& w) {
  double acc = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) acc += w(box.lattice(k)) * std::norm(c[k]);
  return std::pow(box.L, box.d) * acc;
}

std::vector<SuiteEntry> spectral_suite(int n, unsigned long seed) {
  std::vector<SuiteEntry> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  auto max_err = [](std::span<const double> a, std::span<const double> b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
    return e;
  };

  for (int d = 1; d <= 2; ++d) {
    const Box box{d, n, 2.0 * std::numbers::pi};
    const auto grid = Grid::make(d, n, box.L);
    auto random_zero_mean = [&] {
      std::vector<double> v(box.size());
      for (double& x : v) x = unif(rng);
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      for (double& x : v) x -= mean;
      return v;
    };
    const std::string tag = "d=" + std::to_string(d) + " ";

    const auto f = random_zero_mean();
    const RealField rf(grid, f);
    const auto fh = transform(rf);

    {
      const auto ref = dft(box, f);
      double e = 0.0;
      for (std::size_t k = 0; k < ref.size(); ++k) e = std::max(e, std::abs(ref[k] - fh[k]));
      out.push_back({tag + "forward transform", e});
      const auto back = inverse_transform(fh);
      out.push_back({tag + "inverse transform", max_err(idft_real(box, ref), back.values())});
    }
    for (double s : {-1.5, -0.5, 0.37, 0.5, 2.0}) {
      const auto fast = inverse_transform(apply_lambda(fh, s));
      char name[64];
      std::snprintf(name, sizeof name, "Lambda^%g", s);
      out.push_back({tag + name, max_err(lambda(box, f, s), fast.values())});
    }
    for (int a = 0; a < d; ++a) {
      const auto fast = inverse_transform(partial(fh, a));
      out.push_back({tag + "gradient axis " + std::to_string(a), max_err(partial(box, f, a), fast.values())});
    }
    {
      std::vector<std::vector<double>> v;
      RealVector rv;
      for (int a = 0; a < d; ++a) {
        v.push_back(random_zero_mean());
        rv.emplace_back(grid, v.back());
      }
      const auto fast = inverse_transform(divergence(transform(rv)));
      out.push_back({tag + "divergence", max_err(divergence(box, v), fast.values())});
    }
  }
  return out;
}

Matrix2 expm_taylor(const Matrix2& a) {
  double norm = 0.0;
  for (const auto& r : a)
    for (const auto& v : r) norm = std::max(norm, std::abs(v));
  int squarings = 0;
  while (norm > 0.125) {
    norm /= 2;
    ++squarings;
  }
  const double scale = std::ldexp(1.0, -squarings);
  Matrix2 b{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) b[i][j] = a[i][j] * scale;
  auto mul = [](const Matrix2& x, const Matrix2& y) {
    Matrix2 z{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) z[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
    return z;
  };
  Matrix2 sum{};
  sum[0][0] = sum[1][1] = 1.0;
  Matrix2 term = sum;
  for (int k = 1; k < 30; ++k) {
    term = mul(term, b);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        term[i][j] /= static_cast<double>(k);
        sum[i][j] += term[i][j];
      }
  }
  for (int s = 0; s < squarings; ++s) sum = mul(sum, sum);
  return sum;
}

}  // namespace erz::oracle
