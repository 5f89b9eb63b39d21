#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "erz/dft_oracle.hpp"
#include "erz/errors.hpp"
#include "erz/spectral.hpp"

using namespace erz;
using std::numbers::pi;

namespace {

RealField random_field(const GridPtr& g, std::uint64_t seed, bool zero_mean = true) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  RealField f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = nd(rng);
  if (zero_mean) {
    auto fh = zero_mean_project(transform(f));
    return inverse_transform(fh);
  }
  return f;
}

double max_diff(const RealField& a, const RealField& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

double max_diff(std::span<const double> a, std::span<const double> b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

RealField cos_mode(const GridPtr& g, double k) {
  return RealField::from_function(g, [k](std::span<const double> x) { return std::cos(k * x[0]); });
}

}  // namespace

TEST(Grid, TwoDimensionalLattice) {
  auto g = Grid::make(2, 64, 2 * pi);
  EXPECT_EQ(g->size(), 4096u);
  EXPECT_DOUBLE_EQ(g->kappa_min(), 1.0);
  int max_axis = 0;
  int zero_modes = 0;
  for (std::size_t m = 0; m < g->size(); ++m) {
    max_axis = std::max(max_axis, g->lattice(m, 0));
    if (g->kappa_norm(m) == 0.0) ++zero_modes;
  }
  EXPECT_EQ(max_axis, 31);
  EXPECT_EQ(zero_modes, 1);
  EXPECT_EQ(g->kappa_norm(0), 0.0);
}

TEST(Grid, OneDimensionalAxisIndices) {
  auto g = Grid::make(1, 8, 2 * pi);
  std::vector<int> idx;
  for (std::size_t m = 0; m < g->size(); ++m) idx.push_back(g->lattice(m, 0));
  EXPECT_EQ(idx, (std::vector<int>{0, 1, 2, 3, -4, -3, -2, -1}));
  EXPECT_TRUE(g->is_nyquist(4));
  EXPECT_EQ(g->deriv_kappa(4, 0), 0.0);
  EXPECT_EQ(g->kappa_norm(4), 4.0);
}

TEST(Grid, KappaMinScalesWithLength) {
  EXPECT_DOUBLE_EQ(Grid::make(2, 64, 4 * pi)->kappa_min(), 0.5);
}

TEST(Grid, RejectsBadParameters) {
  EXPECT_THROW(Grid::make(2, 7, 1.0), ConfigError);
  EXPECT_THROW(Grid::make(2, 2, 1.0), ConfigError);
  EXPECT_THROW(Grid::make(2, 8, 0.0), ConfigError);
  EXPECT_THROW(Grid::make(2, 8, -1.0), ConfigError);
  EXPECT_THROW(Grid::make(0, 8, 1.0), ConfigError);
}

TEST(Grid, MirrorAndModeIndex) {
  auto g = Grid::make(2, 8, 2 * pi);
  const int m[2] = {1, -3};
  const std::size_t i = g->mode_index(m);
  EXPECT_EQ(g->lattice(i, 0), 1);
  EXPECT_EQ(g->lattice(i, 1), -3);
  const std::size_t j = g->mirror(i);
  EXPECT_EQ(g->lattice(j, 0), -1);
  EXPECT_EQ(g->lattice(j, 1), 3);
}

TEST(Transform, SingleCosineHasHalfCoefficients) {
  auto g = Grid::make(2, 16, 2 * pi);
  const auto fh = transform(cos_mode(g, 1.0));
  const int p[2] = {1, 0};
  const int q[2] = {-1, 0};
  const auto ip = g->mode_index(p);
  const auto iq = g->mode_index(q);
  for (std::size_t m = 0; m < g->size(); ++m) {
    const double expect = (m == ip || m == iq) ? 0.5 : 0.0;
    EXPECT_NEAR(std::abs(fh[m]), expect, 1e-15);
  }
}

TEST(Transform, RoundTripIsIdentity) {
  for (int d : {1, 2, 3}) {
    auto g = Grid::make(d, d == 3 ? 8 : 32, 3.0);
    const auto f = random_field(g, 7, false);
    const auto back = inverse_transform(transform(f));
    double scale = 0.0;
    for (double v : f.values()) scale = std::max(scale, std::abs(v));
    EXPECT_LE(max_diff(f, back), 1e-12 * scale);
  }
}

TEST(Transform, ParsevalAgainstDirectQuadrature) {
  for (double L : {2 * pi, 5.0}) {
    auto g = Grid::make(2, 32, L);
    const auto f = random_field(g, 11, false);
    double direct = 0.0;
    for (double v : f.values()) direct += v * v;
    direct *= g->volume() / static_cast<double>(g->size());
    const double spec = std::pow(sobolev_norm(transform(f), 0.0, Norm::inhomogeneous), 2);
    EXPECT_NEAR(spec / direct, 1.0, 1e-10);
  }
}

TEST(Lambda, UnitModeIsFixed) {
  auto g = Grid::make(2, 16, 2 * pi);
  const auto f = cos_mode(g, 1.0);
  for (double s : {-1.5, -0.5, 0.3, 2.0}) {
    EXPECT_LE(max_diff(inverse_transform(apply_lambda(transform(f), s)), f), 1e-14);
  }
}

TEST(Lambda, InversePowerHalvesSecondMode) {
  auto g = Grid::make(2, 16, 2 * pi);
  auto expect = cos_mode(g, 2.0);
  expect *= 0.5;
  EXPECT_LE(max_diff(inverse_transform(apply_lambda(transform(cos_mode(g, 2.0)), -1.0)), expect), 1e-14);
}

TEST(Lambda, NegativePowerRequiresZeroMean) {
  auto g = Grid::make(1, 16, 2 * pi);
  auto f = cos_mode(g, 1.0);
  for (double& v : f.values()) v += 1.0;
  EXPECT_THROW(apply_lambda(transform(f), -0.5), DomainError);
  const auto pos = apply_lambda(transform(f), 0.5);
  EXPECT_EQ(pos.mean(), Complex(0.0, 0.0));
}

TEST(Lambda, MatchesDirectOracleOnSmallGrid) {
  for (int d : {1, 2}) {
    const oracle::Box box{d, 8, 2 * pi};
    auto g = Grid::make(d, 8, 2 * pi);
    const auto f = random_field(g, 3);
    const auto ref = oracle::lambda(box, f.values(), 0.37);
    const auto fast = inverse_transform(apply_lambda(transform(f), 0.37));
    EXPECT_LE(max_diff(ref, fast.values()), 1e-10);
  }
}

TEST(Oracle, SpectralSuiteAgrees) {
  for (const auto& e : oracle::spectral_suite(8, 2024)) {
    EXPECT_LE(e.max_abs_error, 1e-10) << e.name;
  }
}

TEST(Derivative, GradientOfCosine) {
  auto g = Grid::make(2, 16, 2 * pi);
  const auto grad = inverse_transform(gradient(transform(cos_mode(g, 1.0))));
  const auto expect = RealField::from_function(g, [](std::span<const double> x) { return -std::sin(x[0]); });
  EXPECT_LE(max_diff(grad[0], expect), 1e-14);
  EXPECT_LE(max_abs(grad[1]), 1e-15);
}

TEST(Derivative, DivGradOfSecondMode) {
  auto g = Grid::make(2, 16, 2 * pi);
  auto expect = cos_mode(g, 2.0);
  expect *= -4.0;
  const auto lap = inverse_transform(divergence(gradient(transform(cos_mode(g, 2.0)))));
  EXPECT_LE(max_diff(lap, expect), 1e-13);
}

TEST(Derivative, DivGradIsMinusLambdaSquaredAwayFromNyquist) {
  auto g = Grid::make(2, 32, 2 * pi);
  const auto fh = dealias(transform(random_field(g, 5)));
  const auto lhs = inverse_transform(divergence(gradient(fh)));
  auto rhs = inverse_transform(apply_lambda(fh, 2.0));
  rhs *= -1.0;
  EXPECT_LE(max_diff(lhs, rhs), 1e-12 * max_abs(rhs));
}

TEST(Derivative, MixedPartialMatchesRepeatedPartials) {
  auto g = Grid::make(2, 16, 2 * pi);
  const auto fh = transform(random_field(g, 9));
  const int k[2] = {2, 1};
  const auto mixed = inverse_transform(partial(fh, k));
  const auto seq = inverse_transform(partial(partial(partial(fh, 0), 0), 1));
  EXPECT_LE(max_diff(mixed, seq), 1e-10);
}

TEST(Sobolev, SingleModeValues) {
  auto g = Grid::make(2, 16, 2 * pi);
  const auto c1 = transform(cos_mode(g, 1.0));
  for (double s : {-2.0, -0.5, 0.0, 1.0, 3.3}) {
    EXPECT_NEAR(sobolev_norm(c1, s, Norm::homogeneous), std::sqrt(2.0) * pi, 1e-12);
  }
  EXPECT_NEAR(sobolev_norm(transform(cos_mode(g, 2.0)), 1.0, Norm::homogeneous), 2 * std::sqrt(2.0) * pi, 1e-12);
  EXPECT_NEAR(sobolev_norm(c1, 1.0, Norm::inhomogeneous), 2 * pi, 1e-12);
}

TEST(Sobolev, NegativeHomogeneousRequiresZeroMean) {
  auto g = Grid::make(1, 16, 2 * pi);
  RealField one(g);
  for (double& v : one.values()) v = 1.0;
  EXPECT_THROW(sobolev_norm(transform(one), -1.0, Norm::homogeneous), DomainError);
  EXPECT_NO_THROW(sobolev_norm(transform(one), -1.0, Norm::inhomogeneous));
}

TEST(Sobolev, MatchesDirectModeSum) {
  const oracle::Box box{2, 8, 3.0};
  auto g = Grid::make(2, 8, 3.0);
  const auto f = random_field(g, 21);
  const auto c = oracle::dft(box, f.values());
  const double unit = 2 * pi / 3.0;
  const double s = -0.75;
  const double ref = oracle::weighted_mode_sum(box, c, [&](std::span<const int> m) {
    const double k2 = unit * unit * (m[0] * m[0] + m[1] * m[1]);
    return k2 == 0.0 ? 0.0 : std::pow(k2, s);
  });
  EXPECT_NEAR(std::pow(sobolev_norm(transform(f), s, Norm::homogeneous), 2), ref, 1e-10 * ref);
}

TEST(Dealias, RemovesHighModesKeepsLowModes) {
  auto g = Grid::make(1, 16, 2 * pi);
  auto single = [&](int k) {
    SpectralField f(g);
    const int p[1] = {k};
    const int q[1] = {-k};
    f[g->mode_index(p)] = 0.5;
    f[g->mode_index(q)] = 0.5;
    return f;
  };
  const auto high = dealias(single(7));
  for (std::size_t m = 0; m < g->size(); ++m) EXPECT_EQ(high[m], Complex(0.0, 0.0));
  const auto low = single(1);
  const auto kept = dealias(low);
  for (std::size_t m = 0; m < g->size(); ++m) EXPECT_EQ(kept[m], low[m]);
}

TEST(Dealias, PseudoSpectralProductMatchesTruncatedConvolution) {
  for (int d : {1, 2}) {
    const oracle::Box box{d, 8, 2 * pi};
    auto g = Grid::make(d, 8, 2 * pi);
    const auto f = random_field(g, 31);
    const auto h = random_field(g, 32);
    const auto ff = inverse_transform(dealias(transform(f)));
    const auto hh = inverse_transform(dealias(transform(h)));
    const auto fast = inverse_transform(dealias(transform(multiply(ff, hh))));
    const auto ref = oracle::truncated_product(box, f.values(), h.values());
    EXPECT_LE(max_diff(ref, fast.values()), 1e-12);
  }
}

TEST(Dealias, SingleModeProduct) {
  const oracle::Box box{2, 16, 2 * pi};
  auto g = Grid::make(2, 16, 2 * pi);
  const auto a = RealField::from_function(g, [](std::span<const double> x) { return std::cos(2 * x[0] + x[1]); });
  const auto b = RealField::from_function(g, [](std::span<const double> x) { return std::sin(3 * x[1]); });
  const auto fast = inverse_transform(dealias(transform(multiply(a, b))));
  EXPECT_LE(max_diff(oracle::truncated_product(box, a.values(), b.values()), fast.values()), 1e-12);
}

TEST(ZeroMean, ProjectionRemovesConstantAndIsIdempotent) {
  auto g = Grid::make(2, 16, 2 * pi);
  auto f = cos_mode(g, 1.0);
  for (double& v : f.values()) v += 1.0;
  const auto p = zero_mean_project(transform(f));
  EXPECT_LE(max_diff(inverse_transform(p), cos_mode(g, 1.0)), 1e-14);
  const auto pp = zero_mean_project(p);
  for (std::size_t m = 0; m < g->size(); ++m) EXPECT_EQ(p[m], pp[m]);
  const auto r = transform(random_field(g, 2, false));
  const auto r1 = zero_mean_project(r);
  const auto r2 = zero_mean_project(r1);
  for (std::size_t m = 0; m < g->size(); ++m) EXPECT_EQ(r1[m], r2[m]);
  EXPECT_TRUE(is_zero_mean(r1));
}

TEST(Properties, LambdaComposition) {
  auto g = Grid::make(2, 32, 2 * pi);
  const auto fh = transform(random_field(g, 41));
  for (auto [s1, s2] : {std::pair{0.5, -1.2}, std::pair{-0.3, 1.7}, std::pair{1.1, 0.9}}) {
    const auto a = inverse_transform(apply_lambda(apply_lambda(fh, s1), s2));
    const auto b = inverse_transform(apply_lambda(fh, s1 + s2));
    EXPECT_LE(max_diff(a, b), 1e-12 * std::max(1.0, max_abs(b)));
  }
}

TEST(Properties, LambdaSelfAdjoint) {
  auto g = Grid::make(2, 32, 2 * pi);
  const auto f = random_field(g, 51);
  const auto h = random_field(g, 52);
  for (double s : {-1.0, -0.5, 0.5, 1.5}) {
    const double lhs = inner(inverse_transform(apply_lambda(transform(f), s)), h);
    const double rhs = inner(f, inverse_transform(apply_lambda(transform(h), s)));
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(lhs));
  }
}

TEST(Properties, SpectralInnerMatchesQuadrature) {
  auto g = Grid::make(2, 16, 1.5);
  const auto f = random_field(g, 61);
  const auto h = random_field(g, 62);
  EXPECT_NEAR(spectral_inner(transform(f), transform(h)), inner(f, h), 1e-12);
}

TEST(MultiIndex, WeightsAreMultinomial) {
  const auto ks = multi_indices(2, 3);
  ASSERT_EQ(ks.size(), 4u);
  double total = 0.0;
  for (const auto& mi : ks) total += mi.weight;
  EXPECT_DOUBLE_EQ(total, 8.0);  // 2^3
  EXPECT_EQ(ks[0].k, (std::vector<int>{3, 0}));
  EXPECT_DOUBLE_EQ(ks[1].weight, 3.0);
  EXPECT_EQ(multi_indices(3, 2).size(), 6u);
}

TEST(MultiIndex, DerivativeEnergyEqualsWeightedPartials) {
  auto g = Grid::make(2, 16, 2 * pi);
  const auto fh = transform(random_field(g, 71));
  for (int j : {1, 2, 3}) {
    double direct = 0.0;
    for (const auto& mi : multi_indices(2, j)) {
      const double n = sobolev_norm(apply_lambda(partial(fh, mi.k), 0.25), 0.0, Norm::homogeneous);
      direct += mi.weight * n * n;
    }
    EXPECT_NEAR(derivative_energy(fh, j, 0.25), direct, 1e-10 * direct);
  }
}
