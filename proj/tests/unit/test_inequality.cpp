#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "erz/errors.hpp"
#include "erz/inequality.hpp"

using namespace erz;

namespace {

constexpr double kPi = std::numbers::pi;

GridPtr box(int d, int n = 32) { return Grid::make(d, n, 2 * kPi); }

template <class F>
SpectralField spec(const GridPtr& g, F f) {
  return transform(RealField::from_function(g, f));
}

template <class F>
RealField real(const GridPtr& g, F f) {
  return RealField::from_function(g, f);
}

SuiteOptions small(int trials, std::uint64_t seed = 1) {
  SuiteOptions o;
  o.points_per_axis = 16;
  o.trials = trials;
  o.seed = seed;
  return o;
}

}  // namespace

TEST(Interp, InhomogeneousEqualityAndIdentityCases) {
  auto g = box(2);
  const auto f = spec(g, [](auto x) { return std::cos(3 * x[0] + 2 * x[1]); });
  EXPECT_NEAR(check_interp_inhom(f, 1.3, 3.7), 1.0, 1e-12);
  EXPECT_NEAR(check_interp_inhom(f, 0.0, 2.0), 1.0, 1e-12);
  std::mt19937_64 rng(5);
  const auto r = random_trial_field(g, 32, rng);
  EXPECT_NEAR(check_interp_inhom(r, 0.0, 2.5), 1.0, 1e-12);
  EXPECT_THROW(check_interp_inhom(SpectralField(g), 1.0, 2.0), DomainError);
  EXPECT_THROW(check_interp_inhom(f, 2.0, 1.0), DomainError);
}

TEST(Interp, InhomogeneousRandomFieldsAtFixedOrders) {
  auto g = box(2);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    auto rng = trial_rng(11, i);
    worst = std::max(worst, check_interp_inhom(random_trial_field(g, 32, rng), 1.3, 3.7));
  }
  EXPECT_LE(worst, 1.0 + 1e-10);
  EXPECT_LT(worst, 1.0);
}

TEST(Interp, HomogeneousTwoModeClosedForm) {
  auto g = box(2);
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{0.3, 2.0}, std::pair{5.0, 0.1}}) {
    const auto f = spec(g, [&](auto x) { return a * std::cos(x[0]) + b * std::cos(2 * x[0]); });
    const double expect = std::sqrt(a * a + b * b) /
                          (std::pow(a * a + b * b / 4, 0.25) * std::pow(a * a + 4 * b * b, 0.25));
    const double r = check_interp_homog(f, -1.0, 0.0, 1.0);
    EXPECT_NEAR(r, expect, 1e-13);
    EXPECT_LT(r, 1.0);
  }
  const auto one = spec(g, [](auto x) { return std::sin(4 * x[1]); });
  EXPECT_NEAR(check_interp_homog(one, -1.7, 0.2, 1.9), 1.0, 1e-12);
  const auto meaned = spec(g, [](auto x) { return 1.0 + std::cos(x[0]); });
  EXPECT_THROW(check_interp_homog(meaned, -1.0, 0.0, 1.0), DomainError);
  EXPECT_THROW(check_interp_homog(one, 1.0, 0.0, 2.0), DomainError);
}

TEST(Interp, GagliardoNirenbergCases) {
  auto g = box(2);
  const auto f = spec(g, [](auto x) { return std::cos(2 * x[0] - x[1]); });
  EXPECT_NEAR(check_gn_derivative(f, 2, 5), 1.0, 1e-12);
  std::mt19937_64 rng(8);
  const auto r = random_trial_field(g, 32, rng);
  EXPECT_NEAR(check_gn_derivative(r, 0, 4), 1.0, 1e-12);
  EXPECT_NEAR(check_gn_derivative(r, 4, 4), 1.0, 1e-12);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    auto t = trial_rng(9, i);
    worst = std::max(worst, check_gn_derivative(random_trial_field(g, 32, t), 2, 5));
  }
  EXPECT_LE(worst, 1.0 + 1e-10);
  EXPECT_THROW(check_gn_derivative(r, 3, 2), DomainError);
}

TEST(Commutator, VanishesForConstantVelocityOrConstantField) {
  auto g = box(2);
  std::mt19937_64 rng(2);
  const RealField f = inverse_transform(random_trial_field(g, 8, rng));
  RealVector v{real(g, [](auto) { return 0.7; }), real(g, [](auto) { return -1.2; })};
  EXPECT_LT(commutator_ratio(v, f, 1.0, 0.1), 1e-14);
  RealVector w{inverse_transform(random_trial_field(g, 8, rng)),
               inverse_transform(random_trial_field(g, 8, rng))};
  EXPECT_EQ(commutator_ratio(w, RealField(g), 1.0, 0.1), 0.0);
  EXPECT_LT(commutator_ratio(w, real(g, [](auto) { return 3.0; }), 1.0, 0.1), 1e-14);
  EXPECT_GT(commutator_ratio(w, f, 1.0, 0.1), 0.0);
}

TEST(Commutator, SeededReportIsReproducibleAndSaturates) {
  SuiteOptions o;
  o.trials = 500;
  o.seed = 42;
  const auto a = estimate_commutator_constant(o);
  const auto b = estimate_commutator_constant(o);
  EXPECT_TRUE(std::isfinite(a.max_ratio));
  EXPECT_GT(a.max_ratio, 0.0);
  EXPECT_EQ(a.max_ratio, b.max_ratio);
  EXPECT_EQ(a.argmax_trial, b.argmax_trial);
  EXPECT_FALSE(a.tolerance.has_value());
  o.trials = 2000;
  const auto c = estimate_commutator_constant(o);
  EXPECT_GE(c.max_ratio, a.max_ratio);
  EXPECT_LE(c.max_ratio, 2.0 * a.max_ratio);
}

TEST(Moser, SingleModeHandValues) {
  auto g = box(2);
  const auto f = real(g, [](auto x) { return std::cos(x[0]); });
  const auto r = check_moser(f, f, 3);
  EXPECT_NEAR(r.product, 2.0, 1e-12);
  EXPECT_NEAR(r.one_sided, 1.75, 1e-12);
  EXPECT_NEAR(r.two_sided, 1.5, 1e-12);
}

TEST(Moser, ConstantFactorKillsOneSidedRemainder) {
  auto g = box(2);
  std::mt19937_64 rng(4);
  const RealField f = inverse_transform(random_trial_field(g, 8, rng));
  const auto r = check_moser(f, real(g, [](auto) { return 2.5; }), 3);
  EXPECT_LT(r.lhs[1], 1e-12 * r.lhs[0]);
  EXPECT_GT(r.lhs[0], 0.0);
  EXPECT_TRUE(std::isnan(r.one_sided));
  EXPECT_NEAR(r.product, 1.0, 1e-12);
}

TEST(Moser, SuiteIsFiniteAndSeedStable) {
  auto o = small(200, 3);
  o.points_per_axis = 32;
  const auto a = run_suite("moser", o);
  const auto b = run_suite("moser", o);
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_TRUE(std::isfinite(a[i].max_ratio));
    EXPECT_GT(a[i].max_ratio, 0.0);
    EXPECT_EQ(a[i].max_ratio, b[i].max_ratio);
  }
  o.trials = 800;
  const auto c = run_suite("moser", o);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LE(c[i].max_ratio, 2.0 * a[i].max_ratio);
}

TEST(Adjoint, ZeroState) {
  const State s = zero_state(box(2, 16), PhysicsParams{});
  const auto [a, b] = adjoint_cancellation(s, 2);
  EXPECT_EQ(a, 0.0);
  EXPECT_EQ(b, 0.0);
}

TEST(Adjoint, AlignedSingleModeClosedForm) {
  auto g = box(2);
  const double A = 0.3;
  const double B = -0.7;
  for (int p : {1, 2, 3}) {
    State s = zero_state(g, PhysicsParams{1.0, 1, 1, 1});
    s.h = real(g, [&](auto x) { return A * std::cos(p * x[0]); });
    s.u[0] = real(g, [&](auto x) { return B * std::sin(p * x[0]); });
    for (int k = 0; k <= 4; ++k) {
      const auto [a, b] = adjoint_cancellation(s, k);
      const double expect = -2 * kPi * kPi * A * B * std::pow(p, 2 * k + 1);
      EXPECT_NEAR(a, expect, 1e-14 * std::abs(expect) * 10);
      EXPECT_NEAR(a, b, 1e-14 * std::abs(expect));
    }
  }
}

TEST(Adjoint, RandomStatesAgree) {
  auto g = box(2);
  for (int i = 0; i < 20; ++i) {
    auto rng = trial_rng(77, i);
    State s = zero_state(g, PhysicsParams{0.6 + 0.05 * i, 1, 1, 1});
    s.h = inverse_transform(random_trial_field(g, 32, rng));
    s.u[0] = inverse_transform(random_trial_field(g, 32, rng));
    s.u[1] = inverse_transform(random_trial_field(g, 32, rng));
    for (int k = 0; k <= 4; ++k) {
      const auto [a, b] = adjoint_cancellation(s, k);
      EXPECT_LE(std::abs(a - b), 1e-12 * (std::abs(a) + 1));
    }
  }
}

TEST(Suites, ConstantOneSuitesPassAndAreDeterministic) {
  for (const char* name : {"interp_inhom", "interp_homog", "gn_derivative", "adjoint"}) {
    const auto a = run_suite(name, small(200));
    ASSERT_EQ(a.size(), 1u) << name;
    EXPECT_TRUE(a[0].passed()) << name << " " << a[0].max_ratio;
    EXPECT_EQ(a[0].skipped, 0);
    EXPECT_GE(a[0].argmax_trial, 0);
    EXPECT_EQ(run_suite(name, small(200))[0].max_ratio, a[0].max_ratio);
  }
  const auto d1 = run_suite("interp_homog", [] {
    auto o = small(100);
    o.dimension = 1;
    return o;
  }());
  EXPECT_TRUE(d1[0].passed());
}

TEST(Suites, ArgmaxTrialReproduces) {
  const auto o = small(100, 5);
  const auto rep = run_suite("gn_derivative", o)[0];
  auto rng = trial_rng(o.seed, rep.argmax_trial);
  const int l = std::uniform_int_distribution<int>(1, 6)(rng);
  const int j = std::uniform_int_distribution<int>(0, l)(rng);
  auto g = Grid::make(o.dimension, o.points_per_axis, 2 * kPi);
  EXPECT_EQ(check_gn_derivative(random_trial_field(g, g->points(), rng), j, l), rep.max_ratio);
}

TEST(Suites, UnknownNameAndAll) {
  EXPECT_THROW(run_suite("nope", small(1)), ConfigError);
  EXPECT_THROW(run_suite("adjoint", small(0)), ConfigError);
  EXPECT_EQ(run_suite("all", small(5)).size(), 8u);
}
