#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "erz/dft_oracle.hpp"
#include "erz/dynamics.hpp"
#include "erz/errors.hpp"

using namespace erz;
using std::numbers::pi;

namespace {

Mat2 dense_expm(const Mat2& a) { return oracle::expm_taylor(a); }

double mat_diff(const Mat2& a, const Mat2& b) {
  double e = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) e = std::max(e, std::abs(a[i][j] - b[i][j]));
  return e;
}

State random_state(const GridPtr& g, const PhysicsParams& p, double amp, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  State s = zero_state(g, p);
  auto fill = [&](RealField& f, bool zero_mean) {
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = nd(rng);
    auto c = dealias(transform(f));
    for (std::size_t m = 0; m < g->size(); ++m) c[m] *= std::exp(-g->kappa_norm(m) * g->kappa_norm(m) / 16.0);
    if (zero_mean) c = zero_mean_project(c);
    f = inverse_transform(c);
    const double mx = max_abs(f);
    f *= amp / mx;
  };
  fill(s.h, true);
  for (auto& c : s.u) fill(c, false);
  return s;
}

double max_diff(const RealField& a, const RealField& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace

TEST(RieszForce, UnitModeGivesSine) {
  auto g = Grid::make(2, 16, 2 * pi);
  PhysicsParams p{1.0, 1.0, 1.0, 1.0};
  for (double k : {1.0, 2.0}) {
    const auto h = RealField::from_function(g, [k](std::span<const double> x) { return std::cos(k * x[0]); });
    const auto f = inverse_transform(riesz_force(transform(h), p));
    const auto expect = RealField::from_function(g, [k](std::span<const double> x) { return std::sin(k * x[0]); });
    EXPECT_LE(max_diff(f[0], expect), 1e-14);
    EXPECT_LE(max_abs(f[1]), 1e-15);
  }
}

TEST(RieszForce, RejectsNonZeroMean) {
  auto g = Grid::make(2, 8, 2 * pi);
  RealField h(g);
  for (double& v : h.values()) v = 0.1;
  EXPECT_THROW(riesz_force(transform(h), PhysicsParams{}), DomainError);
}

TEST(RieszForce, MatchesComposition) {
  auto g = Grid::make(2, 32, 2 * pi);
  PhysicsParams p{0.7, 1.0, 2.5, 1.0};
  const auto s = random_state(g, p, 0.1, 3);
  const auto hh = transform(s.h);
  const auto f = riesz_force(hh, p);
  const auto ref = gradient(apply_lambda(hh, p.alpha - 2));
  for (int a = 0; a < 2; ++a) {
    auto r = inverse_transform(ref[a]);
    r *= -p.lambda;
    EXPECT_LE(max_diff(inverse_transform(f[a]), r), 1e-12 * std::max(1.0, max_abs(r)));
  }
}

TEST(Rhs, ZeroStateGivesZero) {
  auto g = Grid::make(2, 16, 2 * pi);
  const auto r = compute_rhs(zero_state(g, PhysicsParams{}));
  EXPECT_EQ(max_abs(r.dh), 0.0);
  for (const auto& c : r.du) EXPECT_EQ(max_abs(c), 0.0);
}

TEST(Rhs, ConstantVelocityIsDamped) {
  auto g = Grid::make(2, 16, 2 * pi);
  PhysicsParams p{1.0, 0.7, 1.0, 1.0};
  State s = zero_state(g, p);
  for (double& v : s.u[0].values()) v = 0.3;
  for (double& v : s.u[1].values()) v = -1.2;
  const auto r = compute_rhs(s);
  EXPECT_LE(max_abs(r.dh), 1e-16);
  for (std::size_t i = 0; i < g->size(); ++i) {
    EXPECT_NEAR(r.du[0][i], -0.7 * 0.3, 1e-15);
    EXPECT_NEAR(r.du[1][i], 0.7 * 1.2, 1e-15);
  }
}

TEST(Rhs, SingleSmallModeMatchesLinearOperator) {
  auto g = Grid::make(2, 16, 2 * pi);
  PhysicsParams p{1.0, 1.0, 1.0, 1.0};
  const double eps = 1e-8;
  State s = zero_state(g, p);
  s.h = RealField::from_function(g, [&](std::span<const double> x) { return eps * std::cos(x[0] + 2 * x[1]); });
  s.u[0] = RealField::from_function(g, [&](std::span<const double> x) { return eps * std::sin(x[0] + 2 * x[1]); });
  const auto w = to_spectral(s);
  const auto r = full_rhs(w, p, RhsOptions{}, 0.0);
  const int m[2] = {1, 2};
  const std::size_t idx = g->mode_index(m);
  const double kn = g->deriv_norm(idx);
  const auto mat = mode_matrix(kn, g->kappa_norm(idx), 2, p);
  Complex along = (g->deriv_kappa(idx, 0) * w.u[0][idx] + g->deriv_kappa(idx, 1) * w.u[1][idx]) / kn;
  const Complex dh = mat[0][0] * w.h[idx] + mat[0][1] * along;
  const Complex da = mat[1][0] * w.h[idx] + mat[1][1] * along;
  const Complex ra = (g->deriv_kappa(idx, 0) * r.u[0][idx] + g->deriv_kappa(idx, 1) * r.u[1][idx]) / kn;
  EXPECT_LE(std::abs(r.h[idx] - dh), 1e-18);
  EXPECT_LE(std::abs(ra - da), 1e-18);
}

TEST(Rhs, RemainderIsQuadraticInAmplitude) {
  auto g = Grid::make(2, 32, 2 * pi);
  PhysicsParams p{1.0, 1.0, 1.0, 1.0};
  std::vector<double> errs;
  for (double eps : {1e-8, 5e-9, 2.5e-9}) {
    const auto w = to_spectral(random_state(g, p, eps, 17));
    auto r = full_rhs(w, p, RhsOptions{}, 0.0);
    r.axpy(-1.0, linear_rhs(w, p));
    errs.push_back(sobolev_norm(r.h, 0.0, Norm::inhomogeneous) + sobolev_norm(r.u, 0.0, Norm::inhomogeneous));
  }
  for (int i = 0; i + 1 < 3; ++i) EXPECT_NEAR(std::log2(errs[i] / errs[i + 1]), 2.0, 0.05);
}

TEST(Rhs, MomentumObeysDampingOde) {
  auto g = Grid::make(2, 32, 2 * pi);
  PhysicsParams p{1.3, 0.8, 1.4, 1.0};
  State s = random_state(g, p, 0.2, 23);
  for (double& v : s.u[0].values()) v += 0.4;
  const auto r = compute_rhs(s);
  for (int a = 0; a < 2; ++a) {
    RealField rho(g);
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = p.background + s.h[i];
    const double mom = inner(rho, s.u[a]);
    const double dmom = inner(r.dh, s.u[a]) + inner(rho, r.du[a]);
    EXPECT_NEAR(dmom, -p.gamma * mom, 1e-12 * (std::abs(mom) + 1.0));
  }
  EXPECT_EQ(full_rhs(to_spectral(s), p, RhsOptions{}, 0.0).h.mean(), Complex(0.0, 0.0));
  EXPECT_LE(std::abs(transform(r.dh).mean()), 1e-16);
}

TEST(Rhs, DensityFloorRaisesBlowUp) {
  auto g = Grid::make(1, 16, 2 * pi);
  State s = zero_state(g, PhysicsParams{1.0 / 2, 1, 1, 1});
  s.h = RealField::from_function(g, [](std::span<const double> x) { return 1.2 * std::cos(x[0]); });
  s.t = 3.5;
  try {
    compute_rhs(s);
    FAIL() << "expected blow-up";
  } catch (const BlowUpError& e) {
    EXPECT_DOUBLE_EQ(e.time(), 3.5);
    EXPECT_NEAR(e.min_density(), -0.2, 1e-12);
  }
}

TEST(Eigenvalues, DoubleRootAtZeroDiscriminant) {
  const auto [a, b] = linear_eigenvalues(0.25, 1.0, 2, 1.0, 1.0);
  EXPECT_NEAR(a.real(), -0.5, 1e-15);
  EXPECT_NEAR(b.real(), -0.5, 1e-15);
  EXPECT_EQ(a.imag(), 0.0);
}

TEST(Eigenvalues, ComplexPairForUnitMode) {
  const auto [a, b] = linear_eigenvalues(1.0, 1.0, 2, 1.0, 1.0);
  EXPECT_NEAR(a.real(), -0.5, 1e-15);
  EXPECT_NEAR(b.real(), -0.5, 1e-15);
  EXPECT_NEAR(a.imag(), -std::sqrt(3.0) / 2, 1e-15);
  EXPECT_NEAR(b.imag(), std::sqrt(3.0) / 2, 1e-15);
}

TEST(Eigenvalues, VietaIdentities) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  for (int t = 0; t < 200; ++t) {
    const int d = 1 + t % 3;
    const double alpha = std::max(d - 2.0, 0.0) + 0.01 + (t % 7) / 7.0 * 1.9;
    const double kappa = u(rng);
    const double gamma = u(rng);
    const double lam = u(rng);
    const auto [a, b] = linear_eigenvalues(kappa, alpha, d, gamma, lam);
    const double prod = lam * std::pow(kappa, alpha - d + 2);
    EXPECT_LE(std::abs(a + b + gamma), 1e-14 * std::max(1.0, gamma));
    EXPECT_LE(std::abs(a * b - prod), 1e-14 * std::max(1.0, prod));
  }
}

TEST(Propagator, ModeMatrixTraceAndDeterminant) {
  PhysicsParams p{0.8, 1.3, 0.6, 1.0};
  const auto m = mode_matrix(2.0, 2.0, 2, p);
  EXPECT_NEAR((m[0][0] + m[1][1]).real(), -1.3, 1e-15);
  const Complex det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  EXPECT_NEAR(det.real(), 0.6 * std::pow(2.0, 0.8), 1e-12);
  EXPECT_NEAR(det.imag(), 0.0, 1e-15);
}

TEST(Propagator, ZeroStepIsIdentity) {
  auto g = Grid::make(2, 16, 2 * pi);
  const PropagatorTable t(g, PhysicsParams{}, 0.0);
  for (std::size_t m = 0; m < g->size(); ++m) {
    const auto& e = t.matrix(m);
    EXPECT_EQ(e[0][0], Complex(1.0, 0.0));
    EXPECT_EQ(e[1][1], Complex(1.0, 0.0));
    EXPECT_EQ(e[0][1], Complex(0.0, 0.0));
    EXPECT_EQ(e[1][0], Complex(0.0, 0.0));
  }
  EXPECT_EQ(t.transverse_decay(), 1.0);
}

TEST(Propagator, TransverseModeDecays) {
  auto g = Grid::make(2, 16, 2 * pi);
  State s = zero_state(g, PhysicsParams{});
  s.u[1] = RealField::from_function(g, [](std::span<const double> x) { return std::cos(x[0]); });
  const auto out = build_propagator(g, PhysicsParams{}, 1.0).apply(to_spectral(s));
  const auto u1 = inverse_transform(out.u[1]);
  auto expect = s.u[1];
  expect *= std::exp(-1.0);
  EXPECT_LE(max_diff(u1, expect), 1e-15);
  EXPECT_LE(max_abs(inverse_transform(out.h)), 1e-16);
}

TEST(Propagator, ClosedFormMatchesDenseExponential) {
  for (double alpha : {0.3, 1.0, 1.7}) {
    for (double dt : {1e-3, 0.1, 0.5, 2.0}) {
      for (double k : {0.25, 1.0, 3.0, 30.0}) {
        PhysicsParams p{alpha, 1.0, 1.0, 1.0};
        Mat2 gen = mode_matrix(k, k, 2, p);
        for (auto& r : gen)
          for (auto& v : r) v *= dt;
        EXPECT_LE(mat_diff(expm2(gen), dense_expm(gen)), 1e-12) << alpha << " " << dt << " " << k;
      }
    }
  }
}

TEST(Propagator, ClosedFormNearDoubleRoot) {
  PhysicsParams p{1.0, 1.0, 1.0, 1.0};
  for (double k : {0.25, 0.25 + 1e-9, 0.25 - 1e-7}) {
    Mat2 gen = mode_matrix(k, k, 2, p);
    for (auto& r : gen)
      for (auto& v : r) v *= 0.7;
    EXPECT_LE(mat_diff(expm2(gen), dense_expm(gen)), 1e-13);
  }
}

TEST(Propagator, GroupProperty) {
  auto g = Grid::make(2, 16, 2 * pi);
  PhysicsParams p{1.2, 0.9, 1.1, 1.0};
  const PropagatorTable a(g, p, 0.3);
  const PropagatorTable b(g, p, 0.45);
  const PropagatorTable ab(g, p, 0.75);
  for (std::size_t m = 0; m < g->size(); ++m) {
    const auto& x = a.matrix(m);
    const auto& y = b.matrix(m);
    Mat2 z{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) z[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
    EXPECT_LE(mat_diff(z, ab.matrix(m)), 1e-12);
  }
  EXPECT_NEAR(a.transverse_decay() * b.transverse_decay(), ab.transverse_decay(), 1e-15);
}
