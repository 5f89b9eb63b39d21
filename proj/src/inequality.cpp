#include "erz/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "erz/errors.hpp"
#include "erz/random_fields.hpp"
#include "erz/summation.hpp"

namespace erz {

namespace {

constexpr double kConstantOneTolerance = 1.0 + 1e-10;
constexpr double kAdjointTolerance = 1e-12;

double l2(const SpectralField& f) { return sobolev_norm(f, 0.0, Norm::inhomogeneous); }

void require_nonzero(const SpectralField& f) {
  if (!(l2(f) > 0.0)) throw DomainError("zero field");
}

double hom(const SpectralField& f, double s) { return sobolev_norm(f, s, Norm::homogeneous); }

double ratio_or_nan(double num, double den) {
  return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

RealField sub(RealField a, const RealField& b) {
  a -= b;
  return a;
}

double grad_sup(const SpectralField& f) {
  return max_abs(pointwise_norm(inverse_transform(gradient(f))));
}

struct Tracker {
  RatioReport rep;
  void add(double r, int trial) {
    if (std::isnan(r)) {
      ++rep.skipped;
      return;
    }
    if (rep.argmax_trial < 0 || r > rep.max_ratio) {
      rep.max_ratio = r;
      rep.argmax_trial = trial;
    }
  }
};

Tracker tracker(const std::string& name, const SuiteOptions& opt, std::optional<double> tol) {
  Tracker t;
  t.rep.name = name;
  t.rep.trials = opt.trials;
  t.rep.seed = opt.seed;
  t.rep.tolerance = tol;
  return t;
}

GridPtr suite_grid(const SuiteOptions& opt) {
  return Grid::make(opt.dimension, opt.points_per_axis, 2.0 * std::numbers::pi);
}

RealVector random_vector(const GridPtr& g, int max_index, std::mt19937_64& rng) {
  RealVector v;
  for (int a = 0; a < g->dim(); ++a) v.push_back(inverse_transform(random_trial_field(g, max_index, rng)));
  return v;
}

RatioReport interp_inhom_suite(const SuiteOptions& opt) {
  auto g = suite_grid(opt);
  auto t = tracker("interp_inhom", opt, kConstantOneTolerance);
  for (int i = 0; i < opt.trials; ++i) {
    auto rng = trial_rng(opt.seed, i);
    const double s2 = std::uniform_real_distribution<double>(0.1, 4.0)(rng);
    const double s1 = std::uniform_real_distribution<double>(0.0, s2)(rng);
    t.add(check_interp_inhom(random_trial_field(g, g->points(), rng), s1, s2), i);
  }
  return t.rep;
}

RatioReport interp_homog_suite(const SuiteOptions& opt) {
  auto g = suite_grid(opt);
  auto t = tracker("interp_homog", opt, kConstantOneTolerance);
  for (int i = 0; i < opt.trials; ++i) {
    auto rng = trial_rng(opt.seed, i);
    std::uniform_real_distribution<double> gap(0.1, 2.0);
    const double s = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    const double s1 = s - gap(rng);
    const double s2 = s + gap(rng);
    t.add(check_interp_homog(random_trial_field(g, g->points(), rng), s1, s, s2), i);
  }
  return t.rep;
}

RatioReport gn_suite(const SuiteOptions& opt) {
  auto g = suite_grid(opt);
  auto t = tracker("gn_derivative", opt, kConstantOneTolerance);
  for (int i = 0; i < opt.trials; ++i) {
    auto rng = trial_rng(opt.seed, i);
    const int l = std::uniform_int_distribution<int>(1, 6)(rng);
    const int j = std::uniform_int_distribution<int>(0, l)(rng);
    t.add(check_gn_derivative(random_trial_field(g, g->points(), rng), j, l), i);
  }
  return t.rep;
}

std::vector<RatioReport> moser_suite(const SuiteOptions& opt) {
  auto g = suite_grid(opt);
  const std::string k = std::to_string(opt.moser_k);
  auto p = tracker("moser_product_k" + k, opt, std::nullopt);
  auto o = tracker("moser_one_sided_k" + k, opt, std::nullopt);
  auto w = tracker("moser_two_sided_k" + k, opt, std::nullopt);
  const int band = g->points() / 4;
  for (int i = 0; i < opt.trials; ++i) {
    auto rng = trial_rng(opt.seed, i);
    std::uniform_real_distribution<double> shift(-1.0, 1.0);
    RealField f = inverse_transform(random_trial_field(g, band, rng));
    RealField h = inverse_transform(random_trial_field(g, band, rng));
    const double cf = shift(rng) * max_abs(f);
    const double ch = shift(rng) * max_abs(h);
    for (auto& x : f.values()) x += cf;
    for (auto& x : h.values()) x += ch;
    const auto r = check_moser(f, h, opt.moser_k);
    p.add(r.product, i);
    o.add(r.one_sided, i);
    w.add(r.two_sided, i);
  }
  return {p.rep, o.rep, w.rep};
}

RatioReport adjoint_suite(const SuiteOptions& opt) {
  auto g = suite_grid(opt);
  auto t = tracker("adjoint", opt, kAdjointTolerance);
  const int d = g->dim();
  for (int i = 0; i < opt.trials; ++i) {
    auto rng = trial_rng(opt.seed, i);
    const double lo = std::max(d - 2.0, 0.0);
    const double alpha = std::uniform_real_distribution<double>(lo + 0.05, d - 0.05)(rng);
    State s = zero_state(g, PhysicsParams{alpha, 1.0, 1.0, 1.0});
    s.h = inverse_transform(random_trial_field(g, g->points(), rng));
    s.u = random_vector(g, g->points(), rng);
    double worst = 0.0;
    for (int k = 0; k <= 4; ++k) {
      const auto [a, b] = adjoint_cancellation(s, k);
      const double scale = std::max(std::abs(a), std::abs(b));
      if (scale > 0.0) worst = std::max(worst, std::abs(a - b) / scale);
    }
    t.add(worst, i);
  }
  return t.rep;
}

}  // namespace

double check_interp_inhom(const SpectralField& f, double s1, double s2) {
  if (!(s1 >= 0.0 && s1 <= s2)) throw DomainError("need 0 <= s1 <= s2");
  require_nonzero(f);
  if (s2 == 0.0) return 1.0;
  const double lhs = sobolev_norm(f, s1, Norm::inhomogeneous);
  const double rhs = std::pow(l2(f), (s2 - s1) / s2) *
                     std::pow(sobolev_norm(f, s2, Norm::inhomogeneous), s1 / s2);
  return lhs / rhs;
}

double check_interp_homog(const SpectralField& f, double s1, double s, double s2) {
  if (!(s1 < s && s < s2)) throw DomainError("need s1 < s < s2");
  require_nonzero(f);
  if (!is_zero_mean(f)) throw DomainError("field has nonzero mean");
  const double th = (s2 - s) / (s2 - s1);
  return hom(f, s) / (std::pow(hom(f, s1), th) * std::pow(hom(f, s2), 1.0 - th));
}

double check_gn_derivative(const SpectralField& f, int j, int l) {
  if (!(j >= 0 && j <= l)) throw DomainError("need 0 <= j <= l");
  require_nonzero(f);
  if (l == 0) return 1.0;
  const double lhs = j == 0 ? l2(f) : hom(f, j);
  const double q = static_cast<double>(j) / l;
  return lhs / (std::pow(hom(f, l), q) * std::pow(l2(f), 1.0 - q));
}

double commutator_ratio(const RealVector& v, const RealField& f, double s, double eps) {
  const int d = f.grid().dim();
  const SpectralField fh = transform(f);
  const RealVector df = inverse_transform(gradient(fh));
  const RealVector dLf = inverse_transform(gradient(apply_lambda(fh, s)));
  RealField adv(f.grid_ptr());
  RealField adv_l(f.grid_ptr());
  for (int a = 0; a < d; ++a) {
    adv += multiply(v[a], df[a]);
    adv_l += multiply(v[a], dLf[a]);
  }
  const RealField comm = sub(inverse_transform(apply_lambda(transform(adv), s)), adv_l);
  const double den = sobolev_norm(transform(v), 0.5 * d + 1.0 + s + eps, Norm::inhomogeneous) *
                     sobolev_norm(fh, s, Norm::inhomogeneous);
  return den > 0.0 ? l2_norm(comm) / den : 0.0;
}

MoserRatios check_moser(const RealField& f, const RealField& g, int k) {
  if (k < 1) throw DomainError("need k >= 1");
  const int d = f.grid().dim();
  const SpectralField fh = transform(f);
  const SpectralField gh = transform(g);
  const SpectralField fgh = transform(multiply(f, g));
  CompensatedSum prod, one, two;
  for (const auto& mi : multi_indices(d, k)) {
    const RealField dfg = inverse_transform(partial(fgh, mi.k));
    const RealField dkf = inverse_transform(partial(fh, mi.k));
    const RealField dkg = inverse_transform(partial(gh, mi.k));
    const RealField r1 = sub(dfg, multiply(dkf, g));
    const RealField r2 = sub(r1, multiply(f, dkg));
    prod += mi.weight * inner(dfg, dfg);
    one += mi.weight * inner(r1, r1);
    two += mi.weight * inner(r2, r2);
  }
  const double nk_f = std::sqrt(derivative_energy(fh, k, 0.0));
  const double nk_g = std::sqrt(derivative_energy(gh, k, 0.0));
  const double nk1_f = std::sqrt(derivative_energy(fh, k - 1, 0.0));
  const double nk1_g = std::sqrt(derivative_energy(gh, k - 1, 0.0));
  const double f_inf = max_abs(f);
  const double g_inf = max_abs(g);
  const double df_inf = grad_sup(fh);
  const double dg_inf = grad_sup(gh);
  MoserRatios r;
  r.lhs = {std::sqrt(prod.value()), std::sqrt(one.value()), std::sqrt(two.value())};
  r.rhs = {f_inf * nk_g + g_inf * nk_f, f_inf * nk_g + dg_inf * nk1_f,
           df_inf * nk1_g + dg_inf * nk1_f};
  r.product = ratio_or_nan(r.lhs[0], r.rhs[0]);
  r.one_sided = ratio_or_nan(r.lhs[1], r.rhs[1]);
  r.two_sided = ratio_or_nan(r.lhs[2], r.rhs[2]);
  return r;
}

AdjointPair adjoint_cancellation(const State& s, int k) {
  if (k < 0) throw DomainError("need k >= 0");
  const int d = s.grid()->dim();
  const double sg = 0.5 * (d - s.params.alpha);
  const SpectralField hh = transform(s.h);
  const SpectralVector uh = transform(s.u);
  CompensatedSum a, b;
  for (const auto& mi : multi_indices(d, k)) {
    const SpectralField rk = partial(hh, mi.k);
    SpectralVector uk;
    for (const auto& c : uh) uk.push_back(apply_lambda(partial(c, mi.k), sg));
    const RealVector lhs = inverse_transform(apply_lambda(gradient(rk), -sg));
    a += mi.weight * inner(lhs, inverse_transform(uk));
    const RealField rhs = inverse_transform(apply_lambda(divergence(uk), -sg));
    b += -mi.weight * inner(inverse_transform(rk), rhs);
  }
  return {a.value(), b.value()};
}

std::mt19937_64 trial_rng(std::uint64_t seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(trial)};
  return std::mt19937_64(seq);
}

SpectralField random_trial_field(const GridPtr& grid, int max_index, std::mt19937_64& rng) {
  static constexpr double kWidths[] = {2.0, 4.0, 8.0};
  const double w = kWidths[std::uniform_int_distribution<int>(0, 2)(rng)];
  return random_band_limited(grid, w, max_index, rng);
}

RatioReport estimate_commutator_constant(const SuiteOptions& opt) {
  if (opt.commutator_s < 0.0) throw DomainError("need s >= 0");
  if (!(opt.commutator_eps > 0.0)) throw DomainError("need eps > 0");
  auto g = suite_grid(opt);
  auto t = tracker("commutator", opt, std::nullopt);
  const int band = g->points() / 4;
  for (int i = 0; i < opt.trials; ++i) {
    auto rng = trial_rng(opt.seed, i);
    const RealVector v = random_vector(g, band, rng);
    const RealField f = inverse_transform(random_trial_field(g, band, rng));
    t.add(commutator_ratio(v, f, opt.commutator_s, opt.commutator_eps), i);
  }
  return t.rep;
}

std::vector<std::string> suite_names() {
  return {"interp_inhom", "interp_homog", "gn_derivative", "commutator", "moser", "adjoint",
          "all"};
}

std::vector<RatioReport> run_suite(const std::string& name, const SuiteOptions& opt) {
  if (opt.trials < 1) throw ConfigError("trials", "must be >= 1");
  if (name == "interp_inhom") return {interp_inhom_suite(opt)};
  if (name == "interp_homog") return {interp_homog_suite(opt)};
  if (name == "gn_derivative") return {gn_suite(opt)};
  if (name == "commutator") return {estimate_commutator_constant(opt)};
  if (name == "moser") return moser_suite(opt);
  if (name == "adjoint") return {adjoint_suite(opt)};
  if (name == "all") {
    std::vector<RatioReport> out;
    for (const auto& n : suite_names()) {
      if (n == "all") continue;
      auto r = run_suite(n, opt);
      out.insert(out.end(), r.begin(), r.end());
    }
    return out;
  }
  throw ConfigError("suite", "unknown suite '" + name + "'");
}

}  // namespace erz
