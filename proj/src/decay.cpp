#include "erz/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "erz/errors.hpp"
#include "erz/summation.hpp"

namespace erz {

namespace {

constexpr double kBoundSlack = 1e-14;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void check_alpha_window(int d, double alpha) {
  if (d < 2) throw DomainError("d=" + std::to_string(d) + " below the bound d >= 2");
  if (!(alpha > d - 2.0 && alpha < d)) {
    throw DomainError("alpha=" + fmt(alpha) + " outside the window d-2 < alpha < d");
  }
}

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
};

Line least_squares(std::span<const double> x, std::span<const double> z) {
  const double n = static_cast<double>(x.size());
  CompensatedSum sx, sz;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sz += z[i];
  }
  const double mx = sx.value() / n;
  const double mz = sz.value() / n;
  CompensatedSum sxx, sxz;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxz += (x[i] - mx) * (z[i] - mz);
  }
  if (!(sxx.value() > 0.0)) throw FitError("fit window has no spread in t");
  Line l;
  l.slope = sxz.value() / sxx.value();
  l.intercept = mz - l.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    l.residual = std::max(l.residual, std::abs(z[i] - (l.intercept + l.slope * x[i])));
  }
  return l;
}

double abscissa(double t, FitKind kind) {
  return kind == FitKind::exponential ? t : std::log1p(t);
}

}  // namespace

double predicted_eta(double s, int d, double alpha) {
  check_alpha_window(d, alpha);
  const double sg = 0.5 * (d - alpha);
  const double lo = 1.0 - sg;
  const double hi = 0.5 * alpha;
  if (s < lo - kBoundSlack) {
    throw DomainError("s=" + fmt(s) + " below the lower bound 1-(d-alpha)/2=" + fmt(lo));
  }
  if (s > hi + kBoundSlack) {
    throw DomainError("s=" + fmt(s) + " above the upper bound alpha/2=" + fmt(hi));
  }
  return std::min(2.0 * s / (d - alpha), (s + d - alpha - 1.0) / (1.0 - sg));
}

double predicted_weak_rate(double s, int d, double alpha) {
  if (!(alpha > 0.0 && alpha < d)) {
    throw DomainError("alpha=" + fmt(alpha) + " outside the window 0 < alpha < d");
  }
  if (!(s > 0.0)) throw DomainError("s=" + fmt(s) + " below the bound s > 0");
  if (s > 0.5 * alpha + kBoundSlack) {
    throw DomainError("s=" + fmt(s) + " above the upper bound alpha/2=" + fmt(0.5 * alpha));
  }
  return s / (1.0 + 0.5 * (d - alpha));
}

double spectral_gap(int d, double alpha, double gamma, double lambda, double kappa_min,
                    double background) {
  if (!(kappa_min > 0.0)) throw DomainError("kappa_min=" + fmt(kappa_min) + " must be > 0");
  const double p = background * lambda * std::pow(kappa_min, alpha - d + 2.0);
  const double disc = gamma * gamma - 4.0 * p;
  if (disc <= 0.0) return 0.5 * gamma;
  // Smaller root written without cancellation.
  return 2.0 * p / (gamma + std::sqrt(disc));
}

RatePrediction predict_rates(double s, int d, double alpha, double gamma, double lambda,
                             double kappa_min, double background) {
  RatePrediction r;
  r.s = s;
  r.d = d;
  r.alpha = alpha;
  try {
    r.eta_algebraic = predicted_eta(s, d, alpha);
  } catch (const DomainError&) {
    r.eta_algebraic = std::numeric_limits<double>::quiet_NaN();
  }
  r.weak_rate = predicted_weak_rate(s, d, alpha);
  r.spectral_gap = spectral_gap(d, alpha, gamma, lambda, kappa_min, background);
  r.case_a = s >= 1.0 - 0.5 * (d - alpha) - kBoundSlack;
  r.case_b = s > 2.0 + d - alpha;
  return r;
}

std::string to_string(FitKind k) { return k == FitKind::exponential ? "exp" : "alg"; }

FitKind parse_fit_kind(const std::string& s) {
  if (s == "exp" || s == "exponential") return FitKind::exponential;
  if (s == "alg" || s == "algebraic") return FitKind::algebraic;
  throw ConfigError("kind", "expected exp or alg, got '" + s + "'");
}

RateFit fit_rate(std::span<const double> t, std::span<const double> y, FitKind kind,
                 const FitOptions& opt) {
  if (t.size() != y.size()) throw FitError("t and y have different lengths");
  if (t.empty()) throw FitError("empty series");
  std::size_t first = 0;
  std::size_t last = t.size();
  double t0 = 0.0;
  double t1 = 0.0;
  if (opt.window) {
    std::tie(t0, t1) = *opt.window;
    if (!(t1 > t0)) throw FitError("window end must exceed window start");
    while (first < t.size() && t[first] < t0) ++first;
    last = first;
    while (last < t.size() && t[last] <= t1) ++last;
  } else {
    t0 = t.front() + 0.4 * (t.back() - t.front());
    t1 = t.back();
    while (first < t.size() && t[first] < t0) ++first;
  }
  for (std::size_t i = first; i < last; ++i) {
    if (!(y[i] > 0.0) || !std::isfinite(y[i])) {
      throw FitError("nonpositive or non-finite value " + fmt(y[i]) + " at t=" + fmt(t[i]));
    }
  }
  if (!opt.window) {
    const double floor = 1e2 * opt.floor_scale * 1e-16 * std::abs(y.front());
    std::size_t cut = first;
    while (cut < last && y[cut] >= floor) ++cut;
    last = cut;
  }
  if (last - first < opt.min_samples) {
    throw FitError("only " + std::to_string(last - first) + " samples in window, need " +
                   std::to_string(opt.min_samples));
  }
  std::vector<double> x, z;
  for (std::size_t i = first; i < last; ++i) {
    x.push_back(abscissa(t[i], kind));
    z.push_back(std::log(y[i]));
  }
  const Line line = least_squares(x, z);
  RateFit f;
  f.kind = kind;
  f.rate = -line.slope;
  f.t0 = t[first];
  f.t1 = t[last - 1];
  f.residual = line.residual;
  f.samples = last - first;

  std::vector<double> ex, ez;
  for (std::size_t i = first + 1; i + 1 < last; ++i) {
    if (y[i] >= y[i - 1] && y[i] > y[i + 1]) {
      ex.push_back(x[i - first]);
      ez.push_back(z[i - first]);
    }
  }
  if (ex.size() >= 3) f.envelope_rate = -least_squares(ex, ez).slope;
  return f;
}

RateFit fit_exponential(std::span<const double> t, std::span<const double> y,
                        const FitOptions& opt) {
  return fit_rate(t, y, FitKind::exponential, opt);
}

RateFit fit_algebraic(std::span<const double> t, std::span<const double> y,
                      const FitOptions& opt) {
  return fit_rate(t, y, FitKind::algebraic, opt);
}

RateFit fit_column(const std::vector<DiagnosticsRecord>& records, const std::string& column,
                   FitKind kind, const FitOptions& opt) {
  std::vector<double> t, y;
  for (const auto& r : records) {
    t.push_back(r.t);
    y.push_back(r.column(column));
  }
  RateFit f = fit_rate(t, y, kind, opt);
  f.series = column;
  return f;
}

std::vector<double> modulated_signal(const std::vector<DiagnosticsRecord>& records) {
  std::vector<double> y;
  y.reserve(records.size());
  for (const auto& r : records) {
    y.push_back(r.u_dev_L2 * r.u_dev_L2 + r.h_Hneg_half * r.h_Hneg_half);
  }
  return y;
}

double max_wave_speed(const State& s) {
  const Grid& g = *s.grid();
  const PhysicsParams& p = s.params;
  double speed = 0.0;
  for (std::size_t m = 1; m < g.size(); ++m) {
    const double k = g.kappa_norm(m);
    const auto [z1, z2] =
        linear_eigenvalues(k, p.alpha, g.dim(), p.gamma, p.lambda, p.background);
    speed = std::max(speed, std::max(std::abs(z1.imag()), std::abs(z2.imag())) / k);
  }
  double umax = 0.0;
  const RealField un = pointwise_norm(s.u);
  umax = max_abs(un);
  return speed + umax;
}

BigboxReport bigbox_report(const SimConfig& base) {
  SimConfig cfg = base;
  cfg.scenario = "bigbox_localized";
  BigboxReport rep;
  const State s0 = make_initial_state(cfg);
  rep.wave_speed = max_wave_speed(s0);
  rep.window_end = cfg.t_end;
  if (rep.wave_speed > 0.0) {
    rep.window_end = std::min(cfg.t_end, cfg.box_length / (4.0 * rep.wave_speed));
  }
  cfg.t_end = rep.window_end;

  RunOptions ro;
  ro.write_outputs = false;
  const TimeSeries ts = run(cfg, ro);
  rep.status = ts.status;

  const auto ng = std::pow(static_cast<double>(cfg.points_per_axis), 0.5 * cfg.dimension);
  FitOptions fo;
  fo.floor_scale = ng;
  std::vector<double> t;
  for (const auto& r : ts.records) t.push_back(r.t);
  const std::vector<double> e = modulated_signal(ts.records);
  rep.energy_fit = fit_algebraic(t, e, fo);
  rep.energy_fit.series = "u_dev_L2^2+h_Hneg_half^2";
  rep.xm_fit = fit_column(ts.records, "X_m", FitKind::algebraic, fo);
  try {
    rep.predicted_eta = predicted_eta(cfg.s_neg, cfg.dimension, cfg.physics.alpha);
  } catch (const DomainError&) {
    rep.predicted_eta = std::numeric_limits<double>::quiet_NaN();
  }
  rep.note =
      "exploratory: periodic box of length " + fmt(cfg.box_length) +
      " stands in for the whole space; its discrete spectrum cannot host the continuous "
      "low-frequency condition, so the fitted exponent is a structural approximation "
      "and carries no pass band";
  return rep;
}

}  // namespace erz
