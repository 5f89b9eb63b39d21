#include "erz/integrator.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <random>

#include "erz/errors.hpp"
#include "erz/io.hpp"
#include "erz/random_fields.hpp"

namespace erz {

namespace {

SpectralState combine(const SpectralState& a, double s, const SpectralState& b) {
  SpectralState out = a;
  out.axpy(s, b);
  return out;
}

}  // namespace

Stepper::Stepper(GridPtr grid, const PhysicsParams& p, Scheme scheme, double dt, RhsOptions opt)
    : grid_(std::move(grid)), params_(p), scheme_(scheme), dt_(dt), opt_(opt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "step size must be positive");
  if (scheme == Scheme::ifrk4) {
    full_.emplace(grid_, p, dt);
    half_.emplace(grid_, p, 0.5 * dt);
  }
}

SpectralState Stepper::advance(const SpectralState& w, double t) const {
  const double h = dt_;
  if (scheme_ == Scheme::rk4) {
    auto f = [&](const SpectralState& x, double tt) { return full_rhs(x, params_, opt_, tt); };
    const auto k1 = f(w, t);
    const auto k2 = f(combine(w, 0.5 * h, k1), t + 0.5 * h);
    const auto k3 = f(combine(w, 0.5 * h, k2), t + 0.5 * h);
    const auto k4 = f(combine(w, h, k3), t + h);
    SpectralState out = w;
    out.axpy(h / 6, k1).axpy(h / 3, k2).axpy(h / 3, k3).axpy(h / 6, k4);
    return out;
  }
  auto n = [&](const SpectralState& x, double tt) { return nonlinear_rhs(x, params_, opt_, tt); };
  const PropagatorTable& E = *full_;
  const PropagatorTable& Eh = *half_;
  const auto k1 = n(w, t);
  const auto k2 = n(Eh.apply(combine(w, 0.5 * h, k1)), t + 0.5 * h);
  const auto k3 = n(combine(Eh.apply(w), 0.5 * h, k2), t + 0.5 * h);
  const auto k4 = n(combine(E.apply(w), h, Eh.apply(k3)), t + h);
  SpectralState out = E.apply(combine(w, h / 6, k1));
  out.axpy(h / 3, Eh.apply(combine(k2, 1.0, k3)));
  out.axpy(h / 6, k4);
  return out;
}

void Stepper::step(State& s) const {
  SpectralState w = to_spectral(s);
  w.h[0] = 0.0;
  w = advance(w, s.t);
  w.h[0] = 0.0;
  from_spectral(w, s);
  s.t += dt_;
}

State step(const State& s, double dt, Scheme scheme, const RhsOptions& opt) {
  State out = s;
  Stepper(s.grid(), s.params, scheme, dt, opt).step(out);
  return out;
}

double suggest_dt(const State& s, double cfl) {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl", "must lie in (0, 1]");
  const Grid& g = *s.grid();
  const double umax = max_abs(pointwise_norm(s.u));
  const double inf = std::numeric_limits<double>::infinity();
  const double advective = umax > 0.0 ? g.dx() / umax : inf;
  const double osc2 = s.params.background * s.params.lambda *
                      std::pow(g.kappa_max(), s.params.alpha - g.dim() + 2.0);
  const double oscillation = osc2 > 0.0 ? 1.0 / std::sqrt(osc2) : inf;
  const double damping = s.params.gamma > 0.0 ? 1.0 / s.params.gamma : inf;
  return cfl * std::min({advective, oscillation, damping});
}

GridPtr make_grid(const SimConfig& cfg) {
  return Grid::make(cfg.dimension, cfg.points_per_axis, cfg.box_length);
}

State make_initial_state(const SimConfig& cfg) {
  validate(cfg);
  const auto grid = make_grid(cfg);
  const int d = cfg.dimension;
  State s = zero_state(grid, cfg.physics);
  const double A = cfg.ic_amplitude;
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.ic_seed & 0xffffffffu),
                    static_cast<std::uint32_t>(cfg.ic_seed >> 32)};
  std::mt19937_64 rng(seq);

  if (cfg.scenario == "single_mode" || cfg.scenario == "linear_only") {
    std::vector<int> m = cfg.ic_mode;
    if (m.empty()) {
      m.assign(d, 0);
      m[0] = 1;
    }
    const double unit = grid->kappa_min();
    s.h = RealField::from_function(grid, [&](std::span<const double> x) {
      double ph = 0.0;
      for (int a = 0; a < d; ++a) ph += unit * m[a] * x[a];
      return A * std::cos(ph);
    });
  } else if (cfg.scenario == "random_smooth" || cfg.scenario == "torus_decay") {
    s.h = inverse_transform(random_smooth(grid, cfg.ic_width, rng));
    normalize_max(s.h, A);
    if (cfg.scenario == "torus_decay") {
      for (auto& c : s.u) {
        c = inverse_transform(random_smooth(grid, cfg.ic_width, rng));
        normalize_max(c, A);
      }
    }
  } else if (cfg.scenario == "bigbox_localized") {
    const double L = cfg.box_length;
    const double b = cfg.ic_bump_width > 0.0 ? cfg.ic_bump_width : L / 16;
    auto bump = [&](std::span<const double> x) {
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) r2 += (x[a] - 0.5 * L) * (x[a] - 0.5 * L);
      return A * std::exp(-r2 / (2 * b * b));
    };
    s.h = RealField::from_function(grid, bump);
    s.u[0] = RealField::from_function(grid, bump);
    s.u[0] = inverse_transform(zero_mean_project(dealias(transform(s.u[0]))));
    s.h = inverse_transform(dealias(transform(s.h)));
  }
  s.h = inverse_transform(zero_mean_project(transform(s.h)));
  if (!cfg.ic_mean_velocity.empty())
    for (int a = 0; a < d; ++a)
      for (double& v : s.u[a].values()) v += cfg.ic_mean_velocity[a];
  return s;
}

DiagnosticsSettings diagnostics_settings(const SimConfig& cfg) {
  return {cfg.m_index, cfg.s_neg, cfg.eta1, cfg.eta2, cfg.eta4, cfg.sigma};
}

RhsOptions rhs_options(const SimConfig& cfg) {
  return {cfg.dealias, cfg.density_floor, cfg.scenario != "linear_only"};
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blow_up: return "blow-up";
    case RunStatus::error: return "error";
  }
  return "error";
}

TimeSeries run(const SimConfig& cfg, const RunOptions& opt) {
  validate(cfg);
  State s = opt.initial ? *opt.initial : make_initial_state(cfg);
  const auto settings = diagnostics_settings(cfg);
  const auto rhs = rhs_options(cfg);

  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_path);
  const std::string manifest_path = (dir / "manifest.json").string();
  const std::string csv_path = (dir / "timeseries.csv").string();
  const std::string ckpt_path = (dir / "checkpoint.bin").string();

  RunManifest manifest;
  manifest.config_text = dump_config(cfg);
  manifest.code_version = code_version();
  manifest.seed = cfg.ic_seed;
  manifest.start_time = utc_timestamp();
  manifest.status = "running";
  manifest.final_time = s.t;
  manifest.outputs = {csv_path};
  if (cfg.checkpoint_every > 0) manifest.outputs.push_back(ckpt_path);

  std::optional<TimeSeriesWriter> writer;
  if (opt.write_outputs) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(dir.string(), "cannot create output directory: " + ec.message());
    write_manifest(manifest, manifest_path);
    writer.emplace(csv_path);
  }

  TimeSeries out;
  auto emit = [&](const DiagnosticsRecord& r, const State* st) {
    out.records.push_back(r);
    if (writer) writer->append(r);
    if (st && opt.observer) opt.observer(*st, r);
  };
  auto finish = [&](RunStatus status, const std::string& message) {
    out.status = status;
    out.final_time = s.t;
    out.message = message;
    if (opt.write_outputs) {
      manifest.status = to_string(status);
      manifest.end_time = utc_timestamp();
      manifest.final_time = out.final_time;
      manifest.message = message;
      write_manifest(manifest, manifest_path);
    }
  };

  const double t0 = s.t;
  const double span = cfg.t_end - t0;
  long long nsteps = span > 0.0 ? static_cast<long long>(std::ceil(span / cfg.dt - 1e-9)) : 0;
  double last_dt = nsteps > 0 ? span - static_cast<double>(nsteps - 1) * cfg.dt : cfg.dt;
  if (std::abs(last_dt - cfg.dt) <= 1e-12 * cfg.dt) last_dt = cfg.dt;

  try {
    const Stepper stepper(s.grid(), s.params, cfg.scheme, cfg.dt, rhs);
    std::optional<Stepper> tail;
    if (last_dt != cfg.dt) tail.emplace(s.grid(), s.params, cfg.scheme, last_dt, rhs);

    check_density(s.h, s.u, s.params.background, cfg.density_floor, s.t);
    auto first = compute_diagnostics(s, settings);
    first.dt_used = cfg.dt;
    emit(first, &s);

    // A start on the dt lattice (fresh runs and our own checkpoints) keeps the
    // global step index, so a restarted run reproduces t and the output cadence.
    long long k0 = 0;
    if (t0 > 0.0) {
      const auto k = std::llround(t0 / cfg.dt);
      if (static_cast<double>(k) * cfg.dt == t0) k0 = k;
    }
    for (long long n = 1; n <= nsteps; ++n) {
      const bool is_last = n == nsteps;
      const long long k = k0 + n;
      const Stepper& st = (is_last && tail) ? *tail : stepper;
      st.step(s);
      s.t = is_last ? cfg.t_end
                    : (k0 > 0 || t0 == 0.0 ? static_cast<double>(k) * cfg.dt
                                           : t0 + static_cast<double>(n) * cfg.dt);
      check_density(s.h, s.u, s.params.background, cfg.density_floor, s.t);
      if (k % cfg.output_every == 0 || is_last) {
        auto r = compute_diagnostics(s, settings);
        r.dt_used = st.dt();
        emit(r, &s);
      }
      if (opt.write_outputs && cfg.checkpoint_every > 0 && k % cfg.checkpoint_every == 0)
        checkpoint(s, ckpt_path);
    }
  } catch (const BlowUpError& e) {
    DiagnosticsRecord r;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto vals = r.columns();
    vals.fill(nan);
    r = DiagnosticsRecord::from_columns(vals);
    r.t = e.time();
    if (!out.records.empty() && !(r.t > out.records.back().t))
      r.t = std::nextafter(out.records.back().t, std::numeric_limits<double>::infinity());
    r.min_density = e.min_density();
    r.dt_used = cfg.dt;
    emit(r, nullptr);
    s.t = r.t;
    finish(RunStatus::blow_up, e.what());
    return out;
  } catch (const std::exception& e) {
    finish(RunStatus::error, e.what());
    throw;
  }
  finish(RunStatus::completed, "");
  return out;
}

}  // namespace erz
