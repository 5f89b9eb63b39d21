#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "erz/config.hpp"
#include "erz/diagnostics.hpp"
#include "erz/dynamics.hpp"

namespace erz {

/// Fixed-step fourth-order stepper. The integrating-factor variant runs the
/// four stages on the quadratic remainder in the frame of the exact linear
/// propagator; the explicit variant is classical RK4 on the full rhs.
class Stepper {
 public:
  Stepper(GridPtr grid, const PhysicsParams& p, Scheme scheme, double dt, RhsOptions opt = {});

  double dt() const noexcept { return dt_; }
  Scheme scheme() const noexcept { return scheme_; }
  /// One step from time t, in spectral form.
  SpectralState advance(const SpectralState& w, double t) const;
  /// One step in place; re-projects neutrality and advances s.t.
  void step(State& s) const;

 private:
  GridPtr grid_;
  PhysicsParams params_;
  Scheme scheme_;
  double dt_;
  RhsOptions opt_;
  std::optional<PropagatorTable> full_;
  std::optional<PropagatorTable> half_;
};

State step(const State& s, double dt, Scheme scheme, const RhsOptions& opt = {});

/// cfl * min(dx / max|u|, 1 / sqrt(c lambda kappa_max^{alpha-d+2}), 1 / gamma).
/// Infinite terms are dropped; returns +inf when all are infinite.
double suggest_dt(const State& s, double cfl);

GridPtr make_grid(const SimConfig& cfg);
State make_initial_state(const SimConfig& cfg);
DiagnosticsSettings diagnostics_settings(const SimConfig& cfg);
RhsOptions rhs_options(const SimConfig& cfg);

enum class RunStatus { completed, blow_up, error };
std::string to_string(RunStatus s);

struct TimeSeries {
  std::vector<DiagnosticsRecord> records;
  RunStatus status = RunStatus::completed;
  double final_time = 0.0;
  std::string message;
};

struct RunOptions {
  /// Write manifest, CSV and checkpoints under cfg.output_path.
  bool write_outputs = true;
  /// Start from this state instead of the scenario.
  std::optional<State> initial;
  /// Called after every recorded output with the state it was computed on.
  std::function<void(const State&, const DiagnosticsRecord&)> observer;
};

/// Steps from the initial time to t_end with fixed dt (the last step is
/// shortened if dt does not divide the interval). Blow-up ends the run with
/// status blow_up and a final record whose fields are NaN apart from t,
/// min_density and dt_used.
TimeSeries run(const SimConfig& cfg, const RunOptions& opt = {});

}  // namespace erz
