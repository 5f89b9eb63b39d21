#pragma once
//
// Predicted decay rates and least-squares rate fits on time series.
//

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "erz/integrator.hpp"

namespace erz {

/// Algebraic exponent min{2s/(d-alpha), (s+d-alpha-1)/(1-(d-alpha)/2)}.
/// Requires d >= 2, d-2 < alpha < d and 1-(d-alpha)/2 <= s <= alpha/2;
/// throws DomainError naming the violated bound otherwise.
double predicted_eta(double s, int d, double alpha);

/// s / (1 + (d-alpha)/2), for 0 < s <= alpha/2.
double predicted_weak_rate(double s, int d, double alpha);

/// Slowest linear decay rate over lattice moduli >= kappa_min. With
/// P = c lambda kappa_min^{alpha-d+2}: gamma/2 if 4P >= gamma^2, otherwise
/// the smaller real root magnitude (gamma - sqrt(gamma^2 - 4P)) / 2.
double spectral_gap(int d, double alpha, double gamma, double lambda, double kappa_min,
                    double background = 1.0);

struct RatePrediction {
  double s = 0.0;
  int d = 0;
  double alpha = 0.0;
  /// NaN when s lies outside the algebraic window.
  double eta_algebraic = 0.0;
  double weak_rate = 0.0;
  double spectral_gap = 0.0;
  bool case_a = false;  // s >= 1 - (d-alpha)/2
  bool case_b = false;  // s > 2 + d - alpha
};

RatePrediction predict_rates(double s, int d, double alpha, double gamma = 1.0,
                             double lambda = 1.0, double kappa_min = 1.0,
                             double background = 1.0);

enum class FitKind { exponential, algebraic };
std::string to_string(FitKind k);
FitKind parse_fit_kind(const std::string& s);

struct FitOptions {
  /// Explicit [t0, t1]; when absent the last 60% of the time span is used
  /// and samples below the noise floor are cut.
  std::optional<std::pair<double, double>> window;
  /// Multiplies 1e-16 * y(0) to estimate round-off; use n^{d/2}.
  double floor_scale = 1.0;
  std::size_t min_samples = 10;
};

struct RateFit {
  std::string series;
  FitKind kind = FitKind::exponential;
  /// Decay rate (exponential) or exponent (algebraic), positive for decay.
  double rate = 0.0;
  double t0 = 0.0;
  double t1 = 0.0;
  /// Max absolute deviation of log y from the fitted line.
  double residual = 0.0;
  std::size_t samples = 0;
  /// Same fit on the local maxima, when at least three exist.
  std::optional<double> envelope_rate;
};

/// Fits y ~ e^{-rate t} (or (1+t)^{-rate}). Throws FitError for nonpositive
/// values in the window or fewer than min_samples points.
RateFit fit_rate(std::span<const double> t, std::span<const double> y, FitKind kind,
                 const FitOptions& opt = {});
RateFit fit_exponential(std::span<const double> t, std::span<const double> y,
                        const FitOptions& opt = {});
RateFit fit_algebraic(std::span<const double> t, std::span<const double> y,
                      const FitOptions& opt = {});
/// Fit of one CSV column.
RateFit fit_column(const std::vector<DiagnosticsRecord>& records, const std::string& column,
                   FitKind kind, const FitOptions& opt = {});

/// ||u - mc||^2 + ||h||^2_{Hdot^{-(d-alpha)/2}} per record.
std::vector<double> modulated_signal(const std::vector<DiagnosticsRecord>& records);

/// Largest linear phase speed over the lattice plus max|u|.
double max_wave_speed(const State& s);

struct BigboxReport {
  double window_end = 0.0;
  double wave_speed = 0.0;
  RateFit energy_fit;
  RateFit xm_fit;
  /// NaN when s_neg is outside the algebraic window.
  double predicted_eta = 0.0;
  RunStatus status = RunStatus::completed;
  std::string note;
};

/// Runs the bigbox_localized scenario up to the pre-wrap time
/// L / (4 max wave speed) (capped by t_end) and fits algebraic exponents.
/// The comparison is exploratory: a finite box has no continuous spectrum.
BigboxReport bigbox_report(const SimConfig& cfg);

}  // namespace erz
