// Command-line front end: run, rates, predict, inequalities, oracle, bigbox.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "erz/decay.hpp"
#include "erz/dft_oracle.hpp"
#include "erz/errors.hpp"
#include "erz/inequality.hpp"
#include "erz/integrator.hpp"
#include "erz/io.hpp"

namespace fs = std::filesystem;
using namespace erz;

namespace {

std::string g17(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string f6(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

SimConfig config_from(const std::string& path) {
  if (fs::path(path).extension() == ".json") return parse_config(read_manifest(path).config_text);
  return load_config(path);
}

void write_json(const nlohmann::ordered_json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open for writing");
  out << j.dump(2) << "\n";
  if (!out) throw IoError(path, "write failed");
}

nlohmann::ordered_json fit_json(const RateFit& f) {
  nlohmann::ordered_json j;
  j["series"] = f.series;
  j["kind"] = to_string(f.kind);
  j["rate"] = f.rate;
  j["t0"] = f.t0;
  j["t1"] = f.t1;
  j["residual"] = f.residual;
  j["samples"] = f.samples;
  if (f.envelope_rate) j["envelope_rate"] = *f.envelope_rate;
  return j;
}

void print_fit(const RateFit& f) {
  std::cout << "column=" << f.series << " kind=" << to_string(f.kind) << " rate=" << f6(f.rate)
            << " t0=" << g17(f.t0) << " t1=" << g17(f.t1) << " residual=" << g17(f.residual)
            << " samples=" << f.samples;
  if (f.envelope_rate) std::cout << " envelope_rate=" << f6(*f.envelope_rate);
  std::cout << "\n";
}

// --- run -------------------------------------------------------------------

struct RunArgs {
  std::string config;
  std::string restore_path;
  std::string output;
};

int cmd_run(const RunArgs& a) {
  SimConfig cfg = config_from(a.config);
  if (!a.output.empty()) cfg.output_path = a.output;
  RunOptions opt;
  if (!a.restore_path.empty()) {
    State s = restore(a.restore_path);
    const Grid& g = *s.grid();
    if (g.dim() != cfg.dimension || g.points() != cfg.points_per_axis ||
        g.length() != cfg.box_length || s.params.alpha != cfg.physics.alpha ||
        s.params.gamma != cfg.physics.gamma || s.params.lambda != cfg.physics.lambda ||
        s.params.background != cfg.physics.background) {
      throw ConfigError("restore", "checkpoint grid or physics does not match the config");
    }
    opt.initial = std::move(s);
  }
  const TimeSeries ts = run(cfg, opt);
  std::cout << "status=" << to_string(ts.status) << " final_time=" << g17(ts.final_time)
            << " records=" << ts.records.size() << " output=" << cfg.output_path << "\n";
  if (!ts.message.empty()) std::cout << "message=" << ts.message << "\n";
  return ts.status == RunStatus::error ? 1 : 0;
}

// --- rates -----------------------------------------------------------------

struct RatesArgs {
  std::string csv;
  std::string column = "E_mod";
  std::string window;
  std::string kind = "exp";
  std::string report;
};

int cmd_rates(const RatesArgs& a) {
  const auto records = read_timeseries(a.csv);
  FitOptions opt;
  if (!a.window.empty()) {
    const auto comma = a.window.find(',');
    if (comma == std::string::npos) throw ConfigError("window", "expected a,b");
    try {
      opt.window = std::pair{std::stod(a.window.substr(0, comma)), std::stod(a.window.substr(comma + 1))};
    } catch (const std::exception&) {
      throw ConfigError("window", "expected two numbers a,b");
    }
  }
  const fs::path manifest = fs::path(a.csv).parent_path() / "manifest.json";
  if (fs::exists(manifest)) {
    const SimConfig cfg = parse_config(read_manifest(manifest.string()).config_text);
    opt.floor_scale = std::pow(static_cast<double>(cfg.points_per_axis), 0.5 * cfg.dimension);
  }
  const RateFit f = fit_column(records, a.column, parse_fit_kind(a.kind), opt);
  print_fit(f);
  if (!a.report.empty()) {
    nlohmann::ordered_json j = fit_json(f);
    j["source"] = a.csv;
    write_json(j, a.report);
  }
  return 0;
}

// --- predict ---------------------------------------------------------------

struct PredictArgs {
  int d = 2;
  double alpha = 1.0;
  double s = 0.5;
  double gamma = 1.0;
  double lambda = 1.0;
  double kappa_min = 1.0;
  double background = 1.0;
};

int cmd_predict(const PredictArgs& a) {
  const RatePrediction r =
      predict_rates(a.s, a.d, a.alpha, a.gamma, a.lambda, a.kappa_min, a.background);
  std::cout << "eta=" << g17(r.eta_algebraic) << "\n"
            << "weak_rate=" << g17(r.weak_rate) << "\n"
            << "gap=" << g17(r.spectral_gap) << "\n"
            << "case_a=" << (r.case_a ? "true" : "false") << "\n"
            << "case_b=" << (r.case_b ? "true" : "false") << "\n";
  return 0;
}

// --- inequalities ----------------------------------------------------------

struct IneqArgs {
  std::string suite = "all";
  SuiteOptions opt;
  std::string report;
};

int cmd_inequalities(const IneqArgs& a) {
  const auto reports = run_suite(a.suite, a.opt);
  bool ok = true;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    std::cout << "suite=" << r.name << " trials=" << r.trials << " skipped=" << r.skipped
              << " max_ratio=" << g17(r.max_ratio) << " argmax_trial=" << r.argmax_trial
              << " seed=" << r.seed
              << " tolerance=" << (r.tolerance ? g17(*r.tolerance) : std::string("none"))
              << " result=" << (!r.tolerance ? "reported" : r.passed() ? "pass" : "fail") << "\n";
    ok = ok && r.passed();
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["trials"] = r.trials;
    j["skipped"] = r.skipped;
    j["max_ratio"] = r.max_ratio;
    j["argmax_trial"] = r.argmax_trial;
    j["seed"] = r.seed;
    j["tolerance"] = r.tolerance ? nlohmann::ordered_json(*r.tolerance) : nlohmann::ordered_json();
    arr.push_back(j);
  }
  if (!a.report.empty()) write_json(arr, a.report);
  if (!ok) {
    std::cerr << "error: inequality: a constant-1 suite exceeded its tolerance\n";
    return 3;
  }
  return 0;
}

// --- oracle ----------------------------------------------------------------

int cmd_oracle(const std::string& suite, int n, unsigned long seed) {
  if (suite != "spectral") throw ConfigError("suite", "only 'spectral' is available");
  double worst = 0.0;
  for (const auto& e : oracle::spectral_suite(n, seed)) {
    std::cout << e.name << " max_abs_error=" << g17(e.max_abs_error) << "\n";
    worst = std::max(worst, e.max_abs_error);
  }
  const bool ok = worst <= 1e-10;
  std::cout << "max_abs_error=" << g17(worst) << " result=" << (ok ? "pass" : "fail") << "\n";
  if (!ok) {
    std::cerr << "error: oracle: disagreement above 1e-10\n";
    return 3;
  }
  return 0;
}

// --- bigbox ----------------------------------------------------------------

int cmd_bigbox(const std::string& config, const std::string& report) {
  const BigboxReport r = bigbox_report(config_from(config));
  std::cout << "status=" << to_string(r.status) << " window_end=" << g17(r.window_end)
            << " wave_speed=" << g17(r.wave_speed) << "\n";
  print_fit(r.energy_fit);
  print_fit(r.xm_fit);
  std::cout << "predicted_eta=" << g17(r.predicted_eta) << "\n"
            << "note=" << r.note << "\n";
  if (!report.empty()) {
    nlohmann::ordered_json j;
    j["exploratory"] = true;
    j["status"] = to_string(r.status);
    j["window_end"] = r.window_end;
    j["wave_speed"] = r.wave_speed;
    j["energy_fit"] = fit_json(r.energy_fit);
    j["xm_fit"] = fit_json(r.xm_fit);
    j["predicted_eta"] = std::isnan(r.predicted_eta) ? nlohmann::ordered_json()
                                                     : nlohmann::ordered_json(r.predicted_eta);
    j["note"] = r.note;
    write_json(j, report);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Damped Euler-Riesz pseudo-spectral simulator and analysis tools", "erz"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Simulate a config (or a previous manifest.json)");
  run_cmd->add_option("config", run_args.config, "Config file or manifest.json")->required();
  run_cmd->add_option("--restore", run_args.restore_path, "Continue from a checkpoint");
  run_cmd->add_option("--output", run_args.output, "Override output_path");

  RatesArgs rates_args;
  auto* rates_cmd = app.add_subcommand("rates", "Fit a decay rate to a time-series column");
  rates_cmd->add_option("csv", rates_args.csv, "timeseries.csv")->required();
  rates_cmd->add_option("--column", rates_args.column, "Column name")->capture_default_str();
  rates_cmd->add_option("--window", rates_args.window, "Fit window a,b");
  rates_cmd->add_option("--kind", rates_args.kind, "exp or alg")->capture_default_str();
  rates_cmd->add_option("--report", rates_args.report, "Write the fit as JSON");

  PredictArgs pa;
  auto* predict_cmd = app.add_subcommand("predict", "Predicted decay rates");
  predict_cmd->add_option("--d", pa.d, "Dimension")->required();
  predict_cmd->add_option("--alpha", pa.alpha, "Riesz exponent")->required();
  predict_cmd->add_option("--s", pa.s, "Negative Sobolev order")->required();
  predict_cmd->add_option("--gamma", pa.gamma)->capture_default_str();
  predict_cmd->add_option("--lambda", pa.lambda)->capture_default_str();
  predict_cmd->add_option("--kappa-min", pa.kappa_min)->capture_default_str();
  predict_cmd->add_option("--background", pa.background)->capture_default_str();

  IneqArgs ia;
  auto* ineq_cmd = app.add_subcommand("inequalities", "Randomized inequality suites");
  ineq_cmd->add_option("--suite", ia.suite, "Suite name or all")->capture_default_str();
  ineq_cmd->add_option("--trials", ia.opt.trials)->capture_default_str();
  ineq_cmd->add_option("--seed", ia.opt.seed)->capture_default_str();
  ineq_cmd->add_option("--d", ia.opt.dimension)->capture_default_str();
  ineq_cmd->add_option("--n", ia.opt.points_per_axis)->capture_default_str();
  ineq_cmd->add_option("--k", ia.opt.moser_k, "Moser derivative order")->capture_default_str();
  ineq_cmd->add_option("--s", ia.opt.commutator_s, "Commutator order")->capture_default_str();
  ineq_cmd->add_option("--eps", ia.opt.commutator_eps)->capture_default_str();
  ineq_cmd->add_option("--report", ia.report, "Write reports as JSON");

  std::string oracle_suite = "spectral";
  int oracle_n = 8;
  unsigned long oracle_seed = 1;
  auto* oracle_cmd = app.add_subcommand("oracle", "Compare spectral operators with a direct DFT");
  oracle_cmd->add_option("--suite", oracle_suite)->capture_default_str();
  oracle_cmd->add_option("--n", oracle_n)->capture_default_str();
  oracle_cmd->add_option("--seed", oracle_seed)->capture_default_str();

  std::string bigbox_config;
  std::string bigbox_out;
  auto* bigbox_cmd = app.add_subcommand("bigbox", "Exploratory large-box algebraic decay report");
  bigbox_cmd->add_option("config", bigbox_config, "Config file")->required();
  bigbox_cmd->add_option("--report", bigbox_out, "Write the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*run_cmd) return cmd_run(run_args);
    if (*rates_cmd) return cmd_rates(rates_args);
    if (*predict_cmd) return cmd_predict(pa);
    if (*ineq_cmd) return cmd_inequalities(ia);
    if (*oracle_cmd) return cmd_oracle(oracle_suite, oracle_n, oracle_seed);
    if (*bigbox_cmd) return cmd_bigbox(bigbox_config, bigbox_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
