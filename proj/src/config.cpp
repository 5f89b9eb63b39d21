#include "erz/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "erz/errors.hpp"

namespace erz {

std::string to_string(Scheme s) { return s == Scheme::rk4 ? "rk4" : "ifrk4"; }

Scheme parse_scheme(const std::string& s) {
  if (s == "rk4" || s == "explicit") return Scheme::rk4;
  if (s == "ifrk4" || s == "integrating-factor") return Scheme::ifrk4;
  throw ConfigError("scheme", "unknown scheme '" + s + "' (expected rk4 or ifrk4)");
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"single_mode", "linear_only", "random_smooth",
                                                  "torus_decay", "bigbox_localized"};
  return names;
}

namespace {

void require(bool ok, const char* key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void validate(const SimConfig& c) {
  const int d = c.dimension;
  require(d >= 1, "dimension", "must be >= 1");
  require(c.points_per_axis >= 4 && c.points_per_axis % 2 == 0, "points_per_axis",
          "must be an even integer >= 4");
  require(c.box_length > 0.0 && std::isfinite(c.box_length), "box_length", "must be positive");
  const double lo = std::max(d - 2.0, 0.0);
  require(c.physics.alpha > lo && c.physics.alpha < d, "alpha",
          "must lie in the window max(d-2,0) < alpha < d = (" + num(lo) + ", " + num(d) + ")");
  require(c.physics.gamma >= 0.0 && std::isfinite(c.physics.gamma), "gamma", "must be >= 0");
  require(c.physics.lambda > 0.0 && std::isfinite(c.physics.lambda), "lambda", "must be positive");
  require(c.physics.background > 0.0 && std::isfinite(c.physics.background), "background",
          "must be positive");
  require(c.m_index >= 1, "m_index", "must be >= 1");
  require(c.s_neg > 0.0 && c.s_neg <= c.physics.alpha / 2 + 1e-15, "s_neg",
          "must satisfy 0 < s_neg <= alpha/2");
  require(c.eta1 > 0.0, "eta1", "must be positive");
  require(c.eta2 >= 0.0, "eta2", "must be >= 0");
  require(c.eta4 >= 0.0, "eta4", "must be >= 0");
  require(c.sigma >= 0.0, "sigma", "must be >= 0");
  require(c.dt > 0.0 && std::isfinite(c.dt), "dt", "must be positive");
  require(c.t_end >= 0.0 && std::isfinite(c.t_end), "t_end", "must be >= 0");
  require(c.output_every >= 1, "output_every", "must be >= 1");
  require(c.checkpoint_every >= 0, "checkpoint_every", "must be >= 0");
  require(c.density_floor >= 0.0, "density_floor", "must be >= 0");
  const auto& names = scenario_names();
  require(std::find(names.begin(), names.end(), c.scenario) != names.end(), "scenario",
          "unknown scenario '" + c.scenario + "'");
  require(c.ic_amplitude >= 0.0 && std::isfinite(c.ic_amplitude), "ic_amplitude", "must be >= 0");
  require(c.ic_width > 0.0, "ic_width", "must be positive");
  require(c.ic_bump_width >= 0.0, "ic_bump_width", "must be >= 0");
  if (!c.ic_mode.empty()) {
    require(static_cast<int>(c.ic_mode.size()) == d, "ic_mode", "needs one integer per axis");
    bool nonzero = false;
    for (int m : c.ic_mode) {
      require(std::abs(m) < c.points_per_axis / 2, "ic_mode", "component outside the lattice");
      nonzero = nonzero || m != 0;
    }
    require(nonzero, "ic_mode", "must be a nonzero lattice vector");
  }
  if (!c.ic_mean_velocity.empty())
    require(static_cast<int>(c.ic_mean_velocity.size()) == d, "ic_mean_velocity",
            "needs one value per axis");
}

}  // namespace erz
