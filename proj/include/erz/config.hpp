#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "erz/dynamics.hpp"

namespace erz {

enum class Scheme { rk4, ifrk4 };

std::string to_string(Scheme s);
/// Accepts "rk4"/"explicit" and "ifrk4"/"integrating-factor".
Scheme parse_scheme(const std::string& s);

/// Full specification of one run.
struct SimConfig {
  int dimension = 2;
  int points_per_axis = 64;
  double box_length = 0.0;
  PhysicsParams physics;

  int m_index = 4;
  double s_neg = 0.5;
  double eta1 = 0.05;
  double eta2 = 1.0;
  double eta4 = 0.05;
  double sigma = 0.05;

  Scheme scheme = Scheme::ifrk4;
  double dt = 0.0;
  double t_end = 0.0;
  int output_every = 10;
  int checkpoint_every = 0;
  bool dealias = true;
  double density_floor = 1e-8;

  std::string scenario;
  double ic_amplitude = 1e-2;
  std::uint64_t ic_seed = 0;
  double ic_width = 3.0;
  std::vector<int> ic_mode;               // lattice vector; empty means e1
  std::vector<double> ic_mean_velocity;   // empty means zero
  double ic_bump_width = 0.0;             // 0 means L / 16

  std::string output_path = "./out";
};

/// Throws ConfigError naming the offending key.
void validate(const SimConfig& cfg);

/// Known scenario names.
const std::vector<std::string>& scenario_names();

}  // namespace erz
