#pragma once
//
// Energy, norm and hypocoercivity functionals evaluated on a snapshot.
// (d - alpha) / 2 appears everywhere below and is written `sigma0`.
//

#include <array>
#include <string>
#include <vector>

#include "erz/dynamics.hpp"

namespace erz {

struct DiagnosticsSettings {
  int m_index = 4;
  double s_neg = 0.5;
  double eta1 = 0.05;
  double eta2 = 1.0;
  double eta4 = 0.05;
  double sigma = 0.05;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double E_total = 0.0;
  double D_diss = 0.0;
  double X_m = 0.0;
  double tildeH_m = 0.0;
  double Y_m = 0.0;
  double Ybar_m = 0.0;
  double F_m = 0.0;
  double Z_m = 0.0;
  double E_mod = 0.0;
  double E_sigma = 0.0;
  double D_rate = 0.0;
  double mc_norm = 0.0;
  double min_density = 0.0;
  double u_L2 = 0.0;
  double h_L2 = 0.0;
  double h_Hneg_half = 0.0;
  double u_Hneg_s = 0.0;
  double h_Hneg_s = 0.0;
  double h_Hneg_caseA = 0.0;
  double u_Hneg_caseA = 0.0;
  double neg_cross = 0.0;
  double caseA_cross = 0.0;
  double dt_used = 0.0;

  // Not part of the CSV schema.
  std::vector<double> mc;       // normalised momentum average
  std::vector<double> mc_raw;   // integral of rho u
  double u_dev_L2 = 0.0;        // ||u - mc||
  std::vector<double> hypo_cross;

  static constexpr std::size_t column_count = 24;
  static const std::array<const char*, column_count>& column_names();
  std::array<double, column_count> columns() const;
  static DiagnosticsRecord from_columns(const std::array<double, column_count>& v);
  /// Column value by CSV name; throws DomainError for an unknown name.
  double column(const std::string& name) const;
};

/// 1/2 int rho |u|^2 + lambda/2 int h Lambda^{alpha-d} h.
double total_energy(const State& s);
/// ||h||^2_{H^m} + ||u||^2_{H^{m+sigma0}} + ||h||^2_{Hdot^{-sigma0}}.
double xm_norm_sq(const State& s, int m);

/// Per-order pieces S_j^2 = sum_{|k|=j} w_k ||rho^{-1/2} d^k h||^2, j = 1..m,
/// returned with index j - 1. Throws DomainError if c + h <= 0 somewhere.
std::vector<double> weighted_derivative_energies(const RealField& h, int m, double background);
/// sum_{j=1..m} S_j.
double modified_hm_norm(const RealField& h, int m, double background);

/// sum_{|k'|=k} w int (1/rho) d^{k'} grad h . Lambda^{d-alpha} d^{k'} u.
double hypo_cross(const State& s, int k);

struct ProofFunctionals {
  double Y_m = 0.0;
  double Ybar_m = 0.0;
  double F_m = 0.0;
  double Z_m = 0.0;
};
ProofFunctionals proof_functionals(const State& s, const DiagnosticsSettings& cfg);

struct ModulatedEnergy {
  double E = 0.0;
  double E_sigma = 0.0;
  double D = 0.0;
  double D_rate = 0.0;
  std::vector<double> mc;
  std::vector<double> mc_raw;
  double u_dev_L2 = 0.0;
};
ModulatedEnergy modulated_energy(const State& s, double sigma);
/// grad of the zero-mean solution of -Delta U = h.
SpectralVector potential_gradient(const SpectralField& h);

struct NegativeNorms {
  double h_Hneg_half = 0.0;
  double u_Hneg_s = 0.0;
  double h_Hneg_s = 0.0;
  double h_Hneg_caseA = 0.0;
  double u_Hneg_caseA = 0.0;
  double neg_cross = 0.0;
  double caseA_cross = 0.0;
};
NegativeNorms negative_norm_ledger(const State& s, double s_neg);

/// Everything at once. Functionals that need rho > 0 become NaN instead of
/// throwing when the density is not positive.
DiagnosticsRecord compute_diagnostics(const State& s, const DiagnosticsSettings& cfg);

}  // namespace erz
