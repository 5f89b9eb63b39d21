#include "erz/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "erz/errors.hpp"

namespace erz {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sigma0(const State& s) { return 0.5 * (s.grid()->dim() - s.params.alpha); }

RealField density(const State& s) {
  RealField rho = s.h;
  for (double& v : rho.values()) v += s.params.background;
  return rho;
}

void require_positive(const RealField& rho) {
  const double lo = min_value(rho);
  if (!(lo > 0.0)) throw DomainError("density is not positive (min " + std::to_string(lo) + ")");
}

double weighted_inner(const RealField& a, const RealField& b, const RealField& inv_rho) {
  RealField ab = multiply(a, b);
  return inner(ab, inv_rho);
}

RealField reciprocal(const RealField& rho) {
  RealField out = rho;
  for (double& v : out.values()) v = 1.0 / v;
  return out;
}

double rho_u_sq(const RealField& rho, const RealVector& u) {
  double acc = 0.0;
  for (const auto& c : u) acc += inner(multiply(rho, c), c);
  return acc;
}

std::vector<double> derivative_energies_with(const SpectralField& hh, int m,
                                             const RealField& inv_rho) {
  const int d = hh.grid().dim();
  std::vector<double> out;
  for (int j = 1; j <= m; ++j) {
    double acc = 0.0;
    for (const auto& mi : multi_indices(d, j)) {
      const auto f = inverse_transform(partial(hh, mi.k));
      acc += mi.weight * weighted_inner(f, f, inv_rho);
    }
    out.push_back(acc);
  }
  return out;
}

double hypo_cross_with(const SpectralField& hh, const SpectralVector& uh, double order,
                       int k, const RealField& inv_rho) {
  const int d = hh.grid().dim();
  double acc = 0.0;
  for (const auto& mi : multi_indices(d, k)) {
    const auto dkh = partial(hh, mi.k);
    for (int a = 0; a < d; ++a) {
      const auto lhs = inverse_transform(partial(dkh, a));
      const auto rhs = inverse_transform(apply_lambda(partial(uh[a], mi.k), order));
      acc += mi.weight * weighted_inner(lhs, rhs, inv_rho);
    }
  }
  return acc;
}

struct ProofParts {
  std::vector<double> U_sq;   // j = 0..m
  std::vector<double> S_sq;   // j = 1..m
  std::vector<double> hypo;   // k = 0..m-1
  double rho_u_sq = 0.0;
};

ProofParts proof_parts(const State& s, int m, const RealField& rho) {
  const auto inv_rho = reciprocal(rho);
  const auto hh = transform(s.h);
  const auto uh = transform(s.u);
  const double d_minus_alpha = s.grid()->dim() - s.params.alpha;
  ProofParts p;
  for (int j = 0; j <= m; ++j) p.U_sq.push_back(derivative_energy(uh, j, 0.5 * d_minus_alpha));
  p.S_sq = derivative_energies_with(hh, m, inv_rho);
  for (int k = 0; k < m; ++k) p.hypo.push_back(hypo_cross_with(hh, uh, d_minus_alpha, k, inv_rho));
  p.rho_u_sq = rho_u_sq(rho, s.u);
  return p;
}

ProofFunctionals assemble(const ProofParts& p, const State& s, const DiagnosticsSettings& cfg,
                          const NegativeNorms& neg) {
  ProofFunctionals f;
  double U = 0.0;
  double S = 0.0;
  double H = 0.0;
  for (double v : p.U_sq) U += v;
  for (double v : p.S_sq) S += v;
  for (double v : p.hypo) H += v;
  f.Y_m = p.rho_u_sq + U + S + cfg.eta1 * H;
  f.Ybar_m = (U - p.U_sq.front()) + S + cfg.eta1 * H;
  const double h2 = inner(s.h, s.h);
  f.F_m = f.Y_m + h2 + cfg.eta2 * neg.h_Hneg_half * neg.h_Hneg_half;
  f.Z_m = f.F_m + neg.h_Hneg_caseA * neg.h_Hneg_caseA + neg.u_Hneg_caseA * neg.u_Hneg_caseA -
          cfg.eta4 * neg.caseA_cross;
  return f;
}

}  // namespace

const std::array<const char*, DiagnosticsRecord::column_count>& DiagnosticsRecord::column_names() {
  static const std::array<const char*, column_count> names = {
      "t",           "E_total",     "D_diss",       "X_m",          "tildeH_m",  "Y_m",
      "Ybar_m",      "F_m",         "Z_m",          "E_mod",        "E_sigma",   "D_rate",
      "mc_norm",     "min_density", "u_L2",         "h_L2",         "h_Hneg_half", "u_Hneg_s",
      "h_Hneg_s",    "h_Hneg_caseA", "u_Hneg_caseA", "neg_cross",   "caseA_cross", "dt_used"};
  return names;
}

std::array<double, DiagnosticsRecord::column_count> DiagnosticsRecord::columns() const {
  return {t,        E_total,     D_diss,   X_m,      tildeH_m,    Y_m,         Ybar_m,
          F_m,      Z_m,         E_mod,    E_sigma,  D_rate,      mc_norm,     min_density,
          u_L2,     h_L2,        h_Hneg_half, u_Hneg_s, h_Hneg_s, h_Hneg_caseA, u_Hneg_caseA,
          neg_cross, caseA_cross, dt_used};
}

DiagnosticsRecord DiagnosticsRecord::from_columns(const std::array<double, column_count>& v) {
  DiagnosticsRecord r;
  double* fields[column_count] = {&r.t,        &r.E_total,     &r.D_diss,   &r.X_m,
                                  &r.tildeH_m, &r.Y_m,         &r.Ybar_m,   &r.F_m,
                                  &r.Z_m,      &r.E_mod,       &r.E_sigma,  &r.D_rate,
                                  &r.mc_norm,  &r.min_density, &r.u_L2,     &r.h_L2,
                                  &r.h_Hneg_half, &r.u_Hneg_s, &r.h_Hneg_s, &r.h_Hneg_caseA,
                                  &r.u_Hneg_caseA, &r.neg_cross, &r.caseA_cross, &r.dt_used};
  for (std::size_t i = 0; i < column_count; ++i) *fields[i] = v[i];
  return r;
}

double DiagnosticsRecord::column(const std::string& name) const {
  const auto& names = column_names();
  const auto vals = columns();
  for (std::size_t i = 0; i < column_count; ++i)
    if (name == names[i]) return vals[i];
  throw DomainError("unknown column '" + name + "'");
}

double total_energy(const State& s) {
  const auto rho = density(s);
  const int d = s.grid()->dim();
  const auto hh = zero_mean_project(transform(s.h));
  return 0.5 * rho_u_sq(rho, s.u) +
         0.5 * s.params.lambda * spectral_inner(hh, apply_lambda(hh, s.params.alpha - d));
}

double xm_norm_sq(const State& s, int m) {
  const auto hh = transform(s.h);
  const auto uh = transform(s.u);
  const double sg = sigma0(s);
  const double a = sobolev_norm(hh, m, Norm::inhomogeneous);
  const double b = sobolev_norm(uh, m + sg, Norm::inhomogeneous);
  const double c = sobolev_norm(zero_mean_project(hh), -sg, Norm::homogeneous);
  return a * a + b * b + c * c;
}

std::vector<double> weighted_derivative_energies(const RealField& h, int m, double background) {
  RealField rho = h;
  for (double& v : rho.values()) v += background;
  require_positive(rho);
  return derivative_energies_with(transform(h), m, reciprocal(rho));
}

double modified_hm_norm(const RealField& h, int m, double background) {
  double out = 0.0;
  for (double v : weighted_derivative_energies(h, m, background)) out += std::sqrt(v);
  return out;
}

double hypo_cross(const State& s, int k) {
  const auto rho = density(s);
  require_positive(rho);
  return hypo_cross_with(transform(s.h), transform(s.u), s.grid()->dim() - s.params.alpha, k,
                         reciprocal(rho));
}

ProofFunctionals proof_functionals(const State& s, const DiagnosticsSettings& cfg) {
  const auto rho = density(s);
  require_positive(rho);
  return assemble(proof_parts(s, cfg.m_index, rho), s, cfg, negative_norm_ledger(s, cfg.s_neg));
}

SpectralVector potential_gradient(const SpectralField& h) {
  return gradient(apply_lambda(zero_mean_project(h), -2.0));
}

ModulatedEnergy modulated_energy(const State& s, double sigma) {
  const auto rho = density(s);
  const int d = s.grid()->dim();
  const double mass = integrate(rho);
  ModulatedEnergy out;
  RealVector dev = s.u;
  double dsq = 0.0;
  double mc_sq = 0.0;
  for (int a = 0; a < d; ++a) {
    const double raw = inner(rho, s.u[a]);
    const double avg = raw / mass;
    out.mc_raw.push_back(raw);
    out.mc.push_back(avg);
    mc_sq += avg * avg;
    for (double& v : dev[a].values()) v -= avg;
    dsq += inner(multiply(rho, dev[a]), dev[a]);
  }
  const auto hh = zero_mean_project(transform(s.h));
  const double potential = s.params.lambda * spectral_inner(hh, apply_lambda(hh, s.params.alpha - d));
  out.D = dsq;
  out.D_rate = s.params.gamma * dsq;
  out.E = 0.5 * dsq + 0.5 * potential;
  out.E_sigma = out.E + sigma * spectral_inner(transform(dev), potential_gradient(hh));
  out.u_dev_L2 = l2_norm(dev);
  return out;
}

NegativeNorms negative_norm_ledger(const State& s, double s_neg) {
  const auto hh = zero_mean_project(transform(s.h));
  const auto u0 = zero_mean_project(transform(s.u));
  const double sg = sigma0(s);
  const double d_minus_alpha = 2.0 * sg;
  NegativeNorms n;
  n.h_Hneg_half = sobolev_norm(hh, -sg, Norm::homogeneous);
  n.u_Hneg_s = sobolev_norm(u0, -s_neg, Norm::homogeneous);
  n.h_Hneg_s = sobolev_norm(hh, -s_neg - sg, Norm::homogeneous);
  n.h_Hneg_caseA = sobolev_norm(hh, -1.0 + sg, Norm::homogeneous);
  n.u_Hneg_caseA = sobolev_norm(u0, d_minus_alpha - 1.0, Norm::homogeneous);
  n.neg_cross = spectral_inner(apply_lambda(gradient(hh), -s_neg), apply_lambda(u0, -s_neg));
  n.caseA_cross = spectral_inner(hh, apply_lambda(divergence(transform(s.u)), d_minus_alpha - 2.0));
  return n;
}

DiagnosticsRecord compute_diagnostics(const State& s, const DiagnosticsSettings& cfg) {
  DiagnosticsRecord r;
  r.t = s.t;
  const auto rho = density(s);
  r.min_density = min_value(rho);
  r.E_total = total_energy(s);
  r.D_diss = s.params.gamma * rho_u_sq(rho, s.u);
  r.X_m = xm_norm_sq(s, cfg.m_index);
  const auto me = modulated_energy(s, cfg.sigma);
  r.E_mod = me.E;
  r.E_sigma = me.E_sigma;
  r.D_rate = me.D_rate;
  r.mc = me.mc;
  r.mc_raw = me.mc_raw;
  r.u_dev_L2 = me.u_dev_L2;
  double mc_sq = 0.0;
  for (double v : me.mc) mc_sq += v * v;
  r.mc_norm = std::sqrt(mc_sq);
  r.u_L2 = l2_norm(s.u);
  r.h_L2 = l2_norm(s.h);
  const auto neg = negative_norm_ledger(s, cfg.s_neg);
  r.h_Hneg_half = neg.h_Hneg_half;
  r.u_Hneg_s = neg.u_Hneg_s;
  r.h_Hneg_s = neg.h_Hneg_s;
  r.h_Hneg_caseA = neg.h_Hneg_caseA;
  r.u_Hneg_caseA = neg.u_Hneg_caseA;
  r.neg_cross = neg.neg_cross;
  r.caseA_cross = neg.caseA_cross;
  if (r.min_density > 0.0) {
    const auto parts = proof_parts(s, cfg.m_index, rho);
    r.tildeH_m = 0.0;
    for (double v : parts.S_sq) r.tildeH_m += std::sqrt(v);
    r.hypo_cross = parts.hypo;
    const auto pf = assemble(parts, s, cfg, neg);
    r.Y_m = pf.Y_m;
    r.Ybar_m = pf.Ybar_m;
    r.F_m = pf.F_m;
    r.Z_m = pf.Z_m;
  } else {
    r.tildeH_m = r.Y_m = r.Ybar_m = r.F_m = r.Z_m = kNaN;
    r.hypo_cross.assign(cfg.m_index, kNaN);
  }
  return r;
}

}  // namespace erz
