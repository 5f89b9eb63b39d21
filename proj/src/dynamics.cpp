#include "erz/dynamics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "erz/errors.hpp"

namespace erz {

State zero_state(const GridPtr& grid, const PhysicsParams& params) {
  State s{params, RealField(grid), {}, 0.0};
  for (int a = 0; a < grid->dim(); ++a) s.u.emplace_back(grid);
  return s;
}

SpectralState SpectralState::zeros_like(const SpectralState& w) {
  return {SpectralField(w.h.grid_ptr()), zeros(w.h.grid_ptr(), static_cast<int>(w.u.size()))};
}

SpectralState& SpectralState::axpy(double a, const SpectralState& other) {
  h.axpy(a, other.h);
  for (std::size_t i = 0; i < u.size(); ++i) u[i].axpy(a, other.u[i]);
  return *this;
}

SpectralState to_spectral(const State& s) { return {transform(s.h), transform(s.u)}; }

void from_spectral(const SpectralState& w, State& s) {
  s.h = inverse_transform(w.h);
  s.u = inverse_transform(w.u);
}

SpectralVector riesz_force(const SpectralField& h, const PhysicsParams& p) {
  const int d = h.grid().dim();
  auto f = gradient(apply_lambda(h, p.alpha - d));
  for (auto& c : f) c *= Complex(-p.lambda, 0.0);
  return f;
}

void check_density(const RealField& h, const RealVector& u, double background, double floor,
                   double t) {
  double lo = std::numeric_limits<double>::infinity();
  bool finite = true;
  for (double v : h.values()) {
    finite = finite && std::isfinite(v);
    lo = std::min(lo, background + v);
  }
  for (const auto& c : u)
    for (double v : c.values()) finite = finite && std::isfinite(v);
  if (!finite) {
    throw BlowUpError(t, std::isfinite(lo) ? lo : std::numeric_limits<double>::quiet_NaN(),
                      "non-finite field value at t=" + std::to_string(t));
  }
  if (lo <= floor) {
    throw BlowUpError(t, lo,
                      "density " + std::to_string(lo) + " reached the floor at t=" + std::to_string(t));
  }
}

SpectralState linear_rhs(const SpectralState& w, const PhysicsParams& p) {
  SpectralState out{divergence(w.u), riesz_force(zero_mean_project(w.h), p)};
  out.h *= Complex(-p.background, 0.0);
  for (std::size_t a = 0; a < w.u.size(); ++a) out.u[a].axpy(-p.gamma, w.u[a]);
  return out;
}

SpectralState nonlinear_rhs(const SpectralState& w, const PhysicsParams& p, const RhsOptions& opt,
                            double t) {
  const RealField h = inverse_transform(w.h);
  const RealVector u = inverse_transform(w.u);
  check_density(h, u, p.background, opt.density_floor, t);

  SpectralState out = SpectralState::zeros_like(w);
  if (!opt.nonlinear) return out;

  const int d = w.h.grid().dim();
  const SpectralField hs = opt.dealias ? dealias(w.h) : w.h;
  const SpectralVector us = opt.dealias ? dealias(w.u) : w.u;
  const RealField hf = opt.dealias ? inverse_transform(hs) : h;
  const RealVector uf = opt.dealias ? inverse_transform(us) : u;
  auto finish = [&](const RealField& r) {
    auto c = transform(r);
    return opt.dealias ? dealias(c) : c;
  };

  SpectralVector flux;
  flux.reserve(d);
  for (int a = 0; a < d; ++a) flux.push_back(finish(multiply(hf, uf[a])));
  out.h = divergence(flux);
  out.h *= Complex(-1.0, 0.0);
  out.h[0] = 0.0;

  for (int a = 0; a < d; ++a) {
    RealField adv(w.h.grid_ptr());
    for (int b = 0; b < d; ++b) {
      const RealField dua = inverse_transform(partial(us[a], b));
      for (std::size_t i = 0; i < adv.size(); ++i) adv[i] += uf[b][i] * dua[i];
    }
    out.u[a] = finish(adv);
    out.u[a] *= Complex(-1.0, 0.0);
  }
  return out;
}

SpectralState full_rhs(const SpectralState& w, const PhysicsParams& p, const RhsOptions& opt,
                       double t) {
  SpectralState out = nonlinear_rhs(w, p, opt, t);
  out.axpy(1.0, linear_rhs(w, p));
  out.h[0] = 0.0;
  return out;
}

StateDerivative compute_rhs(const State& s, const RhsOptions& opt) {
  const auto r = full_rhs(to_spectral(s), s.params, opt, s.t);
  return {inverse_transform(r.h), inverse_transform(r.u)};
}

std::pair<Complex, Complex> linear_eigenvalues(double kappa, double alpha, int d, double gamma,
                                               double lambda, double background) {
  const double p = background * lambda * std::pow(kappa, alpha - d + 2.0);
  const double disc = gamma * gamma - 4.0 * p;
  if (disc >= 0.0) {
    const double q = -0.5 * (gamma + std::sqrt(disc));
    if (q == 0.0) return {0.0, 0.0};
    return {q, p / q};
  }
  const double im = 0.5 * std::sqrt(-disc);
  return {Complex(-0.5 * gamma, -im), Complex(-0.5 * gamma, im)};
}

Mat2 mode_matrix(double deriv_norm, double kappa_norm, int d, const PhysicsParams& p) {
  const Complex i(0.0, 1.0);
  Mat2 m{};
  m[0][0] = 0.0;
  m[0][1] = -i * p.background * deriv_norm;
  m[1][0] = kappa_norm > 0.0 ? -i * p.lambda * deriv_norm * std::pow(kappa_norm, p.alpha - d)
                             : Complex(0.0, 0.0);
  m[1][1] = -p.gamma;
  return m;
}

Mat2 expm2(const Mat2& a) {
  const Complex mu = 0.5 * (a[0][0] + a[1][1]);
  const Complex det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  const Complex delta2 = mu * mu - det;
  Complex ch;
  Complex sh;  // sinh(delta) / delta
  if (std::abs(delta2) < 1e-6) {
    // Taylor series in delta^2, accurate to far below double rounding here.
    ch = 1.0 + delta2 / 2.0 + delta2 * delta2 / 24.0 + delta2 * delta2 * delta2 / 720.0;
    sh = 1.0 + delta2 / 6.0 + delta2 * delta2 / 120.0 + delta2 * delta2 * delta2 / 5040.0;
  } else {
    const Complex delta = std::sqrt(delta2);
    ch = std::cosh(delta);
    sh = std::sinh(delta) / delta;
  }
  const Complex e = std::exp(mu);
  Mat2 out{};
  out[0][0] = e * (ch + sh * (a[0][0] - mu));
  out[0][1] = e * sh * a[0][1];
  out[1][0] = e * sh * a[1][0];
  out[1][1] = e * (ch + sh * (a[1][1] - mu));
  return out;
}

PropagatorTable::PropagatorTable(GridPtr grid, const PhysicsParams& p, double dt)
    : grid_(std::move(grid)), dt_(dt), decay_(std::exp(-p.gamma * dt)) {
  if (!(dt >= 0.0)) throw ConfigError("dt", "propagator step must be nonnegative");
  const Grid& g = *grid_;
  mats_.resize(g.size());
  for (std::size_t m = 0; m < g.size(); ++m) {
    Mat2 gen = mode_matrix(g.deriv_norm(m), g.kappa_norm(m), g.dim(), p);
    for (auto& row : gen)
      for (auto& v : row) v *= dt;
    mats_[m] = expm2(gen);
  }
}

SpectralState PropagatorTable::apply(const SpectralState& w) const {
  const Grid& g = *grid_;
  const int d = g.dim();
  SpectralState out = w;
  for (std::size_t m = 0; m < g.size(); ++m) {
    const double kn = g.deriv_norm(m);
    if (kn == 0.0) {
      for (int a = 0; a < d; ++a) out.u[a][m] *= decay_;
      continue;
    }
    Complex along(0.0, 0.0);
    for (int a = 0; a < d; ++a) along += (g.deriv_kappa(m, a) / kn) * w.u[a][m];
    const Mat2& e = mats_[m];
    const Complex hn = e[0][0] * w.h[m] + e[0][1] * along;
    const Complex an = e[1][0] * w.h[m] + e[1][1] * along;
    out.h[m] = hn;
    for (int a = 0; a < d; ++a) {
      const double ea = g.deriv_kappa(m, a) / kn;
      out.u[a][m] = (w.u[a][m] - along * ea) * decay_ + an * ea;
    }
  }
  return out;
}

PropagatorTable build_propagator(const GridPtr& grid, const PhysicsParams& p, double dt) {
  return PropagatorTable(grid, p, dt);
}

}  // namespace erz
