#pragma once
//
// Right-hand side of the damped Euler-Riesz system in perturbation form
//     dt h + div((c + h) u) = 0,
//     dt u + (u.grad) u     = -gamma u - lambda grad Lambda^{alpha-d} h,
// and the exact per-mode propagator of its linearisation about (0, 0).
//

#include <array>
#include <utility>

#include "erz/spectral.hpp"

namespace erz {

struct PhysicsParams {
  double alpha = 1.0;
  double gamma = 1.0;
  double lambda = 1.0;
  double background = 1.0;
};

/// Real-space snapshot. Real samples are the canonical representation so
/// that checkpoints restore exactly.
struct State {
  PhysicsParams params;
  RealField h;
  RealVector u;
  double t = 0.0;

  const GridPtr& grid() const noexcept { return h.grid_ptr(); }
};

State zero_state(const GridPtr& grid, const PhysicsParams& params);

/// Spectral image of (h, u); also the type of time derivatives.
struct SpectralState {
  SpectralField h;
  SpectralVector u;

  static SpectralState zeros_like(const SpectralState& w);
  SpectralState& axpy(double a, const SpectralState& other);
};

SpectralState to_spectral(const State& s);
/// Overwrites the fields of `s` with the real image of `w`.
void from_spectral(const SpectralState& w, State& s);

struct StateDerivative {
  RealField dh;
  RealVector du;
};

struct RhsOptions {
  bool dealias = true;
  double density_floor = 1e-8;
  bool nonlinear = true;
};

/// -lambda grad Lambda^{alpha-d} h. Throws DomainError for non-zero-mean h.
SpectralVector riesz_force(const SpectralField& h, const PhysicsParams& p);

/// Throws BlowUpError (carrying t) if min(c + h) <= floor or any sample of
/// h or u is not finite.
void check_density(const RealField& h, const RealVector& u, double background,
                   double floor, double t);

/// Linear part L(w): (-c div u, -gamma u - lambda grad Lambda^{alpha-d} h).
SpectralState linear_rhs(const SpectralState& w, const PhysicsParams& p);
/// Quadratic remainder N(w): (-div(h u), -(u.grad) u), with dealiased factors
/// and dealiased products when requested; zero when nonlinear is off. Checks
/// the density of w at time t.
SpectralState nonlinear_rhs(const SpectralState& w, const PhysicsParams& p,
                            const RhsOptions& opt, double t);
/// L(w) + N(w), with dh re-projected to zero mean.
SpectralState full_rhs(const SpectralState& w, const PhysicsParams& p,
                       const RhsOptions& opt, double t);

StateDerivative compute_rhs(const State& s, const RhsOptions& opt = {});

/// Roots of z^2 + gamma z + c lambda kappa^{alpha-d+2} = 0, ordered so that
/// Re(first) <= Re(second).
std::pair<Complex, Complex> linear_eigenvalues(double kappa, double alpha, int d, double gamma,
                                               double lambda, double background = 1.0);

using Mat2 = std::array<std::array<Complex, 2>, 2>;

/// Generator of the longitudinal subsystem for (h_hat, a), a = e.u_hat with
/// e the unit derivative wavevector. `deriv_norm` is |kappa'| and
/// `kappa_norm` is |kappa|.
Mat2 mode_matrix(double deriv_norm, double kappa_norm, int d, const PhysicsParams& p);
/// Closed form 2x2 matrix exponential.
Mat2 expm2(const Mat2& a);

class PropagatorTable {
 public:
  PropagatorTable(GridPtr grid, const PhysicsParams& p, double dt);

  double dt() const noexcept { return dt_; }
  const Mat2& matrix(std::size_t mode) const noexcept { return mats_[mode]; }
  double transverse_decay() const noexcept { return decay_; }
  /// Applies exp(dt L) to w.
  SpectralState apply(const SpectralState& w) const;

 private:
  GridPtr grid_;
  double dt_;
  double decay_;
  std::vector<Mat2> mats_;
};

PropagatorTable build_propagator(const GridPtr& grid, const PhysicsParams& p, double dt);

}  // namespace erz
