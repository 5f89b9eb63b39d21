#include "erz/random_fields.hpp"

#include <cmath>
#include <cstdlib>

namespace erz {

SpectralField random_band_limited(const GridPtr& grid, double width, int max_index,
                                  std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  const Grid& g = *grid;
  SpectralField c(grid);
  for (std::size_t m = 0; m < g.size(); ++m) {
    const double re = nd(rng);
    const double im = nd(rng);
    bool keep = true;
    for (int a = 0; a < g.dim(); ++a) keep = keep && std::abs(g.lattice(m, a)) < max_index;
    const double k = g.kappa_norm(m);
    c[m] = keep ? Complex(re, im) * std::exp(-k * k / (width * width)) : Complex(0.0, 0.0);
  }
  // Real part of the synthesised field, so that coefficients are Hermitian.
  auto f = inverse_transform(c);
  return zero_mean_project(dealias(transform(f)));
}

SpectralField random_smooth(const GridPtr& grid, double width, std::mt19937_64& rng) {
  return random_band_limited(grid, width, grid->points(), rng);
}

void normalize_max(RealField& f, double amplitude) {
  const double mx = max_abs(f);
  if (mx > 0.0) f *= amplitude / mx;
}

}  // namespace erz
