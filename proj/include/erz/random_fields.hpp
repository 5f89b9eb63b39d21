#pragma once

#include <random>

#include "erz/spectral.hpp"

namespace erz {

/// Gaussian coefficients with envelope exp(-|kappa|^2 / width^2), real-valued,
/// zero-mean and dealiased. Not normalised.
SpectralField random_smooth(const GridPtr& grid, double width, std::mt19937_64& rng);

/// Same construction with every mode outside |m_j| < max_index removed.
SpectralField random_band_limited(const GridPtr& grid, double width, int max_index,
                                  std::mt19937_64& rng);

/// Rescales f so that max |f| = amplitude (f = 0 stays 0).
void normalize_max(RealField& f, double amplitude);

}  // namespace erz
