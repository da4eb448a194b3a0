#pragma once

#include <span>

#include "qiup/acquisition.hpp"

// Exact linear least-squares estimation of the fringe model
//   counts(zeta) = C + A sin(zeta + phi)
// via the reparameterization counts = c + p sin(zeta) + q cos(zeta): no
// initialization, no iteration, exact on noiseless data.
namespace qiup::fitting {

struct FitErrors {
  double c = 0.0;
  double a = 0.0;
  double phi = 0.0;
};

struct SinusoidFit {
  double c = 0.0;    // DC counts
  double a = 0.0;    // fringe amplitude, >= 0 (sign folded into phi)
  double phi = 0.0;  // radians in [-pi, pi)
  double residual_rms = 0.0;
  FitErrors err;     // standard errors from the linear-model covariance
  bool phase_undetermined = false;  // a indistinguishable from zero
  bool poisson_weighted = false;
};

// Fits counts over the phase grid. Preconditions: >= 8 points and a grid that
// covers the fringe period (the default 32-point uniform grid qualifies);
// degenerate grids surface as a singular-normal-equations error
// (std::runtime_error). With poisson_weights the rows are weighted by
// 1/max(count, 1); use for sampled datasets, unweighted otherwise.
SinusoidFit fit_sinusoid(std::span<const double> zeta_grid, std::span<const double> counts,
                         bool poisson_weights);

// Dataset overload: weighting follows ds.config.noise.
SinusoidFit fit_sinusoid(const acquisition::FringeDataset& ds);

// Fringe visibility a/c. Requires c > 0; a > c throws (would imply negative
// counts somewhere in the fringe).
double visibility_of(const SinusoidFit& fit);

// Standard error of a/c propagated from the fit covariance.
double visibility_err_of(const SinusoidFit& fit);

}  // namespace qiup::fitting
