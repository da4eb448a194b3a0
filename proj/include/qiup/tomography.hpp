#pragma once

#include <string>
#include <vector>

#include "qiup/fitting.hpp"
#include "qiup/jones.hpp"

// The reconstruction methodology: calibrate the idler-arm transmission from
// known-probe fringes, invert the four H/V fringe fits into the six object
// parameters with a dual-kappa/dual-xi consistency check, then refine all
// parameters against every dataset by damped least squares.
namespace qiup::tomography {

struct Ratios {
  double r1 = 0.0;  // kappa / tau_h
  double r2 = 0.0;  // tau_v / kappa
};

struct Consistency {
  double kappa_rel_discrepancy = 0.0;
  double xi_rel_discrepancy = 0.0;
  bool pass = true;
};

struct Reconstruction {
  double t_hat = 1.0;
  ProbeState probe_hat{1.0, 0.0, 0.0};
  double kappa_alpha = 0.0;
  double kappa_beta = 0.0;
  JonesObject object;
  double dphi = 0.0;  // phi_h - phi_v, wrapped
  Ratios ratios;
  double xi1 = 0.0;   // xi from the (alpha=1, theta=0) fringe phase
  double xi2 = 0.0;   // xi from the (beta=1, theta=45) fringe phase
  bool kappa_is_upper_bound = false;  // set when the coupling fringes are below the noise floor
  Consistency consistency;
  bool refined = false;
  double residual_rms = 0.0;  // rms of (model - counts)/pairs, probability units
  int iterations = 0;
};

// The four H/V fits in methodology order plus the counts-to-probability scale
// (pairs per point, from dataset metadata).
struct HvFits {
  fitting::SinusoidFit theta0_alpha1;
  fitting::SinusoidFit theta45_alpha1;
  fitting::SinusoidFit theta0_beta1;
  fitting::SinusoidFit theta45_beta1;
  double pairs_scale = 1.0;
};

// T from the two known-probe, no-object fringes: each visibility equals T, so
// T_hat is their mean; rel_spread (optional out) reports their disagreement.
// Throws if either visibility exceeds 1 beyond 3 standard errors.
double calibrate_T(const fitting::SinusoidFit& theta0_beta1,
                   const fitting::SinusoidFit& theta45_alpha1,
                   double* rel_spread = nullptr);

// Recovers an unknown probe from its pair of no-object fringes at known T:
// beta1 = nu(theta=0)/T, alpha1 = nu(theta=45)/T (renormalized; deviations of
// alpha^2+beta^2 from 1 beyond 0.1 before renormalization throw) and
// gamma = wrap(pi - phi_theta0). theta45_phase_residual (optional out) is the
// theta=45 reference phase wrap(pi - phi_theta45), expected 0.
ProbeState characterize_probe(const fitting::SinusoidFit& theta0,
                              const fitting::SinusoidFit& theta45, double t,
                              double* theta45_phase_residual = nullptr);

// H/V-basis inversion. Visibility ratios give R1 = kappa/tau_h and
// R2 = tau_v/kappa; the fitted DC values give two independent kappa estimates
//   kappa_alpha = sqrt((2 C_a - b2^2 s) / (b1^2 s (1 + 1/R1^2)))
//   kappa_beta  = sqrt((2 C_b - b2^2 s) / (b1^2 s (1 + R2^2)))
// whose agreement validates the data against the model. Phases come from the
// fitted offsets under the a >= 0 convention:
//   xi1 = wrap(phi_28), xi2 = wrap(pi - phi_31),
//   phi_h = wrap(pi - phi_29), phi_v = wrap(pi - phi_30)
// (28..31 = the four H/V fringes in battery order). A fringe counts as
// measurable when a > 5 stderr(a); an unmeasurable coupling fringe yields an
// upper bound on kappa instead of a point estimate, with tau taken from the
// DC values at kappa = 0. A negative radicand throws std::runtime_error
// naming the offending dataset.
Reconstruction extract_hv(const HvFits& fits, double t, double b1, double b2,
                          double consistency_tol = 0.05);

struct RefineOptions {
  int max_iterations = 200;
  double cost_rel_tol = 1e-12;  // relative cost change convergence test
  double step_tol = 1e-10;      // step-norm convergence test
  double amp_step = 1e-6;       // central-difference step, amplitude parameters
  double phase_step = 1e-5;     // central-difference step, phase parameters (rad)
};

// Damped least squares over the six object parameters (T, b1, b2 held fixed),
// starting from the H/V-inferred estimate. Levenberg damping on the
// Gauss-Newton normal equations: damping grows tenfold when a step increases
// the cost and shrinks tenfold on success, so the accepted-cost sequence is
// non-increasing. Residuals are (model - counts) with Poisson weights
// 1/max(count,1) on sampled datasets. Jacobian by central finite differences.
// Cost and gradient sums run in fixed dataset-then-index order, so results do
// not depend on evaluation order. Returns the best iterate; `refined` is true
// only when a convergence test fired within the iteration cap. Final
// parameters are canonicalized and checked against passivity (projection
// tolerance 1e-6, larger violations throw).
Reconstruction refine_global(const std::vector<acquisition::FringeDataset>& datasets,
                             const Reconstruction& initial, double b1, double b2,
                             const RefineOptions& opts = {});

// Unweighted rms of (model - counts)/pairs over the given datasets,
// probability units; the figure reported in Reconstruction::residual_rms.
double residual_rms(const std::vector<acquisition::FringeDataset>& datasets,
                    const JonesObject& obj, double t, double b1, double b2);

}  // namespace qiup::tomography
