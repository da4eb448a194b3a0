#pragma once

#include <span>
#include <vector>

#include "qiup/jones.hpp"
#include "qiup/types.hpp"

// Closed-form vertical-count and visibility formulas, expressed per generated
// pair (dimensionless probabilities). These are transcriptions of the count
// algebra and deliberately share no code with the state-vector oracle; the
// two routes are compared term by term in the tests and the validate command.
//
// Sign conventions: the theta=0 interference term is
//   + b1 b2 T (alpha1 kappa sin(xi+zeta) + beta1 tau_v sin(phi_v+gamma-zeta))
// and the theta=45 one is
//   + b1 b2 T (alpha1 tau_h sin(phi_h-zeta) + beta1 kappa sin(xi+gamma-zeta)),
// both being specializations of counts_general below.
namespace qiup::analytic {

// No-object counts.
// theta=0:  (b1^2+b2^2)/2 + b1 b2 T beta1  sin(gamma - zeta)
// theta=45: (b1^2+b2^2)/2 - b1 b2 T alpha1 sin(zeta)
// src.zeta is ignored; the scanned phase is the explicit argument.
double counts_no_object(Theta theta, const ProbeState& probe, const SourceConfig& src,
                        double t, double zeta);

// Counts behind a six-parameter object; the DC block is shared by both theta
// settings. No passivity requirement: the formula is a polynomial in the
// parameters and the refiner evaluates it at perturbed points.
double counts_with_object(Theta theta, const ProbeState& probe, const JonesObject& obj,
                          const SourceConfig& src, double t, double zeta);

// Generic form built from the prepared-and-transformed idler coefficients:
//   b1^2/2 (|A''|^2 + |B''|^2) + b2^2/2 + b1 b2 T Im(K e^{-i zeta})
// with K = B'' at theta=0 and K = A'' at theta=45 (the role swap lives here
// and only here).
double counts_general(Theta theta, const AmplitudePair& pair, const SourceConfig& src,
                      double t, double zeta);

// Shared DC block of the with-object counts (exposed for tests and the H/V
// inversion): b2^2/2 + b1^2/2 (kappa^2 + alpha1^2 tau_h^2 + beta1^2 tau_v^2
// + 2 alpha1 beta1 kappa (tau_h cos(phi_h-gamma-xi) - tau_v cos(phi_v+gamma+xi))).
double dc_with_object(const ProbeState& probe, const JonesObject& obj,
                      const SourceConfig& src);

// Fringe contrast of a pure sinusoid with DC offset `dc` and amplitude
// `amplitude`: (max-min)/(max+min) = amplitude/dc. Requires
// dc > 0 and 0 <= amplitude <= dc; amplitude > dc throws (negative counts).
double visibility(double amplitude, double dc);

// Grid kernels (per-pair probabilities over a phase scan). Points are
// independent; the parallel versions run under OpenMP and are bit-identical
// to their serial references.
std::vector<double> counts_with_object_grid(Theta theta, const ProbeState& probe,
                                            const JonesObject& obj, const SourceConfig& src,
                                            double t, std::span<const double> zeta_grid);
std::vector<double> counts_with_object_grid_serial(Theta theta, const ProbeState& probe,
                                                   const JonesObject& obj,
                                                   const SourceConfig& src, double t,
                                                   std::span<const double> zeta_grid);
std::vector<double> counts_general_grid(Theta theta, const AmplitudePair& pair,
                                        const SourceConfig& src, double t,
                                        std::span<const double> zeta_grid);
std::vector<double> counts_no_object_grid(Theta theta, const ProbeState& probe,
                                          const SourceConfig& src, double t,
                                          std::span<const double> zeta_grid);

}  // namespace qiup::analytic
