#pragma once

#include <array>

#include "qiup/types.hpp"

namespace qiup {

// General 2x2 complex polarization transfer matrix acting on (H, V)
// coefficient columns: |H> -> hh|H> + vh|V>, |V> -> hv|H> + vv|V>.
struct JonesMatrix {
  Complex hh;
  Complex hv;
  Complex vh;
  Complex vv;
};

// Six-parameter sample model: diattenuation (tau_h, tau_v), birefringence
// phases (phi_h, phi_v) and H<->V coupling with strength kappa and phase xi.
// Aggregate on purpose: the refiner perturbs raw parameters during finite
// differencing; call validate()/checked() at trust boundaries.
struct JonesObject {
  double tau_h = 1.0;
  double tau_v = 1.0;
  double kappa = 0.0;
  double phi_h = 0.0;
  double phi_v = 0.0;
  double xi = 0.0;

  // Throws std::invalid_argument on range or column-passivity violations
  // (tau^2 + kappa^2 <= 1 + 1e-9 per column).
  void validate() const;

  static JonesObject checked(double tau_h, double tau_v, double kappa,
                             double phi_h, double phi_v, double xi);
  static JonesObject identity() { return {}; }
};

// Matrix form [[tau_h e^{i phi_h}, kappa e^{i xi}],
//              [-kappa e^{-i xi},  tau_v e^{i phi_v}]].
JonesMatrix to_matrix(const JonesObject& obj);

// Singular values in descending order (closed form via M^dagger M).
std::array<double, 2> singular_values(const JonesMatrix& m);

// True when the largest singular value is <= 1 + tol.
bool is_passive(const JonesMatrix& m, double tol = 1e-9);

// Crystal-1 idler coefficients after preparation and object:
// a_pp = alpha1*O_HH + beta1 e^{i gamma}*O_HV  (|H> coefficient, A'')
// b_pp = alpha1*O_VH + beta1 e^{i gamma}*O_VV  (|V> coefficient, B'')
struct AmplitudePair {
  Complex a_pp;
  Complex b_pp;
};

AmplitudePair amplitudes(const JonesMatrix& m, const ProbeState& probe);
AmplitudePair amplitudes(const JonesObject& obj, const ProbeState& probe);

// Fold sign conventions back into the canonical ranges (amplitudes >= 0 with
// the sign absorbed into the paired phase, phases wrapped to [-pi, pi)), then
// rescale onto the passivity boundary if violated by less than boundary_tol;
// larger violations throw.
JonesObject canonical_object(double tau_h, double tau_v, double kappa,
                             double phi_h, double phi_v, double xi,
                             double boundary_tol = 1e-6);

}  // namespace qiup
