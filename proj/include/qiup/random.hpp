#pragma once

#include <random>

#include "qiup/jones.hpp"
#include "qiup/types.hpp"

// Seeded draws of probes and sample objects for validation runs and tests.
namespace qiup::rng {

// Uniform direction on the (alpha1, beta1) quarter circle, gamma in [-pi, pi).
ProbeState random_probe(std::mt19937_64& eng);

// Six-parameter object drawn inside the column-passivity region and accepted
// only when the full matrix is passive (largest singular value <= 1).
// min_kappa > 0 keeps the coupling fringes measurable.
JonesObject random_passive_object(std::mt19937_64& eng, double min_kappa = 0.0);

// Unitary member of the six-parameter family: tau_h = tau_v = cos(v),
// kappa = sin(v), phi_v = -phi_h.
JonesObject random_unitary_object(std::mt19937_64& eng);

}  // namespace qiup::rng
