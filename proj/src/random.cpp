#include "qiup/random.hpp"

#include <cmath>

#include "qiup/common.hpp"

namespace qiup::rng {

namespace {
double uniform(std::mt19937_64& eng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(eng);
}
}  // namespace

ProbeState random_probe(std::mt19937_64& eng) {
  const double u = uniform(eng, 0.0, std::numbers::pi / 2.0);
  return ProbeState{std::cos(u), std::sin(u), uniform(eng, -std::numbers::pi, std::numbers::pi)};
}

JonesObject random_passive_object(std::mt19937_64& eng, double min_kappa) {
  for (;;) {
    const double kappa = uniform(eng, min_kappa, 1.0);
    const double cap = std::sqrt(std::max(0.0, 1.0 - kappa * kappa));
    JonesObject obj{uniform(eng, 0.0, cap),
                    uniform(eng, 0.0, cap),
                    kappa,
                    uniform(eng, -std::numbers::pi, std::numbers::pi),
                    uniform(eng, -std::numbers::pi, std::numbers::pi),
                    uniform(eng, -std::numbers::pi, std::numbers::pi)};
    // Column passivity holds by construction; keep only fully passive draws
    // so the state-vector oracle accepts the matrix.
    if (singular_values(to_matrix(obj))[0] <= 1.0 - 1e-12) return obj;
  }
}

JonesObject random_unitary_object(std::mt19937_64& eng) {
  const double v = uniform(eng, 0.0, std::numbers::pi / 2.0);
  const double phi_h = uniform(eng, -std::numbers::pi, std::numbers::pi);
  return JonesObject{std::cos(v),          std::cos(v), std::sin(v),
                     phi_h,                wrap_pi(-phi_h),
                     uniform(eng, -std::numbers::pi, std::numbers::pi)};
}

}  // namespace qiup::rng
