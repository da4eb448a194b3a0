#include "qiup/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace qiup::analytic {

double counts_no_object(Theta theta, const ProbeState& probe, const SourceConfig& src,
                        double t, double zeta) {
  const double dc = 0.5 * (src.b1 * src.b1 + src.b2 * src.b2);
  const double cross = src.b1 * src.b2 * t;
  if (theta == Theta::Deg0) return dc + cross * probe.beta1 * std::sin(probe.gamma - zeta);
  return dc - cross * probe.alpha1 * std::sin(zeta);
}

double dc_with_object(const ProbeState& probe, const JonesObject& obj, const SourceConfig& src) {
  const double a = probe.alpha1;
  const double b = probe.beta1;
  const double g = probe.gamma;
  const double d = obj.kappa * obj.kappa + a * a * obj.tau_h * obj.tau_h +
                   b * b * obj.tau_v * obj.tau_v +
                   2.0 * a * b * obj.kappa *
                       (obj.tau_h * std::cos(obj.phi_h - g - obj.xi) -
                        obj.tau_v * std::cos(obj.phi_v + g + obj.xi));
  return 0.5 * src.b2 * src.b2 + 0.5 * src.b1 * src.b1 * d;
}

double counts_with_object(Theta theta, const ProbeState& probe, const JonesObject& obj,
                          const SourceConfig& src, double t, double zeta) {
  const double a = probe.alpha1;
  const double b = probe.beta1;
  const double g = probe.gamma;
  const double cross = src.b1 * src.b2 * t;
  double ac;
  if (theta == Theta::Deg0) {
    ac = a * obj.kappa * std::sin(obj.xi + zeta) +
         b * obj.tau_v * std::sin(obj.phi_v + g - zeta);
  } else {
    ac = a * obj.tau_h * std::sin(obj.phi_h - zeta) +
         b * obj.kappa * std::sin(obj.xi + g - zeta);
  }
  return dc_with_object(probe, obj, src) + cross * ac;
}

double counts_general(Theta theta, const AmplitudePair& pair, const SourceConfig& src,
                      double t, double zeta) {
  const Complex k = (theta == Theta::Deg0) ? pair.b_pp : pair.a_pp;
  const double dc = 0.5 * src.b1 * src.b1 * (std::norm(pair.a_pp) + std::norm(pair.b_pp)) +
                    0.5 * src.b2 * src.b2;
  const Complex rot = k * Complex{std::cos(zeta), -std::sin(zeta)};
  return dc + src.b1 * src.b2 * t * rot.imag();
}

double visibility(double amplitude, double dc) {
  if (!(dc > 0.0)) throw std::invalid_argument("visibility: dc must be positive");
  if (amplitude < 0.0) throw std::invalid_argument("visibility: amplitude must be nonnegative");
  if (amplitude > dc)
    throw std::invalid_argument("visibility: amplitude exceeds dc (negative counts implied)");
  return amplitude / dc;
}

std::vector<double> counts_with_object_grid(Theta theta, const ProbeState& probe,
                                            const JonesObject& obj, const SourceConfig& src,
                                            double t, std::span<const double> zeta_grid) {
  std::vector<double> out(zeta_grid.size());
  const std::int64_t n = static_cast<std::int64_t>(zeta_grid.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        counts_with_object(theta, probe, obj, src, t, zeta_grid[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<double> counts_with_object_grid_serial(Theta theta, const ProbeState& probe,
                                                   const JonesObject& obj,
                                                   const SourceConfig& src, double t,
                                                   std::span<const double> zeta_grid) {
  std::vector<double> out(zeta_grid.size());
  for (std::size_t i = 0; i < zeta_grid.size(); ++i)
    out[i] = counts_with_object(theta, probe, obj, src, t, zeta_grid[i]);
  return out;
}

std::vector<double> counts_general_grid(Theta theta, const AmplitudePair& pair,
                                        const SourceConfig& src, double t,
                                        std::span<const double> zeta_grid) {
  std::vector<double> out(zeta_grid.size());
  const std::int64_t n = static_cast<std::int64_t>(zeta_grid.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        counts_general(theta, pair, src, t, zeta_grid[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<double> counts_no_object_grid(Theta theta, const ProbeState& probe,
                                          const SourceConfig& src, double t,
                                          std::span<const double> zeta_grid) {
  std::vector<double> out(zeta_grid.size());
  for (std::size_t i = 0; i < zeta_grid.size(); ++i)
    out[i] = counts_no_object(theta, probe, src, t, zeta_grid[i]);
  return out;
}

}  // namespace qiup::analytic
