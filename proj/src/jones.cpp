#include "qiup/jones.hpp"

#include <cmath>
#include <stdexcept>

#include "qiup/common.hpp"

namespace qiup {

namespace {
constexpr double passivity_slack = 1e-9;

Complex polar1(double phase) { return {std::cos(phase), std::sin(phase)}; }
}  // namespace

void JonesObject::validate() const {
  if (!(tau_h >= 0.0 && tau_h <= 1.0 + passivity_slack))
    throw std::invalid_argument("JonesObject: tau_h must lie in [0, 1]");
  if (!(tau_v >= 0.0 && tau_v <= 1.0 + passivity_slack))
    throw std::invalid_argument("JonesObject: tau_v must lie in [0, 1]");
  if (!(kappa >= 0.0 && kappa <= 1.0 + passivity_slack))
    throw std::invalid_argument("JonesObject: kappa must lie in [0, 1]");
  if (tau_h * tau_h + kappa * kappa > 1.0 + passivity_slack)
    throw std::invalid_argument("JonesObject: tau_h^2 + kappa^2 exceeds 1 (column passivity)");
  if (tau_v * tau_v + kappa * kappa > 1.0 + passivity_slack)
    throw std::invalid_argument("JonesObject: tau_v^2 + kappa^2 exceeds 1 (column passivity)");
}

JonesObject JonesObject::checked(double tau_h, double tau_v, double kappa, double phi_h,
                                 double phi_v, double xi) {
  JonesObject obj{tau_h, tau_v, kappa, wrap_pi(phi_h), wrap_pi(phi_v), wrap_pi(xi)};
  obj.validate();
  return obj;
}

JonesMatrix to_matrix(const JonesObject& obj) {
  return JonesMatrix{
      obj.tau_h * polar1(obj.phi_h),
      obj.kappa * polar1(obj.xi),
      -obj.kappa * polar1(-obj.xi),
      obj.tau_v * polar1(obj.phi_v),
  };
}

std::array<double, 2> singular_values(const JonesMatrix& m) {
  // Eigenvalues of the 2x2 Hermitian M^dagger M in closed form.
  const double g11 = std::norm(m.hh) + std::norm(m.vh);
  const double g22 = std::norm(m.hv) + std::norm(m.vv);
  const Complex g12 = std::conj(m.hh) * m.hv + std::conj(m.vh) * m.vv;
  const double tr = g11 + g22;
  const double disc = std::sqrt((g11 - g22) * (g11 - g22) + 4.0 * std::norm(g12));
  const double hi = 0.5 * (tr + disc);
  const double lo = std::max(0.0, 0.5 * (tr - disc));
  return {std::sqrt(hi), std::sqrt(lo)};
}

bool is_passive(const JonesMatrix& m, double tol) {
  return singular_values(m)[0] <= 1.0 + tol;
}

AmplitudePair amplitudes(const JonesMatrix& m, const ProbeState& probe) {
  const Complex beta = probe.beta1 * polar1(probe.gamma);
  return AmplitudePair{
      probe.alpha1 * m.hh + beta * m.hv,
      probe.alpha1 * m.vh + beta * m.vv,
  };
}

AmplitudePair amplitudes(const JonesObject& obj, const ProbeState& probe) {
  return amplitudes(to_matrix(obj), probe);
}

JonesObject canonical_object(double tau_h, double tau_v, double kappa, double phi_h,
                             double phi_v, double xi, double boundary_tol) {
  // A negative amplitude is the same object with the paired phase advanced by pi.
  if (kappa < 0.0) {
    kappa = -kappa;
    xi += std::numbers::pi;
  }
  if (tau_h < 0.0) {
    tau_h = -tau_h;
    phi_h += std::numbers::pi;
  }
  if (tau_v < 0.0) {
    tau_v = -tau_v;
    phi_v += std::numbers::pi;
  }
  const double worst = std::max({tau_h * tau_h + kappa * kappa,
                                 tau_v * tau_v + kappa * kappa, 1.0});
  if (worst > 1.0 + boundary_tol)
    throw std::invalid_argument("canonical_object: passivity violated beyond projection tolerance");
  if (worst > 1.0) {
    const double scale = 1.0 / std::sqrt(worst);
    tau_h *= scale;
    tau_v *= scale;
    kappa *= scale;
  }
  return JonesObject{std::min(tau_h, 1.0), std::min(tau_v, 1.0), std::min(kappa, 1.0),
                     wrap_pi(phi_h), wrap_pi(phi_v), wrap_pi(xi)};
}

}  // namespace qiup
