#include "qiup/types.hpp"

#include <cmath>
#include <stdexcept>

#include "qiup/common.hpp"

namespace qiup {

void TwoPhotonState::add(const Mode& signal, const Mode& idler, Complex amplitude) {
  add(ModePair{signal, idler}, amplitude);
}

void TwoPhotonState::add(const ModePair& key, Complex amplitude) {
  auto [it, inserted] = terms_.try_emplace(key, amplitude);
  if (!inserted) it->second += amplitude;
  if (std::abs(it->second) < prune_tolerance) terms_.erase(it);
}

double TwoPhotonState::norm_sq() const {
  double sum = 0.0;
  for (const auto& [key, amp] : terms_) sum += std::norm(amp);
  return sum;
}

Complex TwoPhotonState::amplitude(const ModePair& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
}

double max_term_delta(const TwoPhotonState& a, const TwoPhotonState& b) {
  double worst = 0.0;
  for (const auto& [key, amp] : a.terms()) worst = std::max(worst, std::abs(amp - b.amplitude(key)));
  for (const auto& [key, amp] : b.terms()) worst = std::max(worst, std::abs(amp - a.amplitude(key)));
  return worst;
}

SourceConfig::SourceConfig(double b1_, double b2_, double zeta_) : b1(b1_), b2(b2_), zeta(zeta_) {
  if (!(b1 >= 0.0 && b1 <= 1.0) || !(b2 >= 0.0 && b2 <= 1.0))
    throw std::invalid_argument("SourceConfig: generation amplitudes must lie in [0, 1]");
  if (std::abs(b1 * b1 + b2 * b2 - 1.0) > 1e-12)
    throw std::invalid_argument("SourceConfig: b1^2 + b2^2 must equal 1 within 1e-12");
}

LossModel::LossModel(double transmission) : t(transmission), r(0.0) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("LossModel: transmission must lie in [0, 1]");
  r = std::sqrt(std::max(0.0, 1.0 - t * t));
}

ProbeState::ProbeState(double alpha1_, double beta1_, double gamma_)
    : alpha1(alpha1_), beta1(beta1_), gamma(wrap_pi(gamma_)) {
  if (!(alpha1 >= 0.0 && alpha1 <= 1.0) || !(beta1 >= 0.0 && beta1 <= 1.0))
    throw std::invalid_argument("ProbeState: amplitudes must lie in [0, 1]");
  if (std::abs(alpha1 * alpha1 + beta1 * beta1 - 1.0) > 1e-12)
    throw std::invalid_argument("ProbeState: alpha1^2 + beta1^2 must equal 1 within 1e-12");
}

ProbeState ProbeState::diagonal() {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return {inv_sqrt2, inv_sqrt2, 0.0};
}

ProbeState ProbeState::antidiagonal() {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return {inv_sqrt2, inv_sqrt2, std::numbers::pi};
}

ProbeState ProbeState::circular() {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return {inv_sqrt2, inv_sqrt2, std::numbers::pi / 2.0};
}

}  // namespace qiup
