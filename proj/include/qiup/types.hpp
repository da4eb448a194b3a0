#pragma once

#include <compare>
#include <complex>
#include <map>
#include <optional>
#include <utility>

namespace qiup {

using Complex = std::complex<double>;

enum class Polarization { H, V };
enum class ModeKind { Signal, Idler };

// Optical paths of the two-crystal interferometer. A is the crystal-1 output,
// B the signal arm after the first dichroic, R the shared idler/crystal-2 arm,
// X the auxiliary loss port, Omega the signal arm after the second dichroic,
// BPrime/OmegaPrime the two output ports of the final beam splitter.
enum class Path { A, B, R, X, Omega, BPrime, OmegaPrime };

// Which crystal a photon came from; Merged marks modes made indistinguishable.
enum class SourceTag { Crystal1, Crystal2, Merged };

struct Mode {
  Path path;
  Polarization pol;
  ModeKind kind;
  std::optional<SourceTag> tag;

  auto operator<=>(const Mode&) const = default;
};

inline Mode signal_mode(Polarization pol, Path path, SourceTag tag) {
  return Mode{path, pol, ModeKind::Signal, tag};
}
inline Mode idler_mode(Polarization pol, Path path, SourceTag tag) {
  return Mode{path, pol, ModeKind::Idler, tag};
}

struct ModePair {
  Mode signal;
  Mode idler;

  auto operator<=>(const ModePair&) const = default;
};

// Sparse superposition of signal(x)idler mode pairs with complex amplitudes.
// Inserting an existing key sums amplitudes; entries below prune_tolerance are
// dropped, so distinguishable terms never linger as numerical dust.
class TwoPhotonState {
 public:
  static constexpr double prune_tolerance = 1e-14;

  void add(const Mode& signal, const Mode& idler, Complex amplitude);
  void add(const ModePair& key, Complex amplitude);

  const std::map<ModePair, Complex>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  // Sum of |amplitude|^2 over all stored terms.
  double norm_sq() const;

  // Amplitude of an exact key, 0 if absent.
  Complex amplitude(const ModePair& key) const;

 private:
  std::map<ModePair, Complex> terms_;
};

// Largest term-wise amplitude difference between two states (test helper).
double max_term_delta(const TwoPhotonState& a, const TwoPhotonState& b);

// Generation amplitudes of the two crystals plus the interferometric phase.
// b1^2 + b2^2 must equal 1 to 1e-12; the ideal case is b1 = b2 = 1/sqrt(2).
struct SourceConfig {
  double b1;
  double b2;
  double zeta;

  SourceConfig(double b1_, double b2_, double zeta_);
};

// Loss beam splitter in the crystal-1 idler arm: transmits with amplitude T
// into path R, reflects with amplitude R = sqrt(1 - T^2) into path X.
struct LossModel {
  double t;
  double r;

  explicit LossModel(double transmission);
};

// Prepared idler polarization alpha1|H> + beta1 e^{i gamma}|V>.
struct ProbeState {
  double alpha1;
  double beta1;
  double gamma;

  ProbeState(double alpha1_, double beta1_, double gamma_);

  static ProbeState horizontal() { return {1.0, 0.0, 0.0}; }
  static ProbeState vertical() { return {0.0, 1.0, 0.0}; }
  static ProbeState diagonal();
  static ProbeState antidiagonal();
  static ProbeState circular();
};

// The half-wave plate supports exactly the two fast-axis settings the
// indistinguishability condition allows; no other angles are representable.
enum class Theta { Deg0, Deg45 };

inline const char* theta_label(Theta t) { return t == Theta::Deg0 ? "0" : "45"; }

// Detector selection: photons of `kind` in `path` with polarization `pol`.
struct DetectorPattern {
  ModeKind kind;
  Path path;
  Polarization pol;
};

// The vertical-signal detector in the omega' output port.
inline DetectorPattern vertical_omega_detector() {
  return DetectorPattern{ModeKind::Signal, Path::OmegaPrime, Polarization::V};
}

}  // namespace qiup
