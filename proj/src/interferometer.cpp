#include "qiup/interferometer.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "qiup/common.hpp"

namespace qiup::interferometer {

namespace {

constexpr Complex imag_unit{0.0, 1.0};

bool is_crystal1_idler_in_a(const Mode& m) {
  return m.kind == ModeKind::Idler && m.path == Path::A && m.tag == SourceTag::Crystal1;
}

// Rebuilds a state by mapping each term's idler mode through `fn`, which
// appends (mode, factor) replacements to `out`.
template <typename Fn>
TwoPhotonState map_idlers(const TwoPhotonState& state, Fn&& fn) {
  TwoPhotonState next;
  std::vector<std::pair<Mode, Complex>> images;
  for (const auto& [key, amp] : state.terms()) {
    images.clear();
    fn(key.idler, images);
    if (images.empty()) {
      next.add(key, amp);
    } else {
      for (const auto& [mode, factor] : images) next.add(key.signal, mode, amp * factor);
    }
  }
  return next;
}

}  // namespace

TwoPhotonState initial_state(const SourceConfig& src) {
  TwoPhotonState state;
  state.add(signal_mode(Polarization::V, Path::A, SourceTag::Crystal1),
            idler_mode(Polarization::V, Path::A, SourceTag::Crystal1), Complex{src.b1, 0.0});
  const Complex phase{std::cos(src.zeta), std::sin(src.zeta)};
  state.add(signal_mode(Polarization::V, Path::R, SourceTag::Crystal2),
            idler_mode(Polarization::V, Path::R, SourceTag::Crystal2), src.b2 * phase);
  return state;
}

TwoPhotonState apply_dichroic_1(const TwoPhotonState& state) {
  TwoPhotonState next;
  for (const auto& [key, amp] : state.terms()) {
    ModePair moved = key;
    if (moved.signal.path == Path::A) moved.signal.path = Path::B;
    next.add(moved, amp);
  }
  return next;
}

TwoPhotonState apply_preparation(const TwoPhotonState& state, const ProbeState& probe) {
  const Complex beta = probe.beta1 * Complex{std::cos(probe.gamma), std::sin(probe.gamma)};
  return map_idlers(state, [&](const Mode& idler, auto& images) {
    if (!is_crystal1_idler_in_a(idler) || idler.pol != Polarization::V) return;
    Mode h = idler;
    h.pol = Polarization::H;
    images.emplace_back(h, Complex{probe.alpha1, 0.0});
    images.emplace_back(idler, beta);
  });
}

TwoPhotonState apply_hwp(const TwoPhotonState& state, Theta theta) {
  return map_idlers(state, [&](const Mode& idler, auto& images) {
    if (!is_crystal1_idler_in_a(idler)) return;
    if (theta == Theta::Deg0) {
      // H -> H, V -> -V
      images.emplace_back(idler, idler.pol == Polarization::H ? Complex{1.0, 0.0}
                                                              : Complex{-1.0, 0.0});
    } else {
      // H -> -V, V -> -H
      Mode flipped = idler;
      flipped.pol = idler.pol == Polarization::H ? Polarization::V : Polarization::H;
      images.emplace_back(flipped, Complex{-1.0, 0.0});
    }
  });
}

TwoPhotonState apply_object(const TwoPhotonState& state, const JonesMatrix& jones) {
  if (!is_passive(jones))
    throw std::invalid_argument("apply_object: matrix has a singular value above 1 (non-passive)");
  return map_idlers(state, [&](const Mode& idler, auto& images) {
    if (!is_crystal1_idler_in_a(idler)) return;
    Mode h = idler;
    h.pol = Polarization::H;
    Mode v = idler;
    v.pol = Polarization::V;
    if (idler.pol == Polarization::H) {
      images.emplace_back(h, jones.hh);
      images.emplace_back(v, jones.vh);
    } else {
      images.emplace_back(h, jones.hv);
      images.emplace_back(v, jones.vv);
    }
  });
}

TwoPhotonState apply_loss(const TwoPhotonState& state, const LossModel& loss) {
  return map_idlers(state, [&](const Mode& idler, auto& images) {
    if (idler.kind != ModeKind::Idler || idler.path != Path::A) return;
    Mode transmitted = idler;
    transmitted.path = Path::R;
    Mode reflected = idler;
    reflected.path = Path::X;
    images.emplace_back(transmitted, Complex{loss.t, 0.0});
    images.emplace_back(reflected, Complex{loss.r, 0.0});
  });
}

TwoPhotonState merge_indistinguishable(const TwoPhotonState& state) {
  TwoPhotonState next;
  for (const auto& [key, amp] : state.terms()) {
    ModePair merged = key;
    if (merged.idler.pol == Polarization::V && merged.idler.path == Path::R)
      merged.idler.tag = SourceTag::Merged;
    if (merged.signal.pol == Polarization::V &&
        (merged.signal.path == Path::B || merged.signal.path == Path::R))
      merged.signal.tag = SourceTag::Merged;
    next.add(merged, amp);
  }
  return next;
}

TwoPhotonState apply_dichroic_2_and_final_bs(const TwoPhotonState& state) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  TwoPhotonState next;
  for (const auto& [key, amp] : state.terms()) {
    Mode sig = key.signal;
    if (sig.path == Path::R) sig.path = Path::Omega;  // second dichroic
    if (sig.path == Path::B) {
      Mode direct = sig;
      direct.path = Path::BPrime;
      Mode crossed = sig;
      crossed.path = Path::OmegaPrime;
      next.add(direct, key.idler, amp * inv_sqrt2);
      next.add(crossed, key.idler, amp * imag_unit * inv_sqrt2);
    } else if (sig.path == Path::Omega) {
      Mode direct = sig;
      direct.path = Path::OmegaPrime;
      Mode crossed = sig;
      crossed.path = Path::BPrime;
      next.add(direct, key.idler, amp * inv_sqrt2);
      next.add(crossed, key.idler, amp * imag_unit * inv_sqrt2);
    } else {
      next.add(sig, key.idler, amp);
    }
  }
  return next;
}

double expected_counts(const TwoPhotonState& state, const DetectorPattern& detector) {
  // Keys are unique per (signal, idler) mode pair and insertion already summed
  // coherent contributions, so orthogonal terms add incoherently here.
  double total = 0.0;
  for (const auto& [key, amp] : state.terms()) {
    const Mode& detected = detector.kind == ModeKind::Signal ? key.signal : key.idler;
    if (detected.kind == detector.kind && detected.path == detector.path &&
        detected.pol == detector.pol)
      total += std::norm(amp);
  }
  return total;
}

double run_forward_point(const SourceConfig& src, const LossModel& loss,
                         const ProbeState& probe, Theta theta,
                         const std::optional<JonesMatrix>& object) {
  TwoPhotonState state = initial_state(src);
  state = apply_dichroic_1(state);
  state = apply_preparation(state, probe);
  if (object) state = apply_object(state, *object);
  state = apply_hwp(state, theta);
  state = apply_loss(state, loss);
  state = merge_indistinguishable(state);
  state = apply_dichroic_2_and_final_bs(state);
  return expected_counts(state, vertical_omega_detector());
}

namespace {

void check_grid(std::span<const double> zeta_grid) {
  if (zeta_grid.empty()) throw std::invalid_argument("run_forward: empty zeta grid");
  for (std::size_t i = 0; i < zeta_grid.size(); ++i) {
    if (zeta_grid[i] < 0.0 || zeta_grid[i] >= two_pi)
      throw std::invalid_argument("run_forward: zeta grid values must lie in [0, 2pi)");
    if (i > 0 && !(zeta_grid[i] > zeta_grid[i - 1]))
      throw std::invalid_argument("run_forward: zeta grid must be strictly increasing");
  }
}

}  // namespace

std::vector<double> run_forward(const SourceConfig& src, const LossModel& loss,
                                const ProbeState& probe, Theta theta,
                                const std::optional<JonesMatrix>& object,
                                std::span<const double> zeta_grid) {
  check_grid(zeta_grid);
  // Passivity is checked once up front so nothing throws inside the loop.
  if (object && !is_passive(*object))
    throw std::invalid_argument("apply_object: matrix has a singular value above 1 (non-passive)");
  std::vector<double> counts(zeta_grid.size());
  const std::int64_t n = static_cast<std::int64_t>(zeta_grid.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const SourceConfig point{src.b1, src.b2, zeta_grid[static_cast<std::size_t>(i)]};
    counts[static_cast<std::size_t>(i)] = run_forward_point(point, loss, probe, theta, object);
  }
  return counts;
}

std::vector<double> run_forward_serial(const SourceConfig& src, const LossModel& loss,
                                       const ProbeState& probe, Theta theta,
                                       const std::optional<JonesMatrix>& object,
                                       std::span<const double> zeta_grid) {
  check_grid(zeta_grid);
  if (object && !is_passive(*object))
    throw std::invalid_argument("apply_object: matrix has a singular value above 1 (non-passive)");
  std::vector<double> counts(zeta_grid.size());
  for (std::size_t i = 0; i < zeta_grid.size(); ++i) {
    const SourceConfig point{src.b1, src.b2, zeta_grid[i]};
    counts[i] = run_forward_point(point, loss, probe, theta, object);
  }
  return counts;
}

}  // namespace qiup::interferometer
