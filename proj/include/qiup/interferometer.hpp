#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qiup/jones.hpp"
#include "qiup/types.hpp"

// Brute-force state-vector model of the full optical train. Every operation
// is a pure function from state to state; the element order of the pipeline
// is: source -> dichroic 1 -> preparation -> (object) -> half-wave plate ->
// loss splitter -> indistinguishability merge -> dichroic 2 + final beam
// splitter -> counting. This module is the ground truth the closed forms in
// qiup::analytic are validated against.
namespace qiup::interferometer {

// Two-crystal emission: b1 |V_I1 V_S1> in path A plus
// b2 e^{i zeta} |V_I2 V_S2> in path R, tagged by crystal.
TwoPhotonState initial_state(const SourceConfig& src);

// First dichroic mirror: signal modes leave path A for path B.
TwoPhotonState apply_dichroic_1(const TwoPhotonState& state);

// HWP+QWP preparation on crystal-1 idlers in path A:
// |V> -> alpha1|H> + beta1 e^{i gamma}|V>.
TwoPhotonState apply_preparation(const TwoPhotonState& state, const ProbeState& probe);

// Half-wave plate on crystal-1 idlers in path A.
// theta=0:  H -> H,  V -> -V.   theta=45: H -> -V, V -> -H.
TwoPhotonState apply_hwp(const TwoPhotonState& state, Theta theta);

// Sample acting linearly on crystal-1 idlers in path A. Throws
// std::invalid_argument if any singular value exceeds 1 + 1e-9.
TwoPhotonState apply_object(const TwoPhotonState& state, const JonesMatrix& jones);

// Loss beam splitter on path-A idlers: T into path R, sqrt(1-T^2) into the
// retained auxiliary path X (unitary model, norm conserving).
TwoPhotonState apply_loss(const TwoPhotonState& state, const LossModel& loss);

// Drops source tags where photons are indistinguishable: V idlers in path R
// and V signals in paths B and R become Merged; H crystal-1 idlers keep their
// distinguishable tag. Amplitudes of colliding keys add.
TwoPhotonState merge_indistinguishable(const TwoPhotonState& state);

// Second dichroic (signal R -> Omega) followed by the final beam splitter:
// B-signal -> (B' + i Omega')/sqrt(2), Omega-signal -> (Omega' + i B')/sqrt(2).
TwoPhotonState apply_dichroic_2_and_final_bs(const TwoPhotonState& state);

// Expected photon number in the detector mode. Terms are keyed by the full
// (signal, idler) pair, so amplitudes that belong to the same physical mode
// pair have already been summed coherently; distinguishable tags keep
// orthogonal terms from interfering. The detector sums |amplitude|^2 over
// matching terms.
double expected_counts(const TwoPhotonState& state, const DetectorPattern& detector);

// Full pipeline for a single interferometric phase; src.zeta is used as-is.
double run_forward_point(const SourceConfig& src, const LossModel& loss,
                         const ProbeState& probe, Theta theta,
                         const std::optional<JonesMatrix>& object);

// Vertical omega'-port counts over a phase scan; src.zeta is replaced by each
// grid value. The grid must be nonempty and strictly increasing in [0, 2pi).
// Grid points are independent; the parallel version runs them under OpenMP
// and is bit-identical to the serial reference.
std::vector<double> run_forward(const SourceConfig& src, const LossModel& loss,
                                const ProbeState& probe, Theta theta,
                                const std::optional<JonesMatrix>& object,
                                std::span<const double> zeta_grid);
std::vector<double> run_forward_serial(const SourceConfig& src, const LossModel& loss,
                                       const ProbeState& probe, Theta theta,
                                       const std::optional<JonesMatrix>& object,
                                       std::span<const double> zeta_grid);

}  // namespace qiup::interferometer
