#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qiup/analytic.hpp"
#include "qiup/common.hpp"
#include "qiup/interferometer.hpp"
#include "qiup/random.hpp"

using namespace qiup;
namespace interf = qiup::interferometer;

namespace {

const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

SourceConfig ideal_source(double zeta = 0.0) { return {inv_sqrt2, inv_sqrt2, zeta}; }

// Arbitrary sparse states for structural properties.
TwoPhotonState random_state(std::mt19937_64& eng) {
  std::uniform_int_distribution<int> pick(0, 1);
  std::uniform_int_distribution<int> path_pick(0, 3);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  const Path paths[] = {Path::A, Path::B, Path::R, Path::X};
  const SourceTag tags[] = {SourceTag::Crystal1, SourceTag::Crystal2};
  TwoPhotonState state;
  for (int k = 0; k < 6; ++k) {
    const Mode sig = signal_mode(pick(eng) ? Polarization::V : Polarization::H,
                                 paths[path_pick(eng)], tags[pick(eng)]);
    const Mode idl = idler_mode(pick(eng) ? Polarization::V : Polarization::H,
                                paths[path_pick(eng)], tags[pick(eng)]);
    state.add(sig, idl, Complex{amp(eng), amp(eng)});
  }
  return state;
}

TwoPhotonState prepared_state(const SourceConfig& src, const ProbeState& probe) {
  return interf::apply_preparation(interf::apply_dichroic_1(interf::initial_state(src)), probe);
}

}  // namespace

TEST_CASE("initial_state emits one term per crystal") {
  const auto state = interf::initial_state(ideal_source());
  REQUIRE(state.size() == 2);
  const ModePair crystal1{signal_mode(Polarization::V, Path::A, SourceTag::Crystal1),
                          idler_mode(Polarization::V, Path::A, SourceTag::Crystal1)};
  const ModePair crystal2{signal_mode(Polarization::V, Path::R, SourceTag::Crystal2),
                          idler_mode(Polarization::V, Path::R, SourceTag::Crystal2)};
  CHECK(std::abs(state.amplitude(crystal1) - Complex{inv_sqrt2, 0.0}) < 1e-15);
  CHECK(std::abs(state.amplitude(crystal2) - Complex{inv_sqrt2, 0.0}) < 1e-15);

  const auto single = interf::initial_state({1.0, 0.0, 0.3});
  REQUIRE(single.size() == 1);
  CHECK(std::abs(single.amplitude(crystal1) - Complex{1.0, 0.0}) < 1e-15);

  const auto quarter = interf::initial_state(ideal_source(std::numbers::pi / 2.0));
  CHECK(std::abs(quarter.amplitude(crystal2) - Complex{0.0, inv_sqrt2}) < 1e-15);
}

TEST_CASE("dichroic 1 relabels path-a signals and nothing else") {
  const auto before = interf::initial_state(ideal_source(0.7));
  const auto after = interf::apply_dichroic_1(before);
  const ModePair moved{signal_mode(Polarization::V, Path::B, SourceTag::Crystal1),
                       idler_mode(Polarization::V, Path::A, SourceTag::Crystal1)};
  CHECK(std::abs(after.amplitude(moved) - Complex{inv_sqrt2, 0.0}) < 1e-15);
  // crystal-2 term untouched
  const ModePair crystal2{signal_mode(Polarization::V, Path::R, SourceTag::Crystal2),
                          idler_mode(Polarization::V, Path::R, SourceTag::Crystal2)};
  CHECK(std::abs(after.amplitude(crystal2) - before.amplitude(crystal2)) < 1e-15);

  // identity on states without path-a signals
  const auto again = interf::apply_dichroic_1(after);
  CHECK(max_term_delta(after, again) == 0.0);

  std::mt19937_64 eng(11);
  for (int i = 0; i < 50; ++i) {
    const auto s = random_state(eng);
    CHECK(interf::apply_dichroic_1(s).norm_sq() == doctest::Approx(s.norm_sq()).epsilon(1e-12));
  }
}

TEST_CASE("preparation rotates only the crystal-1 idler") {
  const auto base = interf::apply_dichroic_1(interf::initial_state(ideal_source(0.4)));

  SUBCASE("alpha1=1 makes it horizontal") {
    const auto state = interf::apply_preparation(base, ProbeState::horizontal());
    const ModePair h{signal_mode(Polarization::V, Path::B, SourceTag::Crystal1),
                     idler_mode(Polarization::H, Path::A, SourceTag::Crystal1)};
    CHECK(std::abs(state.amplitude(h) - Complex{inv_sqrt2, 0.0}) < 1e-15);
    const ModePair v{signal_mode(Polarization::V, Path::B, SourceTag::Crystal1),
                     idler_mode(Polarization::V, Path::A, SourceTag::Crystal1)};
    CHECK(std::abs(state.amplitude(v)) < 1e-15);
  }

  SUBCASE("beta1=1, gamma=0 is the identity") {
    const auto state = interf::apply_preparation(base, ProbeState::vertical());
    CHECK(max_term_delta(state, base) < 1e-15);
  }

  SUBCASE("norm is preserved for a circular probe") {
    const auto state = interf::apply_preparation(base, ProbeState::circular());
    CHECK(state.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("half-wave plate signs") {
  const ProbeState probe{0.6, 0.8, 0.5};
  const auto state = prepared_state(ideal_source(0.0), probe);
  const ModePair h{signal_mode(Polarization::V, Path::B, SourceTag::Crystal1),
                   idler_mode(Polarization::H, Path::A, SourceTag::Crystal1)};
  const ModePair v{signal_mode(Polarization::V, Path::B, SourceTag::Crystal1),
                   idler_mode(Polarization::V, Path::A, SourceTag::Crystal1)};
  const Complex beta_amp = state.amplitude(v);
  const Complex alpha_amp = state.amplitude(h);

  SUBCASE("theta=0: H -> H, V -> -V") {
    const auto flipped = interf::apply_hwp(state, Theta::Deg0);
    CHECK(std::abs(flipped.amplitude(h) - alpha_amp) < 1e-15);
    CHECK(std::abs(flipped.amplitude(v) + beta_amp) < 1e-15);
  }

  SUBCASE("theta=45: H -> -V, V -> -H") {
    const auto flipped = interf::apply_hwp(state, Theta::Deg45);
    CHECK(std::abs(flipped.amplitude(v) + alpha_amp) < 1e-15);
    CHECK(std::abs(flipped.amplitude(h) + beta_amp) < 1e-15);
  }

  SUBCASE("applying either setting twice restores the state") {
    for (Theta theta : {Theta::Deg0, Theta::Deg45}) {
      const auto twice = interf::apply_hwp(interf::apply_hwp(state, theta), theta);
      CHECK(max_term_delta(twice, state) < 1e-12);
    }
  }
}

TEST_CASE("object acts linearly on the crystal-1 idler") {
  std::mt19937_64 eng(23);
  const ProbeState probe = rng::random_probe(eng);
  const auto state = prepared_state(ideal_source(1.1), probe);

  SUBCASE("identity matrix leaves the state alone") {
    const JonesMatrix id{1.0, 0.0, 0.0, 1.0};
    CHECK(max_term_delta(interf::apply_object(state, id), state) < 1e-15);
  }

  SUBCASE("degenerate six-parameter object behaves as identity") {
    const auto obj = JonesObject::checked(1.0, 1.0, 0.0, 0.0, 0.0, 0.0);
    CHECK(max_term_delta(interf::apply_object(state, to_matrix(obj)), state) < 1e-15);
  }

  SUBCASE("idler coefficients equal the prepared-and-transformed pair") {
    for (int i = 0; i < 20; ++i) {
      const ProbeState p = rng::random_probe(eng);
      const JonesObject obj = rng::random_passive_object(eng);
      const JonesMatrix m = to_matrix(obj);
      const auto transformed = interf::apply_object(prepared_state(ideal_source(0.0), p), m);
      const AmplitudePair pair = amplitudes(m, p);
      const ModePair h{signal_mode(Polarization::V, Path::B, SourceTag::Crystal1),
                       idler_mode(Polarization::H, Path::A, SourceTag::Crystal1)};
      const ModePair v{signal_mode(Polarization::V, Path::B, SourceTag::Crystal1),
                       idler_mode(Polarization::V, Path::A, SourceTag::Crystal1)};
      CHECK(std::abs(transformed.amplitude(h) - inv_sqrt2 * pair.a_pp) < 1e-14);
      CHECK(std::abs(transformed.amplitude(v) - inv_sqrt2 * pair.b_pp) < 1e-14);
    }
  }

  SUBCASE("non-passive matrices are rejected") {
    const JonesMatrix gain{1.2, 0.0, 0.0, 1.0};
    CHECK_THROWS_AS((void)interf::apply_object(state, gain), std::invalid_argument);
  }
}

TEST_CASE("loss splitter") {
  const ProbeState probe{0.6, 0.8, -0.3};
  const auto state = interf::apply_hwp(prepared_state(ideal_source(0.9), probe), Theta::Deg0);

  SUBCASE("T=1 moves every crystal-1 idler to path r unchanged") {
    const auto after = interf::apply_loss(state, LossModel{1.0});
    for (const auto& [key, amp] : after.terms()) CHECK(key.idler.path != Path::A);
    const ModePair moved{signal_mode(Polarization::V, Path::B, SourceTag::Crystal1),
                         idler_mode(Polarization::H, Path::R, SourceTag::Crystal1)};
    CHECK(std::abs(after.amplitude(moved) - Complex{inv_sqrt2 * 0.6, 0.0}) < 1e-15);
  }

  SUBCASE("T=0 reflects everything into the auxiliary path") {
    const auto after = interf::apply_loss(state, LossModel{0.0});
    for (const auto& [key, amp] : after.terms())
      if (key.idler.tag == SourceTag::Crystal1) CHECK(key.idler.path == Path::X);
  }

  SUBCASE("norm is conserved at T=0.8") {
    const auto after = interf::apply_loss(state, LossModel{0.8});
    CHECK(after.norm_sq() == doctest::Approx(state.norm_sq()).epsilon(1e-12));
  }
}

TEST_CASE("merge drops tags exactly where photons are indistinguishable") {
  SUBCASE("colliding vertical idler keys add amplitudes") {
    TwoPhotonState state;
    state.add(signal_mode(Polarization::V, Path::B, SourceTag::Crystal1),
              idler_mode(Polarization::V, Path::R, SourceTag::Crystal1), Complex{0.25, 0.0});
    state.add(signal_mode(Polarization::V, Path::B, SourceTag::Crystal2),
              idler_mode(Polarization::V, Path::R, SourceTag::Crystal2), Complex{0.5, 0.0});
    const auto merged = interf::merge_indistinguishable(state);
    REQUIRE(merged.size() == 1);
    const ModePair key{signal_mode(Polarization::V, Path::B, SourceTag::Merged),
                       idler_mode(Polarization::V, Path::R, SourceTag::Merged)};
    CHECK(std::abs(merged.amplitude(key) - Complex{0.75, 0.0}) < 1e-15);
  }

  SUBCASE("horizontal idlers keep their distinguishable tag") {
    TwoPhotonState state;
    state.add(signal_mode(Polarization::H, Path::X, SourceTag::Crystal1),
              idler_mode(Polarization::H, Path::R, SourceTag::Crystal1), Complex{1.0, 0.0});
    const auto merged = interf::merge_indistinguishable(state);
    for (const auto& [key, amp] : merged.terms()) CHECK(key.idler.tag == SourceTag::Crystal1);
  }

  SUBCASE("oracle counts after merging trace the no-object fringe") {
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> zeta(0.0, two_pi - 1e-9);
    const ProbeState probe{0.6, 0.8, 1.2};
    const double t = 0.75;
    for (int i = 0; i < 25; ++i) {
      const SourceConfig src = ideal_source(zeta(eng));
      const double counts =
          interf::run_forward_point(src, LossModel{t}, probe, Theta::Deg0, std::nullopt);
      CHECK(counts ==
            doctest::Approx(analytic::counts_no_object(Theta::Deg0, probe, src, t, src.zeta))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("second dichroic plus final beam splitter") {
  SUBCASE("a single b-path signal splits into both output ports") {
    TwoPhotonState state;
    state.add(signal_mode(Polarization::V, Path::B, SourceTag::Merged),
              idler_mode(Polarization::H, Path::R, SourceTag::Crystal1), Complex{1.0, 0.0});
    const auto out = interf::apply_dichroic_2_and_final_bs(state);
    REQUIRE(out.size() == 2);
    const ModePair direct{signal_mode(Polarization::V, Path::BPrime, SourceTag::Merged),
                          idler_mode(Polarization::H, Path::R, SourceTag::Crystal1)};
    const ModePair crossed{signal_mode(Polarization::V, Path::OmegaPrime, SourceTag::Merged),
                           idler_mode(Polarization::H, Path::R, SourceTag::Crystal1)};
    CHECK(std::abs(out.amplitude(direct) - Complex{inv_sqrt2, 0.0}) < 1e-15);
    CHECK(std::abs(out.amplitude(crossed) - Complex{0.0, inv_sqrt2}) < 1e-15);
    CHECK(out.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("full no-object pipeline at theta=0 reproduces the final-state terms") {
    const double t = 0.8;
    const double zeta = 0.9;
    const ProbeState probe{0.6, 0.8, 0.5};
    const LossModel loss{t};
    const SourceConfig src = ideal_source(zeta);
    auto state = prepared_state(src, probe);
    state = interf::apply_hwp(state, Theta::Deg0);
    state = interf::apply_loss(state, loss);
    state = interf::merge_indistinguishable(state);
    state = interf::apply_dichroic_2_and_final_bs(state);

    const Complex beta = probe.beta1 * Complex{std::cos(probe.gamma), std::sin(probe.gamma)};
    const Complex c2 = inv_sqrt2 * Complex{std::cos(zeta), std::sin(zeta)};
    const Complex i{0.0, 1.0};
    const double b1t = inv_sqrt2 * t;
    const double b1r = inv_sqrt2 * loss.r;

    TwoPhotonState expected;
    const Mode sig_b = signal_mode(Polarization::V, Path::BPrime, SourceTag::Merged);
    const Mode sig_w = signal_mode(Polarization::V, Path::OmegaPrime, SourceTag::Merged);
    const Mode idl_h_r = idler_mode(Polarization::H, Path::R, SourceTag::Crystal1);
    const Mode idl_v_r = idler_mode(Polarization::V, Path::R, SourceTag::Merged);
    const Mode idl_h_x = idler_mode(Polarization::H, Path::X, SourceTag::Crystal1);
    const Mode idl_v_x = idler_mode(Polarization::V, Path::X, SourceTag::Crystal1);
    // crystal 1 through the transmitted arm: (alpha H - beta V) (b' + i w')/sqrt2
    expected.add(sig_b, idl_h_r, b1t * probe.alpha1 * inv_sqrt2);
    expected.add(sig_w, idl_h_r, b1t * probe.alpha1 * i * inv_sqrt2);
    expected.add(sig_b, idl_v_r, -b1t * beta * inv_sqrt2);
    expected.add(sig_w, idl_v_r, -b1t * beta * i * inv_sqrt2);
    // crystal 2: V idler in r with (w' + i b')/sqrt2
    expected.add(sig_w, idl_v_r, c2 * inv_sqrt2);
    expected.add(sig_b, idl_v_r, c2 * i * inv_sqrt2);
    // reflected arm keeps the post-HWP signs
    expected.add(sig_b, idl_h_x, b1r * probe.alpha1 * inv_sqrt2);
    expected.add(sig_w, idl_h_x, b1r * probe.alpha1 * i * inv_sqrt2);
    expected.add(sig_b, idl_v_x, -b1r * beta * inv_sqrt2);
    expected.add(sig_w, idl_v_x, -b1r * beta * i * inv_sqrt2);

    CHECK(max_term_delta(state, expected) < 1e-14);
  }
}

TEST_CASE("expected_counts") {
  SUBCASE("no object, theta=0 traces the closed-form fringe") {
    const double t = 0.8;
    const ProbeState probe{0.0, 1.0, 0.0};
    for (double zeta : {0.0, 0.4, std::numbers::pi / 2.0, 3.1, 5.9}) {
      const SourceConfig src = ideal_source(zeta);
      const double counts =
          interf::run_forward_point(src, LossModel{t}, probe, Theta::Deg0, std::nullopt);
      CHECK(counts == doctest::Approx(0.5 + 0.5 * t * std::sin(-zeta)).epsilon(1e-12));
    }
  }

  SUBCASE("T=0 gives a flat half fringe") {
    std::mt19937_64 eng(3);
    for (int i = 0; i < 10; ++i) {
      const ProbeState probe = rng::random_probe(eng);
      const SourceConfig src = ideal_source(0.37 * i);
      CHECK(interf::run_forward_point(src, LossModel{0.0}, probe, Theta::Deg0, std::nullopt) ==
            doctest::Approx(0.5).epsilon(1e-12));
    }
  }

  SUBCASE("with an object the oracle matches the generic closed form") {
    std::mt19937_64 eng(71);
    std::uniform_real_distribution<double> tdist(0.1, 1.0);
    std::uniform_real_distribution<double> zdist(0.0, two_pi - 1e-9);
    for (int i = 0; i < 40; ++i) {
      const ProbeState probe = rng::random_probe(eng);
      const JonesObject obj = rng::random_passive_object(eng);
      const double t = tdist(eng);
      const double zeta = zdist(eng);
      const Theta theta = (i % 2 == 0) ? Theta::Deg0 : Theta::Deg45;
      const SourceConfig src = ideal_source(zeta);
      const double oracle =
          interf::run_forward_point(src, LossModel{t}, probe, theta, to_matrix(obj));
      const double generic =
          analytic::counts_general(theta, amplitudes(obj, probe), src, t, zeta);
      CHECK(std::abs(oracle - generic) < 1e-12);
    }
  }
}

TEST_CASE("run_forward over a grid") {
  const auto grid = uniform_phase_grid(32);
  const SourceConfig src = ideal_source();

  SUBCASE("identity object equals the no-object run pointwise") {
    const ProbeState probe{0.6, 0.8, 0.9};
    const JonesMatrix id{1.0, 0.0, 0.0, 1.0};
    const auto bare =
        interf::run_forward(src, LossModel{0.7}, probe, Theta::Deg0, std::nullopt, grid);
    const auto with_id = interf::run_forward(src, LossModel{0.7}, probe, Theta::Deg0, id, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK(std::abs(bare[i] - with_id[i]) < 1e-12);
  }

  SUBCASE("theta=45, alpha1=1 traces 1/2 - T sin(zeta)/2") {
    const double t = 0.8;
    const auto counts = interf::run_forward(src, LossModel{t}, ProbeState::horizontal(),
                                            Theta::Deg45, std::nullopt, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK(counts[i] == doctest::Approx(0.5 - 0.5 * t * std::sin(grid[i])).epsilon(1e-12));
  }

  SUBCASE("counts are never negative") {
    std::mt19937_64 eng(99);
    std::uniform_real_distribution<double> tdist(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
      const ProbeState probe = rng::random_probe(eng);
      const JonesObject obj = rng::random_passive_object(eng);
      const Theta theta = (i % 2 == 0) ? Theta::Deg0 : Theta::Deg45;
      const auto counts = interf::run_forward(src, LossModel{tdist(eng)}, probe, theta,
                                              to_matrix(obj), grid);
      for (double c : counts) CHECK(c >= 0.0);
    }
  }

  SUBCASE("grids must be strictly increasing inside [0, 2pi)") {
    CHECK_THROWS_AS((void)interf::run_forward(src, LossModel{1.0}, ProbeState::horizontal(),
                                              Theta::Deg0, std::nullopt,
                                              std::vector<double>{0.0, 0.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)interf::run_forward(src, LossModel{1.0}, ProbeState::horizontal(),
                                              Theta::Deg0, std::nullopt,
                                              std::vector<double>{0.0, two_pi}),
                    std::invalid_argument);
  }
}

TEST_CASE("norm is conserved through every element for unitary objects") {
  std::mt19937_64 eng(13);
  std::uniform_real_distribution<double> tdist(0.1, 1.0);
  std::uniform_real_distribution<double> zdist(0.0, two_pi - 1e-9);
  for (int i = 0; i < 15; ++i) {
    const SourceConfig src{0.6, 0.8, zdist(eng)};
    const ProbeState probe = rng::random_probe(eng);
    const JonesObject obj = rng::random_unitary_object(eng);
    const Theta theta = (i % 2 == 0) ? Theta::Deg0 : Theta::Deg45;
    const double expected_norm = src.b1 * src.b1 + src.b2 * src.b2;

    TwoPhotonState state = interf::initial_state(src);
    CHECK(state.norm_sq() == doctest::Approx(expected_norm).epsilon(1e-12));
    state = interf::apply_dichroic_1(state);
    CHECK(state.norm_sq() == doctest::Approx(expected_norm).epsilon(1e-12));
    state = interf::apply_preparation(state, probe);
    CHECK(state.norm_sq() == doctest::Approx(expected_norm).epsilon(1e-12));
    state = interf::apply_object(state, to_matrix(obj));
    CHECK(state.norm_sq() == doctest::Approx(expected_norm).epsilon(1e-12));
    state = interf::apply_hwp(state, theta);
    CHECK(state.norm_sq() == doctest::Approx(expected_norm).epsilon(1e-12));
    state = interf::apply_loss(state, LossModel{tdist(eng)});
    CHECK(state.norm_sq() == doctest::Approx(expected_norm).epsilon(1e-12));
    state = interf::merge_indistinguishable(state);
    state = interf::apply_dichroic_2_and_final_bs(state);
    CHECK(state.norm_sq() == doctest::Approx(expected_norm).epsilon(1e-12));
  }
}

TEST_CASE("final beam splitter preserves signal-amplitude norms exactly") {
  std::mt19937_64 eng(29);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    TwoPhotonState state;
    state.add(signal_mode(Polarization::V, Path::B, SourceTag::Merged),
              idler_mode(Polarization::V, Path::R, SourceTag::Merged),
              Complex{amp(eng), amp(eng)});
    state.add(signal_mode(Polarization::V, Path::R, SourceTag::Merged),
              idler_mode(Polarization::V, Path::R, SourceTag::Merged),
              Complex{amp(eng), amp(eng)});
    state.add(signal_mode(Polarization::V, Path::B, SourceTag::Merged),
              idler_mode(Polarization::H, Path::X, SourceTag::Crystal1),
              Complex{amp(eng), amp(eng)});
    const auto out = interf::apply_dichroic_2_and_final_bs(state);
    CHECK(out.norm_sq() == doctest::Approx(state.norm_sq()).epsilon(1e-12));
  }
}

TEST_CASE("oracle equals the six-parameter closed forms over random draws") {
  std::mt19937_64 eng(2024);
  std::uniform_real_distribution<double> tdist(0.1, 1.0);
  const auto grid = uniform_phase_grid(32);
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const ProbeState probe = rng::random_probe(eng);
    const JonesObject obj = rng::random_passive_object(eng);
    const double t = tdist(eng);
    const Theta theta = (draw % 2 == 0) ? Theta::Deg0 : Theta::Deg45;
    const SourceConfig src = ideal_source();
    const auto oracle =
        interf::run_forward(src, LossModel{t}, probe, theta, to_matrix(obj), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double closed =
          analytic::counts_with_object(theta, probe, obj, src, t, grid[i]);
      worst = std::max(worst, std::abs(oracle[i] - closed));
    }
  }
  CHECK(worst < 1e-10);
}
