#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qiup/jones.hpp"
#include "qiup/types.hpp"

// Synthesizes measurable fringe datasets (phase scans with finite pair flux
// and optional shot noise) from either the state-vector oracle or the
// analytic model.
namespace qiup::acquisition {

enum class NoiseModel { None, Poisson };
enum class ForwardModel { Oracle, Analytic };

struct AcquisitionConfig {
  std::vector<double> zeta_grid;       // strictly increasing, in [0, 2pi), >= 8 points
  std::uint64_t pairs_per_point = 1000000;  // expected generated pairs per phase setting
  NoiseModel noise = NoiseModel::None;
  std::uint64_t rng_seed = 0;
  ForwardModel model = ForwardModel::Analytic;

  // Throws std::invalid_argument on grid violations.
  void validate() const;

  // 32 uniform points in [0, 2pi), 1e6 pairs/point, noiseless, analytic model.
  static AcquisitionConfig defaults();
};

// One measurement setting: HWP angle plus prepared idler polarization.
struct Setting {
  Theta theta;
  ProbeState probe;
};

// What sits on the table: generation amplitudes, idler-arm transmission and
// the sample. `object_params` carries the six-parameter form when known (the
// analytic model uses it directly); `object` is the general matrix fallback.
// Both absent means no object in the idler arm.
struct Scene {
  double b1 = 0.7071067811865476;
  double b2 = 0.7071067811865476;
  double t = 1.0;
  std::optional<JonesObject> object_params;
  std::optional<JonesMatrix> object;

  void validate() const;
  std::optional<JonesMatrix> matrix() const;
};

struct FringeDataset {
  Theta theta;
  ProbeState probe{1.0, 0.0, 0.0};
  std::vector<double> counts;  // same length as config.zeta_grid, entries >= 0
  AcquisitionConfig config;
  std::string label;
};

// counts[i] = pairs_per_point * model probability at zeta_i, Poisson-sampled
// when noise=Poisson. Sampling is reproducible and order-independent: the
// substream for grid point i is an mt19937_64 seeded with
// splitmix64(rng_seed ^ i), so points may be drawn in parallel.
FringeDataset acquire(const Setting& setting, const Scene& scene,
                      const AcquisitionConfig& cfg);

// The four H/V datasets, in the order
//   (alpha1=1, theta=0), (alpha1=1, theta=45), (beta1=1, theta=0), (beta1=1, theta=45),
// followed by each extra probe at theta=0 then theta=45. Dataset k gets its
// own seed splitmix64(cfg.rng_seed ^ (k+1)), recorded in its config.
struct LabeledProbe {
  ProbeState probe;
  std::string name;
};
std::vector<FringeDataset> standard_battery(const Scene& scene, const AcquisitionConfig& cfg,
                                            std::span<const LabeledProbe> extras = {});

// Poisson sampling kernel over a vector of expected values; parallel version
// is bit-identical to the serial reference (per-point substreams).
std::vector<double> poisson_sample(std::span<const double> expected, std::uint64_t seed);
std::vector<double> poisson_sample_serial(std::span<const double> expected, std::uint64_t seed);

}  // namespace qiup::acquisition
