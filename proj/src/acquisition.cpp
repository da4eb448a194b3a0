#include "qiup/acquisition.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "qiup/analytic.hpp"
#include "qiup/common.hpp"
#include "qiup/interferometer.hpp"

namespace qiup::acquisition {

void AcquisitionConfig::validate() const {
  if (zeta_grid.size() < 8)
    throw std::invalid_argument("AcquisitionConfig: zeta grid needs at least 8 points");
  for (std::size_t i = 0; i < zeta_grid.size(); ++i) {
    if (zeta_grid[i] < 0.0 || zeta_grid[i] >= two_pi)
      throw std::invalid_argument("AcquisitionConfig: zeta grid values must lie in [0, 2pi)");
    if (i > 0 && !(zeta_grid[i] > zeta_grid[i - 1]))
      throw std::invalid_argument("AcquisitionConfig: zeta grid must be strictly increasing");
  }
}

AcquisitionConfig AcquisitionConfig::defaults() {
  AcquisitionConfig cfg;
  cfg.zeta_grid = uniform_phase_grid(32);
  return cfg;
}

void Scene::validate() const {
  if (!(b1 >= 0.0 && b1 <= 1.0) || !(b2 >= 0.0 && b2 <= 1.0) ||
      std::abs(b1 * b1 + b2 * b2 - 1.0) > 1e-12)
    throw std::invalid_argument("Scene: b1^2 + b2^2 must equal 1 within 1e-12");
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("Scene: T must lie in [0, 1]");
  if (object_params) object_params->validate();
  if (auto m = matrix(); m && !is_passive(*m))
    throw std::invalid_argument("Scene: object matrix is not passive");
}

std::optional<JonesMatrix> Scene::matrix() const {
  if (object) return object;
  if (object_params) return to_matrix(*object_params);
  return std::nullopt;
}

namespace {

std::vector<double> model_probabilities(const Setting& setting, const Scene& scene,
                                        const AcquisitionConfig& cfg) {
  const SourceConfig src{scene.b1, scene.b2, 0.0};
  if (cfg.model == ForwardModel::Oracle) {
    const LossModel loss{scene.t};
    return interferometer::run_forward(src, loss, setting.probe, setting.theta, scene.matrix(),
                                       cfg.zeta_grid);
  }
  if (scene.object_params)
    return analytic::counts_with_object_grid(setting.theta, setting.probe, *scene.object_params,
                                             src, scene.t, cfg.zeta_grid);
  if (scene.object) {
    const AmplitudePair pair = amplitudes(*scene.object, setting.probe);
    return analytic::counts_general_grid(setting.theta, pair, src, scene.t, cfg.zeta_grid);
  }
  return analytic::counts_no_object_grid(setting.theta, setting.probe, src, scene.t,
                                         cfg.zeta_grid);
}

}  // namespace

std::vector<double> poisson_sample(std::span<const double> expected, std::uint64_t seed) {
  std::vector<double> out(expected.size());
  const std::int64_t n = static_cast<std::int64_t>(expected.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    std::mt19937_64 eng(splitmix64(seed ^ static_cast<std::uint64_t>(idx)));
    if (expected[idx] <= 0.0) {
      out[idx] = 0.0;
    } else {
      std::poisson_distribution<long long> dist(expected[idx]);
      out[idx] = static_cast<double>(dist(eng));
    }
  }
  return out;
}

std::vector<double> poisson_sample_serial(std::span<const double> expected, std::uint64_t seed) {
  std::vector<double> out(expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    std::mt19937_64 eng(splitmix64(seed ^ static_cast<std::uint64_t>(i)));
    if (expected[i] <= 0.0) {
      out[i] = 0.0;
    } else {
      std::poisson_distribution<long long> dist(expected[i]);
      out[i] = static_cast<double>(dist(eng));
    }
  }
  return out;
}

FringeDataset acquire(const Setting& setting, const Scene& scene, const AcquisitionConfig& cfg) {
  cfg.validate();
  scene.validate();
  std::vector<double> counts = model_probabilities(setting, scene, cfg);
  const double pairs = static_cast<double>(cfg.pairs_per_point);
  for (double& c : counts) c *= pairs;
  if (cfg.noise == NoiseModel::Poisson) counts = poisson_sample(counts, cfg.rng_seed);
  return FringeDataset{setting.theta, setting.probe, std::move(counts), cfg, ""};
}

std::vector<FringeDataset> standard_battery(const Scene& scene, const AcquisitionConfig& cfg,
                                            std::span<const LabeledProbe> extras) {
  struct Entry {
    Setting setting;
    std::string label;
  };
  std::vector<Entry> plan = {
      {{Theta::Deg0, ProbeState::horizontal()}, "alpha=1,theta=0"},
      {{Theta::Deg45, ProbeState::horizontal()}, "alpha=1,theta=45"},
      {{Theta::Deg0, ProbeState::vertical()}, "beta=1,theta=0"},
      {{Theta::Deg45, ProbeState::vertical()}, "beta=1,theta=45"},
  };
  for (const auto& extra : extras) {
    plan.push_back({{Theta::Deg0, extra.probe}, extra.name + ",theta=0"});
    plan.push_back({{Theta::Deg45, extra.probe}, extra.name + ",theta=45"});
  }

  std::vector<FringeDataset> out;
  out.reserve(plan.size());
  for (std::size_t k = 0; k < plan.size(); ++k) {
    AcquisitionConfig per_set = cfg;
    per_set.rng_seed = splitmix64(cfg.rng_seed ^ (static_cast<std::uint64_t>(k) + 1));
    FringeDataset ds = acquire(plan[k].setting, scene, per_set);
    ds.label = plan[k].label;
    out.push_back(std::move(ds));
  }
  return out;
}

}  // namespace qiup::acquisition
