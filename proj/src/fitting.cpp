#include "qiup/fitting.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "qiup/common.hpp"

namespace qiup::fitting {

SinusoidFit fit_sinusoid(std::span<const double> zeta_grid, std::span<const double> counts,
                         bool poisson_weights) {
  const std::size_t n = zeta_grid.size();
  if (counts.size() != n)
    throw std::invalid_argument("fit_sinusoid: grid and counts lengths differ");
  if (n < 8) throw std::invalid_argument("fit_sinusoid: need at least 8 grid points");

  // Normal equations for counts ~ c + p sin(zeta) + q cos(zeta).
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d aty = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = poisson_weights ? 1.0 / std::max(counts[i], 1.0) : 1.0;
    const Eigen::Vector3d row{1.0, std::sin(zeta_grid[i]), std::cos(zeta_grid[i])};
    ata += w * row * row.transpose();
    aty += w * counts[i] * row;
  }

  Eigen::FullPivLU<Eigen::Matrix3d> lu(ata);
  lu.setThreshold(1e-10);
  if (lu.rank() < 3)
    throw std::runtime_error("fit_sinusoid: singular normal equations (degenerate zeta grid)");
  const Eigen::Vector3d beta = lu.solve(aty);
  const double c = beta(0);
  const double p = beta(1);
  const double q = beta(2);

  SinusoidFit fit;
  fit.c = c;
  fit.a = std::hypot(p, q);
  fit.phi = wrap_pi(std::atan2(q, p));
  fit.poisson_weighted = poisson_weights;

  double rss = 0.0;  // unweighted
  double wrss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = counts[i] - (c + p * std::sin(zeta_grid[i]) + q * std::cos(zeta_grid[i]));
    rss += r * r;
    wrss += (poisson_weights ? 1.0 / std::max(counts[i], 1.0) : 1.0) * r * r;
  }
  fit.residual_rms = std::sqrt(rss / static_cast<double>(n));

  // Parameter covariance: exact (A^T W A)^-1 under known Poisson variances,
  // sigma^2 (A^T A)^-1 with sigma^2 = RSS/(n-3) otherwise.
  Eigen::Matrix3d cov = lu.inverse();
  if (!poisson_weights) cov *= wrss / static_cast<double>(n - 3);

  fit.err.c = std::sqrt(std::max(0.0, cov(0, 0)));
  const double var_p = cov(1, 1);
  const double var_q = cov(2, 2);
  const double cov_pq = cov(1, 2);
  if (fit.a > 0.0) {
    const double a2 = fit.a * fit.a;
    fit.err.a =
        std::sqrt(std::max(0.0, (p * p * var_p + q * q * var_q + 2.0 * p * q * cov_pq) / a2));
    fit.err.phi = std::sqrt(
        std::max(0.0, (q * q * var_p + p * p * var_q - 2.0 * p * q * cov_pq) / (a2 * a2)));
  } else {
    fit.err.a = std::sqrt(std::max(0.0, 0.5 * (var_p + var_q)));
    fit.err.phi = std::numbers::pi;
  }

  fit.phase_undetermined =
      fit.a < 10.0 * fit.err.a || fit.a <= 1e-12 * std::max(1.0, std::abs(c));
  if (fit.phase_undetermined) fit.err.phi = std::numbers::pi;
  return fit;
}

SinusoidFit fit_sinusoid(const acquisition::FringeDataset& ds) {
  return fit_sinusoid(ds.config.zeta_grid, ds.counts,
                      ds.config.noise == acquisition::NoiseModel::Poisson);
}

double visibility_of(const SinusoidFit& fit) {
  if (!(fit.c > 0.0)) throw std::invalid_argument("visibility_of: DC level must be positive");
  if (fit.a > fit.c)
    throw std::invalid_argument("visibility_of: amplitude exceeds DC (unphysical fringe)");
  return fit.a / fit.c;
}

double visibility_err_of(const SinusoidFit& fit) {
  if (!(fit.c > 0.0)) return 0.0;
  const double nu = fit.a / fit.c;
  // cov(a, c) is exactly zero on uniform grids and negligible otherwise.
  return std::sqrt(fit.err.a * fit.err.a + nu * nu * fit.err.c * fit.err.c) / fit.c;
}

}  // namespace qiup::fitting
