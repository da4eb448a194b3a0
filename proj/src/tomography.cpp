#include "qiup/tomography.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qiup/analytic.hpp"
#include "qiup/common.hpp"

namespace qiup::tomography {

namespace {

// A fringe is measurable when its amplitude clears both the statistical noise
// floor and an absolute floor (noiseless fits have zero standard error).
bool measurable(const fitting::SinusoidFit& f) {
  return f.a > 5.0 * f.err.a && f.a > 1e-12 * std::max(1.0, std::abs(f.c));
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double calibrate_T(const fitting::SinusoidFit& theta0_beta1,
                   const fitting::SinusoidFit& theta45_alpha1, double* rel_spread) {
  const double nu1 = fitting::visibility_of(theta0_beta1);
  const double nu2 = fitting::visibility_of(theta45_alpha1);
  const double e1 = fitting::visibility_err_of(theta0_beta1);
  const double e2 = fitting::visibility_err_of(theta45_alpha1);
  if (nu1 > 1.0 + 3.0 * e1 + 1e-12)
    throw std::runtime_error("calibrate_T: theta=0, beta1=1 visibility exceeds 1");
  if (nu2 > 1.0 + 3.0 * e2 + 1e-12)
    throw std::runtime_error("calibrate_T: theta=45, alpha1=1 visibility exceeds 1");
  const double t_hat = 0.5 * (nu1 + nu2);
  if (rel_spread) *rel_spread = std::abs(nu1 - nu2) / std::max(t_hat, 1e-300);
  return t_hat;
}

ProbeState characterize_probe(const fitting::SinusoidFit& theta0,
                              const fitting::SinusoidFit& theta45, double t,
                              double* theta45_phase_residual) {
  if (!(t > 0.0)) throw std::invalid_argument("characterize_probe: T must be positive");
  double beta = fitting::visibility_of(theta0) / t;
  double alpha = fitting::visibility_of(theta45) / t;
  const double norm2 = alpha * alpha + beta * beta;
  if (std::abs(norm2 - 1.0) > 0.1)
    throw std::runtime_error(
        "characterize_probe: visibilities inconsistent with a normalized probe");
  const double inv = 1.0 / std::sqrt(norm2);
  alpha = clamp01(alpha * inv);
  beta = clamp01(beta * inv);
  const double gamma = theta0.phase_undetermined ? 0.0 : wrap_pi(std::numbers::pi - theta0.phi);
  if (theta45_phase_residual)
    *theta45_phase_residual =
        theta45.phase_undetermined ? 0.0 : wrap_pi(std::numbers::pi - theta45.phi);
  return ProbeState{alpha, beta, gamma};
}

Reconstruction extract_hv(const HvFits& fits, double t, double b1, double b2,
                          double consistency_tol) {
  const double s = fits.pairs_scale;
  if (!(s > 0.0)) throw std::invalid_argument("extract_hv: pairs scale must be positive");
  if (!(t > 0.0)) throw std::invalid_argument("extract_hv: T must be positive");

  const auto& f0a = fits.theta0_alpha1;    // coupling fringe, amplitude ~ kappa
  const auto& f45a = fits.theta45_alpha1;  // tau_h fringe
  const auto& f0b = fits.theta0_beta1;     // tau_v fringe
  const auto& f45b = fits.theta45_beta1;   // coupling fringe, amplitude ~ kappa

  // Inverts a fitted DC level C = s*(b2^2/2 + b1^2/2 * diag) for diag.
  auto dc_to_diag = [&](double c_fitted, const char* which) {
    const double radicand = (2.0 * c_fitted - b2 * b2 * s) / (b1 * b1 * s);
    if (radicand < -1e-9)
      throw std::runtime_error(std::string("extract_hv: model-inconsistent DC in dataset ") +
                               which);
    return std::max(0.0, radicand);
  };

  Reconstruction rec;
  rec.t_hat = t;
  const double cross = b1 * b2 * t;  // fringe amplitude scale, probability units

  const bool kappa_seen = measurable(f0a) && measurable(f45b);
  const bool tau_h_seen = measurable(f45a);
  const bool tau_v_seen = measurable(f0b);

  double tau_h = 0.0, tau_v = 0.0, kappa = 0.0, phi_h = 0.0, phi_v = 0.0, xi = 0.0;

  if (kappa_seen && tau_h_seen && tau_v_seen) {
    // Visibility ratios cancel T and the flux scale.
    rec.ratios.r1 = fitting::visibility_of(f0a) / fitting::visibility_of(f45a);
    rec.ratios.r2 = fitting::visibility_of(f0b) / fitting::visibility_of(f45b);
    const double diag_a = dc_to_diag(f0a.c, "alpha=1");   // kappa^2 (1 + 1/R1^2)
    const double diag_b = dc_to_diag(f0b.c, "beta=1");    // kappa^2 (1 + R2^2)
    rec.kappa_alpha = std::sqrt(diag_a / (1.0 + 1.0 / (rec.ratios.r1 * rec.ratios.r1)));
    rec.kappa_beta = std::sqrt(diag_b / (1.0 + rec.ratios.r2 * rec.ratios.r2));
    kappa = 0.5 * (rec.kappa_alpha + rec.kappa_beta);
    tau_h = kappa / rec.ratios.r1;
    tau_v = kappa * rec.ratios.r2;

    rec.xi1 = wrap_pi(f0a.phi);
    rec.xi2 = wrap_pi(std::numbers::pi - f45b.phi);
    xi = circ_mean(rec.xi1, rec.xi2);
    phi_h = wrap_pi(std::numbers::pi - f45a.phi);
    phi_v = wrap_pi(std::numbers::pi - f0b.phi);

    rec.consistency.kappa_rel_discrepancy =
        kappa > 0.0 ? std::abs(rec.kappa_alpha - rec.kappa_beta) / kappa : 0.0;
    rec.consistency.xi_rel_discrepancy = circ_dist(rec.xi1, rec.xi2) / std::numbers::pi;
  } else if (!kappa_seen) {
    // Coupling fringes below the noise floor: kappa gets an upper bound and
    // the transmissions come straight from the DC levels at kappa = 0.
    tau_h = std::sqrt(dc_to_diag(f0a.c, "alpha=1"));
    tau_v = std::sqrt(dc_to_diag(f0b.c, "beta=1"));
    const double floor_a = std::max(5.0 * f0a.err.a, f0a.a) / (s * cross);
    const double floor_b = std::max(5.0 * f45b.err.a, f45b.a) / (s * cross);
    kappa = std::min(floor_a, floor_b);
    rec.kappa_is_upper_bound = true;
    rec.kappa_alpha = 0.0;
    rec.kappa_beta = 0.0;
    if (tau_h_seen) phi_h = wrap_pi(std::numbers::pi - f45a.phi);
    if (tau_v_seen) phi_v = wrap_pi(std::numbers::pi - f0b.phi);
  } else {
    // Coupling measurable but a transmission fringe is not: that tau is the
    // corresponding noise floor, kappa comes from the DC levels directly.
    const double diag_a = dc_to_diag(f0a.c, "alpha=1");
    const double diag_b = dc_to_diag(f0b.c, "beta=1");
    tau_h = tau_h_seen ? 0.0 : f45a.a / (s * cross);
    tau_v = tau_v_seen ? 0.0 : f0b.a / (s * cross);
    if (tau_h_seen) {
      rec.ratios.r1 = fitting::visibility_of(f0a) / fitting::visibility_of(f45a);
      rec.kappa_alpha = std::sqrt(diag_a / (1.0 + 1.0 / (rec.ratios.r1 * rec.ratios.r1)));
      tau_h = rec.kappa_alpha / rec.ratios.r1;
      phi_h = wrap_pi(std::numbers::pi - f45a.phi);
    } else {
      rec.kappa_alpha = std::sqrt(std::max(0.0, diag_a - tau_h * tau_h));
    }
    if (tau_v_seen) {
      rec.ratios.r2 = fitting::visibility_of(f0b) / fitting::visibility_of(f45b);
      rec.kappa_beta = std::sqrt(diag_b / (1.0 + rec.ratios.r2 * rec.ratios.r2));
      tau_v = rec.kappa_beta * rec.ratios.r2;
      phi_v = wrap_pi(std::numbers::pi - f0b.phi);
    } else {
      rec.kappa_beta = std::sqrt(std::max(0.0, diag_b - tau_v * tau_v));
    }
    kappa = 0.5 * (rec.kappa_alpha + rec.kappa_beta);
    rec.xi1 = wrap_pi(f0a.phi);
    rec.xi2 = wrap_pi(std::numbers::pi - f45b.phi);
    xi = circ_mean(rec.xi1, rec.xi2);
    rec.consistency.kappa_rel_discrepancy =
        kappa > 0.0 ? std::abs(rec.kappa_alpha - rec.kappa_beta) / kappa : 0.0;
    rec.consistency.xi_rel_discrepancy = circ_dist(rec.xi1, rec.xi2) / std::numbers::pi;
  }

  rec.consistency.pass = rec.consistency.kappa_rel_discrepancy <= consistency_tol &&
                         rec.consistency.xi_rel_discrepancy <= consistency_tol;
  rec.object = canonical_object(tau_h, tau_v, kappa, phi_h, phi_v, xi,
                                /*boundary_tol=*/1.0);  // estimates may sit past the boundary
  rec.dphi = wrap_pi(rec.object.phi_h - rec.object.phi_v);
  return rec;
}

namespace {

struct ResidualProblem {
  const std::vector<acquisition::FringeDataset>* datasets;
  double t;
  double b1;
  double b2;
  std::size_t total = 0;

  explicit ResidualProblem(const std::vector<acquisition::FringeDataset>& ds, double t_,
                           double b1_, double b2_)
      : datasets(&ds), t(t_), b1(b1_), b2(b2_) {
    for (const auto& d : ds) {
      if (d.config.pairs_per_point == 0)
        throw std::invalid_argument("refine_global: dataset with zero pairs per point");
      total += d.counts.size();
    }
  }

  // Weighted residuals in fixed dataset-then-index order.
  void eval(const Eigen::Matrix<double, 6, 1>& x, std::vector<double>& out) const {
    out.resize(total);
    const JonesObject obj{x(0), x(1), x(2), x(3), x(4), x(5)};
    const SourceConfig src{b1, b2, 0.0};
    std::size_t at = 0;
    for (const auto& d : *datasets) {
      const std::vector<double> prob = analytic::counts_with_object_grid(
          d.theta, d.probe, obj, src, t, d.config.zeta_grid);
      const double pairs = static_cast<double>(d.config.pairs_per_point);
      const bool poisson = d.config.noise == acquisition::NoiseModel::Poisson;
      for (std::size_t i = 0; i < prob.size(); ++i) {
        const double w = poisson ? 1.0 / std::max(d.counts[i], 1.0) : 1.0;
        out[at++] = (prob[i] * pairs - d.counts[i]) * std::sqrt(w);
      }
    }
  }
};

double cost_of(const std::vector<double>& r) {
  double c = 0.0;  // fixed-order summation
  for (double v : r) c += v * v;
  return c;
}

}  // namespace

double residual_rms(const std::vector<acquisition::FringeDataset>& datasets,
                    const JonesObject& obj, double t, double b1, double b2) {
  const SourceConfig src{b1, b2, 0.0};
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& d : datasets) {
    if (d.config.pairs_per_point == 0)
      throw std::invalid_argument("residual_rms: dataset with zero pairs per point");
    const std::vector<double> prob =
        analytic::counts_with_object_grid(d.theta, d.probe, obj, src, t, d.config.zeta_grid);
    const double pairs = static_cast<double>(d.config.pairs_per_point);
    for (std::size_t i = 0; i < prob.size(); ++i) {
      const double r = prob[i] - d.counts[i] / pairs;
      sum += r * r;
      ++n;
    }
  }
  return n == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(n));
}

Reconstruction refine_global(const std::vector<acquisition::FringeDataset>& datasets,
                             const Reconstruction& initial, double b1, double b2,
                             const RefineOptions& opts) {
  if (datasets.size() < 4)
    throw std::invalid_argument("refine_global: need at least 4 datasets");
  const ResidualProblem problem(datasets, initial.t_hat, b1, b2);

  Eigen::Matrix<double, 6, 1> x;
  x << initial.object.tau_h, initial.object.tau_v, initial.object.kappa, initial.object.phi_h,
      initial.object.phi_v, initial.object.xi;

  std::vector<double> r, r_try, r_plus, r_minus;
  problem.eval(x, r);
  double cost = cost_of(r);

  Eigen::Matrix<double, Eigen::Dynamic, 6> jac(static_cast<Eigen::Index>(problem.total), 6);
  double lambda = 1e-3;
  bool converged = false;
  bool stuck = false;
  int accepted = 0;

  while (!converged && !stuck && accepted < opts.max_iterations) {
    // Central-difference Jacobian, column per parameter.
    for (int k = 0; k < 6; ++k) {
      const double h = k < 3 ? opts.amp_step : opts.phase_step;
      Eigen::Matrix<double, 6, 1> xp = x;
      Eigen::Matrix<double, 6, 1> xm = x;
      xp(k) += h;
      xm(k) -= h;
      problem.eval(xp, r_plus);
      problem.eval(xm, r_minus);
      for (std::size_t i = 0; i < problem.total; ++i)
        jac(static_cast<Eigen::Index>(i), k) = (r_plus[i] - r_minus[i]) / (2.0 * h);
    }
    const Eigen::Matrix<double, 6, 6> jtj = jac.transpose() * jac;
    Eigen::Matrix<double, 6, 1> g = Eigen::Matrix<double, 6, 1>::Zero();
    for (std::size_t i = 0; i < problem.total; ++i)
      g += jac.row(static_cast<Eigen::Index>(i)).transpose() * r[i];

    // Try steps with growing damping until one does not increase the cost.
    for (;;) {
      Eigen::Matrix<double, 6, 6> damped = jtj;
      for (int k = 0; k < 6; ++k)
        damped(k, k) += lambda * std::max(jtj(k, k), 1e-300);
      const Eigen::Matrix<double, 6, 1> step = damped.ldlt().solve(-g);
      problem.eval(x + step, r_try);
      const double cost_try = cost_of(r_try);
      if (cost_try <= cost) {
        const double drop = cost - cost_try;
        x += step;
        r.swap(r_try);
        const double prev = cost;
        cost = cost_try;
        ++accepted;
        lambda = std::max(lambda * 0.1, 1e-12);
        if (drop <= opts.cost_rel_tol * std::max(prev, 1e-300) ||
            step.norm() < opts.step_tol || cost < 1e-24)
          converged = true;
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e10) {
        stuck = true;
        break;
      }
    }
  }

  Reconstruction out = initial;
  out.object = canonical_object(x(0), x(1), x(2), x(3), x(4), x(5), 1e-6);
  out.dphi = wrap_pi(out.object.phi_h - out.object.phi_v);
  out.refined = converged;
  out.iterations = accepted;
  out.residual_rms = residual_rms(datasets, out.object, initial.t_hat, b1, b2);
  return out;
}

}  // namespace qiup::tomography
