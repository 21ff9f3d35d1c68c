#include "strobo/perturbation.hpp"

#include <algorithm>
#include <random>

namespace strobo {

void PerturbationSpec::validate() const {
  require_finite(epsilon, "perturbation.epsilon_m");
  require_finite(beta, "perturbation.beta_deg");
  if (std::abs(beta) >= deg2rad(10.0)) {
    throw ValidationError("perturbation.beta_deg must satisfy |β| < 10°");
  }
}

Pose perturbed_pose(const SceneGeometry& scene, const PerturbationSpec& spec, long snapshot) {
  return pose_at(scene, snapshot, spec.epsilon, spec.beta);
}

PathLengths perturbed_path_lengths(const SceneGeometry& scene, const PerturbationSpec& spec,
                                   double theta_i, Vec2 x, long snapshot) {
  const Pose pose = perturbed_pose(scene, spec, snapshot);
  const Vec2 p0 = beam_intercept(pose, theta_i);
  return {incidence_distance(pose, theta_i), (pose.to_world(x) - p0).norm()};
}

DistanceFactors taylor_distance_factors(const SceneGeometry& scene, double theta_i, Vec2 x,
                                        long snapshot, PerturbationKind kind) {
  const double t = std::tan(theta_i);
  const double sec = 1.0 / std::cos(theta_i);
  const double h = scene.source_height;
  const double l = scene.travel(snapshot);
  // Horizontal offset of x from the nominal beam intercept.
  const double u = x.x - scene.source_x0 - h * t;
  const double d_o = std::hypot(u, x.y);
  if (kind == PerturbationKind::epsilon) {
    return {sec, (-t * u + x.y) / d_o};
  }
  return {-l * sec, (u * l * t - x.y * l) / d_o};
}

DistanceFactors printed_distance_factors(const SceneGeometry& scene, double theta_i, Vec2 x,
                                         long snapshot, PerturbationKind kind) {
  const double t = std::tan(theta_i);
  const double h = scene.source_height;
  const double l = scene.travel(snapshot);
  const double px = x.x - scene.source_x0;
  const double d_o = std::hypot(px - h * t, x.y);
  if (kind == PerturbationKind::epsilon) {
    return {1.0 / std::cos(theta_i), (-t * (px - h * t) + (h - x.y)) / d_o};
  }
  const double zi = (h * t + l) * std::sqrt(1 + t * t);
  const double zo = d_o * t - ((px - h * t) * (px + l) * t + (h - x.y) * (x.y * t + l)) / d_o;
  return {zi, zo};
}

double first_order_error(const SceneGeometry& scene, const PerturbationSpec& spec,
                         double theta_i, Vec2 x, long snapshot) {
  double e = 0.0;
  if (spec.epsilon != 0.0) {
    e += taylor_distance_factors(scene, theta_i, x, snapshot, PerturbationKind::epsilon).total() *
         spec.epsilon;
  }
  if (spec.beta != 0.0) {
    e += taylor_distance_factors(scene, theta_i, x, snapshot, PerturbationKind::beta).total() *
         spec.beta;
  }
  return e;
}

DegradedPrediction predicted_degraded_image(const SceneGeometry& scene, const SourceConfig& cfg,
                                            const TxCodebook& codebook,
                                            const PerturbationSpec& spec, Vec2 target,
                                            std::size_t sweeps) {
  Waveform w;
  w.bandwidth = cfg.bandwidth;
  const double lam = cfg.wavelength();
  const double cell = kSpeedOfLight / (2 * cfg.bandwidth);
  DegradedPrediction out;
  for (std::size_t s = 0; s < std::max<std::size_t>(sweeps, 1); ++s) {
    for (std::size_t k = 0; k < codebook.size(); ++k) {
      const long l = codebook.snapshot_of(s, k);
      const double e = first_order_error(scene, spec, codebook.angles[k], target, l);
      const cdouble wgt = w.g(2 * e / kSpeedOfLight) * std::polar(1.0, -4 * kPi / lam * e);
      out.error.push_back(e);
      out.weights.push_back(wgt);
      out.sum += wgt;
      if (std::abs(e) > 0.1 * cell) out.first_order_ok = false;
    }
  }
  return out;
}

std::vector<double> draw_gammas(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  std::vector<double> out(count);
  for (auto& g : out) g = u(rng);
  return out;
}

GammaStudy random_illumination_study(const SceneGeometry& scene, const SourceConfig& cfg,
                                     const TxCodebook& codebook, const TargetSet& targets,
                                     const std::vector<double>& gammas,
                                     const GammaStudyConfig& config) {
  if (gammas.empty()) throw ValidationError("gamma study needs at least one draw");
  GammaStudy out;
  out.gammas = gammas;
  const Waveform w = make_waveform(scene, cfg, codebook, config.oversampling);
  PlaneRequest req = config.plane;
  req.sweeps = std::max(req.sweeps, gammas.size());
  for (std::size_t s = 0; s < gammas.size(); ++s) {
    req.gamma = gammas[s];
    const PlaneDesign plane = build_plane(scene, cfg, codebook, req);
    const EchoCube cube =
        synthesize_sweeps(scene, cfg, plane, codebook, w, targets, s, 1, config.synthesis);
    out.images.push_back(backproject(cube, scene, config.grid, config.imaging));
    out.metrics.push_back(compute_metrics(out.images.back(), config.omega));
  }
  out.combined = combine_sweeps(out.images);
  out.combined_metrics = compute_metrics(out.combined, config.omega);

  double pmin = out.metrics.front().peak_value, pmax = pmin, psum = 0.0;
  double imin = 10 * std::log10(out.metrics.front().islr), imax = imin;
  for (const auto& m : out.metrics) {
    pmin = std::min(pmin, m.peak_value);
    pmax = std::max(pmax, m.peak_value);
    psum += m.peak_value;
    const double db = 10 * std::log10(m.islr);
    imin = std::min(imin, db);
    imax = std::max(imax, db);
  }
  const double mean = psum / static_cast<double>(out.metrics.size());
  out.peak_spread = mean > 0 ? (pmax - pmin) / mean : 0.0;
  out.islr_spread = imax - imin;
  return out;
}

}  // namespace strobo
