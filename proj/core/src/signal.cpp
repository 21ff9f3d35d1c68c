#include "strobo/signal.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "strobo/parallel.hpp"

namespace strobo {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = kPi * x;
  return std::sin(px) / px;
}

// Nearest and farthest point of the ROI rectangle from p.
std::pair<double, double> roi_distance_range(const SceneGeometry& scene, Vec2 p) {
  const Vec2 c = scene.roi_center;
  const double hx = scene.roi_width / 2, hy = scene.roi_depth / 2;
  const Vec2 nearest{std::clamp(p.x, c.x - hx, c.x + hx), std::clamp(p.y, c.y - hy, c.y + hy)};
  double far = 0.0;
  for (const auto& k : scene.roi_corners()) far = std::max(far, (k - p).norm());
  return {(nearest - p).norm(), far};
}

}  // namespace

double Waveform::g(double t) const { return sinc(bandwidth * t); }

Waveform make_waveform(const SceneGeometry& scene, const SourceConfig& cfg,
                       const TxCodebook& codebook, double oversampling) {
  if (!(oversampling >= 2.0)) throw ValidationError("signal.oversampling must be >= 2");
  if (codebook.angles.empty()) throw DomainError("empty Tx codebook");
  const Pose pose = pose_at(scene, 0);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double th : codebook.angles) {
    const double di = incidence_distance(pose, th);
    const auto [near, far] = roi_distance_range(scene, beam_intercept(pose, th));
    lo = std::min(lo, di + near);
    hi = std::max(hi, di + far);
  }
  Waveform w;
  w.bandwidth = cfg.bandwidth;
  w.sample_rate = oversampling * cfg.bandwidth;
  const double guard = 4.0 / cfg.bandwidth;
  w.t_min = 2 * lo / kSpeedOfLight - guard;
  const double t_max = 2 * hi / kSpeedOfLight + guard;
  w.samples = static_cast<std::size_t>(std::ceil((t_max - w.t_min) * w.sample_rate)) + 1;
  return w;
}

double path_loss(const SourceConfig& cfg, double theta_i, double theta_o, double d_i, double d_o,
                 double rcs) {
  if (!(d_i > 0) || !(d_o > 0)) throw DomainError("path_loss: distances must be positive");
  const double lam = cfg.wavelength();
  const double eta_source = 2 * cfg.aperture / lam * std::cos(theta_i);
  const double eta_in = std::cos(theta_i);
  const double eta_out = std::cos(theta_o);
  const double num = cfg.bandwidth * cfg.pulse_duration * std::pow(lam, 6) *
                     std::pow(eta_source * eta_in * eta_out, 2) * rcs;
  const double den = std::pow(4 * kPi, 7) * std::pow(d_i, 4) * std::pow(d_o, 4);
  return std::sqrt(cfg.tx_power * num / den);
}

std::vector<double> taper_weights(Taper taper, long count) {
  std::vector<double> w(static_cast<std::size_t>(std::max(count, 0L)), 1.0);
  if (taper == Taper::raised_cosine && count > 1) {
    for (long k = 0; k < count; ++k) {
      const double u = static_cast<double>(k) / static_cast<double>(count - 1);
      w[static_cast<std::size_t>(k)] = 0.5 - 0.5 * std::cos(2 * kPi * u);
    }
    if (count == 2) w.assign(2, 1.0);
  }
  return w;
}

cdouble array_factor(const PlaneDesign& plane, const IlluminatedSet& set, const Pose& pose,
                     double theta_i, Vec2 target, ArrayModel model,
                     const std::vector<double>& weights) {
  const double k0 = plane.wavenumber;
  const Vec2 p0 = beam_intercept(pose, theta_i);
  const Vec2 world = pose.to_world(target);
  const double phi_c = plane.phase_at_x(p0.x, pose);
  const double d_i = (p0 - pose.source).norm();
  const double d_o = (world - p0).norm();
  const double sin_o = (world.x - p0.x) / d_o;
  const double u = std::sin(theta_i) - sin_o;

  cdouble acc{0.0, 0.0};
  for (long j = 0; j < set.count; ++j) {
    const long m = set.first + j;
    const Vec2 pn{plane.x(m), 0.0};
    double extra;
    if (model == ArrayModel::far_field) {
      extra = (pn.x - p0.x) * u;
    } else {
      extra = (pn - pose.source).norm() + (world - pn).norm() - d_i - d_o;
    }
    acc += weights[static_cast<std::size_t>(j)] *
           std::polar(1.0, plane.phase_at(m, pose) - phi_c - k0 * extra);
  }
  return acc;
}

std::vector<cdouble> synthesize_snapshot(const SceneGeometry& scene, const SourceConfig& cfg,
                                         const PlaneDesign& plane, const Waveform& waveform,
                                         double theta_i, long snapshot, const TargetSet& targets,
                                         const SynthesisOptions& options, SnapshotInfo* info) {
  const Pose pose = pose_at(scene, snapshot, options.epsilon, options.beta);
  const IlluminatedSet set = illuminated_set(cfg, pose, plane.lattice, theta_i);
  const auto weights = taper_weights(options.taper, set.count);
  const Vec2 p0 = beam_intercept(pose, theta_i);
  const double d_i = incidence_distance(pose, theta_i);
  const double k0 = cfg.wavenumber();

  std::vector<cdouble> out(waveform.samples, cdouble{0.0, 0.0});
  double worst_sin_o = 0.0;
  for (const auto& t : targets) {
    const Vec2 world = pose.to_world(t.position);
    const double d_o = (world - p0).norm();
    const double theta_o = std::atan2(world.x - p0.x, world.y);
    worst_sin_o = std::max(worst_sin_o, std::abs(std::sin(theta_o)));
    const cdouble af = array_factor(plane, set, pose, theta_i, t.position, options.array_model,
                                    weights);
    const double rho = path_loss(cfg, theta_i, theta_o, d_i, d_o, t.rcs);
    const double path = d_i + d_o;
    // The double sum over (n, n′) factorises into the square of the array factor.
    const cdouble amp = rho * std::polar(1.0, t.phase - 2 * k0 * path) * af * af;
    const double delay = 2 * path / kSpeedOfLight;
    for (std::size_t k = 0; k < waveform.samples; ++k) {
      out[k] += amp * waveform.g(waveform.time(k) - delay);
    }
  }

  if (info) {
    info->index = snapshot;
    info->theta_i = theta_i;
    info->source = pose.source;
    info->intercept_x = p0.x;
    info->first_atom = set.first;
    info->atom_count = set.count;
    info->clipped = set.clipped;
    info->narrowband_margin =
        narrowband_margin(cfg.bandwidth, static_cast<double>(set.count), plane.lattice.pitch,
                          theta_i, std::asin(std::min(1.0, worst_sin_o)));
  }
  return out;
}

EchoCube synthesize_sweeps(const SceneGeometry& scene, const SourceConfig& cfg,
                           const PlaneDesign& plane, const TxCodebook& codebook,
                           const Waveform& waveform, const TargetSet& targets,
                           std::size_t first_sweep, std::size_t sweeps,
                           const SynthesisOptions& options) {
  if (sweeps == 0) throw ValidationError("sweeps must be >= 1");
  if (options.noise && !(options.noise_power >= 0)) {
    throw ValidationError("noise power must be >= 0");
  }
  EchoCube cube;
  cube.waveform = waveform;
  cube.carrier = cfg.carrier;
  cube.noise = options.noise;
  cube.noise_power = options.noise ? options.noise_power : 0.0;
  cube.seed = options.seed;
  const std::size_t per_sweep = codebook.size();
  const std::size_t total = per_sweep * sweeps;
  cube.meta.resize(total);
  cube.data.assign(total * waveform.samples, cdouble{0.0, 0.0});

  parallel_for(total, options.threads, [&](std::size_t r) {
    const std::size_t sweep = first_sweep + r / per_sweep;
    const std::size_t k = r % per_sweep;
    const long l = codebook.snapshot_of(sweep, k);
    SnapshotInfo& info = cube.meta[r];
    const auto row = synthesize_snapshot(scene, cfg, plane, waveform, codebook.angles[k], l,
                                         targets, options, &info);
    info.sweep = sweep;
    std::copy(row.begin(), row.end(), cube.row(r));
    if (options.noise) add_noise(cube.row(r), waveform.samples, options.noise_power, options.seed, l);
  });

  std::size_t clipped = 0, narrow = 0;
  for (const auto& m : cube.meta) {
    clipped += m.clipped ? 1 : 0;
    narrow += m.narrowband_margin < options.narrowband_factor ? 1 : 0;
  }
  if (clipped) {
    cube.warnings.push_back(std::to_string(clipped) + " snapshot footprints clipped by the plane edge");
  }
  if (narrow) {
    cube.warnings.push_back(std::to_string(narrow) +
                            " snapshots violate the narrowband condition");
  }
  return cube;
}

EchoCube synthesize_sweep(const SceneGeometry& scene, const SourceConfig& cfg,
                          const PlaneDesign& plane, const TxCodebook& codebook,
                          const TargetSet& targets, std::size_t sweeps,
                          const SynthesisOptions& options, double oversampling) {
  const Waveform w = make_waveform(scene, cfg, codebook, oversampling);
  return synthesize_sweeps(scene, cfg, plane, codebook, w, targets, 0, sweeps, options);
}

void add_noise(cdouble* row, std::size_t samples, double power, std::uint64_t seed, long snapshot) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(snapshot) + 1)));
  std::normal_distribution<double> n(0.0, std::sqrt(power / 2));
  for (std::size_t k = 0; k < samples; ++k) {
    const double re = n(rng);
    const double im = n(rng);
    row[k] += cdouble{re, im};
  }
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

}  // namespace strobo
