#include "strobo/codebook.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace strobo {

double SourceConfig::aperture_for_beamwidth(double carrier, double beamwidth) {
  if (!(beamwidth > 0)) throw ValidationError("beamwidth must be > 0");
  return kSpeedOfLight / carrier / beamwidth;
}

void SourceConfig::validate(const SceneGeometry& scene) const {
  if (!(carrier > 0)) throw ValidationError("source.carrier_ghz must be > 0");
  if (!(bandwidth > 0)) throw ValidationError("source.bandwidth_mhz must be > 0");
  if (!(bandwidth < carrier)) throw ValidationError("bandwidth must be below the carrier");
  if (!(aperture > 0)) throw ValidationError("source aperture must be > 0");
  if (!(pulse_duration > 0)) throw ValidationError("source.pulse_us must be > 0");
  if (pulse_duration > scene.pri) {
    throw ValidationError("source.pulse_us exceeds scene.pri_us (pulse must fit in one PRI)");
  }
}

double source_beamwidth(const SourceConfig& cfg, double theta_i) {
  require_finite(theta_i, "incidence angle");
  const double c = std::cos(theta_i);
  if (std::abs(theta_i) >= kPi / 2 || c < 1e-12) {
    throw DomainError("beamwidth diverges as θ_i → ±π/2");
  }
  return cfg.wavelength() / (cfg.aperture * c);
}

double footprint_atoms(const SourceConfig& cfg, double height, double theta_i, double pitch) {
  const double bw = source_beamwidth(cfg, theta_i);
  const double a = std::abs(theta_i);
  if (a >= kFootprintFormulaMinAngle) {
    return height * bw / (pitch * std::cos(a) * std::sin(a));
  }
  // Near broadside the closed form is singular; count atoms inside the cone.
  const double lo = theta_i - bw / 2, hi = theta_i + bw / 2;
  if (std::abs(lo) >= kPi / 2 || std::abs(hi) >= kPi / 2) {
    throw DomainError("beam cone reaches grazing incidence");
  }
  return height * (std::tan(hi) - std::tan(lo)) / pitch;
}

IlluminatedSet illuminated_set(const SourceConfig& cfg, const Pose& pose, const AtomLattice& lattice,
                               double theta_i) {
  if (!(lattice.pitch > 0)) throw DomainError("lattice pitch must be > 0");
  const Vec2 p0 = beam_intercept(pose, theta_i);
  IlluminatedSet set;
  set.center = (p0.x - lattice.origin_x) / lattice.pitch;
  set.nominal = footprint_atoms(cfg, pose.source.y, theta_i, lattice.pitch);
  const long count = std::max<long>(1, std::lround(set.nominal));
  long first = std::lround(set.center - set.nominal / 2);
  long last = first + count - 1;
  if (first < lattice.first || last > lattice.last()) set.clipped = true;
  first = std::max(first, lattice.first);
  last = std::min(last, lattice.last());
  if (last < first) {
    std::ostringstream os;
    os << "beam footprint at x = " << p0.x << " m lies entirely off the plane ["
       << lattice.x(lattice.first) << ", " << lattice.x(lattice.last()) << "] m";
    throw IlluminationError(os.str());
  }
  set.first = first;
  set.count = last - first + 1;
  return set;
}

IlluminatedSet illuminated_set(const SourceConfig& cfg, const SceneGeometry& scene,
                               const AtomLattice& lattice, double theta_i, long snapshot) {
  return illuminated_set(cfg, pose_at(scene, snapshot), lattice, theta_i);
}

double effective_aperture(const SceneGeometry& scene, double center, double span) {
  const double hi = center + span / 2, lo = center - span / 2;
  if (std::abs(hi) >= kPi / 2 || std::abs(lo) >= kPi / 2) {
    throw DomainError("incidence span must stay within (−π/2, π/2)");
  }
  return scene.source_height * (std::tan(hi) - std::tan(lo));
}

SamplingLimit angular_sampling_limit(const SceneGeometry& scene, const SourceConfig& cfg,
                                     double center, double span, int dense_grid) {
  std::vector<Vec2> probes;
  for (const auto& c : scene.roi_corners()) probes.push_back(c);
  if (dense_grid > 1) {
    for (int iy = 0; iy < dense_grid; ++iy) {
      for (int ix = 0; ix < dense_grid; ++ix) {
        const double fx = static_cast<double>(ix) / (dense_grid - 1) - 0.5;
        const double fy = static_cast<double>(iy) / (dense_grid - 1) - 0.5;
        probes.push_back(scene.roi_center + Vec2{fx * scene.roi_width, fy * scene.roi_depth});
      }
    }
  }
  const double lam = cfg.wavelength();
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& r : probes) {
    hi = std::max(hi, propagation_phase_derivative(center + span / 2, scene, r, lam));
    lo = std::min(lo, propagation_phase_derivative(center - span / 2, scene, r, lam));
  }
  SamplingLimit out;
  out.derivative_spread = std::abs(hi - lo);
  if (out.derivative_spread < 1e-12) {
    out.step = std::numeric_limits<double>::infinity();
    out.diagnostic = "phase-derivative spread vanishes; angular step is unbounded";
  } else {
    out.step = kPi / out.derivative_spread;
  }
  return out;
}

TxCodebook uniform_codebook(double center, double span, double step) {
  if (!(span >= 0)) throw DomainError("codebook span must be >= 0");
  TxCodebook cb;
  cb.center = center;
  cb.span = span;
  cb.step = step;
  cb.limit = std::numeric_limits<double>::infinity();
  if (!std::isfinite(step) || span < step) {
    cb.angles = {center};
    if (span > 0) cb.warnings.push_back("span is smaller than one step; single-angle codebook");
    return cb;
  }
  const auto intervals = static_cast<std::size_t>(std::floor(span / step + 1e-9));
  cb.angles.reserve(intervals + 1);
  const double start = center - span / 2;
  for (std::size_t k = 0; k <= intervals; ++k) {
    cb.angles.push_back(start + static_cast<double>(k) * step);
  }
  return cb;
}

TxCodebook build_codebook(const SceneGeometry& scene, const SourceConfig& cfg,
                          const CodebookRequest& request) {
  if (request.step && !(*request.step > 0)) {
    throw ValidationError("codebook step override must be positive");
  }
  const SamplingLimit limit = angular_sampling_limit(scene, cfg, request.center, request.span);
  double step = limit.step;
  if (request.step) step = request.allow_aliasing ? *request.step : std::min(*request.step, step);

  TxCodebook cb = uniform_codebook(request.center, request.span, step);
  cb.limit = limit.step;
  cb.compliant = !(step > limit.step * (1 + 1e-12));
  if (!limit.diagnostic.empty()) cb.warnings.push_back(limit.diagnostic);
  if (!cb.compliant) {
    std::ostringstream os;
    os << "step " << rad2deg(step) << " deg exceeds the anti-aliasing limit "
       << rad2deg(limit.step) << " deg";
    cb.warnings.push_back(os.str());
  }
  return cb;
}

TxCodebook fixed_beam_codebook(double theta_i, std::size_t count) {
  TxCodebook cb;
  cb.center = theta_i;
  cb.span = 0.0;
  cb.step = 0.0;
  cb.limit = std::numeric_limits<double>::infinity();
  cb.fixed_beam = true;
  cb.angles.assign(std::max<std::size_t>(count, 1), theta_i);
  return cb;
}

double narrowband_margin(double bandwidth, double atoms, double pitch, double theta_i,
                         double theta_o) {
  const double delay =
      atoms * pitch / kSpeedOfLight *
      std::max(std::abs(std::sin(theta_i)), std::abs(std::sin(theta_o)));
  if (bandwidth <= 0 || delay <= 0) return std::numeric_limits<double>::infinity();
  return (1.0 / bandwidth) / delay;
}

NarrowbandResult narrowband_check(const SourceConfig& cfg, double pitch,
                                  const std::vector<double>& atoms,
                                  const std::vector<double>& theta_i,
                                  const std::vector<double>& theta_o, double factor) {
  if (atoms.size() != theta_i.size() || atoms.size() != theta_o.size()) {
    throw DomainError("narrowband_check: per-snapshot inputs differ in length");
  }
  NarrowbandResult out;
  out.factor = factor;
  out.margin.reserve(atoms.size());
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const double m = narrowband_margin(cfg.bandwidth, atoms[k], pitch, theta_i[k], theta_o[k]);
    out.margin.push_back(m);
    if (m < factor) out.pass = false;
  }
  return out;
}

}  // namespace strobo
