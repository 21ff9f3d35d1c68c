#include "strobo/plane.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace strobo {

namespace {

double wrap_phase(double p) { return std::remainder(p, 2 * kPi); }

double literal_phase(double k0, double x, double center_i, double offset) {
  return k0 * x * (std::sin(center_i) - std::sin(center_i + offset));
}

double gradient(double k0, double center_i, double offset) {
  return k0 * (std::sin(center_i) - std::sin(center_i + offset));
}

double lens_phase(double k0, Vec2 atom, const Pose& pose, Vec2 target) {
  return k0 * ((atom - pose.source).norm() + (pose.to_world(target) - atom).norm());
}

}  // namespace

const char* to_string(PlaneMode mode) {
  switch (mode) {
    case PlaneMode::stroboscopic: return "stroboscopic";
    case PlaneMode::lens: return "lens";
    case PlaneMode::mirror: return "mirror";
  }
  return "unknown";
}

PlaneMode plane_mode_from_string(const std::string& name) {
  if (name == "stroboscopic") return PlaneMode::stroboscopic;
  if (name == "lens") return PlaneMode::lens;
  if (name == "mirror") return PlaneMode::mirror;
  throw ValidationError("plane.mode must be stroboscopic, lens or mirror (got '" + name + "')");
}

double continuous_reflection_offset(double x, double period, double center_i, double center_o,
                                    double span, double gamma) {
  if (!(period > 0)) throw DomainError("period must be > 0");
  // Reduce x modulo Λ first so that x and x + Λ land on the same argument.
  const double u = x / period - std::floor(x / period);
  return (center_o - center_i) + span / 2 * std::cos(2 * kPi * u + gamma);
}

double synchronized_gamma(const SceneGeometry& scene, const TxCodebook& codebook, double period) {
  if (!(period > 0)) throw DomainError("period must be > 0");
  if (codebook.angles.empty()) throw DomainError("empty Tx codebook");
  double mean = 0.0;
  for (std::size_t l = 0; l < codebook.angles.size(); ++l) {
    mean += beam_intercept(pose_at(scene, static_cast<long>(l)), codebook.angles[l]).x;
  }
  mean /= static_cast<double>(codebook.angles.size());
  const double u = mean / period - std::floor(mean / period);
  const double g = kPi / 2 - 2 * kPi * u;
  return g - 2 * kPi * std::floor(g / (2 * kPi));
}

ReflectionSpan design_reflection_span(const SceneGeometry& scene, double center_i) {
  ReflectionSpan out;
  out.center = reflection_angle_to_target(center_i, scene, scene.roi_center);
  double lo = out.center, hi = out.center;
  for (const auto& c : scene.roi_corners()) {
    const double a = reflection_angle_to_target(center_i, scene, c);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  out.span = hi - lo;
  return out;
}

ReflectionSpan diagonal_reflection_span(const SceneGeometry& scene, double center_i) {
  const Vec2 half{scene.roi_width / 2, scene.roi_depth / 2};
  ReflectionSpan out;
  out.center = reflection_angle_to_target(center_i, scene, scene.roi_center);
  out.span = reflection_angle_to_target(center_i, scene, scene.roi_center + half) -
             reflection_angle_to_target(center_i, scene, scene.roi_center - half);
  return out;
}

std::size_t quantize_index(double value, const std::vector<double>& sorted) {
  if (sorted.empty()) throw DomainError("quantizer set is empty");
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), value);
  if (it == sorted.begin()) return 0;
  if (it == sorted.end()) return sorted.size() - 1;
  const auto hi = static_cast<std::size_t>(it - sorted.begin());
  // Midpoint goes to the smaller neighbour.
  return (*it - value < value - sorted[hi - 1]) ? hi : hi - 1;
}

double quantize_offset(double value, const std::vector<double>& sorted) {
  return sorted[quantize_index(value, sorted)];
}

std::vector<double> reflection_codebook(double center, double span, std::size_t count) {
  if (count == 0) throw DomainError("reflection codebook needs at least one angle");
  if (count == 1) return {center};
  std::vector<double> out(count);
  const double step = span / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = center - span / 2 + static_cast<double>(k) * step;
  }
  return out;
}

StepLimit reflection_step_limit(const ReflectionSpan& span, double wavelength, double period,
                                double pitch, std::size_t count) {
  if (!(period > 0) || !(pitch > 0) || count == 0) {
    throw DomainError("period, pitch and |Θ_o| must be positive");
  }
  const auto angles = reflection_codebook(span.center, span.span, count);
  double cmax = 0.0;
  for (double a : angles) cmax = std::max(cmax, std::cos(a));

  StepLimit out;
  const double n = static_cast<double>(count);
  out.module_atoms = period / (2 * pitch * n);
  out.step = count > 1 ? span.span / (n - 1) : 0.0;
  out.step_bound = wavelength / (2 * out.module_atoms * pitch * cmax);
  // |Θ_o|_min = 2Δθ_{o,obs}/δθ_o with δθ_o at its bound; substituting
  // N_mod = Λ/(2d|Θ_o|) gives the self-consistent minimum.
  const double joint_min = std::sqrt(2 * span.span * period * cmax / wavelength);
  out.min_count = joint_min;
  out.max_module_atoms = joint_min > 0 ? period / (2 * pitch * joint_min)
                                       : std::numeric_limits<double>::infinity();
  if (out.max_module_atoms < 1.0) {
    std::ostringstream os;
    os << "no reflection codebook is feasible: at least " << std::ceil(joint_min)
       << " angles are needed but a period of " << period << " m holds only "
       << std::floor(period / (2 * pitch)) << " atoms per half-cycle";
    throw DesignError(os.str());
  }
  out.compliant = out.module_atoms <= out.max_module_atoms;
  return out;
}

double PlaneDesign::stored_phase(long m) const {
  if (!contains(m)) throw DomainError("atom index outside the plane");
  return phase[static_cast<std::size_t>(m - lattice.first)];
}

double PlaneDesign::phase_at(long m, const Pose& pose) const {
  if (mode == PlaneMode::lens) return lens_phase(wavenumber, {x(m), 0.0}, pose, lens_target);
  return stored_phase(m);
}

double PlaneDesign::phase_at_x(double xq, const Pose& pose) const {
  if (mode == PlaneMode::lens) return lens_phase(wavenumber, {xq, 0.0}, pose, lens_target);
  const double u = (xq - lattice.origin_x) / lattice.pitch;
  long m = static_cast<long>(std::floor(u));
  m = std::clamp(m, lattice.first, std::max(lattice.first, lattice.last() - 1));
  const double t = u - static_cast<double>(m);
  const double p0 = stored_phase(m);
  if (lattice.count < 2) return p0;
  return p0 + t * wrap_phase(stored_phase(m + 1) - p0);
}

double PlaneDesign::offset(long m) const {
  if (mode != PlaneMode::stroboscopic) throw DomainError("offset() needs a stroboscopic plane");
  return reflection_angles[bin[static_cast<std::size_t>(m - lattice.first)]] - center_i;
}

std::vector<Module> PlaneDesign::modules() const {
  std::vector<Module> out;
  if (mode != PlaneMode::stroboscopic) return out;
  for (std::size_t k = 0; k < bin.size(); ++k) {
    if (out.empty() || out.back().bin != bin[k]) {
      out.push_back({lattice.first + static_cast<long>(k), 0, bin[k]});
    }
    ++out.back().count;
  }
  return out;
}

double quantized_offset(const PlaneDesign& plane, double x) {
  std::vector<double> offsets(plane.reflection_angles);
  for (auto& a : offsets) a -= plane.center_i;
  return quantize_offset(continuous_reflection_offset(x, plane.period, plane.center_i,
                                                      plane.reflection.center,
                                                      plane.reflection.span, plane.gamma),
                         offsets);
}

AtomLattice plane_extent(const SceneGeometry& scene, const SourceConfig& cfg,
                         const TxCodebook& codebook, double pitch, double period,
                         std::size_t sweeps) {
  if (codebook.angles.empty()) throw DomainError("empty Tx codebook");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t s = 0; s < std::max<std::size_t>(sweeps, 1); ++s) {
    for (std::size_t k = 0; k < codebook.size(); ++k) {
      const double th = codebook.angles[k];
      const Pose pose = pose_at(scene, codebook.snapshot_of(s, k));
      const double x0 = beam_intercept(pose, th).x;
      const double half = footprint_atoms(cfg, pose.source.y, th, pitch) * pitch / 2;
      lo = std::min(lo, x0 - half);
      hi = std::max(hi, x0 + half);
    }
  }
  lo -= period;
  hi += period;
  AtomLattice lat;
  lat.pitch = pitch;
  lat.origin_x = scene.plane_origin_x;
  lat.first = static_cast<long>(std::floor((lo - lat.origin_x) / pitch));
  lat.count = static_cast<long>(std::ceil((hi - lat.origin_x) / pitch)) - lat.first + 1;
  return lat;
}

PlaneDesign build_plane(const SceneGeometry& scene, const SourceConfig& cfg,
                        const TxCodebook& codebook, const PlaneRequest& request) {
  if (!(request.period > 0)) throw ValidationError("plane.period_m must be > 0");
  const double pitch = request.pitch.value_or(cfg.wavelength() / 2);
  if (!(pitch > 0)) throw ValidationError("plane.pitch_mm must be > 0");

  PlaneDesign plane;
  plane.mode = request.mode;
  plane.phase_rule = request.phase_rule;
  plane.wavenumber = cfg.wavenumber();
  plane.period = request.period;
  plane.gamma = request.gamma;
  plane.center_i = codebook.center;
  plane.mirror_slope = request.mirror_slope;
  plane.lens_target = request.lens_target.value_or(scene.roi_center);
  plane.lattice = request.lattice.value_or(
      plane_extent(scene, cfg, codebook, pitch, request.period, request.sweeps));
  plane.lattice.pitch = pitch;
  if (plane.lattice.count <= 0) throw ValidationError("plane must contain at least one atom");

  plane.reflection = design_reflection_span(scene, codebook.center);
  if (request.span) plane.reflection.span = *request.span;
  plane.reflection_angles = reflection_codebook(plane.reflection.center, plane.reflection.span,
                                                request.reflection_count);
  plane.step = reflection_step_limit(plane.reflection, cfg.wavelength(), request.period, pitch,
                                     request.reflection_count);
  if (plane.reflection.span == 0.0) {
    plane.warnings.push_back("zero reflection span; single-angle reflection codebook");
  }

  if (plane.mode == PlaneMode::stroboscopic) {
    const double lo = plane.reflection_angles.front(), hi = plane.reflection_angles.back();
    if (std::abs(lo) >= kPi / 2 || std::abs(hi) >= kPi / 2) {
      throw DesignError("reflection codebook reaches grazing angles");
    }
    const double tol = plane.step.step / 2 + 1e-12;
    for (const auto& c : scene.roi_corners()) {
      const double a = reflection_angle_to_target(codebook.center, scene, c);
      if (a < lo - tol || a > hi + tol) {
        std::ostringstream os;
        os << "ROI corner (" << c.x << ", " << c.y << ") needs θ_o = " << rad2deg(a)
           << " deg, outside the reflection codebook [" << rad2deg(lo) << ", " << rad2deg(hi)
           << "] deg";
        throw DesignError(os.str());
      }
    }
    if (!plane.step.compliant) {
      std::ostringstream os;
      os << "module size " << plane.step.module_atoms << " atoms exceeds N_mod^max = "
         << plane.step.max_module_atoms;
      plane.warnings.push_back(os.str());
    }
  }

  const auto n = static_cast<std::size_t>(plane.lattice.count);
  plane.phase.resize(n);
  const double k0 = plane.wavenumber;
  switch (plane.mode) {
    case PlaneMode::stroboscopic: {
      std::vector<double> offsets(plane.reflection_angles);
      for (auto& a : offsets) a -= plane.center_i;
      plane.bin.resize(n);
      double running = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double xm = plane.lattice.x(plane.lattice.first + static_cast<long>(k));
        const double raw = continuous_reflection_offset(
            xm, plane.period, plane.center_i, plane.reflection.center, plane.reflection.span,
            plane.gamma);
        plane.bin[k] = quantize_index(raw, offsets);
        const double off = offsets[plane.bin[k]];
        if (plane.phase_rule == PhaseRule::literal || k == 0) {
          running = literal_phase(k0, xm, plane.center_i, off);
        }
        plane.phase[k] = wrap_phase(running);
        if (plane.phase_rule == PhaseRule::integrated) {
          running += pitch * gradient(k0, plane.center_i, off);
        }
      }
      break;
    }
    case PlaneMode::lens: {
      const Pose pose = pose_at(scene, 0);
      for (std::size_t k = 0; k < n; ++k) {
        const double xm = plane.lattice.x(plane.lattice.first + static_cast<long>(k));
        plane.phase[k] = wrap_phase(lens_phase(k0, {xm, 0.0}, pose, plane.lens_target));
      }
      break;
    }
    case PlaneMode::mirror: {
      for (std::size_t k = 0; k < n; ++k) {
        const auto m = static_cast<double>(plane.lattice.first + static_cast<long>(k));
        plane.phase[k] = wrap_phase(plane.mirror_slope * m);
      }
      break;
    }
  }
  return plane;
}

double dirichlet_pattern(double atoms, double pitch, double wavelength, double steer,
                         double theta_o) {
  const double arg = kPi * pitch / wavelength * (std::sin(theta_o) - std::sin(steer));
  const double den = std::sin(arg);
  if (std::abs(den) < 1e-15) return atoms;
  return std::abs(std::sin(atoms * arg) / den);
}

cdouble reflection_pattern(const PlaneDesign& plane, long first, long count, double theta_i,
                           double theta_o, double x_ref) {
  if (!plane.contains(first) || !plane.contains(first + count - 1)) {
    throw IlluminationError("pattern set extends beyond the plane");
  }
  const double u = std::sin(theta_i) - std::sin(theta_o);
  cdouble acc{0.0, 0.0};
  for (long m = first; m < first + count; ++m) {
    acc += std::polar(1.0, plane.stored_phase(m) - plane.wavenumber * (plane.x(m) - x_ref) * u);
  }
  return acc;
}

}  // namespace strobo
