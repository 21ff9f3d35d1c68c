#include "strobo/pipeline.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace strobo {

namespace {

constexpr std::uint64_t kGammaStream = 0x67616d6d61ULL;  // separates γ draws from noise

SynthesisOptions synthesis_options(const Scenario& s, unsigned threads) {
  SynthesisOptions o;
  o.array_model = s.signal.array_model;
  o.taper = s.signal.taper;
  o.noise = s.noise.enabled;
  o.noise_power = dbm_to_watts(s.noise.power_dbm);
  o.seed = s.seed;
  o.threads = threads;
  o.narrowband_factor = s.signal.narrowband_factor;
  o.epsilon = s.perturbation.epsilon;
  o.beta = s.perturbation.beta;
  return o;
}

}  // namespace

std::vector<double> sweep_gammas(const Scenario& s) {
  switch (s.gamma_policy) {
    case GammaPolicy::random:
      return draw_gammas(s.seed ^ kGammaStream, s.sweeps);
    case GammaPolicy::synchronized:
      return std::vector<double>(
          s.sweeps, synchronized_gamma(s.scene, scenario_codebook(s), s.plane.period));
    case GammaPolicy::fixed:
      break;
  }
  return std::vector<double>(s.sweeps, s.plane.gamma);
}

std::vector<PlaneDesign> sweep_planes(const Scenario& s, const TxCodebook& codebook) {
  PlaneRequest req = s.plane;
  req.sweeps = s.sweeps;
  if (s.gamma_policy != GammaPolicy::random) {
    req.gamma = sweep_gammas(s).front();
    return {build_plane(s.scene, s.source, codebook, req)};
  }
  std::vector<PlaneDesign> out;
  for (double g : sweep_gammas(s)) {
    req.gamma = g;
    out.push_back(build_plane(s.scene, s.source, codebook, req));
  }
  return out;
}

DesignReport run_design(const Scenario& s) {
  DesignReport r;
  r.codebook = scenario_codebook(s);
  r.sampling = angular_sampling_limit(s.scene, s.source, s.codebook.center, s.codebook.span);
  r.effective_aperture = effective_aperture(s.scene, s.codebook.center, s.codebook.span);
  r.diagonal_span = diagonal_reflection_span(s.scene, s.codebook.center);
  PlaneRequest req = s.plane;
  req.sweeps = s.sweeps;
  req.gamma = sweep_gammas(s).front();
  r.plane = build_plane(s.scene, s.source, r.codebook, req);

  std::vector<double> atoms, ti, to;
  const Pose p0 = pose_at(s.scene, 0);
  for (double th : r.codebook.angles) {
    const IlluminatedSet set = illuminated_set(s.source, p0, r.plane.lattice, th);
    atoms.push_back(static_cast<double>(set.count));
    ti.push_back(th);
    double worst = 0.0;
    for (const auto& c : s.scene.roi_corners()) {
      const double a = reflection_angle(p0, th, c);
      if (std::abs(a) > std::abs(worst)) worst = a;
    }
    to.push_back(worst);
  }
  r.narrowband = narrowband_check(s.source, r.plane.lattice.pitch, atoms, ti, to,
                                  s.signal.narrowband_factor);
  r.warnings = r.codebook.warnings;
  r.warnings.insert(r.warnings.end(), r.plane.warnings.begin(), r.plane.warnings.end());
  if (!r.narrowband.pass) r.warnings.push_back("narrowband condition violated for some snapshots");
  return r;
}

EchoCube simulate(const Scenario& s, const TxCodebook& codebook,
                  const std::vector<PlaneDesign>& planes, unsigned threads) {
  if (planes.empty()) throw DomainError("simulate: no plane");
  const Waveform w = make_waveform(s.scene, s.source, codebook, s.signal.oversampling);
  const SynthesisOptions o = synthesis_options(s, threads);
  if (planes.size() == 1) {
    return synthesize_sweeps(s.scene, s.source, planes.front(), codebook, w, s.targets, 0,
                             s.sweeps, o);
  }
  if (planes.size() != s.sweeps) throw DomainError("simulate: one plane per sweep expected");
  EchoCube out;
  for (std::size_t k = 0; k < s.sweeps; ++k) {
    EchoCube c = synthesize_sweeps(s.scene, s.source, planes[k], codebook, w, s.targets, k, 1, o);
    if (k == 0) {
      out = std::move(c);
      continue;
    }
    out.meta.insert(out.meta.end(), c.meta.begin(), c.meta.end());
    out.data.insert(out.data.end(), c.data.begin(), c.data.end());
    for (auto& msg : c.warnings) {
      if (std::find(out.warnings.begin(), out.warnings.end(), msg) == out.warnings.end()) {
        out.warnings.push_back("sweep " + std::to_string(k) + ": " + msg);
      }
    }
  }
  return out;
}

ResolutionBounds predicted_resolution(const Scenario& s, const TxCodebook& codebook,
                                      const PlaneDesign& plane, Vec2 target) {
  const auto sets = illuminated_atom_sets(s.scene, s.source, plane, codebook, 1, target,
                                          -std::numeric_limits<double>::infinity());
  CoverageOptions opt;
  return resolution_bounds(coverage(target, sets, s.source.carrier, s.source.bandwidth, opt));
}

GridSpec scenario_grid(const Scenario& s, const TxCodebook& codebook, const PlaneDesign& plane) {
  double pitch = 5e-3;
  if (s.grid_pitch) {
    pitch = *s.grid_pitch;
  } else {
    const ResolutionBounds b = predicted_resolution(s, codebook, plane, s.scene.roi_center);
    pitch = std::min({pitch, b.x / 4, b.y / 4});
  }
  return roi_grid(s.scene, pitch, pitch);
}

Image form_image(const EchoCube& cube, const Scenario& s, const GridSpec& grid, unsigned threads,
                 bool assume_perturbation) {
  ImagingOptions o;
  o.interpolation = s.signal.interpolation;
  o.threads = threads;
  if (assume_perturbation) {
    o.epsilon = s.perturbation.epsilon;
    o.beta = s.perturbation.beta;
  }
  Image img = backproject(cube, s.scene, grid, o);
  img.provenance = std::string(to_string(s.plane.mode)) + " sweeps=" + std::to_string(s.sweeps);
  return img;
}

std::vector<EchoCube> split_sweeps(const EchoCube& cube) {
  std::map<std::size_t, EchoCube> parts;
  for (std::size_t l = 0; l < cube.snapshots(); ++l) {
    const auto sw = cube.meta[l].sweep;
    auto [it, fresh] = parts.try_emplace(sw);
    EchoCube& c = it->second;
    if (fresh) {
      c.waveform = cube.waveform;
      c.carrier = cube.carrier;
      c.noise = cube.noise;
      c.noise_power = cube.noise_power;
      c.seed = cube.seed;
    }
    c.meta.push_back(cube.meta[l]);
    c.data.insert(c.data.end(), cube.row(l), cube.row(l) + cube.samples());
  }
  std::vector<EchoCube> out;
  for (auto& [k, c] : parts) out.push_back(std::move(c));
  return out;
}

RunResult run_pipeline(const Scenario& s, const RunOptions& options) {
  RunResult r;
  r.codebook = scenario_codebook(s);
  r.planes = sweep_planes(s, r.codebook);
  r.cube = simulate(s, r.codebook, r.planes, options.threads);
  r.grid = options.grid.value_or(scenario_grid(s, r.codebook, r.planes.front()));
  if (options.per_sweep_images) {
    for (const auto& c : split_sweeps(r.cube)) {
      r.sweep_images.push_back(form_image(c, s, r.grid, options.threads,
                                          options.assume_perturbation));
    }
    r.image = combine_sweeps(r.sweep_images);
    r.image.provenance = r.sweep_images.front().provenance;
  } else {
    r.image = form_image(r.cube, s, r.grid, options.threads, options.assume_perturbation);
  }
  r.metrics = compute_metrics(r.image, options.omega);
  return r;
}

}  // namespace strobo
