#pragma once

// Reference implementations written as literal loops. They share only data
// (plane phases, the illuminated set, the radar-equation amplitude) with the
// library, never its summation or interpolation code.

#include <cmath>
#include <complex>
#include <vector>

#include "strobo/signal.hpp"

namespace strobo::oracle {

inline double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

inline double lanczos4(double x) {
  if (std::abs(x) >= 4.0) return 0.0;
  return sinc(x) * sinc(x / 4.0);
}

/// Echo of one snapshot as the explicit double sum over atom pairs (n, n′),
/// far-field path differences, uniform weights.
inline std::vector<cdouble> echo_double_sum(const SceneGeometry& scene, const SourceConfig& cfg,
                                            const PlaneDesign& plane, const Waveform& w,
                                            double theta_i, long snapshot,
                                            const TargetSet& targets) {
  const double c = kSpeedOfLight;
  const double k0 = 2 * kPi * cfg.carrier / c;
  const double travel = static_cast<double>(snapshot) * scene.speed * scene.pri;
  const double sx = scene.source_x0 + travel;
  const double h = scene.source_height;
  const double x0 = sx + h * std::tan(theta_i);
  const double d_i = h / std::cos(theta_i);
  const Pose pose = pose_at(scene, snapshot);
  const IlluminatedSet set = illuminated_set(cfg, pose, plane.lattice, theta_i);
  const double phi_c = plane.phase_at_x(x0, pose);

  std::vector<cdouble> out(w.samples, cdouble{0.0, 0.0});
  for (const auto& t : targets) {
    const double tx = t.position.x + travel;
    const double ty = t.position.y;
    const double d_o = std::sqrt((tx - x0) * (tx - x0) + ty * ty);
    const double theta_o = std::atan2(tx - x0, ty);
    const double u = std::sin(theta_i) - std::sin(theta_o);
    cdouble pairs{0.0, 0.0};
    for (long n = set.first; n <= set.last(); ++n) {
      for (long m = set.first; m <= set.last(); ++m) {
        const double dn = (plane.x(n) - x0) * u;
        const double dm = (plane.x(m) - x0) * u;
        const double ph = plane.phase_at(n, pose) + plane.phase_at(m, pose) - 2 * phi_c -
                          k0 * (dn + dm);
        pairs += std::polar(1.0, ph);
      }
    }
    const double rho = path_loss(cfg, theta_i, theta_o, d_i, d_o, t.rcs);
    const double delay = 2 * (d_i + d_o) / c;
    for (std::size_t k = 0; k < w.samples; ++k) {
      const double time = w.t_min + static_cast<double>(k) / w.sample_rate;
      out[k] += rho * pairs * std::polar(1.0, t.phase - 2 * k0 * (d_i + d_o)) *
                sinc(w.bandwidth * (time - delay));
    }
  }
  return out;
}

/// Back-projection as pixel × snapshot × tap loops with a direct Lanczos-4 kernel.
inline std::vector<cdouble> backprojection_triple_loop(const EchoCube& cube,
                                                       const SceneGeometry& scene,
                                                       const std::vector<Vec2>& pixels) {
  const double c = kSpeedOfLight;
  const double k0 = 2 * kPi * cube.carrier / c;
  const Waveform& w = cube.waveform;
  std::vector<cdouble> out(pixels.size(), cdouble{0.0, 0.0});
  for (std::size_t p = 0; p < pixels.size(); ++p) {
    for (std::size_t l = 0; l < cube.snapshots(); ++l) {
      const auto& m = cube.meta[l];
      const double travel = static_cast<double>(m.index) * scene.speed * scene.pri;
      const double sx = scene.source_x0 + travel;
      const double x0 = sx + scene.source_height * std::tan(m.theta_i);
      const double d_i = std::hypot(x0 - sx, scene.source_height);
      const double d_o = std::hypot(pixels[p].x + travel - x0, pixels[p].y);
      const double path = d_i + d_o;
      const double u = (2 * path / c - w.t_min) * w.sample_rate;
      if (u < 0.0 || u > static_cast<double>(w.samples - 1)) continue;
      cdouble s{0.0, 0.0};
      for (std::size_t k = 0; k < w.samples; ++k) {
        s += cube.row(l)[k] * lanczos4(u - static_cast<double>(k));
      }
      out[p] += s * std::polar(1.0, 2 * k0 * path);
    }
  }
  return out;
}

inline double max_abs(const std::vector<cdouble>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

inline double max_abs_diff(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size() && k < b.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace strobo::oracle
