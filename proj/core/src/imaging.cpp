#include "strobo/imaging.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "strobo/parallel.hpp"

namespace strobo {

namespace {

constexpr int kLanczosA = 4;

std::vector<double> magnitude(const Image& image) {
  std::vector<double> m(image.values.size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = std::abs(image.values[k]);
  return m;
}

// Vertex offset of the parabola through (−1, a), (0, b), (1, c).
double parabolic_offset(double a, double b, double c) {
  const double den = a - 2 * b + c;
  if (std::abs(den) < 1e-300) return 0.0;
  return std::clamp(0.5 * (a - c) / den, -0.5, 0.5);
}

}  // namespace

GridSpec roi_grid(const SceneGeometry& scene, double pitch_x, double pitch_y) {
  if (!(pitch_x > 0) || !(pitch_y > 0)) throw ValidationError("grid.pitch_mm must be > 0");
  GridSpec g;
  g.pitch_x = pitch_x;
  g.pitch_y = pitch_y;
  g.nx = static_cast<std::size_t>(std::llround(scene.roi_width / pitch_x)) + 1;
  g.ny = static_cast<std::size_t>(std::llround(scene.roi_depth / pitch_y)) + 1;
  g.origin = scene.roi_center - Vec2{static_cast<double>(g.nx - 1) * pitch_x / 2,
                                     static_cast<double>(g.ny - 1) * pitch_y / 2};
  return g;
}

bool interpolate(const cdouble* row, std::size_t n, double u, Interpolation mode, cdouble& out) {
  out = {0.0, 0.0};
  if (n == 0 || !(u >= 0.0) || u > static_cast<double>(n - 1)) return false;
  const auto base = static_cast<long>(std::floor(u));
  const double frac = u - static_cast<double>(base);
  if (mode == Interpolation::linear || frac == 0.0) {
    const auto b = static_cast<std::size_t>(base);
    if (frac == 0.0) {
      out = row[b];
    } else {
      out = (1.0 - frac) * row[b] + frac * row[b + 1];
    }
    return true;
  }
  // For tap k, x = frac + j with j = base − k, so sin(πx) = (−1)^j sin(π frac)
  // and sin(πx/4) follows from sin/cos(π frac/4) by angle addition.
  static const auto rot = [] {
    std::array<std::pair<double, double>, 2 * kLanczosA> t{};
    for (int i = 0; i < 2 * kLanczosA; ++i) {
      const double a = kPi * (i - kLanczosA) / kLanczosA;
      t[static_cast<std::size_t>(i)] = {std::cos(a), std::sin(a)};
    }
    return t;
  }();
  const double s1 = std::sin(kPi * frac);
  const double s4 = std::sin(kPi * frac / kLanczosA);
  const double c4 = std::cos(kPi * frac / kLanczosA);
  const long ln = static_cast<long>(n);
  for (long k = base - kLanczosA + 1; k <= base + kLanczosA; ++k) {
    if (k < 0 || k >= ln) continue;
    const long j = base - k;
    const double x = frac + static_cast<double>(j);
    const auto& [cj, sj] = rot[static_cast<std::size_t>(j + kLanczosA)];
    const double sin_x = (j % 2 == 0) ? s1 : -s1;
    const double sin_x4 = s4 * cj + c4 * sj;
    out += row[k] * (kLanczosA * sin_x * sin_x4 / (kPi * kPi * x * x));
  }
  return true;
}

Image backproject(const EchoCube& cube, const SceneGeometry& assumed, const GridSpec& grid,
                  const ImagingOptions& options) {
  if (cube.data.size() != cube.snapshots() * cube.samples()) {
    throw DomainError("echo cube payload does not match its dimensions");
  }
  const double k0 = 2 * kPi * cube.carrier / kSpeedOfLight;
  const Waveform& w = cube.waveform;

  struct Look {
    Vec2 intercept;
    Vec2 frame_offset;
    double d_i;
  };
  std::vector<Look> looks(cube.snapshots());
  for (std::size_t l = 0; l < looks.size(); ++l) {
    const auto& m = cube.meta[l];
    const Pose pose = pose_at(assumed, m.index, options.epsilon, options.beta);
    looks[l] = {beam_intercept(pose, m.theta_i), pose.frame_offset,
                incidence_distance(pose, m.theta_i)};
  }

  Image img;
  img.grid = grid;
  img.values.assign(grid.size(), cdouble{0.0, 0.0});
  std::vector<std::size_t> skipped(grid.ny, 0);

  parallel_for(grid.ny, options.threads, [&](std::size_t iy) {
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
      const Vec2 x = grid.position(ix, iy);
      cdouble acc{0.0, 0.0};
      for (std::size_t l = 0; l < looks.size(); ++l) {
        const Look& lk = looks[l];
        const Vec2 r = x + lk.frame_offset - lk.intercept;
        const double path = lk.d_i + std::sqrt(r.x * r.x + r.y * r.y);
        const double u = (2 * path / kSpeedOfLight - w.t_min) * w.sample_rate;
        cdouble s;
        if (!interpolate(cube.row(l), w.samples, u, options.interpolation, s)) {
          ++skipped[iy];
          continue;
        }
        acc += s * std::polar(1.0, 2 * k0 * path);
      }
      img.values[iy * grid.nx + ix] = acc;
    }
  });
  for (auto s : skipped) img.skipped += s;
  return img;
}

Image combine_sweeps(const std::vector<Image>& images) {
  if (images.empty()) throw DomainError("combine_sweeps: no images");
  Image out = images.front();
  for (std::size_t k = 1; k < images.size(); ++k) {
    if (!(images[k].grid == out.grid)) throw DomainError("combine_sweeps: grid mismatch");
    for (std::size_t p = 0; p < out.values.size(); ++p) out.values[p] += images[k].values[p];
    out.skipped += images[k].skipped;
  }
  return out;
}

namespace {

Peak refined_peak(const Image& image, const std::vector<double>& mag, std::size_t idx) {
  const auto& g = image.grid;
  Peak p;
  p.ix = idx % g.nx;
  p.iy = idx / g.nx;
  p.value = mag[idx];
  double dx = 0.0, dy = 0.0;
  if (p.ix > 0 && p.ix + 1 < g.nx) {
    dx = parabolic_offset(mag[idx - 1], mag[idx], mag[idx + 1]);
  }
  if (p.iy > 0 && p.iy + 1 < g.ny) {
    dy = parabolic_offset(mag[idx - g.nx], mag[idx], mag[idx + g.nx]);
  }
  p.position = g.position(p.ix, p.iy) + Vec2{dx * g.pitch_x, dy * g.pitch_y};
  return p;
}

}  // namespace

Peak find_peak(const Image& image) {
  if (image.values.empty()) throw DomainError("empty image");
  const auto mag = magnitude(image);
  const auto it = std::max_element(mag.begin(), mag.end());
  return refined_peak(image, mag, static_cast<std::size_t>(it - mag.begin()));
}

Peak local_peak(const Image& image, Vec2 near) {
  if (image.values.empty()) throw DomainError("empty image");
  const auto& g = image.grid;
  const auto mag = magnitude(image);
  auto clamp_index = [](double u, std::size_t n) {
    const double r = std::round(u);
    if (r <= 0) return std::size_t{0};
    return std::min(static_cast<std::size_t>(r), n - 1);
  };
  long ix = static_cast<long>(clamp_index((near.x - g.origin.x) / g.pitch_x, g.nx));
  long iy = static_cast<long>(clamp_index((near.y - g.origin.y) / g.pitch_y, g.ny));
  while (true) {
    long bx = ix, by = iy;
    for (long dy = -1; dy <= 1; ++dy) {
      for (long dx = -1; dx <= 1; ++dx) {
        const long x = ix + dx, y = iy + dy;
        if (x < 0 || y < 0 || x >= static_cast<long>(g.nx) || y >= static_cast<long>(g.ny)) continue;
        if (mag[static_cast<std::size_t>(y) * g.nx + static_cast<std::size_t>(x)] >
            mag[static_cast<std::size_t>(by) * g.nx + static_cast<std::size_t>(bx)]) {
          bx = x;
          by = y;
        }
      }
    }
    if (bx == ix && by == iy) break;
    ix = bx;
    iy = by;
  }
  return refined_peak(image, mag, static_cast<std::size_t>(iy) * g.nx + static_cast<std::size_t>(ix));
}

double cut_width(const std::vector<double>& mag, std::size_t i0, double pitch) {
  const double level = mag.at(i0) / std::sqrt(2.0);
  auto crossing = [&](int dir) {
    long i = static_cast<long>(i0);
    const long n = static_cast<long>(mag.size());
    while (true) {
      const long j = i + dir;
      if (j < 0 || j >= n) throw DomainError("mainlobe extends past the image edge");
      if (mag[static_cast<std::size_t>(j)] < level) {
        const double a = mag[static_cast<std::size_t>(i)];
        const double b = mag[static_cast<std::size_t>(j)];
        const double t = (a - level) / (a - b);
        return (static_cast<double>(i) + dir * t) * pitch;
      }
      i = j;
    }
  };
  return crossing(+1) - crossing(-1);
}

Widths measure_mainlobe(const Image& image, const Peak& peak) {
  const auto& g = image.grid;
  std::vector<double> row(g.nx), col(g.ny);
  for (std::size_t ix = 0; ix < g.nx; ++ix) row[ix] = std::abs(image.at(ix, peak.iy));
  for (std::size_t iy = 0; iy < g.ny; ++iy) col[iy] = std::abs(image.at(peak.ix, iy));
  return {cut_width(row, peak.ix, g.pitch_x), cut_width(col, peak.iy, g.pitch_y)};
}

double islr(const Image& image, Vec2 center, double omega_x, double omega_y) {
  double inside = 0.0, outside = 0.0;
  const auto& g = image.grid;
  for (std::size_t iy = 0; iy < g.ny; ++iy) {
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const Vec2 p = g.position(ix, iy);
      const double e = std::norm(image.at(ix, iy));
      if (std::abs(p.x - center.x) <= omega_x / 2 && std::abs(p.y - center.y) <= omega_y / 2) {
        inside += e;
      } else {
        outside += e;
      }
    }
  }
  if (!(inside > 0)) throw DomainError("ISLR undefined: no energy inside the mainlobe region");
  return outside / inside;
}

double highest_sidelobe_db(const Image& image, const Peak& peak) {
  const auto& g = image.grid;
  const auto mag = magnitude(image);
  std::vector<char> basin(mag.size(), 0);
  std::vector<std::size_t> stack{peak.iy * g.nx + peak.ix};
  basin[stack.back()] = 1;
  while (!stack.empty()) {
    const std::size_t c = stack.back();
    stack.pop_back();
    const std::size_t cx = c % g.nx, cy = c / g.nx;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const long nx = static_cast<long>(cx) + dx, ny = static_cast<long>(cy) + dy;
        if (nx < 0 || ny < 0 || nx >= static_cast<long>(g.nx) || ny >= static_cast<long>(g.ny)) {
          continue;
        }
        const std::size_t n = static_cast<std::size_t>(ny) * g.nx + static_cast<std::size_t>(nx);
        if (!basin[n] && mag[n] <= mag[c]) {
          basin[n] = 1;
          stack.push_back(n);
        }
      }
    }
  }
  double best = 0.0;
  for (std::size_t k = 0; k < mag.size(); ++k) {
    if (!basin[k]) best = std::max(best, mag[k]);
  }
  if (best <= 0 || peak.value <= 0) return -std::numeric_limits<double>::infinity();
  return 20 * std::log10(best / peak.value);
}

ImageMetrics compute_metrics(const Image& image, std::optional<Widths> omega) {
  const Peak peak = find_peak(image);
  ImageMetrics m;
  m.peak = peak.position;
  m.peak_value = peak.value;
  try {
    m.width = measure_mainlobe(image, peak);
    m.widths_valid = true;
  } catch (const DomainError&) {
    m.widths_valid = false;
  }
  if (omega) {
    m.omega_x = omega->x;
    m.omega_y = omega->y;
  } else if (m.widths_valid) {
    m.omega_x = 2 * m.width.x;
    m.omega_y = 2 * m.width.y;
  } else {
    m.omega_x = 4 * image.grid.pitch_x;
    m.omega_y = 4 * image.grid.pitch_y;
  }
  m.islr = peak.value > 0 ? islr(image, image.grid.position(peak.ix, peak.iy), m.omega_x, m.omega_y)
                          : 0.0;
  m.highest_sidelobe_db = highest_sidelobe_db(image, peak);
  return m;
}

}  // namespace strobo
