#pragma once

#include <optional>
#include <string>
#include <vector>

#include "strobo/signal.hpp"

namespace strobo {

/// Pixel lattice in the co-moving frame; pixel (ix, iy) sits at
/// origin + (ix·pitch_x, iy·pitch_y).
struct GridSpec {
  Vec2 origin;
  double pitch_x = 5e-3;
  double pitch_y = 5e-3;
  std::size_t nx = 0;
  std::size_t ny = 0;

  Vec2 position(std::size_t ix, std::size_t iy) const {
    return origin + Vec2{static_cast<double>(ix) * pitch_x, static_cast<double>(iy) * pitch_y};
  }
  std::size_t size() const { return nx * ny; }
  bool operator==(const GridSpec&) const = default;
};

/// Grid whose outer pixel centres lie on the ROI boundary.
GridSpec roi_grid(const SceneGeometry& scene, double pitch_x, double pitch_y);

struct Image {
  GridSpec grid;
  std::vector<cdouble> values;  // row-major [iy][ix]
  std::size_t skipped = 0;      // (pixel, snapshot) terms outside the fast-time window
  std::string provenance;

  cdouble at(std::size_t ix, std::size_t iy) const { return values[iy * grid.nx + ix]; }
  cdouble& at(std::size_t ix, std::size_t iy) { return values[iy * grid.nx + ix]; }
};

enum class Interpolation { lanczos, linear };

/// Interpolates a uniformly sampled row at fractional index u. Returns false
/// (and zero) when u falls outside [0, n − 1].
bool interpolate(const cdouble* row, std::size_t n, double u, Interpolation mode, cdouble& out);

struct ImagingOptions {
  Interpolation interpolation = Interpolation::lanczos;
  unsigned threads = 1;
  // Geometry assumed by the processor.
  double epsilon = 0.0;
  double beta = 0.0;
};

/// Back-projection: for every pixel, Σ_ℓ y_ℓ(2(D̂_i + D̂_o)/c)·exp(+j4π(D̂_i + D̂_o)/λ0).
Image backproject(const EchoCube& cube, const SceneGeometry& assumed, const GridSpec& grid,
                  const ImagingOptions& options = {});

/// Coherent pixel-wise sum. Throws DomainError on grid mismatch.
Image combine_sweeps(const std::vector<Image>& images);

struct Peak {
  std::size_t ix = 0;
  std::size_t iy = 0;
  Vec2 position;  // sub-pixel (parabolic) estimate
  double value = 0.0;
};

Peak find_peak(const Image& image);

/// Local maximum reached by steepest 8-neighbour ascent from the pixel nearest `near`.
Peak local_peak(const Image& image, Vec2 near);

struct Widths {
  double x = 0.0;
  double y = 0.0;
};

/// −3 dB widths along the row and column through the peak. Throws DomainError
/// if the level is not crossed before the grid edge.
Widths measure_mainlobe(const Image& image, const Peak& peak);

/// −3 dB width of a sampled magnitude cut around index i0 (linear interpolation).
double cut_width(const std::vector<double>& magnitude, std::size_t i0, double pitch);

/// Energy outside the rectangle Ω (centred on `center`) over energy inside.
double islr(const Image& image, Vec2 center, double omega_x, double omega_y);

/// Highest magnitude outside the descent basin of the peak, in dB re the peak.
/// −inf if there is none.
double highest_sidelobe_db(const Image& image, const Peak& peak);

struct ImageMetrics {
  Vec2 peak;
  double peak_value = 0.0;
  Widths width;
  bool widths_valid = false;
  double omega_x = 0.0;
  double omega_y = 0.0;
  double islr = 0.0;
  double highest_sidelobe_db = 0.0;
};

/// Ω defaults to twice the measured widths; `omega` overrides it.
ImageMetrics compute_metrics(const Image& image, std::optional<Widths> omega = std::nullopt);

}  // namespace strobo
