#pragma once

#include <optional>
#include <string>
#include <vector>

#include "strobo/scenario.hpp"
#include "strobo/tomography.hpp"

namespace strobo {

struct DesignReport {
  TxCodebook codebook;
  SamplingLimit sampling;
  double effective_aperture = 0.0;
  ReflectionSpan diagonal_span;  // r* ± (Δx/2, Δy/2) variant, for reference
  PlaneDesign plane;             // first sweep's plane
  NarrowbandResult narrowband;
  std::vector<std::string> warnings;
};

/// γ used by each sweep: the scenario value, or seeded uniform draws.
std::vector<double> sweep_gammas(const Scenario& s);

/// One plane per distinct γ: a single plane unless γ is random per sweep.
std::vector<PlaneDesign> sweep_planes(const Scenario& s, const TxCodebook& codebook);

DesignReport run_design(const Scenario& s);

/// Echo cube over all sweeps; with per-sweep planes, sweep k uses planes[k].
EchoCube simulate(const Scenario& s, const TxCodebook& codebook,
                  const std::vector<PlaneDesign>& planes, unsigned threads);

/// Resolution predicted from the wavenumber coverage of every illuminated set.
ResolutionBounds predicted_resolution(const Scenario& s, const TxCodebook& codebook,
                                      const PlaneDesign& plane, Vec2 target);

/// ROI grid at the scenario pitch, or min(5 mm, predicted resolution / 4).
GridSpec scenario_grid(const Scenario& s, const TxCodebook& codebook, const PlaneDesign& plane);

/// Back-projection with the nominal geometry, or with the scenario perturbation
/// when `assume_perturbation` is set.
Image form_image(const EchoCube& cube, const Scenario& s, const GridSpec& grid, unsigned threads,
                 bool assume_perturbation = false);

struct RunOptions {
  unsigned threads = 1;
  std::optional<Widths> omega;
  std::optional<GridSpec> grid;
  bool assume_perturbation = false;
  bool per_sweep_images = false;
};

struct RunResult {
  TxCodebook codebook;
  std::vector<PlaneDesign> planes;
  EchoCube cube;
  GridSpec grid;
  Image image;
  ImageMetrics metrics;
  std::vector<Image> sweep_images;  // filled when per_sweep_images is set
};

/// design → simulate → image → metrics.
RunResult run_pipeline(const Scenario& s, const RunOptions& options = {});

/// Splits a cube into per-sweep cubes (by SnapshotInfo::sweep).
std::vector<EchoCube> split_sweeps(const EchoCube& cube);

}  // namespace strobo
