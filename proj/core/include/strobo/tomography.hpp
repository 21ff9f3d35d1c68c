#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "strobo/plane.hpp"

namespace strobo {

/// (2πf/c)(û_n + û_n′), with û_m the unit vector from atom m toward r.
Vec2 pair_wavevector(Vec2 atom_n, Vec2 atom_m, Vec2 r, double frequency);

struct CoverageOptions {
  std::size_t frequencies = 64;  // samples across the band, endpoints included
  double bin = 0.5;              // k-bin edge for set semantics [rad/m]
  bool monostatic_only = false;  // keep only n = n′
  /// Every pair n ≤ n′. Otherwise one representative pair per index sum n + n′
  /// (the pair closest to the diagonal); along a straight atom row the sum of
  /// unit vectors depends on n + n′ up to second order, so the extents are the
  /// same and the bin sets agree to within about 1 %, at a fraction of the cost.
  bool all_pairs = false;
};

struct WavenumberCoverage {
  std::vector<std::pair<std::int64_t, std::int64_t>> bins;  // sorted, unique
  double bin = 0.5;
  double kx_min = 0.0, kx_max = 0.0, ky_min = 0.0, ky_max = 0.0;
  double k_min = 0.0, k_max = 0.0;  // range of |k|
  std::size_t samples = 0;          // raw (pair, frequency) samples, before dedup
  std::string diagnostic;

  bool empty() const { return samples == 0; }
  double extent_x() const { return kx_max - kx_min; }
  double extent_y() const { return ky_max - ky_min; }
  /// Occupied bins over bins in the bounding box.
  double occupancy() const;
  Vec2 bin_center(std::size_t k) const;
};

/// Coverage of target r from the union of atom sets (co-moving coordinates).
WavenumberCoverage coverage(Vec2 r, const std::vector<std::vector<Vec2>>& atom_sets,
                            double carrier, double bandwidth, const CoverageOptions& options = {});

/// Set union; extents take the outer envelope.
WavenumberCoverage coverage_union(const WavenumberCoverage& a, const WavenumberCoverage& b);

struct ResolutionBounds {
  double x = 0.0;
  double y = 0.0;
  double range = 0.0;  // 2π/(k_max − k_min): radial bound
  std::string diagnostic;
};

ResolutionBounds resolution_bounds(const WavenumberCoverage& cov);

/// Atom positions (co-moving frame) of every illuminated set of the schedule.
/// If `gain_floor_db` is finite, a snapshot is kept only when its array gain
/// toward r is within that many dB of the best snapshot.
std::vector<std::vector<Vec2>> illuminated_atom_sets(const SceneGeometry& scene,
                                                     const SourceConfig& cfg,
                                                     const PlaneDesign& plane,
                                                     const TxCodebook& codebook,
                                                     std::size_t sweeps, Vec2 r,
                                                     double gain_floor_db);

/// k0(D_sn + D_nr) for each atom: the focusing law used by lens mode.
std::vector<double> focusing_phases(Vec2 source, Vec2 r, const std::vector<Vec2>& atoms,
                                    double wavenumber);

}  // namespace strobo
