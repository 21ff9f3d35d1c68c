#pragma once

#include <optional>
#include <string>
#include <vector>

#include "strobo/geometry.hpp"

namespace strobo {

struct SourceConfig {
  double carrier = 77e9;          // f0 [Hz]
  double bandwidth = 500e6;       // B [Hz]
  double aperture = 0.446;        // A [m]
  double pulse_duration = 10e-6;  // T_s [s]
  double tx_power = 1.0;          // reference scale [W]

  double wavelength() const { return kSpeedOfLight / carrier; }
  double wavenumber() const { return 2 * kPi / wavelength(); }

  /// Aperture giving the requested broadside beamwidth.
  static double aperture_for_beamwidth(double carrier, double beamwidth);

  void validate(const SceneGeometry& scene) const;
};

/// λ0 / (A cosθ_i).
double source_beamwidth(const SourceConfig& cfg, double theta_i);

/// Window of the global atom lattice x_m = origin_x + m·pitch, m ∈ [first, first+count).
struct AtomLattice {
  double pitch = 0.0;
  double origin_x = 0.0;
  long first = 0;
  long count = 0;

  double x(long m) const { return origin_x + static_cast<double>(m) * pitch; }
  long last() const { return first + count - 1; }
};

struct IlluminatedSet {
  long first = 0;       // global lattice index
  long count = 0;
  double center = 0.0;  // n_{0,ℓ}, fractional global index of the beam peak
  double nominal = 0.0; // unclipped M_ℓ
  bool clipped = false;

  long last() const { return first + count - 1; }
};

/// Below this incidence the closed-form footprint count is replaced by the
/// geometric intersection of the beam cone with the plane.
inline constexpr double kFootprintFormulaMinAngle = deg2rad(10.0);

/// Number of atoms under the beam, M_ℓ, for a source at height `height`.
double footprint_atoms(const SourceConfig& cfg, double height, double theta_i, double pitch);

/// Atoms under the beam at snapshot ℓ, clipped to the lattice window.
IlluminatedSet illuminated_set(const SourceConfig& cfg, const Pose& pose, const AtomLattice& lattice,
                               double theta_i);
IlluminatedSet illuminated_set(const SourceConfig& cfg, const SceneGeometry& scene,
                               const AtomLattice& lattice, double theta_i, long snapshot);

/// D [tan(θ̄_i + Δθ/2) − tan(θ̄_i − Δθ/2)].
double effective_aperture(const SceneGeometry& scene, double center, double span);

struct SamplingLimit {
  double step = 0.0;               // δθ_i [rad]; +inf when unbounded
  double derivative_spread = 0.0;  // |max − min| [rad/rad]
  std::string diagnostic;
};

/// Anti-aliasing bound on the Tx angular step. dense_grid > 0 additionally
/// evaluates a dense_grid × dense_grid lattice over the ROI.
SamplingLimit angular_sampling_limit(const SceneGeometry& scene, const SourceConfig& cfg,
                                     double center, double span, int dense_grid = 0);

struct TxCodebook {
  double center = 0.0;  // θ̄_i
  double span = 0.0;    // Δθ_{i,obs}
  double step = 0.0;    // δθ_i
  double limit = 0.0;   // bound from angular_sampling_limit
  std::vector<double> angles;
  bool compliant = true;
  bool fixed_beam = false;
  std::vector<std::string> warnings;

  std::size_t size() const { return angles.size(); }
  /// Observation time of one sweep, |Θ_i|·Δτ.
  double sweep_duration(double pri) const { return static_cast<double>(angles.size()) * pri; }
  /// Dwell schedule: codebook entry k of sweep s is fired at snapshot s·|Θ_i| + k.
  long snapshot_of(std::size_t sweep, std::size_t k) const {
    return static_cast<long>(sweep * angles.size() + k);
  }
};

struct CodebookRequest {
  double center = deg2rad(40.0);
  double span = deg2rad(5.0);
  std::optional<double> step;  // override
  bool allow_aliasing = false; // honour an override larger than the limit
};

TxCodebook build_codebook(const SceneGeometry& scene, const SourceConfig& cfg,
                          const CodebookRequest& request);

/// Uniform grid with a given step; no bound is consulted.
TxCodebook uniform_codebook(double center, double span, double step);

/// Same angle repeated `count` times (fixed-beam acquisition).
TxCodebook fixed_beam_codebook(double theta_i, std::size_t count);

struct NarrowbandResult {
  std::vector<double> margin;  // (1/B) / residual delay, per snapshot
  double factor = 1.0;
  bool pass = true;
};

/// Residual delay ratio for one snapshot: (1/B) / (M d/c · max{sinθ_i, sinθ_o}).
double narrowband_margin(double bandwidth, double atoms, double pitch, double theta_i,
                         double theta_o);

NarrowbandResult narrowband_check(const SourceConfig& cfg, double pitch,
                                  const std::vector<double>& atoms,
                                  const std::vector<double>& theta_i,
                                  const std::vector<double>& theta_o, double factor = 1.0);

}  // namespace strobo
