#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "strobo/plane.hpp"

namespace strobo {

/// Range-compressed pulse g(t) = sinc(Bt): the autocorrelation of a unit-energy
/// pulse with a rectangular spectrum of width B. Peak 1 at t = 0, nulls at k/B.
struct Waveform {
  double bandwidth = 500e6;
  double sample_rate = 2e9;
  double t_min = 0.0;
  std::size_t samples = 0;

  double g(double t) const;
  double time(std::size_t k) const { return t_min + static_cast<double>(k) / sample_rate; }
  double t_max() const { return time(samples == 0 ? 0 : samples - 1); }
};

/// Fast-time window spanning every two-way delay from the swept beam to the ROI,
/// with four resolution cells of guard on both sides.
Waveform make_waveform(const SceneGeometry& scene, const SourceConfig& cfg,
                       const TxCodebook& codebook, double oversampling = 4.0);

/// ρ_ℓ from the double-bounce radar equation (unit Tx power reference).
double path_loss(const SourceConfig& cfg, double theta_i, double theta_o, double d_i, double d_o,
                 double rcs);

enum class ArrayModel {
  far_field,  // linear phase across the footprint about the beam intercept
  exact,      // exact per-atom distances source → atom → target
};

enum class Taper { uniform, raised_cosine };

struct SynthesisOptions {
  ArrayModel array_model = ArrayModel::far_field;
  Taper taper = Taper::uniform;
  bool noise = false;
  double noise_power = 0.0;  // σ_w² [W] per complex sample
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double narrowband_factor = 1.0;
  // Geometry actually flown; the plane design itself is never perturbed.
  double epsilon = 0.0;  // height error [m]
  double beta = 0.0;     // trajectory tilt [rad]
};

struct SnapshotInfo {
  long index = 0;  // ℓ
  std::size_t sweep = 0;
  double theta_i = 0.0;
  Vec2 source;
  double intercept_x = 0.0;
  long first_atom = 0;
  long atom_count = 0;
  bool clipped = false;
  double narrowband_margin = 0.0;
};

struct EchoCube {
  Waveform waveform;
  double carrier = 77e9;
  double noise_power = 0.0;
  bool noise = false;
  std::uint64_t seed = 0;
  std::vector<SnapshotInfo> meta;
  std::vector<cdouble> data;  // row-major [snapshot][sample]
  std::vector<std::string> warnings;

  std::size_t snapshots() const { return meta.size(); }
  std::size_t samples() const { return waveform.samples; }
  cdouble* row(std::size_t l) { return data.data() + l * samples(); }
  const cdouble* row(std::size_t l) const { return data.data() + l * samples(); }
};

/// Per-atom amplitude weights across an illuminated set.
std::vector<double> taper_weights(Taper taper, long count);

/// Σ_n w_n exp(j[φ_n − φ_c − k0 Δ_n]) over the illuminated set for one target,
/// where Δ_n is the extra path through atom n relative to the beam-centre path
/// and φ_c the plane phase at the beam intercept.
cdouble array_factor(const PlaneDesign& plane, const IlluminatedSet& set, const Pose& pose,
                     double theta_i, Vec2 target, ArrayModel model,
                     const std::vector<double>& weights);

/// One fast-time snapshot (noiseless) for targets in the co-moving frame.
std::vector<cdouble> synthesize_snapshot(const SceneGeometry& scene, const SourceConfig& cfg,
                                         const PlaneDesign& plane, const Waveform& waveform,
                                         double theta_i, long snapshot, const TargetSet& targets,
                                         const SynthesisOptions& options,
                                         SnapshotInfo* info = nullptr);

/// Cube over sweeps [first_sweep, first_sweep + sweeps). Snapshot ℓ continues
/// the global schedule, so later sweeps see the plane further along.
EchoCube synthesize_sweeps(const SceneGeometry& scene, const SourceConfig& cfg,
                           const PlaneDesign& plane, const TxCodebook& codebook,
                           const Waveform& waveform, const TargetSet& targets,
                           std::size_t first_sweep, std::size_t sweeps,
                           const SynthesisOptions& options);

EchoCube synthesize_sweep(const SceneGeometry& scene, const SourceConfig& cfg,
                          const PlaneDesign& plane, const TxCodebook& codebook,
                          const TargetSet& targets, std::size_t sweeps,
                          const SynthesisOptions& options, double oversampling = 4.0);

/// Adds circular complex Gaussian noise to snapshot row l, seeded from
/// (seed, global snapshot index) so the draw does not depend on scheduling.
void add_noise(cdouble* row, std::size_t samples, double power, std::uint64_t seed, long snapshot);

double dbm_to_watts(double dbm);

}  // namespace strobo
