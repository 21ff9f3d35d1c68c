#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "strobo/codebook.hpp"

namespace strobo {

enum class PlaneMode { stroboscopic, lens, mirror };

/// How stroboscopic per-atom phases are derived from the quantized offsets.
///  integrated: running sum of the local gradient, so phase is continuous
///              across module boundaries.
///  literal:    x_n·k0[sin θ̄_i − sin(θ̄_i + Δθ_mod(x_n))] evaluated per atom.
enum class PhaseRule { integrated, literal };

const char* to_string(PlaneMode mode);
PlaneMode plane_mode_from_string(const std::string& name);

/// (θ̄_o − θ̄_i) + (Δθ_{o,obs}/2)·cos(2πx/Λ + γ).
double continuous_reflection_offset(double x, double period, double center_i, double center_o,
                                    double span, double gamma);

struct ReflectionSpan {
  double center = 0.0;  // θ̄_o
  double span = 0.0;    // Δθ_{o,obs}
};

/// θ̄_o toward r* and the spread of reflection angles toward the four ROI
/// corners, all from the beam intercept at θ̄_i.
ReflectionSpan design_reflection_span(const SceneGeometry& scene, double center_i);

/// Same, but the spread uses only the diagonal pair r* ± (Δx/2, Δy/2).
ReflectionSpan diagonal_reflection_span(const SceneGeometry& scene, double center_i);

/// Nearest entry of a sorted list; ties go to the smaller value.
double quantize_offset(double value, const std::vector<double>& sorted);
std::size_t quantize_index(double value, const std::vector<double>& sorted);

/// Θ_o: `count` angles spaced uniformly over [center − span/2, center + span/2].
std::vector<double> reflection_codebook(double center, double span, std::size_t count);

struct StepLimit {
  double module_atoms = 0.0;      // N_mod ≈ Λ / (2 d |Θ_o|)
  double step = 0.0;              // δθ_o actually used, Δθ_{o,obs}/(|Θ_o| − 1)
  double step_bound = 0.0;        // overlap bound on δθ_o for this N_mod
  double min_count = 0.0;         // |Θ_o|_min
  double max_module_atoms = 0.0;  // N_mod^max
  bool compliant = true;          // N_mod ≤ N_mod^max
};

/// Beam-overlap bound on δθ_o and the joint module-size limit.
/// Throws DesignError when even single-atom modules cannot meet the bound.
StepLimit reflection_step_limit(const ReflectionSpan& span, double wavelength, double period,
                                double pitch, std::size_t count);

struct PlaneRequest {
  PlaneMode mode = PlaneMode::stroboscopic;
  double period = 2.0;               // Λ [m]
  std::size_t reflection_count = 13; // |Θ_o|
  double gamma = 0.0;                // γ [rad]
  std::optional<double> pitch;       // d [m]; λ0/2 if unset
  std::optional<double> span;        // override of Δθ_{o,obs}
  double mirror_slope = 0.0;         // α [rad per atom]
  std::optional<Vec2> lens_target;   // co-moving; r* if unset
  PhaseRule phase_rule = PhaseRule::integrated;
  std::size_t sweeps = 1;            // sizing only
  std::optional<AtomLattice> lattice;  // explicit extent instead of auto-sizing
};

/// γ that puts the mean beam intercept of the first sweep at the zero crossing
/// of the descending half-cycle, so one sweep runs through the reflection angles
/// from the top of Θ_o towards the bottom.
double synchronized_gamma(const SceneGeometry& scene, const TxCodebook& codebook, double period);

struct Module {
  long first = 0;  // global atom index
  long count = 0;
  std::size_t bin = 0;
};

struct PlaneDesign {
  PlaneMode mode = PlaneMode::stroboscopic;
  PhaseRule phase_rule = PhaseRule::integrated;
  AtomLattice lattice;
  std::vector<double> phase;  // φ per atom, wrapped to (−π, π]
  double wavenumber = 0.0;    // k0

  double period = 0.0;
  double gamma = 0.0;
  double center_i = 0.0;
  ReflectionSpan reflection;
  std::vector<double> reflection_angles;  // Θ_o
  StepLimit step;
  std::vector<std::size_t> bin;  // Θ_o index per atom (stroboscopic)

  double mirror_slope = 0.0;
  Vec2 lens_target;
  std::vector<std::string> warnings;

  std::size_t atom_count() const { return phase.size(); }
  bool contains(long m) const { return m >= lattice.first && m <= lattice.last(); }
  double x(long m) const { return lattice.x(m); }
  double stored_phase(long m) const;

  /// Phase applied by atom m while the scene is at `pose`. Static modes return
  /// the stored value; lens mode refocuses on the target for every pose.
  double phase_at(long m, const Pose& pose) const;

  /// Phase at a continuous plane coordinate: linear interpolation of the stored
  /// profile (static modes) or the focusing law (lens).
  double phase_at_x(double x, const Pose& pose) const;

  /// Quantized Δθ_mod at atom m (stroboscopic only).
  double offset(long m) const;

  /// Runs of atoms sharing one quantized offset.
  std::vector<Module> modules() const;
};

/// Quantized Δθ_mod(x) for a design.
double quantized_offset(const PlaneDesign& plane, double x);

/// Lattice covering every illuminated set of `sweeps` sweeps plus one period of
/// margin on both sides.
AtomLattice plane_extent(const SceneGeometry& scene, const SourceConfig& cfg,
                         const TxCodebook& codebook, double pitch, double period,
                         std::size_t sweeps);

PlaneDesign build_plane(const SceneGeometry& scene, const SourceConfig& cfg,
                        const TxCodebook& codebook, const PlaneRequest& request);

/// |sin(πN(d/λ)u) / sin(π(d/λ)u)| with u = sinθ_o − sinθ_{o,ℓ}; N at u = 0.
double dirichlet_pattern(double atoms, double pitch, double wavelength, double steer,
                         double theta_o);

/// Σ_n exp(j[φ_n − k(x_n − x_ref)(sinθ_i − sinθ_o)]) over atoms
/// [first, first+count) of the design, evaluated with the stored phases.
cdouble reflection_pattern(const PlaneDesign& plane, long first, long count, double theta_i,
                           double theta_o, double x_ref);

}  // namespace strobo
