#pragma once

#include <array>
#include <vector>

#include "strobo/common.hpp"

namespace strobo {

/// Acquisition geometry at slow-time index 0.
///
/// The plane lies on y = 0 with its atom lattice anchored at plane_origin_x.
/// The source flies at height D parallel to the plane; the ROI sits in the same
/// half-space (y > 0) and translates with the source. Angles are measured from
/// the plane normal, positive toward +x.
struct SceneGeometry {
  double source_height = 5.0;   // D [m]
  double source_x0 = 0.0;       // s_x(0) [m]
  double speed = 20.0;          // v [m/s]
  double pri = 50e-6;           // Δτ [s]
  Vec2 roi_center{13.8, 11.0};  // r* at ℓ = 0 [m]
  double roi_width = 1.0;       // Δx [m]
  double roi_depth = 1.0;       // Δy [m]
  double plane_origin_x = 0.0;  // x of lattice index 0 [m]

  void validate() const;

  /// Distance travelled after ℓ snapshots.
  double travel(long snapshot) const { return static_cast<double>(snapshot) * speed * pri; }
  Vec2 source_at(long snapshot) const { return {source_x0 + travel(snapshot), source_height}; }
  Vec2 roi_center_at(long snapshot) const { return roi_center + Vec2{travel(snapshot), 0.0}; }

  /// ROI corners in the co-moving frame, ordered (-,-), (+,-), (-,+), (+,+).
  std::array<Vec2, 4> roi_corners() const;
  bool contains(Vec2 p, double tol = 1e-9) const;
};

struct Target {
  Vec2 position;       // co-moving frame [m]
  double rcs = 1.0;    // σ [m²], isotropic
  double phase = 0.0;  // ψ [rad]
};

using TargetSet = std::vector<Target>;

/// Throws ValidationError if any target lies outside the ROI or has σ < 0.
void validate_targets(const SceneGeometry& scene, const TargetSet& targets);

/// Where everything actually is at one snapshot.
///
/// Points given in the co-moving frame map to the world as p + frame_offset.
/// The nominal pose has frame_offset = (ℓvΔτ, 0); perturbations alter both
/// members.
struct Pose {
  Vec2 source;
  Vec2 frame_offset;

  Vec2 to_world(Vec2 frame_point) const { return frame_point + frame_offset; }
};

/// Pose at snapshot ℓ with an optional height error ε on D and a trajectory
/// tilt β relative to the plane. ε = β = 0 gives the nominal pose.
Pose pose_at(const SceneGeometry& scene, long snapshot, double epsilon = 0.0, double beta = 0.0);

/// Beam-centre intercept on the plane for a beam leaving the pose's source at θ_i.
Vec2 beam_intercept(const Pose& pose, double theta_i);

/// Source-to-intercept distance along the beam centre, D/cosθ_i.
double incidence_distance(const Pose& pose, double theta_i);

/// Reflection angle from the beam intercept that reaches r (co-moving frame).
double reflection_angle(const Pose& pose, double theta_i, Vec2 r);

// Spec-level operations on the nominal geometry.

/// arctan((r_x − s_x(0) − D tanθ_i) / r_y).
double reflection_angle_to_target(double theta_i, const SceneGeometry& scene, Vec2 r);

/// (s_x(0) + ℓvΔτ + D tanθ_i, 0).
Vec2 intercept_point(double theta_i, const SceneGeometry& scene, long snapshot);

struct PathLengths {
  double incidence;   // D_i [m]
  double reflection;  // D_o [m]
  double total() const { return incidence + reflection; }
};

/// Beam-centre two-leg distances from the nominal source at snapshot ℓ to the
/// co-moving point x.
PathLengths path_lengths(double theta_i, const SceneGeometry& scene, Vec2 x, long snapshot = 0);

/// dφ/dθ_i of the two-way propagation phase (4π/λ)(D_i + D_o).
double propagation_phase_derivative(double theta_i, const SceneGeometry& scene, Vec2 r,
                                    double wavelength);

/// Two-way propagation phase (4π/λ)(D_i + D_o) at snapshot 0.
double propagation_phase(double theta_i, const SceneGeometry& scene, Vec2 r, double wavelength);

}  // namespace strobo
