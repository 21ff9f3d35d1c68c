#include "strobo/geometry.hpp"

#include <sstream>

namespace strobo {

namespace {

void check_incidence(double theta_i) {
  require_finite(theta_i, "incidence angle");
  if (std::abs(theta_i) >= kPi / 2) throw DomainError("incidence angle must satisfy |θ_i| < π/2");
}

}  // namespace

void SceneGeometry::validate() const {
  auto fail = [](const std::string& msg) { throw ValidationError(msg); };
  for (double v : {source_height, source_x0, speed, pri, roi_center.x, roi_center.y, roi_width,
                   roi_depth, plane_origin_x}) {
    if (!std::isfinite(v)) fail("scene contains a non-finite value");
  }
  if (source_height <= 0) fail("scene.source_height_m must be > 0");
  if (pri <= 0) fail("scene.pri_us must be > 0");
  if (roi_center.y <= 0) fail("ROI must lie in front of the plane (roi_center y > 0)");
  if (roi_width < 0 || roi_depth < 0) fail("ROI extents must be >= 0");
  if (roi_center.y - roi_depth / 2 <= 0) fail("ROI must not cross the plane");
}

std::array<Vec2, 4> SceneGeometry::roi_corners() const {
  const double hx = roi_width / 2, hy = roi_depth / 2;
  return {Vec2{roi_center.x - hx, roi_center.y - hy}, Vec2{roi_center.x + hx, roi_center.y - hy},
          Vec2{roi_center.x - hx, roi_center.y + hy}, Vec2{roi_center.x + hx, roi_center.y + hy}};
}

bool SceneGeometry::contains(Vec2 p, double tol) const {
  return std::abs(p.x - roi_center.x) <= roi_width / 2 + tol &&
         std::abs(p.y - roi_center.y) <= roi_depth / 2 + tol;
}

void validate_targets(const SceneGeometry& scene, const TargetSet& targets) {
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const auto& t = targets[k];
    if (!(t.rcs >= 0) || !std::isfinite(t.phase)) {
      throw ValidationError("target " + std::to_string(k) + " has invalid rcs/phase");
    }
    if (!scene.contains(t.position)) {
      std::ostringstream os;
      os << "target " << k << " at (" << t.position.x << ", " << t.position.y
         << ") lies outside the ROI";
      throw ValidationError(os.str());
    }
  }
}

Pose pose_at(const SceneGeometry& scene, long snapshot, double epsilon, double beta) {
  const double l = scene.travel(snapshot);
  const double along = l * std::cos(beta);
  const double drop = l * std::sin(beta);
  return Pose{{scene.source_x0 + along, scene.source_height + epsilon - drop},
              {along, epsilon - drop}};
}

Vec2 beam_intercept(const Pose& pose, double theta_i) {
  check_incidence(theta_i);
  return {pose.source.x + pose.source.y * std::tan(theta_i), 0.0};
}

double incidence_distance(const Pose& pose, double theta_i) {
  check_incidence(theta_i);
  return pose.source.y / std::cos(theta_i);
}

double reflection_angle(const Pose& pose, double theta_i, Vec2 r) {
  const Vec2 p0 = beam_intercept(pose, theta_i);
  const Vec2 w = pose.to_world(r);
  return std::atan2(w.x - p0.x, w.y);
}

double reflection_angle_to_target(double theta_i, const SceneGeometry& scene, Vec2 r) {
  check_incidence(theta_i);
  require_finite(r.x, "target x");
  require_finite(r.y, "target y");
  if (r.y <= 0) throw DomainError("target must satisfy r_y > 0");
  return std::atan((r.x - scene.source_x0 - scene.source_height * std::tan(theta_i)) / r.y);
}

Vec2 intercept_point(double theta_i, const SceneGeometry& scene, long snapshot) {
  return beam_intercept(pose_at(scene, snapshot), theta_i);
}

PathLengths path_lengths(double theta_i, const SceneGeometry& scene, Vec2 x, long snapshot) {
  if (x.y <= 0) throw DomainError("point must satisfy x_y > 0");
  const Pose pose = pose_at(scene, snapshot);
  const Vec2 p0 = beam_intercept(pose, theta_i);
  return {incidence_distance(pose, theta_i), (pose.to_world(x) - p0).norm()};
}

double propagation_phase_derivative(double theta_i, const SceneGeometry& scene, Vec2 r,
                                    double wavelength) {
  const double theta_o = reflection_angle_to_target(theta_i, scene, r);
  const double c = std::cos(theta_i);
  return 4 * kPi * scene.source_height / (wavelength * c * c) *
         (std::sin(theta_i) - std::sin(theta_o));
}

double propagation_phase(double theta_i, const SceneGeometry& scene, Vec2 r, double wavelength) {
  return 4 * kPi / wavelength * path_lengths(theta_i, scene, r).total();
}

}  // namespace strobo
