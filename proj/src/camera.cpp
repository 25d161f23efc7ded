#include "evonav/camera.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "evonav/errors.hpp"

namespace evonav {

namespace {

void check_camera(const CameraSpec& camera) {
  if (!(camera.fov_deg >= 0.0) || !(camera.fov_deg <= 180.0)) {
    throw ConfigError("camera.fov_deg must be in [0, 180]");
  }
  if (camera.pixel_count < 1) {
    throw ConfigError("camera.pixel_count must be >= 1");
  }
  if (!(camera.max_range > 0.0)) {
    throw ConfigError("camera.max_range must be > 0");
  }
}

}  // namespace

double pixel_angle(const CameraSpec& camera, double heading, int pixel) {
  check_camera(camera);
  if (pixel < 0 || pixel >= camera.pixel_count) {
    throw DomainError("pixel_angle: pixel index out of range");
  }
  if (camera.pixel_count == 1 || camera.fov_deg == 0.0) {
    return heading;
  }
  const double fov = camera.fov_deg * std::numbers::pi / 180.0;
  const double step = fov / static_cast<double>(camera.pixel_count - 1);
  // intentionally unwrapped: rays are directions, cast_ray takes any angle
  return heading - 0.5 * fov + static_cast<double>(pixel) * step;
}

Eigen::VectorXd pixel_angles(const CameraSpec& camera, double heading) {
  check_camera(camera);
  Eigen::VectorXd angles(camera.pixel_count);
  for (int i = 0; i < camera.pixel_count; ++i) {
    angles(i) = pixel_angle(camera, heading, i);
  }
  return angles;
}

void render_camera_into(const World& world, const Pose& pose, const CameraSpec& camera,
                        Eigen::Ref<Eigen::VectorXd> readings) {
  check_camera(camera);
  if (readings.size() != camera.pixel_count) {
    throw DomainError("render_camera: readings buffer does not match pixel_count");
  }
  if (!inside_arena(world, pose.position())) {
    throw DomainError("render_camera: pose is not strictly inside the arena");
  }
  const Vec2d origin = pose.position();
  for (int i = 0; i < camera.pixel_count; ++i) {
    const double distance = cast_ray(world, origin, pixel_angle(camera, pose.heading, i));
    readings(i) = std::clamp(1.0 - distance / camera.max_range, 0.0, 1.0);
  }
}

CameraImage render_camera(const World& world, const Pose& pose, const CameraSpec& camera) {
  CameraImage readings(camera.pixel_count);
  render_camera_into(world, pose, camera, readings);
  return readings;
}

}  // namespace evonav
