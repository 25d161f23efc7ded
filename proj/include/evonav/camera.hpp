#pragma once

#include <Eigen/Core>

#include "evonav/arena.hpp"

namespace evonav {

struct CameraSpec {
  double fov_deg = 45.0;  // total field of view, [0, 180]
  int pixel_count = 16;
  double max_range = 1.0;
};

// One proximity reading per pixel, each in [0, 1] (1 = touching, 0 = at or
// beyond max_range).
using CameraImage = Eigen::VectorXd;

// World-frame ray angle of one pixel. Pixels fan left-to-right across the
// field of view; a single pixel (or zero fov) looks straight ahead.
[[nodiscard]] double pixel_angle(const CameraSpec& camera, double heading, int pixel);

[[nodiscard]] Eigen::VectorXd pixel_angles(const CameraSpec& camera, double heading);

void render_camera_into(const World& world, const Pose& pose, const CameraSpec& camera,
                        Eigen::Ref<Eigen::VectorXd> readings);

[[nodiscard]] CameraImage render_camera(const World& world, const Pose& pose,
                                        const CameraSpec& camera);

}  // namespace evonav
