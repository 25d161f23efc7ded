#pragma once

#include <vector>

#include "evonav/geometry.hpp"

namespace evonav {

struct WallSegment {
  Vec2d a{0.0, 0.0};
  Vec2d b{0.0, 0.0};
};

struct ArenaSpec {
  double width = 1.0;
  double height = 1.0;
  std::vector<WallSegment> extra_walls;  // optional obstacles inside the rectangle
};

// Validated arena: the four boundary segments first, extra walls after.
struct World {
  ArenaSpec arena;
  std::vector<WallSegment> walls;
};

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians, kept in [-pi, pi)

  [[nodiscard]] Vec2d position() const { return Vec2d(x, y); }
};

struct RobotSpec {
  double body_radius = 0.0275;
  double axle_track = 0.053;
  double max_wheel_speed = 0.08;  // m/s, per wheel
};

[[nodiscard]] World build_world(const ArenaSpec& arena);

// True when the point is strictly inside the boundary rectangle.
[[nodiscard]] bool inside_arena(const World& world, const Vec2d& point);

// Distance from an interior origin to the first wall hit along `angle`.
[[nodiscard]] double cast_ray(const World& world, const Vec2d& origin, double angle);

// Advances a differential-drive pose along the exact circular arc for one step.
[[nodiscard]] Pose step_kinematics(const Pose& pose, double v_left, double v_right, double dt,
                                   const RobotSpec& spec);

// Distance from the body circle to the nearest wall; negative means overlap.
[[nodiscard]] double clearance(const World& world, const Pose& pose, const RobotSpec& spec);

[[nodiscard]] bool detect_collision(const World& world, const Pose& pose, const RobotSpec& spec);

}  // namespace evonav
