#include "evonav/arena.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "evonav/errors.hpp"

namespace evonav {

namespace {

bool point_in_rect(const Vec2d& p, double width, double height) {
  return p.x() >= 0.0 && p.x() <= width && p.y() >= 0.0 && p.y() <= height;
}

}  // namespace

World build_world(const ArenaSpec& arena) {
  if (!(arena.width > 0.0) || !std::isfinite(arena.width)) {
    throw ConfigError("arena.width must be a positive finite number");
  }
  if (!(arena.height > 0.0) || !std::isfinite(arena.height)) {
    throw ConfigError("arena.height must be a positive finite number");
  }
  World world;
  world.arena = arena;
  const double w = arena.width;
  const double h = arena.height;
  world.walls = {
      {Vec2d(0.0, 0.0), Vec2d(w, 0.0)},
      {Vec2d(w, 0.0), Vec2d(w, h)},
      {Vec2d(w, h), Vec2d(0.0, h)},
      {Vec2d(0.0, h), Vec2d(0.0, 0.0)},
  };
  for (std::size_t i = 0; i < arena.extra_walls.size(); ++i) {
    const WallSegment& seg = arena.extra_walls[i];
    const std::string label = "arena.extra_walls[" + std::to_string(i) + "]";
    if (!seg.a.allFinite() || !seg.b.allFinite()) {
      throw ConfigError(label + " has non-finite endpoints");
    }
    if ((seg.a - seg.b).squaredNorm() == 0.0) {
      throw ConfigError(label + " has zero length");
    }
    if (!point_in_rect(seg.a, w, h) || !point_in_rect(seg.b, w, h)) {
      throw ConfigError(label + " lies outside the arena rectangle");
    }
    world.walls.push_back(seg);
  }
  return world;
}

bool inside_arena(const World& world, const Vec2d& point) {
  return point.x() > 0.0 && point.x() < world.arena.width && point.y() > 0.0 &&
         point.y() < world.arena.height;
}

double cast_ray(const World& world, const Vec2d& origin, double angle) {
  if (!inside_arena(world, origin)) {
    throw DomainError("cast_ray: origin is not strictly inside the arena");
  }
  const Vec2d dir = unit_from_angle(angle);
  double nearest = std::numeric_limits<double>::infinity();
  for (const WallSegment& wall : world.walls) {
    if (const auto hit = ray_segment_distance(origin, dir, wall.a, wall.b)) {
      nearest = std::min(nearest, *hit);
    }
  }
  if (!std::isfinite(nearest)) {
    // cannot happen for an interior origin of a closed rectangle; guard anyway
    throw DomainError("cast_ray: ray escaped the arena");
  }
  return nearest;
}

Pose step_kinematics(const Pose& pose, double v_left, double v_right, double dt,
                     const RobotSpec& spec) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw DomainError("step_kinematics: dt must be positive");
  }
  if (!std::isfinite(v_left) || !std::isfinite(v_right) ||
      std::abs(v_left) > spec.max_wheel_speed || std::abs(v_right) > spec.max_wheel_speed) {
    throw DomainError("step_kinematics: wheel speed exceeds max_wheel_speed");
  }
  const double omega = (v_right - v_left) / spec.axle_track;
  const double speed = 0.5 * (v_left + v_right);
  Pose next = pose;
  if (std::abs(omega) < 1e-9) {
    next.x += speed * dt * std::cos(pose.heading);
    next.y += speed * dt * std::sin(pose.heading);
    next.heading = wrap_angle(pose.heading + omega * dt);
    return next;
  }
  // Exact arc via the chord: length = v dt sinc(omega dt / 2), aimed halfway
  // through the turn. Well conditioned for any |omega| above the cutoff.
  const double half_turn = 0.5 * omega * dt;
  const double chord = speed * dt * (std::sin(half_turn) / half_turn);
  next.x += chord * std::cos(pose.heading + half_turn);
  next.y += chord * std::sin(pose.heading + half_turn);
  next.heading = wrap_angle(pose.heading + omega * dt);
  return next;
}

double clearance(const World& world, const Pose& pose, const RobotSpec& spec) {
  double nearest = std::numeric_limits<double>::infinity();
  const Vec2d center = pose.position();
  for (const WallSegment& wall : world.walls) {
    nearest = std::min(nearest, point_segment_distance(center, wall.a, wall.b));
  }
  return nearest - spec.body_radius;
}

bool detect_collision(const World& world, const Pose& pose, const RobotSpec& spec) {
  return clearance(world, pose, spec) <= 0.0;
}

}  // namespace evonav
