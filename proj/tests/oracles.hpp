// Independent reference implementations used only by tests. Each one solves
// the same problem as the library by a deliberately different route (dense
// sampling, sub-stepping, or plain scalar code) so agreement is meaningful.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "evonav/arena.hpp"
#include "evonav/evolution.hpp"

namespace oracles {

// March along the ray in small steps until the point leaves the free space
// (steps over the boundary rectangle or changes side of an inner wall within
// that wall's span). Returns the midpoint of the bracketing step, so the
// error is at most step/2.
inline double ray_march_distance(const evonav::World& world, const evonav::Vec2d& origin,
                                 double angle, double step = 1e-4, double max_len = 10.0) {
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  const double w = world.arena.width;
  const double h = world.arena.height;
  double prev_x = origin.x();
  double prev_y = origin.y();
  for (double t = step; t <= max_len; t += step) {
    const double x = origin.x() + t * dx;
    const double y = origin.y() + t * dy;
    bool crossed = !(x > 0.0 && x < w && y > 0.0 && y < h);
    if (!crossed) {
      for (const evonav::WallSegment& wall : world.walls) {
        const double ex = wall.b.x() - wall.a.x();
        const double ey = wall.b.y() - wall.a.y();
        const double side_prev = ex * (prev_y - wall.a.y()) - ey * (prev_x - wall.a.x());
        const double side_now = ex * (y - wall.a.y()) - ey * (x - wall.a.x());
        if (side_prev * side_now <= 0.0 && (side_prev != 0.0 || side_now != 0.0)) {
          // crossed the wall's carrier line; require the crossing inside the span
          const double len2 = ex * ex + ey * ey;
          const double proj = ((x - wall.a.x()) * ex + (y - wall.a.y()) * ey) / len2;
          if (proj >= 0.0 && proj <= 1.0) {
            crossed = true;
            break;
          }
        }
      }
    }
    if (crossed) return t - 0.5 * step;
    prev_x = x;
    prev_y = y;
  }
  return std::numeric_limits<double>::infinity();
}

// Dense sub-stepped integration of the differential-drive ODE (midpoint rule,
// so 1e4 sub-steps land well inside 1e-6 of the exact arc).
inline evonav::Pose substep_kinematics(const evonav::Pose& pose, double v_left, double v_right,
                                       double dt, const evonav::RobotSpec& spec,
                                       int substeps = 10000) {
  const double omega = (v_right - v_left) / spec.axle_track;
  const double speed = 0.5 * (v_left + v_right);
  const double h = dt / static_cast<double>(substeps);
  double x = pose.x;
  double y = pose.y;
  double theta = pose.heading;
  for (int i = 0; i < substeps; ++i) {
    const double mid = theta + 0.5 * omega * h;
    x += speed * h * std::cos(mid);
    y += speed * h * std::sin(mid);
    theta += omega * h;
  }
  evonav::Pose out;
  out.x = x;
  out.y = y;
  out.heading = evonav::wrap_angle(theta);
  return out;
}

// Brute-force clearance: minimum distance to `samples` points spread evenly
// along every wall, minus the body radius.
inline double sampled_clearance(const evonav::World& world, const evonav::Pose& pose,
                                const evonav::RobotSpec& spec, int samples = 10000) {
  double nearest = std::numeric_limits<double>::infinity();
  for (const evonav::WallSegment& wall : world.walls) {
    for (int i = 0; i < samples; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(samples - 1);
      const double px = wall.a.x() + t * (wall.b.x() - wall.a.x());
      const double py = wall.a.y() + t * (wall.b.y() - wall.a.y());
      const double dx = pose.x - px;
      const double dy = pose.y - py;
      nearest = std::min(nearest, std::sqrt(dx * dx + dy * dy));
    }
  }
  return nearest - spec.body_radius;
}

// Plain-scalar re-simulation of the whole evaluation loop: flat arrays, no
// library calls. Restricted to rectangle-only arenas, which is all the
// evolution experiments use.
struct ScalarScenario {
  double width = 1.0;
  double height = 1.0;
  double body_radius = 0.0275;
  double axle_track = 0.053;
  double max_wheel_speed = 0.08;
  double fov_deg = 45.0;
  int pixel_count = 16;
  double max_range = 1.0;
  int n_hidden = 8;
  int steps = 400;
  double dt = 0.1;
};

struct ScalarPose {
  double x;
  double y;
  double heading;
};

inline double scalar_fitness(const std::vector<double>& genes, const ScalarScenario& s,
                             const std::vector<ScalarPose>& starts) {
  const int in = s.pixel_count;
  const int hid = s.n_hidden;
  const double* w_in = genes.data();
  const double* w_rec = w_in + hid * in;
  const double* b_hid = w_rec + hid * hid;
  const double* w_out = b_hid + hid;
  const double* b_out = w_out + 2 * hid;

  const double walls[4][4] = {
      {0.0, 0.0, s.width, 0.0},
      {s.width, 0.0, s.width, s.height},
      {s.width, s.height, 0.0, s.height},
      {0.0, s.height, 0.0, 0.0},
  };

  const auto cast = [&](double ox, double oy, double angle) {
    const double dx = std::cos(angle);
    const double dy = std::sin(angle);
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& wall : walls) {
      const double ex = wall[2] - wall[0];
      const double ey = wall[3] - wall[1];
      const double denom = dx * ey - dy * ex;
      if (std::abs(denom) < 1e-15) continue;
      const double ox_rel = wall[0] - ox;
      const double oy_rel = wall[1] - oy;
      const double along_ray = (ox_rel * ey - oy_rel * ex) / denom;
      const double along_edge = (ox_rel * dy - oy_rel * dx) / denom;
      if (along_ray < 0.0 || along_edge < 0.0 || along_edge > 1.0) continue;
      nearest = std::min(nearest, along_ray);
    }
    return nearest;
  };

  const auto wall_clearance = [&](double px, double py) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& wall : walls) {
      const double ex = wall[2] - wall[0];
      const double ey = wall[3] - wall[1];
      const double len2 = ex * ex + ey * ey;
      double t = ((px - wall[0]) * ex + (py - wall[1]) * ey) / len2;
      t = std::clamp(t, 0.0, 1.0);
      const double dx = px - (wall[0] + t * ex);
      const double dy = py - (wall[1] + t * ey);
      nearest = std::min(nearest, std::sqrt(dx * dx + dy * dy));
    }
    return nearest - s.body_radius;
  };

  const double pi = std::numbers::pi;
  double total = 0.0;
  for (const ScalarPose& start : starts) {
    std::vector<double> state(hid, 0.0);
    std::vector<double> next_state(hid, 0.0);
    std::vector<double> image(in, 0.0);
    double x = start.x;
    double y = start.y;
    double heading = start.heading;
    bool collided = false;
    double phi_sum = 0.0;

    for (int step = 0; step < s.steps; ++step) {
      if (collided) continue;
      for (int i = 0; i < in; ++i) {
        double angle = heading;
        if (in > 1 && s.fov_deg != 0.0) {
          const double fov = s.fov_deg * pi / 180.0;
          angle = heading - 0.5 * fov + static_cast<double>(i) * (fov / (in - 1));
        }
        image[i] = std::clamp(1.0 - cast(x, y, angle) / s.max_range, 0.0, 1.0);
      }
      for (int hh = 0; hh < hid; ++hh) {
        double acc = 0.0;
        for (int j = 0; j < in; ++j) acc += w_in[hh * in + j] * image[j];
        for (int j = 0; j < hid; ++j) acc += w_rec[hh * hid + j] * state[j];
        acc += b_hid[hh];
        next_state[hh] = std::tanh(acc);
      }
      state.swap(next_state);
      double outs[2];
      for (int o = 0; o < 2; ++o) {
        double acc = 0.0;
        for (int j = 0; j < hid; ++j) acc += w_out[o * hid + j] * state[j];
        acc += b_out[o];
        outs[o] = 1.0 / (1.0 + std::exp(-acc));
      }
      const double v_left = (2.0 * outs[0] - 1.0) * s.max_wheel_speed;
      const double v_right = (2.0 * outs[1] - 1.0) * s.max_wheel_speed;

      const double omega = (v_right - v_left) / s.axle_track;
      const double speed = 0.5 * (v_left + v_right);
      if (std::abs(omega) < 1e-9) {
        x += speed * s.dt * std::cos(heading);
        y += speed * s.dt * std::sin(heading);
        heading = evonav::wrap_angle(heading + omega * s.dt);
      } else {
        const double half_turn = 0.5 * omega * s.dt;
        const double chord = speed * s.dt * (std::sin(half_turn) / half_turn);
        x += chord * std::cos(heading + half_turn);
        y += chord * std::sin(heading + half_turn);
        heading = evonav::wrap_angle(heading + omega * s.dt);
      }

      const double clear = wall_clearance(x, y);
      const bool inside = x > 0.0 && x < s.width && y > 0.0 && y < s.height;
      if (clear <= 0.0 || !inside) {
        collided = true;
        continue;
      }
      const double full = 2.0 * s.max_wheel_speed;
      const double speed_share = (std::abs(v_left) + std::abs(v_right)) / full;
      const double turn_share = std::abs(v_left - v_right) / full;
      const double proximity = std::clamp(1.0 - clear / (4.0 * s.body_radius), 0.0, 1.0);
      phi_sum += speed_share * (1.0 - std::sqrt(turn_share)) * (1.0 - proximity);
    }
    total += phi_sum / static_cast<double>(s.steps);
  }
  return total / static_cast<double>(starts.size());
}

}  // namespace oracles
