#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace evonav {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

using Vec2d = Vec2<double>;

// Wraps an angle to [-pi, pi). Angles already in range pass through unchanged.
template <typename Scalar>
[[nodiscard]] Scalar wrap_angle(Scalar angle) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  constexpr Scalar two_pi = Scalar(2) * pi;
  Scalar wrapped = angle - two_pi * std::floor((angle + pi) / two_pi);
  // floor rounding can land exactly on the open end of the interval
  if (wrapped >= pi) wrapped -= two_pi;
  if (wrapped < -pi) wrapped += two_pi;
  return wrapped;
}

template <typename Scalar>
[[nodiscard]] Scalar cross2(const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

template <typename Scalar>
[[nodiscard]] Vec2<Scalar> unit_from_angle(Scalar angle) {
  return Vec2<Scalar>(std::cos(angle), std::sin(angle));
}

// Distance along the ray (origin, unit direction) to segment [a, b], if hit.
// Rays parallel to a segment never report a hit, even when collinear.
template <typename Scalar>
[[nodiscard]] std::optional<Scalar> ray_segment_distance(const Vec2<Scalar>& origin,
                                                         const Vec2<Scalar>& dir,
                                                         const Vec2<Scalar>& a,
                                                         const Vec2<Scalar>& b) {
  const Vec2<Scalar> edge = b - a;
  const Scalar denom = cross2(dir, edge);
  if (std::abs(denom) < Scalar(1e-15)) return std::nullopt;
  const Vec2<Scalar> offset = a - origin;
  const Scalar along_ray = cross2(offset, edge) / denom;
  const Scalar along_edge = cross2(offset, dir) / denom;
  if (along_ray < Scalar(0) || along_edge < Scalar(0) || along_edge > Scalar(1)) {
    return std::nullopt;
  }
  return along_ray;
}

// Nearest point to `point` on segment [a, b].
template <typename Scalar>
[[nodiscard]] Vec2<Scalar> closest_point_on_segment(const Vec2<Scalar>& point,
                                                    const Vec2<Scalar>& a,
                                                    const Vec2<Scalar>& b) {
  const Vec2<Scalar> edge = b - a;
  const Scalar len2 = edge.squaredNorm();
  if (len2 == Scalar(0)) return a;
  const Scalar t = std::clamp((point - a).dot(edge) / len2, Scalar(0), Scalar(1));
  return a + t * edge;
}

// Euclidean distance from a point to segment [a, b].
template <typename Scalar>
[[nodiscard]] Scalar point_segment_distance(const Vec2<Scalar>& point,
                                            const Vec2<Scalar>& a,
                                            const Vec2<Scalar>& b) {
  return (point - closest_point_on_segment(point, a, b)).norm();
}

}  // namespace evonav
