#pragma once

#include <cmath>
#include <utility>

#include "anyon/errors.hpp"
#include "anyon/grids.hpp"

namespace anyon {

/// Unit collision direction n = R(theta) u, u = (v - v_star)/|v - v_star|,
/// R counterclockwise rotation. theta and theta + pi give the same outcome,
/// so theta in [0, pi] covers every distinct collision once.
template <typename Scalar>
Vec2<Scalar> collision_direction(const Vec2<Scalar>& rel, Scalar theta) {
    const Vec2<Scalar> u = rel / rel.norm();
    const Scalar c = std::cos(theta), s = std::sin(theta);
    return Vec2<Scalar>(c * u.x() - s * u.y(), s * u.x() + c * u.y());
}

/// Post-collision velocities v' = v - (v - v*, n) n, v*' = v* + (v - v*, n) n.
template <typename Scalar>
std::pair<Vec2<Scalar>, Vec2<Scalar>> post_collision(const Vec2<Scalar>& v, const Vec2<Scalar>& v_star,
                                                     Scalar theta) {
    const Vec2<Scalar> rel = v - v_star;
    if (rel.x() == Scalar(0) && rel.y() == Scalar(0))
        throw DomainError("post_collision: degenerate pair v == v_star");
    const Vec2<Scalar> n = collision_direction(rel, theta);
    const Vec2<Scalar> exchange = rel.dot(n) * n;
    return {v - exchange, v_star + exchange};
}

/// Reflection with a fixed direction n; its own inverse.
template <typename Scalar>
std::pair<Vec2<Scalar>, Vec2<Scalar>> reflect_pair(const Vec2<Scalar>& v, const Vec2<Scalar>& v_star,
                                                   const Vec2<Scalar>& n) {
    const Vec2<Scalar> exchange = (v - v_star).dot(n) * n;
    return {v - exchange, v_star + exchange};
}

} // namespace anyon
