#pragma once

#include <cmath>

#include "anyon/grids.hpp"

namespace anyon {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Tolerance for snapping lattice positions onto nodes; keeps the collision
/// table and the naive oracle making the same admissibility decisions.
inline constexpr double kLatticeSnap = 1e-9;

template <typename Scalar>
Scalar snap_to_lattice(Scalar p) {
    const Scalar r = std::round(p);
    return std::abs(p - r) < Scalar(kLatticeSnap) ? r : p;
}

/// True when v lies in the closed hull of the node lattice, where bilinear
/// interpolation uses grid values only.
template <typename Scalar>
bool in_node_hull(const VelocityGrid<Scalar>& grid, const Vec2<Scalar>& v) {
    const Scalar top = Scalar(grid.n_per_axis() - 1);
    const Scalar pa = snap_to_lattice(grid.lattice_position(v.x()));
    const Scalar pb = snap_to_lattice(grid.lattice_position(v.y()));
    return pa >= Scalar(0) && pa <= top && pb >= Scalar(0) && pb <= top;
}

/// Bilinear interpolation of nodal values, extended by zero outside the grid.
template <typename Scalar, typename Derived>
Scalar interpolate(const Eigen::MatrixBase<Derived>& values, const VelocityGrid<Scalar>& grid,
                   const Vec2<Scalar>& v) {
    const int n = grid.n_per_axis();
    const Scalar pa = snap_to_lattice(grid.lattice_position(v.x()));
    const Scalar pb = snap_to_lattice(grid.lattice_position(v.y()));
    const Scalar fa = std::floor(pa), fb = std::floor(pb);
    const int a = static_cast<int>(fa), b = static_cast<int>(fb);
    const Scalar ra = pa - fa, rb = pb - fb;
    auto at = [&](int ia, int ib) -> Scalar {
        if (ia < 0 || ia >= n || ib < 0 || ib >= n) return Scalar(0);
        return values(grid.index(ia, ib));
    };
    return (Scalar(1) - ra) * (Scalar(1) - rb) * at(a, b) + ra * (Scalar(1) - rb) * at(a + 1, b) +
           (Scalar(1) - ra) * rb * at(a, b + 1) + ra * rb * at(a + 1, b + 1);
}

} // namespace anyon
