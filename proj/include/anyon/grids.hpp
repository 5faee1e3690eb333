#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "anyon/errors.hpp"

namespace anyon {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

/// Uniform cell-centred lattice on [-vmax, vmax]^2 with midpoint weights.
///
/// Node j sits at lattice coordinates (a, b) = (j % n, j / n), i.e. the first
/// velocity component runs fastest.
template <typename Scalar>
class VelocityGrid {
public:
    using Nodes = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

    VelocityGrid(Scalar vmax, int n_per_axis) : vmax_(vmax), n_(n_per_axis) {
        if (!(vmax > Scalar(0)))
            throw ConfigError("velocity grid: vmax must be positive");
        if (n_per_axis < 4 || n_per_axis % 2 != 0)
            throw ConfigError("velocity grid: n_per_axis must be even and >= 4, got " +
                              std::to_string(n_per_axis));
        h_ = Scalar(2) * vmax / Scalar(n_per_axis);
        nodes_.resize(size(), 2);
        for (int b = 0; b < n_; ++b)
            for (int a = 0; a < n_; ++a) {
                nodes_(index(a, b), 0) = coordinate(a);
                nodes_(index(a, b), 1) = coordinate(b);
            }
    }

    Scalar vmax() const { return vmax_; }
    int n_per_axis() const { return n_; }
    int size() const { return n_ * n_; }
    Scalar spacing() const { return h_; }
    Scalar weight() const { return h_ * h_; }

    const Nodes& nodes() const { return nodes_; }
    Vec2<Scalar> node(int j) const { return nodes_.row(j).transpose(); }
    Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> v1() const { return nodes_.col(0); }
    Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> v2() const { return nodes_.col(1); }

    int index(int a, int b) const { return b * n_ + a; }
    int axis_a(int j) const { return j % n_; }
    int axis_b(int j) const { return j / n_; }

    /// Node coordinate along one axis for lattice index a.
    Scalar coordinate(int a) const { return (Scalar(a) + Scalar(0.5)) * h_ - vmax_; }
    /// Fractional lattice coordinate of a velocity component.
    Scalar lattice_position(Scalar v) const { return (v + vmax_) / h_ - Scalar(0.5); }

private:
    Scalar vmax_;
    int n_;
    Scalar h_;
    Nodes nodes_;
};

template <typename Scalar>
VelocityGrid<Scalar> build_velocity_grid(Scalar vmax, int n_per_axis) {
    return VelocityGrid<Scalar>(vmax, n_per_axis);
}

/// Midpoints of a uniform partition of [0, pi].
template <typename Scalar>
class AngularGrid {
public:
    explicit AngularGrid(int n_theta) : n_(n_theta) {
        if (n_theta < 1) throw ConfigError("angular grid: n_theta must be >= 1");
        weight_ = std::numbers::pi_v<Scalar> / Scalar(n_theta);
        nodes_.resize(n_theta);
        for (int m = 0; m < n_theta; ++m) nodes_(m) = (Scalar(m) + Scalar(0.5)) * weight_;
    }

    int size() const { return n_; }
    Scalar weight() const { return weight_; }
    Scalar node(int m) const { return nodes_(m); }
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& nodes() const { return nodes_; }

private:
    int n_;
    Scalar weight_;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nodes_;
};

/// Cell centres of the periodic unit interval.
template <typename Scalar>
class SpatialGrid {
public:
    explicit SpatialGrid(int n_x) : n_(n_x) {
        if (n_x < 1) throw ConfigError("spatial grid: n_x must be >= 1");
    }

    int size() const { return n_; }
    Scalar spacing() const { return Scalar(1) / Scalar(n_); }
    Scalar center(int i) const { return (Scalar(i) + Scalar(0.5)) * spacing(); }
    int wrap(long i) const {
        long r = i % n_;
        return static_cast<int>(r < 0 ? r + n_ : r);
    }

private:
    int n_;
};

} // namespace anyon
