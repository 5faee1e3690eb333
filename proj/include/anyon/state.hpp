#pragma once

#include <memory>

#include "anyon/filling_factor.hpp"
#include "anyon/grids.hpp"

namespace anyon {

/// Grids shared by every state of a run.
template <typename Scalar>
struct Discretization {
    SpatialGrid<Scalar> space;
    VelocityGrid<Scalar> velocity;
    AngularGrid<Scalar> angle;
};

template <typename Scalar>
using Field = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Distribution f(x_i, v_j) at one time: row i is the velocity slice of cell i.
template <typename Scalar>
struct State {
    std::shared_ptr<const Discretization<Scalar>> grids;
    Field<Scalar> f;
    Scalar t = 0;
    AlphaParam<Scalar> alpha;

    State(std::shared_ptr<const Discretization<Scalar>> g, AlphaParam<Scalar> a)
        : grids(std::move(g)), f(Field<Scalar>::Zero(grids->space.size(), grids->velocity.size())), alpha(a) {}

    int cells() const { return static_cast<int>(f.rows()); }
    int nodes() const { return static_cast<int>(f.cols()); }
    const VelocityGrid<Scalar>& velocity() const { return grids->velocity; }
    const SpatialGrid<Scalar>& space() const { return grids->space; }

    /// Throws DomainError unless 0 <= f < 1/alpha everywhere and t >= 0.
    void check() const {
        if (!(t >= Scalar(0))) throw DomainError("state: negative time");
        const Scalar ceiling = alpha.ceiling();
        for (Eigen::Index i = 0; i < f.rows(); ++i)
            for (Eigen::Index j = 0; j < f.cols(); ++j) {
                const Scalar v = f(i, j);
                if (!std::isfinite(v) || v < Scalar(0) || !(v < ceiling))
                    throw DomainError("state: invalid value " + std::to_string(v) + " at cell " + std::to_string(i) +
                                      ", node " + std::to_string(j));
            }
    }
};

template <typename Scalar>
std::shared_ptr<const Discretization<Scalar>> make_discretization(int n_x, Scalar vmax, int n_per_axis,
                                                                  int n_theta) {
    return std::make_shared<const Discretization<Scalar>>(
        Discretization<Scalar>{SpatialGrid<Scalar>(n_x), build_velocity_grid(vmax, n_per_axis),
                               AngularGrid<Scalar>(n_theta)});
}

/// Quadrature L1 distance over (x, v).
template <typename Scalar>
Scalar l1_distance(const State<Scalar>& a, const State<Scalar>& b) {
    return (a.f - b.f).cwiseAbs().sum() * a.velocity().weight() * a.space().spacing();
}

} // namespace anyon
