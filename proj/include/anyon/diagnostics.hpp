#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "anyon/collision_operator.hpp"
#include "anyon/state.hpp"
#include "anyon/summation.hpp"

namespace anyon {

template <typename Scalar>
struct Moments {
    Scalar mass = 0;
    Vec2<Scalar> momentum = Vec2<Scalar>::Zero();
    Scalar energy = 0;
};

template <typename Scalar>
Moments<Scalar> moments(const State<Scalar>& state) {
    const auto& vg = state.velocity();
    const Scalar w = vg.weight() * state.space().spacing();
    CompensatedSum<Scalar> mass, p1, p2, energy;
    for (int i = 0; i < state.cells(); ++i)
        for (int j = 0; j < state.nodes(); ++j) {
            const Scalar wf = w * state.f(i, j);
            const Vec2<Scalar> v = vg.node(j);
            mass += wf;
            p1 += wf * v.x();
            p2 += wf * v.y();
            energy += wf * v.squaredNorm();
        }
    return {mass.value(), Vec2<Scalar>(p1.value(), p2.value()), energy.value()};
}

/// x-integrated Bony functional, same quadrature and interpolation as the
/// collision operator.
template <typename Scalar>
Scalar bony_functional(CollisionOperator<Scalar>& op, const State<Scalar>& state) {
    CompensatedSum<Scalar> total;
    for (int i = 0; i < state.cells(); ++i)
        total += state.space().spacing() * op.rates(state.f.row(i).transpose(), state.alpha).bony;
    return total.value();
}

template <typename Scalar>
Scalar bony_functional(const State<Scalar>& state, const KernelSpec<Scalar>& kernel) {
    CollisionOperator<Scalar> op(state.velocity(), state.grids->angle, kernel);
    return bony_functional(op, state);
}

template <typename Scalar>
struct TailMass {
    Scalar mass = 0;     ///< integral of f over |v| > lambda
    Scalar weighted = 0; ///< integral of |v| f over |v| > lambda
};

template <typename Scalar>
TailMass<Scalar> tail_mass(const State<Scalar>& state, Scalar lambda) {
    const auto& vg = state.velocity();
    const Scalar w = vg.weight() * state.space().spacing();
    CompensatedSum<Scalar> mass, weighted;
    for (int j = 0; j < state.nodes(); ++j) {
        const Scalar speed = vg.node(j).norm();
        if (!(speed > lambda)) continue;
        for (int i = 0; i < state.cells(); ++i) {
            mass += w * state.f(i, j);
            weighted += w * speed * state.f(i, j);
        }
    }
    return {mass.value(), weighted.value()};
}

/// Running max over time and cells of f^sharp(t, x, v) per velocity node.
/// The characteristic shift is a bijection of the periodic cell set, so the
/// max over x of f^sharp at time t equals the max over cells of f(t, ., v).
/// An optional cell window [first, last) gives the local variant.
template <typename Scalar>
class SupDensityAccumulator {
public:
    explicit SupDensityAccumulator(const State<Scalar>& initial, int first_cell = 0, int last_cell = -1)
        : first_(first_cell), last_(last_cell < 0 ? initial.cells() : last_cell),
          sup_(Vector<Scalar>::Zero(initial.nodes())) {
        if (first_ < 0 || first_ >= last_ || last_ > initial.cells())
            throw ConfigError("sup-density accumulator: empty or invalid cell window");
        update(initial);
    }

    void update(const State<Scalar>& state) {
        sup_ = sup_.cwiseMax(state.f.middleRows(first_, last_ - first_).colwise().maxCoeff().transpose());
    }

    const Vector<Scalar>& pointwise() const { return sup_; }

    /// Velocity quadrature of the accumulator, optionally over |v| > lambda only.
    Scalar read(const VelocityGrid<Scalar>& vg, std::optional<Scalar> lambda = std::nullopt) const {
        CompensatedSum<Scalar> s;
        for (int j = 0; j < vg.size(); ++j)
            if (!lambda || vg.node(j).norm() > *lambda) s += vg.weight() * sup_(j);
        return s.value();
    }

private:
    int first_, last_;
    Vector<Scalar> sup_;
};

template <typename Scalar>
SupDensityAccumulator<Scalar>& update_sup_density(SupDensityAccumulator<Scalar>& acc, const State<Scalar>& state) {
    acc.update(state);
    return acc;
}

template <typename Scalar>
Scalar read_sup_density(const SupDensityAccumulator<Scalar>& acc, const VelocityGrid<Scalar>& vg) {
    return acc.read(vg);
}

/// Boson entropy functional, integrand (1 + f) log(1 + f) - f log f.
template <typename Scalar>
Scalar entropy(const State<Scalar>& state) {
    if (!state.alpha.boson()) throw ConfigError("entropy: unsupported diagnostic for alpha > 0");
    const Scalar w = state.velocity().weight() * state.space().spacing();
    CompensatedSum<Scalar> s;
    for (Eigen::Index i = 0; i < state.f.rows(); ++i)
        for (Eigen::Index j = 0; j < state.f.cols(); ++j) {
            const Scalar f = state.f(i, j);
            if (f == Scalar(0)) continue;
            s += w * ((Scalar(1) + f) * std::log1p(f) - f * std::log(f));
        }
    return s.value();
}

/// u1 = int v1 f dv / int f dv per cell; empty where the cell holds no mass.
template <typename Scalar>
std::vector<std::optional<Scalar>> bulk_velocity(const State<Scalar>& state) {
    const auto& vg = state.velocity();
    std::vector<std::optional<Scalar>> u(static_cast<std::size_t>(state.cells()));
    for (int i = 0; i < state.cells(); ++i) {
        CompensatedSum<Scalar> mass, flux;
        for (int j = 0; j < state.nodes(); ++j) {
            mass += state.f(i, j);
            flux += vg.node(j).x() * state.f(i, j);
        }
        if (mass.value() > Scalar(0)) u[static_cast<std::size_t>(i)] = flux.value() / mass.value();
    }
    return u;
}

template <typename Scalar>
struct DiagnosticsRecord {
    Scalar t = 0;
    Scalar dt = 0;
    Scalar mass = 0;
    Vec2<Scalar> momentum = Vec2<Scalar>::Zero();
    Scalar energy = 0;
    Scalar sup_norm = 0;
    Scalar bony = 0;
    std::optional<Scalar> entropy;
    std::vector<std::pair<Scalar, TailMass<Scalar>>> tails; ///< (lambda, tail) in configured order
    Scalar sup_density = 0;
};

/// Evaluates every diagnostic at the given state; `acc` must already include it.
template <typename Scalar>
DiagnosticsRecord<Scalar> record_diagnostics(CollisionOperator<Scalar>& op, const State<Scalar>& state, Scalar dt,
                                             const std::vector<Scalar>& lambdas,
                                             const SupDensityAccumulator<Scalar>& acc) {
    DiagnosticsRecord<Scalar> rec;
    rec.t = state.t;
    rec.dt = dt;
    const Moments<Scalar> m = moments(state);
    rec.mass = m.mass;
    rec.momentum = m.momentum;
    rec.energy = m.energy;
    rec.sup_norm = state.f.maxCoeff();
    rec.bony = bony_functional(op, state);
    if (state.alpha.boson()) rec.entropy = entropy(state);
    for (Scalar lambda : lambdas) rec.tails.emplace_back(lambda, tail_mass(state, lambda));
    rec.sup_density = acc.read(state.velocity());
    return rec;
}

} // namespace anyon
