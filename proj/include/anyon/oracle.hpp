#pragma once

#include "anyon/collision_operator.hpp"

namespace anyon {

/// Reference collision operator: plain triple loop over (j, k, m) with the
/// geometry recomputed from post_collision for every collision, filling
/// factors evaluated directly, and sums accumulated in loop order. Shares no
/// tables or algebraic rearrangements with CollisionOperator.
template <typename Scalar, typename Derived>
CollisionOutput<Scalar> oracle_Q(const Eigen::MatrixBase<Derived>& slice, const VelocityGrid<Scalar>& vg,
                                 const AngularGrid<Scalar>& ang, const KernelSpec<Scalar>& spec,
                                 AlphaParam<Scalar> alpha, Statistics stats = Statistics::Quantum) {
    const int nv = vg.size();
    if (slice.size() != nv) throw DomainError("velocity slice has wrong size");
    check_slice(slice, alpha);
    auto F = [&](Scalar f) { return stats == Statistics::Classical ? Scalar(1) : filling_factor(alpha, f); };

    CollisionOutput<Scalar> out;
    out.gain = Vector<Scalar>::Zero(nv);
    out.loss = Vector<Scalar>::Zero(nv);
    for (int j = 0; j < nv; ++j) {
        const Vec2<Scalar> v = vg.node(j);
        for (int k = 0; k < nv; ++k) {
            const Vec2<Scalar> v_star = vg.node(k);
            for (int m = 0; m < ang.size(); ++m) {
                const Scalar theta = ang.node(m);
                const Scalar B = eval_kernel(spec, (v - v_star).norm(), theta);
                if (B == Scalar(0)) continue;
                const auto [vp, vps] = post_collision(v, v_star, theta);
                if (!in_node_hull(vg, vp) || !in_node_hull(vg, vps)) continue;
                const Scalar fp = interpolate(slice, vg, vp);
                const Scalar fps = interpolate(slice, vg, vps);
                const Scalar weight = vg.weight() * ang.weight() * B;
                out.gain(j) += weight * fp * fps * F(slice(j)) * F(slice(k));
                out.loss(j) += weight * slice(j) * slice(k) * F(fp) * F(fps);
            }
        }
    }
    out.net = out.gain - out.loss;
    return out;
}

/// Bony integrand sum_{j,k,m} |v_j - v_k|^2 B f_j f_k F(f') F(f'_*) by the same naive loops.
template <typename Scalar, typename Derived>
Scalar oracle_bony(const Eigen::MatrixBase<Derived>& slice, const VelocityGrid<Scalar>& vg,
                   const AngularGrid<Scalar>& ang, const KernelSpec<Scalar>& spec, AlphaParam<Scalar> alpha) {
    const int nv = vg.size();
    check_slice(slice, alpha);
    Scalar total = 0;
    for (int j = 0; j < nv; ++j)
        for (int k = 0; k < nv; ++k)
            for (int m = 0; m < ang.size(); ++m) {
                const Vec2<Scalar> v = vg.node(j), v_star = vg.node(k);
                const Scalar theta = ang.node(m);
                const Scalar B = eval_kernel(spec, (v - v_star).norm(), theta);
                if (B == Scalar(0)) continue;
                const auto [vp, vps] = post_collision(v, v_star, theta);
                if (!in_node_hull(vg, vp) || !in_node_hull(vg, vps)) continue;
                total += vg.weight() * vg.weight() * ang.weight() * (v - v_star).squaredNorm() * B * slice(j) *
                         slice(k) * filling_factor(alpha, interpolate(slice, vg, vp)) *
                         filling_factor(alpha, interpolate(slice, vg, vps));
            }
    return total;
}

} // namespace anyon
