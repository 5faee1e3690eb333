#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "anyon/collision_geometry.hpp"
#include "anyon/errors.hpp"
#include "anyon/filling_factor.hpp"
#include "anyon/grids.hpp"
#include "anyon/interpolation.hpp"
#include "anyon/kernel.hpp"
#include "anyon/parallel.hpp"
#include "anyon/summation.hpp"

namespace anyon {

/// Gain and loss rates per velocity node; `net` is the authoritative rate
/// (replaced by the projected rate after project_conservative).
template <typename Scalar>
struct CollisionOutput {
    Vector<Scalar> gain;
    Vector<Scalar> loss;
    Vector<Scalar> net;
};

/// Quantum uses F_alpha; Classical replaces every filling factor by 1 and
/// leaves the purely quadratic part of the operator.
enum class Statistics { Quantum, Classical };

/// Everything one pass over the collision quadrature yields for one slice.
template <typename Scalar>
struct SliceRates {
    Vector<Scalar> gain;
    Vector<Scalar> loss;
    Vector<Scalar> frequency; ///< loss with f(v) factored out
    Scalar bony = 0;          ///< velocity part of the Bony functional
};

template <typename Scalar, typename Derived>
void check_slice(const Eigen::MatrixBase<Derived>& slice, AlphaParam<Scalar> alpha) {
    const Scalar ceiling = alpha.ceiling();
    for (Eigen::Index j = 0; j < slice.size(); ++j) {
        const Scalar f = slice(j);
        if (!std::isfinite(f) || f < Scalar(0))
            throw DomainError("velocity slice: value " + std::to_string(f) + " at node " + std::to_string(j) +
                              " is negative or not finite");
        if (!(f < ceiling))
            throw DomainError("velocity slice: value " + std::to_string(f) + " at node " + std::to_string(j) +
                              " reaches the occupancy ceiling");
    }
}

/// Discrete collision operator on one velocity slice.
///
/// For the pair (v_j, v_k) and angle theta_m the post-collision velocities
/// are v_j - D and v_k + D with D depending on the lattice offset k - j and
/// on m only, so the bilinear stencils and kernel values are tabulated once
/// per offset. A collision contributes only when both post-collision
/// velocities lie in the node hull. The pair sums
///
///   P_jk = sum_m w_theta B f(v') f(v'_*),  S_jk = sum_m w_theta B F(f(v')) F(f(v'_*))
///
/// are symmetric in (j, k) and give gain, loss, frequency and the Bony
/// integrand without a second pass. Not thread-safe: one instance per caller.
template <typename Scalar>
class CollisionOperator {
public:
    CollisionOperator(const VelocityGrid<Scalar>& vg, const AngularGrid<Scalar>& ang, KernelSpec<Scalar> spec,
                      int threads = 1)
        : vg_(vg), ang_(ang), spec_(std::move(spec)), threads_(threads) {
        spec_.check();
        build_table();
        const int nv = vg_.size();
        pair_gain_.setZero(nv, nv);
        pair_loss_.setZero(nv, nv);
    }

    const VelocityGrid<Scalar>& velocity_grid() const { return vg_; }
    const AngularGrid<Scalar>& angular_grid() const { return ang_; }
    const KernelSpec<Scalar>& kernel() const { return spec_; }
    void set_threads(int threads) { threads_ = threads; }
    int threads() const { return threads_; }

    template <typename Derived>
    SliceRates<Scalar> rates(const Eigen::MatrixBase<Derived>& slice, AlphaParam<Scalar> alpha,
                             Statistics stats = Statistics::Quantum) {
        const int nv = vg_.size();
        if (slice.size() != nv) throw DomainError("velocity slice has wrong size");
        check_slice(slice, alpha);
        const Vector<Scalar> f = slice;
        fill_pair_sums(f, alpha, stats);

        Vector<Scalar> filling(nv);
        for (int j = 0; j < nv; ++j)
            filling(j) = stats == Statistics::Classical ? Scalar(1) : filling_factor(alpha, f(j));

        SliceRates<Scalar> out;
        out.gain.resize(nv);
        out.loss.resize(nv);
        out.frequency.resize(nv);
        Vector<Scalar> bony_row(nv);
        const Scalar w = vg_.weight();
        const Scalar h2 = vg_.spacing() * vg_.spacing();
        parallel_for(0, nv, threads_, [&](int j) {
            CompensatedSum<Scalar> gain, nu, bony;
            const int aj = vg_.axis_a(j), bj = vg_.axis_b(j);
            for (int k = 0; k < nv; ++k) {
                gain += filling(k) * pair_gain_(k, j);
                const Scalar lk = f(k) * pair_loss_(k, j);
                nu += lk;
                const int da = vg_.axis_a(k) - aj, db = vg_.axis_b(k) - bj;
                bony += Scalar(da * da + db * db) * h2 * lk;
            }
            out.gain(j) = w * filling(j) * gain.value();
            out.frequency(j) = w * nu.value();
            out.loss(j) = f(j) * out.frequency(j);
            bony_row(j) = w * w * f(j) * bony.value();
        });
        CompensatedSum<Scalar> bony;
        for (int j = 0; j < nv; ++j) bony += bony_row(j);
        out.bony = bony.value();
        return out;
    }

    template <typename Derived>
    CollisionOutput<Scalar> evaluate(const Eigen::MatrixBase<Derived>& slice, AlphaParam<Scalar> alpha,
                                     Statistics stats = Statistics::Quantum) {
        SliceRates<Scalar> r = rates(slice, alpha, stats);
        CollisionOutput<Scalar> out{std::move(r.gain), std::move(r.loss), {}};
        out.net = out.gain - out.loss;
        return out;
    }

    /// Number of tabulated (offset, angle) collisions with nonzero kernel.
    std::size_t table_size() const { return entries_.size(); }

private:
    struct Stencil {
        int da, db;     // lower-left node offset
        int sa, sb;     // 1 when the upper neighbour carries weight
        Scalar w00, w10, w01, w11;
    };
    struct Entry {
        Scalar weight; // w_theta * B
        Stencil prime, prime_star;
    };

    static Stencil make_stencil(Scalar pa, Scalar pb) {
        pa = snap_to_lattice(pa);
        pb = snap_to_lattice(pb);
        const Scalar fa = std::floor(pa), fb = std::floor(pb);
        const Scalar ra = pa - fa, rb = pb - fb;
        return {static_cast<int>(fa),
                static_cast<int>(fb),
                ra > Scalar(0) ? 1 : 0,
                rb > Scalar(0) ? 1 : 0,
                (Scalar(1) - ra) * (Scalar(1) - rb),
                ra * (Scalar(1) - rb),
                (Scalar(1) - ra) * rb,
                ra * rb};
    }

    void build_table() {
        const int n = vg_.n_per_axis();
        const int span = 2 * n - 1;
        const Scalar h = vg_.spacing();
        offset_begin_.assign(static_cast<std::size_t>(span * span) + 1, 0);
        entries_.clear();
        for (int ob = -(n - 1); ob <= n - 1; ++ob)
            for (int oa = -(n - 1); oa <= n - 1; ++oa) {
                offset_begin_[offset_slot(oa, ob)] = static_cast<int>(entries_.size());
                if (oa == 0 && ob == 0) continue;
                const Vec2<Scalar> rel(-Scalar(oa) * h, -Scalar(ob) * h); // v_j - v_k
                const Scalar speed = rel.norm();
                for (int m = 0; m < ang_.size(); ++m) {
                    const Scalar theta = ang_.node(m);
                    const Scalar b = eval_kernel(spec_, speed, theta);
                    if (b == Scalar(0)) continue;
                    const Vec2<Scalar> nrm = collision_direction(rel, theta);
                    const Vec2<Scalar> shift = rel.dot(nrm) * nrm / h;
                    entries_.push_back(Entry{ang_.weight() * b, make_stencil(-shift.x(), -shift.y()),
                                             make_stencil(shift.x(), shift.y())});
                }
            }
        offset_begin_.back() = static_cast<int>(entries_.size());
    }

    std::size_t offset_slot(int oa, int ob) const {
        const int n = vg_.n_per_axis();
        return static_cast<std::size_t>((ob + n - 1) * (2 * n - 1) + (oa + n - 1));
    }

    enum class Filling { Classical, Boson, Anyon };

    // Pair sums for every pair (j, j + o) of one offset o with k > j, written
    // to both (j, k) and (k, j). Each table entry is applied over the box of
    // anchors for which both stencils stay inside the node lattice, so the
    // per-pair sums accumulate in table (angle) order.
    template <Filling mode>
    void offset_pair_sums(const Vector<Scalar>& f, int oa, int ob, Scalar a, std::vector<Scalar>& gbuf,
                          std::vector<Scalar>& lbuf) {
        const int n = vg_.n_per_axis();
        const Scalar b = Scalar(1) - a;
        const int a0 = std::max(0, -oa), a1 = n - 1 - std::max(0, oa);
        const int b0 = std::max(0, -ob), b1 = n - 1 - std::max(0, ob);
        if (a0 > a1 || b0 > b1) return;
        const int width = a1 - a0 + 1;
        const std::size_t count = static_cast<std::size_t>(width * (b1 - b0 + 1));
        gbuf.assign(count, Scalar(0));
        lbuf.assign(count, Scalar(0));
        const Scalar* fp = f.data();
        const std::size_t slot = offset_slot(oa, ob);
        for (int e = offset_begin_[slot]; e < offset_begin_[slot + 1]; ++e) {
            const Entry& en = entries_[static_cast<std::size_t>(e)];
            const Stencil& s1 = en.prime;
            const Stencil& s2 = en.prime_star;
            const int ea0 = std::max({a0, -s1.da, -s2.da - oa});
            const int ea1 = std::min({a1, n - 1 - s1.sa - s1.da, n - 1 - s2.sa - s2.da - oa});
            const int eb0 = std::max({b0, -s1.db, -s2.db - ob});
            const int eb1 = std::min({b1, n - 1 - s1.sb - s1.db, n - 1 - s2.sb - s2.db - ob});
            if (ea0 > ea1 || eb0 > eb1) continue;
            const Scalar w = en.weight;
            const int up1 = s1.sb * n, up2 = s2.sb * n;
            for (int bj = eb0; bj <= eb1; ++bj) {
                const Scalar* r1 = fp + (bj + s1.db) * n + s1.da;
                const Scalar* r2 = fp + (bj + ob + s2.db) * n + s2.da + oa;
                Scalar* g = gbuf.data() + static_cast<std::size_t>((bj - b0) * width - a0);
                Scalar* l = lbuf.data() + static_cast<std::size_t>((bj - b0) * width - a0);
                for (int aj = ea0; aj <= ea1; ++aj) {
                    const Scalar v1 = s1.w00 * r1[aj] + s1.w10 * r1[aj + s1.sa] + s1.w01 * r1[aj + up1] +
                                      s1.w11 * r1[aj + up1 + s1.sa];
                    const Scalar v2 = s2.w00 * r2[aj] + s2.w10 * r2[aj + s2.sa] + s2.w01 * r2[aj + up2] +
                                      s2.w11 * r2[aj + up2 + s2.sa];
                    g[aj] += w * v1 * v2;
                    if constexpr (mode == Filling::Classical) {
                        l[aj] += w;
                    } else if constexpr (mode == Filling::Boson) {
                        l[aj] += w * (Scalar(1) + v1) * (Scalar(1) + v2);
                    } else {
                        const Scalar sum = v1 + v2, prod = v1 * v2;
                        l[aj] += w * std::exp(a * std::log1p(-a * sum + a * a * prod) +
                                              b * std::log1p(b * sum + b * b * prod));
                    }
                }
            }
        }
        for (int bj = b0; bj <= b1; ++bj)
            for (int aj = a0; aj <= a1; ++aj) {
                const int j = vg_.index(aj, bj), k = vg_.index(aj + oa, bj + ob);
                const std::size_t idx = static_cast<std::size_t>((bj - b0) * width + (aj - a0));
                pair_gain_(j, k) = pair_gain_(k, j) = gbuf[idx];
                pair_loss_(j, k) = pair_loss_(k, j) = lbuf[idx];
            }
    }

    void fill_pair_sums(const Vector<Scalar>& f, AlphaParam<Scalar> alpha, Statistics stats) {
        const int n = vg_.n_per_axis();
        const Filling mode = stats == Statistics::Classical ? Filling::Classical
                             : alpha.boson()                ? Filling::Boson
                                                            : Filling::Anyon;
        pair_gain_.diagonal().setZero();
        pair_loss_.diagonal().setZero();
        // offsets with k > j: ob > 0, or ob == 0 and oa > 0
        const int half = (n - 1) + (n - 1) * (2 * n - 1);
        const int workers = std::clamp(threads_, 1, half);
        std::vector<std::vector<Scalar>> gbufs(static_cast<std::size_t>(workers)),
            lbufs(static_cast<std::size_t>(workers));
        parallel_for(0, workers, workers, [&](int w) {
            auto& gb = gbufs[static_cast<std::size_t>(w)];
            auto& lb = lbufs[static_cast<std::size_t>(w)];
            for (int h = w; h < half; h += workers) {
                const int ob = h < n - 1 ? 0 : (h - (n - 1)) / (2 * n - 1) + 1;
                const int oa = ob == 0 ? h + 1 : (h - (n - 1)) % (2 * n - 1) - (n - 1);
                switch (mode) {
                case Filling::Classical: offset_pair_sums<Filling::Classical>(f, oa, ob, alpha.value(), gb, lb); break;
                case Filling::Boson: offset_pair_sums<Filling::Boson>(f, oa, ob, alpha.value(), gb, lb); break;
                case Filling::Anyon: offset_pair_sums<Filling::Anyon>(f, oa, ob, alpha.value(), gb, lb); break;
                }
            }
        });
    }

    VelocityGrid<Scalar> vg_;
    AngularGrid<Scalar> ang_;
    KernelSpec<Scalar> spec_;
    int threads_;
    std::vector<int> offset_begin_;
    std::vector<Entry> entries_;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> pair_gain_, pair_loss_;
};

template <typename Scalar, typename Derived>
CollisionOutput<Scalar> eval_Q(const Eigen::MatrixBase<Derived>& slice, const VelocityGrid<Scalar>& vg,
                               const AngularGrid<Scalar>& ang, const KernelSpec<Scalar>& spec,
                               AlphaParam<Scalar> alpha) {
    CollisionOperator<Scalar> op(vg, ang, spec);
    return op.evaluate(slice, alpha);
}

template <typename Scalar, typename Derived>
Vector<Scalar> collision_frequency(const Eigen::MatrixBase<Derived>& slice, const VelocityGrid<Scalar>& vg,
                                   const AngularGrid<Scalar>& ang, const KernelSpec<Scalar>& spec,
                                   AlphaParam<Scalar> alpha) {
    CollisionOperator<Scalar> op(vg, ang, spec);
    return op.rates(slice, alpha).frequency;
}

/// Gram matrix of the collision invariants {1, v1, v2, |v|^2} under the
/// velocity quadrature.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 4> invariant_basis(const VelocityGrid<Scalar>& vg) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 4> phi(vg.size(), 4);
    phi.col(0).setOnes();
    phi.col(1) = vg.v1();
    phi.col(2) = vg.v2();
    phi.col(3) = vg.nodes().rowwise().squaredNorm();
    return phi;
}

/// Quadrature moments of a nodal field against {1, v1, v2, |v|^2}.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, 4, 1> invariant_moments(const Eigen::MatrixBase<Derived>& g, const VelocityGrid<Scalar>& vg) {
    const auto phi = invariant_basis(vg);
    Eigen::Matrix<Scalar, 4, 1> mom;
    for (int a = 0; a < 4; ++a) {
        CompensatedSum<Scalar> s;
        for (int j = 0; j < vg.size(); ++j) s += vg.weight() * g(j) * phi(j, a);
        mom(a) = s.value();
    }
    return mom;
}

/// Removes the invariant components of `net` so that its four quadrature
/// moments vanish: net' = net - D phi lambda with (phi^T W D phi) lambda =
/// moments(net), W the quadrature weights and D = diag(weights). net' is the
/// point closest to net in the norm sum_j w (.)^2 / d_j among rates with zero
/// moments. Gain and loss are carried through unchanged.
template <typename Scalar, typename Derived>
CollisionOutput<Scalar> project_conservative(CollisionOutput<Scalar> out, const VelocityGrid<Scalar>& vg,
                                             const Eigen::MatrixBase<Derived>& weights) {
    const auto phi = invariant_basis(vg);
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 4> dphi = weights.asDiagonal() * phi;
    const Eigen::Matrix<Scalar, 4, 4> gram = vg.weight() * (phi.transpose() * dphi);
    const Eigen::LDLT<Eigen::Matrix<Scalar, 4, 4>> ldlt(gram);
    const Scalar dmax = ldlt.vectorD().cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || !(dmax > Scalar(0)) ||
        ldlt.vectorD().minCoeff() <= Scalar(1e-13) * dmax)
        throw InternalError("project_conservative: singular Gram matrix");
    // A second sweep takes the residual moments down to rounding level.
    for (int sweep = 0; sweep < 2; ++sweep) {
        const Eigen::Matrix<Scalar, 4, 1> lambda = ldlt.solve(invariant_moments(out.net, vg));
        out.net -= dphi * lambda;
    }
    return out;
}

/// Unit-weight projection: plain quadrature-weighted least squares onto the
/// complement of span{1, v1, v2, |v|^2}.
template <typename Scalar>
CollisionOutput<Scalar> project_conservative(CollisionOutput<Scalar> out, const VelocityGrid<Scalar>& vg) {
    return project_conservative(std::move(out), vg, Vector<Scalar>::Ones(vg.size()));
}

/// Projection used by the time stepper: weights are the slice the rates were
/// computed from, so the correction scales with f and keeps nearly empty
/// nodes nearly untouched. Falls back to unit weights when the slice occupies
/// too few nodes to carry four independent moments.
template <typename Scalar>
CollisionOutput<Scalar> project_conservative_state(CollisionOutput<Scalar> out, const VelocityGrid<Scalar>& vg,
                                                   const Vector<Scalar>& slice) {
    if (!(slice.maxCoeff() > Scalar(0))) {
        out.net.setZero();
        return out;
    }
    try {
        return project_conservative(out, vg, slice);
    } catch (const InternalError&) {
        return project_conservative(std::move(out), vg);
    }
}

} // namespace anyon
