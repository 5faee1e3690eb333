#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "anyon/collision_operator.hpp"
#include "anyon/state.hpp"
#include "anyon/transport.hpp"

namespace anyon {

template <typename Scalar>
struct StepControl {
    Scalar cfl_collision = Scalar(0.2);
    Scalar dt_min = Scalar(1e-8);
    Scalar dt_max = Scalar(0.05);
    Scalar ceiling_margin = Scalar(1e-6);

    void check() const {
        if (!(dt_min > Scalar(0) && dt_min <= dt_max)) throw ConfigError("step control: need 0 < dt_min <= dt_max");
        if (!(cfl_collision > Scalar(0) && cfl_collision <= Scalar(1)))
            throw ConfigError("step control: cfl must lie in (0, 1]");
        if (!(ceiling_margin > Scalar(0) && ceiling_margin < Scalar(1)))
            throw ConfigError("step control: ceiling margin must lie in (0, 1)");
    }

    /// Largest value an accepted anyon state may take: (1 - margin) / alpha.
    Scalar cap(AlphaParam<Scalar> alpha) const {
        return alpha.boson() ? std::numeric_limits<Scalar>::infinity()
                             : (Scalar(1) - ceiling_margin) / alpha.value();
    }
};

/// A tentative collision step left the corridor 0 <= f <= cap.
template <typename Scalar>
struct StepRejected {
    Scalar magnitude; ///< most negative value, or excess over the cap
    bool ceiling;     ///< true for a ceiling breach, false for negativity
};

enum class StepStatus { Accepted, DtUnderflow };

template <typename Scalar>
struct StepResult {
    State<Scalar> state;
    Scalar dt_used = 0;
    StepStatus status = StepStatus::Accepted;
    int rejections = 0;
};

/// Per-cell rates of the most recent collision evaluation.
template <typename Scalar>
struct CellRates {
    Field<Scalar> gain;
    Field<Scalar> frequency;
    Scalar bony = 0; ///< x-integrated Bony functional of the evaluated state
};

/// Doubling ladder on sup f: sup f0 <= 2^L, alarm above 2^threshold_exponent.
template <typename Scalar>
struct BlowupMonitor {
    int L = 0;
    int threshold_exponent = 1;
    std::vector<Scalar> history;

    static BlowupMonitor from_initial(const State<Scalar>& initial) {
        BlowupMonitor m;
        m.L = least_power_exponent(initial.f.maxCoeff());
        m.threshold_exponent = m.L + 1;
        m.history.push_back(initial.f.maxCoeff());
        return m;
    }

    Scalar threshold() const { return std::ldexp(Scalar(1), threshold_exponent); }
    /// Continue the ladder past a crossing.
    void raise() { ++threshold_exponent; }

    /// Least nonnegative L with sup <= 2^L.
    static int least_power_exponent(Scalar sup) {
        int L = 0;
        while (std::ldexp(Scalar(1), L) < sup) ++L;
        return L;
    }
};

enum class BlowupStatus { Ok, ThresholdCrossed };

template <typename Scalar>
BlowupStatus check_blowup(BlowupMonitor<Scalar>& monitor, const State<Scalar>& state) {
    const Scalar sup = state.f.maxCoeff();
    monitor.history.push_back(sup);
    return sup > monitor.threshold() ? BlowupStatus::ThresholdCrossed : BlowupStatus::Ok;
}

/// Strang-split time integrator: advect(dt/2), collide(dt), advect(dt/2).
///
/// The collision sub-step is Heun's rule with both stages projected onto zero
/// invariant moments. After an accepted step the stage-one rates are kept and
/// seed the next step-size proposal.
template <typename Scalar>
class Integrator {
public:
    Integrator(std::shared_ptr<const Discretization<Scalar>> grids, KernelSpec<Scalar> kernel, int threads = 1)
        : grids_(std::move(grids)), op_(grids_->velocity, grids_->angle, std::move(kernel), threads),
          threads_(threads) {}

    CollisionOperator<Scalar>& collision_operator() { return op_; }
    const std::shared_ptr<const Discretization<Scalar>>& grids() const { return grids_; }
    int threads() const { return threads_; }

    /// Projected collision rate and raw rates for every cell.
    Field<Scalar> projected_rates(const State<Scalar>& state, CellRates<Scalar>* rates = nullptr) {
        const auto& vg = grids_->velocity;
        Field<Scalar> net(state.f.rows(), state.f.cols());
        if (rates) {
            rates->gain.resize(state.f.rows(), state.f.cols());
            rates->frequency.resize(state.f.rows(), state.f.cols());
            rates->bony = 0;
        }
        for (int i = 0; i < state.cells(); ++i) {
            const Vector<Scalar> slice = state.f.row(i).transpose();
            SliceRates<Scalar> r = op_.rates(slice, state.alpha);
            CollisionOutput<Scalar> out{r.gain, r.loss, r.gain - r.loss};
            net.row(i) = project_conservative_state(std::move(out), vg, slice).net.transpose();
            if (rates) {
                rates->gain.row(i) = r.gain.transpose();
                rates->frequency.row(i) = r.frequency.transpose();
                rates->bony += state.space().spacing() * r.bony;
            }
        }
        return net;
    }

    /// One Heun step of df/dt = Q(f) per cell.
    std::variant<State<Scalar>, StepRejected<Scalar>> collide(const State<Scalar>& state, Scalar dt,
                                                             const StepControl<Scalar>& ctrl = {},
                                                             CellRates<Scalar>* stage_one = nullptr) {
        const Scalar cap = ctrl.cap(state.alpha);
        const Field<Scalar> k1 = projected_rates(state, stage_one);
        State<Scalar> predictor = state;
        predictor.f = state.f + dt * k1;
        if (auto bad = guard(predictor.f, cap)) return *bad;
        const Field<Scalar> k2 = projected_rates(predictor);
        State<Scalar> next = state;
        next.f = state.f + (dt / Scalar(2)) * (k1 + k2);
        if (auto bad = guard(next.f, cap)) return *bad;
        return next;
    }

    /// dt = clamp(cfl / max nu, dt_min, dt_max), further limited for anyons so
    /// that f + dt * gain stays below the margin-reduced ceiling.
    Scalar propose_dt(const State<Scalar>& state, const StepControl<Scalar>& ctrl) {
        CellRates<Scalar> rates;
        rates.gain.resize(state.f.rows(), state.f.cols());
        rates.frequency.resize(state.f.rows(), state.f.cols());
        for (int i = 0; i < state.cells(); ++i) {
            const SliceRates<Scalar> r = op_.rates(state.f.row(i).transpose(), state.alpha);
            rates.gain.row(i) = r.gain.transpose();
            rates.frequency.row(i) = r.frequency.transpose();
        }
        return propose_dt_from_rates(state, rates, ctrl);
    }

    static Scalar propose_dt_from_rates(const State<Scalar>& state, const CellRates<Scalar>& rates,
                                        const StepControl<Scalar>& ctrl) {
        const Scalar nu_max = rates.frequency.maxCoeff();
        Scalar dt = nu_max > Scalar(0) ? ctrl.cfl_collision / nu_max : ctrl.dt_max;
        if (!state.alpha.boson()) {
            const Scalar cap = ctrl.cap(state.alpha);
            for (Eigen::Index i = 0; i < state.f.rows(); ++i)
                for (Eigen::Index j = 0; j < state.f.cols(); ++j)
                    if (rates.gain(i, j) > Scalar(0))
                        dt = std::min(dt, std::max(cap - state.f(i, j), Scalar(0)) / rates.gain(i, j));
        }
        return std::clamp(dt, ctrl.dt_min, ctrl.dt_max);
    }

    /// One accepted Strang step, halving dt on rejection. `dt_cap` bounds the
    /// step (e.g. to land on an output time) and may undercut dt_min.
    StepResult<Scalar> step(const State<Scalar>& state, const StepControl<Scalar>& ctrl,
                            Scalar dt_cap = std::numeric_limits<Scalar>::infinity()) {
        Scalar dt = cached_ ? propose_dt_from_rates(state, *cached_, ctrl) : propose_dt(state, ctrl);
        const Scalar floor = std::min(ctrl.dt_min, dt_cap);
        dt = std::min(dt, dt_cap);
        StepResult<Scalar> result{state};
        for (;;) {
            CellRates<Scalar> stage_one;
            auto collided = collide(advect(state, dt / Scalar(2), threads_), dt, ctrl, &stage_one);
            if (auto* accepted = std::get_if<State<Scalar>>(&collided)) {
                result.state = advect(std::move(*accepted), dt / Scalar(2), threads_);
                result.state.t = state.t + dt;
                result.dt_used = dt;
                cached_ = std::move(stage_one);
                return result;
            }
            ++result.rejections;
            dt /= Scalar(2);
            if (dt < floor) {
                result.status = StepStatus::DtUnderflow;
                return result;
            }
        }
    }

    /// Drop the lagged rates (e.g. after the state was replaced externally).
    void reset() { cached_.reset(); }

private:
    static std::optional<StepRejected<Scalar>> guard(const Field<Scalar>& f, Scalar cap) {
        const Scalar lo = f.minCoeff();
        if (!(lo >= Scalar(0))) return StepRejected<Scalar>{lo, false};
        const Scalar hi = f.maxCoeff();
        if (!(hi <= cap)) return StepRejected<Scalar>{hi - cap, true};
        if (!f.allFinite()) return StepRejected<Scalar>{std::numeric_limits<Scalar>::infinity(), false};
        return std::nullopt;
    }

    std::shared_ptr<const Discretization<Scalar>> grids_;
    CollisionOperator<Scalar> op_;
    int threads_;
    std::optional<CellRates<Scalar>> cached_;
};

} // namespace anyon
