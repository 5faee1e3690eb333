#pragma once

#include <cmath>

#include "anyon/parallel.hpp"
#include "anyon/state.hpp"

namespace anyon {

/// Free transport over dt: each velocity column is shifted periodically in x
/// by v1 dt with linear interpolation, f(x) <- f(x - v1 dt). The update is a
/// circulant convex combination, so column sums are preserved and a shift by
/// a whole number of cells is an exact permutation.
template <typename Scalar>
State<Scalar> advect(State<Scalar> state, Scalar dt, int threads = 1) {
    const int nx = state.cells();
    const auto& vg = state.velocity();
    const Scalar cells_per_unit = Scalar(nx);
    Field<Scalar> out(state.f.rows(), state.f.cols());
    parallel_for(0, state.nodes(), threads, [&](int j) {
        const Scalar shift = vg.node(j).x() * dt * cells_per_unit;
        const Scalar whole = std::floor(shift);
        const Scalar frac = shift - whole;
        const long q = static_cast<long>(whole);
        for (int i = 0; i < nx; ++i) {
            const Scalar near = state.f(state.space().wrap(i - q), j);
            out(i, j) = frac == Scalar(0)
                            ? near
                            : (Scalar(1) - frac) * near + frac * state.f(state.space().wrap(i - q - 1), j);
        }
    });
    state.f = std::move(out);
    return state;
}

} // namespace anyon
