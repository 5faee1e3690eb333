#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "anyon/errors.hpp"
#include "anyon/grids.hpp"

namespace anyon {

/// Pseudo-Maxwellian cutoff kernel
///
///   B(r, theta) = B0 * b(theta) * 1[r >= gamma] * 1[gamma' <= |cos theta| <= 1 - gamma'].
///
/// The angular profile b must take values in [0, 1].
template <typename Scalar>
struct KernelSpec {
    Scalar B0 = 1;
    Scalar gamma = Scalar(0.1);
    Scalar gamma_prime = Scalar(0.1);
    std::function<Scalar(Scalar)> profile = [](Scalar) { return Scalar(1); };

    void check() const {
        if (!(B0 >= Scalar(0))) throw ConfigError("kernel: B0 must be >= 0");
        if (!(gamma > Scalar(0))) throw ConfigError("kernel: gamma must be positive");
        if (!(gamma_prime > Scalar(0) && gamma_prime < Scalar(0.5)))
            throw ConfigError("kernel: gamma_prime must lie in (0, 1/2)");
        if (!profile) throw ConfigError("kernel: missing angular profile");
    }

    bool angle_admissible(Scalar theta) const {
        const Scalar c = std::abs(std::cos(theta));
        return c >= gamma_prime && c <= Scalar(1) - gamma_prime;
    }
};

template <typename Scalar>
Scalar eval_kernel(const KernelSpec<Scalar>& spec, Scalar rel_speed, Scalar theta) {
    if (rel_speed < spec.gamma || !spec.angle_admissible(theta)) return Scalar(0);
    return spec.B0 * spec.profile(theta);
}

/// Angular integral of B at any admissible relative speed, by the grid's
/// midpoint rule. Throws when it is not positive, i.e. when the grid does
/// not resolve the admissible band or the profile vanishes there.
template <typename Scalar>
Scalar validate_kernel(const KernelSpec<Scalar>& spec, const AngularGrid<Scalar>& ang) {
    spec.check();
    Scalar integral = 0;
    for (int m = 0; m < ang.size(); ++m) {
        const Scalar theta = ang.node(m);
        const Scalar b = spec.profile(theta);
        if (b < Scalar(0) || b > Scalar(1))
            throw ConfigError("kernel: angular profile leaves [0, 1] at theta = " + std::to_string(theta));
        integral += ang.weight() * eval_kernel(spec, spec.gamma, theta);
    }
    if (!(integral > Scalar(0)))
        throw ConfigError("kernel degenerate: angular integral of B is " + std::to_string(integral) +
                          " (lower bound hypothesis violated)");
    return integral;
}

} // namespace anyon
