#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "anyon/errors.hpp"

namespace anyon {

/// Exchange-statistics parameter; 0 is the boson limit, admissible range [0, 1/2).
template <typename Scalar>
class AlphaParam {
public:
    constexpr AlphaParam() = default;
    explicit AlphaParam(Scalar alpha) : alpha_(alpha) {
        if (!(alpha >= Scalar(0) && alpha < Scalar(0.5)))
            throw ConfigError("alpha must lie in [0, 1/2), got " + std::to_string(alpha));
    }

    Scalar value() const { return alpha_; }
    bool boson() const { return alpha_ == Scalar(0); }
    /// Occupancy ceiling 1/alpha (infinite for bosons).
    Scalar ceiling() const {
        return boson() ? std::numeric_limits<Scalar>::infinity() : Scalar(1) / alpha_;
    }

private:
    Scalar alpha_ = 0;
};

/// F_alpha(f) = (1 - alpha f)^alpha (1 + (1 - alpha) f)^(1 - alpha) for a raw
/// alpha in [0, 1]; exactly 1 + f at alpha = 0.
template <typename Scalar>
Scalar filling_factor(Scalar alpha, Scalar f) {
    if (!(alpha >= Scalar(0) && alpha <= Scalar(1))) throw DomainError("filling_factor: alpha outside [0, 1]");
    if (!(f >= Scalar(0))) throw DomainError("filling_factor: negative occupation");
    if (alpha == Scalar(0)) return Scalar(1) + f;
    if (!(alpha * f < Scalar(1)))
        throw DomainError("filling_factor: occupation " + std::to_string(f) + " reaches the ceiling 1/alpha");
    return std::pow(Scalar(1) - alpha * f, alpha) * std::pow(Scalar(1) + (Scalar(1) - alpha) * f, Scalar(1) - alpha);
}

template <typename Scalar>
Scalar filling_factor(AlphaParam<Scalar> alpha, Scalar f) {
    return filling_factor(alpha.value(), f);
}

/// Closed-form maximum of F_alpha over [0, 1/alpha), alpha in (0, 1/2).
template <typename Scalar>
Scalar filling_factor_max(Scalar alpha) {
    return std::pow(Scalar(1) / alpha - Scalar(1), Scalar(1) - Scalar(2) * alpha);
}

/// Location of that maximum: f* = (1 - 2 alpha) / (alpha (1 - alpha)).
template <typename Scalar>
Scalar filling_factor_argmax(Scalar alpha) {
    return (Scalar(1) - Scalar(2) * alpha) / (alpha * (Scalar(1) - alpha));
}

} // namespace anyon
