#pragma once

#include <cmath>

namespace anyon {

/// Neumaier compensated accumulator.
template <typename Scalar>
class CompensatedSum {
public:
    void add(Scalar x) {
        const Scalar t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(Scalar x) {
        add(x);
        return *this;
    }
    Scalar value() const { return sum_ + carry_; }

private:
    Scalar sum_ = 0;
    Scalar carry_ = 0;
};

} // namespace anyon
