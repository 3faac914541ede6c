#ifndef ROTSUM_DETAIL_KAHAN_HPP
#define ROTSUM_DETAIL_KAHAN_HPP

#include <cmath>

namespace rotsum::detail {

// Kahan–Neumaier compensated accumulator.
struct Kahan {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

} // namespace rotsum::detail

#endif
