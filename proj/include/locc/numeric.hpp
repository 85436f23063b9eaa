#pragma once

#include <cmath>
#include <cstdint>

namespace locc {

inline constexpr double kEpsNorm = 1e-12;
inline constexpr double kEpsGeom = 1e-9;
inline constexpr double kPi = 3.14159265358979323846;

// Neumaier variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace locc
