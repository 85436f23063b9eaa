#pragma once

// Independent reference values used by the unit and acceptance tests. They are
// written from the closed forms directly and share no code with the library.

#include <cmath>
#include <functional>
#include <string>

#include "locc/error.hpp"

namespace ref {

inline std::string error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const locc::Error& e) {
        return e.code();
    }
    return "";
}

inline double fact(int n) { return n <= 1 ? 1.0 : n * fact(n - 1); }

// Volume of the sorted region, which is also V_s of a product state.
inline double sorted_region(int d) { return std::sqrt(static_cast<double>(d)) / (fact(d) * fact(d - 1)); }

inline double es_d2(double l1) { return 2.0 * (1.0 - l1); }

inline double es_d3(double l2, double l3) { return 3 * l2 * l2 - 6 * l2 * l3 - 6 * (l3 - 1) * l3; }

inline double va_d3(double l1, double l2, double l3) {
    const double s3 = std::sqrt(3.0);
    if (l1 > 0.5) return s3 * l2 * l3;
    return s3 * (l2 * l3 - 0.25 * (1 - 2 * l1) * (1 - 2 * l1));
}

inline double ea_d3(double l1, double l2, double l3) { return va_d3(l1, l2, l3) / sorted_region(3); }

// Two-level restriction of a three-level accessible set.
inline double va2_d3(double l1) { return l1 > 0.5 ? std::sqrt(2.0) * (1 - l1) : std::sqrt(2.0) / 2; }
inline double ea2_d3(double l1) { return va2_d3(l1) / sorted_region(2); }

inline double es4_d3(double l2, double l3) {
    return 27.0 / 13.0 *
           (2 * l2 * l2 * l2 + 6 * l2 * l2 * l3 + 3 * (3 - 4 * l2) * l3 * l3 - 10 * l3 * l3 * l3);
}

}  // namespace ref
