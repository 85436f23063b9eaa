#pragma once

#include <optional>
#include <string>

#include "locc/polytope.hpp"

namespace locc {

enum class Quantity { Source, Accessible };

struct MeasureReport {
    Quantity quantity = Quantity::Source;
    double volume = 0.0;      // intrinsic
    int dimension = 0;
    double sup = 1.0;         // normalisation constant
    std::string sup_symbolic; // e.g. "11π/48"; empty when only numeric
    double entanglement = 0.0;
    int family_k = 0;
    Convention frame = Convention::Intrinsic;
    std::optional<double> std_error;  // Monte-Carlo volumes only
};

inline const char* to_string(Quantity q) { return q == Quantity::Source ? "source" : "accessible"; }
inline const char* to_string(Convention c) { return c == Convention::Intrinsic ? "intrinsic" : "projected"; }

}  // namespace locc
