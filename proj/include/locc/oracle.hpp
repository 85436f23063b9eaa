#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "locc/polytope.hpp"
#include "locc/schmidt.hpp"

namespace locc {

inline constexpr std::uint64_t kDefaultMcSeed = 0x10CC5EEDull;
inline constexpr std::uint64_t kMinMcSamples = 1000;

struct McConfig {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = kDefaultMcSeed;
    Convention convention = Convention::Intrinsic;
    int threads = 0;  // 0: hardware concurrency
};

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

struct Box {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    double volume() const;
};

using Membership = std::function<bool(const Eigen::VectorXd&)>;

// Uniform on the sorted region; counts samples majorized by lambda.
McEstimate mc_source_volume(const SchmidtVector& lambda, const McConfig& cfg);
// Same sampler; counts samples that majorize lambda.
McEstimate mc_accessible_volume(const SchmidtVector& lambda, const McConfig& cfg);
// Box volume times hit fraction. The predicate may be called concurrently.
McEstimate mc_region_volume(const Membership& inside, const Box& box, const McConfig& cfg);

}  // namespace locc
