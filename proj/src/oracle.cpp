#include "locc/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "locc/bipartite.hpp"
#include "locc/error.hpp"
#include "locc/numeric.hpp"
#include "locc/rng.hpp"

namespace locc {

namespace {

constexpr std::uint64_t kChunk = 1 << 14;

void check_config(const McConfig& cfg) {
    if (cfg.samples < kMinMcSamples)
        throw Error("oracle.TooFewSamples", "need at least " + std::to_string(kMinMcSamples) + " samples");
}

// Per-chunk hit counts are summed in chunk order, so the total never depends
// on how chunks were distributed over threads.
template <class Trial>
std::uint64_t count_hits(const McConfig& cfg, const Trial& trial) {
    const std::uint64_t chunks = (cfg.samples + kChunk - 1) / kChunk;
    std::vector<std::uint64_t> per_chunk(chunks, 0);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t c = next++; c < chunks; c = next++) {
            const std::uint64_t end = std::min(cfg.samples, (c + 1) * kChunk);
            std::uint64_t hits = 0;
            for (std::uint64_t i = c * kChunk; i < end; ++i) {
                SampleStream rng(cfg.seed, i);
                if (trial(rng)) ++hits;
            }
            per_chunk[c] = hits;
        }
    };
    unsigned n = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
    n = std::max(1u, std::min<unsigned>(n, static_cast<unsigned>(chunks)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    std::uint64_t total = 0;
    for (auto h : per_chunk) total += h;
    return total;
}

McEstimate finish(std::uint64_t hits, double scale, const McConfig& cfg) {
    const double n = static_cast<double>(cfg.samples);
    const double p = static_cast<double>(hits) / n;
    return McEstimate{scale * p, scale * std::sqrt(p * (1.0 - p) / n), hits, cfg.samples, cfg.seed};
}

// Sorted uniform point of the simplex, written as partial sums.
void sorted_partial_sums(SampleStream& rng, std::vector<double>& x) {
    double total = 0.0;
    for (double& v : x) total += v = rng.exponential();
    std::sort(x.begin(), x.end(), std::greater<>());
    double acc = 0.0;
    for (double& v : x) v = (acc += v / total);
}

template <class Compare>
McEstimate sorted_region_estimate(const SchmidtVector& lambda, const McConfig& cfg, Compare cmp) {
    check_config(cfg);
    const int d = lambda.dim();
    if (d < 2) throw Error("oracle.DimensionTooSmall", "need d >= 2");
    std::vector<double> target(static_cast<std::size_t>(d));
    for (int k = 1; k <= d; ++k) target[static_cast<std::size_t>(k - 1)] = lambda.partial_sum(k);
    const auto trial = [&](SampleStream& rng) {
        std::vector<double> x(static_cast<std::size_t>(d));
        sorted_partial_sums(rng, x);
        for (int k = 0; k + 1 < d; ++k)
            if (!cmp(x[static_cast<std::size_t>(k)], target[static_cast<std::size_t>(k)])) return false;
        return true;
    };
    double scale = sorted_region_volume(d);
    if (cfg.convention == Convention::Projected) scale /= std::sqrt(static_cast<double>(d));
    return finish(count_hits(cfg, trial), scale, cfg);
}

}  // namespace

double Box::volume() const {
    if (lower.size() != upper.size()) throw Error("oracle.InvalidBox", "bounds differ in length");
    double v = 1.0;
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
        if (!(upper(i) >= lower(i))) throw Error("oracle.InvalidBox", "upper bound below lower bound");
        v *= upper(i) - lower(i);
    }
    return v;
}

McEstimate mc_source_volume(const SchmidtVector& lambda, const McConfig& cfg) {
    return sorted_region_estimate(lambda, cfg, [](double sample, double target) { return sample <= target + kEpsNorm; });
}

McEstimate mc_accessible_volume(const SchmidtVector& lambda, const McConfig& cfg) {
    return sorted_region_estimate(lambda, cfg, [](double sample, double target) { return sample + kEpsNorm >= target; });
}

McEstimate mc_region_volume(const Membership& inside, const Box& box, const McConfig& cfg) {
    check_config(cfg);
    const double vol = box.volume();
    const Eigen::Index n = box.lower.size();
    const Eigen::VectorXd width = box.upper - box.lower;
    const auto trial = [&](SampleStream& rng) {
        Eigen::VectorXd p(n);
        for (Eigen::Index i = 0; i < n; ++i) p(i) = box.lower(i) + width(i) * rng.uniform();
        return inside(p);
    };
    return finish(count_hits(cfg, trial), vol, cfg);
}

}  // namespace locc
