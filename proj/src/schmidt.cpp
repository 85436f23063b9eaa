#include "locc/schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <string>

#include "locc/error.hpp"
#include "locc/numeric.hpp"

namespace locc {

SchmidtVector SchmidtVector::canonicalize(std::span<const double> raw) {
    if (raw.empty()) throw Error("schmidt.EmptyInput", "Schmidt vector has no components");
    std::vector<double> c(raw.begin(), raw.end());
    double total = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!std::isfinite(c[i]))
            throw Error("schmidt.NegativeComponent",
                        "component " + std::to_string(i + 1) + " is not finite");
        if (c[i] < -kEpsNorm)
            throw Error("schmidt.NegativeComponent",
                        "component " + std::to_string(i + 1) + " is negative");
        if (c[i] < 0.0) c[i] = 0.0;
        total += c[i];
    }
    if (!(total > 0.0)) throw Error("schmidt.ZeroSum", "Schmidt vector sums to zero");
    // A vector that already sums to one up to rounding is left untouched so a
    // second pass returns identical bits.
    const double slack = 4.0 * static_cast<double>(c.size()) * std::numeric_limits<double>::epsilon();
    if (std::abs(total - 1.0) > slack)
        for (double& x : c) x /= total;
    std::stable_sort(c.begin(), c.end(), std::greater<double>());
    return SchmidtVector(std::move(c));
}

SchmidtVector SchmidtVector::separable(int d) {
    if (d < 1) throw Error("schmidt.EmptyInput", "dimension must be positive");
    std::vector<double> c(static_cast<std::size_t>(d), 0.0);
    c[0] = 1.0;
    return SchmidtVector(std::move(c));
}

SchmidtVector SchmidtVector::maximally_entangled(int d) {
    if (d < 1) throw Error("schmidt.EmptyInput", "dimension must be positive");
    return SchmidtVector(std::vector<double>(static_cast<std::size_t>(d), 1.0 / d));
}

double SchmidtVector::partial_sum(int k) const {
    if (k < 1 || k > dim())
        throw Error("schmidt.IndexOutOfRange",
                    "partial sum index " + std::to_string(k) + " outside 1.." +
                        std::to_string(dim()));
    if (k == dim()) return 1.0;
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += c_[static_cast<std::size_t>(i)];
    return s;
}

bool majorizes(const SchmidtVector& a, const SchmidtVector& b) {
    if (a.dim() != b.dim())
        throw Error("schmidt.DimensionMismatch", "majorization needs equal dimensions (" +
                                                     std::to_string(a.dim()) + " vs " +
                                                     std::to_string(b.dim()) + ")");
    double ea = 0.0, eb = 0.0;
    for (int k = 0; k + 1 < a.dim(); ++k) {
        ea += a[k];
        eb += b[k];
        if (eb > ea + kEpsNorm) return false;
    }
    return true;
}

bool lu_equivalent(const SchmidtVector& a, const SchmidtVector& b) {
    if (a.dim() != b.dim()) return false;
    for (int i = 0; i < a.dim(); ++i)
        if (std::fabs(a[i] - b[i]) > kEpsNorm) return false;
    return true;
}

SchmidtVector embed(const SchmidtVector& lambda, int k) {
    if (k < lambda.dim())
        throw Error("schmidt.ShrinkNotAllowed", "cannot embed dimension " +
                                                    std::to_string(lambda.dim()) + " into " +
                                                    std::to_string(k));
    std::vector<double> c = lambda.vec();
    c.resize(static_cast<std::size_t>(k), 0.0);
    return SchmidtVector(std::move(c));
}

Permutation Permutation::identity(int d) {
    std::vector<int> img(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) img[static_cast<std::size_t>(i)] = i + 1;
    return Permutation(std::move(img));
}

Permutation Permutation::from_images(std::vector<int> one_based) {
    const int d = static_cast<int>(one_based.size());
    std::vector<bool> seen(static_cast<std::size_t>(d), false);
    for (int v : one_based) {
        if (v < 1 || v > d || seen[static_cast<std::size_t>(v - 1)])
            throw Error("schmidt.InvalidPermutation", "images must be a bijection on 1..d");
        seen[static_cast<std::size_t>(v - 1)] = true;
    }
    return Permutation(std::move(one_based));
}

bool Permutation::advance() { return std::next_permutation(img_.begin(), img_.end()); }

std::vector<double> Permutation::apply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != size())
        throw Error("schmidt.DimensionMismatch", "permutation and vector sizes differ");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[static_cast<std::size_t>(img_[i] - 1)] = x[i];
    return out;
}

}  // namespace locc
