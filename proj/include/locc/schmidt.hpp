#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace locc {

// Sorted probability vector labelling the LU class of a bipartite pure state.
// Only constructible through canonicalize() or the named factories, so every
// instance is non-increasing, non-negative and sums to one.
class SchmidtVector {
public:
    static SchmidtVector canonicalize(std::span<const double> raw);
    static SchmidtVector separable(int d);
    static SchmidtVector maximally_entangled(int d);

    int dim() const { return static_cast<int>(c_.size()); }
    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    std::span<const double> components() const { return c_; }
    const std::vector<double>& vec() const { return c_; }

    // E_k, 1-based k.
    double partial_sum(int k) const;

private:
    explicit SchmidtVector(std::vector<double> c) : c_(std::move(c)) {}
    std::vector<double> c_;

    friend SchmidtVector embed(const SchmidtVector&, int);
};

inline SchmidtVector canonicalize(std::initializer_list<double> raw) {
    return SchmidtVector::canonicalize(std::span<const double>(raw.begin(), raw.size()));
}

// True iff b is majorized by a, i.e. E_k(b) <= E_k(a) for every k < d.
// Equivalently: a state with Schmidt vector b can be converted into a by LOCC.
bool majorizes(const SchmidtVector& a, const SchmidtVector& b);

bool lu_equivalent(const SchmidtVector& a, const SchmidtVector& b);

// Pads with k - d zeros.
SchmidtVector embed(const SchmidtVector& lambda, int k);

// A permutation of {1..d}, stored as the images sigma(1..d).
class Permutation {
public:
    static Permutation identity(int d);
    static Permutation from_images(std::vector<int> one_based);

    int size() const { return static_cast<int>(img_.size()); }
    int operator()(int i) const { return img_[static_cast<std::size_t>(i - 1)]; }
    const std::vector<int>& images() const { return img_; }

    // Steps to the lexicographic successor; false after the last permutation.
    bool advance();

    // (P_sigma x)_{sigma(i)} = x_i
    std::vector<double> apply(std::span<const double> x) const;

private:
    explicit Permutation(std::vector<int> img) : img_(std::move(img)) {}
    std::vector<int> img_;
};

}  // namespace locc
