#include <doctest.h>

#include <functional>
#include <vector>

#include "generators.hpp"
#include "locc/error.hpp"
#include "locc/schmidt.hpp"

using namespace locc;

namespace {

std::string error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

void check_vec(const SchmidtVector& v, const std::vector<double>& expect) {
    REQUIRE(v.dim() == static_cast<int>(expect.size()));
    for (int i = 0; i < v.dim(); ++i) CHECK(v[i] == doctest::Approx(expect[static_cast<std::size_t>(i)]).epsilon(1e-15));
}

}  // namespace

TEST_CASE("canonicalize sorts, renormalises and clamps") {
    check_vec(canonicalize({0.4, 0.6}), {0.6, 0.4});
    check_vec(canonicalize({1, 0, 0}), {1, 0, 0});
    check_vec(canonicalize({2, 1, 1}), {0.5, 0.25, 0.25});
    check_vec(canonicalize({0.5, -1e-13, 0.5}), {0.5, 0.5, 0.0});
}

TEST_CASE("canonicalize rejects bad input") {
    CHECK(error_code([] { SchmidtVector::canonicalize(std::vector<double>{}); }) == "schmidt.EmptyInput");
    CHECK(error_code([] { canonicalize({0.5, -0.1}); }) == "schmidt.NegativeComponent");
    CHECK(error_code([] { canonicalize({0.0, 0.0}); }) == "schmidt.ZeroSum");
}

TEST_CASE("partial sums") {
    CHECK(canonicalize({0.6, 0.4}).partial_sum(1) == doctest::Approx(0.6));
    CHECK(canonicalize({0.5, 0.25, 0.25}).partial_sum(2) == doctest::Approx(0.75));
    gen::Gen g(11);
    for (int d = 1; d <= 7; ++d) CHECK(g.schmidt(d).partial_sum(d) == 1.0);
    CHECK(error_code([] { canonicalize({0.6, 0.4}).partial_sum(3); }) == "schmidt.IndexOutOfRange");
    CHECK(error_code([] { canonicalize({0.6, 0.4}).partial_sum(0); }) == "schmidt.IndexOutOfRange");
}

TEST_CASE("majorization examples") {
    CHECK(majorizes(canonicalize({0.6, 0.4}), canonicalize({0.5, 0.5})));
    CHECK_FALSE(majorizes(canonicalize({0.5, 0.5}), canonicalize({0.6, 0.4})));
    CHECK(majorizes(canonicalize({0.5, 0.4, 0.1}), canonicalize({0.45, 0.45, 0.1})));
    CHECK(error_code([] { majorizes(canonicalize({0.6, 0.4}), canonicalize({0.5, 0.3, 0.2})); }) ==
          "schmidt.DimensionMismatch");
}

TEST_CASE("lu equivalence and embedding") {
    CHECK(lu_equivalent(canonicalize({0.6, 0.4}), canonicalize({0.4, 0.6})));
    CHECK_FALSE(lu_equivalent(canonicalize({0.6, 0.4}), canonicalize({0.7, 0.3})));
    CHECK_FALSE(lu_equivalent(canonicalize({0.5, 0.5, 0}), canonicalize({0.5, 0.5})));
    check_vec(embed(canonicalize({0.6, 0.4}), 3), {0.6, 0.4, 0.0});
    check_vec(embed(canonicalize({1}), 2), {1.0, 0.0});
    check_vec(embed(canonicalize({0.5, 0.5}), 2), {0.5, 0.5});
    CHECK(error_code([] { embed(canonicalize({0.5, 0.3, 0.2}), 2); }) == "schmidt.ShrinkNotAllowed");
}

TEST_CASE("permutations") {
    auto p = Permutation::identity(4);
    int count = 1;
    while (p.advance()) ++count;
    CHECK(count == 24);
    const auto q = Permutation::from_images({2, 3, 1});
    const auto y = q.apply(std::vector<double>{10, 20, 30});
    CHECK(y == std::vector<double>{30, 10, 20});
    CHECK(q(1) == 2);
    CHECK(error_code([] { Permutation::from_images({1, 1, 2}); }) == "schmidt.InvalidPermutation");
    CHECK(error_code([] { Permutation::from_images({0, 1}); }) == "schmidt.InvalidPermutation");
}

TEST_CASE("majorization properties on random vectors") {
    gen::Gen g(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const int d = g.integer(2, 7);
        const auto a = g.schmidt(d);
        const auto b = g.majorized_by(a);
        const auto c = g.majorized_by(b);
        CHECK(majorizes(a, a));
        CHECK(majorizes(a, b));
        CHECK(majorizes(b, c));
        CHECK(majorizes(a, c));
        if (majorizes(b, a)) CHECK(lu_equivalent(a, b));
        CHECK(majorizes(SchmidtVector::separable(d), a));
        CHECK(majorizes(a, SchmidtVector::maximally_entangled(d)));
        const int k = d + g.integer(0, 3);
        CHECK(majorizes(embed(a, k), embed(b, k)) == majorizes(a, b));
        CHECK(majorizes(embed(b, k), embed(a, k)) == majorizes(b, a));
        const auto again = SchmidtVector::canonicalize(a.vec());
        CHECK(again.vec() == a.vec());
    }
}
