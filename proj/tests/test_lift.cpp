#include <doctest.h>

#include <vector>

#include "schemekit/hyperbolic_lift.hpp"
#include "test_util.hpp"

using namespace schemekit;

namespace {
const std::vector<Mat2> hyperbolic_samples() {
    return {{2, 1, 1, 1}, {3, -1, 1, 0}, {3, 1, 2, 1}, {3, 2, 1, 1}, {5, 2, 2, 1}, {7, 12, 4, 7}};
}

Word commutator() { return parse_word("x0 x1 x0^-1 x1^-1"); }
}  // namespace

TEST_CASE("lift abelianizes back to the input matrix") {
    for (const auto& m : hyperbolic_samples()) {
        FreeGroupAut t = hyperbolic_lift(m);
        auto ab = abelianization(t);
        CHECK(ab[0][0] == m.a);
        CHECK(ab[0][1] == m.b);
        CHECK(ab[1][0] == m.c);
        CHECK(ab[1][1] == m.d);
    }
}

TEST_CASE("lift fixes the boundary commutator exactly") {
    for (const auto& m : hyperbolic_samples()) {
        FreeGroupAut t = hyperbolic_lift(m);
        CHECK(apply(t, commutator()) == commutator());
    }
}

TEST_CASE("non-hyperbolic seeds are rejected") {
    CHECK_THROWS_AS(hyperbolic_lift(Mat2{1, 1, 0, 1}), NonHyperbolic);   // trace 2
    CHECK_THROWS_AS(hyperbolic_lift(Mat2{1, 0, 0, 1}), NonHyperbolic);   // identity
    CHECK_THROWS_AS(hyperbolic_lift(Mat2{2, 1, 1, 1'000'000}), NonHyperbolic);  // det != 1
}

TEST_CASE("conjugating automorphism is an exact witness between conjugate lifts") {
    Mat2 a{2, 1, 1, 1};
    for (const Mat2& p : {Mat2{1, 1, 0, 1}, Mat2{1, 0, 1, 1}, Mat2{2, 1, 1, 1}}) {
        Mat2 b = mul(mul(p, a), inverse_unimodular(p));
        auto conj = conjugating_automorphism(a, b);
        REQUIRE(conj.has_value());
        std::string diag;
        CHECK(verify_conjugacy(hyperbolic_lift(a), hyperbolic_lift(b), conj->first, conj->second,
                               &diag));
    }
}

TEST_CASE("non-conjugate matrices have no canonical-form witness") {
    CHECK_FALSE(conjugating_automorphism(Mat2{2, 1, 1, 1}, Mat2{3, 1, 2, 1}).has_value());
}

TEST_CASE("word oracle confirms the witness conjugation on short words") {
    Mat2 a{2, 1, 1, 1};
    Mat2 p{1, 1, 0, 1};
    Mat2 b = mul(mul(p, a), inverse_unimodular(p));
    auto conj = conjugating_automorphism(a, b);
    REQUIRE(conj.has_value());
    auto words = testutil::all_words(4);
    CHECK(testutil::conjugacy_oracle(hyperbolic_lift(a), hyperbolic_lift(b), conj->first,
                                     conj->second, words));
}
