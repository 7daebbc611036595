#include <doctest.h>

#include "schemekit/word.hpp"
#include "test_util.hpp"

using namespace schemekit;

TEST_CASE("reduce cancels adjacent inverse pairs") {
    CHECK(reduce(parse_word("x0 x0^-1 x1")) == parse_word("x1"));
    CHECK(reduce(Word{}) == Word{});
    CHECK(reduce(parse_word("x1^-1 x0 x0^-1 x1")) == Word{});
}

TEST_CASE("reduce is idempotent on random words") {
    auto rng = testutil::make_rng(1);
    std::uniform_int_distribution<int> gen(0, 1), exp(-3, 3);
    for (int trial = 0; trial < 200; ++trial) {
        Word w;
        for (int i = 0; i < 8; ++i) w.syl.push_back({gen(rng), exp(rng)});
        Word once = reduce(w);
        CHECK(reduce(once) == once);
    }
}

TEST_CASE("apply with the identity automorphism is the identity") {
    FreeGroupAut id = identity_aut(2);
    Word w = parse_word("x0^2 x1^-1 x0");
    CHECK(apply(id, w) == w);
}

TEST_CASE("compose with identity and the worked two-generator example") {
    FreeGroupAut phi{2, {parse_word("x0 x1"), parse_word("x1")}};
    FreeGroupAut psi{2, {parse_word("x0"), parse_word("x1 x0")}};
    CHECK(compose(phi, identity_aut(2)) == phi);
    CHECK(compose(identity_aut(2), phi) == phi);
    // phi: x -> xy, psi: y -> yx; phi(psi(y)) = phi(y)phi(x) = y x y
    FreeGroupAut c = compose(phi, psi);
    CHECK(c.images[0] == parse_word("x0 x1"));
    CHECK(c.images[1] == parse_word("x1 x0 x1"));
}

TEST_CASE("apply respects concatenation") {
    auto rng = testutil::make_rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        auto [t, ti] = testutil::random_aut2(rng, 4);
        std::uniform_int_distribution<int> gen(0, 1), exp(-2, 2);
        Word u, v;
        for (int i = 0; i < 4; ++i) {
            u.syl.push_back({gen(rng), exp(rng)});
            v.syl.push_back({gen(rng), exp(rng)});
        }
        CHECK(apply(t, concat(u, v)) == concat(apply(t, u), apply(t, v)));
    }
}

TEST_CASE("rank mismatch is rejected") {
    FreeGroupAut t = identity_aut(2);
    CHECK_THROWS_AS(apply(t, parse_word("x2")), RankMismatch);
    CHECK_THROWS_AS(compose(identity_aut(2), identity_aut(3)), RankMismatch);
}

TEST_CASE("abelianization counts signed generator occurrences") {
    // x -> x^2 y, y -> x y
    FreeGroupAut t{2, {parse_word("x0^2 x1"), parse_word("x0 x1")}};
    auto m = abelianization(t);
    CHECK(m == std::vector<std::vector<long long>>{{2, 1}, {1, 1}});
    auto id = abelianization(identity_aut(2));
    CHECK(id == std::vector<std::vector<long long>>{{1, 0}, {0, 1}});
}

TEST_CASE("verify_conjugacy reflexivity and an abelianization obstruction") {
    FreeGroupAut t{2, {parse_word("x0^2 x1"), parse_word("x0 x1")}};
    CHECK(verify_conjugacy(t, t, identity_aut(2), identity_aut(2)));
    // traces 3 vs 4 cannot be conjugate, and the exact check agrees
    FreeGroupAut t4{2, {parse_word("x0^3 x1"), parse_word("x0 x1")}};
    std::string diag;
    CHECK_FALSE(verify_conjugacy(t, t4, identity_aut(2), identity_aut(2), &diag));
    CHECK(!diag.empty());
}

TEST_CASE("verify_conjugacy rejects a one-sided inverse") {
    FreeGroupAut t = identity_aut(2);
    FreeGroupAut not_inverse{2, {parse_word("x0 x1"), parse_word("x1")}};
    std::string diag;
    CHECK_FALSE(verify_conjugacy(t, t, identity_aut(2), not_inverse, &diag));
    CHECK(diag.find("inverse") != std::string::npos);
}

TEST_CASE("word literal grammar round-trips and rejects zero exponents") {
    Word w = parse_word("x0 x1^-1 x0^2");
    CHECK(word_to_string(w) == "x0 x1^-1 x0^2");
    CHECK(parse_word(word_to_string(w)) == w);
    CHECK(parse_word("") == Word{});
    CHECK_THROWS_AS(parse_word("x0^0"), ParseError);
    CHECK_THROWS_AS(parse_word("y0"), ParseError);
    CHECK_THROWS_AS(parse_word("x"), ParseError);
}
