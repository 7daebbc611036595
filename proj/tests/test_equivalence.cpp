#include <doctest.h>

#include "schemekit/equivalence.hpp"
#include "schemekit/fixtures.hpp"

using namespace schemekit;

namespace {

Scheme one_torus(const Mat2& m) {
    Scheme s;
    s.components.push_back({"T1", m, "T1"});
    return s;
}

Certificate torus_cert(const Mat2& p) {
    Certificate c;
    c.component_map["T1"] = "T1";
    c.basis_changes["T1"] = p;
    return c;
}

}  // namespace

TEST_CASE("condition 1: identity, a conjugating P, and a trace obstruction") {
    Mat2 A{2, 1, 1, 1}, Aprime{3, -1, 1, 0}, P{1, 1, 0, 1};
    CHECK(mul(mul(P, A), inverse_unimodular(P)) == Aprime);  // oracle: A' = PAP^-1
    CHECK(check_condition1(one_torus(A), one_torus(A), torus_cert(mat2_identity())).status ==
          CondStatus::pass);
    CHECK(check_condition1(one_torus(A), one_torus(Aprime), torus_cert(P)).status ==
          CondStatus::pass);
    Mat2 trace4{3, 1, 2, 1};
    for (const Mat2& any : {mat2_identity(), P, Mat2{0, 1, 1, 0}})
        CHECK(check_condition1(one_torus(A), one_torus(trace4), torus_cert(any)).status ==
              CondStatus::fail);
}

TEST_CASE("condition 1: permutation intertwining") {
    Scheme s1, s2;
    s1.components.push_back({"X", mat2_identity(), "Y"});
    s1.components.push_back({"Y", mat2_identity(), "X"});
    s2 = s1;
    Certificate c;
    c.component_map = {{"X", "X"}, {"Y", "Y"}};
    c.basis_changes = {{"X", mat2_identity()}, {"Y", mat2_identity()}};
    CHECK(check_condition1(s1, s2, c).status == CondStatus::pass);
    s2.components[0].image_component = "X";  // s2 permutation no longer swaps
    s2.components[1].image_component = "Y";
    CHECK(check_condition1(s1, s2, c).status == CondStatus::fail);
}

TEST_CASE("conditions 2/6: identity case and a component-consistency failure") {
    Scheme s = build_tangency_fixture(2, 2, 0.5, 2.0, 1.0);
    Certificate id = identity_certificate(s);
    CHECK(check_condition2_and_6(s, s, id).status == CondStatus::pass);
    Certificate bad = id;
    bad.curve_map["cs0"] = "cs1";  // cs1 lives in T2, component_map sends T1 to T1
    bad.curve_map["cs1"] = "cs0";
    CHECK(check_condition2_and_6(s, s, bad).status == CondStatus::fail);
}

TEST_CASE("conditions 2/6: homotopy classes must transform by the basis change") {
    Scheme s1 = build_da_scheme({{2, 1, 1, 1}});
    Scheme s2 = build_da_scheme({{3, -1, 1, 0}});
    Certificate c = da_certificate(s1, s2, {2, 1, 1, 1}, {3, -1, 1, 0});
    CHECK(check_condition2_and_6(s1, s2, c).status == CondStatus::pass);
    // an upper-triangular conjugator moves (0,1) off +-(0,1): condition must fail
    Certificate bad = c;
    bad.basis_changes["T1"] = {1, 1, 0, 1};
    CHECK(check_condition2_and_6(s1, s2, bad).status == CondStatus::fail);
}

TEST_CASE("condition 3: log ratios compare per matched family") {
    Scheme a = build_tangency_fixture(2, 1, 0.5, 2.0, 1.0);
    Scheme b = build_tangency_fixture(2, 1, 0.25, 4.0, 1.0);  // ratio -1 as well
    Scheme c = build_tangency_fixture(2, 1, 0.5, 4.0, 1.0);   // ratio -0.5
    Certificate id = identity_certificate(a);
    CHECK(check_condition3(a, b, id, 1e-9).status == CondStatus::pass);
    CHECK(check_condition3(a, c, id, 1e-9).status == CondStatus::fail);
    // tolerance boundary: a relative perturbation below tol passes, above fails
    Scheme nearly = a;
    nearly.tangencies[0].mu = 2.0 * (1.0 + 1e-12);
    CHECK(check_condition3(a, nearly, id, 1e-9).status == CondStatus::pass);
    Scheme off = a;
    off.tangencies[0].mu = 2.0 * (1.0 + 1e-6);
    CHECK(check_condition3(a, off, id, 1e-9).status == CondStatus::fail);
}

TEST_CASE("condition 4a: winding-compensated rescaling passes, bare winding fails") {
    Scheme s1 = build_tangency_fixture(2, 1, 0.5, 2.0, 1.0);
    Certificate id = identity_certificate(s1);
    CHECK(check_condition4a(s1, s1, id, 1e-9).status == CondStatus::pass);

    // tau'_2 scaled by |lambda/mu|^{-1} = 4 with image winding 1: both sides match
    Scheme s2 = s1;
    s2.tangencies[0].points[1].tau *= 4.0;
    s2.windings[0].k = 1;
    CHECK(check_condition4a(s1, s2, id, 1e-9).status == CondStatus::pass);

    // winding 1 with unchanged taus (tau = (1,2)): lhs e, rhs e^-1
    Scheme t1 = s1;
    t1.tangencies[0].points[1].tau = 2.0;
    Scheme t2 = t1;
    t2.windings[0].k = 1;
    auto res = check_condition4a(t1, t2, id, 1e-9);
    CHECK(res.status == CondStatus::fail);
}

TEST_CASE("condition 4b: m is found by search and recorded") {
    Scheme s1 = build_tangency_fixture(2, 2, 0.5, 2.0, 1.0);  // a0 in T1, a1 in T2
    Certificate c = identity_certificate(s1);
    CHECK(check_condition4b(s1, s1, c, 1e-9, 64).status == CondStatus::pass);
    REQUIRE(c.m_values.size() == 1);
    CHECK(c.m_between("a0", "a1") == 0);

    Scheme s2 = s1;
    s2.tangencies[0].points[1].tau *= 1024.0;  // |lambda/mu|^{-5} = 4^5
    Certificate c5 = identity_certificate(s1);
    CHECK(check_condition4b(s1, s2, c5, 1e-9, 64).status == CondStatus::pass);
    CHECK(c5.m_between("a0", "a1") == 5);

    Scheme s3 = s1;
    s3.tangencies[0].points[1].tau *= 3.0;  // 3 is no integer power of 1/4
    Certificate c3 = identity_certificate(s1);
    auto res = check_condition4b(s1, s3, c3, 1e-9, 64);
    CHECK(res.status == CondStatus::fail);

    // a declared wrong m is verified, not silently replaced
    Certificate declared = identity_certificate(s1);
    declared.m_values.push_back({"a0", "a1", 2});
    CHECK(check_condition4b(s1, s1, declared, 1e-9, 64).status == CondStatus::fail);
}

TEST_CASE("condition 5: the integer relation on quadruples") {
    Scheme s = build_tangency_fixture(4, 2, 0.5, 2.0, 1.0);
    // points: a0, a2 in T1; a1, a3 in T2. Windings: k(a0,a2) = 1, k(a1,a3) = 2.
    REQUIRE(s.windings.size() == 2);
    s.windings[0].k = 1;
    s.windings[1].k = 2;
    Certificate c = identity_certificate(s);
    c.m_values = {{"a0", "a1", 3}, {"a0", "a3", 5}, {"a2", "a1", 2}, {"a2", "a3", 4}};
    CHECK(check_condition5(s, s, c).status == CondStatus::pass);
    c.m_values[3].m = 5;  // relation dictates m(a2,a3) = -1 + 3 + 2 = 4
    auto res = check_condition5(s, s, c);
    CHECK(res.status == CondStatus::fail);
}

TEST_CASE("condition 7: rank mismatch and missing psi") {
    Scheme s1 = build_da_scheme({{2, 1, 1, 1}});
    Scheme s2 = s1;
    Certificate id = identity_certificate(s1);
    CHECK(check_condition7(s1, s2, id).status == CondStatus::pass);
    s2.attractors[0].rank = 3;
    s2.attractors[0].automorphism = identity_aut(3);
    CHECK(check_condition7(s1, s2, id).status == CondStatus::fail);
    Certificate empty;  // no attractor maps: skipped, not failed
    CHECK(check_condition7(s1, s1, empty).status == CondStatus::skipped);
}

TEST_CASE("search decides fixtures without attractors and re-verifies its witness") {
    Scheme s = build_tangency_fixture(3, 2, 0.5, 2.0, 1.0, {0, 1, 2});
    Verdict v = schemes_equivalent(s, s, std::nullopt);
    CHECK(v.equivalent);
    CHECK(v.exit_code() == 0);
    REQUIRE(v.witness.has_value());
    CHECK(schemes_equivalent(s, s, v.witness).equivalent);
}

TEST_CASE("search attributes a log-ratio mismatch to condition 3") {
    Scheme a = build_tangency_fixture(2, 1, 0.5, 2.0, 1.0);
    Scheme b = build_tangency_fixture(2, 1, 0.5, 4.0, 1.0);
    Verdict v = schemes_equivalent(a, b, std::nullopt);
    CHECK_FALSE(v.equivalent);
    CHECK(v.exit_code() == 1);
    CHECK(v.per_condition[3].status == CondStatus::fail);
}

TEST_CASE("search on schemes with attractors is inconclusive without psi") {
    Scheme s = build_da_scheme({{2, 1, 1, 1}});
    Verdict v = schemes_equivalent(s, s, std::nullopt);
    CHECK_FALSE(v.equivalent);
    CHECK(v.per_condition[7].status == CondStatus::skipped);
    CHECK(v.exit_code() == 2);
}

TEST_CASE("invalid schemes are rejected before comparison") {
    Scheme s = build_da_scheme({{2, 1, 1, 1}});
    Scheme bad = s;
    bad.k_f = 0;
    CHECK_THROWS_AS(schemes_equivalent(bad, s, std::nullopt), ValidationFailed);
    CHECK_THROWS_AS(schemes_equivalent(s, bad, std::nullopt), ValidationFailed);
}
