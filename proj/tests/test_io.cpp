#include <doctest.h>

#include "schemekit/fixtures.hpp"
#include "schemekit/scheme_io.hpp"

using namespace schemekit;

TEST_CASE("scheme files round-trip structurally and byte-stably") {
    for (const Scheme& s : {build_da_scheme({{2, 1, 1, 1}}),
                            build_da_scheme({{3, 1, 2, 1}, 2.5, 0.25, 4.0}),
                            build_tangency_fixture(4, 2, 0.5, 2.0, 1.0, {0, 1, 2, 3})}) {
        std::string text = serialize_scheme(s);
        Scheme back = parse_scheme(text);
        CHECK(back == s);
        CHECK(serialize_scheme(back) == text);
    }
}

TEST_CASE("truncated scheme files name the missing section") {
    Json j = scheme_to_json(build_da_scheme({{2, 1, 1, 1}}));
    j.erase("windings");
    try {
        scheme_from_json(j);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("missing section 'windings'") != std::string::npos);
    }
}

TEST_CASE("duplicate ids are rejected at parse time") {
    Json j = scheme_to_json(build_da_scheme({{2, 1, 1, 1}, 1.0, 0.5, 2.0}));
    j["s_curves"].push_back(j["s_curves"][0]);
    try {
        scheme_from_json(j);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("duplicate id") != std::string::npos);
    }
}

TEST_CASE("malformed documents raise ParseError with locations") {
    CHECK_THROWS_AS(parse_scheme("not json"), ParseError);
    CHECK_THROWS_AS(parse_scheme("[1,2,3]"), ParseError);
    Json j = scheme_to_json(build_da_scheme({{2, 1, 1, 1}}));
    j["components"][0]["action_matrix"] = "oops";
    CHECK_THROWS_AS(scheme_from_json(j), ParseError);
}

TEST_CASE("certificate files round-trip") {
    Scheme s = build_da_scheme({{2, 1, 1, 1}, 1.0, 0.5, 2.0});
    Certificate c = identity_certificate(s);
    c.m_values.push_back({"a1", "a1b", 3});
    std::string text = serialize_certificate(c);
    Certificate back = parse_certificate(text);
    CHECK(back == c);
    CHECK(serialize_certificate(back) == text);
}

TEST_CASE("mapspec files round-trip and check references") {
    MapSpec ms;
    ms.saddles.push_back({"s1", 1, Rational(2), Rational(1, 2)});
    ms.saddles.push_back({"s2", 2, Rational(3), Rational(1, 3)});
    TransitionMap g;
    g.id = "g1";
    g.source = "s1";
    g.target = "s2";
    g.xi.c = {{Rational(0), Rational(1)}};
    g.eta.c = {{Rational(0), Rational(0), Rational(5)}, {Rational(3)}};
    g.a_x = Rational(1, 4);
    g.a_y = Rational(-2, 3);
    ms.transitions.push_back(g);
    ms.tangency_points.push_back({"g1", Rational(1, 4), Rational(0), true});
    std::string text = serialize_mapspec(ms);
    MapSpec back = parse_mapspec(text);
    CHECK(back == ms);
    CHECK(serialize_mapspec(back) == text);

    Json j = mapspec_to_json(ms);
    j["transitions"][0]["source"] = "ghost";
    CHECK_THROWS_AS(parse_mapspec(j.dump()), ParseError);
    Json bad = mapspec_to_json(ms);
    bad["saddles"][0]["lambda"] = "2";  // violates |lambda| < 1
    CHECK_THROWS_AS(parse_mapspec(bad.dump()), ParseError);
}

TEST_CASE("rational literal syntax") {
    CHECK(parse_rational("3.25") == Rational(13, 4));
    CHECK(parse_rational("-2.5e-2") == Rational(-1, 40));
    CHECK(parse_rational("7/3") == Rational(7, 3));
    CHECK(rational_to_string(Rational(13, 4)) == "3.25");
    CHECK(rational_to_string(Rational(7, 3)) == "7/3");
    CHECK(parse_rational(rational_to_string(Rational(-9, 20))) == Rational(-9, 20));
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
}
