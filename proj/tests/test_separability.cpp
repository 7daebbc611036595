#include <doctest.h>

#include "schemekit/separability.hpp"

using namespace schemekit;

namespace {

// A torus attractor whose two boundary-point separatrices land on sources and
// whose closure is carried by trivial saddles/sources (separable model).
struct Model {
    AttractorRecord rec;
    std::vector<BasicSetInfo> roster;
    std::vector<std::string> closure;
    std::vector<SeparatrixEnd> ends;
    IntersectionTable table;
};

Model separable_model() {
    Model m;
    m.rec.id = "Lambda";
    m.rec.kind = BasicSetKind::attractor;
    m.rec.rank = 2;
    m.rec.automorphism = identity_aut(2);
    m.rec.boundary_points = {{"p1", {}}, {"p2", {}}};
    m.roster = {{"Lambda", false, "attractor", 1, 1},
                {"alpha1", true, "source", 1, 0},
                {"alpha2", true, "source", 1, 0},
                {"sigma1", true, "saddle", 1, 0}};
    m.closure = {"sigma1", "alpha1"};
    m.ends = {{"p1", "source", "alpha1"}, {"p2", "source", "alpha2"}};
    return m;
}

IntersectionEntry entry(std::string su, char mu, std::string tu, char ms, bool tangent,
                        std::optional<long long> orbits = 1, int order = 2,
                        std::optional<bool> side = true) {
    IntersectionEntry e;
    e.source = {std::move(su), mu, ""};
    e.target = {std::move(tu), ms, ""};
    e.tangent = tangent;
    e.order = order;
    e.orbit_count = orbits;
    e.side_separation = side;
    return e;
}

}  // namespace

TEST_CASE("separable figure-style data passes all three conditions") {
    Model m = separable_model();
    auto rep = check_separable(m.rec, m.ends, m.table, m.roster, m.closure);
    CHECK(rep.condition1 == Verdict3::pass);
    CHECK(rep.condition2 == Verdict3::pass);
    CHECK(rep.condition3 == Verdict3::pass);
    CHECK(rep.overall() == Verdict3::pass);
}

TEST_CASE("a separatrix landing off a source violates condition 2") {
    Model m = separable_model();
    m.ends[1] = {"p2", "saddle", "sigma1"};
    auto rep = check_separable(m.rec, m.ends, m.table, m.roster, m.closure);
    CHECK(rep.condition2 == Verdict3::fail);
    CHECK(rep.overall() == Verdict3::fail);
    bool cited = false;
    for (const auto& n : rep.notes) cited |= n.find("condition 2") != std::string::npos;
    CHECK(cited);
}

TEST_CASE("non-trivial carriers and heteroclinic points violate conditions 1 and 3") {
    Model m = separable_model();
    m.closure.push_back("Lambda");  // not a trivial saddle/source
    auto rep = check_separable(m.rec, m.ends, m.table, m.roster, m.closure);
    CHECK(rep.condition1 == Verdict3::fail);

    Model h = separable_model();
    h.roster.push_back({"sigma2", true, "saddle", 1, 0});
    h.table.entries.push_back(entry("sigma2", 'u', "sigma1", 's', false));
    rep = check_separable(h.rec, h.ends, h.table, h.roster, h.closure);
    CHECK(rep.condition3 == Verdict3::fail);
}

TEST_CASE("missing data is undetermined, never a silent pass") {
    Model m = separable_model();
    m.ends.pop_back();
    auto rep = check_separable(m.rec, m.ends, m.table, m.roster, m.closure);
    CHECK(rep.condition2 == Verdict3::undetermined);
    CHECK(rep.overall() == Verdict3::undetermined);

    Model n = separable_model();
    n.closure.clear();
    rep = check_separable(n.rec, n.ends, n.table, n.roster, n.closure);
    CHECK(rep.condition1 == Verdict3::undetermined);
}

TEST_CASE("bunch enumeration partitions the boundary points") {
    Model m = separable_model();
    auto bunches = enumerate_bunches(m.rec, {{{"p1", "plus"}, {"p2", "plus"}}});
    REQUIRE(bunches.size() == 1);
    CHECK(bunches[0].degree == 2);

    auto singles = enumerate_bunches(m.rec, {{{"p1", "plus"}}, {{"p2", "plus"}}});
    CHECK(singles.size() == 2);
    CHECK(singles[0].degree + singles[1].degree == 2);

    AttractorRecord four = m.rec;
    four.boundary_points = {{"q1", {}}, {"q2", {}}, {"q3", {}}, {"q4", {}}};
    auto two = enumerate_bunches(four, {{{"q1", "plus"}, {"q2", "plus"}},
                                        {{"q3", "plus"}, {"q4", "plus"}}});
    long long total = 0;
    for (const auto& b : two) total += b.degree;
    CHECK(total == 4);

    CHECK_THROWS_AS(enumerate_bunches(m.rec, {{{"p1", "plus"}}}), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_bunches(m.rec, {{{"ghost", "plus"}}}), std::invalid_argument);
}

TEST_CASE("each finite-moduli criterion is flagged by its own violation") {
    std::vector<BasicSetInfo> roster = {{"Lambda", false, "attractor", 1, 1},
                                        {"p", true, "saddle", 1, 0},
                                        {"q", true, "saddle", 1, 0},
                                        {"r", true, "saddle", 1, 0},
                                        {"s", true, "saddle", 1, 0}};
    // (1) tangency touching a non-trivial set
    {
        IntersectionTable t;
        t.entries.push_back(entry("Lambda", 'u', "q", 's', true));
        CHECK(check_finite_moduli_criteria(t, roster).criteria[1] == Verdict3::fail);
    }
    // (2) infinitely many tangency orbits
    {
        IntersectionTable t;
        t.entries.push_back(entry("p", 'u', "q", 's', true, std::nullopt));
        CHECK(check_finite_moduli_criteria(t, roster).criteria[2] == Verdict3::fail);
    }
    // (3) infinitely many orbits of the tangent manifold on saddle manifolds
    {
        IntersectionTable t;
        t.entries.push_back(entry("p", 'u', "q", 's', true));
        t.entries.push_back(entry("p", 'u', "s", 's', false, std::nullopt));
        CHECK(check_finite_moduli_criteria(t, roster).criteria[3] == Verdict3::fail);
    }
    // (4) declared side-separation failure
    {
        IntersectionTable t;
        t.entries.push_back(entry("p", 'u', "q", 's', true, 1, 2, false));
        CHECK(check_finite_moduli_criteria(t, roster).criteria[4] == Verdict3::fail);
    }
    // (5) tangency chain p -> q -> r flanked by a saddle connection into W^s_p
    {
        IntersectionTable t;
        t.entries.push_back(entry("p", 'u', "q", 's', true));
        t.entries.push_back(entry("q", 'u', "r", 's', true));
        t.entries.push_back(entry("s", 'u', "p", 's', false));
        CHECK(check_finite_moduli_criteria(t, roster).criteria[5] == Verdict3::fail);
    }
    // clean table passes everything
    {
        IntersectionTable t;
        t.entries.push_back(entry("p", 'u', "q", 's', true));
        CHECK(check_finite_moduli_criteria(t, roster).overall() == Verdict3::pass);
    }
    // undeclared side separation: undetermined, not fail
    {
        IntersectionTable t;
        t.entries.push_back(entry("p", 'u', "q", 's', true, 1, 2, std::nullopt));
        auto rep = check_finite_moduli_criteria(t, roster);
        CHECK(rep.criteria[4] == Verdict3::undetermined);
        CHECK(rep.overall() == Verdict3::undetermined);
    }
}

TEST_CASE("facts files parse into the declared structures") {
    std::string text = R"({
      "roster": [
        {"id": "Lambda", "trivial": false, "kind": "attractor", "dimension": 1},
        {"id": "alpha1", "kind": "source"},
        {"id": "sigma1", "kind": "saddle"}
      ],
      "attractor": {
        "id": "Lambda",
        "boundary_points": ["p1", "p2"],
        "closure_complement": ["sigma1", "alpha1"],
        "complement_groups": [[["p1", "plus"], ["p2", "plus"]]]
      },
      "separatrix_ends": [
        {"boundary_point": "p1", "landing": "source", "landing_set": "alpha1"},
        {"boundary_point": "p2", "landing": "source", "landing_set": "alpha1"}
      ],
      "table": [
        {"source": {"set": "sigma1", "manifold": "u"},
         "target": {"set": "Lambda", "manifold": "s"},
         "transversality": "transverse",
         "orbit_count": 1}
      ]
    })";
    SeparabilityFacts f = parse_facts(text);
    CHECK(f.roster.size() == 3);
    CHECK(f.attractor.boundary_points.size() == 2);
    CHECK(f.complement_groups.size() == 1);
    CHECK(f.ends.size() == 2);
    REQUIRE(f.table.entries.size() == 1);
    CHECK(f.table.entries[0].orbit_count == 1);
    auto rep = check_separable(f.attractor, f.ends, f.table, f.roster, f.closure_complement);
    CHECK(rep.overall() == Verdict3::pass);

    CHECK_THROWS_AS(parse_facts("{}"), ParseError);
    CHECK_THROWS_AS(parse_facts("nope"), ParseError);
}

TEST_CASE("adding data moves verdicts out of undetermined, not across pass/fail") {
    Model m = separable_model();
    m.ends.clear();
    auto before = check_separable(m.rec, m.ends, m.table, m.roster, m.closure);
    CHECK(before.condition2 == Verdict3::undetermined);
    m.ends = {{"p1", "source", "alpha1"}, {"p2", "source", "alpha2"}};
    auto after = check_separable(m.rec, m.ends, m.table, m.roster, m.closure);
    CHECK(after.condition2 == Verdict3::pass);
    CHECK(after.condition1 == before.condition1);
    CHECK(after.condition3 == before.condition3);
}
