#pragma once
// Separability of one-dimensional attractors and the finite-moduli criteria,
// checked over *declared* combinatorial facts: a roster of basic sets, an
// intersection table, separatrix-end landings, and complement groupings.
// Geometric facts are inputs; this module only checks the logical structure,
// with "undetermined" as a first-class verdict for missing data.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "schemekit/rational.hpp"
#include "schemekit/scheme.hpp"

namespace schemekit {

enum class Verdict3 { pass, fail, undetermined };

inline const char* verdict3_name(Verdict3 v) {
    switch (v) {
        case Verdict3::pass: return "pass";
        case Verdict3::fail: return "fail";
        default: return "undetermined";
    }
}

struct BasicSetInfo {
    std::string id;
    bool trivial = true;                  // periodic orbit
    std::string kind;                     // sink | saddle | source | attractor | repeller
    long long period = 1;                 // for trivial sets
    int dimension = 0;                    // for non-trivial sets
    friend bool operator==(const BasicSetInfo&, const BasicSetInfo&) = default;
};

struct ManifoldRef {
    std::string set;   // basic-set label
    char manifold = 'u';  // 's' or 'u'
    std::string label;    // optional point/separatrix label
    friend bool operator==(const ManifoldRef&, const ManifoldRef&) = default;
};

struct IntersectionEntry {
    ManifoldRef source, target;
    bool tangent = false;
    int order = 0;                        // contact order when tangent; 0 = undeclared
    std::optional<long long> orbit_count; // nullopt = "infinite"
    std::optional<bool> side_separation;  // criterion (4) fact, declared
    friend bool operator==(const IntersectionEntry&, const IntersectionEntry&) = default;
};

struct IntersectionTable {
    std::vector<IntersectionEntry> entries;
    friend bool operator==(const IntersectionTable&, const IntersectionTable&) = default;
};

struct SeparatrixEnd {
    std::string boundary_point;
    std::string landing;      // source | sink | saddle | nontrivial | unknown
    std::string landing_set;  // label when known
    friend bool operator==(const SeparatrixEnd&, const SeparatrixEnd&) = default;
};

struct SeparabilityFacts {
    std::vector<BasicSetInfo> roster;
    AttractorRecord attractor;                         // boundary points + bunches live here
    std::vector<std::string> closure_complement;       // declared cl(W^s) \ W^s carrier set Y
    std::vector<std::vector<BunchMember>> complement_groups;  // separatrix ends per component
    std::vector<SeparatrixEnd> ends;
    IntersectionTable table;
};

struct SeparabilityReport {
    Verdict3 condition1 = Verdict3::undetermined;  // closure carried by trivial saddles/sources
    Verdict3 condition2 = Verdict3::undetermined;  // every free separatrix lands on a source
    Verdict3 condition3 = Verdict3::undetermined;  // no heteroclinic points on W^s of saddles in Y
    std::vector<std::string> notes;

    Verdict3 overall() const {
        for (auto v : {condition1, condition2, condition3})
            if (v == Verdict3::fail) return Verdict3::fail;
        for (auto v : {condition1, condition2, condition3})
            if (v == Verdict3::undetermined) return Verdict3::undetermined;
        return Verdict3::pass;
    }
};

struct CriteriaReport {
    std::map<int, Verdict3> criteria;  // Statement-1 clauses (1)..(5)
    std::vector<std::string> notes;

    Verdict3 overall() const {
        for (const auto& [k, v] : criteria)
            if (v == Verdict3::fail) return Verdict3::fail;
        for (const auto& [k, v] : criteria)
            if (v == Verdict3::undetermined) return Verdict3::undetermined;
        return Verdict3::pass;
    }
};

// One bunch per complement component: its free separatrix ends belong together.
inline std::vector<Bunch> enumerate_bunches(const AttractorRecord& rec,
                                            const std::vector<std::vector<BunchMember>>& groups) {
    std::map<std::string, int> seen;
    for (const auto& bp : rec.boundary_points) seen[bp.id] = 0;
    std::vector<Bunch> out;
    int n = 0;
    for (const auto& group : groups) {
        Bunch b;
        b.id = "bunch" + std::to_string(++n);
        std::set<std::string> distinct;
        for (const auto& mem : group) {
            auto it = seen.find(mem.boundary_point);
            if (it == seen.end())
                throw std::invalid_argument("pairing names unknown boundary point '" +
                                            mem.boundary_point + "'");
            distinct.insert(mem.boundary_point);
            b.members.push_back(mem);
        }
        for (const auto& d : distinct) ++seen[d];
        b.degree = static_cast<long long>(distinct.size());
        out.push_back(b);
    }
    for (const auto& [id, count] : seen)
        if (count != 1)
            throw std::invalid_argument("pairing does not partition boundary points: '" + id +
                                        "' appears in " + std::to_string(count) + " group(s)");
    return out;
}

namespace sep_detail {
inline const BasicSetInfo* find_set(const std::vector<BasicSetInfo>& roster, const std::string& id) {
    for (const auto& b : roster)
        if (b.id == id) return &b;
    return nullptr;
}
}  // namespace sep_detail

inline SeparabilityReport check_separable(const AttractorRecord& rec,
                                          const std::vector<SeparatrixEnd>& ends,
                                          const IntersectionTable& table,
                                          const std::vector<BasicSetInfo>& roster,
                                          const std::vector<std::string>& closure_complement) {
    SeparabilityReport rep;

    // condition 1: the declared closure difference is a union of trivial
    // saddle/source sets
    if (closure_complement.empty()) {
        rep.condition1 = Verdict3::undetermined;
        rep.notes.push_back("condition 1: no closure-difference set declared");
    } else {
        rep.condition1 = Verdict3::pass;
        for (const auto& id : closure_complement) {
            const BasicSetInfo* b = sep_detail::find_set(roster, id);
            if (!b) {
                rep.condition1 = Verdict3::undetermined;
                rep.notes.push_back("condition 1: '" + id + "' missing from the roster");
            } else if (!b->trivial || (b->kind != "saddle" && b->kind != "source")) {
                rep.condition1 = Verdict3::fail;
                rep.notes.push_back("condition 1: '" + id + "' is not a trivial saddle or source");
            }
        }
    }

    // condition 2: every free separatrix of a boundary point lands on a source
    if (rec.boundary_points.empty()) {
        rep.condition2 = Verdict3::pass;
        rep.notes.push_back("condition 2: no boundary points declared (vacuous)");
    } else {
        rep.condition2 = Verdict3::pass;
        for (const auto& bp : rec.boundary_points) {
            const SeparatrixEnd* end = nullptr;
            for (const auto& e : ends)
                if (e.boundary_point == bp.id) end = &e;
            if (!end || end->landing == "unknown") {
                if (rep.condition2 == Verdict3::pass) rep.condition2 = Verdict3::undetermined;
                rep.notes.push_back("condition 2: landing of separatrix of '" + bp.id +
                                    "' is undeclared");
            } else if (end->landing != "source") {
                rep.condition2 = Verdict3::fail;
                rep.notes.push_back("condition 2: separatrix of '" + bp.id + "' lands on a " +
                                    end->landing + ", not a source");
            }
        }
    }

    // condition 3: no saddle carrying the closure has a declared heteroclinic
    // point on its stable manifold
    rep.condition3 = Verdict3::pass;
    std::set<std::string> y_saddles;
    for (const auto& id : closure_complement) {
        const BasicSetInfo* b = sep_detail::find_set(roster, id);
        if (b && b->trivial && b->kind == "saddle") y_saddles.insert(id);
    }
    for (const auto& e : table.entries) {
        auto heteroclinic_on = [&](const ManifoldRef& stable_side, const ManifoldRef& other) {
            if (stable_side.manifold != 's' || other.manifold != 'u') return false;
            if (!y_saddles.count(stable_side.set)) return false;
            const BasicSetInfo* src = sep_detail::find_set(roster, other.set);
            return src && src->trivial && src->kind == "saddle";
        };
        if (heteroclinic_on(e.target, e.source) || heteroclinic_on(e.source, e.target)) {
            rep.condition3 = Verdict3::fail;
            rep.notes.push_back("condition 3: heteroclinic intersection declared on the stable "
                                "manifold of a saddle carrying the closure");
        }
    }
    return rep;
}

inline CriteriaReport check_finite_moduli_criteria(const IntersectionTable& table,
                                                   const std::vector<BasicSetInfo>& roster) {
    CriteriaReport rep;
    for (int k = 1; k <= 5; ++k) rep.criteria[k] = Verdict3::pass;

    auto set_of = [&](const std::string& id) { return sep_detail::find_set(roster, id); };

    std::vector<const IntersectionEntry*> tangencies;
    for (const auto& e : table.entries)
        if (e.tangent) tangencies.push_back(&e);

    // (1) non-transverse intersections only between trivial basic sets
    for (const auto* e : tangencies) {
        const BasicSetInfo* a = set_of(e->source.set);
        const BasicSetInfo* b = set_of(e->target.set);
        if (!a || !b) {
            rep.criteria[1] = Verdict3::undetermined;
            rep.notes.push_back("criterion 1: tangency references sets missing from the roster");
        } else if (!a->trivial || !b->trivial) {
            rep.criteria[1] = Verdict3::fail;
            rep.notes.push_back("criterion 1: tangency between non-trivial basic sets (" +
                                e->source.set + ", " + e->target.set + ")");
        }
    }

    // (2) finitely many orbits of non-transverse intersection, finite contact
    for (const auto* e : tangencies) {
        if (!e->orbit_count) {
            rep.criteria[2] = Verdict3::fail;
            rep.notes.push_back("criterion 2: infinitely many tangency orbits between " +
                                e->source.set + " and " + e->target.set);
        } else if (e->order < 2) {
            rep.criteria[2] = Verdict3::undetermined;
            rep.notes.push_back("criterion 2: tangency between " + e->source.set + " and " +
                                e->target.set + " has no declared finite order");
        }
    }

    // (3) per tangential pair (p, q): only finitely many orbits of W^u_p (resp.
    // W^s_q) lie on invariant manifolds of periodic saddles
    for (const auto* e : tangencies) {
        auto check_side = [&](const ManifoldRef& ref) {
            for (const auto& o : table.entries) {
                bool involves = (o.source.set == ref.set && o.source.manifold == ref.manifold) ||
                                (o.target.set == ref.set && o.target.manifold == ref.manifold);
                if (!involves || &o == e) continue;
                const ManifoldRef& other = (o.source.set == ref.set) ? o.target : o.source;
                const BasicSetInfo* os = set_of(other.set);
                if (os && os->trivial && os->kind == "saddle" && !o.orbit_count) {
                    rep.criteria[3] = Verdict3::fail;
                    rep.notes.push_back("criterion 3: infinitely many orbits of W^" +
                                        std::string(1, ref.manifold) + "_" + ref.set +
                                        " on saddle manifolds of " + other.set);
                }
            }
        };
        check_side(e->source);
        check_side(e->target);
    }

    // (4) declared side-separation flag per tangency (geometric fact)
    for (const auto* e : tangencies) {
        if (!e->side_separation) {
            if (rep.criteria[4] == Verdict3::pass) rep.criteria[4] = Verdict3::undetermined;
            rep.notes.push_back("criterion 4: side separation undeclared for tangency " +
                                e->source.set + " / " + e->target.set);
        } else if (!*e->side_separation) {
            rep.criteria[4] = Verdict3::fail;
            rep.notes.push_back("criterion 4: a complement component of " + e->source.set + " / " +
                                e->target.set + " meets both invariant manifolds");
        }
    }

    // (5) no tangency chains p -> q -> r flanked by saddle connections:
    // no saddle's unstable manifold may meet W^s_p, none's stable manifold W^u_r
    for (const auto* e1 : tangencies)
        for (const auto* e2 : tangencies) {
            // chain: W^u_p tangent W^s_q, then W^u_q tangent W^s_r
            const ManifoldRef* up = nullptr;
            const ManifoldRef* sq = nullptr;
            if (e1->source.manifold == 'u' && e1->target.manifold == 's') {
                up = &e1->source;
                sq = &e1->target;
            } else if (e1->target.manifold == 'u' && e1->source.manifold == 's') {
                up = &e1->target;
                sq = &e1->source;
            } else
                continue;
            const ManifoldRef* uq = nullptr;
            const ManifoldRef* sr = nullptr;
            if (e2->source.manifold == 'u' && e2->target.manifold == 's') {
                uq = &e2->source;
                sr = &e2->target;
            } else if (e2->target.manifold == 'u' && e2->source.manifold == 's') {
                uq = &e2->target;
                sr = &e2->source;
            } else
                continue;
            if (uq->set != sq->set) continue;  // middle set must agree
            const std::string p = up->set, r = sr->set;
            for (const auto& o : table.entries) {
                auto is_saddle = [&](const std::string& id) {
                    const BasicSetInfo* s = set_of(id);
                    return s && s->trivial && s->kind == "saddle";
                };
                auto flank = [&](const ManifoldRef& saddle_side, const ManifoldRef& other) {
                    if (!is_saddle(saddle_side.set) || saddle_side.set == sq->set) return;
                    // saddle unstable manifold meeting W^s_p (head of the chain)
                    if (saddle_side.manifold == 'u' && other.set == p && other.manifold == 's') {
                        rep.criteria[5] = Verdict3::fail;
                        rep.notes.push_back("criterion 5: saddle " + saddle_side.set +
                                            " has unstable manifold meeting W^s_" + p +
                                            " at the head of a tangency chain");
                    }
                    // saddle stable manifold meeting W^u_r (tail of the chain)
                    if (saddle_side.manifold == 's' && other.set == r && other.manifold == 'u') {
                        rep.criteria[5] = Verdict3::fail;
                        rep.notes.push_back("criterion 5: saddle " + saddle_side.set +
                                            " has stable manifold meeting W^u_" + r +
                                            " at the tail of a tangency chain");
                    }
                };
                flank(o.source, o.target);
                flank(o.target, o.source);
            }
        }
    return rep;
}

// ---------- facts file ----------

using FactsJson = nlohmann::ordered_json;

inline SeparabilityFacts parse_facts(const std::string& text) {
    FactsJson j;
    try {
        j = FactsJson::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("facts file: not a well-formed object tree: ") + e.what());
    }
    SeparabilityFacts f;
    if (!j.is_object()) throw ParseError("facts file: expected an object");
    if (auto it = j.find("roster"); it != j.end()) {
        for (const auto& v : *it) {
            BasicSetInfo b;
            b.id = v.at("id").get<std::string>();
            b.trivial = v.value("trivial", true);
            b.kind = v.value("kind", std::string("saddle"));
            b.period = v.value("period", 1LL);
            b.dimension = v.value("dimension", 0);
            f.roster.push_back(b);
        }
    } else
        throw ParseError("facts file: missing section 'roster'");
    if (auto it = j.find("attractor"); it != j.end()) {
        const auto& a = *it;
        f.attractor.id = a.value("id", std::string("attractor"));
        f.attractor.kind = BasicSetKind::attractor;
        f.attractor.rank = 0;  // free-group data is not part of the facts format
        f.attractor.automorphism = identity_aut(0);
        if (auto bp = a.find("boundary_points"); bp != a.end())
            for (const auto& p : *bp) f.attractor.boundary_points.push_back({p.get<std::string>(), {}});
        if (auto cc = a.find("closure_complement"); cc != a.end())
            for (const auto& p : *cc) f.closure_complement.push_back(p.get<std::string>());
        if (auto cg = a.find("complement_groups"); cg != a.end())
            for (const auto& group : *cg) {
                std::vector<BunchMember> members;
                for (const auto& m : group) {
                    if (!m.is_array() || m.size() != 2)
                        throw ParseError("facts file: complement group members are [point, side] pairs");
                    members.push_back({m[0].get<std::string>(), m[1].get<std::string>()});
                }
                f.complement_groups.push_back(members);
            }
    }
    if (auto it = j.find("separatrix_ends"); it != j.end())
        for (const auto& v : *it) {
            SeparatrixEnd e;
            e.boundary_point = v.at("boundary_point").get<std::string>();
            e.landing = v.value("landing", std::string("unknown"));
            e.landing_set = v.value("landing_set", std::string());
            f.ends.push_back(e);
        }
    if (auto it = j.find("table"); it != j.end())
        for (const auto& v : *it) {
            IntersectionEntry e;
            auto read_ref = [](const FactsJson& r, const char* which) {
                ManifoldRef ref;
                ref.set = r.at("set").get<std::string>();
                std::string m = r.at("manifold").get<std::string>();
                if (m != "s" && m != "u")
                    throw ParseError(std::string("facts file: ") + which + " manifold must be 's' or 'u'");
                ref.manifold = m[0];
                ref.label = r.value("label", std::string());
                return ref;
            };
            e.source = read_ref(v.at("source"), "source");
            e.target = read_ref(v.at("target"), "target");
            std::string tv = v.value("transversality", std::string("transverse"));
            if (tv != "transverse" && tv != "tangent")
                throw ParseError("facts file: transversality must be 'transverse' or 'tangent'");
            e.tangent = (tv == "tangent");
            e.order = v.value("order", 0);
            if (auto oc = v.find("orbit_count"); oc != v.end()) {
                if (oc->is_string() && oc->get<std::string>() == "infinite")
                    e.orbit_count = std::nullopt;
                else if (oc->is_number_integer())
                    e.orbit_count = oc->get<long long>();
                else
                    throw ParseError("facts file: orbit_count must be an integer or \"infinite\"");
            } else
                e.orbit_count = std::nullopt;
            if (auto ss = v.find("side_separation"); ss != v.end()) e.side_separation = ss->get<bool>();
            f.table.entries.push_back(e);
        }
    return f;
}

}  // namespace schemekit
