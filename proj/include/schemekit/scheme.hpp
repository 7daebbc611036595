#pragma once
// The scheme of an Omega-stable surface diffeomorphism with one-dimensional
// basic sets: torus components of the wandering orbit space with their
// homotopy actions, separatrix and boundary curve families, tangency families
// with their moduli, path windings, and attractor records with the free-group
// data needed for the conjugacy condition.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "schemekit/mat2.hpp"
#include "schemekit/word.hpp"

namespace schemekit {

struct TorusComponent {
    std::string id;
    Mat2 action_matrix;           // homotopy action of the induced map
    std::string image_component;  // where the induced map sends this torus
    friend bool operator==(const TorusComponent&, const TorusComponent&) = default;
};

enum class CurveKind { stable, unstable };

struct SeparatrixCurve {
    std::string id;
    CurveKind kind = CurveKind::stable;
    std::string saddle;     // saddle-orbit label
    std::string component;  // torus it lies in
    long long p = 0, q = 1;  // homotopy class
    std::string partner;    // the second circle of the same pair
    friend bool operator==(const SeparatrixCurve&, const SeparatrixCurve&) = default;
};

struct BoundaryCurve {
    std::string id;
    std::string attractor;
    std::string boundary_point;
    std::string component;
    long long p = 0, q = 1;
    friend bool operator==(const BoundaryCurve&, const BoundaryCurve&) = default;
};

struct TangencyPoint {
    std::string id;
    std::string component;
    std::string host_curve;  // s-curve the point sits on
    double tau = 1.0;        // signed modulus
    int order = 2;           // finite contact order, >= 2 for a genuine tangency
    friend bool operator==(const TangencyPoint&, const TangencyPoint&) = default;
};

struct TangencyFamily {
    std::string id;
    std::string saddle_s, saddle_u;
    double lambda = 0.5, mu = 2.0;
    std::vector<TangencyPoint> points;
    friend bool operator==(const TangencyFamily&, const TangencyFamily&) = default;
};

struct PathWinding {
    std::string from_point, to_point;
    long long k = 0;
    friend bool operator==(const PathWinding&, const PathWinding&) = default;
};

struct BoundaryPointRecord {
    std::string id;
    std::vector<std::string> curves;  // BoundaryCurve ids of this point's curve
    friend bool operator==(const BoundaryPointRecord&, const BoundaryPointRecord&) = default;
};

struct BunchMember {
    std::string boundary_point;
    std::string side;  // separatrix side marker, e.g. "plus"/"minus"
    friend bool operator==(const BunchMember&, const BunchMember&) = default;
};

struct Bunch {
    std::string id;
    std::vector<BunchMember> members;  // one cyclic sequence
    long long degree = 1;
    friend bool operator==(const Bunch&, const Bunch&) = default;
};

enum class BasicSetKind { attractor, repeller };

struct AttractorRecord {
    std::string id;
    BasicSetKind kind = BasicSetKind::attractor;
    long long num_periodic_components = 1;  // k_Lambda
    int rank = 1;
    FreeGroupAut automorphism;  // T acting on the rank-generator free group
    std::vector<BoundaryPointRecord> boundary_points;
    std::vector<Bunch> bunches;
    friend bool operator==(const AttractorRecord&, const AttractorRecord&) = default;
};

struct Scheme {
    std::vector<TorusComponent> components;
    std::vector<SeparatrixCurve> s_curves, u_curves;
    std::vector<BoundaryCurve> s_boundary, u_boundary;
    std::vector<TangencyFamily> tangencies;
    std::vector<PathWinding> windings;
    std::vector<AttractorRecord> attractors;
    long long k_f = 1;
    friend bool operator==(const Scheme&, const Scheme&) = default;
};

struct ValidationReport {
    // each entry: path to the offending field + what is violated
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

namespace detail {
inline long long gcd_ll(long long a, long long b) {
    a = std::abs(a);
    b = std::abs(b);
    while (b) { long long t = a % b; a = b; b = t; }
    return a;
}
}  // namespace detail

// Lookup helpers used across modules. Missing ids return nullptr.
struct SchemeIndex {
    std::map<std::string, const TorusComponent*> components;
    std::map<std::string, const SeparatrixCurve*> curves;        // s and u together
    std::map<std::string, const BoundaryCurve*> boundary;        // s and u together
    std::map<std::string, const TangencyFamily*> families;
    std::map<std::string, std::pair<const TangencyFamily*, const TangencyPoint*>> points;
    std::map<std::string, const AttractorRecord*> attractors;
    std::map<std::pair<std::string, std::string>, long long> winding;  // directed lookup

    explicit SchemeIndex(const Scheme& s) {
        for (const auto& c : s.components) components.emplace(c.id, &c);
        for (const auto& c : s.s_curves) curves.emplace(c.id, &c);
        for (const auto& c : s.u_curves) curves.emplace(c.id, &c);
        for (const auto& c : s.s_boundary) boundary.emplace(c.id, &c);
        for (const auto& c : s.u_boundary) boundary.emplace(c.id, &c);
        for (const auto& fam : s.tangencies) {
            families.emplace(fam.id, &fam);
            for (const auto& pt : fam.points) points.emplace(pt.id, std::make_pair(&fam, &pt));
        }
        for (const auto& a : s.attractors) attractors.emplace(a.id, &a);
        for (const auto& w : s.windings) winding[{w.from_point, w.to_point}] = w.k;
    }

    // Winding of the canonical path between two points, using antisymmetry for
    // reversed entries and k(p, p) = 0. nullopt when the table has no entry.
    std::optional<long long> winding_between(const std::string& a, const std::string& b) const {
        if (a == b) return 0;
        if (auto it = winding.find({a, b}); it != winding.end()) return it->second;
        if (auto it = winding.find({b, a}); it != winding.end()) return -it->second;
        return std::nullopt;
    }
};

inline ValidationReport validate_scheme(const Scheme& s) {
    ValidationReport rep;
    auto add = [&](const std::string& path, const std::string& what) {
        rep.violations.push_back(path + ": " + what);
    };
    SchemeIndex ix(s);

    if (s.k_f < 1) add("k_f", "must be a positive integer");

    std::map<std::string, int> image_count;
    for (const auto& c : s.components) {
        if (!is_unimodular(c.action_matrix))
            add("components/" + c.id + "/action_matrix", "determinant must be +1 or -1");
        if (!ix.components.count(c.image_component))
            add("components/" + c.id + "/image_component", "unresolved component '" + c.image_component + "'");
        else
            ++image_count[c.image_component];
    }
    for (const auto& [id, n] : image_count)
        if (n > 1) add("components/" + id, "image assignment is not a permutation (hit " +
                                               std::to_string(n) + " times)");

    auto check_primitive = [&](const std::string& path, long long p, long long q) {
        if (p == 0 && q == 0) add(path, "homotopy class (0,0) is contractible");
        else if (detail::gcd_ll(p, q) != 1) add(path, "homotopy class must be primitive (gcd 1)");
    };

    auto check_curves = [&](const std::vector<SeparatrixCurve>& curves, CurveKind kind,
                            const std::string& section) {
        for (const auto& c : curves) {
            std::string path = section + "/" + c.id;
            if (c.kind != kind) add(path + "/kind", "curve listed under the wrong family");
            check_primitive(path + "/homotopy_class", c.p, c.q);
            if (!ix.components.count(c.component))
                add(path + "/component", "unresolved component '" + c.component + "'");
            auto pit = ix.curves.find(c.partner);
            if (pit == ix.curves.end())
                add(path + "/partner", "unresolved curve '" + c.partner + "'");
            else {
                if (pit->second->partner != c.id) add(path + "/partner", "partner link is not symmetric");
                if (pit->second->saddle != c.saddle) add(path + "/partner", "partner has a different saddle label");
                if (pit->second->kind != c.kind) add(path + "/partner", "partner has a different kind");
            }
        }
    };
    check_curves(s.s_curves, CurveKind::stable, "s_curves");
    check_curves(s.u_curves, CurveKind::unstable, "u_curves");

    auto check_boundary = [&](const std::vector<BoundaryCurve>& curves, BasicSetKind want,
                              const std::string& section) {
        for (const auto& c : curves) {
            std::string path = section + "/" + c.id;
            check_primitive(path + "/homotopy_class", c.p, c.q);
            if (!ix.components.count(c.component))
                add(path + "/component", "unresolved component '" + c.component + "'");
            auto ait = ix.attractors.find(c.attractor);
            if (ait == ix.attractors.end()) {
                add(path + "/attractor", "unresolved attractor '" + c.attractor + "'");
                continue;
            }
            if (ait->second->kind != want)
                add(path + "/attractor", section == "s_boundary"
                                             ? "s-boundary curves belong to attractors"
                                             : "u-boundary curves belong to repellers");
            bool found = false;
            for (const auto& bp : ait->second->boundary_points)
                if (bp.id == c.boundary_point) {
                    found = true;
                    if (std::find(bp.curves.begin(), bp.curves.end(), c.id) == bp.curves.end())
                        add(path + "/boundary_point", "point '" + bp.id + "' does not list this curve");
                }
            if (!found)
                add(path + "/boundary_point",
                    "point '" + c.boundary_point + "' not in attractor '" + c.attractor + "'");
        }
    };
    check_boundary(s.s_boundary, BasicSetKind::attractor, "s_boundary");
    check_boundary(s.u_boundary, BasicSetKind::repeller, "u_boundary");

    for (const auto& fam : s.tangencies) {
        std::string fpath = "tangencies/" + fam.id;
        if (!(std::abs(fam.lambda) > 0 && std::abs(fam.lambda) < 1 && std::abs(fam.mu) > 1))
            add(fpath, "eigenvalues must satisfy 0 < |lambda| < 1 < |mu|");
        for (const auto& pt : fam.points) {
            std::string ppath = fpath + "/points/" + pt.id;
            if (pt.tau == 0.0) add(ppath + "/tau", "modulus must be nonzero");
            if (pt.order < 2) add(ppath + "/order", "contact order must be >= 2 (1 marks a transverse point)");
            if (!ix.components.count(pt.component))
                add(ppath + "/component", "unresolved component '" + pt.component + "'");
            auto hit = ix.curves.find(pt.host_curve);
            if (hit == ix.curves.end())
                add(ppath + "/host_curve", "unresolved curve '" + pt.host_curve + "'");
            else {
                if (hit->second->kind != CurveKind::stable)
                    add(ppath + "/host_curve", "host must be an s-curve");
                if (hit->second->saddle != fam.saddle_s)
                    add(ppath + "/host_curve", "host saddle differs from the family's saddle_s");
                if (hit->second->component != pt.component)
                    add(ppath + "/component", "point and host curve lie in different components");
            }
        }
    }

    for (const auto& w : s.windings) {
        std::string wpath = "windings/" + w.from_point + "->" + w.to_point;
        auto a = ix.points.find(w.from_point), b = ix.points.find(w.to_point);
        if (a == ix.points.end()) add(wpath, "unresolved point '" + w.from_point + "'");
        if (b == ix.points.end()) add(wpath, "unresolved point '" + w.to_point + "'");
        if (a != ix.points.end() && b != ix.points.end() &&
            a->second.second->component != b->second.second->component)
            add(wpath, "canonical paths connect points of one component");
        if (w.from_point == w.to_point && w.k != 0) add(wpath, "k(p, p) must be 0");
        if (auto rev = ix.winding.find({w.to_point, w.from_point});
            w.from_point != w.to_point && rev != ix.winding.end() && rev->second != -w.k)
            add(wpath, "stored reverse orientation breaks antisymmetry");
    }

    for (const auto& a : s.attractors) {
        std::string apath = "attractors/" + a.id;
        if (a.num_periodic_components < 1) add(apath + "/num_periodic_components", "must be positive");
        if (a.rank < 1) add(apath + "/rank", "must be positive");
        if (a.automorphism.rank != a.rank ||
            (int)a.automorphism.images.size() != a.rank)
            add(apath + "/automorphism", "must be defined on exactly `rank` generators");
        for (const auto& img : a.automorphism.images)
            for (const auto& syl : img.syl)
                if (syl.gen < 0 || syl.gen >= a.rank)
                    add(apath + "/automorphism", "image uses a generator outside the rank");
        std::map<std::string, int> seen;
        for (const auto& bunch : a.bunches) {
            std::set<std::string> distinct;
            for (const auto& mem : bunch.members) {
                distinct.insert(mem.boundary_point);
                bool known = false;
                for (const auto& bp : a.boundary_points) known |= (bp.id == mem.boundary_point);
                if (!known)
                    add(apath + "/bunches/" + bunch.id,
                        "member '" + mem.boundary_point + "' is not a declared boundary point");
            }
            for (const auto& d : distinct) ++seen[d];
            if ((long long)distinct.size() != bunch.degree)
                add(apath + "/bunches/" + bunch.id, "degree does not match distinct member count");
        }
        for (const auto& bp : a.boundary_points) {
            if (seen[bp.id] != 1)
                add(apath + "/boundary_points/" + bp.id, "must appear in exactly one bunch");
            for (const auto& cid : bp.curves) {
                auto cit = ix.boundary.find(cid);
                if (cit == ix.boundary.end())
                    add(apath + "/boundary_points/" + bp.id, "unresolved boundary curve '" + cid + "'");
                else if (cit->second->attractor != a.id || cit->second->boundary_point != bp.id)
                    add(apath + "/boundary_points/" + bp.id,
                        "curve '" + cid + "' does not link back to this point");
            }
        }
    }

    std::sort(rep.violations.begin(), rep.violations.end());
    return rep;
}

}  // namespace schemekit
