#pragma once
// Decides (or certificate-verifies) equivalence of two schemes, condition by
// condition:
//   1  component bijection intertwines the induced permutations and conjugates
//      the homotopy actions by unimodular basis changes,
//   2  curve families correspond (kind, component, saddle pairing, homotopy up
//      to sign under the basis change),
//   3  log ratios ln|lambda|/ln|mu| agree per matched tangency family,
//   4  modulus relations for same-component (4a) and cross-component (4b)
//      point pairs, the latter with integer exponents m,
//   5  the linear relation tying the m's to image-path windings,
//   6  boundary curve families correspond (grouped by attractor),
//   7  free-group automorphisms of matched attractors are conjugate by the
//      certified psi, consistently with the boundary data.
// Verification is sound; search without a certificate is complete only within
// the configured bounds, and condition 7 is never searched.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "schemekit/certificate.hpp"
#include "schemekit/mat2.hpp"
#include "schemekit/moduli.hpp"
#include "schemekit/scheme.hpp"

namespace schemekit {

struct ValidationFailed : std::runtime_error {
    ValidationReport report;
    explicit ValidationFailed(std::string which, ValidationReport rep)
        : std::runtime_error(which + " failed validation (" + std::to_string(rep.violations.size()) +
                             " violation(s), first: " +
                             (rep.violations.empty() ? std::string("?") : rep.violations.front()) + ")"),
          report(std::move(rep)) {}
};

enum class CondStatus { pass, fail, skipped };

struct ConditionResult {
    CondStatus status = CondStatus::pass;
    std::vector<std::string> diagnostics;

    void fail(const std::string& why) {
        status = CondStatus::fail;
        diagnostics.push_back(why);
    }
    void skip(const std::string& why) {
        if (status != CondStatus::fail) status = CondStatus::skipped;
        diagnostics.push_back(why);
    }
    void note(const std::string& what) { diagnostics.push_back(what); }
};

struct EquivalenceOptions {
    long long matrix_bound = 10;
    long long m_bound = 64;
    double tol = 1e-9;
};

struct Verdict {
    bool equivalent = false;
    std::map<int, ConditionResult> per_condition;  // keys 1..7
    std::optional<Certificate> witness;

    // 0 equivalent, 1 not equivalent, 2 inconclusive (certificate needed)
    int exit_code() const {
        if (equivalent) return 0;
        for (const auto& [id, res] : per_condition)
            if (res.status == CondStatus::fail) return 1;
        return 2;
    }
};

namespace eq_detail {

inline std::optional<std::string> mapped(const std::map<std::string, std::string>& m,
                                         const std::string& key) {
    auto it = m.find(key);
    if (it == m.end()) return std::nullopt;
    return it->second;
}

inline bool bijective_onto(const std::map<std::string, std::string>& m,
                           const std::set<std::string>& domain, const std::set<std::string>& codomain,
                           ConditionResult& res, const std::string& what) {
    bool ok = true;
    std::set<std::string> hit;
    for (const auto& d : domain)
        if (!m.count(d)) {
            res.fail(what + " does not cover '" + d + "'");
            ok = false;
        }
    for (const auto& [k, v] : m) {
        if (!domain.count(k)) {
            res.fail(what + " has spurious source '" + k + "'");
            ok = false;
        }
        if (!codomain.count(v)) {
            res.fail(what + " targets unknown label '" + v + "'");
            ok = false;
        }
        if (!hit.insert(v).second) {
            res.fail(what + " is not injective at '" + v + "'");
            ok = false;
        }
    }
    if (domain.size() != codomain.size()) {
        res.fail(what + ": domain and codomain sizes differ (" + std::to_string(domain.size()) + " vs " +
                 std::to_string(codomain.size()) + ")");
        ok = false;
    }
    return ok;
}

}  // namespace eq_detail

// Condition 1: beta . pi = pi' . beta and P_{pi(i)} A_i = A'_{beta(i)} P_i, det P_i = ±1.
inline ConditionResult check_condition1(const Scheme& s1, const Scheme& s2, const Certificate& cert) {
    ConditionResult res;
    SchemeIndex i1(s1), i2(s2);
    std::set<std::string> dom, cod;
    for (const auto& c : s1.components) dom.insert(c.id);
    for (const auto& c : s2.components) cod.insert(c.id);
    if (!eq_detail::bijective_onto(cert.component_map, dom, cod, res, "component_map")) return res;
    for (const auto& c : s1.components) {
        const std::string& img = cert.component_map.at(c.id);
        const TorusComponent* c2 = i2.components.at(img);
        // intertwining of the induced permutations
        const std::string& via1 = cert.component_map.at(c.image_component);
        if (via1 != c2->image_component) {
            res.fail("component permutations do not intertwine at '" + c.id + "' (beta(pi(i)) = " + via1 +
                     ", pi'(beta(i)) = " + c2->image_component + ")");
            continue;
        }
        auto P = cert.basis_changes.find(c.id);
        auto Pnext = cert.basis_changes.find(c.image_component);
        if (P == cert.basis_changes.end() || Pnext == cert.basis_changes.end()) {
            res.fail("missing basis change for component '" + c.id + "' or its image");
            continue;
        }
        if (!is_unimodular(P->second)) {
            res.fail("basis change for '" + c.id + "' has determinant " + std::to_string(det(P->second)));
            continue;
        }
        Mat2 lhs = mul(Pnext->second, c.action_matrix);
        Mat2 rhs = mul(c2->action_matrix, P->second);
        if (!(lhs == rhs))
            res.fail("P_{pi(i)} A_i != A'_{beta(i)} P_i at component '" + c.id + "': " +
                     mat2_to_string(lhs) + " vs " + mat2_to_string(rhs));
    }
    return res;
}

// Conditions 2 and 6 together: curve and boundary-curve bijections.
inline ConditionResult check_condition2_and_6(const Scheme& s1, const Scheme& s2,
                                              const Certificate& cert) {
    ConditionResult res;
    SchemeIndex i1(s1), i2(s2);

    auto homotopy_ok = [&](const std::string& comp, long long p, long long q, long long p2,
                           long long q2) {
        auto P = cert.basis_changes.find(comp);
        if (P == cert.basis_changes.end()) return false;
        auto [tp, tq] = apply(P->second, p, q);
        return (tp == p2 && tq == q2) || (tp == -p2 && tq == -q2);
    };

    {  // separatrix curves
        std::set<std::string> dom, cod;
        for (const auto& c : s1.s_curves) dom.insert(c.id);
        for (const auto& c : s1.u_curves) dom.insert(c.id);
        for (const auto& c : s2.s_curves) cod.insert(c.id);
        for (const auto& c : s2.u_curves) cod.insert(c.id);
        if (!eq_detail::bijective_onto(cert.curve_map, dom, cod, res, "curve_map")) return res;
        std::map<std::string, std::string> saddle_map;
        std::set<std::string> saddle_hit;
        for (const auto& [id, cptr] : i1.curves) {
            const SeparatrixCurve& c = *cptr;
            const SeparatrixCurve& c2 = *i2.curves.at(cert.curve_map.at(id));
            if (c.kind != c2.kind) res.fail("curve '" + id + "' changes kind under the map");
            auto comp_img = eq_detail::mapped(cert.component_map, c.component);
            if (!comp_img || *comp_img != c2.component)
                res.fail("curve '" + id + "' lands in component '" + c2.component +
                         "', component_map dictates '" + comp_img.value_or("?") + "'");
            if (!homotopy_ok(c.component, c.p, c.q, c2.p, c2.q))
                res.fail("curve '" + id + "': homotopy class does not transform by the basis change");
            auto pit = cert.curve_map.find(c.partner);
            if (pit == cert.curve_map.end() || pit->second != c2.partner)
                res.fail("curve '" + id + "': partner is not mapped to the image's partner");
            auto [sit, fresh] = saddle_map.emplace(c.saddle, c2.saddle);
            if (!fresh && sit->second != c2.saddle)
                res.fail("saddle '" + c.saddle + "' pairs with both '" + sit->second + "' and '" +
                         c2.saddle + "'");
            if (fresh && !saddle_hit.insert(c2.saddle).second)
                res.fail("saddle pairing is not injective at '" + c2.saddle + "'");
        }
    }

    {  // boundary curves
        std::set<std::string> dom, cod;
        std::set<std::string> dom_s, cod_s;
        for (const auto& c : s1.s_boundary) { dom.insert(c.id); dom_s.insert(c.id); }
        for (const auto& c : s1.u_boundary) dom.insert(c.id);
        for (const auto& c : s2.s_boundary) { cod.insert(c.id); cod_s.insert(c.id); }
        for (const auto& c : s2.u_boundary) cod.insert(c.id);
        if (!eq_detail::bijective_onto(cert.boundary_curve_map, dom, cod, res, "boundary_curve_map"))
            return res;
        std::map<std::string, std::string> att_map;
        std::set<std::string> att_hit;
        for (const auto& [id, cptr] : i1.boundary) {
            const BoundaryCurve& c = *cptr;
            const BoundaryCurve& c2 = *i2.boundary.at(cert.boundary_curve_map.at(id));
            if (dom_s.count(id) != cod_s.count(c2.id))
                res.fail("boundary curve '" + id + "' changes kind under the map");
            auto comp_img = eq_detail::mapped(cert.component_map, c.component);
            if (!comp_img || *comp_img != c2.component)
                res.fail("boundary curve '" + id + "' violates the component correspondence");
            if (!homotopy_ok(c.component, c.p, c.q, c2.p, c2.q))
                res.fail("boundary curve '" + id +
                         "': homotopy class does not transform by the basis change");
            auto [ait, fresh] = att_map.emplace(c.attractor, c2.attractor);
            if (!fresh && ait->second != c2.attractor)
                res.fail("attractor '" + c.attractor + "' pairs with both '" + ait->second + "' and '" +
                         c2.attractor + "'");
            if (fresh && !att_hit.insert(c2.attractor).second)
                res.fail("attractor grouping is not injective at '" + c2.attractor + "'");
        }
    }
    return res;
}

// Condition 3: tangency family bijection preserves ln|lambda|/ln|mu|, and the
// point bijection respects family membership.
inline ConditionResult check_condition3(const Scheme& s1, const Scheme& s2, const Certificate& cert,
                                        double tol) {
    ConditionResult res;
    SchemeIndex i1(s1), i2(s2);
    std::set<std::string> dom, cod;
    for (const auto& f : s1.tangencies) dom.insert(f.id);
    for (const auto& f : s2.tangencies) cod.insert(f.id);
    if (!eq_detail::bijective_onto(cert.tangency_map, dom, cod, res, "tangency_map")) return res;
    std::set<std::string> pdom, pcod;
    for (const auto& f : s1.tangencies)
        for (const auto& p : f.points) pdom.insert(p.id);
    for (const auto& f : s2.tangencies)
        for (const auto& p : f.points) pcod.insert(p.id);
    if (!eq_detail::bijective_onto(cert.point_map, pdom, pcod, res, "point_map")) return res;
    for (const auto& f : s1.tangencies) {
        const TangencyFamily& f2 = *i2.families.at(cert.tangency_map.at(f.id));
        double r1 = log_ratio(f.lambda, f.mu), r2 = log_ratio(f2.lambda, f2.mu);
        if (!rel_equal(r1, r2, tol))
            res.fail("family '" + f.id + "': log ratio " + format_real(r1) + " vs " + format_real(r2) +
                     " for its image '" + f2.id + "'");
        if (f.points.size() != f2.points.size())
            res.fail("family '" + f.id + "': point counts differ from image family");
        for (const auto& p : f.points) {
            auto img = eq_detail::mapped(cert.point_map, p.id);
            if (!img || i2.points.at(*img).first->id != f2.id)
                res.fail("point '" + p.id + "' is not mapped into the image family '" + f2.id + "'");
        }
    }
    return res;
}

// Condition 4a: same-component pairs;
// |tau2/tau1|^{1/ln|mu|} = (|lambda'/mu'|^{k'} |tau'2/tau'1|)^{1/ln|mu'|},
// k' the winding of the image path, read from the target scheme.
inline ConditionResult check_condition4a(const Scheme& s1, const Scheme& s2, const Certificate& cert,
                                         double tol) {
    ConditionResult res;
    SchemeIndex i1(s1), i2(s2);
    for (const auto& f : s1.tangencies) {
        auto fimg = eq_detail::mapped(cert.tangency_map, f.id);
        if (!fimg || !i2.families.count(*fimg)) {
            res.fail("family '" + f.id + "' has no image family");
            continue;
        }
        const TangencyFamily& f2 = *i2.families.at(*fimg);
        for (size_t i = 0; i < f.points.size(); ++i)
            for (size_t j = i + 1; j < f.points.size(); ++j) {
                const TangencyPoint &a1 = f.points[i], &a2 = f.points[j];
                if (a1.component != a2.component) continue;
                auto b1 = eq_detail::mapped(cert.point_map, a1.id);
                auto b2 = eq_detail::mapped(cert.point_map, a2.id);
                if (!b1 || !b2 || !i2.points.count(*b1) || !i2.points.count(*b2)) {
                    res.fail("pair (" + a1.id + ", " + a2.id + "): unmapped points");
                    continue;
                }
                auto k = i2.winding_between(*b1, *b2);
                if (!k) {
                    res.fail("pair (" + a1.id + ", " + a2.id + "): target scheme lacks the winding of (" +
                             *b1 + ", " + *b2 + ")");
                    continue;
                }
                const TangencyPoint& q1 = *i2.points.at(*b1).second;
                const TangencyPoint& q2 = *i2.points.at(*b2).second;
                double L = std::log(std::abs(a2.tau / a1.tau)) / std::log(std::abs(f.mu));
                double R = (static_cast<double>(*k) * std::log(std::abs(f2.lambda / f2.mu)) +
                            std::log(std::abs(q2.tau / q1.tau))) /
                           std::log(std::abs(f2.mu));
                if (!pow_equal(L, R, tol))
                    res.fail("pair (" + a1.id + ", " + a2.id + "): modulus relation fails, lhs = " +
                             format_real(std::exp(L)) + ", rhs = " + format_real(std::exp(R)));
            }
    }
    return res;
}

// Condition 4b: cross-component pairs; exists integer m with
// (tau2/tau1)^{1/ln|mu|} = (|lambda'/mu'|^m tau'2/tau'1)^{1/ln|mu'|}.
// Declared m's are verified; missing ones are searched in [-m_bound, m_bound]
// and recorded into the working certificate.
inline ConditionResult check_condition4b(const Scheme& s1, const Scheme& s2, Certificate& cert,
                                         double tol, long long m_bound) {
    ConditionResult res;
    SchemeIndex i1(s1), i2(s2);
    for (const auto& f : s1.tangencies) {
        auto fimg = eq_detail::mapped(cert.tangency_map, f.id);
        if (!fimg || !i2.families.count(*fimg)) {
            res.fail("family '" + f.id + "' has no image family");
            continue;
        }
        const TangencyFamily& f2 = *i2.families.at(*fimg);
        for (size_t i = 0; i < f.points.size(); ++i)
            for (size_t j = i + 1; j < f.points.size(); ++j) {
                const TangencyPoint &a1 = f.points[i], &a2 = f.points[j];
                if (a1.component == a2.component) continue;
                auto b1 = eq_detail::mapped(cert.point_map, a1.id);
                auto b2 = eq_detail::mapped(cert.point_map, a2.id);
                if (!b1 || !b2 || !i2.points.count(*b1) || !i2.points.count(*b2)) {
                    res.fail("pair (" + a1.id + ", " + a2.id + "): unmapped points");
                    continue;
                }
                const TangencyPoint& q1 = *i2.points.at(*b1).second;
                const TangencyPoint& q2 = *i2.points.at(*b2).second;
                double r1 = a2.tau / a1.tau, r2 = q2.tau / q1.tau;
                if ((r1 > 0) != (r2 > 0)) {
                    res.fail("pair (" + a1.id + ", " + a2.id + "): signed tau ratios disagree");
                    continue;
                }
                double L = std::log(std::abs(r1)) / std::log(std::abs(f.mu));
                double step = std::log(std::abs(f2.lambda / f2.mu));
                double base = std::log(std::abs(r2));
                double lmu2 = std::log(std::abs(f2.mu));
                auto fits = [&](long long m) {
                    return pow_equal(L, (static_cast<double>(m) * step + base) / lmu2, tol);
                };
                if (auto given = cert.m_between(a1.id, a2.id)) {
                    if (!fits(*given))
                        res.fail("pair (" + a1.id + ", " + a2.id + "): declared m = " +
                                 std::to_string(*given) + " does not satisfy the relation");
                    continue;
                }
                std::optional<long long> found;
                for (long long mm = 0; mm <= m_bound && !found; ++mm) {
                    if (fits(mm)) found = mm;
                    else if (mm > 0 && fits(-mm)) found = -mm;
                }
                if (!found) {
                    res.fail("pair (" + a1.id + ", " + a2.id + "): no m in bound " +
                             std::to_string(m_bound));
                    continue;
                }
                cert.m_values.push_back({a1.id, a2.id, *found});
            }
    }
    return res;
}

// Condition 5: m_{b1,b2} = -k'(a1,b1) + m_{a1,a2} + k'(a2,b2) exactly, over all
// quadruples with a1, b1 in one component and a2, b2 in another.
inline ConditionResult check_condition5(const Scheme& s1, const Scheme& s2, const Certificate& cert) {
    ConditionResult res;
    SchemeIndex i1(s1), i2(s2);
    struct CrossPair {
        const TangencyPoint *p1, *p2;  // ordered by component label
        std::string family;
    };
    std::vector<CrossPair> pairs;
    for (const auto& f : s1.tangencies)
        for (size_t i = 0; i < f.points.size(); ++i)
            for (size_t j = i + 1; j < f.points.size(); ++j) {
                const TangencyPoint &x = f.points[i], &y = f.points[j];
                if (x.component == y.component) continue;
                if (x.component < y.component) pairs.push_back({&x, &y, f.id});
                else pairs.push_back({&y, &x, f.id});
            }
    for (size_t a = 0; a < pairs.size(); ++a)
        for (size_t b = 0; b < pairs.size(); ++b) {
            if (a == b) continue;
            const CrossPair &pa = pairs[a], &pb = pairs[b];
            if (pa.p1->component != pb.p1->component || pa.p2->component != pb.p2->component) continue;
            auto ma = cert.m_between(pa.p1->id, pa.p2->id);
            auto mb = cert.m_between(pb.p1->id, pb.p2->id);
            if (!ma || !mb) {
                res.fail("missing m value for pair (" + pa.p1->id + ", " + pa.p2->id + ") or (" +
                         pb.p1->id + ", " + pb.p2->id + ")");
                continue;
            }
            auto img = [&](const std::string& p) { return eq_detail::mapped(cert.point_map, p); };
            auto ia1 = img(pa.p1->id), ia2 = img(pa.p2->id), ib1 = img(pb.p1->id), ib2 = img(pb.p2->id);
            if (!ia1 || !ia2 || !ib1 || !ib2) {
                res.fail("quadruple with unmapped points near (" + pa.p1->id + ", " + pb.p1->id + ")");
                continue;
            }
            auto k1 = i2.winding_between(*ia1, *ib1);
            auto k2 = i2.winding_between(*ia2, *ib2);
            if (!k1 || !k2) {
                res.fail("target scheme lacks windings for image quadruple (" + *ia1 + "," + *ib1 +
                         ") / (" + *ia2 + "," + *ib2 + ")");
                continue;
            }
            if (*mb != -*k1 + *ma + *k2)
                res.fail("quadruple (" + pa.p1->id + "," + pa.p2->id + ";" + pb.p1->id + "," +
                         pb.p2->id + "): m = " + std::to_string(*mb) + ", relation gives " +
                         std::to_string(-*k1 + *ma + *k2));
        }
    return res;
}

// Condition 7: matched attractors have conjugate free-group automorphisms via
// the certified psi, matching k_Lambda, and the boundary-point bijection agrees
// with the boundary-curve bijection.
inline ConditionResult check_condition7(const Scheme& s1, const Scheme& s2, const Certificate& cert) {
    ConditionResult res;
    SchemeIndex i1(s1), i2(s2);
    if (s1.attractors.empty() && s2.attractors.empty()) {
        res.note("no attractor records; condition holds vacuously");
        return res;
    }
    if (cert.attractor_maps.empty()) {
        res.skip("certificate carries no attractor maps (psi needed)");
        return res;
    }
    std::set<std::string> covered, hit;
    for (const auto& am : cert.attractor_maps) {
        auto a1 = i1.attractors.find(am.from);
        auto a2 = i2.attractors.find(am.to);
        if (a1 == i1.attractors.end() || a2 == i2.attractors.end()) {
            res.fail("attractor map " + am.from + " -> " + am.to + " references unknown records");
            continue;
        }
        if (!covered.insert(am.from).second || !hit.insert(am.to).second) {
            res.fail("attractor pairing is not a bijection at " + am.from + " -> " + am.to);
            continue;
        }
        const AttractorRecord &A = *a1->second, &B = *a2->second;
        if (A.kind != B.kind) res.fail("attractor '" + A.id + "' pairs across kinds");
        if (A.num_periodic_components != B.num_periodic_components)
            res.fail("attractor '" + A.id + "': k_Lambda " + std::to_string(A.num_periodic_components) +
                     " vs " + std::to_string(B.num_periodic_components));
        if (A.rank != B.rank) {
            res.fail("attractor '" + A.id + "': rank " + std::to_string(A.rank) + " vs " +
                     std::to_string(B.rank));
            continue;
        }
        std::string diag;
        if (!verify_conjugacy(A.automorphism, B.automorphism, am.psi, am.psi_inv, &diag))
            res.fail("attractor '" + A.id + "': " + diag);
        std::set<std::string> dom, cod;
        for (const auto& bp : A.boundary_points) dom.insert(bp.id);
        for (const auto& bp : B.boundary_points) cod.insert(bp.id);
        eq_detail::bijective_onto(am.boundary_point_map, dom, cod, res,
                                  "boundary_point_map of '" + A.id + "'");
        // boundary curves must follow the point bijection
        for (const auto& [cid, cptr] : i1.boundary) {
            if (cptr->attractor != A.id) continue;
            auto cimg = eq_detail::mapped(cert.boundary_curve_map, cid);
            if (!cimg || !i2.boundary.count(*cimg)) {
                res.fail("boundary curve '" + cid + "' of '" + A.id + "' has no image");
                continue;
            }
            const BoundaryCurve& c2 = *i2.boundary.at(*cimg);
            auto pimg = eq_detail::mapped(am.boundary_point_map, cptr->boundary_point);
            if (c2.attractor != B.id || !pimg || c2.boundary_point != *pimg)
                res.fail("boundary curve '" + cid + "' does not follow the boundary-point bijection");
        }
    }
    for (const auto& a : s1.attractors)
        if (!covered.count(a.id)) res.fail("attractor '" + a.id + "' is not covered by the certificate");
    for (const auto& a : s2.attractors)
        if (!hit.count(a.id)) res.fail("target attractor '" + a.id + "' is not matched");
    return res;
}

namespace eq_detail {

inline Verdict verify_with_certificate(const Scheme& s1, const Scheme& s2, Certificate cert,
                                       const EquivalenceOptions& opts) {
    Verdict v;
    v.per_condition[1] = check_condition1(s1, s2, cert);
    auto c26 = check_condition2_and_6(s1, s2, cert);
    v.per_condition[2] = c26;
    v.per_condition[6] = c26;
    v.per_condition[3] = check_condition3(s1, s2, cert, opts.tol);
    ConditionResult c4 = check_condition4a(s1, s2, cert, opts.tol);
    {
        ConditionResult c4b = check_condition4b(s1, s2, cert, opts.tol, opts.m_bound);
        if (c4b.status == CondStatus::fail) c4.status = CondStatus::fail;
        for (auto& d : c4b.diagnostics) c4.diagnostics.push_back(d);
    }
    v.per_condition[4] = c4;
    v.per_condition[5] = check_condition5(s1, s2, cert);
    v.per_condition[7] = check_condition7(s1, s2, cert);
    v.equivalent = true;
    for (const auto& [id, res] : v.per_condition)
        if (res.status != CondStatus::pass) v.equivalent = false;
    v.witness = std::move(cert);
    return v;
}

// Bounded certificate search: components, then curves, boundary curves,
// tangency families/points; sorted iteration everywhere, first witness wins.
struct Searcher {
    const Scheme& s1;
    const Scheme& s2;
    const EquivalenceOptions& opts;
    SchemeIndex i1, i2;
    int deepest_stage = 0;  // 1 components .. 5 moduli
    std::string block_reason;

    Searcher(const Scheme& a, const Scheme& b, const EquivalenceOptions& o)
        : s1(a), s2(b), opts(o), i1(a), i2(b) {}

    void reached(int stage, const std::string& why) {
        if (stage > deepest_stage) {
            deepest_stage = stage;
            block_reason = why;
        }
    }

    std::optional<Certificate> run() {
        std::vector<std::string> ids1, ids2;
        for (const auto& c : s1.components) ids1.push_back(c.id);
        for (const auto& c : s2.components) ids2.push_back(c.id);
        std::sort(ids1.begin(), ids1.end());
        std::sort(ids2.begin(), ids2.end());
        if (ids1.size() != ids2.size()) {
            reached(1, "component counts differ");
            return std::nullopt;
        }
        std::vector<size_t> perm(ids2.size());
        for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        do {
            Certificate cert;
            for (size_t i = 0; i < ids1.size(); ++i) cert.component_map[ids1[i]] = ids2[perm[i]];
            if (!assign_bases(cert)) continue;
            if (check_condition1(s1, s2, cert).status != CondStatus::pass) {
                reached(1, "no component bijection conjugates the homotopy actions in bound " +
                               std::to_string(opts.matrix_bound));
                continue;
            }
            reached(2, "components matched but curve families do not correspond");
            if (auto done = match_curves(cert)) return done;
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (deepest_stage == 0) reached(1, "no intertwining component bijection");
        return std::nullopt;
    }

    // Free P on one representative per permutation cycle, found as a bounded
    // GL(2,Z) conjugator of the cycle products, then propagated.
    bool assign_bases(Certificate& cert) {
        std::set<std::string> done;
        for (const auto& c : s1.components) {
            if (done.count(c.id)) continue;
            std::vector<const TorusComponent*> cycle;
            const TorusComponent* cur = i1.components.at(c.id);
            while (!done.count(cur->id)) {
                done.insert(cur->id);
                cycle.push_back(cur);
                cur = i1.components.at(cur->image_component);
            }
            Mat2 prod1 = mat2_identity(), prod2 = mat2_identity();
            for (const auto* m : cycle) {
                prod1 = mul(m->action_matrix, prod1);
                prod2 = mul(i2.components.at(cert.component_map.at(m->id))->action_matrix, prod2);
            }
            auto P0 = search_gl2z_conjugator(prod1, prod2, opts.matrix_bound);
            if (!P0) return false;
            Mat2 P = *P0;
            for (const auto* m : cycle) {
                cert.basis_changes[m->id] = P;
                P = mul(mul(i2.components.at(cert.component_map.at(m->id))->action_matrix, P),
                        inverse_unimodular(m->action_matrix));
            }
        }
        return true;
    }

    std::optional<Certificate> match_curves(Certificate& cert) {
        std::vector<const SeparatrixCurve*> dom;
        for (const auto& c : s1.s_curves) dom.push_back(&c);
        for (const auto& c : s1.u_curves) dom.push_back(&c);
        std::sort(dom.begin(), dom.end(),
                  [](const auto* a, const auto* b) { return a->id < b->id; });
        std::vector<const SeparatrixCurve*> cod;
        for (const auto& c : s2.s_curves) cod.push_back(&c);
        for (const auto& c : s2.u_curves) cod.push_back(&c);
        std::sort(cod.begin(), cod.end(),
                  [](const auto* a, const auto* b) { return a->id < b->id; });
        if (dom.size() != cod.size()) return std::nullopt;
        std::set<std::string> used;
        std::map<std::string, std::string> saddle_map;
        std::set<std::string> saddle_used;
        return curve_step(cert, dom, cod, 0, used, saddle_map, saddle_used);
    }

    bool homotopy_ok(const Certificate& cert, const std::string& comp, long long p, long long q,
                     long long p2, long long q2) {
        auto it = cert.basis_changes.find(comp);
        if (it == cert.basis_changes.end()) return false;
        auto [tp, tq] = apply(it->second, p, q);
        return (tp == p2 && tq == q2) || (tp == -p2 && tq == -q2);
    }

    std::optional<Certificate> curve_step(Certificate& cert,
                                          const std::vector<const SeparatrixCurve*>& dom,
                                          const std::vector<const SeparatrixCurve*>& cod, size_t idx,
                                          std::set<std::string>& used,
                                          std::map<std::string, std::string>& saddle_map,
                                          std::set<std::string>& saddle_used) {
        if (idx == dom.size()) {
            reached(3, "curves matched but boundary families do not correspond");
            return match_boundary(cert);
        }
        const SeparatrixCurve& c = *dom[idx];
        for (const auto* cand : cod) {
            if (used.count(cand->id)) continue;
            if (cand->kind != c.kind) continue;
            if (cert.component_map.at(c.component) != cand->component) continue;
            if (!homotopy_ok(cert, c.component, c.p, c.q, cand->p, cand->q)) continue;
            auto sit = saddle_map.find(c.saddle);
            bool fresh_saddle = sit == saddle_map.end();
            if (!fresh_saddle && sit->second != cand->saddle) continue;
            if (fresh_saddle && saddle_used.count(cand->saddle)) continue;
            if (auto pit = cert.curve_map.find(c.partner); pit != cert.curve_map.end() &&
                                                           pit->second != cand->partner)
                continue;
            used.insert(cand->id);
            cert.curve_map[c.id] = cand->id;
            if (fresh_saddle) {
                saddle_map[c.saddle] = cand->saddle;
                saddle_used.insert(cand->saddle);
            }
            if (auto done = curve_step(cert, dom, cod, idx + 1, used, saddle_map, saddle_used))
                return done;
            used.erase(cand->id);
            cert.curve_map.erase(c.id);
            if (fresh_saddle) {
                saddle_map.erase(c.saddle);
                saddle_used.erase(cand->saddle);
            }
        }
        return std::nullopt;
    }

    std::optional<Certificate> match_boundary(Certificate& cert) {
        std::vector<const BoundaryCurve*> dom, cod;
        for (const auto& c : s1.s_boundary) dom.push_back(&c);
        for (const auto& c : s1.u_boundary) dom.push_back(&c);
        for (const auto& c : s2.s_boundary) cod.push_back(&c);
        for (const auto& c : s2.u_boundary) cod.push_back(&c);
        auto byid = [](const auto* a, const auto* b) { return a->id < b->id; };
        std::sort(dom.begin(), dom.end(), byid);
        std::sort(cod.begin(), cod.end(), byid);
        if (dom.size() != cod.size()) return std::nullopt;
        std::set<std::string> skind1, skind2;
        for (const auto& c : s1.s_boundary) skind1.insert(c.id);
        for (const auto& c : s2.s_boundary) skind2.insert(c.id);
        std::set<std::string> used;
        std::map<std::string, std::string> att_map;
        std::set<std::string> att_used;
        std::map<std::string, std::string> pt_map;  // "att/pt" -> "att'/pt'"
        std::set<std::string> pt_used;
        return boundary_step(cert, dom, cod, skind1, skind2, 0, used, att_map, att_used, pt_map,
                             pt_used);
    }

    std::optional<Certificate> boundary_step(Certificate& cert,
                                             const std::vector<const BoundaryCurve*>& dom,
                                             const std::vector<const BoundaryCurve*>& cod,
                                             const std::set<std::string>& skind1,
                                             const std::set<std::string>& skind2, size_t idx,
                                             std::set<std::string>& used,
                                             std::map<std::string, std::string>& att_map,
                                             std::set<std::string>& att_used,
                                             std::map<std::string, std::string>& pt_map,
                                             std::set<std::string>& pt_used) {
        if (idx == dom.size()) {
            reached(4, "boundary matched but tangency families do not correspond");
            return match_families(cert);
        }
        const BoundaryCurve& c = *dom[idx];
        for (const auto* cand : cod) {
            if (used.count(cand->id)) continue;
            if (skind1.count(c.id) != skind2.count(cand->id)) continue;
            if (cert.component_map.at(c.component) != cand->component) continue;
            if (!homotopy_ok(cert, c.component, c.p, c.q, cand->p, cand->q)) continue;
            auto ait = att_map.find(c.attractor);
            bool fresh_att = ait == att_map.end();
            if (!fresh_att && ait->second != cand->attractor) continue;
            if (fresh_att && att_used.count(cand->attractor)) continue;
            std::string pkey = c.attractor + "/" + c.boundary_point;
            std::string pval = cand->attractor + "/" + cand->boundary_point;
            auto pit = pt_map.find(pkey);
            bool fresh_pt = pit == pt_map.end();
            if (!fresh_pt && pit->second != pval) continue;
            if (fresh_pt && pt_used.count(pval)) continue;
            used.insert(cand->id);
            cert.boundary_curve_map[c.id] = cand->id;
            if (fresh_att) {
                att_map[c.attractor] = cand->attractor;
                att_used.insert(cand->attractor);
            }
            if (fresh_pt) {
                pt_map[pkey] = pval;
                pt_used.insert(pval);
            }
            if (auto done = boundary_step(cert, dom, cod, skind1, skind2, idx + 1, used, att_map,
                                          att_used, pt_map, pt_used))
                return done;
            used.erase(cand->id);
            cert.boundary_curve_map.erase(c.id);
            if (fresh_att) {
                att_map.erase(c.attractor);
                att_used.erase(cand->attractor);
            }
            if (fresh_pt) {
                pt_map.erase(pkey);
                pt_used.erase(pval);
            }
        }
        return std::nullopt;
    }

    std::optional<Certificate> match_families(Certificate& cert) {
        std::vector<const TangencyFamily*> dom, cod;
        for (const auto& f : s1.tangencies) dom.push_back(&f);
        for (const auto& f : s2.tangencies) cod.push_back(&f);
        auto byid = [](const auto* a, const auto* b) { return a->id < b->id; };
        std::sort(dom.begin(), dom.end(), byid);
        std::sort(cod.begin(), cod.end(), byid);
        if (dom.size() != cod.size()) return std::nullopt;
        std::set<std::string> used;
        return family_step(cert, dom, cod, 0, used);
    }

    std::optional<Certificate> family_step(Certificate& cert,
                                           const std::vector<const TangencyFamily*>& dom,
                                           const std::vector<const TangencyFamily*>& cod, size_t idx,
                                           std::set<std::string>& used) {
        if (idx == dom.size()) return finish_moduli(cert);
        const TangencyFamily& f = *dom[idx];
        for (const auto* cand : cod) {
            if (used.count(cand->id)) continue;
            if (f.points.size() != cand->points.size()) continue;
            if (!rel_equal(log_ratio(f.lambda, f.mu), log_ratio(cand->lambda, cand->mu), opts.tol))
                continue;
            used.insert(cand->id);
            cert.tangency_map[f.id] = cand->id;
            if (auto done = point_step(cert, dom, cod, idx, f, *cand, 0, used)) return done;
            used.erase(cand->id);
            cert.tangency_map.erase(f.id);
        }
        return std::nullopt;
    }

    std::optional<Certificate> point_step(Certificate& cert,
                                          const std::vector<const TangencyFamily*>& dom,
                                          const std::vector<const TangencyFamily*>& cod,
                                          size_t fam_idx, const TangencyFamily& f,
                                          const TangencyFamily& f2, size_t pidx,
                                          std::set<std::string>& used_fams) {
        if (pidx == f.points.size()) return family_step(cert, dom, cod, fam_idx + 1, used_fams);
        const TangencyPoint& p = f.points[pidx];
        for (const auto& cand : f2.points) {
            bool taken = false;
            for (size_t k = 0; k < pidx; ++k)
                if (cert.point_map.at(f.points[k].id) == cand.id) taken = true;
            if (taken) continue;
            if (cert.component_map.at(p.component) != cand.component) continue;
            if (cert.curve_map.at(p.host_curve) != cand.host_curve) continue;
            cert.point_map[p.id] = cand.id;
            if (auto done = point_step(cert, dom, cod, fam_idx, f, f2, pidx + 1, used_fams))
                return done;
            cert.point_map.erase(p.id);
        }
        return std::nullopt;
    }

    std::optional<Certificate> finish_moduli(Certificate& cert) {
        Certificate trial = cert;
        if (check_condition4a(s1, s2, trial, opts.tol).status != CondStatus::pass) {
            reached(5, "structural matchings exist but condition 4a fails for all of them");
            return std::nullopt;
        }
        if (check_condition4b(s1, s2, trial, opts.tol, opts.m_bound).status != CondStatus::pass) {
            reached(5, "structural matchings exist but condition 4b finds no m within bound " +
                           std::to_string(opts.m_bound));
            return std::nullopt;
        }
        if (check_condition5(s1, s2, trial).status != CondStatus::pass) {
            reached(5, "m values found by 4b violate the condition-5 relation");
            return std::nullopt;
        }
        return trial;
    }
};

}  // namespace eq_detail

inline Verdict schemes_equivalent(const Scheme& s1, const Scheme& s2,
                                  const std::optional<Certificate>& cert,
                                  const EquivalenceOptions& opts = {}) {
    if (auto rep = validate_scheme(s1); !rep.ok()) throw ValidationFailed("first scheme", rep);
    if (auto rep = validate_scheme(s2); !rep.ok()) throw ValidationFailed("second scheme", rep);
    if (cert) return eq_detail::verify_with_certificate(s1, s2, *cert, opts);

    eq_detail::Searcher searcher(s1, s2, opts);
    auto found = searcher.run();
    if (found) {
        // soundness: everything the search produced re-verifies on the pure path
        Verdict v = eq_detail::verify_with_certificate(s1, s2, *found, opts);
        for (int cond : {1, 2, 3, 4, 5, 6})
            if (v.per_condition[cond].status != CondStatus::pass)
                v.per_condition[cond].note("internal: search witness failed re-verification");
        return v;
    }
    Verdict v;
    for (int cond : {1, 2, 3, 4, 5, 6}) v.per_condition[cond] = ConditionResult{};
    int blocking = searcher.deepest_stage;
    // stages: 1 components(cond 1), 2 curves(cond 2), 3 boundary(cond 6),
    //         4 families(cond 3), 5 moduli(cond 4/5)
    auto mark = [&](int cond, const std::string& why) { v.per_condition[cond].fail(why); };
    std::string why = searcher.block_reason + " (search bounds: matrix " +
                      std::to_string(opts.matrix_bound) + ", m " + std::to_string(opts.m_bound) + ")";
    switch (blocking) {
        case 1: mark(1, why); break;
        case 2: mark(2, why); break;
        case 3: mark(6, why); break;
        case 4: mark(3, why); break;
        default: mark(4, why); break;
    }
    ConditionResult c7;
    if (s1.attractors.empty() && s2.attractors.empty())
        c7.note("no attractor records; condition holds vacuously");
    else
        c7.skip("search never proposes psi; supply a certificate");
    v.per_condition[7] = c7;
    v.equivalent = false;
    return v;
}

}  // namespace schemekit
