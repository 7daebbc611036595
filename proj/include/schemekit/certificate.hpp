#pragma once
// Equivalence certificates: the finite witness object for Definition-7 style
// scheme equivalence, plus the groupoid operations (identity, inverse,
// composition) used to test that scheme equivalence is an equivalence relation.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "schemekit/mat2.hpp"
#include "schemekit/scheme.hpp"
#include "schemekit/word.hpp"

namespace schemekit {

struct AttractorMap {
    std::string from, to;
    FreeGroupAut psi, psi_inv;
    std::map<std::string, std::string> boundary_point_map;
    friend bool operator==(const AttractorMap&, const AttractorMap&) = default;
};

struct MValue {
    std::string from_point, to_point;  // a cross-component point pair in the source scheme
    long long m = 0;
    friend bool operator==(const MValue&, const MValue&) = default;
};

struct Certificate {
    std::map<std::string, std::string> component_map;
    std::map<std::string, Mat2> basis_changes;  // P_i per source component
    std::map<std::string, std::string> curve_map;
    std::map<std::string, std::string> boundary_curve_map;
    std::map<std::string, std::string> tangency_map;
    std::map<std::string, std::string> point_map;
    std::vector<MValue> m_values;
    std::vector<AttractorMap> attractor_maps;
    friend bool operator==(const Certificate&, const Certificate&) = default;

    std::optional<long long> m_between(const std::string& a, const std::string& b) const {
        for (const auto& mv : m_values) {
            if (mv.from_point == a && mv.to_point == b) return mv.m;
            if (mv.from_point == b && mv.to_point == a) return -mv.m;
        }
        return std::nullopt;
    }
};

inline Certificate identity_certificate(const Scheme& s) {
    Certificate c;
    for (const auto& comp : s.components) {
        c.component_map[comp.id] = comp.id;
        c.basis_changes[comp.id] = mat2_identity();
    }
    for (const auto& cv : s.s_curves) c.curve_map[cv.id] = cv.id;
    for (const auto& cv : s.u_curves) c.curve_map[cv.id] = cv.id;
    for (const auto& cv : s.s_boundary) c.boundary_curve_map[cv.id] = cv.id;
    for (const auto& cv : s.u_boundary) c.boundary_curve_map[cv.id] = cv.id;
    for (const auto& fam : s.tangencies) {
        c.tangency_map[fam.id] = fam.id;
        for (const auto& pt : fam.points) c.point_map[pt.id] = pt.id;
    }
    for (const auto& a : s.attractors) {
        AttractorMap am;
        am.from = am.to = a.id;
        am.psi = am.psi_inv = identity_aut(a.rank);
        for (const auto& bp : a.boundary_points) am.boundary_point_map[bp.id] = bp.id;
        c.attractor_maps.push_back(am);
    }
    return c;
}

namespace detail {
inline std::map<std::string, std::string> invert_map(const std::map<std::string, std::string>& m) {
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : m)
        if (!out.emplace(v, k).second) throw std::invalid_argument("map is not a bijection at '" + v + "'");
    return out;
}
inline std::map<std::string, std::string> compose_map(const std::map<std::string, std::string>& first,
                                                      const std::map<std::string, std::string>& second) {
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : first) {
        auto it = second.find(v);
        if (it == second.end()) throw std::invalid_argument("composition gap at '" + v + "'");
        out[k] = it->second;
    }
    return out;
}
}  // namespace detail

// Witness for s2 == s1 obtained from a witness for s1 == s2.
inline Certificate invert_certificate(const Certificate& c) {
    Certificate out;
    out.component_map = detail::invert_map(c.component_map);
    for (const auto& [comp, P] : c.basis_changes) {
        auto it = c.component_map.find(comp);
        if (it == c.component_map.end()) throw std::invalid_argument("basis change for unmapped component");
        out.basis_changes[it->second] = inverse_unimodular(P);
    }
    out.curve_map = detail::invert_map(c.curve_map);
    out.boundary_curve_map = detail::invert_map(c.boundary_curve_map);
    out.tangency_map = detail::invert_map(c.tangency_map);
    out.point_map = detail::invert_map(c.point_map);
    for (const auto& mv : c.m_values) {
        auto a = c.point_map.find(mv.from_point), b = c.point_map.find(mv.to_point);
        if (a == c.point_map.end() || b == c.point_map.end())
            throw std::invalid_argument("m value references unmapped points");
        out.m_values.push_back({a->second, b->second, -mv.m});
    }
    for (const auto& am : c.attractor_maps) {
        AttractorMap inv;
        inv.from = am.to;
        inv.to = am.from;
        inv.psi = am.psi_inv;
        inv.psi_inv = am.psi;
        inv.boundary_point_map = detail::invert_map(am.boundary_point_map);
        out.attractor_maps.push_back(inv);
    }
    return out;
}

// Witness for s1 == s3 from witnesses c12: s1 == s2 and c23: s2 == s3.
inline Certificate compose_certificates(const Certificate& c12, const Certificate& c23) {
    Certificate out;
    out.component_map = detail::compose_map(c12.component_map, c23.component_map);
    for (const auto& [comp, P1] : c12.basis_changes) {
        auto mid = c12.component_map.find(comp);
        if (mid == c12.component_map.end()) throw std::invalid_argument("basis change for unmapped component");
        auto P2 = c23.basis_changes.find(mid->second);
        if (P2 == c23.basis_changes.end()) throw std::invalid_argument("missing downstream basis change");
        out.basis_changes[comp] = mul(P2->second, P1);
    }
    out.curve_map = detail::compose_map(c12.curve_map, c23.curve_map);
    out.boundary_curve_map = detail::compose_map(c12.boundary_curve_map, c23.boundary_curve_map);
    out.tangency_map = detail::compose_map(c12.tangency_map, c23.tangency_map);
    out.point_map = detail::compose_map(c12.point_map, c23.point_map);
    // m values add along composition: the 4b relation is multiplicative in
    // |lambda/mu|^m and the exponents are integers.
    for (const auto& mv : c12.m_values) {
        auto a = c12.point_map.find(mv.from_point), b = c12.point_map.find(mv.to_point);
        if (a == c12.point_map.end() || b == c12.point_map.end())
            throw std::invalid_argument("m value references unmapped points");
        auto m2 = c23.m_between(a->second, b->second);
        if (!m2) throw std::invalid_argument("no downstream m for pair " + mv.from_point + "," + mv.to_point);
        out.m_values.push_back({mv.from_point, mv.to_point, mv.m + *m2});
    }
    for (const auto& am : c12.attractor_maps) {
        const AttractorMap* next = nullptr;
        for (const auto& bm : c23.attractor_maps)
            if (bm.from == am.to) next = &bm;
        if (!next) throw std::invalid_argument("no downstream attractor map for '" + am.to + "'");
        AttractorMap comp;
        comp.from = am.from;
        comp.to = next->to;
        comp.psi = compose(next->psi, am.psi);
        comp.psi_inv = compose(am.psi_inv, next->psi_inv);
        comp.boundary_point_map = detail::compose_map(am.boundary_point_map, next->boundary_point_map);
        out.attractor_maps.push_back(comp);
    }
    return out;
}

}  // namespace schemekit
