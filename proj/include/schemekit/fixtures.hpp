#pragma once
// Deterministic fixtures: DA-style schemes seeded by a hyperbolic matrix,
// synthetic tangency fixtures exercising the moduli conditions, and plot-data
// sampling of separatrix images.

#include <string>
#include <utility>
#include <vector>

#include "schemekit/certificate.hpp"
#include "schemekit/hyperbolic_lift.hpp"
#include "schemekit/moduli.hpp"
#include "schemekit/scheme.hpp"

namespace schemekit {

struct DaParams {
    Mat2 matrix;             // hyperbolic seed, det 1, trace > 2
    double tau_seed = 1.0;   // modulus of the attached tangency point, if any
    // optional attached tangency family (both set => attach)
    std::optional<double> lambda;
    std::optional<double> mu;
};

// One-torus orbit space whose homotopy action is the seed matrix itself, a
// rank-2 attractor whose automorphism is the canonical commutator-preserving
// lift of the seed matrix, two s-boundary points whose free separatrices share
// one complement component (one bunch of degree 2), and optionally a one-point
// tangency family on synthetic trivial saddles.
inline Scheme build_da_scheme(const DaParams& p) {
    if (std::abs(trace(p.matrix)) <= 2 || det(p.matrix) != 1)
        throw NonHyperbolic("DA seed matrix must have det 1 and |trace| > 2, got " +
                            mat2_to_string(p.matrix));
    Scheme s;
    s.k_f = 1;
    s.components.push_back({"T1", p.matrix, "T1"});
    s.s_boundary.push_back({"l_p1", "Lambda", "p1", "T1", 0, 1});
    s.s_boundary.push_back({"l_p2", "Lambda", "p2", "T1", 0, 1});
    AttractorRecord att;
    att.id = "Lambda";
    att.kind = BasicSetKind::attractor;
    att.num_periodic_components = 1;
    att.rank = 2;
    att.automorphism = hyperbolic_lift(p.matrix);  // throws NonHyperbolic for trace < -2
    att.boundary_points.push_back({"p1", {"l_p1"}});
    att.boundary_points.push_back({"p2", {"l_p2"}});
    Bunch b;
    b.id = "b1";
    b.degree = 2;
    b.members = {{"p1", "plus"}, {"p2", "plus"}, {"p1", "minus"}, {"p2", "minus"}};
    att.bunches.push_back(b);
    s.attractors.push_back(att);

    if (p.lambda && p.mu) {
        s.s_curves.push_back({"cs1", CurveKind::stable, "sigma_s", "T1", 0, 1, "cs2"});
        s.s_curves.push_back({"cs2", CurveKind::stable, "sigma_s", "T1", 0, 1, "cs1"});
        s.u_curves.push_back({"cu1", CurveKind::unstable, "sigma_u", "T1", 1, 0, "cu2"});
        s.u_curves.push_back({"cu2", CurveKind::unstable, "sigma_u", "T1", 1, 0, "cu1"});
        TangencyFamily fam;
        fam.id = "H1";
        fam.saddle_s = "sigma_s";
        fam.saddle_u = "sigma_u";
        fam.lambda = *p.lambda;
        fam.mu = *p.mu;
        fam.points.push_back({"a1", "T1", "cs1", p.tau_seed, 2});
        s.tangencies.push_back(fam);
    }
    return s;
}

// Certificate between the DA schemes of two conjugate seed matrices: all label
// maps are identities (build_da_scheme uses fixed labels), the basis change is
// a conjugator of the seed matrices that fixes the boundary-curve class (0,1)
// up to sign (lower triangular with unit diagonal entries), and psi is the
// exact conjugator between the canonical lifts.
inline Certificate da_certificate(const Scheme& s1, const Scheme& s2, const Mat2& A, const Mat2& B,
                                  long long bound = 16) {
    auto conj = conjugating_automorphism(A, B);
    if (!conj)
        throw std::invalid_argument("seed matrices " + mat2_to_string(A) + " and " +
                                    mat2_to_string(B) + " are not conjugate via the canonical form");
    std::optional<Mat2> P;
    for (long long s1d : {1LL, -1LL})
        for (long long s2d : {1LL, -1LL})
            for (long long c = -bound; c <= bound && !P; ++c) {
                Mat2 Q{s1d, 0, c, s2d};
                if (mul(Q, A) == mul(B, Q)) P = Q;
            }
    if (!P)
        throw std::invalid_argument("no conjugator of the seed matrices fixes the boundary class "
                                    "(0,1) up to sign within bound " + std::to_string(bound));
    Certificate c = identity_certificate(s1);
    (void)s2;  // fixture label sets coincide by construction
    c.basis_changes["T1"] = *P;
    for (auto& am : c.attractor_maps) {
        am.psi = conj->first;
        am.psi_inv = conj->second;
    }
    return c;
}

// Synthetic scheme with one tangency family of n_points spread round-robin over
// n_components tori. The winding pattern enters through the tau values
// (tau_i = tau_seed * |lambda/mu|^{k_i}); stored same-component windings are 0,
// so the identity certificate passes the modulus conditions by construction.
inline Scheme build_tangency_fixture(int n_points, int n_components, double lambda, double mu,
                                     double tau_seed,
                                     const std::vector<long long>& winding_pattern = {}) {
    if (n_points < 1 || n_components < 1) throw std::invalid_argument("need at least one point/component");
    if (!(std::abs(lambda) > 0 && std::abs(lambda) < 1 && std::abs(mu) > 1))
        throw std::invalid_argument("need 0 < |lambda| < 1 < |mu|");
    if (tau_seed == 0) throw std::invalid_argument("tau seed must be nonzero");
    Scheme s;
    s.k_f = 1;
    for (int c = 1; c <= n_components; ++c) {
        std::string id = "T" + std::to_string(c);
        s.components.push_back({id, mat2_identity(), id});
    }
    TangencyFamily fam;
    fam.id = "H1";
    fam.saddle_s = "sigma_s";
    fam.saddle_u = "sigma_u";
    fam.lambda = lambda;
    fam.mu = mu;
    for (int i = 0; i < n_points; ++i) {
        std::string comp = "T" + std::to_string(1 + (i % n_components));
        std::string host = "cs" + std::to_string(i);
        s.s_curves.push_back({host, CurveKind::stable, "sigma_s", comp, 0, 1, host + "p"});
        s.s_curves.push_back({host + "p", CurveKind::stable, "sigma_s", comp, 0, 1, host});
        long long k = i < (int)winding_pattern.size() ? winding_pattern[i] : 0;
        double tau = tau_seed * std::pow(std::abs(lambda / mu), static_cast<double>(k));
        fam.points.push_back({"a" + std::to_string(i), comp, host, tau, 2});
    }
    s.tangencies.push_back(fam);
    for (int i = 0; i < n_points; ++i)
        for (int j = i + 1; j < n_points; ++j)
            if (fam.points[i].component == fam.points[j].component)
                s.windings.push_back({fam.points[i].id, fam.points[j].id, 0});
    // one unstable pair so the u-family is populated
    s.u_curves.push_back({"cu0", CurveKind::unstable, "sigma_u", "T1", 1, 0, "cu0p"});
    s.u_curves.push_back({"cu0p", CurveKind::unstable, "sigma_u", "T1", 1, 0, "cu0"});
    return s;
}

// Samples the image of a separatrix (an axis in the linearized source chart)
// under the first transition out of the given saddle.
inline std::vector<std::pair<double, double>> emit_separatrix_polyline(
    const MapSpec& ms, const std::string& saddle, CurveKind which, int n_samples,
    std::pair<double, double> range) {
    const TransitionMap* g = nullptr;
    for (const auto& t : ms.transitions)
        if (t.source == saddle) {
            g = &t;
            break;
        }
    if (!g) throw std::invalid_argument("no transition out of saddle '" + saddle + "'");
    if (n_samples < 1) throw std::invalid_argument("need at least one sample");
    std::vector<std::pair<double, double>> out;
    for (int i = 0; i < n_samples; ++i) {
        double t = n_samples == 1
                       ? range.first
                       : range.first + (range.second - range.first) * i / (n_samples - 1);
        double x = which == CurveKind::stable ? 0.0 : t;
        double y = which == CurveKind::stable ? t : 0.0;
        out.emplace_back(g->xi.eval(x, y), g->eta.eval(x, y));
    }
    return out;
}

}  // namespace schemekit
