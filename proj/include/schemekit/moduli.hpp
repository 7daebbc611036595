#pragma once
// Linearized saddle model, transition maps and the modulus tau:
//   f_{mu,lambda}(x, y) = (mu x, lambda y),  U^t = { |x| |y|^{-log_lambda mu} <= t },
//   tau = d(eta)/dx at a^s,  tau_{f^k(a)} = |lambda/mu|^k tau,
//   log ratio ln|lambda|/ln|mu|,  pair invariant |tau2/tau1|^{1/ln|mu|},
//   separatrix conjugacies |t'| = |t|^rho, |t'| = c |t|^rho,
//   tangency expansion q(x) = Q (x - a_x^u)^n + o(...).

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "schemekit/polynomial.hpp"
#include "schemekit/rational.hpp"

namespace schemekit {

struct DegenerateModulus : std::runtime_error {
    explicit DegenerateModulus(const std::string& m) : std::runtime_error(m) {}
};
struct SelfCheckFailure : std::runtime_error {
    explicit SelfCheckFailure(const std::string& m) : std::runtime_error(m) {}
};
struct NoFiniteOrder : std::runtime_error {
    explicit NoFiniteOrder(const std::string& m) : std::runtime_error(m) {}
};

inline void require_eigenvalues(double mu, double lambda) {
    if (!(std::abs(mu) > 1.0) || !(std::abs(lambda) < 1.0) || !(std::abs(lambda) > 0.0))
        throw std::invalid_argument("saddle eigenvalues need |mu| > 1 > |lambda| > 0");
}

struct SaddleChart {
    std::string saddle;       // orbit label
    long long period = 1;     // k_sigma
    Rational mu{2};           // |mu| > 1
    Rational lambda{1, 2};    // 0 < |lambda| < 1
    friend bool operator==(const SaddleChart&, const SaddleChart&) = default;
};

struct TransitionMap {
    std::string id;
    std::string source, target;  // saddle labels (source chart, target chart)
    Poly2 xi, eta;               // g(x, y) = (xi(x, y), eta(x, y))
    Rational a_x{0}, a_y{0};     // the point a^s in the source chart
    friend bool operator==(const TransitionMap&, const TransitionMap&) = default;
};

struct DeclaredTangency {
    std::string transition;  // TransitionMap id
    Rational x{0}, y{0};
    bool one_sided = false;
    friend bool operator==(const DeclaredTangency&, const DeclaredTangency&) = default;
};

struct MapSpec {
    std::vector<SaddleChart> saddles;
    std::vector<TransitionMap> transitions;
    std::vector<DeclaredTangency> tangency_points;
    friend bool operator==(const MapSpec&, const MapSpec&) = default;
};

// (mu^n x, lambda^n y); integer power kept exact in the fp sense by squaring.
inline std::pair<double, double> linear_saddle_apply(double mu, double lambda,
                                                     std::pair<double, double> p, long long n) {
    require_eigenvalues(mu, lambda);
    auto ipow = [](double base, long long e) {
        if (e < 0) { base = 1.0 / base; e = -e; }
        double acc = 1.0, b = base;
        while (e > 0) {
            if (e & 1) acc *= b;
            b *= b;
            e >>= 1;
        }
        return acc;
    };
    return {ipow(mu, n) * p.first, ipow(lambda, n) * p.second};
}

// Membership in U^t = { |x| |y|^e <= t }, e = -log_lambda mu = -ln|mu|/ln|lambda| > 0.
// Edge rule: y = 0 gives |y|^e -> 0, so every axis point is a member.
inline bool in_linear_domain(double mu, double lambda, std::pair<double, double> p, double t) {
    require_eigenvalues(mu, lambda);
    if (!(t > 0.0) || !(t <= 1.0)) throw std::invalid_argument("t must lie in (0, 1]");
    if (p.second == 0.0) return true;
    double e = -std::log(std::abs(mu)) / std::log(std::abs(lambda));
    return std::abs(p.first) * std::pow(std::abs(p.second), e) <= t;
}

inline double log_ratio(double lambda, double mu) {
    require_eigenvalues(mu, lambda);
    return std::log(std::abs(lambda)) / std::log(std::abs(mu));
}

inline double tau_iterate(double tau, double lambda, double mu, long long k) {
    require_eigenvalues(mu, lambda);
    return std::pow(std::abs(lambda / mu), static_cast<double>(k)) * tau;
}

inline double tau_pair_invariant(double tau1, double tau2, double mu) {
    if (tau1 == 0.0 || tau2 == 0.0) throw DegenerateModulus("tau_pair_invariant needs nonzero taus");
    if (!(std::abs(mu) > 1.0)) throw std::invalid_argument("|mu| must exceed 1");
    return std::exp(std::log(std::abs(tau2 / tau1)) / std::log(std::abs(mu)));
}

inline double separatrix_map_stable(double t, double lambda_src, double lambda_dst) {
    if (!(std::abs(lambda_src) < 1 && std::abs(lambda_src) > 0 && std::abs(lambda_dst) < 1 &&
          std::abs(lambda_dst) > 0))
        throw std::invalid_argument("stable eigenvalues must satisfy 0 < |lambda| < 1");
    if (t == 0.0) return 0.0;
    double rho = std::log(std::abs(lambda_dst)) / std::log(std::abs(lambda_src));
    return (t > 0 ? 1.0 : -1.0) * std::pow(std::abs(t), rho);
}

inline double separatrix_map_unstable(double t, double mu_src, double mu_dst, double c) {
    if (!(std::abs(mu_src) > 1 && std::abs(mu_dst) > 1)) throw std::invalid_argument("|mu| must exceed 1");
    if (!(c > 0)) throw std::invalid_argument("c must be positive");
    if (t == 0.0) return 0.0;
    double rho = std::log(std::abs(mu_dst)) / std::log(std::abs(mu_src));
    return (t > 0 ? 1.0 : -1.0) * c * std::pow(std::abs(t), rho);
}

// tau = d(eta)/dx at a^s, exact; cross-checked by Richardson-extrapolated
// central differences (two levels) on the double evaluation of eta.
inline double tau_at_tangency(const TransitionMap& g, double fd_step = -1.0, double fd_tol = 1e-6) {
    Rational exact = g.eta.deriv_x().eval(g.a_x, g.a_y);
    if (exact.numerator() == 0)
        throw DegenerateModulus("tau vanishes for transition '" + g.id + "'");
    double tau = to_double(exact);
    double ax = to_double(g.a_x), ay = to_double(g.a_y);
    double h = fd_step > 0 ? fd_step : 1e-4 * (1.0 + std::abs(ax));
    auto central = [&](double step) {
        return (g.eta.eval(ax + step, ay) - g.eta.eval(ax - step, ay)) / (2.0 * step);
    };
    auto rich1 = [&](double step) { return (4.0 * central(step / 2) - central(step)) / 3.0; };
    double fd = (16.0 * rich1(h / 2) - rich1(h)) / 15.0;
    if (std::abs(fd - tau) > fd_tol * std::max(1.0, std::abs(tau)))
        throw SelfCheckFailure("finite-difference check for '" + g.id + "': symbolic " +
                               format_real(tau) + " vs fd " + format_real(fd));
    return tau;
}

struct TangencyOrder {
    int n = 0;          // least nonvanishing order at a_x^u (n >= 2 is a tangency)
    Rational Q{0};      // q^{(n)}(a_x^u) / n!
    Poly1 q;            // the image graph y = q(x) in the target chart
    Rational a_x_u{0};  // image abscissa of a^s
};

// The stable manifold through a^s in the source chart is the vertical line
// x = a_x^s; its image is the curve y ↦ (xi(a_x, y), eta(a_x, y)). The curve
// must be a polynomial graph over x, i.e. xi(a_x, ·) affine with nonzero slope.
inline TangencyOrder tangency_order(const TransitionMap& g) {
    Poly1 first = g.xi.restrict_x(g.a_x);
    if (first.degree() > 1 || first.c.size() < 2 || first.c[1].numerator() == 0)
        throw std::domain_error("transition '" + g.id +
                                "': image of the stable manifold is not a polynomial graph over x");
    Rational alpha = first.c[0], beta = first.c[1];
    Poly1 q = g.eta.restrict_x(g.a_x).compose_affine_inverse(alpha, beta);
    Rational a_x_u = alpha + beta * g.a_y;  // xi(a^s)
    Poly1 shifted = q.taylor_shift(a_x_u);
    for (size_t k = 1; k < shifted.c.size(); ++k) {
        if (shifted.c[k].numerator() != 0)
            return {static_cast<int>(k), shifted.c[k], q, a_x_u};
    }
    throw NoFiniteOrder("transition '" + g.id + "': contact of infinite order (flat graph)");
}

// Chart transport of a transition by k saddle periods: precompose with
// f_{mu_s, lambda_s}^{-k} in the source chart, postcompose with
// f_{mu_u, lambda_u}^{k} in the target chart. Exact rational scaling.
inline TransitionMap transport_transition(const TransitionMap& g, const Rational& mu_src,
                                          const Rational& lambda_src, const Rational& mu_dst,
                                          const Rational& lambda_dst, long long k) {
    TransitionMap out = g;
    Rational sx = rational_pow(mu_src, -k), sy = rational_pow(lambda_src, -k);
    out.xi = g.xi.scale_args(sx, sy).scaled(rational_pow(mu_dst, k));
    out.eta = g.eta.scale_args(sx, sy).scaled(rational_pow(lambda_dst, k));
    out.a_x = g.a_x * rational_pow(mu_src, k);
    out.a_y = g.a_y * rational_pow(lambda_src, k);
    return out;
}

}  // namespace schemekit
