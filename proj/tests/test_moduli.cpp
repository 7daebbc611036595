#include <doctest.h>

#include <cmath>

#include "schemekit/moduli.hpp"
#include "test_util.hpp"

using namespace schemekit;

TEST_CASE("linear saddle model formula and iterate consistency") {
    auto p = linear_saddle_apply(2, 0.5, {1, 1}, 1);
    CHECK(p.first == doctest::Approx(2));
    CHECK(p.second == doctest::Approx(0.5));
    CHECK(linear_saddle_apply(2, 0.5, {3, 7}, 0) == std::pair<double, double>{3, 7});
    auto q = linear_saddle_apply(2, 0.5, {1, 8}, 3);
    CHECK(q.first == doctest::Approx(8));
    CHECK(q.second == doctest::Approx(1));
    auto step = std::pair<double, double>{1, 8};
    for (int i = 0; i < 3; ++i) step = linear_saddle_apply(2, 0.5, step, 1);
    CHECK(step.first == doctest::Approx(q.first));
    CHECK(step.second == doctest::Approx(q.second));
    CHECK_THROWS_AS(linear_saddle_apply(0.5, 2, {1, 1}, 1), std::invalid_argument);
}

TEST_CASE("linear domain membership and the y = 0 edge rule") {
    CHECK(in_linear_domain(2, 0.5, {0, 0}, 0.01));
    // exponent -log_{0.5} 2 = 1, so the test is |x||y| <= t
    CHECK(in_linear_domain(2, 0.5, {2, 0.4}, 1.0));
    CHECK_FALSE(in_linear_domain(2, 0.5, {2, 0.6}, 1.0));
    CHECK(in_linear_domain(2, 0.5, {1e9, 0.0}, 0.5));  // axis points are members
    CHECK_THROWS_AS(in_linear_domain(2, 0.5, {0, 0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(in_linear_domain(2, 0.5, {0, 0}, 1.5), std::invalid_argument);
}

TEST_CASE("linear domain is invariant under the saddle map") {
    auto rng = testutil::make_rng(6);
    std::uniform_real_distribution<double> coord(-2.0, 2.0), tpick(0.05, 1.0);
    for (int i = 0; i < 500; ++i) {
        std::pair<double, double> p{coord(rng), coord(rng)};
        double t = tpick(rng);
        bool before = in_linear_domain(2, 0.5, p, t);
        bool after = in_linear_domain(2, 0.5, linear_saddle_apply(2, 0.5, p, 1), t);
        CHECK(before == after);
    }
}

TEST_CASE("tau at a tangency: exact derivative with self-check") {
    TransitionMap g;
    g.id = "g";
    // eta = 3x + y^2 + x^3
    g.eta.c = {{Rational(0), Rational(0), Rational(1)}, {Rational(3)}, {}, {Rational(1)}};
    g.xi.c = {{Rational(0), Rational(1)}};  // xi = y (any graph-compatible map)
    g.a_x = Rational(0);
    g.a_y = Rational(0);
    CHECK(tau_at_tangency(g) == doctest::Approx(3).epsilon(1e-12));

    TransitionMap flat = g;
    flat.eta.c = {{Rational(0), Rational(1)}};  // eta = y, d/dx = 0
    CHECK_THROWS_AS(tau_at_tangency(flat), DegenerateModulus);
}

TEST_CASE("tau iterate scaling formula") {
    CHECK(tau_iterate(1, 0.5, 2, 1) == doctest::Approx(0.25));
    CHECK(tau_iterate(7, 0.5, 2, 0) == doctest::Approx(7));
    CHECK(tau_iterate(4, -0.5, 2, 2) == doctest::Approx(0.25));
}

TEST_CASE("log ratio values and renormalization invariance") {
    CHECK(log_ratio(0.5, 2) == doctest::Approx(-1));
    CHECK(log_ratio(0.25, 2) == doctest::Approx(-2));
    for (int n = 1; n <= 5; ++n)
        CHECK(log_ratio(std::pow(0.5, n), std::pow(2.0, n)) ==
              doctest::Approx(log_ratio(0.5, 2)).epsilon(1e-12));
}

TEST_CASE("pairwise tau invariant") {
    CHECK(tau_pair_invariant(3, 3, 2) == doctest::Approx(1));
    CHECK(tau_pair_invariant(1, 2, std::exp(1.0)) == doctest::Approx(2));
    CHECK(tau_pair_invariant(5 * 1.0, 5 * 2.0, 2) == doctest::Approx(tau_pair_invariant(1, 2, 2)));
    CHECK_THROWS_AS(tau_pair_invariant(0, 1, 2), DegenerateModulus);
}

TEST_CASE("separatrix conjugacies: power law, sign, equivariance") {
    CHECK(separatrix_map_stable(0.04, 0.25, 0.5) == doctest::Approx(0.2));
    CHECK(separatrix_map_stable(-0.04, 0.25, 0.5) == doctest::Approx(-0.2));
    CHECK(separatrix_map_stable(0.37, 0.3, 0.3) == doctest::Approx(0.37));
    CHECK(separatrix_map_stable(0.0, 0.25, 0.5) == 0.0);
    for (double t : {0.01, 0.2, 0.9}) {
        double lhs = separatrix_map_stable(0.25 * t, 0.25, 0.5);
        double rhs = 0.5 * separatrix_map_stable(t, 0.25, 0.5);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
    CHECK(separatrix_map_unstable(1, 2, 3, 3) == doctest::Approx(3));
    CHECK(separatrix_map_unstable(0.7, 2, 2, 1) == doctest::Approx(0.7));
    for (double t : {0.01, 0.2, 0.9}) {
        double lhs = separatrix_map_unstable(2 * t, 2, 3, 1.7);
        double rhs = 3 * separatrix_map_unstable(t, 2, 3, 1.7);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

namespace {
TransitionMap graph_transition(const Poly2& eta) {
    TransitionMap g;
    g.id = "g";
    g.xi.c = {{Rational(0), Rational(1)}};  // xi(x, y) = y: affine in y with slope 1
    g.eta = eta;
    g.a_x = Rational(0);
    g.a_y = Rational(0);
    return g;
}
}  // namespace

TEST_CASE("tangency order reads the leading jet") {
    Poly2 q25;  // eta(x, y) = 5y^2 + y^3, so q(X) = 5X^2 + X^3
    q25.c = {{Rational(0), Rational(0), Rational(5), Rational(1)}};
    auto ord = tangency_order(graph_transition(q25));
    CHECK(ord.n == 2);
    CHECK(ord.Q == Rational(5));

    Poly2 q31;  // q(X) = X^3
    q31.c = {{Rational(0), Rational(0), Rational(0), Rational(1)}};
    auto ord3 = tangency_order(graph_transition(q31));
    CHECK(ord3.n == 3);
    CHECK(ord3.Q == Rational(1));

    Poly2 flat;  // q constant
    flat.c = {{Rational(4)}};
    CHECK_THROWS_AS(tangency_order(graph_transition(flat)), NoFiniteOrder);
}

TEST_CASE("one-sidedness: even order stays on one side, odd order crosses") {
    Poly2 even;
    even.c = {{Rational(0), Rational(0), Rational(5), Rational(1)}};
    Poly2 odd;
    odd.c = {{Rational(0), Rational(0), Rational(0), Rational(1)}};
    for (const auto& [poly, expect_one_sided] : {std::pair{even, true}, std::pair{odd, false}}) {
        auto ord = tangency_order(graph_transition(poly));
        double base = ord.q.eval(to_double(ord.a_x_u));
        double left = ord.q.eval(to_double(ord.a_x_u) - 1e-3) - base;
        double right = ord.q.eval(to_double(ord.a_x_u) + 1e-3) - base;
        bool one_sided = (left > 0) == (right > 0);
        CHECK(one_sided == expect_one_sided);
        CHECK((ord.n % 2 == 0) == expect_one_sided);
    }
}

TEST_CASE("chart transport scales tau exactly by (lambda_dst/mu_src)^k") {
    auto rng = testutil::make_rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        TransitionMap g;
        g.id = "g";
        g.xi = testutil::random_poly2(rng, 3);
        g.eta = testutil::random_poly2(rng, 3);
        // force a nonzero dx coefficient so tau is nonzero
        if (g.eta.c.size() < 2) g.eta.c.resize(2);
        if (g.eta.c[1].empty()) g.eta.c[1].push_back(Rational(0));
        g.eta.c[1][0] += Rational(2);
        g.a_x = testutil::random_rational(rng, -2, 2);
        g.a_y = testutil::random_rational(rng, -2, 2);
        Rational mu_s(3, 1), la_s(1, 3), mu_d(2, 1), la_d(1, 2);
        for (long long k : {-2LL, -1LL, 0LL, 1LL, 2LL, 3LL}) {
            TransitionMap moved = transport_transition(g, mu_s, la_s, mu_d, la_d, k);
            Rational tau0 = g.eta.deriv_x().eval(g.a_x, g.a_y);
            Rational tau1 = moved.eta.deriv_x().eval(moved.a_x, moved.a_y);
            CHECK(tau1 == rational_pow(la_d / mu_s, k) * tau0);
        }
    }
}
