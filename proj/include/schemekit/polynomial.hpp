#pragma once
// Exact polynomials over the rationals: univariate (curve germs along a
// separatrix) and bivariate (transition-map coordinate functions).
// Bivariate coefficient layout: coeff[i][j] multiplies x^i y^j.

#include <string>
#include <vector>

#include "schemekit/rational.hpp"

namespace schemekit {

struct Poly1 {
    std::vector<Rational> c;  // c[k] * t^k, trailing zeros trimmed

    void normalize() {
        while (!c.empty() && c.back().numerator() == 0) c.pop_back();
    }
    int degree() const { return static_cast<int>(c.size()) - 1; }

    Rational eval(const Rational& t) const {
        Rational acc(0);
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
        return acc;
    }
    double eval(double t) const {
        double acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + to_double(*it);
        return acc;
    }

    Poly1 derivative() const {
        Poly1 d;
        for (size_t k = 1; k < c.size(); ++k) d.c.push_back(c[k] * Rational((long long)k));
        d.normalize();
        return d;
    }

    friend Poly1 operator+(const Poly1& a, const Poly1& b) {
        Poly1 r = a;
        if (r.c.size() < b.c.size()) r.c.resize(b.c.size(), Rational(0));
        for (size_t k = 0; k < b.c.size(); ++k) r.c[k] += b.c[k];
        r.normalize();
        return r;
    }
    friend Poly1 operator*(const Poly1& a, const Poly1& b) {
        Poly1 r;
        if (a.c.empty() || b.c.empty()) return r;
        r.c.assign(a.c.size() + b.c.size() - 1, Rational(0));
        for (size_t i = 0; i < a.c.size(); ++i)
            for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
        r.normalize();
        return r;
    }
    friend Poly1 operator*(const Poly1& a, const Rational& s) {
        Poly1 r = a;
        for (auto& v : r.c) v *= s;
        r.normalize();
        return r;
    }

    // p((t - alpha) / beta), exact; beta must be nonzero.
    Poly1 compose_affine_inverse(const Rational& alpha, const Rational& beta) const {
        if (beta.numerator() == 0) throw std::domain_error("compose_affine_inverse: zero slope");
        Poly1 lin;  // (t - alpha) / beta
        lin.c = {-alpha / beta, Rational(1) / beta};
        lin.normalize();
        Poly1 acc;
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            acc = acc * lin;
            Poly1 k;
            k.c = {*it};
            k.normalize();
            acc = acc + k;
        }
        return acc;
    }

    // Coefficients of p(t + t0) (Taylor expansion at t0), exact Horner shift.
    Poly1 taylor_shift(const Rational& t0) const {
        Poly1 lin;
        lin.c = {t0, Rational(1)};
        Poly1 acc;
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            acc = acc * lin;
            Poly1 k;
            k.c = {*it};
            k.normalize();
            acc = acc + k;
        }
        return acc;
    }
};

struct Poly2 {
    std::vector<std::vector<Rational>> c;  // c[i][j] * x^i y^j

    void normalize() {
        for (auto& row : c)
            while (!row.empty() && row.back().numerator() == 0) row.pop_back();
        while (!c.empty() && c.back().empty()) c.pop_back();
    }

    Rational eval(const Rational& x, const Rational& y) const {
        Rational acc(0);
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            Rational rowv(0);
            for (auto jt = it->rbegin(); jt != it->rend(); ++jt) rowv = rowv * y + *jt;
            acc = acc * x + rowv;
        }
        return acc;
    }
    double eval(double x, double y) const {
        double acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            double rowv = 0;
            for (auto jt = it->rbegin(); jt != it->rend(); ++jt) rowv = rowv * y + to_double(*jt);
            acc = acc * x + rowv;
        }
        return acc;
    }

    Poly2 deriv_x() const {
        Poly2 d;
        for (size_t i = 1; i < c.size(); ++i) {
            d.c.push_back(c[i]);
            for (auto& v : d.c.back()) v *= Rational((long long)i);
        }
        d.normalize();
        return d;
    }
    Poly2 deriv_y() const {
        Poly2 d;
        d.c.resize(c.size());
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = 1; j < c[i].size(); ++j) d.c[i].push_back(c[i][j] * Rational((long long)j));
        d.normalize();
        return d;
    }

    // p(x0, y) as a polynomial in y.
    Poly1 restrict_x(const Rational& x0) const {
        Poly1 out;
        Rational xpow(1);
        for (size_t i = 0; i < c.size(); ++i) {
            if (out.c.size() < c[i].size()) out.c.resize(c[i].size(), Rational(0));
            for (size_t j = 0; j < c[i].size(); ++j) out.c[j] += c[i][j] * xpow;
            xpow *= x0;
        }
        out.normalize();
        return out;
    }

    // p(sx * x, sy * y), exact argument scaling.
    Poly2 scale_args(const Rational& sx, const Rational& sy) const {
        Poly2 out = *this;
        Rational xs(1);
        for (size_t i = 0; i < out.c.size(); ++i) {
            Rational ys(1);
            for (size_t j = 0; j < out.c[i].size(); ++j) {
                out.c[i][j] *= xs * ys;
                ys *= sy;
            }
            xs *= sx;
        }
        out.normalize();
        return out;
    }

    Poly2 scaled(const Rational& s) const {
        Poly2 out = *this;
        for (auto& row : out.c)
            for (auto& v : row) v *= s;
        out.normalize();
        return out;
    }

    friend bool operator==(const Poly2& a, const Poly2& b) {
        Poly2 l = a, r = b;
        l.normalize();
        r.normalize();
        return l.c == r.c;
    }
};

}  // namespace schemekit
