#pragma once
// Exact rational scalars used throughout the symbolic layer, plus the
// decimal-string conventions of the on-disk formats (reals are never stored
// as JSON numbers, always as strings, so files are byte-stable).

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace schemekit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<BigInt>;

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

inline double to_double(const Rational& r) {
    return r.numerator().convert_to<double>() / r.denominator().convert_to<double>();
}

inline Rational rational_pow(const Rational& base, long long e) {
    if (e < 0) {
        if (base.numerator() == 0) throw std::domain_error("rational_pow: 0^negative");
        return rational_pow(Rational(base.denominator(), base.numerator()), -e);
    }
    Rational acc(1), b = base;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

// Accepts "-12", "3.25", "1e3", "-2.5e-2" and exact fractions "p/q".
inline Rational parse_rational(std::string_view s) {
    if (s.empty()) throw ParseError("empty numeric literal");
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = parse_rational(s.substr(0, slash));
        auto den = parse_rational(s.substr(slash + 1));
        if (den.numerator() == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
        return num / den;
    }
    size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') neg = (s[i++] == '-');
    BigInt mant = 0;
    long long frac_digits = 0, exp10 = 0;
    bool any = false;
    for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) { mant = mant * 10 + (s[i] - '0'); any = true; }
    if (i < s.size() && s[i] == '.') {
        ++i;
        for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) {
            mant = mant * 10 + (s[i] - '0');
            ++frac_digits;
            any = true;
        }
    }
    if (!any) throw ParseError("malformed numeric literal '" + std::string(s) + "'");
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = (s[i++] == '-');
        if (i == s.size()) throw ParseError("malformed exponent in '" + std::string(s) + "'");
        for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) exp10 = exp10 * 10 + (s[i] - '0');
        if (eneg) exp10 = -exp10;
    }
    if (i != s.size()) throw ParseError("trailing characters in numeric literal '" + std::string(s) + "'");
    if (neg) mant = -mant;
    Rational r(mant, 1);
    long long shift = exp10 - frac_digits;
    if (shift > 0) r *= rational_pow(Rational(10), shift);
    if (shift < 0) r /= rational_pow(Rational(10), -shift);
    return r;
}

// Exact textual form: terminating decimal when the denominator is 2^a 5^b,
// otherwise "p/q". Round-trips through parse_rational.
inline std::string rational_to_string(const Rational& r) {
    BigInt num = r.numerator(), den = r.denominator();
    BigInt d = den;
    long long twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1) return num.str() + "/" + den.str();
    long long digits = std::max(twos, fives);
    if (digits == 0) return num.str();
    BigInt scaled = num;
    for (long long k = twos; k < digits; ++k) scaled *= 2;
    for (long long k = fives; k < digits; ++k) scaled *= 5;
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string s = scaled.str();
    if ((long long)s.size() <= digits) s.insert(0, digits - s.size() + 1, '0');
    s.insert(s.size() - digits, ".");
    return (neg ? "-" : "") + s;
}

// Shortest round-trip text for a double (serialization of measured reals).
inline std::string format_real(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_real(std::string_view s) {
    double v;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ParseError("malformed real literal '" + std::string(s) + "'");
    return v;
}

// Relative comparison of exp(llog) vs exp(rlog) without forming the powers.
inline bool pow_equal(double llog, double rlog, double rel_tol) {
    return std::abs(std::expm1(llog - rlog)) <= rel_tol;
}

inline bool rel_equal(double a, double b, double rel_tol) {
    double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) <= rel_tol * scale;
}

}  // namespace schemekit
