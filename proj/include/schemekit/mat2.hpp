#pragma once
// 2x2 integer matrices (homotopy actions and basis changes on torus components)
// and a bounded box search for a GL(2,Z) conjugator.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace schemekit {

struct Mat2 {
    // row-major: a b / c d
    long long a = 1, b = 0, c = 0, d = 1;
    friend bool operator==(const Mat2&, const Mat2&) = default;
};

inline Mat2 mat2_identity() { return {}; }

inline long long det(const Mat2& m) { return m.a * m.d - m.b * m.c; }
inline long long trace(const Mat2& m) { return m.a + m.d; }

inline Mat2 mul(const Mat2& l, const Mat2& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
            l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
}

inline bool is_unimodular(const Mat2& m) {
    long long d = det(m);
    return d == 1 || d == -1;
}

inline Mat2 inverse_unimodular(const Mat2& m) {
    long long dt = det(m);
    if (dt != 1 && dt != -1) throw std::domain_error("inverse_unimodular: determinant not ±1");
    return {m.d / dt, -m.b / dt, -m.c / dt, m.a / dt};
}

inline std::pair<long long, long long> apply(const Mat2& m, long long p, long long q) {
    return {m.a * p + m.b * q, m.c * p + m.d * q};
}

inline std::string mat2_to_string(const Mat2& m) {
    return "[[" + std::to_string(m.a) + "," + std::to_string(m.b) + "],[" +
           std::to_string(m.c) + "," + std::to_string(m.d) + "]]";
}

// First P with entries |.| <= bound, det P = ±1 and P A = B P. Deterministic
// order: identity first, then shells of growing max-|entry|, lexicographic in
// (a, b, c, d) within a shell. Returns nullopt when no conjugator fits the box.
inline std::optional<Mat2> search_gl2z_conjugator(const Mat2& A, const Mat2& B, long long bound) {
    auto works = [&](const Mat2& P) { return is_unimodular(P) && mul(P, A) == mul(B, P); };
    if (works(mat2_identity())) return mat2_identity();
    for (long long shell = 1; shell <= bound; ++shell) {
        for (long long a = -shell; a <= shell; ++a)
            for (long long b = -shell; b <= shell; ++b)
                for (long long c = -shell; c <= shell; ++c)
                    for (long long d = -shell; d <= shell; ++d) {
                        if (std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)}) != shell)
                            continue;  // only new candidates in this shell
                        Mat2 P{a, b, c, d};
                        if (works(P)) return P;
                    }
    }
    return std::nullopt;
}

}  // namespace schemekit
