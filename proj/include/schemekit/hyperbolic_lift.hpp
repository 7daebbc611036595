#pragma once
// Canonical lift of a hyperbolic SL(2,Z) matrix to an automorphism of F2 that
// preserves the boundary commutator [x0, x1], plus an exact conjugating
// automorphism between the lifts of two GL(2,Z)-conjugate matrices.
//
// Construction: the twists
//   R-twist: x0 ↦ x0 x1, x1 ↦ x1      (abelianization R = [[1,1],[0,1]])
//   L-twist: x0 ↦ x0,    x1 ↦ x1 x0   (abelianization L = [[1,0],[1,1]])
// both fix x0 x1 x0^-1 x1^-1 exactly. A trace>2 matrix M is conjugated into the
// nonnegative cone by a short word U in R^±1, L^±1 (BFS), the nonnegative matrix
// is peeled into a positive word in R, L, and that word is rotated to its
// lexicographically minimal cyclic form C (rotation prefix absorbed into U).
// Conjugate matrices share the same C, so with X = twist(U):
//   lift(M) = X^-1 ∘ twist(C) ∘ X,   conjugator lift(A) → lift(A'): X'^-1 ∘ X.

#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "schemekit/mat2.hpp"
#include "schemekit/word.hpp"

namespace schemekit {

struct NonHyperbolic : std::runtime_error {
    explicit NonHyperbolic(const std::string& m) : std::runtime_error(m) {}
};

namespace detail {

// Twist letters: 'R', 'r' (=R^-1), 'L', 'l' (=L^-1).
inline const FreeGroupAut& twist(char letter) {
    static const FreeGroupAut R{2, {parse_word("x0 x1"), parse_word("x1")}};
    static const FreeGroupAut Ri{2, {parse_word("x0 x1^-1"), parse_word("x1")}};
    static const FreeGroupAut L{2, {parse_word("x0"), parse_word("x1 x0")}};
    static const FreeGroupAut Li{2, {parse_word("x0"), parse_word("x1 x0^-1")}};
    switch (letter) {
        case 'R': return R;
        case 'r': return Ri;
        case 'L': return L;
        case 'l': return Li;
    }
    throw std::logic_error("unknown twist letter");
}

inline Mat2 twist_matrix(char letter) {
    switch (letter) {
        case 'R': return {1, 1, 0, 1};
        case 'r': return {1, -1, 0, 1};
        case 'L': return {1, 0, 1, 1};
        case 'l': return {1, 0, -1, 1};
    }
    throw std::logic_error("unknown twist letter");
}

// Fold a letter word into an automorphism so that abelianization(result) equals
// the matrix product of the letters read left to right. The abelianization map
// is anti-homomorphic under our row convention, hence the left-composition fold.
inline FreeGroupAut twist_word(const std::string& word) {
    FreeGroupAut acc = identity_aut(2);
    for (char ch : word) acc = compose(twist(ch), acc);
    return acc;
}

inline std::string invert_letters(const std::string& word) {
    std::string out;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        char ch = *it;
        out += (ch == 'R' ? 'r' : ch == 'r' ? 'R' : ch == 'L' ? 'l' : 'L');
    }
    return out;
}

struct Mat2Less {
    bool operator()(const Mat2& x, const Mat2& y) const {
        return std::tie(x.a, x.b, x.c, x.d) < std::tie(y.a, y.b, y.c, y.d);
    }
};

// BFS over conjugations g^-1 M g, g in {R, R^-1, L, L^-1}, until all entries >= 0.
// Returns the conjugating letter word U (so result = twist-product(U)^-1 ... ).
inline std::pair<std::string, Mat2> positivize(const Mat2& m) {
    auto nonneg = [](const Mat2& x) { return x.a >= 0 && x.b >= 0 && x.c >= 0 && x.d >= 0; };
    std::map<Mat2, std::string, Mat2Less> seen;
    std::deque<Mat2> queue;
    seen[m] = "";
    queue.push_back(m);
    const char gens[4] = {'R', 'r', 'L', 'l'};
    while (!queue.empty()) {
        Mat2 cur = queue.front();
        queue.pop_front();
        if (nonneg(cur)) return {seen[cur], cur};
        if (seen.size() > 200000) break;
        for (char g : gens) {
            Mat2 gi = twist_matrix(g == 'R' ? 'r' : g == 'r' ? 'R' : g == 'L' ? 'l' : 'L');
            Mat2 next = mul(mul(gi, cur), twist_matrix(g));
            if (std::max({std::abs(next.a), std::abs(next.b), std::abs(next.c), std::abs(next.d)}) >
                1'000'000'000'000LL)
                continue;
            if (seen.emplace(next, seen[cur] + g).second) queue.push_back(next);
        }
    }
    throw NonHyperbolic("could not conjugate matrix into the nonnegative cone");
}

// Peel a nonnegative det-1 matrix into a word in R, L (read left to right as a
// matrix product). Row domination decides the next factor.
inline std::string positive_decompose(Mat2 m) {
    std::string word;
    while (!(m == mat2_identity())) {
        if (word.size() > 10000) throw NonHyperbolic("runaway positive decomposition");
        if (m.a >= m.c && m.b >= m.d) {
            // m = R * rest, rest = R^-1 m
            m = mul(twist_matrix('r'), m);
            word += 'R';
        } else if (m.c >= m.a && m.d >= m.b) {
            m = mul(twist_matrix('l'), m);
            word += 'L';
        } else {
            throw NonHyperbolic("matrix is not a positive R/L product");
        }
    }
    if (word.empty()) throw NonHyperbolic("identity action is not hyperbolic");
    return word;
}

// Lexicographically minimal rotation with R < L; smallest rotation index wins ties.
inline size_t canonical_rotation(const std::string& w) {
    auto key = [&](size_t start, size_t k) { return w[(start + k) % w.size()]; };
    auto less = [&](size_t i, size_t j) {
        for (size_t k = 0; k < w.size(); ++k) {
            char a = key(i, k), b = key(j, k);
            if (a != b) return (a == 'R');  // 'R' sorts before 'L'
        }
        return i < j;
    };
    size_t best = 0;
    for (size_t i = 1; i < w.size(); ++i)
        if (less(i, best)) best = i;
    return best;
}

struct CanonicalForm {
    std::string cyclic;  // canonical positive word C
    std::string setup;   // letter word U with twist(U)^-1 twist(C) twist(U) lifting M
};

inline CanonicalForm canonical_form(const Mat2& m) {
    if (det(m) != 1 || trace(m) <= 2)
        throw NonHyperbolic("canonical twist lift needs det = 1 and trace > 2, got " + mat2_to_string(m));
    auto [upath, pos] = positivize(m);
    std::string word = positive_decompose(pos);
    size_t rot = canonical_rotation(word);
    std::string cyclic = word.substr(rot) + word.substr(0, rot);
    // M = U^-1 (prefix C-part) U with word = prefix + suffix and cyclic = suffix + prefix;
    // absorbing the prefix into the setup word keeps the identity exact.
    std::string setup = word.substr(0, rot) + upath;
    return {cyclic, setup};
}

}  // namespace detail

// Aut(F2) lift of a trace>2, det 1 matrix; abelianization(lift(M)) == M and the
// boundary commutator x0 x1 x0^-1 x1^-1 is fixed exactly.
inline FreeGroupAut hyperbolic_lift(const Mat2& m) {
    auto cf = detail::canonical_form(m);
    FreeGroupAut X = detail::twist_word(cf.setup);
    FreeGroupAut Xi = detail::twist_word(detail::invert_letters(cf.setup));
    return compose(compose(Xi, detail::twist_word(cf.cyclic)), X);
}

// Exact (psi, psi_inv) with psi ∘ hyperbolic_lift(A) ∘ psi^-1 == hyperbolic_lift(B).
// nullopt when A, B are not conjugate through this canonical form (e.g. different
// cyclic words, which for trace>2 matrices means not GL(2,Z)-conjugate).
inline std::optional<std::pair<FreeGroupAut, FreeGroupAut>> conjugating_automorphism(const Mat2& A,
                                                                                       const Mat2& B) {
    auto ca = detail::canonical_form(A);
    auto cb = detail::canonical_form(B);
    if (ca.cyclic != cb.cyclic) return std::nullopt;
    FreeGroupAut XA = detail::twist_word(ca.setup);
    FreeGroupAut XAi = detail::twist_word(detail::invert_letters(ca.setup));
    FreeGroupAut XB = detail::twist_word(cb.setup);
    FreeGroupAut XBi = detail::twist_word(detail::invert_letters(cb.setup));
    return std::make_pair(compose(XBi, XA), compose(XAi, XB));
}

}  // namespace schemekit
