#pragma once
// Free-group words in generators x0..x{r-1}, free-group endomorphisms given by
// generator images, and the exact conjugacy verifier for attractor actions.
//
// Word literal grammar (hand parser, no regex):
//   word     := syllable*            (whitespace separated; empty input = identity)
//   syllable := 'x' index ('^' exponent)?
//   index    := digits, exponent := '-'? digits (nonzero)

#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "schemekit/rational.hpp"

namespace schemekit {

struct Syllable {
    int gen = 0;
    long long exp = 0;
    friend bool operator==(const Syllable&, const Syllable&) = default;
};

// Invariant once reduced: exponents nonzero, adjacent syllables have distinct gens.
struct Word {
    std::vector<Syllable> syl;
    friend bool operator==(const Word&, const Word&) = default;
    bool empty() const { return syl.empty(); }
};

inline Word reduce(const Word& w) {
    Word out;
    for (const auto& s : w.syl) {
        if (s.exp == 0) continue;
        if (!out.syl.empty() && out.syl.back().gen == s.gen) {
            out.syl.back().exp += s.exp;
            if (out.syl.back().exp == 0) out.syl.pop_back();
        } else {
            out.syl.push_back(s);
        }
    }
    return out;
}

inline Word concat(const Word& a, const Word& b) {
    Word w;
    w.syl.reserve(a.syl.size() + b.syl.size());
    w.syl.insert(w.syl.end(), a.syl.begin(), a.syl.end());
    w.syl.insert(w.syl.end(), b.syl.begin(), b.syl.end());
    return reduce(w);
}

inline Word inverse(const Word& w) {
    Word out;
    out.syl.reserve(w.syl.size());
    for (auto it = w.syl.rbegin(); it != w.syl.rend(); ++it) out.syl.push_back({it->gen, -it->exp});
    return out;
}

inline Word word_pow(const Word& w, long long e) {
    if (e < 0) return word_pow(inverse(w), -e);
    Word acc;
    for (long long i = 0; i < e; ++i) acc = concat(acc, w);
    return acc;
}

struct RankMismatch : std::runtime_error {
    explicit RankMismatch(const std::string& m) : std::runtime_error(m) {}
};

// Endomorphism of the free group F_rank, generator i ↦ images[i].
struct FreeGroupAut {
    int rank = 0;
    std::vector<Word> images;
    friend bool operator==(const FreeGroupAut&, const FreeGroupAut&) = default;
};

inline FreeGroupAut identity_aut(int rank) {
    FreeGroupAut e;
    e.rank = rank;
    for (int i = 0; i < rank; ++i) e.images.push_back(Word{{{i, 1}}});
    return e;
}

inline Word apply(const FreeGroupAut& f, const Word& w) {
    Word out;
    for (const auto& s : w.syl) {
        if (s.gen < 0 || s.gen >= f.rank)
            throw RankMismatch("generator x" + std::to_string(s.gen) + " out of rank " + std::to_string(f.rank));
        out = concat(out, word_pow(f.images[s.gen], s.exp));
    }
    return out;
}

// compose(f, g) = f ∘ g : generator i ↦ f(g(x_i)).
inline FreeGroupAut compose(const FreeGroupAut& f, const FreeGroupAut& g) {
    if (f.rank != g.rank) throw RankMismatch("composition of endomorphisms of different rank");
    FreeGroupAut h;
    h.rank = f.rank;
    for (int i = 0; i < g.rank; ++i) h.images.push_back(apply(f, g.images[i]));
    return h;
}

inline bool is_identity(const FreeGroupAut& f) { return f == identity_aut(f.rank); }

// Row convention: entry (i, j) = signed count of generator j in images[i].
inline std::vector<std::vector<long long>> abelianization(const FreeGroupAut& f) {
    std::vector<std::vector<long long>> m(f.rank, std::vector<long long>(f.rank, 0));
    for (int i = 0; i < f.rank; ++i)
        for (const auto& s : f.images[i].syl) m[i][s.gen] += s.exp;
    return m;
}

// Exact check that psi conjugates t onto t_prime: psi ∘ t ∘ psi_inv == t_prime,
// with psi_inv a two-sided inverse of psi. Everything generator-wise and reduced.
inline bool verify_conjugacy(const FreeGroupAut& t, const FreeGroupAut& t_prime,
                             const FreeGroupAut& psi, const FreeGroupAut& psi_inv,
                             std::string* diag = nullptr) {
    if (t.rank != t_prime.rank || t.rank != psi.rank || t.rank != psi_inv.rank) {
        if (diag) *diag = "rank mismatch";
        return false;
    }
    if (!is_identity(compose(psi, psi_inv)) || !is_identity(compose(psi_inv, psi))) {
        if (diag) *diag = "psi_inv is not a two-sided inverse of psi";
        return false;
    }
    FreeGroupAut lhs = compose(compose(psi, t), psi_inv);
    if (!(lhs == t_prime)) {
        if (diag) *diag = "psi . t . psi^-1 differs from t' on some generator";
        return false;
    }
    return true;
}

// ---- word literals ----

inline std::string word_to_string(const Word& w) {
    std::string out;
    for (const auto& s : w.syl) {
        if (!out.empty()) out += ' ';
        out += 'x';
        out += std::to_string(s.gen);
        if (s.exp != 1) out += '^' + std::to_string(s.exp);
    }
    return out;
}

inline Word parse_word(std::string_view text) {
    Word w;
    size_t i = 0;
    auto fail = [&](const std::string& why) {
        throw ParseError("word literal, position " + std::to_string(i) + ": " + why);
    };
    while (i < text.size()) {
        if (text[i] == ' ' || text[i] == '\t' || text[i] == '\n') { ++i; continue; }
        if (text[i] != 'x') fail("expected generator 'x<index>'");
        ++i;
        if (i >= text.size() || text[i] < '0' || text[i] > '9') fail("expected generator index");
        long long gen = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') gen = gen * 10 + (text[i++] - '0');
        long long exp = 1;
        if (i < text.size() && text[i] == '^') {
            ++i;
            bool neg = false;
            if (i < text.size() && text[i] == '-') { neg = true; ++i; }
            if (i >= text.size() || text[i] < '0' || text[i] > '9') fail("expected exponent digits");
            exp = 0;
            while (i < text.size() && text[i] >= '0' && text[i] <= '9') exp = exp * 10 + (text[i++] - '0');
            if (exp == 0) fail("zero exponent");
            if (neg) exp = -exp;
        }
        w.syl.push_back({static_cast<int>(gen), exp});
    }
    return reduce(w);
}

}  // namespace schemekit
