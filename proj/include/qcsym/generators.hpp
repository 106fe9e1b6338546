#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qcsym/error.hpp"

namespace qcsym {

/// 2×2 integer matrix of a reflection generator acting on the hyperbolic half-plane.
struct GeneratorMatrix {
    std::array<std::array<std::int64_t, 2>, 2> m{{{1, 0}, {0, 1}}};

    static GeneratorMatrix identity() { return {}; }

    std::int64_t det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

    bool is_plus_minus_identity() const {
        return m[0][1] == 0 && m[1][0] == 0 && m[0][0] == m[1][1] && (m[0][0] == 1 || m[0][0] == -1);
    }

    friend GeneratorMatrix operator*(const GeneratorMatrix& x, const GeneratorMatrix& y) {
        GeneratorMatrix r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.m[i][j] = x.m[i][0] * y.m[0][j] + x.m[i][1] * y.m[1][j];
        return r;
    }

    friend bool operator==(const GeneratorMatrix&, const GeneratorMatrix&) = default;
};

/// R₁, R₂, R₃ for the maps 1/z̄, -z̄ + 1 and -z̄.
inline std::vector<GeneratorMatrix> half_plane_reflection_generators() {
    return {GeneratorMatrix{{{{0, 1}, {1, 0}}}}, GeneratorMatrix{{{{-1, 0}, {1, 1}}}},
            GeneratorMatrix{{{{-1, 0}, {0, 1}}}}};
}

struct RelationReport {
    std::string word;
    GeneratorMatrix product;
    bool holds = false; // product is ±E
};

namespace detail {

// Words: sequences of "R<k>" (k ASCII or a subscript digit, 1-based) and
// parenthesised groups, each optionally raised to a power with "^k" or a
// superscript digit. Example: "(R₁R₂)²" or "(R1R2)^3".
class WordParser {
public:
    WordParser(std::string_view text, std::size_t n_gens) : s_(text), n_(n_gens) {}

    std::vector<std::size_t> parse() {
        auto out = sequence();
        if (pos_ != s_.size()) throw ParseError("unexpected character in word", pos_);
        return out;
    }

private:
    std::string_view s_;
    std::size_t n_;
    std::size_t pos_ = 0;

    void skip_space() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '*' || s_[pos_] == '.')) ++pos_;
    }

    bool starts_with(std::string_view p) const { return s_.substr(pos_, p.size()) == p; }

    // Reads a digit in one of the given encodings: ASCII, subscript (₀…₉) or superscript (⁰…⁹).
    int digit(bool allow_ascii, bool allow_sub, bool allow_sup) {
        if (pos_ >= s_.size()) return -1;
        const auto c = static_cast<unsigned char>(s_[pos_]);
        if (allow_ascii && c >= '0' && c <= '9') {
            ++pos_;
            return c - '0';
        }
        if (pos_ + 1 < s_.size() && allow_sup && c == 0xC2) {
            const auto c1 = static_cast<unsigned char>(s_[pos_ + 1]);
            const int v = c1 == 0xB9 ? 1 : c1 == 0xB2 ? 2 : c1 == 0xB3 ? 3 : -1;
            if (v >= 0) pos_ += 2;
            return v;
        }
        if (pos_ + 2 < s_.size() && c == 0xE2) {
            const auto c1 = static_cast<unsigned char>(s_[pos_ + 1]);
            const auto c2 = static_cast<unsigned char>(s_[pos_ + 2]);
            if (allow_sub && c1 == 0x82 && c2 >= 0x80 && c2 <= 0x89) {
                pos_ += 3;
                return c2 - 0x80;
            }
            if (allow_sup && c1 == 0x81 && (c2 == 0xB0 || (c2 >= 0xB4 && c2 <= 0xB9))) {
                pos_ += 3;
                return c2 == 0xB0 ? 0 : c2 - 0xB0;
            }
        }
        return -1;
    }

    std::size_t number(bool ascii, bool sub, bool sup) {
        const auto start = pos_;
        int d = digit(ascii, sub, sup);
        if (d < 0) throw ParseError("expected a number", start);
        std::size_t v = static_cast<std::size_t>(d);
        while ((d = digit(ascii, sub, sup)) >= 0) v = v * 10 + static_cast<std::size_t>(d);
        return v;
    }

    std::size_t exponent() {
        skip_space();
        if (pos_ < s_.size() && s_[pos_] == '^') {
            ++pos_;
            return number(true, false, false);
        }
        const auto save = pos_;
        if (digit(false, false, true) >= 0) {
            pos_ = save;
            return number(false, false, true);
        }
        return 1;
    }

    std::vector<std::size_t> sequence() {
        std::vector<std::size_t> out;
        for (;;) {
            skip_space();
            if (pos_ >= s_.size() || s_[pos_] == ')') return out;
            std::vector<std::size_t> term;
            if (s_[pos_] == '(') {
                const auto open = pos_++;
                term = sequence();
                if (pos_ >= s_.size() || s_[pos_] != ')') throw ParseError("unbalanced parenthesis", open);
                ++pos_;
            } else if (s_[pos_] == 'R' || s_[pos_] == 'r') {
                const auto at = pos_++;
                const auto k = number(true, true, false);
                if (k < 1 || k > n_) throw ParseError("generator index out of range", at);
                term.push_back(k - 1);
            } else if (starts_with("E") || starts_with("e")) {
                ++pos_;
            } else {
                throw ParseError("unexpected character in word", pos_);
            }
            const auto e = exponent();
            for (std::size_t i = 0; i < e; ++i) out.insert(out.end(), term.begin(), term.end());
        }
    }
};

} // namespace detail

/// Generator indices (0-based) of a word such as "R3R3" or "(R₁R₂)²".
inline std::vector<std::size_t> parse_generator_word(std::string_view word, std::size_t n_gens) {
    return detail::WordParser(word, n_gens).parse();
}

inline GeneratorMatrix evaluate_word(const std::vector<GeneratorMatrix>& gens, const std::vector<std::size_t>& word) {
    GeneratorMatrix acc;
    for (auto i : word) acc = acc * gens.at(i);
    return acc;
}

/// Evaluates every relation word and reports whether it equals ±E (projective identity).
inline std::vector<RelationReport> check_generator_relations(const std::vector<GeneratorMatrix>& gens,
                                                             const std::vector<std::string>& relations) {
    std::vector<RelationReport> out;
    out.reserve(relations.size());
    for (const auto& w : relations) {
        const auto product = evaluate_word(gens, parse_generator_word(w, gens.size()));
        out.push_back({w, product, product.is_plus_minus_identity()});
    }
    return out;
}

} // namespace qcsym
