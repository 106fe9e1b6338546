#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <deque>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcsym/error.hpp"
#include "qcsym/point_index.hpp"
#include "qcsym/quadratic.hpp"

namespace qcsym {

using cplx = std::complex<double>;

/// Angle reduced to (-π, π].
inline double normalize_angle(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a <= -std::numbers::pi) a += two_pi;
    if (a > std::numbers::pi) a -= two_pi;
    return a;
}

enum class SimilarityKind { identity, motion, K, L, M };

/**
 * z ↦ O + k·e^{iφ}·R(z - O), where R is the identity or the reflection in
 * the line through O at angle `axis_angle`.
 *
 * Sign convention: the reflection in the line at angle α is w ↦ e^{2iα}·w̄,
 * so a reflecting operation is the single map w ↦ k·e^{i(φ + 2α)}·w̄. Its
 * "turn" is φ + 2α. Composition adds turns when the outer operation is a
 * motion and subtracts the inner turn when the outer one reflects.
 */
struct Similarity2D {
    double k = 1.0;
    double phi = 0.0;
    bool reflect = false;
    double axis_angle = 0.0;
    cplx center{};

    static Similarity2D homothety(double k, cplx center = {}) { return {k, 0.0, false, 0.0, center}; }
    static Similarity2D spiral(double k, double phi, cplx center = {}) { return {k, normalize_angle(phi), false, 0.0, center}; }
    static Similarity2D rotation(double phi, cplx center = {}) { return {1.0, normalize_angle(phi), false, 0.0, center}; }
    static Similarity2D mirror(double axis_angle = 0.0, cplx center = {}) { return {1.0, 0.0, true, axis_angle, center}; }
    static Similarity2D homothetic_reflection(double k, double axis_angle = 0.0, cplx center = {}) {
        return {k, 0.0, true, axis_angle, center};
    }

    double turn() const { return reflect ? phi + 2.0 * axis_angle : phi; }

    SimilarityKind kind(double tol = 1e-12) const {
        if (reflect) return SimilarityKind::M;
        const bool unit = std::abs(k - 1.0) <= tol;
        const bool no_turn = std::abs(normalize_angle(phi)) <= tol;
        if (no_turn) return unit ? SimilarityKind::identity : SimilarityKind::K;
        return unit ? SimilarityKind::motion : SimilarityKind::L;
    }

    Similarity2D inverse() const {
        if (reflect) return {1.0 / k, phi, true, axis_angle, center}; // reflecting ops invert with the same turn
        return {1.0 / k, normalize_angle(-phi), false, 0.0, center};
    }
};

inline cplx apply_similarity2d(const Similarity2D& op, cplx z) {
    cplx w = z - op.center;
    if (op.reflect) w = std::polar(1.0, 2.0 * op.axis_angle) * std::conj(w);
    return op.center + op.k * std::polar(1.0, op.phi) * w;
}

/// outer ∘ inner (inner applied first). Both must share the special point.
inline Similarity2D compose_similarity2d(const Similarity2D& outer, const Similarity2D& inner) {
    if (outer.center != inner.center) throw Error("special points differ");
    const double k = outer.k * inner.k;
    const double turn = outer.reflect ? outer.turn() - inner.turn() : outer.turn() + inner.turn();
    if (outer.reflect != inner.reflect) {
        // reflecting result: store the turn entirely in the axis
        return {k, 0.0, true, normalize_angle(turn) / 2.0, outer.center};
    }
    return {k, normalize_angle(turn), false, 0.0, outer.center};
}

/// Pointwise comparison on the two points center+1 and center+i (a similarity is fixed by its action there and on O).
inline bool same_similarity(const Similarity2D& x, const Similarity2D& y, double tol = 1e-12) {
    if (x.center != y.center || x.reflect != y.reflect) return false;
    for (cplx probe : {cplx{1.0, 0.0}, cplx{0.0, 1.0}}) {
        const cplx z = x.center + probe;
        if (std::abs(apply_similarity2d(x, z) - apply_similarity2d(y, z)) > tol * std::max(1.0, x.k)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// 3D

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Homothety about O composed with a rotation by φ about `axis` and optionally the reflection in the plane ⟂ axis.
struct Similarity3D {
    double k = 1.0;
    Vec3 axis{0.0, 0.0, 1.0};
    double phi = 0.0;
    bool reflect = false;
    Vec3 center{};

    void validate() const {
        if (!(k > 0.0)) throw Error("similarity coefficient must be positive");
        if (std::abs(norm(axis) - 1.0) > 1e-12) throw Error("rotation axis must be a unit vector");
    }
};

inline Vec3 apply_similarity3d(const Similarity3D& op, const Vec3& p) {
    const Vec3 v = p - op.center;
    const Vec3& l = op.axis;
    const double c = std::cos(op.phi), s = std::sin(op.phi);
    // Rodrigues
    Vec3 r = c * v + s * cross(l, v) + ((1.0 - c) * dot(l, v)) * l;
    if (op.reflect) r = r - (2.0 * dot(r, l)) * l;
    return op.center + op.k * r;
}

/// Product of two operations on a common axis and center; rotation about l commutes with the reflection ⟂ l.
inline Similarity3D compose_similarity3d(const Similarity3D& outer, const Similarity3D& inner) {
    if (norm(outer.center - inner.center) != 0.0) throw Error("special points differ");
    double inner_phi = inner.phi;
    if (norm(outer.axis - inner.axis) > 1e-12) {
        if (norm(outer.axis + inner.axis) > 1e-12) throw Error("operations do not share an axis");
        inner_phi = -inner_phi;
    }
    return {outer.k * inner.k, outer.axis, normalize_angle(outer.phi + inner_phi), outer.reflect != inner.reflect,
            outer.center};
}

// ---------------------------------------------------------------------------
// groups and orbits

struct Annulus {
    double r_min = 0.0;
    double r_max = 1.0;
};

struct SimilarityGroup {
    std::vector<Similarity2D> generators;
    std::string symbol;
    Annulus annulus{};
    int rotation_order = 1;
    double coefficient = 1.0;

    cplx center() const { return generators.empty() ? cplx{} : generators.front().center; }

    void validate() const {
        for (const auto& g : generators)
            if (g.center != center()) throw Error("generators must share one special point");
        if (!(annulus.r_min < annulus.r_max)) throw Error("annulus requires r_min < r_max");
    }
};

/// Homothety coefficient bound to a rotation order: τ for 5 and 10, ρ for 8, η for 12, otherwise 2.
inline double default_coefficient(int rotation_order) {
    switch (rotation_order) {
    case 5:
    case 10: return MetallicMean::tau().value();
    case 8: return MetallicMean::rho().value();
    case 12: return MetallicMean::eta().value();
    default: return 2.0;
    }
}

inline constexpr std::size_t default_orbit_budget = 1'000'000;

/**
 * Closure of the seed under the generators and their inverses, restricted to
 * the annulus r_min ≤ |z - O| ≤ r_max and deduplicated at 1e-9. Points are
 * expanded breadth-first, so every reported point is reachable through the
 * annulus.
 */
inline std::vector<cplx> orbit(const SimilarityGroup& group, std::span<const cplx> seed,
                               std::size_t budget = default_orbit_budget, double tolerance = 1e-9) {
    group.validate();
    if (group.generators.empty()) throw Error("orbit of an empty group");
    const cplx o = group.center();
    const auto inside = [&](cplx z) {
        const double r = std::abs(z - o);
        const double slack = tolerance * std::max(1.0, r);
        return r >= group.annulus.r_min - slack && r <= group.annulus.r_max + slack;
    };

    std::vector<Similarity2D> ops;
    for (const auto& g : group.generators) {
        ops.push_back(g);
        ops.push_back(g.inverse());
    }

    PointIndex index(tolerance);
    std::deque<std::size_t> queue;
    const auto visit = [&](cplx z) {
        if (!inside(z) || index.contains(z)) return;
        if (index.size() >= budget) throw Error("orbit not discrete in annulus (budget exceeded)");
        queue.push_back(index.insert(z));
    };
    for (const auto& s : seed) {
        if (std::abs(s - o) == 0.0) throw Error("seed point coincides with the special point");
        visit(s);
    }
    while (!queue.empty()) {
        const cplx z = index.points()[queue.front()];
        queue.pop_front();
        for (const auto& op : ops) visit(apply_similarity2d(op, z));
    }
    return index.points();
}

inline double min_pairwise_distance(std::span<const cplx> pts) {
    double best = HUGE_VAL;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::min(best, std::abs(pts[i] - pts[j]));
    return best;
}

// ---------------------------------------------------------------------------
// symbols

namespace detail {

// n ["m"] ("K" | "L" | "M") ["(" param {"," param} ")"], param := ("φ" | "phi" | "k") "=" expr
// expr := [sign] [number] ["π" | "pi"] ["/" number]   e.g. −2π/5, -pi/5, 0.25, 2
class SymbolParser {
public:
    explicit SymbolParser(std::string_view s) : s_(s) {}

    SimilarityGroup parse(Annulus annulus, std::optional<cplx> center) {
        SimilarityGroup g;
        g.symbol = std::string(s_);
        skip_space();
        const auto n_at = pos_;
        const double n = unsigned_number();
        if (n != std::floor(n) || n < 1) throw ParseError("rotation order must be a positive integer", n_at);
        g.rotation_order = static_cast<int>(n);
        skip_space();
        bool mirror = false;
        if (peek() == 'm') {
            mirror = true;
            ++pos_;
        }
        skip_space();
        const char op = peek();
        if (op != 'K' && op != 'L' && op != 'M') throw ParseError("expected operation K, L or M", pos_);
        ++pos_;
        double phi = 0.0;
        bool have_phi = false;
        double k = default_coefficient(g.rotation_order);
        skip_space();
        if (peek() == '(') {
            ++pos_;
            for (;;) {
                skip_space();
                const auto at = pos_;
                if (consume("φ") || consume("phi") || consume("ϕ")) {
                    expect('=');
                    phi = expr();
                    have_phi = true;
                } else if (consume("k")) {
                    expect('=');
                    k = expr();
                    if (!(k > 0.0)) throw ParseError("coefficient must be positive", at);
                } else {
                    throw ParseError("expected parameter φ or k", at);
                }
                skip_space();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                expect(')');
                break;
            }
        }
        skip_space();
        if (pos_ != s_.size()) throw ParseError("trailing characters in symbol", pos_);
        if (op == 'L' && !have_phi) throw ParseError("operation L requires an angle φ", pos_);
        if (op != 'L' && have_phi) throw ParseError("angle φ only applies to L", pos_);

        const cplx o = center.value_or(cplx{});
        if (g.rotation_order > 1)
            g.generators.push_back(Similarity2D::rotation(2.0 * std::numbers::pi / g.rotation_order, o));
        if (mirror) g.generators.push_back(Similarity2D::mirror(0.0, o));
        switch (op) {
        case 'K': g.generators.push_back(Similarity2D::homothety(k, o)); break;
        case 'L': g.generators.push_back(Similarity2D::spiral(k, phi, o)); break;
        case 'M': g.generators.push_back(Similarity2D::homothetic_reflection(k, 0.0, o)); break;
        }
        g.coefficient = k;
        g.annulus = annulus.r_max > 0.0 ? annulus : Annulus{std::pow(k, -3.0), std::pow(k, 3.0)};
        return g;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    void skip_space() {
        while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
    }

    bool consume(std::string_view t) {
        if (s_.substr(pos_, t.size()) == t) {
            pos_ += t.size();
            return true;
        }
        return false;
    }

    void expect(char c) {
        skip_space();
        if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
        ++pos_;
        skip_space();
    }

    bool has_number() const { return pos_ < s_.size() && ((s_[pos_] >= '0' && s_[pos_] <= '9') || s_[pos_] == '.'); }

    double unsigned_number() {
        const auto start = pos_;
        while (has_number()) ++pos_;
        if (start == pos_) throw ParseError("expected a number", start);
        try {
            return std::stod(std::string(s_.substr(start, pos_ - start)));
        } catch (const std::exception&) {
            throw ParseError("malformed number", start);
        }
    }

    double expr() {
        skip_space();
        const auto start = pos_;
        double sign = 1.0;
        if (consume("-") || consume("−")) sign = -1.0;
        else consume("+");
        double value = 1.0;
        bool any = false;
        if (has_number()) {
            value = unsigned_number();
            any = true;
        }
        consume("*");
        if (consume("π") || consume("pi")) {
            value *= std::numbers::pi;
            any = true;
        }
        if (!any) throw ParseError("expected an angle or number", start);
        skip_space();
        if (consume("/")) {
            skip_space();
            const auto at = pos_;
            const double den = unsigned_number();
            if (den == 0.0) throw ParseError("division by zero", at);
            value /= den;
        }
        return sign * value;
    }
};

} // namespace detail

/**
 * Parses a similarity-group symbol such as "10L(φ=−π/5)", "10mL(φ=π/5)" or
 * "1K". The generators are the rotation by 2π/n (omitted for n = 1), a
 * mirror through O when "m" is present, and the K/L/M operation with
 * coefficient `k` (default bound to n). A zero r_max selects the annulus
 * [k⁻³, k³].
 */
inline SimilarityGroup parse_symbol(std::string_view text, Annulus annulus = {0.0, 0.0},
                                    std::optional<cplx> center = std::nullopt) {
    return detail::SymbolParser(text).parse(annulus, center);
}

/// One letter of a group word: a generator or its inverse.
struct Letter {
    std::size_t generator = 0;
    bool inverse = false;
};

using Word = std::vector<Letter>;

inline cplx apply_word(const SimilarityGroup& g, const Word& w, cplx z) {
    for (const auto& l : w) {
        const auto& op = g.generators.at(l.generator);
        z = apply_similarity2d(l.inverse ? op.inverse() : op, z);
    }
    return z;
}

/// Maximum displacement of the special point over the given words.
inline double fixed_point_check(const SimilarityGroup& g, std::span<const Word> words) {
    const cplx o = g.center();
    double worst = 0.0;
    for (const auto& w : words) worst = std::max(worst, std::abs(apply_word(g, w, o) - o));
    return worst;
}

template <typename Rng>
std::vector<Word> random_words(const SimilarityGroup& g, std::size_t count, std::size_t max_len, Rng& rng) {
    if (g.generators.empty()) return {};
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<std::size_t> gen(0, g.generators.size() - 1);
    std::bernoulli_distribution inv(0.5);
    std::vector<Word> out(count);
    for (auto& w : out) {
        w.resize(len(rng));
        for (auto& l : w) l = {gen(rng), inv(rng)};
    }
    return out;
}

} // namespace qcsym
