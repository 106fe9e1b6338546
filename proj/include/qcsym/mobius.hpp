#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <ostream>

#include "qcsym/error.hpp"

namespace qcsym {

using cplx = std::complex<double>;

/// A point of the Riemann sphere: a finite complex number or ∞.
class ExtendedComplex {
public:
    constexpr ExtendedComplex() = default;
    constexpr ExtendedComplex(cplx z) : z_(z) {}
    constexpr ExtendedComplex(double x) : z_(x, 0.0) {}

    static constexpr ExtendedComplex infinity() {
        ExtendedComplex e;
        e.infinite_ = true;
        return e;
    }

    constexpr bool is_infinite() const { return infinite_; }
    constexpr bool is_finite() const { return !infinite_; }

    cplx value() const {
        if (infinite_) throw Error("value() of the point at infinity");
        return z_;
    }

    // Distance in the plane; ∞ is at distance 0 from itself and ∞ from everything else.
    friend double distance(const ExtendedComplex& x, const ExtendedComplex& y) {
        if (x.infinite_ || y.infinite_) return x.infinite_ == y.infinite_ ? 0.0 : HUGE_VAL;
        return std::abs(x.z_ - y.z_);
    }

    friend bool operator==(const ExtendedComplex& x, const ExtendedComplex& y) {
        return x.infinite_ == y.infinite_ && (x.infinite_ || x.z_ == y.z_);
    }

private:
    cplx z_{};
    bool infinite_ = false;
};

inline std::ostream& operator<<(std::ostream& os, const ExtendedComplex& z) {
    if (z.is_infinite()) return os << "inf";
    return os << z.value();
}

/**
 * Fractional-linear map w = (a·u + b)/(c·u + d), with u = z̄ for an
 * anticonformal map and u = z otherwise. Coefficients are never assumed
 * to be normalised to det = 1.
 */
struct MobiusMap {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};
    bool anticonformal = false;

    MobiusMap() = default;
    MobiusMap(cplx a, cplx b, cplx c, cplx d, bool anticonformal = false)
        : a(a), b(b), c(c), d(d), anticonformal(anticonformal) {
        if (std::abs(det()) == 0.0) throw Error("Mobius map with zero determinant");
    }

    static MobiusMap identity() { return {}; }
    static MobiusMap translation(cplx t) { return {1.0, t, 0.0, 1.0}; }
    static MobiusMap scaling(cplx s) { return {s, 0.0, 0.0, 1.0}; }
    static MobiusMap reciprocal() { return {0.0, 1.0, 1.0, 0.0}; }

    cplx det() const { return a * d - b * c; }

    MobiusMap inverse() const {
        // For anticonformal maps, w = M(z̄) ⇒ z = conj(M⁻¹(w)) = conj(M⁻¹)(w̄).
        if (!anticonformal) return {d, -b, -c, a, false};
        return {std::conj(d), -std::conj(b), -std::conj(c), std::conj(a), true};
    }
};

inline ExtendedComplex mobius_apply(const MobiusMap& m, const ExtendedComplex& z) {
    if (z.is_infinite()) {
        if (m.c == cplx{}) return ExtendedComplex::infinity();
        return ExtendedComplex(m.a / m.c);
    }
    const cplx u = m.anticonformal ? std::conj(z.value()) : z.value();
    const cplx den = m.c * u + m.d;
    if (den == cplx{}) return ExtendedComplex::infinity();
    return ExtendedComplex((m.a * u + m.b) / den);
}

/// The map z ↦ outer(inner(z)).
inline MobiusMap mobius_compose(const MobiusMap& outer, const MobiusMap& inner) {
    // If outer acts on w̄ then outer(inner(z)) = outer_matrix · conj(inner_matrix) applied to conj(u).
    const cplx a2 = outer.anticonformal ? std::conj(inner.a) : inner.a;
    const cplx b2 = outer.anticonformal ? std::conj(inner.b) : inner.b;
    const cplx c2 = outer.anticonformal ? std::conj(inner.c) : inner.c;
    const cplx d2 = outer.anticonformal ? std::conj(inner.d) : inner.d;
    return {outer.a * a2 + outer.b * c2, outer.a * b2 + outer.b * d2, outer.c * a2 + outer.d * c2,
            outer.c * b2 + outer.d * d2, outer.anticonformal != inner.anticonformal};
}

/// Equality up to a nonzero complex scale factor, relative tolerance `tol`.
inline bool projectively_equal(const MobiusMap& x, const MobiusMap& y, double tol = 1e-12) {
    if (x.anticonformal != y.anticonformal) return false;
    const std::array<cplx, 4> p{x.a, x.b, x.c, x.d};
    const std::array<cplx, 4> q{y.a, y.b, y.c, y.d};
    // pick the largest entry of x to fix the scale
    std::size_t k = 0;
    for (std::size_t i = 1; i < 4; ++i)
        if (std::abs(p[i]) > std::abs(p[k])) k = i;
    if (std::abs(q[k]) == 0.0) return false;
    const cplx s = p[k] / q[k];
    double scale = 0.0;
    for (const auto& v : p) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < 4; ++i)
        if (std::abs(p[i] - s * q[i]) > tol * scale) return false;
    return true;
}

/**
 * Factor a conformal map with c ≠ 0 into translation, reciprocal, rotation
 * with dilation, translation: m = w4 ∘ w3 ∘ w2 ∘ w1 with
 * w1 = z + d/c, w2 = 1/z, w3 = -(ad - bc)/c² · z, w4 = z + a/c.
 */
inline std::array<MobiusMap, 4> mobius_decompose(const MobiusMap& m) {
    if (m.anticonformal) throw Error("decomposition requires a conformal map");
    if (m.c == cplx{}) throw Error("affine map, no inversion factor");
    return {MobiusMap::translation(m.d / m.c), MobiusMap::reciprocal(), MobiusMap::scaling(-m.det() / (m.c * m.c)),
            MobiusMap::translation(m.a / m.c)};
}

inline MobiusMap mobius_recompose(const std::array<MobiusMap, 4>& parts) {
    MobiusMap out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) out = mobius_compose(parts[i], out);
    return out;
}

/**
 * Circle A(x² + y²) + 2Bx + C = 0 centred on the real axis, or the vertical
 * line 2Bx + C = 0 when A = 0.
 */
struct CircleSpec {
    double A = 1.0;
    double B = 0.0;
    double C = -1.0;

    bool is_line() const { return A == 0.0; }

    void validate() const {
        if (A < 0.0) throw Error("circle coefficients require A >= 0");
        if (A == 0.0 && B == 0.0) throw Error("degenerate circle: A = B = 0");
        if (A > 0.0 && !(B * B - A * C > 0.0)) throw Error("not a real circle: B^2 - AC <= 0");
    }

    cplx center() const {
        if (is_line()) throw Error("line has no center");
        return {-B / A, 0.0};
    }

    double radius() const {
        if (is_line()) throw Error("line has no radius");
        return std::sqrt(B * B - A * C) / A;
    }

    /// For the line case: x-coordinate of the vertical line.
    double line_x() const { return -C / (2.0 * B); }

    /// Circle with given real center and radius.
    static CircleSpec from_center_radius(double cx, double r) { return {1.0, -cx, cx * cx - r * r}; }
};

/**
 * Inversion in a circle as the anticonformal map w = -(B·z̄ + C)/(A·z̄ + B).
 * With A = 0 the same formula is the reflection w = -z̄ - C/B in the line.
 */
inline MobiusMap circle_inversion(const CircleSpec& spec) {
    spec.validate();
    return {-spec.B, -spec.C, spec.A, spec.B, true};
}

} // namespace qcsym
