#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qcsym/error.hpp"

namespace qcsym {

namespace detail {

inline std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_mul_overflow(x, y, &r)) throw Error("quadratic integer overflow");
    return r;
}

inline std::int64_t checked_add(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_add_overflow(x, y, &r)) throw Error("quadratic integer overflow");
    return r;
}

} // namespace detail

/**
 * Element b + a·w of a real quadratic ring with generator w.
 *
 * For d = 2 and d = 3 the generator is √d. For d = 5 the generator is the
 * golden ratio τ, so the ring is ℤ[τ] (which contains ℤ[√5]) and the basis
 * matches the usual power tables τⁿ = Fₙτ + Fₙ₋₁.
 */
struct QuadraticInteger {
    std::int64_t a = 0; // coefficient of the generator
    std::int64_t b = 0; // rational part
    int d = 2;

    static bool valid_base(int d) { return d == 2 || d == 3 || d == 5; }

    static QuadraticInteger one(int d) { return {0, 1, d}; }

    static double generator(int d) {
        switch (d) {
        case 2: return std::sqrt(2.0);
        case 3: return std::sqrt(3.0);
        case 5: return (1.0 + std::sqrt(5.0)) / 2.0;
        }
        throw Error("unsupported quadratic base " + std::to_string(d));
    }

    double embed() const { return static_cast<double>(b) + static_cast<double>(a) * generator(d); }

    friend bool operator==(const QuadraticInteger&, const QuadraticInteger&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const QuadraticInteger& x) {
    const char* gen = x.d == 5 ? "τ" : (x.d == 2 ? "√2" : "√3");
    return os << x.b << (x.a < 0 ? "-" : "+") << (x.a < 0 ? -x.a : x.a) << gen;
}

inline QuadraticInteger quad_add(const QuadraticInteger& x, const QuadraticInteger& y) {
    if (x.d != y.d) throw Error("quadratic bases differ");
    return {detail::checked_add(x.a, y.a), detail::checked_add(x.b, y.b), x.d};
}

inline QuadraticInteger quad_mul(const QuadraticInteger& x, const QuadraticInteger& y) {
    using detail::checked_add;
    using detail::checked_mul;
    if (x.d != y.d) throw Error("quadratic bases differ");
    if (!QuadraticInteger::valid_base(x.d)) throw Error("unsupported quadratic base " + std::to_string(x.d));
    const auto cross = checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.a));
    const auto aa = checked_mul(x.a, y.a);
    const auto bb = checked_mul(x.b, y.b);
    if (x.d == 5) {
        // τ² = τ + 1
        return {checked_add(cross, aa), checked_add(bb, aa), 5};
    }
    return {cross, checked_add(bb, checked_mul(aa, x.d)), x.d};
}

inline QuadraticInteger operator*(const QuadraticInteger& x, const QuadraticInteger& y) { return quad_mul(x, y); }
inline QuadraticInteger operator+(const QuadraticInteger& x, const QuadraticInteger& y) { return quad_add(x, y); }

/// Field norm N(b + a·w).
inline std::int64_t quad_norm(const QuadraticInteger& x) {
    using detail::checked_add;
    using detail::checked_mul;
    if (x.d == 5) {
        // conjugate of τ is 1 - τ
        return checked_add(checked_add(checked_mul(x.b, x.b), checked_mul(x.a, x.b)), -checked_mul(x.a, x.a));
    }
    return checked_add(checked_mul(x.b, x.b), -checked_mul(checked_mul(x.a, x.a), x.d));
}

enum class MetallicKind { rho, tau, eta };

/// Pisot unit (or near-unit) with minimal polynomial x² = p·x + q.
struct MetallicMean {
    MetallicKind kind;
    int p;
    int q;

    static constexpr MetallicMean of(MetallicKind kind) {
        switch (kind) {
        case MetallicKind::rho: return {kind, 2, 1};
        case MetallicKind::tau: return {kind, 1, 1};
        case MetallicKind::eta: return {kind, 2, 2};
        }
        return {kind, 0, 0};
    }

    static constexpr MetallicMean rho() { return of(MetallicKind::rho); }
    static constexpr MetallicMean tau() { return of(MetallicKind::tau); }
    static constexpr MetallicMean eta() { return of(MetallicKind::eta); }

    int base() const {
        switch (kind) {
        case MetallicKind::rho: return 2;
        case MetallicKind::tau: return 5;
        case MetallicKind::eta: return 3;
        }
        return 0;
    }

    /// The mean as a ring element: 1+√2, τ, 1+√3.
    QuadraticInteger element() const {
        return kind == MetallicKind::tau ? QuadraticInteger{1, 0, 5} : QuadraticInteger{1, 1, base()};
    }

    double value() const { return element().embed(); }

    bool is_unit() const { return q == 1 || q == -1; }

    const char* name() const {
        switch (kind) {
        case MetallicKind::rho: return "rho";
        case MetallicKind::tau: return "tau";
        case MetallicKind::eta: return "eta";
        }
        return "?";
    }
};

/// Coordinates u·mean + v of a ring element in the basis {mean, 1}.
struct MeanBasis {
    std::int64_t mean_coeff = 0;
    std::int64_t unit_coeff = 0;

    friend bool operator==(const MeanBasis&, const MeanBasis&) = default;
};

inline MeanBasis to_mean_basis(const MetallicMean& mean, const QuadraticInteger& x) {
    if (x.d != mean.base()) throw Error("element is not in the mean's ring");
    if (mean.kind == MetallicKind::tau) return {x.a, x.b};
    // b + a√d = a(1 + √d) + (b - a)
    return {x.a, detail::checked_add(x.b, -x.a)};
}

inline QuadraticInteger from_mean_basis(const MetallicMean& mean, const MeanBasis& c) {
    if (mean.kind == MetallicKind::tau) return {c.mean_coeff, c.unit_coeff, 5};
    return {c.mean_coeff, detail::checked_add(c.unit_coeff, c.mean_coeff), mean.base()};
}

/**
 * mean^n computed by the recurrence x² = p·x + q in the basis {mean, 1}.
 * Negative exponents use mean⁻¹ = (mean - p)/q, which is only integral for
 * units; eta (norm -2) is rejected.
 */
inline QuadraticInteger metallic_power(const MetallicMean& mean, int n) {
    using detail::checked_add;
    using detail::checked_mul;
    if (n < 0) {
        if (!mean.is_unit()) throw Error(std::string(mean.name()) + " is not a unit");
        // mean⁻¹ = q·(mean - p) when q = ±1
        const MeanBasis inv{mean.q, checked_mul(-mean.p, mean.q)};
        MeanBasis cur{0, 1};
        for (int i = 0; i < -n; ++i) {
            // (u·m + v)(s·m + t) with m² = p·m + q
            const auto u = cur.mean_coeff, v = cur.unit_coeff;
            const auto s = inv.mean_coeff, t = inv.unit_coeff;
            const auto us = checked_mul(u, s);
            cur = {checked_add(checked_add(checked_mul(us, mean.p), checked_mul(u, t)), checked_mul(v, s)),
                   checked_add(checked_mul(us, mean.q), checked_mul(v, t))};
        }
        return from_mean_basis(mean, cur);
    }
    MeanBasis cur{0, 1};
    for (int i = 0; i < n; ++i) {
        // (u·m + v)·m = (p·u + v)·m + q·u
        cur = {checked_add(checked_mul(mean.p, cur.mean_coeff), cur.unit_coeff), checked_mul(mean.q, cur.mean_coeff)};
    }
    return from_mean_basis(mean, cur);
}

/// s₀ = 0, s₁ = 1, s_{k+2} = p·s_{k+1} + q·s_k (Fibonacci, Pell, and the eta analogue).
inline std::vector<std::int64_t> recurrence_sequence(const MetallicMean& mean, std::size_t len) {
    std::vector<std::int64_t> out;
    out.reserve(len);
    std::int64_t prev = 0, cur = 1;
    for (std::size_t i = 0; i < len; ++i) {
        out.push_back(prev);
        const auto next = detail::checked_add(detail::checked_mul(mean.p, cur), detail::checked_mul(mean.q, prev));
        prev = cur;
        cur = next;
    }
    return out;
}

inline std::int64_t euler_phi(std::int64_t n) {
    if (n < 1) throw Error("euler_phi requires n >= 1");
    std::int64_t result = n;
    for (std::int64_t f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            while (n % f == 0) n /= f;
            result -= result / f;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

} // namespace qcsym
