#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qcsym/error.hpp"
#include "qcsym/point_index.hpp"
#include "qcsym/quadratic.hpp"

namespace qcsym {

using cplx = std::complex<double>;

inline constexpr double default_tolerance = 1e-9;

/// ζₙ^k, exact on the axes.
inline cplx root_of_unity(int n, std::int64_t k) {
    if (n < 1) throw Error("root of unity order must be positive");
    k %= n;
    if (k < 0) k += n;
    if ((4 * k) % n == 0) {
        switch ((4 * k) / n) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        case 3: return {0.0, -1.0};
        }
    }
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / n;
    return {std::cos(angle), std::sin(angle)};
}

/**
 * Integer combination Σ coeffs[i]·ζₙ^i. Coefficient vectors are not reduced
 * modulo the cyclotomic polynomial, so distinct vectors may denote the same
 * point; compare embeddings, not vectors.
 */
struct CyclotomicPoint {
    int n = 4;
    std::vector<std::int64_t> coeffs = std::vector<std::int64_t>(4, 0);

    CyclotomicPoint() = default;
    CyclotomicPoint(int order, std::vector<std::int64_t> c) : n(order), coeffs(std::move(c)) {
        if (n < 1) throw Error("cyclotomic order must be positive");
        if (coeffs.size() != static_cast<std::size_t>(n)) throw Error("coefficient vector length must equal n");
    }

    static CyclotomicPoint zero(int n) { return {n, std::vector<std::int64_t>(static_cast<std::size_t>(n), 0)}; }

    static CyclotomicPoint unit(int n, int i) {
        auto p = zero(n);
        p.coeffs[static_cast<std::size_t>(((i % n) + n) % n)] = 1;
        return p;
    }

    bool is_zero() const {
        return std::all_of(coeffs.begin(), coeffs.end(), [](auto c) { return c == 0; });
    }

    cplx embed() const {
        cplx z{};
        for (int i = 0; i < n; ++i)
            if (coeffs[static_cast<std::size_t>(i)] != 0)
                z += static_cast<double>(coeffs[static_cast<std::size_t>(i)]) * root_of_unity(n, i);
        return z;
    }

    friend bool operator==(const CyclotomicPoint&, const CyclotomicPoint&) = default;
};

/// Multiplication by ζₙ: cyclic shift of the coefficients.
inline CyclotomicPoint rotate_point(const CyclotomicPoint& p) {
    auto out = CyclotomicPoint::zero(p.n);
    for (int i = 0; i < p.n; ++i) out.coeffs[static_cast<std::size_t>((i + 1) % p.n)] = p.coeffs[static_cast<std::size_t>(i)];
    return out;
}

/// Complex conjugation: index i ↦ (n - i) mod n.
inline CyclotomicPoint reflect_point(const CyclotomicPoint& p) {
    auto out = CyclotomicPoint::zero(p.n);
    for (int i = 0; i < p.n; ++i) out.coeffs[static_cast<std::size_t>((p.n - i) % p.n)] = p.coeffs[static_cast<std::size_t>(i)];
    return out;
}

inline CyclotomicPoint negate_point(const CyclotomicPoint& p) {
    auto out = p;
    for (auto& c : out.coeffs) c = -c;
    return out;
}

/// Product of two elements of ℤ[ζₙ] as a cyclic convolution.
inline CyclotomicPoint cyclotomic_mul(const CyclotomicPoint& x, const CyclotomicPoint& y) {
    if (x.n != y.n) throw Error("cyclotomic orders differ");
    const auto n = static_cast<std::size_t>(x.n);
    auto out = CyclotomicPoint::zero(x.n);
    for (std::size_t i = 0; i < n; ++i) {
        if (x.coeffs[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j)
            out.coeffs[(i + j) % n] = detail::checked_add(out.coeffs[(i + j) % n], detail::checked_mul(x.coeffs[i], y.coeffs[j]));
    }
    return out;
}

inline CyclotomicPoint scale_point(const CyclotomicPoint& p, std::int64_t k) {
    auto out = p;
    for (auto& c : out.coeffs) c = detail::checked_mul(c, k);
    return out;
}

/// Metallic inflation coefficient written in ζₙ, for the orders that have one.
struct InflationElement {
    MetallicMean mean;
    CyclotomicPoint element;

    double factor() const { return mean.value(); }

    std::size_t nonzero_terms() const {
        return static_cast<std::size_t>(std::count_if(element.coeffs.begin(), element.coeffs.end(), [](auto c) { return c != 0; }));
    }
};

inline bool has_inflation(int n) { return n == 5 || n == 8 || n == 10 || n == 12; }

inline InflationElement inflation_element(int n) {
    auto e = CyclotomicPoint::zero(n);
    switch (n) {
    case 5: // τ = -(ζ² + ζ³)
        e.coeffs[2] = -1;
        e.coeffs[3] = -1;
        return {MetallicMean::tau(), e};
    case 8: // ρ = 1 + ζ + ζ⁷
        e.coeffs[0] = e.coeffs[1] = e.coeffs[7] = 1;
        return {MetallicMean::rho(), e};
    case 10: // τ = ζ + ζ⁹
        e.coeffs[1] = e.coeffs[9] = 1;
        return {MetallicMean::tau(), e};
    case 12: // η = 1 + ζ + ζ¹¹
        e.coeffs[0] = e.coeffs[1] = e.coeffs[11] = 1;
        return {MetallicMean::eta(), e};
    }
    throw Error("no metallic inflation coefficient for order " + std::to_string(n));
}

inline CyclotomicPoint inflate_point(const CyclotomicPoint& p) {
    return cyclotomic_mul(p, inflation_element(p.n).element);
}

enum class LatticeKind { square, hexagonal, quasilattice };

inline const char* to_string(LatticeKind k) {
    switch (k) {
    case LatticeKind::square: return "square";
    case LatticeKind::hexagonal: return "hexagonal";
    case LatticeKind::quasilattice: return "quasilattice";
    }
    return "?";
}

inline LatticeKind lattice_kind_from_string(const std::string& s) {
    if (s == "square") return LatticeKind::square;
    if (s == "hexagonal") return LatticeKind::hexagonal;
    if (s == "quasilattice") return LatticeKind::quasilattice;
    throw Error("unknown lattice kind '" + s + "'");
}

/// Disk crops use `radius`; polygon crops keep lattice points within `extent` lattice steps.
enum class CropShape { disk, polygon };

struct CrystalSet {
    int n = 4;
    LatticeKind kind = LatticeKind::square;
    CropShape crop = CropShape::disk;
    std::vector<CyclotomicPoint> points;
    std::vector<cplx> embedded;
    double tolerance = default_tolerance;
    double radius = 0.0;
    std::int64_t coeff_bound = 0; // quasilattices only
    std::int64_t extent = 0;      // polygon crops only
    bool unsupported_order = false;

    std::size_t size() const { return embedded.size(); }
    bool empty() const { return embedded.empty(); }
};

namespace detail {

inline void push_point(CrystalSet& set, CyclotomicPoint p) {
    set.embedded.push_back(p.embed());
    set.points.push_back(std::move(p));
}

// Odometer over a box [-bound, bound]^dims.
inline bool next_digits(std::vector<std::int64_t>& d, std::int64_t bound) {
    for (auto& x : d) {
        if (x < bound) {
            ++x;
            return true;
        }
        x = -bound;
    }
    return false;
}

inline void check_enumeration_size(std::int64_t side, std::size_t dims) {
    double count = std::pow(static_cast<double>(side), static_cast<double>(dims));
    if (count > 5e8) throw Error("coefficient enumeration too large (" + std::to_string(count) + " vectors)");
}

} // namespace detail

inline CrystalSet generate_periodic(LatticeKind kind, double radius) {
    if (!(radius > 0.0)) throw Error("radius must be positive");
    if (kind == LatticeKind::quasilattice) throw Error("generate_periodic expects square or hexagonal");
    CrystalSet set;
    set.kind = kind;
    set.radius = radius;
    set.n = kind == LatticeKind::square ? 4 : 6;
    // |a + bζ₆|² = a² + ab + b² ≥ 3/4·max(a,b)²
    const auto span = static_cast<std::int64_t>(std::ceil(kind == LatticeKind::square ? radius : radius * 2.0 / std::sqrt(3.0))) + 1;
    const double limit = radius + set.tolerance;
    for (std::int64_t a = -span; a <= span; ++a) {
        for (std::int64_t b = -span; b <= span; ++b) {
            auto p = CyclotomicPoint::zero(set.n);
            p.coeffs[0] = a;
            p.coeffs[1] = b;
            if (std::abs(p.embed()) <= limit) detail::push_point(set, std::move(p));
        }
    }
    return set;
}

/// Square (|x|,|y| ≤ extent) or hexagonal (hexagon of side `extent`) patch.
inline CrystalSet generate_periodic_patch(LatticeKind kind, std::int64_t extent) {
    if (extent < 1) throw Error("extent must be >= 1");
    if (kind == LatticeKind::quasilattice) throw Error("generate_periodic_patch expects square or hexagonal");
    CrystalSet set;
    set.kind = kind;
    set.crop = CropShape::polygon;
    set.extent = extent;
    set.n = kind == LatticeKind::square ? 4 : 6;
    set.radius = kind == LatticeKind::square ? std::sqrt(2.0) * static_cast<double>(extent) : static_cast<double>(extent);
    for (std::int64_t a = -extent; a <= extent; ++a) {
        for (std::int64_t b = -extent; b <= extent; ++b) {
            if (kind == LatticeKind::hexagonal && std::abs(a + b) > extent) continue;
            auto p = CyclotomicPoint::zero(set.n);
            p.coeffs[0] = a;
            p.coeffs[1] = b;
            detail::push_point(set, std::move(p));
        }
    }
    return set;
}

/**
 * All Σ cᵢζₙ^i with |cᵢ| ≤ coeff_bound and embedding within `radius`,
 * deduplicated at `tolerance`. The coefficient box is closed under cyclic
 * shift, index reversal and negation, so the result has Dₙ symmetry and is
 * centrally symmetric (a 5-fold set shows 10-fold point symmetry).
 *
 * For even n, ζ^{i+n/2} = -ζ^i, so the embeddings are exactly the sums
 * Σ_{i<n/2} dᵢζ^i with |dᵢ| ≤ 2·coeff_bound; this is what gets enumerated.
 */
inline CrystalSet generate_quasilattice(int n, std::int64_t coeff_bound, double radius,
                                        double tolerance = default_tolerance) {
    if (n < 3) throw Error("quasilattice order must be >= 3");
    if (coeff_bound < 1) throw Error("coefficient bound must be >= 1");
    if (!(radius > 0.0)) throw Error("radius must be positive");
    if (!(tolerance > 0.0)) throw Error("tolerance must be positive");

    CrystalSet set;
    set.n = n;
    set.kind = LatticeKind::quasilattice;
    set.tolerance = tolerance;
    set.radius = radius;
    set.coeff_bound = coeff_bound;
    set.unsupported_order = !(n == 5 || n == 8 || n == 10 || n == 12 || n == 14 || n == 16 || n == 18);

    PointIndex index(tolerance);
    const double limit = radius + tolerance;
    std::vector<cplx> roots(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = root_of_unity(n, i);

    if (n % 2 == 0) {
        const auto half = static_cast<std::size_t>(n / 2);
        const auto dbound = 2 * coeff_bound;
        detail::check_enumeration_size(2 * dbound + 1, half);
        std::vector<std::int64_t> d(half, -dbound);
        do {
            cplx z{};
            for (std::size_t i = 0; i < half; ++i) z += static_cast<double>(d[i]) * roots[i];
            if (std::abs(z) > limit || !index.insert_unique(z)) continue;
            auto p = CyclotomicPoint::zero(n);
            for (std::size_t i = 0; i < half; ++i) {
                // split dᵢ = cᵢ - c_{i+n/2} with both in [-bound, bound]
                const auto lo = std::clamp(d[i], -coeff_bound, coeff_bound);
                p.coeffs[i] = lo;
                p.coeffs[i + half] = lo - d[i];
            }
            set.points.push_back(std::move(p));
            set.embedded.push_back(z);
        } while (detail::next_digits(d, dbound));
    } else {
        const auto dims = static_cast<std::size_t>(n);
        detail::check_enumeration_size(2 * coeff_bound + 1, dims);
        std::vector<std::int64_t> c(dims, -coeff_bound);
        do {
            cplx z{};
            for (std::size_t i = 0; i < dims; ++i) z += static_cast<double>(c[i]) * roots[i];
            if (std::abs(z) > limit || !index.insert_unique(z)) continue;
            set.points.emplace_back(n, c);
            set.embedded.push_back(z);
        } while (detail::next_digits(c, coeff_bound));
    }
    return set;
}

struct SelfSimilarityReport {
    std::size_t checked = 0;
    std::size_t contained = 0;
    double max_scaling_error = 0.0; // max |embed(inflated) - k·embed(p)|
    double factor = 0.0;

    bool passed() const { return checked == contained; }
};

/**
 * Inflates every point (by the metallic coefficient of a quasilattice, or by
 * 2 for periodic lattices) and checks that the image lies in a reference set
 * regenerated with the coefficient bound and radius the inflation can reach.
 */
inline SelfSimilarityReport verify_self_similarity(const CrystalSet& set) {
    SelfSimilarityReport rep;
    if (set.empty()) return rep;

    CrystalSet reference;
    std::vector<CyclotomicPoint> images;
    images.reserve(set.size());
    if (set.kind == LatticeKind::quasilattice) {
        const auto infl = inflation_element(set.n);
        rep.factor = infl.factor();
        const auto bound = set.coeff_bound * static_cast<std::int64_t>(infl.nonzero_terms());
        reference = generate_quasilattice(set.n, bound, rep.factor * set.radius + set.tolerance, set.tolerance);
        for (const auto& p : set.points) images.push_back(cyclotomic_mul(p, infl.element));
    } else {
        rep.factor = 2.0;
        reference = set.crop == CropShape::polygon ? generate_periodic_patch(set.kind, 2 * set.extent)
                                                   : generate_periodic(set.kind, 2.0 * set.radius);
        for (const auto& p : set.points) images.push_back(scale_point(p, 2));
    }

    PointIndex index(reference.embedded, set.tolerance);
    for (std::size_t i = 0; i < images.size(); ++i) {
        const cplx z = images[i].embed();
        rep.max_scaling_error = std::max(rep.max_scaling_error, std::abs(z - rep.factor * set.embedded[i]));
        ++rep.checked;
        if (index.contains(z)) ++rep.contained;
    }
    return rep;
}

/// True iff `transform` maps every point onto some point of the set (within tolerance).
template <typename F>
bool maps_onto_itself(std::span<const cplx> pts, double tolerance, F&& transform) {
    PointIndex index(pts, tolerance);
    return std::all_of(pts.begin(), pts.end(), [&](const cplx& z) { return index.contains(transform(z)); });
}

/**
 * Largest m ≤ max_order such that rotation by 2π/m about `center` maps the
 * point set onto itself. A set fixed by every rotation (a lone center point,
 * or empty) reports max_order.
 */
inline int point_group_order(std::span<const cplx> pts, double tolerance = default_tolerance, cplx center = {},
                             int max_order = 24) {
    PointIndex index(pts, tolerance);
    for (int m = max_order; m >= 1; --m) {
        const cplx r = std::polar(1.0, 2.0 * std::numbers::pi / m);
        const bool ok = std::all_of(pts.begin(), pts.end(),
                                    [&](const cplx& z) { return index.contains(center + r * (z - center)); });
        if (ok) return m;
    }
    return 1;
}

inline int point_group_order(const CrystalSet& set, int max_order = 24) {
    return point_group_order(set.embedded, set.tolerance, {}, max_order);
}

} // namespace qcsym
