#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcsym/error.hpp"
#include "qcsym/point_index.hpp"
#include "qcsym/quasilattice.hpp"
#include "qcsym/symmetry.hpp"

namespace qcsym {

using Edge = std::pair<std::size_t, std::size_t>;

/**
 * Vertices with their nearest-neighbour edges and a wheel partition into
 * cells (sector, shell): sectors are angular wedges about `origin`, shells
 * are ranks of distinct radii. One color per vertex (= per cell it lies in).
 */
struct Tiling {
    std::vector<cplx> vertices;
    std::vector<Edge> edges; // i < j, sorted, unique
    std::vector<int> sectors;
    std::vector<int> shells;
    std::vector<int> colors;
    int n_sectors = 1;
    cplx origin{};
    double tolerance = default_tolerance;

    friend bool operator==(const Tiling&, const Tiling&) = default;

    void validate() const {
        for (const auto& [i, j] : edges)
            if (i >= j || j >= vertices.size()) throw Error("edge index out of range or not normalized");
        for (std::size_t e = 1; e < edges.size(); ++e)
            if (!(edges[e - 1] < edges[e])) throw Error("edges not sorted and unique");
        if (!sectors.empty() && sectors.size() != vertices.size()) throw Error("sector list length mismatch");
        for (int s : sectors)
            if (s < 0 || s >= n_sectors) throw Error("sector index out of range");
        if (!shells.empty() && shells.size() != vertices.size()) throw Error("shell list length mismatch");
        if (!colors.empty() && colors.size() != vertices.size()) throw Error("color list length mismatch");
    }
};

namespace detail {

// Smallest distance strictly above `eps`, by a sweep over x-sorted points.
inline double min_positive_distance(std::span<const cplx> pts, double eps) {
    std::vector<cplx> p(pts.begin(), pts.end());
    std::sort(p.begin(), p.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    double best = HUGE_VAL;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = i + 1; j < p.size() && p[j].real() - p[i].real() < best; ++j) {
            const double d = std::abs(p[j] - p[i]);
            if (d > eps && d < best) best = d;
        }
    }
    return best;
}

} // namespace detail

/// Edges between every pair at distance ≤ factor × (smallest nonzero pairwise distance).
inline std::vector<Edge> edges_by_nearest_neighbors(std::span<const cplx> pts, double factor,
                                                    double tolerance = default_tolerance) {
    if (pts.size() < 2) throw Error("need at least 2 points for edges");
    if (!(factor >= 1.0)) throw Error("neighbour factor must be >= 1");
    const double dmin = detail::min_positive_distance(pts, tolerance);
    if (!std::isfinite(dmin)) throw Error("all points coincide");
    const double cutoff = factor * dmin * (1.0 + 1e-12);

    // grid with cell = cutoff; neighbours lie in the 3×3 block
    std::vector<std::size_t> order(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) order[i] = i;
    const auto cell = [&](cplx z) {
        return std::pair<std::int64_t, std::int64_t>{static_cast<std::int64_t>(std::floor(z.real() / cutoff)),
                                                     static_cast<std::int64_t>(std::floor(z.imag() / cutoff))};
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cell(pts[a]) < cell(pts[b]); });

    std::vector<Edge> edges;
    for (std::size_t a = 0; a < order.size(); ++a) {
        const auto ca = cell(pts[order[a]]);
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                const std::pair<std::int64_t, std::int64_t> target{ca.first + dx, ca.second + dy};
                auto lo = std::lower_bound(order.begin(), order.end(), target,
                                           [&](std::size_t i, const auto& t) { return cell(pts[i]) < t; });
                for (auto it = lo; it != order.end() && cell(pts[*it]) == target; ++it) {
                    const std::size_t i = order[a], j = *it;
                    if (i >= j) continue;
                    const double d = std::abs(pts[i] - pts[j]);
                    if (d > tolerance && d <= cutoff) edges.emplace_back(i, j);
                }
            }
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

/**
 * Sector ⌊θ·n/2π⌋ of each point, θ ∈ [0, 2π) measured about `origin`.
 * Sectors are half-open: a point on ray k belongs to sector k, so rotation by
 * 2π/n carries sector i onto sector i+1. Points within 1e-9 (relative) of a
 * ray are snapped onto it; the origin itself gets sector 0.
 */
inline std::vector<int> sector_partition(std::span<const cplx> pts, int n, cplx origin = {},
                                         double tolerance = default_tolerance) {
    if (n < 1) throw Error("sector count must be >= 1");
    std::vector<int> out;
    out.reserve(pts.size());
    for (const auto& p : pts) {
        const cplx v = p - origin;
        if (std::abs(v) <= tolerance) {
            out.push_back(0);
            continue;
        }
        double theta = std::atan2(v.imag(), v.real());
        if (theta < 0.0) theta += 2.0 * std::numbers::pi;
        double t = theta * n / (2.0 * std::numbers::pi);
        const double r = std::round(t);
        if (std::abs(t - r) <= 1e-9 * std::max(1.0, static_cast<double>(n))) t = r;
        auto s = static_cast<int>(std::floor(t));
        out.push_back(((s % n) + n) % n);
    }
    return out;
}

/// Rank of |p - origin| among the distinct radii (merged at tolerance); the origin is shell 0.
inline std::vector<int> shell_partition(std::span<const cplx> pts, cplx origin = {}, double tolerance = default_tolerance) {
    std::vector<double> radii;
    radii.reserve(pts.size());
    for (const auto& p : pts) radii.push_back(std::abs(p - origin));
    std::vector<double> distinct = radii;
    std::sort(distinct.begin(), distinct.end());
    std::vector<double> levels;
    for (double r : distinct)
        if (levels.empty() || r - levels.back() > tolerance) levels.push_back(r);
    std::vector<int> out;
    out.reserve(pts.size());
    for (double r : radii) {
        // last level ≤ r + tol
        auto it = std::upper_bound(levels.begin(), levels.end(), r + tolerance);
        out.push_back(static_cast<int>(std::distance(levels.begin(), it)) - 1);
    }
    return out;
}

/// Point count per sector, ignoring points at the origin.
inline std::vector<std::size_t> sector_populations(const Tiling& t) {
    std::vector<std::size_t> pop(static_cast<std::size_t>(t.n_sectors), 0);
    for (std::size_t i = 0; i < t.vertices.size(); ++i)
        if (std::abs(t.vertices[i] - t.origin) > t.tolerance) ++pop[static_cast<std::size_t>(t.sectors[i])];
    return pop;
}

inline Tiling build_tiling(std::span<const cplx> pts, int n_sectors, double edge_factor = 1.05, cplx origin = {},
                           double tolerance = default_tolerance) {
    Tiling t;
    t.vertices.assign(pts.begin(), pts.end());
    t.n_sectors = n_sectors;
    t.origin = origin;
    t.tolerance = tolerance;
    if (pts.size() >= 2 && edge_factor > 0.0) t.edges = edges_by_nearest_neighbors(pts, edge_factor, tolerance);
    t.sectors = sector_partition(pts, n_sectors, origin, tolerance);
    t.shells = shell_partition(pts, origin, tolerance);
    return t;
}

enum class ColorScheme { two_checker, sector_alternate, four_by_shell_and_parity };

inline const char* to_string(ColorScheme s) {
    switch (s) {
    case ColorScheme::two_checker: return "two_checker";
    case ColorScheme::sector_alternate: return "sector_alternate";
    case ColorScheme::four_by_shell_and_parity: return "four_by_shell_and_parity";
    }
    return "?";
}

inline ColorScheme color_scheme_from_string(const std::string& s) {
    if (s == "two_checker") return ColorScheme::two_checker;
    if (s == "sector_alternate") return ColorScheme::sector_alternate;
    if (s == "four_by_shell_and_parity") return ColorScheme::four_by_shell_and_parity;
    throw Error("unknown color scheme '" + s + "'");
}

inline std::vector<int> color_partition(const Tiling& t, ColorScheme scheme) {
    if (t.sectors.size() != t.vertices.size()) throw Error("tiling has no sector assignment");
    std::vector<int> shells = t.shells;
    if (shells.size() != t.vertices.size()) shells = shell_partition(t.vertices, t.origin, t.tolerance);
    if (scheme == ColorScheme::sector_alternate && t.n_sectors % 2 != 0)
        throw Error("sector_alternate needs an even number of sectors");
    std::vector<int> colors(t.vertices.size());
    for (std::size_t i = 0; i < colors.size(); ++i) {
        const int s = t.sectors[i], h = shells[i];
        switch (scheme) {
        case ColorScheme::two_checker: colors[i] = (s + h) % 2; break;
        case ColorScheme::sector_alternate: colors[i] = s % 2; break;
        case ColorScheme::four_by_shell_and_parity: colors[i] = 2 * (h % 2) + s % 2; break;
        }
    }
    return colors;
}

/**
 * True iff op carries every colored vertex onto a vertex whose color is
 * permutation[color]. Images that leave the tiling's radius are ignored,
 * since the tiling is a finite crop of an infinite figure.
 */
inline bool color_symmetry_check(const Tiling& t, const Similarity2D& op, std::span<const int> permutation) {
    if (t.colors.size() != t.vertices.size()) throw Error("tiling is not colored");
    if (std::abs(apply_similarity2d(op, t.origin) - t.origin) > t.tolerance) throw Error("operation does not fix the origin");
    double reach = 0.0;
    for (const auto& v : t.vertices) reach = std::max(reach, std::abs(v - t.origin));
    const PointIndex index(t.vertices, t.tolerance);
    for (std::size_t i = 0; i < t.vertices.size(); ++i) {
        const int c = t.colors[i];
        if (c < 0 || static_cast<std::size_t>(c) >= permutation.size()) throw Error("color outside permutation");
        const cplx w = apply_similarity2d(op, t.vertices[i]);
        if (std::abs(w - t.origin) > reach + t.tolerance) continue;
        const auto j = index.find(w);
        if (!j || t.colors[*j] != permutation[static_cast<std::size_t>(c)]) return false;
    }
    return true;
}

/// n_sectors × n_shells points, one at the middle of each (sector, shell) cell, radii 1..n_shells.
inline std::vector<cplx> make_wheel(int n_sectors, int n_shells) {
    std::vector<cplx> out;
    for (int h = 1; h <= n_shells; ++h)
        for (int s = 0; s < n_sectors; ++s)
            out.push_back(std::polar(static_cast<double>(h), (s + 0.5) * 2.0 * std::numbers::pi / n_sectors));
    return out;
}

} // namespace qcsym
