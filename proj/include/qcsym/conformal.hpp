#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcsym/error.hpp"
#include "qcsym/mobius.hpp"
#include "qcsym/quasilattice.hpp"
#include "qcsym/symmetry.hpp"

namespace qcsym {

/// Point of the unit sphere; z = 0 sits at (1, 0, 0) and ∞ at (-1, 0, 0).
struct SpherePoint {
    double x0 = 1.0, x1 = 0.0, x2 = 0.0;

    double norm() const { return std::sqrt(x0 * x0 + x1 * x1 + x2 * x2); }
    Vec3 vec() const { return {x0, x1, x2}; }
};

enum class MapKind { square, reciprocal, inversion_unit_circle, mobius, stereographic };

inline const char* to_string(MapKind k) {
    switch (k) {
    case MapKind::square: return "square";
    case MapKind::reciprocal: return "reciprocal";
    case MapKind::inversion_unit_circle: return "inversion";
    case MapKind::mobius: return "mobius";
    case MapKind::stereographic: return "stereographic";
    }
    return "?";
}

struct MapSpec {
    MapKind kind = MapKind::square;
    MobiusMap mobius{};

    static MapSpec square() { return {MapKind::square, {}}; }
    static MapSpec reciprocal() { return {MapKind::reciprocal, {}}; }
    static MapSpec inversion() { return {MapKind::inversion_unit_circle, {}}; }
    static MapSpec stereographic() { return {MapKind::stereographic, {}}; }
    static MapSpec of(const MobiusMap& m) { return {MapKind::mobius, m}; }

    bool is_planar() const { return kind != MapKind::stereographic; }

    bool is_anticonformal() const {
        return kind == MapKind::inversion_unit_circle || (kind == MapKind::mobius && mobius.anticonformal);
    }

    /// The Möbius form of the reciprocal, inversion and Möbius kinds.
    std::optional<MobiusMap> as_mobius() const {
        switch (kind) {
        case MapKind::reciprocal: return MobiusMap::reciprocal();
        case MapKind::inversion_unit_circle: return MobiusMap(0.0, 1.0, 1.0, 0.0, true);
        case MapKind::mobius: return mobius;
        default: return std::nullopt;
        }
    }

    /// Finite singular point: the pole of a Möbius map or the critical point 0 of z².
    std::optional<cplx> singularity() const {
        if (kind == MapKind::square) return cplx{};
        if (auto m = as_mobius()) {
            if (m->c == cplx{}) return std::nullopt;
            const cplx pole = -m->d / m->c;
            return m->anticonformal ? std::conj(pole) : pole;
        }
        return std::nullopt;
    }
};

inline SpherePoint stereographic(const ExtendedComplex& z) {
    if (z.is_infinite()) return {-1.0, 0.0, 0.0};
    const cplx w = z.value();
    const double r2 = std::norm(w);
    const double den = 1.0 + r2;
    return {(1.0 - r2) / den, 2.0 * w.real() / den, 2.0 * w.imag() / den};
}

inline ExtendedComplex inverse_stereographic(const SpherePoint& p) {
    const double den = 1.0 + p.x0;
    if (den == 0.0 || (den < 1e-15 && p.x1 == 0.0 && p.x2 == 0.0)) return ExtendedComplex::infinity();
    return ExtendedComplex(cplx{p.x1 / den, p.x2 / den});
}

/// Image in the plane for planar map kinds.
inline ExtendedComplex map_plane(const MapSpec& spec, const ExtendedComplex& z) {
    switch (spec.kind) {
    case MapKind::square:
        if (z.is_infinite()) return z;
        return ExtendedComplex(z.value() * z.value());
    case MapKind::reciprocal:
    case MapKind::inversion_unit_circle:
    case MapKind::mobius: return mobius_apply(*spec.as_mobius(), z);
    case MapKind::stereographic: break;
    }
    throw Error("stereographic projection does not map into the plane");
}

struct MappedPoint {
    std::optional<ExtendedComplex> plane;
    std::optional<SpherePoint> sphere;
};

inline MappedPoint map_point(const MapSpec& spec, const ExtendedComplex& z) {
    if (spec.kind == MapKind::stereographic) return {std::nullopt, stereographic(z)};
    return {map_plane(spec, z), std::nullopt};
}

struct MappedSet {
    std::vector<cplx> plane;          // planar kinds
    std::vector<SpherePoint> sphere;  // stereographic
    std::vector<std::size_t> source;  // input index of each image point
    std::size_t dropped = 0;          // points at (or within tolerance of) the pole
};

/**
 * Applies the map to every point in order. Points within `tolerance` of a
 * Möbius pole map to ∞ and are dropped (counted, not clamped).
 */
inline MappedSet map_set(const MapSpec& spec, std::span<const cplx> pts, double tolerance = default_tolerance) {
    MappedSet out;
    const auto pole = spec.kind == MapKind::square ? std::nullopt : spec.singularity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const cplx z = pts[i];
        if (spec.kind == MapKind::stereographic) {
            out.sphere.push_back(stereographic(z));
            out.source.push_back(i);
            continue;
        }
        if (pole && std::abs(z - *pole) <= tolerance) {
            ++out.dropped;
            continue;
        }
        const auto w = map_plane(spec, z);
        if (w.is_infinite()) {
            ++out.dropped;
            continue;
        }
        out.plane.push_back(w.value());
        out.source.push_back(i);
    }
    return out;
}

inline MappedSet map_set(const MapSpec& spec, const CrystalSet& set) { return map_set(spec, set.embedded, set.tolerance); }

struct ConformalityReport {
    double deviation = 0.0; // radians
    int orientation = 1;    // +1 preserved, -1 reversed
    double measured = 0.0;  // signed image angle between the two directions
};

/**
 * Images of two short segments leaving z0 (directions 0 and π/4, half-length
 * h, central differences) and the angle between them. For planar maps the
 * deviation is |σ·θ - π/4| with σ = -1 for anticonformal kinds; on the
 * sphere the unsigned angle is compared and orientation is the sign of
 * det[p, v1, v2].
 */
inline ConformalityReport conformality_check(const MapSpec& spec, cplx z0, double h) {
    if (!(h > 0.0)) throw Error("step must be positive");
    if (auto s = spec.singularity(); s && std::abs(z0 - *s) <= 10.0 * h)
        throw Error("z0 is too close to a singularity of the map");
    const cplx e1{1.0, 0.0};
    const cplx e2 = std::polar(1.0, std::numbers::pi / 4.0);
    ConformalityReport rep;
    if (spec.is_planar()) {
        const auto f = [&](cplx z) { return map_plane(spec, z).value(); };
        const cplx v1 = f(z0 + h * e1) - f(z0 - h * e1);
        const cplx v2 = f(z0 + h * e2) - f(z0 - h * e2);
        rep.measured = std::arg(v2 / v1);
        rep.orientation = rep.measured >= 0.0 ? 1 : -1;
        const double sigma = spec.is_anticonformal() ? -1.0 : 1.0;
        rep.deviation = std::abs(sigma * rep.measured - std::numbers::pi / 4.0);
        return rep;
    }
    const auto f = [](cplx z) { return stereographic(z).vec(); };
    const Vec3 v1 = f(z0 + h * e1) - f(z0 - h * e1);
    const Vec3 v2 = f(z0 + h * e2) - f(z0 - h * e2);
    const double c = dot(v1, v2) / (norm(v1) * norm(v2));
    rep.measured = std::acos(std::clamp(c, -1.0, 1.0));
    rep.orientation = dot(stereographic(z0).vec(), cross(v1, v2)) >= 0.0 ? 1 : -1;
    rep.deviation = std::abs(rep.measured - std::numbers::pi / 4.0);
    return rep;
}

// ---------------------------------------------------------------------------
// fitting

enum class FitMode { circle, line };

struct CircleFit {
    FitMode mode = FitMode::circle;
    cplx center{};
    double radius = 0.0;
    cplx line_point{}; // line mode
    cplx line_dir{};   // unit direction, line mode
    double residual = 0.0;
};

/// Algebraic (Kåsa) least-squares circle; residual is the max geometric distance to the circle.
inline CircleFit fit_circle(std::span<const cplx> pts) {
    if (pts.size() < 3) throw Error("circle fit needs at least 3 points");
    Eigen::MatrixXd a(static_cast<Eigen::Index>(pts.size()), 3);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(pts.size()));
    // center the data to keep the system well conditioned
    cplx mean{};
    for (const auto& p : pts) mean += p;
    mean /= static_cast<double>(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const cplx q = pts[i] - mean;
        const auto r = static_cast<Eigen::Index>(i);
        a(r, 0) = q.real();
        a(r, 1) = q.imag();
        a(r, 2) = 1.0;
        rhs(r) = -std::norm(q);
    }
    const Eigen::Vector3d s = a.colPivHouseholderQr().solve(rhs);
    CircleFit fit;
    const cplx c{-s(0) / 2.0, -s(1) / 2.0};
    fit.center = c + mean;
    fit.radius = std::sqrt(std::max(0.0, std::norm(c) - s(2)));
    for (const auto& p : pts) fit.residual = std::max(fit.residual, std::abs(std::abs(p - fit.center) - fit.radius));
    return fit;
}

/// Total least-squares line.
inline CircleFit fit_line(std::span<const cplx> pts) {
    if (pts.size() < 2) throw Error("line fit needs at least 2 points");
    cplx mean{};
    for (const auto& p : pts) mean += p;
    mean /= static_cast<double>(pts.size());
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (const auto& p : pts) {
        const Eigen::Vector2d q{(p - mean).real(), (p - mean).imag()};
        cov += q * q.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
    const Eigen::Vector2d dir = eig.eigenvectors().col(1);
    CircleFit fit;
    fit.mode = FitMode::line;
    fit.line_point = mean;
    fit.line_dir = {dir(0), dir(1)};
    for (const auto& p : pts) {
        const cplx q = p - mean;
        fit.residual = std::max(fit.residual, std::abs((q * std::conj(fit.line_dir)).imag()));
    }
    return fit;
}

struct PlaneFit {
    Vec3 normal{};
    double offset = 0.0; // normal·x = offset
    double residual = 0.0;
};

inline PlaneFit fit_plane(std::span<const Vec3> pts) {
    if (pts.size() < 3) throw Error("plane fit needs at least 3 points");
    Vec3 mean{};
    for (const auto& p : pts) mean = mean + p;
    mean = (1.0 / static_cast<double>(pts.size())) * mean;
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& p : pts) {
        const Vec3 q = p - mean;
        const Eigen::Vector3d v{q.x, q.y, q.z};
        cov += v * v.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    const Eigen::Vector3d n = eig.eigenvectors().col(0);
    PlaneFit fit;
    fit.normal = {n(0), n(1), n(2)};
    fit.offset = dot(fit.normal, mean);
    for (const auto& p : pts) fit.residual = std::max(fit.residual, std::abs(dot(fit.normal, p) - fit.offset));
    return fit;
}

/// `samples` points evenly spaced on the circle, or on the segment of the line |y| ≤ half_length.
inline std::vector<cplx> sample_circle(const CircleSpec& circle, std::size_t samples, double half_length = 10.0) {
    circle.validate();
    std::vector<cplx> out;
    out.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        if (circle.is_line()) {
            const double t = samples == 1 ? 0.0 : -half_length + 2.0 * half_length * static_cast<double>(i) / static_cast<double>(samples - 1);
            out.emplace_back(circle.line_x(), t);
        } else {
            const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(samples);
            out.push_back(circle.center() + std::polar(circle.radius(), t));
        }
    }
    return out;
}

struct CircleImageReport {
    FitMode mode = FitMode::circle;
    double residual = 0.0; // planar: max distance to fitted circle/line; sphere: max distance to fitted plane
    std::size_t dropped = 0;
};

/**
 * Maps samples of a circle (or line) and fits the images. Möbius kinds are
 * fitted by a circle, or by a line when the pole lies on the circle; the
 * stereographic kind is checked for coplanarity in 3-space.
 */
inline CircleImageReport circle_image_check(const MapSpec& spec, const CircleSpec& circle, std::size_t samples) {
    if (samples < 4) throw Error("circle image check needs at least 4 samples");
    const auto pts = sample_circle(circle, samples);
    CircleImageReport rep;
    if (spec.kind == MapKind::stereographic) {
        std::vector<Vec3> img;
        for (const auto& z : pts) img.push_back(stereographic(z).vec());
        rep.residual = fit_plane(img).residual;
        return rep;
    }
    if (!spec.as_mobius()) throw Error("circle image check requires a Mobius map");
    const auto pole = spec.singularity();
    bool pole_on_circle = false;
    if (pole) {
        const double dist = circle.is_line() ? std::abs(pole->real() - circle.line_x())
                                             : std::abs(std::abs(*pole - circle.center()) - circle.radius());
        pole_on_circle = dist <= 1e-9;
    }
    std::vector<cplx> img;
    for (const auto& z : pts) {
        const auto w = map_plane(spec, z);
        if (w.is_infinite() || (pole && std::abs(z - *pole) <= 1e-9)) {
            ++rep.dropped;
            continue;
        }
        img.push_back(w.value());
    }
    // a line is a circle through ∞: lines map to lines exactly when the map fixes ∞
    const bool image_is_line = pole_on_circle || (circle.is_line() && !pole);
    const auto fit = image_is_line ? fit_line(img) : fit_circle(img);
    rep.mode = fit.mode;
    rep.residual = fit.residual;
    return rep;
}

// ---------------------------------------------------------------------------
// special points of inverted lattices

namespace detail {

inline double cross2(cplx o, cplx a, cplx b) {
    return (a - o).real() * (b - o).imag() - (a - o).imag() * (b - o).real();
}

// Andrew's monotone chain, counter-clockwise, collinear points dropped.
inline std::vector<cplx> convex_hull(std::vector<cplx> pts) {
    std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    if (pts.size() < 3) return pts;
    std::vector<cplx> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross2(h[k - 2], h[k - 1], pts[i]) <= 1e-12) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross2(h[k - 2], h[k - 1], pts[i]) <= 1e-12) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

inline bool inside_convex(const std::vector<cplx>& hull, cplx p, double tol) {
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const cplx a = hull[i], b = hull[(i + 1) % hull.size()];
        if (cross2(a, b, p) < -tol * std::abs(b - a)) return false;
    }
    return true;
}

inline std::vector<cplx> circle_intersections(const CircleFit& c1, const CircleFit& c2) {
    const double d = std::abs(c2.center - c1.center);
    if (d == 0.0 || d > c1.radius + c2.radius || d < std::abs(c1.radius - c2.radius)) return {};
    const double a = (c1.radius * c1.radius - c2.radius * c2.radius + d * d) / (2.0 * d);
    const double h = std::sqrt(std::max(0.0, c1.radius * c1.radius - a * a));
    const cplx u = (c2.center - c1.center) / d;
    const cplx mid = c1.center + a * u;
    const cplx perp = u * cplx{0.0, 1.0};
    if (h == 0.0) return {mid};
    return {mid + h * perp, mid - h * perp};
}

// Angular interval on the circle spanned by the arc through `arc` (ordered along the row).
inline bool on_arc(const CircleFit& c, const std::vector<cplx>& arc, cplx p, double tol) {
    const double ang_tol = tol / std::max(c.radius, 1e-300);
    const double start = std::arg(arc.front() - c.center);
    auto rel = [&](cplx q) {
        double t = std::arg(q - c.center) - start;
        while (t < 0.0) t += 2.0 * std::numbers::pi;
        return t;
    };
    // arc orientation: measure the swept angle through the middle sample
    const double mid = rel(arc[arc.size() / 2]);
    double end = rel(arc.back());
    double t = rel(p);
    if (mid > end) {
        // swept clockwise: mirror the parameterisation
        end = 2.0 * std::numbers::pi - end;
        t = t == 0.0 ? 0.0 : 2.0 * std::numbers::pi - t;
    }
    return t <= end + ang_tol || t >= 2.0 * std::numbers::pi - ang_tol;
}

} // namespace detail

/**
 * Inverts a polygon-cropped lattice patch in the unit circle and counts the
 * special points of the image: each boundary row (lattice points on one edge
 * of the patch's convex hull) maps to a circular arc, and adjacent arcs meet
 * at one point inside the image's convex hull. Returns the number of distinct
 * such meeting points.
 */
inline std::size_t special_points_of_inverted_patch(std::span<const cplx> pts, double tolerance = default_tolerance) {
    std::vector<cplx> all(pts.begin(), pts.end());
    const auto hull = detail::convex_hull(all);
    if (hull.size() < 3) throw Error("patch has no polygonal boundary");
    const auto inv = MapSpec::inversion();

    std::vector<CircleFit> fits;
    std::vector<std::vector<cplx>> arcs;
    for (std::size_t e = 0; e < hull.size(); ++e) {
        const cplx a = hull[e], b = hull[(e + 1) % hull.size()];
        const double len = std::abs(b - a);
        std::vector<std::pair<double, cplx>> row;
        for (const auto& p : pts) {
            const double t = ((p - a) * std::conj(b - a)).real() / (len * len);
            if (std::abs(detail::cross2(a, b, p)) / len <= tolerance && t >= -tolerance && t <= 1.0 + tolerance)
                row.emplace_back(t, p);
        }
        std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        std::vector<cplx> image;
        for (const auto& [t, p] : row) {
            const auto w = map_plane(inv, p);
            if (w.is_finite() && std::abs(p) > tolerance) image.push_back(w.value());
        }
        if (image.size() < 3) throw Error("boundary row has fewer than 3 points");
        fits.push_back(fit_circle(image));
        arcs.push_back(std::move(image));
    }

    const auto image_set = map_set(inv, pts, tolerance);
    const auto image_hull = detail::convex_hull(image_set.plane);

    std::vector<cplx> found;
    for (std::size_t e = 0; e < fits.size(); ++e) {
        const std::size_t f = (e + 1) % fits.size();
        for (const auto& p : detail::circle_intersections(fits[e], fits[f])) {
            const double tol = 1e-7 * std::max(1.0, std::abs(p));
            if (!detail::inside_convex(image_hull, p, tol)) continue;
            if (!detail::on_arc(fits[e], arcs[e], p, tol) || !detail::on_arc(fits[f], arcs[f], p, tol)) continue;
            const bool dup = std::any_of(found.begin(), found.end(), [&](cplx q) { return std::abs(q - p) <= tol; });
            if (!dup) found.push_back(p);
        }
    }
    return found.size();
}

inline std::size_t special_points_of_inverted_square(const CrystalSet& set) {
    if (set.kind != LatticeKind::square) throw Error("expected a square-lattice set");
    if (set.size() < 9) throw Error("boundary row has fewer than 3 points");
    return special_points_of_inverted_patch(set.embedded, set.tolerance);
}

inline Vec3 invert_sphere3d(const Vec3& p, const Vec3& center, double radius) {
    const Vec3 v = p - center;
    const double r2 = dot(v, v);
    if (r2 == 0.0) throw Error("cannot invert the center of the sphere");
    return center + (radius * radius / r2) * v;
}

} // namespace qcsym
