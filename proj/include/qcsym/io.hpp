#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcsym/conformal.hpp"
#include "qcsym/error.hpp"
#include "qcsym/quasilattice.hpp"
#include "qcsym/tiling.hpp"

namespace qcsym {

using json = nlohmann::json;

inline constexpr int format_version = 1;

struct PointRecord {
    std::optional<std::vector<std::int64_t>> coeffs;
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const PointRecord&, const PointRecord&) = default;
};

/// Planar point set on disk. Exact cyclotomic coefficients travel alongside the float embedding.
struct PointSetDocument {
    int format_version = qcsym::format_version;
    int n = 1;
    double tolerance = default_tolerance;
    std::vector<PointRecord> points;
    std::map<std::string, std::string> metadata;

    std::vector<cplx> embedded() const {
        std::vector<cplx> out;
        out.reserve(points.size());
        for (const auto& p : points) out.emplace_back(p.x, p.y);
        return out;
    }

    friend bool operator==(const PointSetDocument&, const PointSetDocument&) = default;
};

struct SphereSetDocument {
    int format_version = qcsym::format_version;
    std::vector<SpherePoint> points;
    std::map<std::string, std::string> metadata;
};

/// Shortest decimal string that reads back to the same double.
inline std::string number_text(double v) { return json(v).dump(); }

inline double number_from_text(const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw Error("bad number '" + s + "'");
        return v;
    } catch (const std::invalid_argument&) {
        throw Error("bad number '" + s + "'");
    } catch (const std::out_of_range&) {
        throw Error("bad number '" + s + "'");
    }
}

// ---------------------------------------------------------------------------
// point sets

inline json to_json(const PointSetDocument& doc) {
    json pts = json::array();
    for (const auto& p : doc.points) {
        json j = json::object();
        if (p.coeffs) j["coeffs"] = *p.coeffs;
        j["x"] = p.x;
        j["y"] = p.y;
        pts.push_back(std::move(j));
    }
    json meta = json::object();
    for (const auto& [k, v] : doc.metadata) meta[k] = v;
    return json{{"format_version", doc.format_version}, {"n", doc.n}, {"tolerance", doc.tolerance},
                {"points", std::move(pts)}, {"metadata", std::move(meta)}};
}

/// Validates the schema and that every coefficient vector embeds to its (x, y) within 1e-9.
inline PointSetDocument point_set_from_json(const json& j) {
    try {
        PointSetDocument doc;
        doc.format_version = j.at("format_version").get<int>();
        if (doc.format_version != format_version) throw Error("unsupported format_version " + std::to_string(doc.format_version));
        doc.n = j.at("n").get<int>();
        if (doc.n < 1) throw Error("n must be >= 1");
        doc.tolerance = j.at("tolerance").get<double>();
        if (!(doc.tolerance > 0.0)) throw Error("tolerance must be positive");
        for (const auto& p : j.at("points")) {
            PointRecord r;
            r.x = p.at("x").get<double>();
            r.y = p.at("y").get<double>();
            if (p.contains("coeffs")) {
                r.coeffs = p.at("coeffs").get<std::vector<std::int64_t>>();
                if (r.coeffs->size() != static_cast<std::size_t>(doc.n)) throw Error("coeffs length differs from n");
                const cplx z = CyclotomicPoint(doc.n, *r.coeffs).embed();
                if (std::abs(z - cplx{r.x, r.y}) > 1e-9) throw Error("coeffs do not match (x, y)");
            }
            doc.points.push_back(std::move(r));
        }
        if (j.contains("metadata"))
            for (const auto& [k, v] : j.at("metadata").items()) doc.metadata[k] = v.get<std::string>();
        return doc;
    } catch (const json::exception& e) {
        throw Error(std::string("invalid point-set document: ") + e.what());
    }
}

inline PointSetDocument to_document(const CrystalSet& set) {
    PointSetDocument doc;
    doc.n = set.n;
    doc.tolerance = set.tolerance;
    for (std::size_t i = 0; i < set.size(); ++i)
        doc.points.push_back({set.points[i].coeffs, set.embedded[i].real(), set.embedded[i].imag()});
    doc.metadata["kind"] = to_string(set.kind);
    doc.metadata["crop"] = set.crop == CropShape::disk ? "disk" : "polygon";
    doc.metadata["radius"] = number_text(set.radius);
    if (set.kind == LatticeKind::quasilattice) doc.metadata["bound"] = std::to_string(set.coeff_bound);
    if (set.crop == CropShape::polygon) doc.metadata["extent"] = std::to_string(set.extent);
    return doc;
}

/// Rebuilds a CrystalSet; needs coefficients on every point and the generator metadata.
inline CrystalSet to_crystal_set(const PointSetDocument& doc) {
    CrystalSet set;
    set.n = doc.n;
    set.tolerance = doc.tolerance;
    const auto get = [&](const char* key) -> const std::string& {
        auto it = doc.metadata.find(key);
        if (it == doc.metadata.end()) throw Error(std::string("document metadata lacks '") + key + "'");
        return it->second;
    };
    set.kind = lattice_kind_from_string(get("kind"));
    set.radius = number_from_text(get("radius"));
    if (auto it = doc.metadata.find("crop"); it != doc.metadata.end() && it->second == "polygon") {
        set.crop = CropShape::polygon;
        set.extent = static_cast<std::int64_t>(number_from_text(get("extent")));
    }
    if (set.kind == LatticeKind::quasilattice) set.coeff_bound = static_cast<std::int64_t>(number_from_text(get("bound")));
    for (const auto& p : doc.points) {
        if (!p.coeffs) throw Error("point without coefficients");
        set.points.emplace_back(doc.n, *p.coeffs);
        set.embedded.emplace_back(p.x, p.y);
    }
    return set;
}

inline PointSetDocument document_from_points(std::span<const cplx> pts, int n, double tolerance,
                                             std::map<std::string, std::string> metadata = {}) {
    PointSetDocument doc;
    doc.n = n;
    doc.tolerance = tolerance;
    doc.metadata = std::move(metadata);
    for (const auto& z : pts) doc.points.push_back({std::nullopt, z.real(), z.imag()});
    return doc;
}

inline json to_json(const SphereSetDocument& doc) {
    json pts = json::array();
    for (const auto& p : doc.points) pts.push_back(json{{"x0", p.x0}, {"x1", p.x1}, {"x2", p.x2}});
    json meta = json::object();
    for (const auto& [k, v] : doc.metadata) meta[k] = v;
    return json{{"format_version", doc.format_version}, {"kind", "sphere"}, {"points", std::move(pts)},
                {"metadata", std::move(meta)}};
}

inline SphereSetDocument sphere_set_from_json(const json& j) {
    try {
        SphereSetDocument doc;
        doc.format_version = j.at("format_version").get<int>();
        if (doc.format_version != format_version) throw Error("unsupported format_version");
        if (j.at("kind").get<std::string>() != "sphere") throw Error("not a sphere point document");
        for (const auto& p : j.at("points")) {
            SpherePoint s{p.at("x0").get<double>(), p.at("x1").get<double>(), p.at("x2").get<double>()};
            if (std::abs(s.norm() - 1.0) > 1e-9) throw Error("sphere point off the unit sphere");
            doc.points.push_back(s);
        }
        if (j.contains("metadata"))
            for (const auto& [k, v] : j.at("metadata").items()) doc.metadata[k] = v.get<std::string>();
        return doc;
    } catch (const json::exception& e) {
        throw Error(std::string("invalid sphere document: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// tilings

inline json to_json(const Tiling& t) {
    json verts = json::array();
    for (const auto& v : t.vertices) verts.push_back(json{{"x", v.real()}, {"y", v.imag()}});
    json edges = json::array();
    for (const auto& [i, j] : t.edges) edges.push_back(json::array({i, j}));
    return json{{"format_version", format_version},
                {"kind", "tiling"},
                {"n_sectors", t.n_sectors},
                {"tolerance", t.tolerance},
                {"origin", json{{"x", t.origin.real()}, {"y", t.origin.imag()}}},
                {"vertices", std::move(verts)},
                {"edges", std::move(edges)},
                {"sectors", t.sectors},
                {"shells", t.shells},
                {"colors", t.colors}};
}

inline Tiling tiling_from_json(const json& j) {
    try {
        if (j.at("format_version").get<int>() != format_version) throw Error("unsupported format_version");
        if (j.at("kind").get<std::string>() != "tiling") throw Error("not a tiling document");
        Tiling t;
        t.n_sectors = j.at("n_sectors").get<int>();
        if (t.n_sectors < 1) throw Error("n_sectors must be >= 1");
        t.tolerance = j.at("tolerance").get<double>();
        t.origin = {j.at("origin").at("x").get<double>(), j.at("origin").at("y").get<double>()};
        for (const auto& v : j.at("vertices")) t.vertices.emplace_back(v.at("x").get<double>(), v.at("y").get<double>());
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw Error("edge must be a pair");
            t.edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
        }
        t.sectors = j.at("sectors").get<std::vector<int>>();
        t.shells = j.at("shells").get<std::vector<int>>();
        t.colors = j.at("colors").get<std::vector<int>>();
        t.validate();
        return t;
    } catch (const json::exception& e) {
        throw Error(std::string("invalid tiling document: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// files

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error("cannot parse '" + path + "': " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
    if (!out) throw Error("write failed for '" + path + "'");
}

inline void write_json_file(const std::string& path, const json& j) { write_text_file(path, j.dump(1) + "\n"); }

// ---------------------------------------------------------------------------
// SVG

struct RenderOptions {
    int width_px = 800;
    int height_px = 800;
    double point_radius_px = 3.0;
    std::vector<std::string> palette{"#1f4e9c", "#d1382b", "#f2c230", "#2e9c4a", "#7b3fa0", "#e07b1a"};
    bool draw_edges = true;
    bool draw_rays = false;

    void validate() const {
        if (width_px <= 0 || height_px <= 0) throw Error("render size must be positive");
        if (!(point_radius_px > 0.0)) throw Error("point radius must be positive");
    }
};

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    std::string s(buf);
    if (s == "-0.000") s = "0.000";
    return s;
}

} // namespace detail

/**
 * SVG 1.1 rendering: edges as <line>, optional sector rays from the tiling's
 * origin, points as <circle> filled from the palette by color index. Element
 * order follows the input, so output is deterministic.
 */
inline std::string write_svg(std::span<const cplx> pts, const Tiling* tiling, const RenderOptions& opts) {
    opts.validate();
    if (pts.empty()) throw Error("nothing to render");
    const bool colored = tiling && tiling->colors.size() == pts.size();
    if (colored && opts.palette.empty()) throw Error("palette is empty");

    double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
    for (const auto& p : pts) {
        xmin = std::min(xmin, p.real());
        xmax = std::max(xmax, p.real());
        ymin = std::min(ymin, p.imag());
        ymax = std::max(ymax, p.imag());
    }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
    const double margin = 2.0 * opts.point_radius_px + 4.0;
    const double usable = std::max(1.0, std::min(opts.width_px, opts.height_px) - 2.0 * margin);
    const double scale = usable / span;
    const double cx = (xmin + xmax) / 2.0, cy = (ymin + ymax) / 2.0;
    const auto sx = [&](double x) { return opts.width_px / 2.0 + (x - cx) * scale; };
    const auto sy = [&](double y) { return opts.height_px / 2.0 - (y - cy) * scale; };
    using detail::fmt;

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << opts.width_px << "\" height=\""
       << opts.height_px << "\" viewBox=\"0 0 " << opts.width_px << ' ' << opts.height_px << "\">\n";
    if (tiling && opts.draw_edges && !tiling->edges.empty()) {
        os << "<g stroke=\"#555555\" stroke-width=\"1\">\n";
        for (const auto& [i, j] : tiling->edges) {
            if (i >= pts.size() || j >= pts.size()) throw Error("edge index out of range");
            os << "<line x1=\"" << fmt(sx(pts[i].real())) << "\" y1=\"" << fmt(sy(pts[i].imag())) << "\" x2=\""
               << fmt(sx(pts[j].real())) << "\" y2=\"" << fmt(sy(pts[j].imag())) << "\"/>\n";
        }
        os << "</g>\n";
    }
    if (tiling && opts.draw_rays) {
        const double reach = std::hypot(opts.width_px, opts.height_px) / scale;
        os << "<g stroke=\"#999999\" stroke-width=\"1\" stroke-dasharray=\"4 3\">\n";
        for (int s = 0; s < tiling->n_sectors; ++s) {
            const cplx end = tiling->origin + std::polar(reach, 2.0 * std::numbers::pi * s / tiling->n_sectors);
            os << "<line x1=\"" << fmt(sx(tiling->origin.real())) << "\" y1=\"" << fmt(sy(tiling->origin.imag()))
               << "\" x2=\"" << fmt(sx(end.real())) << "\" y2=\"" << fmt(sy(end.imag())) << "\"/>\n";
        }
        os << "</g>\n";
    }
    os << "<g stroke=\"#000000\" stroke-width=\"0.5\">\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::string fill = "#222222";
        if (colored) {
            const auto c = static_cast<std::size_t>(std::max(0, tiling->colors[i]));
            fill = opts.palette[c % opts.palette.size()];
        }
        os << "<circle cx=\"" << fmt(sx(pts[i].real())) << "\" cy=\"" << fmt(sy(pts[i].imag())) << "\" r=\""
           << fmt(opts.point_radius_px) << "\" fill=\"" << fill << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

inline std::string write_svg(const Tiling& t, const RenderOptions& opts) { return write_svg(t.vertices, &t, opts); }

} // namespace qcsym
