#include <algorithm>
#include <cmath>
#include <random>
#include <regex>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "qcsym/io.hpp"

namespace qcsym {
namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

TEST(PointSetJson, RoundTripIsFieldExact) {
    const auto doc = to_document(generate_quasilattice(8, 1, 3.0));
    const auto text = to_json(doc).dump(1);
    const auto back = point_set_from_json(json::parse(text));
    EXPECT_EQ(back, doc);
    EXPECT_EQ(to_json(back).dump(1), text);
}

TEST(PointSetJson, RoundTripOfArbitraryDoubles) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    std::vector<cplx> pts;
    for (int i = 0; i < 500; ++i) pts.emplace_back(u(rng) / 7.0, std::ldexp(u(rng), -40));
    const auto doc = document_from_points(pts, 3, 1e-9, {{"note", "random"}});
    EXPECT_EQ(point_set_from_json(json::parse(to_json(doc).dump())), doc);
}

TEST(PointSetJson, CrystalSetSurvives) {
    for (const auto& set : {generate_quasilattice(12, 1, 1.5), generate_periodic(LatticeKind::hexagonal, 2.0),
                            generate_periodic_patch(LatticeKind::square, 2)}) {
        const auto back = to_crystal_set(point_set_from_json(to_json(to_document(set))));
        EXPECT_EQ(back.n, set.n);
        EXPECT_EQ(back.kind, set.kind);
        EXPECT_EQ(back.crop, set.crop);
        EXPECT_EQ(back.radius, set.radius);
        EXPECT_EQ(back.coeff_bound, set.coeff_bound);
        EXPECT_EQ(back.points, set.points);
        EXPECT_EQ(back.embedded, set.embedded);
    }
}

TEST(PointSetJson, CoefficientMismatchRejected) {
    auto j = to_json(to_document(generate_quasilattice(8, 1, 2.0)));
    j["points"][1]["x"] = j["points"][1]["x"].get<double>() + 1e-6;
    EXPECT_THROW(point_set_from_json(j), Error);
}

TEST(PointSetJson, SchemaErrors) {
    const auto good = to_json(to_document(generate_periodic(LatticeKind::square, 1.5)));
    auto j = good;
    j["format_version"] = 2;
    EXPECT_THROW(point_set_from_json(j), Error);
    j = good;
    j.erase("points");
    EXPECT_THROW(point_set_from_json(j), Error);
    j = good;
    j["points"][0]["coeffs"] = json::array({1, 2});
    EXPECT_THROW(point_set_from_json(j), Error);
    j = good;
    j["tolerance"] = "tiny";
    EXPECT_THROW(point_set_from_json(j), Error);
    EXPECT_THROW(point_set_from_json(json::array()), Error);
}

TEST(NumberText, ShortestRoundTrip) {
    EXPECT_EQ(number_text(0.1), "0.1");
    EXPECT_EQ(number_text(2.5), "2.5");
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng);
        EXPECT_EQ(number_from_text(number_text(v)), v);
    }
    EXPECT_THROW(number_from_text("1.5x"), Error);
    EXPECT_THROW(number_from_text(""), Error);
}

TEST(SphereJson, RoundTrip) {
    SphereSetDocument doc;
    for (double t : {0.0, 0.5, 2.0, -3.0}) doc.points.push_back(stereographic(cplx{t, 1.0 - t}));
    const auto back = sphere_set_from_json(json::parse(to_json(doc).dump()));
    ASSERT_EQ(back.points.size(), doc.points.size());
    for (std::size_t i = 0; i < doc.points.size(); ++i) {
        EXPECT_EQ(back.points[i].x0, doc.points[i].x0);
        EXPECT_EQ(back.points[i].x1, doc.points[i].x1);
        EXPECT_EQ(back.points[i].x2, doc.points[i].x2);
    }
    auto j = to_json(doc);
    j["points"][0]["x0"] = 3.0;
    EXPECT_THROW(sphere_set_from_json(j), Error);
}

TEST(TilingJson, RoundTripIsFieldExact) {
    const auto set = generate_quasilattice(10, 1, 2.0);
    auto t = build_tiling(set.embedded, 10, 1.05, {}, set.tolerance);
    t.colors = color_partition(t, ColorScheme::four_by_shell_and_parity);
    const auto text = to_json(t).dump(1);
    const auto back = tiling_from_json(json::parse(text));
    EXPECT_EQ(back, t);
    EXPECT_EQ(to_json(back).dump(1), text);
}

TEST(TilingJson, InvalidRejected) {
    auto t = build_tiling(make_wheel(4, 2), 4);
    auto j = to_json(t);
    j["edges"].push_back(json::array({0, 99}));
    EXPECT_THROW(tiling_from_json(j), Error);
    j = to_json(t);
    j["kind"] = "points";
    EXPECT_THROW(tiling_from_json(j), Error);
}

TEST(Svg, SinglePointIsOneCircle) {
    const std::vector<cplx> one{{0.0, 0.0}};
    const auto svg = write_svg(one, nullptr, {});
    EXPECT_EQ(count_of(svg, "<circle"), 1u);
    EXPECT_EQ(count_of(svg, "<line"), 0u);
    EXPECT_NE(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\""), std::string::npos);
}

TEST(Svg, ElementCountsMatchPointsAndEdges) {
    const auto set = generate_periodic(LatticeKind::square, 2.5);
    const auto t = build_tiling(set.embedded, 4);
    const auto svg = write_svg(t, {});
    EXPECT_EQ(count_of(svg, "<circle"), t.vertices.size());
    EXPECT_EQ(count_of(svg, "<line"), t.edges.size());
    EXPECT_EQ(count_of(svg, "<circle") + count_of(svg, "<line"), t.vertices.size() + t.edges.size());
    RenderOptions rays;
    rays.draw_rays = true;
    EXPECT_EQ(count_of(write_svg(t, rays), "<line"), t.edges.size() + 4);
    RenderOptions bare;
    bare.draw_edges = false;
    EXPECT_EQ(count_of(write_svg(t, bare), "<line"), 0u);
}

TEST(Svg, TwoCheckerUsesTwoFills) {
    auto t = build_tiling(make_wheel(8, 3), 8);
    t.colors = color_partition(t, ColorScheme::two_checker);
    const auto svg = write_svg(t, {});
    const std::regex fill("<circle[^>]* fill=\"(#[0-9a-f]{6})\"");
    std::set<std::string> fills;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), fill); it != std::sregex_iterator(); ++it) fills.insert((*it)[1]);
    EXPECT_EQ(fills.size(), 2u);
}

TEST(Svg, DeterministicAndValidated) {
    const auto set = generate_quasilattice(8, 1, 2.0);
    const auto t = build_tiling(set.embedded, 8);
    EXPECT_EQ(write_svg(t, {}), write_svg(t, {}));
    RenderOptions bad;
    bad.width_px = 0;
    EXPECT_THROW(write_svg(t, bad), Error);
    EXPECT_THROW(write_svg(std::vector<cplx>{}, nullptr, {}), Error);
    auto colored = t;
    colored.colors = color_partition(colored, ColorScheme::two_checker);
    RenderOptions no_palette;
    no_palette.palette.clear();
    EXPECT_THROW(write_svg(colored, no_palette), Error);
}

} // namespace
} // namespace qcsym
