#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "qcsym/tiling.hpp"

namespace qcsym {
namespace {

constexpr double pi = std::numbers::pi;

std::vector<std::size_t> degrees(std::size_t n, const std::vector<Edge>& edges) {
    std::vector<std::size_t> deg(n, 0);
    for (const auto& [i, j] : edges) {
        ++deg[i];
        ++deg[j];
    }
    return deg;
}

// O(n²) oracle for the nearest-neighbour edge set.
std::vector<Edge> brute_force_edges(const std::vector<cplx>& pts, double factor) {
    double dmin = HUGE_VAL;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (std::abs(pts[i] - pts[j]) > 1e-9) dmin = std::min(dmin, std::abs(pts[i] - pts[j]));
    std::vector<Edge> out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (std::abs(pts[i] - pts[j]) <= factor * dmin * (1 + 1e-12)) out.emplace_back(i, j);
    return out;
}

Tiling colored_wheel(int n_sectors, int n_shells, ColorScheme scheme) {
    const auto pts = make_wheel(n_sectors, n_shells);
    auto t = build_tiling(pts, n_sectors, 0.0);
    t.colors = color_partition(t, scheme);
    return t;
}

TEST(Edges, SquareLatticeInteriorDegreeFour) {
    const auto set = generate_periodic(LatticeKind::square, 2.5);
    const auto edges = edges_by_nearest_neighbors(set.embedded, 1.05);
    EXPECT_EQ(edges, brute_force_edges(set.embedded, 1.05));
    const auto deg = degrees(set.size(), edges);
    for (std::size_t i = 0; i < set.size(); ++i)
        if (std::abs(set.embedded[i]) <= 1.5) EXPECT_EQ(deg[i], 4u) << set.embedded[i];
}

TEST(Edges, HexagonalInteriorDegreeSix) {
    const auto set = generate_periodic(LatticeKind::hexagonal, 3.0);
    const auto edges = edges_by_nearest_neighbors(set.embedded, 1.05);
    EXPECT_EQ(edges, brute_force_edges(set.embedded, 1.05));
    const auto deg = degrees(set.size(), edges);
    for (std::size_t i = 0; i < set.size(); ++i)
        if (std::abs(set.embedded[i]) <= 2.0) EXPECT_EQ(deg[i], 6u) << set.embedded[i];
}

TEST(Edges, TwoPoints) {
    const std::vector<cplx> pts{{0.0, 0.0}, {3.0, 4.0}};
    const auto edges = edges_by_nearest_neighbors(pts, 1.0);
    ASSERT_EQ(edges.size(), 1u);
    EXPECT_EQ(edges[0], (Edge{0, 1}));
}

TEST(Edges, Errors) {
    const std::vector<cplx> same{{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}};
    EXPECT_THROW(edges_by_nearest_neighbors(same, 1.05), Error);
    const std::vector<cplx> one{{1.0, 1.0}};
    EXPECT_THROW(edges_by_nearest_neighbors(one, 1.05), Error);
    const std::vector<cplx> two{{0.0, 0.0}, {1.0, 0.0}};
    EXPECT_THROW(edges_by_nearest_neighbors(two, 0.5), Error);
}

TEST(Edges, QuasilatticeMatchesOracle) {
    for (int n : {5, 8, 12}) {
        const auto set = generate_quasilattice(n, 1, 1.8);
        for (double factor : {1.0, 1.3, 2.0})
            EXPECT_EQ(edges_by_nearest_neighbors(set.embedded, factor), brute_force_edges(set.embedded, factor)) << n;
    }
}

TEST(Edges, InvariantUnderDihedralGroup) {
    for (int n : {8, 10, 12}) {
        const auto set = generate_quasilattice(n, 1, 2.0);
        const auto edges = edges_by_nearest_neighbors(set.embedded, 1.2);
        const PointIndex index(set.embedded, set.tolerance);
        const cplx zeta = root_of_unity(n, 1);
        for (bool mirror : {false, true}) {
            std::set<Edge> image;
            for (const auto& [i, j] : edges) {
                const auto map = [&](cplx z) { return mirror ? std::conj(z) : zeta * z; };
                const auto a = index.find(map(set.embedded[i]));
                const auto b = index.find(map(set.embedded[j]));
                ASSERT_TRUE(a && b);
                image.insert({std::min(*a, *b), std::max(*a, *b)});
            }
            EXPECT_EQ(std::vector<Edge>(image.begin(), image.end()), edges) << n << (mirror ? " mirror" : " rotation");
        }
    }
}

TEST(Sectors, BoundaryConvention) {
    const std::vector<cplx> pts{1.0, std::polar(1.0, pi / 4 + 1e-6), std::polar(1.0, pi / 4), std::polar(1.0, pi / 4 - 1e-6),
                                std::polar(2.0, -1e-6), 0.0};
    EXPECT_EQ(sector_partition(pts, 8), (std::vector<int>{0, 1, 1, 0, 7, 0}));
}

TEST(Sectors, RotationAdvancesSector) {
    const auto set = generate_quasilattice(8, 1, 2.5);
    const auto sectors = sector_partition(set.embedded, 8);
    std::vector<cplx> rotated;
    for (const auto& z : set.embedded) rotated.push_back(root_of_unity(8, 1) * z);
    const auto rotated_sectors = sector_partition(rotated, 8);
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (std::abs(set.embedded[i]) <= set.tolerance) continue;
        EXPECT_EQ(rotated_sectors[i], (sectors[i] + 1) % 8) << set.embedded[i];
    }
}

TEST(Sectors, EightfoldPopulationsEqual) {
    const auto set = generate_quasilattice(8, 1, 3.0);
    const auto t = build_tiling(set.embedded, 8, 0.0);
    const auto pop = sector_populations(t);
    // counting oracle: ⌊8θ/2π⌋ by hand
    std::vector<std::size_t> oracle(8, 0);
    for (const auto& z : set.embedded) {
        if (std::abs(z) <= 1e-9) continue;
        double t8 = std::atan2(z.imag(), z.real()) / (2 * pi) * 8;
        if (t8 < 0) t8 += 8;
        t8 = std::abs(t8 - std::round(t8)) < 1e-9 ? std::round(t8) : t8;
        ++oracle[static_cast<std::size_t>(std::floor(t8)) % 8];
    }
    EXPECT_EQ(pop, oracle);
    for (auto p : pop) EXPECT_EQ(p, pop[0]);
}

TEST(Sectors, SymmetricSetsHaveEqualPopulations) {
    for (int n : {5, 10, 12}) {
        const auto set = generate_quasilattice(n, 1, 2.0);
        const auto pop = sector_populations(build_tiling(set.embedded, n, 0.0));
        for (auto p : pop) EXPECT_EQ(p, pop[0]) << n;
    }
}

TEST(Shells, RankOfDistinctRadii) {
    const std::vector<cplx> pts{0.0, 1.0, {0.0, 1.0}, 2.0, {1.0, 1.0}};
    EXPECT_EQ(shell_partition(pts), (std::vector<int>{0, 1, 1, 3, 2}));
}

TEST(Coloring, TwoCheckerIsProperOnWheel) {
    const auto t = colored_wheel(8, 3, ColorScheme::two_checker);
    std::map<std::pair<int, int>, int> cell;
    for (std::size_t i = 0; i < t.vertices.size(); ++i) cell[{t.sectors[i], t.shells[i]}] = t.colors[i];
    ASSERT_EQ(cell.size(), 24u);
    for (const auto& [key, color] : cell) {
        const auto [s, h] = key;
        EXPECT_NE(color, cell.at({(s + 1) % 8, h}));
        if (cell.count({s, h + 1})) EXPECT_NE(color, cell.at({s, h + 1}));
    }
}

TEST(Coloring, SingleSectorAlternatesByShell) {
    const auto t = colored_wheel(1, 4, ColorScheme::two_checker);
    EXPECT_EQ(t.colors, (std::vector<int>{0, 1, 0, 1}));
}

TEST(Coloring, FourClasses) {
    const auto t = colored_wheel(6, 2, ColorScheme::four_by_shell_and_parity);
    EXPECT_EQ(std::set<int>(t.colors.begin(), t.colors.end()).size(), 4u);
}

TEST(Coloring, SectorAlternate) {
    const auto t = colored_wheel(8, 2, ColorScheme::sector_alternate);
    for (std::size_t i = 0; i < t.vertices.size(); ++i) EXPECT_EQ(t.colors[i], t.sectors[i] % 2);
    const auto odd = build_tiling(make_wheel(5, 1), 5, 0.0);
    EXPECT_THROW(color_partition(odd, ColorScheme::sector_alternate), Error);
}

TEST(Coloring, SchemeNames) {
    for (auto s : {ColorScheme::two_checker, ColorScheme::sector_alternate, ColorScheme::four_by_shell_and_parity})
        EXPECT_EQ(color_scheme_from_string(to_string(s)), s);
    EXPECT_THROW(color_scheme_from_string("rainbow"), Error);
}

TEST(ColorSymmetry, IdentityPreserves) {
    const auto t = colored_wheel(8, 3, ColorScheme::two_checker);
    const std::vector<int> id{0, 1};
    EXPECT_TRUE(color_symmetry_check(t, Similarity2D{}, id));
}

TEST(ColorSymmetry, RotationSwapsColors) {
    const auto t = colored_wheel(8, 3, ColorScheme::two_checker);
    const std::vector<int> swap{1, 0}, id{0, 1};
    const auto r = Similarity2D::rotation(2 * pi / 8);
    const auto r2 = compose_similarity2d(r, r);
    EXPECT_TRUE(color_symmetry_check(t, r, swap));
    EXPECT_FALSE(color_symmetry_check(t, r, id));
    EXPECT_FALSE(color_symmetry_check(t, r2, swap));
    EXPECT_TRUE(color_symmetry_check(t, r2, id)); // composing op with itself composes the permutation
}

TEST(ColorSymmetry, FourColorPermutations) {
    const auto t = colored_wheel(8, 3, ColorScheme::four_by_shell_and_parity);
    const auto r = Similarity2D::rotation(2 * pi / 8);
    const std::vector<int> flip_parity{1, 0, 3, 2};
    EXPECT_TRUE(color_symmetry_check(t, r, flip_parity));
    const std::vector<int> id{0, 1, 2, 3};
    EXPECT_TRUE(color_symmetry_check(t, compose_similarity2d(r, r), id));
    EXPECT_FALSE(color_symmetry_check(t, Similarity2D::rotation(pi / 8), id)); // not a symmetry of the vertices
}

TEST(ColorSymmetry, Errors) {
    auto t = colored_wheel(8, 1, ColorScheme::two_checker);
    const std::vector<int> id{0, 1};
    EXPECT_THROW(color_symmetry_check(t, Similarity2D::rotation(0.5, {1.0, 0.0}), id), Error);
    const std::vector<int> short_perm{0};
    EXPECT_THROW(color_symmetry_check(t, Similarity2D{}, short_perm), Error);
    t.colors.clear();
    EXPECT_THROW(color_symmetry_check(t, Similarity2D{}, id), Error);
}

TEST(TilingType, Validate) {
    auto t = build_tiling(make_wheel(4, 2), 4);
    EXPECT_NO_THROW(t.validate());
    t.edges.push_back({3, 1});
    EXPECT_THROW(t.validate(), Error);
    t.edges.pop_back();
    t.sectors[0] = 4;
    EXPECT_THROW(t.validate(), Error);
}

} // namespace
} // namespace qcsym
