// qcsym: generate, transform, tile and check crystal and quasicrystal point sets.
//
// Exit status: 0 success, 1 validation failure (bad input data or a failed
// check), 2 usage error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcsym/qcsym.hpp"

namespace {

using namespace qcsym;

// Relative output paths are resolved against $QCSYM_OUTPUT_DIR when set.
std::string output_path(const std::string& path) {
    const char* dir = std::getenv("QCSYM_OUTPUT_DIR");
    if (!dir || !*dir || path == "-" || std::filesystem::path(path).is_absolute()) return path;
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / path).string();
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    write_text_file(output_path(path), text);
}

void emit_json(const std::string& path, const json& j) { emit(path, j.dump(1) + "\n"); }

cplx parse_point(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return {number_from_text(text), 0.0};
    return {number_from_text(text.substr(0, comma)), number_from_text(text.substr(comma + 1))};
}

bool is_tiling(const json& j) { return j.is_object() && j.value("kind", "") == "tiling"; }

// Points of a point-set or tiling document.
std::vector<cplx> load_points(const json& j, int* order = nullptr, double* tolerance = nullptr) {
    if (is_tiling(j)) {
        const auto t = tiling_from_json(j);
        if (order) *order = t.n_sectors;
        if (tolerance) *tolerance = t.tolerance;
        return t.vertices;
    }
    const auto doc = point_set_from_json(j);
    if (order) *order = doc.n;
    if (tolerance) *tolerance = doc.tolerance;
    return doc.embedded();
}

struct VerifyTable {
    bool ok = true;
    std::ostringstream out;

    void row(const std::string& check, const std::string& value, bool pass) {
        char line[256];
        std::snprintf(line, sizeof line, "%-28s %-32s %s\n", check.c_str(), value.c_str(), pass ? "PASS" : "FAIL");
        out << line;
        ok = ok && pass;
    }
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
    std::string kind = "quasilattice";
    int n = 8;
    std::int64_t bound = 1;
    double radius = 4.0;
    std::int64_t extent = 0;
    double tolerance = default_tolerance;
    std::string output;
};

int run_generate(const GenerateArgs& a) {
    const auto kind = lattice_kind_from_string(a.kind);
    CrystalSet set;
    if (kind == LatticeKind::quasilattice) {
        set = generate_quasilattice(a.n, a.bound, a.radius, a.tolerance);
        if (set.unsupported_order)
            std::cerr << "note: no inflation element for n=" << a.n << "; self-similarity checks are unavailable\n";
    } else {
        set = a.extent > 0 ? generate_periodic_patch(kind, a.extent) : generate_periodic(kind, a.radius);
    }
    emit_json(a.output, to_json(to_document(set)));
    return 0;
}

struct TransformArgs {
    std::string map = "square";
    std::string coeffs;
    bool anticonformal = false;
    std::string input;
    std::string output;
};

MapSpec map_from_args(const TransformArgs& a) {
    if (a.map == "square") return MapSpec::square();
    if (a.map == "reciprocal") return MapSpec::reciprocal();
    if (a.map == "inversion") return MapSpec::inversion();
    if (a.map == "stereographic") return MapSpec::stereographic();
    // mobius: a,b,c,d as real or re:im pairs, e.g. "1,0:1,1,0"
    std::vector<cplx> c;
    std::stringstream ss(a.coeffs);
    for (std::string item; std::getline(ss, item, ',');) {
        const auto colon = item.find(':');
        c.push_back(colon == std::string::npos
                        ? cplx{number_from_text(item), 0.0}
                        : cplx{number_from_text(item.substr(0, colon)), number_from_text(item.substr(colon + 1))});
    }
    if (c.size() != 4) throw Error("--coeffs needs four entries a,b,c,d");
    return MapSpec::of(MobiusMap(c[0], c[1], c[2], c[3], a.anticonformal));
}

int run_transform(const TransformArgs& a) {
    const auto spec = map_from_args(a);
    const auto j = read_json_file(a.input);
    int order = 1;
    double tol = default_tolerance;
    const auto pts = load_points(j, &order, &tol);
    const auto img = map_set(spec, pts, tol);
    std::map<std::string, std::string> meta{{"map", to_string(spec.kind)}, {"dropped", std::to_string(img.dropped)}};
    if (spec.kind == MapKind::stereographic) {
        SphereSetDocument doc;
        doc.points = img.sphere;
        doc.metadata = std::move(meta);
        emit_json(a.output, to_json(doc));
    } else {
        emit_json(a.output, to_json(document_from_points(img.plane, order, tol, std::move(meta))));
    }
    if (img.dropped) std::cerr << "dropped " << img.dropped << " point(s) mapped to infinity\n";
    return 0;
}

struct OrbitArgs {
    std::string symbol;
    std::vector<std::string> seeds{"1"};
    double r_min = 0.0;
    double r_max = 0.0;
    std::string center = "0,0";
    std::size_t budget = default_orbit_budget;
    std::string output;
};

int run_orbit(const OrbitArgs& a) {
    const cplx o = parse_point(a.center);
    const auto group = parse_symbol(a.symbol, {a.r_min, a.r_max}, o);
    std::vector<cplx> seed;
    for (const auto& s : a.seeds) seed.push_back(o + parse_point(s));
    const auto pts = orbit(group, seed, a.budget);
    std::map<std::string, std::string> meta{{"symbol", a.symbol},
                                            {"r_min", number_text(group.annulus.r_min)},
                                            {"r_max", number_text(group.annulus.r_max)},
                                            {"coefficient", number_text(group.coefficient)}};
    emit_json(a.output, to_json(document_from_points(pts, group.rotation_order, 1e-9, std::move(meta))));
    return 0;
}

struct TileArgs {
    std::string input;
    int sectors = 0;
    double factor = 1.05;
    std::string origin = "0,0";
    std::string scheme;
    std::string output;
};

int run_tile(const TileArgs& a) {
    int order = 1;
    double tol = default_tolerance;
    const auto pts = load_points(read_json_file(a.input), &order, &tol);
    auto t = build_tiling(pts, a.sectors > 0 ? a.sectors : order, a.factor, parse_point(a.origin), tol);
    if (!a.scheme.empty()) t.colors = color_partition(t, color_scheme_from_string(a.scheme));
    emit_json(a.output, to_json(t));
    return 0;
}

struct ColorArgs {
    std::string input;
    std::string scheme = "two_checker";
    std::string output;
};

int run_color(const ColorArgs& a) {
    const auto j = read_json_file(a.input);
    Tiling t;
    if (is_tiling(j)) {
        t = tiling_from_json(j);
    } else {
        int order = 1;
        double tol = default_tolerance;
        const auto pts = load_points(j, &order, &tol);
        t = build_tiling(pts, order, 1.05, {}, tol);
    }
    t.colors = color_partition(t, color_scheme_from_string(a.scheme));
    emit_json(a.output, to_json(t));
    return 0;
}

struct VerifyArgs {
    std::string suite;
    std::string input;
    std::string symbol = "10mL(φ=π/5)";
    int expect = 0;
    int samples = 100;
};

void suite_self_similarity(const VerifyArgs& a, VerifyTable& table) {
    const auto set = to_crystal_set(point_set_from_json(read_json_file(a.input)));
    const auto rep = verify_self_similarity(set);
    table.row("inflation factor", number_text(rep.factor), true);
    table.row("contained = checked", std::to_string(rep.contained) + " / " + std::to_string(rep.checked), rep.passed());
    table.row("scaling error", sci(rep.max_scaling_error), rep.max_scaling_error < 1e-9);
}

void suite_rotation_order(const VerifyArgs& a, VerifyTable& table) {
    double tol = default_tolerance;
    const auto pts = load_points(read_json_file(a.input), nullptr, &tol);
    const int order = point_group_order(pts, tol);
    table.row("rotation order", std::to_string(order), a.expect == 0 || order == a.expect);
}

void suite_fixed_point(const VerifyArgs& a, std::uint64_t seed, VerifyTable& table) {
    std::mt19937_64 rng(seed);
    for (cplx center : {cplx{}, cplx{3.0, 4.0}}) {
        const auto g = parse_symbol(a.symbol, {}, center);
        const auto words = random_words(g, static_cast<std::size_t>(a.samples), 8, rng);
        const double d = fixed_point_check(g, words);
        std::ostringstream label;
        label << "O=" << number_text(center.real()) << "," << number_text(center.imag());
        table.row("fixed point " + label.str(), sci(d), d < 1e-12);
    }
}

void suite_mobius(const VerifyArgs& a, std::uint64_t seed, VerifyTable& table) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const auto rc = [&] { return cplx{u(rng), u(rng)}; };
    double recompose = 0.0, involution = 0.0, circle = 0.0;
    for (int i = 0; i < a.samples; ++i) {
        MobiusMap m;
        do m = MobiusMap(rc(), rc(), rc(), rc());
        while (std::abs(m.det()) < 0.1 || std::abs(m.c) < 0.1);
        const auto parts = mobius_decompose(m);
        const auto inv = circle_inversion(CircleSpec::from_center_radius(u(rng), 0.5 + std::abs(u(rng))));
        for (int k = 0; k < a.samples; ++k) {
            const cplx z0 = rc();
            ExtendedComplex z = z0;
            const auto expected = mobius_apply(m, z);
            for (const auto& p : parts) z = mobius_apply(p, z);
            if (!expected.is_infinite()) recompose = std::max(recompose, distance(z, expected) / std::max(1.0, std::abs(expected.value())));
            involution = std::max(involution, distance(mobius_apply(inv, mobius_apply(inv, z0)), z0) / std::max(1.0, std::abs(z0)));
        }
        const auto pole = MapSpec::of(m).singularity();
        const auto c = CircleSpec::from_center_radius(u(rng), 0.5 + std::abs(u(rng)) / 2);
        if (!pole || std::abs(std::abs(*pole - c.center()) - c.radius()) > 0.2)
            circle = std::max(circle, circle_image_check(MapSpec::of(m), c, 64).residual);
    }
    table.row("decompose/recompose", sci(recompose), recompose < 1e-12);
    table.row("double inversion", sci(involution), involution < 1e-12);
    table.row("circle image residual", sci(circle), circle < 1e-9);
}

void suite_stereographic(const VerifyArgs& a, std::uint64_t seed, VerifyTable& table) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    double unit = 0.0, round_trip = 0.0;
    for (int i = 0; i < a.samples * 10; ++i) {
        const cplx z{u(rng), u(rng)};
        const auto p = stereographic(z);
        unit = std::max(unit, std::abs(p.norm() - 1.0));
        round_trip = std::max(round_trip, std::abs(inverse_stereographic(p).value() - z) / std::max(1.0, std::abs(z)));
    }
    const double coplanar = circle_image_check(MapSpec::stereographic(), CircleSpec::from_center_radius(3.0, 1.0), 64).residual;
    table.row("unit norm", sci(unit), unit < 1e-12);
    table.row("round trip", sci(round_trip), round_trip < 1e-12);
    table.row("circle coplanarity", sci(coplanar), coplanar < 1e-9);
}

void suite_special_points(const VerifyArgs& a, VerifyTable& table) {
    const auto set = to_crystal_set(point_set_from_json(read_json_file(a.input)));
    const auto count = special_points_of_inverted_patch(set.embedded, set.tolerance);
    table.row("special points", std::to_string(count), a.expect == 0 || static_cast<int>(count) == a.expect);
}

void suite_sectors(const VerifyArgs& a, VerifyTable& table) {
    int order = 1;
    double tol = default_tolerance;
    const auto pts = load_points(read_json_file(a.input), &order, &tol);
    const int n = a.expect > 0 ? a.expect : order;
    const auto pop = sector_populations(build_tiling(pts, n, 0.0, {}, tol));
    const bool equal = std::all_of(pop.begin(), pop.end(), [&](std::size_t p) { return p == pop.front(); });
    table.row("sector populations", std::to_string(n) + " x " + std::to_string(pop.front()), equal);
}

int run_verify(const VerifyArgs& a, std::uint64_t seed) {
    VerifyTable table;
    const bool reads_input = a.suite == "self-similarity" || a.suite == "rotation-order" || a.suite == "special-points" ||
                             a.suite == "sectors";
    if (reads_input && a.input.empty()) throw CLI::RequiredError("--input");
    if (a.suite == "self-similarity") suite_self_similarity(a, table);
    else if (a.suite == "rotation-order") suite_rotation_order(a, table);
    else if (a.suite == "special-points") suite_special_points(a, table);
    else if (a.suite == "sectors") suite_sectors(a, table);
    else if (a.suite == "fixed-point") suite_fixed_point(a, seed, table);
    else if (a.suite == "mobius") suite_mobius(a, seed, table);
    else if (a.suite == "stereographic") suite_stereographic(a, seed, table);
    std::cout << "suite: " << a.suite << "\n" << table.out.str() << (table.ok ? "result: PASS\n" : "result: FAIL\n");
    return table.ok ? 0 : 1;
}

struct RenderArgs {
    std::string input;
    std::string output;
    RenderOptions opts;
    std::string palette;
};

int run_render(RenderArgs a) {
    if (!a.palette.empty()) {
        a.opts.palette.clear();
        std::stringstream ss(a.palette);
        for (std::string item; std::getline(ss, item, ',');) a.opts.palette.push_back(item);
    }
    const auto j = read_json_file(a.input);
    if (is_tiling(j)) {
        emit(a.output, write_svg(tiling_from_json(j), a.opts));
    } else {
        const auto pts = load_points(j);
        emit(a.output, write_svg(pts, nullptr, a.opts));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crystal and quasicrystal point sets: generation, similarity symmetry, conformal maps, tilings"};
    app.require_subcommand(1);
    app.fallthrough(); // --seed may follow the subcommand
    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "Seed for randomized checks")->capture_default_str();

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Generate a lattice or quasilattice point set");
    generate->add_option("--kind", gen.kind, "square | hexagonal | quasilattice")
        ->check(CLI::IsMember({"square", "hexagonal", "quasilattice"}))
        ->capture_default_str();
    generate->add_option("--n", gen.n, "Rotation order of the quasilattice")->capture_default_str();
    generate->add_option("--bound", gen.bound, "Coefficient bound")->capture_default_str();
    generate->add_option("--radius", gen.radius, "Disk radius")->capture_default_str();
    generate->add_option("--extent", gen.extent, "Polygon crop of the periodic lattice instead of a disk");
    generate->add_option("--tolerance", gen.tolerance, "Deduplication radius")->capture_default_str();
    generate->add_option("-o,--output", gen.output, "Output JSON (stdout when omitted)");

    TransformArgs tr;
    auto* transform = app.add_subcommand("transform", "Apply a conformal map to a point set");
    transform->add_option("--map", tr.map, "square | reciprocal | inversion | mobius | stereographic")
        ->check(CLI::IsMember({"square", "reciprocal", "inversion", "mobius", "stereographic"}))
        ->capture_default_str();
    transform->add_option("--coeffs", tr.coeffs, "Mobius a,b,c,d; complex entries as re:im");
    transform->add_flag("--anticonformal", tr.anticonformal, "Apply the Mobius map to the conjugate");
    transform->add_option("-i,--input", tr.input, "Input point set")->required();
    transform->add_option("-o,--output", tr.output, "Output JSON");

    OrbitArgs orb;
    auto* orbit_cmd = app.add_subcommand("orbit", "Orbit of seed points under a similarity group");
    orbit_cmd->add_option("--symbol", orb.symbol, "Group symbol, e.g. \"10L(phi=-pi/5)\"")->required();
    orbit_cmd->add_option("--point", orb.seeds, "Seed point x[,y] relative to the center")->capture_default_str();
    orbit_cmd->add_option("--r-min", orb.r_min, "Annulus inner radius");
    orbit_cmd->add_option("--r-max", orb.r_max, "Annulus outer radius (default k^3, with r-min k^-3)");
    orbit_cmd->add_option("--center", orb.center, "Special point x,y")->capture_default_str();
    orbit_cmd->add_option("--budget", orb.budget, "Maximum orbit size")->capture_default_str();
    orbit_cmd->add_option("-o,--output", orb.output, "Output JSON");

    TileArgs tile;
    auto* tile_cmd = app.add_subcommand("tile", "Nearest-neighbour edges and sector/shell cells");
    tile_cmd->add_option("-i,--input", tile.input, "Input point set")->required();
    tile_cmd->add_option("--sectors", tile.sectors, "Sector count (default: the set's order)");
    tile_cmd->add_option("--factor", tile.factor, "Edge length factor over the minimum distance")->capture_default_str();
    tile_cmd->add_option("--origin", tile.origin, "Center of the sectors x,y")->capture_default_str();
    tile_cmd->add_option("--scheme", tile.scheme, "Also color with this scheme");
    tile_cmd->add_option("-o,--output", tile.output, "Output JSON");

    ColorArgs col;
    auto* color = app.add_subcommand("color", "Color a tiling");
    color->add_option("-i,--input", col.input, "Tiling or point set")->required();
    color->add_option("--scheme", col.scheme, "two_checker | sector_alternate | four_by_shell_and_parity")
        ->check(CLI::IsMember({"two_checker", "sector_alternate", "four_by_shell_and_parity"}))
        ->capture_default_str();
    color->add_option("-o,--output", col.output, "Output JSON");

    VerifyArgs ver;
    auto* verify = app.add_subcommand("verify", "Run a property suite and print a pass/fail table");
    verify->add_option("--suite", ver.suite, "Suite name")
        ->required()
        ->check(CLI::IsMember({"self-similarity", "rotation-order", "special-points", "sectors", "fixed-point", "mobius",
                               "stereographic"}));
    verify->add_option("-i,--input", ver.input, "Input document");
    verify->add_option("--symbol", ver.symbol, "Group symbol for fixed-point")->capture_default_str();
    verify->add_option("--expect", ver.expect, "Expected integer (rotation order, special points, sector count)");
    verify->add_option("--samples", ver.samples, "Random samples per check")->capture_default_str()->check(CLI::PositiveNumber);

    RenderArgs ren;
    auto* render = app.add_subcommand("render", "Render a point set or tiling as SVG");
    render->add_option("-i,--input", ren.input, "Point set or tiling")->required();
    render->add_option("-o,--output", ren.output, "Output SVG");
    render->add_option("--width", ren.opts.width_px)->capture_default_str();
    render->add_option("--height", ren.opts.height_px)->capture_default_str();
    render->add_option("--point-radius", ren.opts.point_radius_px)->capture_default_str();
    render->add_option("--palette", ren.palette, "Comma-separated colors");
    render->add_flag("!--no-edges", ren.opts.draw_edges, "Omit edges");
    render->add_flag("--rays", ren.opts.draw_rays, "Draw sector rays");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*generate) return run_generate(gen);
        if (*transform) return run_transform(tr);
        if (*orbit_cmd) return run_orbit(orb);
        if (*tile_cmd) return run_tile(tile);
        if (*color) return run_color(col);
        if (*verify) return run_verify(ver, seed);
        if (*render) return run_render(ren);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
