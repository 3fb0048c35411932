#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pentagram/cli.hpp"
#include "pentagram/random.hpp"

using namespace pentagram;
using namespace pentagram::cli;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::InvalidInput;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_path(const std::string& name) { return std::string(TEST_TMP_DIR) + "/" + name; }

// Exit status of the pentagram executable with the given arguments.
int run_tool(const std::string& args) {
    std::string cmd = std::string(PENTAGRAM_EXE) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

size_t count(const std::string& text, const std::string& needle) {
    size_t c = 0;
    for (size_t p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++c;
    return c;
}

}  // namespace

TEST_CASE("generation is deterministic per (n, seed)") {
    for (auto kind : {FileKind::AB, FileKind::XY, FileKind::Vertices}) {
        GenerateOptions opt{7, 42, kind, false};
        CHECK(dump(cmd_random(opt)) == dump(cmd_random(opt)));
        GenerateOptions other = opt;
        other.seed = 43;
        CHECK(dump(cmd_random(opt)) != dump(cmd_random(other)));
    }
    // The stream for (n, seed) is Rng(seed, n).
    Rng rng(42, 7);
    CHECK(cmd_random({7, 42, FileKind::XY, false}) == [&] {
        PolygonFile f = file_from(random_xy(7, rng));
        f.seed = 42;
        return f;
    }());
}

TEST_CASE("reports are deterministic apart from timing") {
    PolygonFile f = cmd_random({5, 3, FileKind::XY, false});
    Tolerances tol;
    CHECK(cmd_verify(f, tol, 20).to_json(false).dump() == cmd_verify(f, tol, 20).to_json(false).dump());
    CHECK(!cmd_verify(f, tol, 20).to_json(false).contains("timing"));
    CHECK(cmd_verify(f, tol, 20).to_json(true).contains("timing"));
}

TEST_CASE("polygon files roundtrip through text") {
    for (auto kind : {FileKind::AB, FileKind::XY, FileKind::Vertices})
        for (int n : {4, 5, 7, 8}) {
            PolygonFile f = cmd_random({n, 9, kind, false});
            CHECK(polygon_from_json(json::parse(dump(f))) == f);
        }
    PolygonFile twisted = cmd_random({5, 1, FileKind::Vertices, false});
    CHECK(twisted.monodromy.has_value());
    CHECK(polygon_from_json(json::parse(dump(twisted))) == twisted);
    PolygonFile closed = cmd_random({6, 1, FileKind::Vertices, true});
    CHECK(!closed.monodromy.has_value());

    std::string path = temp_path("roundtrip.json");
    std::ofstream(path) << dump(twisted);
    CHECK(read_polygon_file(path) == twisted);
}

TEST_CASE("polygon file schema is enforced") {
    json good = to_json(cmd_random({5, 1, FileKind::XY, false}));
    auto bad = [&](auto edit) {
        json j = good;
        edit(j);
        return kind_of([&] { polygon_from_json(j); });
    };
    CHECK(bad([](json& j) { j["schema_version"] = "2"; }) == ErrorKind::InvalidInput);
    CHECK(bad([](json& j) { j.erase("n"); }) == ErrorKind::InvalidInput);
    CHECK(bad([](json& j) { j["n"] = 3; }) == ErrorKind::InvalidInput);
    CHECK(bad([](json& j) { j["kind"] = "polar"; }) == ErrorKind::InvalidInput);
    CHECK(bad([](json& j) { j["data"]["x"].erase(0); }) == ErrorKind::InvalidInput);
    CHECK(bad([](json& j) { j["data"]["y"][0] = "1+2i"; }) == ErrorKind::InvalidInput);
    CHECK(bad([](json& j) { j["data"]["y"][0] = json::array({1.0}); }) == ErrorKind::InvalidInput);
    CHECK(bad([](json& j) { j["monodromy"] = json::array(); }) == ErrorKind::InvalidInput);
    CHECK(bad([](json& j) { j["seed"] = -1; }) == ErrorKind::InvalidInput);

    json ab6 = to_json(cmd_random({6, 1, FileKind::XY, false}));
    ab6["kind"] = "ab";
    ab6["data"] = {{"a", ab6["data"]["x"]}, {"b", ab6["data"]["y"]}};
    CHECK(kind_of([&] { polygon_from_json(ab6); }) == ErrorKind::IndivisibilityViolated);
    CHECK(kind_of([] { read_polygon_file("/nonexistent/polygon.json"); }) == ErrorKind::InvalidInput);
}

TEST_CASE("closed generation") {
    for (int n = 5; n <= 9; ++n) {
        PolygonFile f = cmd_random({n, 0, FileKind::Vertices, true});
        CHECK(is_closed(chain_data(f)));
        CHECK(views_of(f).closed);
        CHECK(views_of(cmd_random({n, 0, FileKind::XY, true})).closed);
        CHECK(!views_of(cmd_random({n, 0, FileKind::XY, false})).closed);
    }
    CHECK(kind_of([] { cmd_random({4, 0, FileKind::Vertices, true}); }) == ErrorKind::UnsupportedN);
    CHECK(kind_of([] { cmd_random({6, 0, FileKind::AB, false}); }) == ErrorKind::IndivisibilityViolated);
    CHECK(kind_of([] { cmd_random({3, 0, FileKind::XY, false}); }) == ErrorKind::InvalidInput);
}

TEST_CASE("iterate with zero steps reports the initial invariants only") {
    PolygonFile f = cmd_random({7, 42, FileKind::XY, false});
    IterateOutput out = cmd_iterate(f, {0, false, 1}, Tolerances());
    CHECK(out.report.data["steps"].size() == 1);
    CHECK(out.report.checks.empty());
    CHECK(out.report.pass());
    CHECK(out.report.data["steps"][0]["invariants"] == invariants_json(spectral_invariants(xy_data(f))));
}

TEST_CASE("iterate records the drift") {
    PolygonFile f = cmd_random({7, 42, FileKind::XY, false});
    Report r = cmd_iterate(f, {100, false, 1}, Tolerances()).report;
    CHECK(r.data["steps"].size() == 101);
    CHECK(r.data["drift"].get<double>() < 1e-9);
    CHECK(r.checks.at("conservation").pass);
    CHECK(exit_code(r) == 0);
}

TEST_CASE("iterate flags the pentagon's periodicity") {
    for (auto kind : {FileKind::Vertices, FileKind::XY}) {
        PolygonFile f = cmd_random({5, 11, kind, true});
        Report r = cmd_iterate(f, {5, false, 1}, Tolerances()).report;
        const json& p = r.data["periodicity"];
        CHECK(p["detected"].get<bool>());
        bool one = false, five = false;
        for (const auto& m : p["matches"]) {
            if (m["step"] == 1) one = true;
            if (m["step"] == 5 && m["shift"] == 0) five = true;
        }
        CHECK(one);
        CHECK(five);
    }
    // A generic twisted polygon is not periodic.
    Report r = cmd_iterate(cmd_random({5, 11, FileKind::XY, false}), {5, false, 1}, Tolerances()).report;
    CHECK(!r.data["periodicity"]["detected"].get<bool>());
}

TEST_CASE("find_periodicity on a fixed point") {
    XYCoords c(std::vector<Complex>(6, 0.5), std::vector<Complex>(6, 3.0));
    auto found = find_periodicity(orbit(c, 3).states, 1e-12);
    REQUIRE(found.size() == 3);
    CHECK(found[0].step == 1);
    CHECK(found[0].residual == 0.0);
}

TEST_CASE("iterate surfaces the failing step") {
    // Choose x_0 so that 1 - x'_1 y'_1 = 0 after one step, from
    // x'_1 y'_1 = x_1 y_2 f_0 f_3 / (f_2 f_1) with f_k = 1 - x_k y_k.
    Rng rng(5, 100);
    XYCoords xy = random_xy(7, rng);
    auto f = [&](int k) { return 1.0 - xy.x[k] * xy.y[k]; };
    Complex f0 = f(2) * f(1) / (xy.x[1] * xy.y[2] * f(3));
    xy.x[0] = (1.0 - f0) / xy.y[0];
    IterateOutput out = cmd_iterate(file_from(xy), {10, false, 1}, Tolerances());
    CHECK(out.report.data["failed_step"] == 2);
    CHECK(out.report.data["steps"].size() == 2);
    CHECK(!out.report.pass());
    CHECK(exit_code(out.report) == 3);
}

TEST_CASE("svg output") {
    PolygonFile f = cmd_random({7, 2, FileKind::Vertices, true});
    IterateOutput out = cmd_iterate(f, {6, true, 2}, Tolerances());
    CHECK(out.svg.find("viewBox=\"0 0 1000 1000\"") != std::string::npos);
    CHECK(count(out.svg, "<polyline") == 4);  // steps 0, 2, 4, 6
    CHECK(count(out.svg, "<circle") == 4 * 8);
    CHECK(out.report.data["svg_imaginary_parts_dropped"] == false);
    CHECK(out.svg == cmd_iterate(f, {6, true, 2}, Tolerances()).svg);

    IterateOutput complex_out = cmd_iterate(cmd_random({7, 2, FileKind::Vertices, false}), {2, true, 1}, Tolerances());
    CHECK(complex_out.report.data["svg_imaginary_parts_dropped"] == true);
    CHECK(kind_of([] { cmd_iterate(cmd_random({6, 2, FileKind::XY, false}), {2, true, 1}, Tolerances()); }) ==
          ErrorKind::IndivisibilityViolated);
}

TEST_CASE("verify passes on a generic polygon") {
    Report r = cmd_verify(cmd_random({7, 1, FileKind::XY, false}), Tolerances());
    for (const auto& [name, c] : r.checks) CHECK_MESSAGE(c.pass, name << " residual " << c.residual);
    for (const char* name : {"zero_curvature.xy", "zero_curvature.ab", "conservation", "route_equivalence",
                             "gauge_relation", "monodromy_asymptotics", "marked_point_limits",
                             "puiseux_leading_terms", "genus", "involution", "bracket_invariance", "casimirs",
                             "poisson_rank", "omega_leaf_rank", "onleaf_inverse", "omega_invariance"})
        CHECK_MESSAGE(r.checks.contains(name), name);
    CHECK(!r.checks.contains("closed_relations"));
    CHECK(exit_code(r) == 0);

    Report closed = cmd_verify(cmd_random({7, 1, FileKind::Vertices, true}), Tolerances());
    CHECK(closed.checks.contains("closed_relations"));
    CHECK(closed.pass());
}

TEST_CASE("verify reports a tampered file") {
    json j = to_json(cmd_random({7, 1, FileKind::XY, false}));
    j["data"]["x"][3] = json::array({0.0, 0.0});
    Report r = cmd_verify(polygon_from_json(j), Tolerances());
    CHECK(!r.checks.at("coordinates_valid").pass);
    CHECK(!r.pass());
    CHECK(exit_code(r) != 0);
}

TEST_CASE("tolerance overrides") {
    Tolerances tol;
    tol.override_with("conservation=0");
    CHECK(tol.get("conservation") == 0.0);
    Report r = cmd_verify(cmd_random({7, 1, FileKind::XY, false}), tol, 50);
    CHECK(!r.checks.at("conservation").pass);
    CHECK(exit_code(r) == 1);
    CHECK(kind_of([&] { tol.override_with("nonsense=1"); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([&] { tol.override_with("genus"); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([&] { tol.override_with("genus=-1"); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([&] { tol.override_with("genus=abc"); }) == ErrorKind::InvalidInput);
}

TEST_CASE("seed sweep") {
    SweepOptions opt;
    opt.threads = 3;
    Report r = cmd_verify_sweep(opt, Tolerances());
    CHECK(r.pass());
    CHECK(r.data["polygons"].size() == 30);
    CHECK(r.checks.contains("n4.s0.genus"));
    CHECK(r.checks.contains("n9.s4.omega_invariance"));
    // Merge order does not depend on the thread count.
    opt.threads = 1;
    CHECK(cmd_verify_sweep(opt, Tolerances()).to_json(false) == r.to_json(false));

    SweepOptions ab;
    ab.kind = FileKind::AB;
    ab.seeds = 1;
    Report rab = cmd_verify_sweep(ab, Tolerances());
    CHECK(rab.pass());
    CHECK(rab.data["polygons"][2]["skipped"] == "unsupported n");  // n = 6
}

TEST_CASE("curve genus") {
    auto genus = [](int n, bool closed) {
        Report r = cmd_curve(cmd_random({n, 0, FileKind::Vertices, closed}));
        CHECK(r.pass());
        return r.data["genus"].get<int>();
    };
    CHECK(genus(5, false) == 4);
    CHECK(genus(7, true) == 3);
    CHECK(genus(6, true) == 1);
    CHECK(genus(8, false) == 6);
    Report r = cmd_curve(cmd_random({7, 0, FileKind::Vertices, true}));
    CHECK(r.data["closed_triple_point"] == true);
    CHECK(r.data["marked_points"].size() == 4);  // O2, W2 are branch points for odd n
    CHECK(cmd_curve(cmd_random({6, 0, FileKind::Vertices, true})).data["marked_points"].size() == 6);
    CHECK(r.data["closed_relations"].size() == 5);
}

TEST_CASE("closed-polygon experiment") {
    for (int n = 5; n <= 9; ++n) {
        Report r = cmd_closed({n, 0, FileKind::Vertices, true}, 5, Tolerances());
        for (const auto& [name, c] : r.checks) CHECK_MESSAGE(c.pass, n << " " << name << " residual " << c.residual);
        CHECK(r.checks.contains("periodicity") == (n == 5));
    }
}

TEST_CASE("executable exit codes") {
    const std::string a = temp_path("a.json"), b = temp_path("b.json");
    CHECK(run_tool("random --n 7 --seed 42 --out " + a) == 0);
    CHECK(run_tool("random --n 7 --seed 42 --out " + b) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());
    CHECK(run_tool("verify " + a) == 0);
    CHECK(run_tool("iterate " + a + " --steps 0") == 0);
    CHECK(run_tool("random --n 4 --closed") == 2);
    CHECK(run_tool("random --n 6 --kind ab") == 2);
    CHECK(run_tool("frobnicate") == 2);
    CHECK(run_tool("verify /nonexistent/polygon.json") == 2);
    CHECK(run_tool("verify " + a + " --tol-override bogus=1") == 2);
    CHECK(run_tool("verify " + a + " --tol-override conservation=0") == 1);
    CHECK(run_tool("--help") == 0);

    json j = json::parse(slurp(a));
    j["data"]["x"][3] = json::array({0.0, 0.0});
    const std::string t = temp_path("tampered.json");
    std::ofstream(t) << j.dump();
    CHECK(run_tool("verify " + t) == 1);

    const std::string svg = temp_path("orbit.svg");
    CHECK(run_tool("iterate --n 5 --closed --kind vertices --steps 5 --format svg --out " + svg) == 0);
    CHECK(slurp(svg).starts_with("<?xml"));
}
