#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "pentagram/cli.hpp"

using namespace pentagram;
using namespace pentagram::cli;

namespace {

struct Source {
    std::string file;
    int n = 7;
    std::uint64_t seed = 0;
    std::string kind = "xy";
    bool closed = false;
};

void add_source(CLI::App* cmd, Source& s) {
    cmd->add_option("file", s.file, "Polygon file (JSON); when absent a polygon is generated");
    cmd->add_option("--n", s.n, "Number of vertices for a generated polygon")->check(CLI::Range(4, 1000));
    cmd->add_option("--seed", s.seed, "Seed for a generated polygon");
    cmd->add_option("--kind", s.kind, "Coordinates of a generated polygon")->check(CLI::IsMember({"ab", "xy", "vertices"}));
    cmd->add_flag("--closed", s.closed, "Generate a closed polygon");
}

GenerateOptions generate_options(const Source& s) { return {s.n, s.seed, parse_kind(s.kind), s.closed}; }

PolygonFile load(const Source& s) { return s.file.empty() ? cmd_random(generate_options(s)) : read_polygon_file(s.file); }

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + out);
    f << text;
}

std::string report_text(const Report& r, bool timing) { return r.to_json(timing).dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pentagram map: generation, iteration, invariants, spectral curves and verification"};
    app.require_subcommand(1);

    Source src;
    std::string out, format = "json";
    std::vector<std::string> tol_overrides;
    int steps = -1, stride = 1;
    bool no_timing = false;
    SweepOptions sweep;
    bool do_sweep = false;
    std::string sweep_kind = "xy";

    auto common = [&](CLI::App* cmd) {
        cmd->add_option("--out", out, "Output path (default stdout)");
        cmd->add_flag("--no-timing", no_timing, "Omit the timing field from reports");
    };
    auto tolerances = [&](CLI::App* cmd) {
        cmd->add_option("--tol-override", tol_overrides, "Override a tolerance, key=value (repeatable)")
            ->allow_extra_args(false);
    };

    auto* random = app.add_subcommand("random", "Write a seeded polygon file");
    random->add_option("--n", src.n, "Number of vertices")->required()->check(CLI::Range(4, 1000));
    random->add_option("--seed", src.seed, "Seed");
    random->add_option("--kind", src.kind, "Coordinates")->check(CLI::IsMember({"ab", "xy", "vertices"}));
    random->add_flag("--closed", src.closed, "Closed polygon in the plane");
    random->add_option("--out", out, "Output path (default stdout)");

    auto* iterate = app.add_subcommand("iterate", "Iterate the map and report invariants along the orbit");
    add_source(iterate, src);
    iterate->add_option("--steps", steps, "Number of steps (default 10)")->check(CLI::NonNegativeNumber);
    iterate->add_option("--format", format, "json report, or svg drawing with the report on stderr")
        ->check(CLI::IsMember({"json", "svg"}));
    iterate->add_option("--stride", stride, "Draw every stride-th step")->check(CLI::PositiveNumber);
    common(iterate);
    tolerances(iterate);

    auto* invariants = app.add_subcommand("invariants", "Spectral invariants and Casimirs");
    add_source(invariants, src);
    common(invariants);

    auto* verify = app.add_subcommand("verify", "Run the property suite on one polygon or a seed sweep");
    add_source(verify, src);
    verify->add_option("--steps", steps, "Orbit length for conservation (default 100)")->check(CLI::NonNegativeNumber);
    verify->add_flag("--sweep", do_sweep, "Sweep generated polygons instead of one input");
    verify->add_option("--n-min", sweep.n_min, "Sweep: smallest n")->check(CLI::Range(4, 1000));
    verify->add_option("--n-max", sweep.n_max, "Sweep: largest n")->check(CLI::Range(4, 1000));
    verify->add_option("--seeds", sweep.seeds, "Sweep: seeds per n")->check(CLI::PositiveNumber);
    verify->add_option("--first-seed", sweep.first_seed, "Sweep: first seed");
    verify->add_option("--threads", sweep.threads, "Sweep: worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    common(verify);
    tolerances(verify);

    auto* curve = app.add_subcommand("curve", "Branch points, genus and marked points of the spectral curve");
    add_source(curve, src);
    common(curve);

    auto* closed = app.add_subcommand("closed", "Closed-polygon experiment");
    closed->add_option("--n", src.n, "Number of vertices")->check(CLI::Range(5, 1000));
    closed->add_option("--seed", src.seed, "Seed");
    closed->add_option("--steps", steps, "Orbit length (default 5)")->check(CLI::NonNegativeNumber);
    common(closed);
    tolerances(closed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        Tolerances tol;
        for (const auto& o : tol_overrides) tol.override_with(o);
        const bool timing = !no_timing;

        if (random->parsed()) {
            emit(dump(cmd_random(generate_options(src))), out);
            return 0;
        }
        if (iterate->parsed()) {
            IterateOptions opt{steps < 0 ? 10 : steps, format == "svg", stride};
            IterateOutput res = cmd_iterate(load(src), opt, tol);
            if (opt.svg) {
                emit(res.svg, out);
                std::cerr << report_text(res.report, timing);
            } else {
                emit(report_text(res.report, timing), out);
            }
            return exit_code(res.report);
        }
        if (invariants->parsed()) {
            Report r = cmd_invariants(load(src));
            emit(report_text(r, timing), out);
            return exit_code(r);
        }
        if (verify->parsed()) {
            Report r;
            if (do_sweep) {
                sweep.kind = parse_kind(src.kind);
                sweep.closed = src.closed;
                sweep.steps = steps < 0 ? 100 : steps;
                r = cmd_verify_sweep(sweep, tol);
            } else {
                r = cmd_verify(load(src), tol, steps < 0 ? 100 : steps);
            }
            emit(report_text(r, timing), out);
            return exit_code(r);
        }
        if (curve->parsed()) {
            Report r = cmd_curve(load(src));
            emit(report_text(r, timing), out);
            return exit_code(r);
        }
        if (closed->parsed()) {
            if (!closed->count("--n")) src.n = 5;
            Report r = cmd_closed(generate_options(src), steps < 0 ? 5 : steps, tol);
            emit(report_text(r, timing), out);
            return exit_code(r);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (is_degeneracy(e.kind())) return 3;
        return e.kind() == ErrorKind::GenerationFailed ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
