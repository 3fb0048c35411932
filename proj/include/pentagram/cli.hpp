#pragma once

// Command layer behind the `pentagram` executable: polygon files, reports,
// and one function per subcommand. Everything here is deterministic for a
// fixed input except the timing field of a report.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pentagram/coords.hpp"
#include "pentagram/polygon.hpp"
#include "pentagram/spectral.hpp"

namespace pentagram::cli {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

enum class FileKind { AB, XY, Vertices };

std::string to_string(FileKind kind);
FileKind parse_kind(const std::string& s);  // throws InvalidInput

// ab: a_0..a_{n-1} then b_0..b_{n-1}; xy: x then y; vertices: 3n homogeneous
// coordinates, vertex after vertex.
struct PolygonFile {
    std::string schema_version = kSchemaVersion;
    int n = 0;
    FileKind kind = FileKind::XY;
    std::vector<Complex> data;
    std::optional<Mat3> monodromy;  // vertices only; identity when absent
    std::optional<std::uint64_t> seed;

    bool operator==(const PolygonFile&) const = default;
};

json to_json(const PolygonFile& f);
PolygonFile polygon_from_json(const json& j);  // throws InvalidInput
PolygonFile read_polygon_file(const std::string& path);
std::string dump(const PolygonFile& f);

PolygonFile file_from(const ABCoords& ab);
PolygonFile file_from(const XYCoords& xy);
PolygonFile file_from(const VertexChain& chain);

// Raw views; the coordinate validity of the values is not checked here.
ABCoords ab_data(const PolygonFile& f);
XYCoords xy_data(const PolygonFile& f);
VertexChain chain_data(const PolygonFile& f);

// The polygon in every representation it supports.
struct Views {
    XYCoords xy;
    std::optional<ABCoords> ab;       // n mod 3 != 0
    std::optional<VertexChain> chain;  // vertices files, or rebuilt from ab
    bool closed = false;
};

Views views_of(const PolygonFile& f);

// Tolerances keyed by check name; "key=value" overrides.
class Tolerances {
public:
    Tolerances();
    double get(const std::string& key) const;
    void override_with(const std::string& assignment);  // throws InvalidInput
    const std::map<std::string, double>& all() const { return tol_; }

private:
    std::map<std::string, double> tol_;
};

struct Check {
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

struct Report {
    std::string command;
    json inputs = json::object();
    std::map<std::string, Check> checks;
    json data = json::object();
    bool degenerate = false;  // some failure came from a degeneracy error
    double seconds = 0.0;

    void add(const std::string& name, double residual, double tolerance, const std::string& note = "");
    void add_failure(const std::string& name, const std::string& note, bool from_degeneracy = false);
    bool pass() const;
    json to_json(bool with_timing = true) const;
};

// 0 all checks pass, 1 some check fails, 3 a failure came from a degeneracy.
int exit_code(const Report& r);

struct GenerateOptions {
    int n = 7;
    std::uint64_t seed = 0;
    FileKind kind = FileKind::XY;
    bool closed = false;
};

// Seeded polygon; the generator stream for (n, seed) is Rng(seed, n).
PolygonFile cmd_random(const GenerateOptions& opt);

struct IterateOutput {
    Report report;
    std::string svg;  // filled when requested
};

struct IterateOptions {
    int steps = 10;
    bool svg = false;
    int stride = 1;
};

IterateOutput cmd_iterate(const PolygonFile& f, const IterateOptions& opt, const Tolerances& tol);

Report cmd_invariants(const PolygonFile& f);
Report cmd_verify(const PolygonFile& f, const Tolerances& tol, int steps = 100);

struct SweepOptions {
    int n_min = 4, n_max = 9;
    int seeds = 5;
    std::uint64_t first_seed = 0;
    FileKind kind = FileKind::XY;
    bool closed = false;
    int steps = 100;
    int threads = 0;  // 0: hardware concurrency
};

Report cmd_verify_sweep(const SweepOptions& opt, const Tolerances& tol);
Report cmd_curve(const PolygonFile& f);
Report cmd_closed(const GenerateOptions& opt, int steps, const Tolerances& tol);

// Smallest t in 1..steps where state t is a cyclic relabeling of state 0.
struct Periodicity {
    int step = 0;
    int shift = 0;
    double residual = 0.0;
};

std::vector<Periodicity> find_periodicity(const std::vector<XYCoords>& orbit, double tol);

// 1000x1000 SVG of real affine images (w = 1 chart) of the chains.
std::string render_svg(const std::vector<VertexChain>& orbit, int stride, bool* imaginary_parts_dropped);

json complex_json(Complex c);
json invariants_json(const SpectralInvariants& inv);

}  // namespace pentagram::cli
