#include <fstream>
#include <sstream>

#include "pentagram/cli.hpp"
#include "pentagram/lax.hpp"

namespace pentagram::cli {

namespace {

Complex parse_complex(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(ErrorKind::InvalidInput, "complex numbers are [re, im] pairs");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

json complex_array(std::span<const Complex> v) {
    json a = json::array();
    for (const auto& c : v) a.push_back(complex_json(c));
    return a;
}

std::vector<Complex> parse_array(const json& j, size_t expected, const std::string& what) {
    if (!j.is_array() || j.size() != expected)
        throw Error(ErrorKind::InvalidInput, what + " must hold " + std::to_string(expected) + " complex values");
    std::vector<Complex> out;
    for (const auto& e : j) out.push_back(parse_complex(e));
    return out;
}

const json& field(const json& j, const char* key) {
    if (!j.contains(key)) throw Error(ErrorKind::InvalidInput, std::string("missing field '") + key + "'");
    return j.at(key);
}

bool scalar_matrix(const Mat3& m, double tol) {
    Complex s = m.trace() / 3.0;
    return (m - s * Mat3::Identity()).cwiseAbs().maxCoeff() <= tol * std::abs(s);
}

}  // namespace

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

std::string to_string(FileKind kind) {
    switch (kind) {
        case FileKind::AB: return "ab";
        case FileKind::XY: return "xy";
        case FileKind::Vertices: return "vertices";
    }
    return "?";
}

FileKind parse_kind(const std::string& s) {
    if (s == "ab") return FileKind::AB;
    if (s == "xy") return FileKind::XY;
    if (s == "vertices") return FileKind::Vertices;
    throw Error(ErrorKind::InvalidInput, "kind must be ab, xy or vertices, got '" + s + "'");
}

json to_json(const PolygonFile& f) {
    json j;
    j["schema_version"] = f.schema_version;
    j["n"] = f.n;
    j["kind"] = to_string(f.kind);
    const auto half = static_cast<std::ptrdiff_t>(f.n);
    std::span<const Complex> d(f.data);
    switch (f.kind) {
        case FileKind::AB:
            j["data"] = {{"a", complex_array(d.first(half))}, {"b", complex_array(d.subspan(half))}};
            break;
        case FileKind::XY:
            j["data"] = {{"x", complex_array(d.first(half))}, {"y", complex_array(d.subspan(half))}};
            break;
        case FileKind::Vertices: {
            json v = json::array();
            for (int i = 0; i < f.n; ++i) v.push_back(complex_array(d.subspan(3 * i, 3)));
            j["data"] = {{"vertices", v}};
            break;
        }
    }
    if (f.monodromy) {
        json m = json::array();
        for (int r = 0; r < 3; ++r) {
            json row = json::array();
            for (int c = 0; c < 3; ++c) row.push_back(complex_json((*f.monodromy)(r, c)));
            m.push_back(row);
        }
        j["monodromy"] = m;
    }
    if (f.seed) j["seed"] = *f.seed;
    return j;
}

PolygonFile polygon_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::InvalidInput, "polygon file must be a JSON object");
    PolygonFile f;
    const json& version = field(j, "schema_version");
    if (!version.is_string() || version.get<std::string>() != kSchemaVersion)
        throw Error(ErrorKind::InvalidInput, std::string("unsupported schema_version, expected ") + kSchemaVersion);
    const json& n = field(j, "n");
    if (!n.is_number_integer() || n.get<int>() < 4) throw Error(ErrorKind::InvalidInput, "n must be an integer >= 4");
    f.n = n.get<int>();
    const json& kind = field(j, "kind");
    if (!kind.is_string()) throw Error(ErrorKind::InvalidInput, "kind must be a string");
    f.kind = parse_kind(kind.get<std::string>());
    if (f.kind == FileKind::AB && f.n % 3 == 0)
        throw Error(ErrorKind::IndivisibilityViolated, "kind ab needs n mod 3 != 0");

    const json& data = field(j, "data");
    const size_t n_ = static_cast<size_t>(f.n);
    if (f.kind == FileKind::Vertices) {
        const json& v = field(data, "vertices");
        if (!v.is_array() || v.size() != n_)
            throw Error(ErrorKind::InvalidInput, "vertices must hold n homogeneous points");
        for (const auto& p : v) {
            auto c = parse_array(p, 3, "each vertex");
            f.data.insert(f.data.end(), c.begin(), c.end());
        }
    } else {
        const char* k0 = f.kind == FileKind::AB ? "a" : "x";
        const char* k1 = f.kind == FileKind::AB ? "b" : "y";
        auto first = parse_array(field(data, k0), n_, k0);
        auto second = parse_array(field(data, k1), n_, k1);
        f.data = first;
        f.data.insert(f.data.end(), second.begin(), second.end());
    }

    if (j.contains("monodromy")) {
        if (f.kind != FileKind::Vertices)
            throw Error(ErrorKind::InvalidInput, "monodromy is only allowed for kind vertices");
        const json& m = j.at("monodromy");
        if (!m.is_array() || m.size() != 3) throw Error(ErrorKind::InvalidInput, "monodromy must be 3x3");
        Mat3 M;
        for (int r = 0; r < 3; ++r) {
            auto row = parse_array(m[r], 3, "monodromy row");
            for (int c = 0; c < 3; ++c) M(r, c) = row[c];
        }
        f.monodromy = M;
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) throw Error(ErrorKind::InvalidInput, "seed must be a nonnegative integer");
        f.seed = j.at("seed").get<std::uint64_t>();
    }
    return f;
}

PolygonFile read_polygon_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorKind::InvalidInput, path + " is not valid JSON");
    return polygon_from_json(j);
}

std::string dump(const PolygonFile& f) { return to_json(f).dump(2) + "\n"; }

PolygonFile file_from(const ABCoords& ab) {
    PolygonFile f;
    f.n = ab.n();
    f.kind = FileKind::AB;
    f.data = ab.a;
    f.data.insert(f.data.end(), ab.b.begin(), ab.b.end());
    return f;
}

PolygonFile file_from(const XYCoords& xy) {
    PolygonFile f;
    f.n = xy.n();
    f.kind = FileKind::XY;
    f.data = xy.x;
    f.data.insert(f.data.end(), xy.y.begin(), xy.y.end());
    return f;
}

PolygonFile file_from(const VertexChain& chain) {
    PolygonFile f;
    f.n = chain.n();
    f.kind = FileKind::Vertices;
    for (const auto& v : chain.vertices())
        for (int k = 0; k < 3; ++k) f.data.push_back(v(k));
    if (!chain.monodromy().isIdentity(0.0)) f.monodromy = chain.monodromy();
    return f;
}

ABCoords ab_data(const PolygonFile& f) {
    return ABCoords(std::vector<Complex>(f.data.begin(), f.data.begin() + f.n),
                    std::vector<Complex>(f.data.begin() + f.n, f.data.end()));
}

XYCoords xy_data(const PolygonFile& f) {
    return XYCoords(std::vector<Complex>(f.data.begin(), f.data.begin() + f.n),
                    std::vector<Complex>(f.data.begin() + f.n, f.data.end()));
}

VertexChain chain_data(const PolygonFile& f) {
    std::vector<Vec3> v(f.n);
    for (int i = 0; i < f.n; ++i) v[i] = Vec3(f.data[3 * i], f.data[3 * i + 1], f.data[3 * i + 2]);
    return VertexChain(std::move(v), f.monodromy.value_or(Mat3::Identity()));
}

Views views_of(const PolygonFile& f) {
    Views v;
    switch (f.kind) {
        case FileKind::AB: {
            ABCoords ab = ab_data(f);
            ab.require_valid();
            v.xy = ab_to_xy(ab);
            v.chain = chain_from_ab(ab);
            v.ab = std::move(ab);
            break;
        }
        case FileKind::XY: {
            v.xy = xy_data(f);
            v.xy.require_valid();
            if (f.n % 3 != 0) {
                v.ab = xy_to_ab(v.xy);
                v.ab->require_valid();
                v.chain = chain_from_ab(*v.ab);
            }
            break;
        }
        case FileKind::Vertices: {
            v.chain = chain_data(f);
            v.xy = xy_from_chain(*v.chain);
            v.xy.require_valid();
            if (f.n % 3 != 0) v.ab = ab_from_chain(*v.chain);
            break;
        }
    }
    if (v.chain)
        v.closed = is_closed(*v.chain);
    else
        v.closed = scalar_matrix(monodromy_T(v.xy).T.evaluate(1.0), 1e-8);
    v.xy.require_valid();
    return v;
}

}  // namespace pentagram::cli
