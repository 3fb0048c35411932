#include <cmath>
#include <sstream>

#include "pentagram/cli.hpp"

namespace pentagram::cli {

Tolerances::Tolerances()
    : tol_{{"coordinates_valid", 0.0},      {"zero_curvature.ab", 1e-10},   {"zero_curvature.xy", 1e-10},
           {"conservation", 1e-9},          {"route_equivalence", 1e-10},   {"gauge_relation", 1e-12},
           {"monodromy_asymptotics", 1e-10}, {"marked_point_limits", 1e-6}, {"puiseux_leading_terms", 1e-6},
           {"genus", 0.0},                  {"closed_relations", 1e-8},     {"involution", 1e-8},
           {"bracket_invariance", 1e-8},    {"casimirs", 1e-8},             {"poisson_rank", 0.0},
           {"omega_leaf_rank", 0.0},        {"onleaf_inverse", 1e-7},       {"omega_invariance", 1e-7},
           {"periodicity", 1e-8},           {"closure_preserved", 1e-8},    {"triple_point", 1e-9}} {}

double Tolerances::get(const std::string& key) const {
    auto it = tol_.find(key);
    if (it == tol_.end()) throw Error(ErrorKind::InvalidInput, "no tolerance named " + key);
    return it->second;
}

void Tolerances::override_with(const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidInput, "tolerance override must be key=value");
    std::string key = assignment.substr(0, eq), value = assignment.substr(eq + 1);
    if (!tol_.contains(key)) throw Error(ErrorKind::InvalidInput, "no tolerance named " + key);
    std::istringstream in(value);
    double v = 0.0;
    if (!(in >> v) || !in.eof() || !(v >= 0.0)) throw Error(ErrorKind::InvalidInput, "bad tolerance value " + value);
    tol_[key] = v;
}

void Report::add(const std::string& name, double residual, double tolerance, const std::string& note) {
    checks[name] = Check{residual, tolerance, std::isfinite(residual) && residual <= tolerance, note};
}

void Report::add_failure(const std::string& name, const std::string& note, bool from_degeneracy) {
    checks[name] = Check{std::numeric_limits<double>::infinity(), 0.0, false, note};
    degenerate = degenerate || from_degeneracy;
}

bool Report::pass() const {
    for (const auto& [name, c] : checks)
        if (!c.pass) return false;
    return true;
}

json Report::to_json(bool with_timing) const {
    json j;
    j["command"] = command;
    j["inputs"] = inputs;
    json cs = json::object();
    for (const auto& [name, c] : checks) {
        json e = {{"residual", std::isfinite(c.residual) ? json(c.residual) : json(nullptr)},
                  {"tolerance", c.tolerance},
                  {"pass", c.pass}};
        if (!c.note.empty()) e["note"] = c.note;
        cs[name] = e;
    }
    j["checks"] = cs;
    j["data"] = data;
    j["pass"] = pass();
    if (with_timing) j["timing"] = {{"seconds", seconds}};
    return j;
}

int exit_code(const Report& r) {
    if (r.pass()) return 0;
    return r.degenerate ? 3 : 1;
}

}  // namespace pentagram::cli
