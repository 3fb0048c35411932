#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <thread>

#include <Eigen/Eigenvalues>

#include "pentagram/cli.hpp"
#include "pentagram/lax.hpp"
#include "pentagram/random.hpp"
#include "pentagram/symplectic.hpp"

namespace pentagram::cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

// Fixed spectral parameter samples for the zero-curvature checks.
const std::vector<Complex> kZSamples = {{0.7, 0.2}, {-1.3, 0.5}, {0.4, -1.1}, {2.1, 0.9}, {-0.6, -0.8}};

int twisted_genus(int n) { return n % 2 == 0 ? n - 2 : n - 1; }
int closed_genus(int n) { return n % 2 == 0 ? n - 5 : n - 4; }

// Runs one check; library errors become failed entries.
void guarded(Report& r, const std::string& name, const std::function<void()>& body) {
    try {
        body();
    } catch (const Error& e) {
        r.add_failure(name, e.what(), is_degeneracy(e.kind()));
    }
}

// xy files and closed polygons use the xy kind, whose constant C is the scalar
// T(1) when closed; ab coordinates recovered from xy may belong to a twist of
// the polygon. Other files use the ab kind when n mod 3 != 0.
bool uses_xy_kind(const PolygonFile& f, const Views& v) { return f.kind == FileKind::XY || v.closed || !v.ab; }

SpectralInvariants invariants_of(const PolygonFile& f, const Views& v) {
    return uses_xy_kind(f, v) ? spectral_invariants(v.xy) : spectral_invariants(*v.ab);
}

json inputs_of(const PolygonFile& f) {
    json j = {{"n", f.n}, {"kind", to_string(f.kind)}};
    if (f.seed) j["seed"] = *f.seed;
    return j;
}

json casimirs_json(const Casimirs& c) {
    json j = {{"E_n", complex_json(c.E_n)}, {"O_n", complex_json(c.O_n)}};
    if (c.E_half) j["E_half"] = complex_json(*c.E_half);
    if (c.O_half) j["O_half"] = complex_json(*c.O_half);
    return j;
}

// Invariants along a polygon orbit, plus the chains when they can be drawn.
struct Trajectory {
    std::vector<XYCoords> xy;
    std::vector<SpectralInvariants> inv;
    std::vector<VertexChain> chains;
    std::optional<Error> failure;
};

// Puts the unit vertex representatives in isotropic position (sum v v^* close
// to a multiple of the identity). The pentagram map commutes with this, and it
// keeps a long geometric orbit well conditioned.
VertexChain isotropic(const VertexChain& c) {
    VertexChain out = c;
    for (int pass = 0; pass < 4; ++pass) {
        Mat3 S = Mat3::Zero();
        for (const auto& v : out.vertices()) {
            Vec3 u = v.normalized();
            S += u * u.adjoint();
        }
        Eigen::SelfAdjointEigenSolver<Mat3> es(S);
        Mat3 g = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                 es.eigenvectors().adjoint();
        out = out.transformed(g / std::cbrt(std::abs(g.determinant())));
    }
    // A scalar monodromy commutes with g; keep it exact instead of g M g^{-1}.
    const Mat3& M = c.monodromy();
    if (M == M(0, 0) * Mat3::Identity()) out = VertexChain(out.vertices(), M);
    return out;
}

Trajectory trajectory(const PolygonFile& f, const Views& v, int steps, bool want_chains) {
    Trajectory tr;
    // The xy kind holds C fixed along the orbit, see invariants_of.
    const bool use_xy = uses_xy_kind(f, v);
    const Complex C0 = spectral_invariants(v.xy).C;
    auto from_xy = [&](const XYCoords& xy) { return spectral_invariants(xy, C0); };

    if (f.kind == FileKind::Vertices) {
        VertexChain c = want_chains ? *v.chain : isotropic(*v.chain);
        for (int t = 0;; ++t) {
            XYCoords xy = xy_from_chain(c);
            tr.inv.push_back(use_xy ? from_xy(xy) : spectral_invariants(ab_from_chain(c)));
            tr.xy.push_back(std::move(xy));
            tr.chains.push_back(c);
            if (t == steps) break;
            try {
                c = pentagram_step_geometric(c);
                if (!want_chains) c = isotropic(c);
            } catch (const Error& e) {
                tr.failure = Error(ErrorKind::MapUndefinedAtStep, e.what()).at_step(t + 1);
                break;
            }
        }
        return tr;
    }
    if (f.kind == FileKind::AB) {
        auto o = orbit_ab(*v.ab, steps);
        for (const auto& ab : o.states) {
            tr.xy.push_back(ab_to_xy(ab));
            tr.inv.push_back(use_xy ? from_xy(tr.xy.back()) : spectral_invariants(ab));
            if (want_chains) tr.chains.push_back(chain_from_ab(ab));
        }
        tr.failure = o.failure;
        return tr;
    }
    if (want_chains && !v.ab)
        throw Error(ErrorKind::IndivisibilityViolated, "drawing an xy orbit needs n mod 3 != 0");
    auto o = orbit(v.xy, steps);
    for (const auto& xy : o.states) {
        tr.inv.push_back(from_xy(xy));
        if (want_chains) tr.chains.push_back(chain_from_ab(xy_to_ab(xy)));
        tr.xy.push_back(xy);
    }
    tr.failure = o.failure;
    return tr;
}

json periodicity_json(const std::vector<Periodicity>& found) {
    json matches = json::array();
    for (const auto& p : found) matches.push_back({{"step", p.step}, {"shift", p.shift}, {"residual", p.residual}});
    return {{"detected", !found.empty()}, {"matches", matches}};
}

// Largest residual among the three conditions for a triple point of the curve
// at (k, z) = (1, 1).
double triple_point_residual(const SpectralInvariants& inv) {
    return std::max({std::abs(curve_eval(inv, 1.0, 1.0)), std::abs(curve_dk(inv, 1.0, 1.0)),
                     std::abs(curve_dz(inv, 1.0, 1.0))});
}

// Generation keeps polygons whose xy coordinates, map denominators and top
// invariants are of moderate size, so the numerical checks are well posed.
bool well_conditioned(const PolygonFile& f, const Views& v) {
    constexpr double lo = 1e-2, hi = 1e2;
    for (int i = 0; i < v.xy.n(); ++i) {
        double x = std::abs(v.xy.x[i]), y = std::abs(v.xy.y[i]), f = std::abs(1.0 - v.xy.x[i] * v.xy.y[i]);
        if (x < lo || x > hi || y < lo || y > hi || f < lo) return false;
    }
    SpectralInvariants inv = invariants_of(f, v);
    return std::abs(inv.I[inv.q]) >= lo && std::abs(inv.J[inv.q]) >= lo;
}

}  // namespace

json invariants_json(const SpectralInvariants& inv) {
    json I = json::array(), J = json::array();
    for (const auto& c : inv.I) I.push_back(complex_json(c));
    for (const auto& c : inv.J) J.push_back(complex_json(c));
    return {{"n", inv.n}, {"q", inv.q}, {"I", I}, {"J", J}, {"C", complex_json(inv.C)}};
}

PolygonFile cmd_random(const GenerateOptions& opt) {
    if (opt.n < 4) throw Error(ErrorKind::InvalidInput, "n must be at least 4");
    if (opt.closed && opt.n < 5) throw Error(ErrorKind::UnsupportedN, "closed polygons need n >= 5");
    if (opt.kind == FileKind::AB && opt.n % 3 == 0)
        throw Error(ErrorKind::IndivisibilityViolated, "kind ab needs n mod 3 != 0");
    Rng rng(opt.seed, static_cast<std::uint64_t>(opt.n));
    for (int attempt = 0; attempt < 100; ++attempt) {
        try {
            PolygonFile f;
            if (opt.closed) {
                VertexChain c = random_closed_chain(opt.n, rng);
                if (opt.kind == FileKind::Vertices)
                    f = file_from(c);
                else if (opt.kind == FileKind::AB)
                    f = file_from(ab_from_chain(c));
                else
                    f = file_from(xy_from_chain(c));
            } else if (opt.kind == FileKind::AB) {
                f = file_from(random_ab(opt.n, rng));
            } else if (opt.kind == FileKind::XY) {
                f = file_from(random_xy(opt.n, rng));
            } else {
                f = file_from(random_twisted_chain(opt.n, rng));
            }
            f.seed = opt.seed;
            Views v = views_of(f);
            pentagram_xy(v.xy);
            if (v.ab) pentagram_ab(*v.ab);
            if (opt.closed && !v.closed) continue;
            if (!well_conditioned(f, v)) continue;
            return f;
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::UnsupportedN) throw;
        }
    }
    throw Error(ErrorKind::GenerationFailed, "no generic polygon in 100 attempts");
}

IterateOutput cmd_iterate(const PolygonFile& f, const IterateOptions& opt, const Tolerances& tol) {
    auto start = Clock::now();
    if (opt.steps < 0) throw Error(ErrorKind::InvalidInput, "steps must be nonnegative");
    if (opt.stride < 1) throw Error(ErrorKind::InvalidInput, "stride must be positive");
    IterateOutput out;
    Report& r = out.report;
    r.command = "iterate";
    r.inputs = inputs_of(f);
    r.inputs["steps"] = opt.steps;
    Views v = views_of(f);
    Trajectory tr = trajectory(f, v, opt.steps, opt.svg);

    json steps = json::array();
    for (size_t t = 0; t < tr.inv.size(); ++t)
        steps.push_back({{"step", t}, {"invariants", invariants_json(tr.inv[t])}});
    r.data["steps"] = steps;
    if (tr.failure) {
        r.data["failed_step"] = tr.failure->step();
        r.add_failure("orbit", tr.failure->what(), true);
    }
    if (tr.inv.size() > 1) {
        double drift = conservation_drift(tr.inv);
        r.data["drift"] = drift;
        r.add("conservation", drift, tol.get("conservation"));
        r.data["periodicity"] = periodicity_json(find_periodicity(tr.xy, tol.get("periodicity")));
    }
    if (opt.svg) {
        bool dropped = false;
        out.svg = render_svg(tr.chains, opt.stride, &dropped);
        r.data["svg_imaginary_parts_dropped"] = dropped;
    }
    r.seconds = elapsed(start);
    return out;
}

Report cmd_invariants(const PolygonFile& f) {
    auto start = Clock::now();
    Report r;
    r.command = "invariants";
    r.inputs = inputs_of(f);
    Views v = views_of(f);
    SpectralInvariants inv = invariants_of(f, v);
    r.data["invariants"] = invariants_json(inv);
    r.data["casimirs"] = casimirs_json(casimir_map(inv));
    r.data["closed"] = v.closed;
    r.data["closed_relations_residual"] = closed_relations_residual(inv);
    r.seconds = elapsed(start);
    return r;
}

Report cmd_verify(const PolygonFile& f, const Tolerances& tol, int steps) {
    auto start = Clock::now();
    Report r;
    r.command = "verify";
    r.inputs = inputs_of(f);
    r.inputs["steps"] = steps;
    Views v;
    try {
        v = views_of(f);
    } catch (const Error& e) {
        r.add_failure("coordinates_valid", e.what(), false);
        r.seconds = elapsed(start);
        return r;
    }
    r.add("coordinates_valid", 0.0, tol.get("coordinates_valid"));
    r.data["closed"] = v.closed;
    const int n = f.n;

    guarded(r, "zero_curvature.xy",
            [&] { r.add("zero_curvature.xy", zero_curvature_residual(v.xy, kZSamples), tol.get("zero_curvature.xy")); });
    if (v.ab)
        guarded(r, "zero_curvature.ab", [&] {
            r.add("zero_curvature.ab", zero_curvature_residual(*v.ab, kZSamples), tol.get("zero_curvature.ab"));
        });

    guarded(r, "conservation", [&] {
        // Coordinate orbit; the geometric step is covered by route_equivalence.
        const PolygonFile g = f.kind == FileKind::Vertices ? file_from(v.xy) : f;
        Trajectory tr = trajectory(g, v, steps, false);
        if (tr.failure) throw *tr.failure;
        r.add("conservation", conservation_drift(tr.inv), tol.get("conservation"));
    });

    if (v.ab) {
        guarded(r, "route_equivalence", [&] {
            XYCoords direct = pentagram_xy(v.xy);
            double res = coords_distance(direct, ab_to_xy(pentagram_ab(*v.ab)));
            if (v.chain) res = std::max(res, coords_distance(direct, xy_from_chain(pentagram_step_geometric(*v.chain))));
            r.add("route_equivalence", res, tol.get("route_equivalence"));
        });
        guarded(r, "gauge_relation",
                [&] { r.add("gauge_relation", gauge_relation_check(*v.ab), tol.get("gauge_relation")); });
        guarded(r, "monodromy_asymptotics", [&] {
            AsymptoticsReport a = monodromy_asymptotics_check(*v.ab);
            r.add("monodromy_asymptotics", a.max_residual, tol.get("monodromy_asymptotics"),
                  a.degenerate ? "a predicted leading coefficient vanishes" : "");
        });
        guarded(r, "marked_point_limits", [&] {
            r.add("marked_point_limits", marked_point_limits(*v.ab).max_residual, tol.get("marked_point_limits"));
        });
    }

    SpectralInvariants inv = invariants_of(f, v);
    guarded(r, "puiseux_leading_terms", [&] {
        r.add("puiseux_leading_terms", singularity_expansions_check(inv).max_residual,
              tol.get("puiseux_leading_terms"));
    });
    guarded(r, "genus", [&] {
        CurveAnalysis c = branch_points(inv, CurveOptions{.closed = v.closed});
        int expected = v.closed ? closed_genus(n) : twisted_genus(n);
        r.data["genus"] = c.genus;
        r.add("genus", std::abs(c.genus - expected), tol.get("genus"), "expected " + std::to_string(expected));
    });
    if (v.closed)
        guarded(r, "closed_relations",
                [&] { r.add("closed_relations", closed_relations_residual(inv), tol.get("closed_relations")); });

    guarded(r, "involution", [&] { r.add("involution", involution_check(v.xy), tol.get("involution")); });
    guarded(r, "bracket_invariance",
            [&] { r.add("bracket_invariance", bracket_invariance_check(v.xy), tol.get("bracket_invariance")); });
    guarded(r, "casimirs", [&] {
        CasimirCheck c = casimir_check(v.xy);
        int expected_kernel = n % 2 ? 2 : 4;
        r.add("casimirs", c.residual, tol.get("casimirs"));
        r.add("poisson_rank", std::abs(2 * n - c.kernel_dim - 2 * twisted_genus(n)), tol.get("poisson_rank"),
              "kernel dimension " + std::to_string(c.kernel_dim) + ", expected " + std::to_string(expected_kernel));
    });
    guarded(r, "omega_leaf_rank", [&] {
        r.add("omega_leaf_rank", std::abs(omega_leaf_rank(v.xy) - 2 * twisted_genus(n)), tol.get("omega_leaf_rank"));
    });
    guarded(r, "onleaf_inverse",
            [&] { r.add("onleaf_inverse", onleaf_inverse_check(v.xy).leaf_residual, tol.get("onleaf_inverse")); });
    guarded(r, "omega_invariance", [&] {
        OmegaInvariance o = omega_invariance_check(v.xy);
        r.add("omega_invariance", o.leaf_residual, tol.get("omega_invariance"));
        r.data["omega_invariance_unprojected"] = o.unprojected_residual;
    });
    r.seconds = elapsed(start);
    return r;
}

Report cmd_verify_sweep(const SweepOptions& opt, const Tolerances& tol) {
    auto start = Clock::now();
    if (opt.n_min < 4 || opt.n_max < opt.n_min || opt.seeds < 1)
        throw Error(ErrorKind::InvalidInput, "sweep needs 4 <= n_min <= n_max and seeds >= 1");
    struct Task {
        int n;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (int n = opt.n_min; n <= opt.n_max; ++n)
        for (int s = 0; s < opt.seeds; ++s) tasks.push_back({n, opt.first_seed + static_cast<std::uint64_t>(s)});

    // Each task owns one slot; merging in task order keeps the output deterministic.
    std::vector<Report> results(tasks.size());
    std::vector<std::string> skipped(tasks.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < tasks.size(); i = next++) {
            const Task& t = tasks[i];
            if ((opt.kind == FileKind::AB && t.n % 3 == 0) || (opt.closed && t.n < 5)) {
                skipped[i] = "unsupported n";
                continue;
            }
            try {
                results[i] = cmd_verify(cmd_random({t.n, t.seed, opt.kind, opt.closed}), tol, opt.steps);
            } catch (const Error& e) {
                results[i].add_failure("generation", e.what(), is_degeneracy(e.kind()));
            }
        }
    };
    int threads = opt.threads > 0 ? opt.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min<int>(threads, static_cast<int>(tasks.size()));
    std::vector<std::jthread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    pool.clear();

    Report r;
    r.command = "verify";
    r.inputs = {{"sweep", {{"n_min", opt.n_min}, {"n_max", opt.n_max}, {"seeds", opt.seeds},
                           {"first_seed", opt.first_seed}, {"kind", to_string(opt.kind)},
                           {"closed", opt.closed}, {"steps", opt.steps}}}};
    json polygons = json::array();
    for (size_t i = 0; i < tasks.size(); ++i) {
        const std::string prefix = "n" + std::to_string(tasks[i].n) + ".s" + std::to_string(tasks[i].seed) + ".";
        json entry = {{"n", tasks[i].n}, {"seed", tasks[i].seed}};
        if (!skipped[i].empty()) {
            entry["skipped"] = skipped[i];
        } else {
            for (const auto& [name, c] : results[i].checks) r.checks[prefix + name] = c;
            r.degenerate = r.degenerate || results[i].degenerate;
            entry["pass"] = results[i].pass();
        }
        polygons.push_back(entry);
    }
    r.data["polygons"] = polygons;
    r.seconds = elapsed(start);
    return r;
}

Report cmd_curve(const PolygonFile& f) {
    auto start = Clock::now();
    Report r;
    r.command = "curve";
    r.inputs = inputs_of(f);
    Views v = views_of(f);
    SpectralInvariants inv = invariants_of(f, v);
    CurveAnalysis c = branch_points(inv, CurveOptions{.closed = v.closed});
    r.data["invariants"] = invariants_json(inv);
    r.data["casimirs"] = casimirs_json(casimir_map(inv));
    json branch = json::array();
    for (const auto& z : c.branch_z) branch.push_back(complex_json(z));
    r.data["branch_points"] = branch;
    r.data["nu_finite"] = c.nu_finite;
    r.data["nu_total"] = c.nu_total;
    r.data["genus"] = c.genus;
    r.data["closed"] = v.closed;
    r.data["closed_triple_point"] = c.closed_triple_point;
    json marked = json::array();
    for (const auto& m : c.marked_points)
        marked.push_back({{"point", m.point}, {"exponent", m.exponent}, {"coefficient", complex_json(m.coefficient)}});
    r.data["marked_points"] = marked;
    json rel = json::array();
    for (const auto& x : closed_polygon_relations(inv)) rel.push_back(complex_json(x));
    r.data["closed_relations"] = rel;
    const int expected = v.closed ? closed_genus(f.n) : twisted_genus(f.n);
    r.add("genus", std::abs(c.genus - expected), 0.0, "expected " + std::to_string(expected));
    r.seconds = elapsed(start);
    return r;
}

Report cmd_closed(const GenerateOptions& opt, int steps, const Tolerances& tol) {
    auto start = Clock::now();
    if (steps < 0) throw Error(ErrorKind::InvalidInput, "steps must be nonnegative");
    GenerateOptions g = opt;
    g.closed = true;
    g.kind = FileKind::Vertices;
    PolygonFile f = cmd_random(g);
    Report r;
    r.command = "closed";
    r.inputs = inputs_of(f);
    r.inputs["steps"] = steps;
    r.data["polygon"] = to_json(f);
    Views v = views_of(f);
    const Mat3& M = v.chain->monodromy();
    r.add("closed", (M / (M.trace() / 3.0) - Mat3::Identity()).cwiseAbs().maxCoeff(), tol.get("closed_relations"),
          "monodromy deviation from a scalar");

    SpectralInvariants inv = invariants_of(f, v);
    r.data["invariants"] = invariants_json(inv);
    r.add("closed_relations", closed_relations_residual(inv), tol.get("closed_relations"));
    r.add("triple_point", triple_point_residual(inv), tol.get("triple_point"));
    guarded(r, "genus", [&] {
        CurveAnalysis c = branch_points(inv, CurveOptions{.closed = true});
        r.data["genus"] = c.genus;
        r.add("genus", std::abs(c.genus - closed_genus(f.n)), tol.get("genus"),
              "expected " + std::to_string(closed_genus(f.n)));
    });

    Trajectory tr = trajectory(f, v, steps, false);
    if (tr.failure) {
        r.data["failed_step"] = tr.failure->step();
        r.add_failure("orbit", tr.failure->what(), true);
    }
    double closure = 0.0;
    for (const auto& c : tr.chains) {
        const Mat3& Mt = c.monodromy();
        closure = std::max(closure, (Mt / (Mt.trace() / 3.0) - Mat3::Identity()).cwiseAbs().maxCoeff());
    }
    for (const auto& inv_t : tr.inv) {
        // Relative to the size of the terms summed in the relations.
        double terms = 1.0;
        for (int j = 0; j <= inv_t.q; ++j) terms += (1.0 + j * j) * (std::abs(inv_t.I[j]) + std::abs(inv_t.J[j]));
        closure = std::max(closure, closed_relations_residual(inv_t) / terms);
    }
    r.add("closure_preserved", closure, tol.get("closure_preserved"));
    r.add("conservation", conservation_drift(tr.inv), tol.get("conservation"));

    auto found = find_periodicity(tr.xy, tol.get("periodicity"));
    r.data["periodicity"] = periodicity_json(found);
    if (f.n == 5 && static_cast<int>(tr.xy.size()) > 5) {
        // One step gives a relabeled copy; five steps give the same string.
        double one = std::numeric_limits<double>::infinity(), five = one;
        for (const auto& p : find_periodicity(tr.xy, std::numeric_limits<double>::infinity())) {
            if (p.step == 1) one = p.residual;
            if (p.step == 5) five = p.shift == 0 ? p.residual : five;
        }
        r.add("periodicity", std::max(one, five), tol.get("periodicity"), "pentagon orbit");
    }
    r.seconds = elapsed(start);
    return r;
}

std::vector<Periodicity> find_periodicity(const std::vector<XYCoords>& orbit, double tol) {
    std::vector<Periodicity> out;
    if (orbit.empty()) return out;
    const int n = orbit[0].n();
    double scale = 1.0;
    for (int i = 0; i < n; ++i) scale = std::max({scale, std::abs(orbit[0].x[i]), std::abs(orbit[0].y[i])});
    for (size_t t = 1; t < orbit.size(); ++t) {
        Periodicity best{static_cast<int>(t), 0, std::numeric_limits<double>::infinity()};
        for (int s = 0; s < n; ++s) {
            double d = coords_distance(orbit[t], orbit[0], s) / scale;
            if (d < best.residual) best = {static_cast<int>(t), s, d};
        }
        if (best.residual <= tol) out.push_back(best);
    }
    return out;
}

}  // namespace pentagram::cli
