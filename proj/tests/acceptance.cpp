// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <cstdio>
#include <functional>

#include "pentagram/cli.hpp"
#include "pentagram/lax.hpp"
#include "pentagram/random.hpp"
#include "pentagram/symplectic.hpp"

using namespace pentagram;

namespace {

int failures = 0;

struct Outcome {
    double worst = 0.0;  // largest residual seen
    bool ok = true;
    std::string detail;

    void residual(double r, double tol) {
        worst = std::max(worst, r);
        ok = ok && std::isfinite(r) && (r < tol || r == 0.0);
    }
    void require(bool cond, const std::string& what) {
        if (!cond && detail.empty()) detail = what;
        ok = ok && cond;
    }
};

void criterion(int id, const char* title, double tol, const std::function<void(Outcome&)>& body) {
    Outcome o;
    try {
        body(o);
    } catch (const std::exception& e) {
        o.ok = false;
        o.detail = e.what();
    }
    if (!o.ok) ++failures;
    std::printf("criterion %2d %s: %s (worst %.3g, tolerance %g)%s%s\n", id, o.ok ? "PASS" : "FAIL", title, o.worst,
                tol, o.detail.empty() ? "" : "; ", o.detail.c_str());
}

cli::Views generated(int n, std::uint64_t seed, cli::FileKind kind, bool closed) {
    return cli::views_of(cli::cmd_random({n, seed, kind, closed}));
}

std::string fmt(const char* label, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s %.3g", label, v);
    return buf;
}

Complex product(const std::vector<Complex>& v) {
    Complex p = 1.0;
    for (const auto& c : v) p *= c;
    return p;
}

int twisted_genus(int n) { return n % 2 == 0 ? n - 2 : n - 1; }
int closed_genus(int n) { return n % 2 == 0 ? n - 5 : n - 4; }

}  // namespace

int main() {
    criterion(1, "zero curvature at 5 random z", 1e-10, [](Outcome& o) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(seed, 9000);
            std::vector<Complex> z;
            for (int k = 0; k < 5; ++k) z.push_back(2.0 * rng.near_unit());
            for (int n : {4, 5, 7, 8}) o.residual(zero_curvature_residual(*generated(n, seed, cli::FileKind::AB, false).ab, z), 1e-10);
            for (int n = 4; n <= 9; ++n) o.residual(zero_curvature_residual(generated(n, seed, cli::FileKind::XY, false).xy, z), 1e-10);
        }
    });

    criterion(2, "invariants conserved over 100 steps, n = 7, 8", 1e-9, [](Outcome& o) {
        for (int n : {7, 8})
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                cli::Views v = generated(n, seed, cli::FileKind::XY, false);
                auto xo = orbit(v.xy, 100);
                o.require(xo.complete(), "xy orbit stopped early");
                o.residual(conservation_drift(std::span<const XYCoords>(xo.states)), 1e-9);
                auto ao = orbit_ab(*v.ab, 100);
                o.require(ao.complete(), "ab orbit stopped early");
                o.residual(conservation_drift(std::span<const ABCoords>(ao.states)), 1e-9);
            }
    });

    criterion(3, "closed-form invariants from trace extraction", 1e-12, [](Outcome& o) {
        ABCoords c(std::vector<Complex>(4, 2.0), std::vector<Complex>(4, 3.0));
        SpectralInvariants k = spectral_invariants(c);
        for (auto [got, want] : {std::pair{k.I[2], 16.0}, {k.J[2], 81.0}, {k.I[0], 18.0}, {k.J[0], 8.0}})
            o.residual(std::abs(got - want) / want, 1e-12);
        for (int n = 4; n <= 9; ++n)
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                Rng rng(seed, 9100 + n);
                ABCoords ab = random_ab(n, rng);
                SpectralInvariants inv = spectral_invariants(ab);
                const int q = n / 2;
                Complex Iq = product(ab.a), Jq = (n % 2 ? -1.0 : 1.0) * product(ab.b);
                o.residual(std::abs(inv.I[q] - Iq) / std::abs(Iq), 1e-12);
                o.residual(std::abs(inv.J[q] - Jq) / std::abs(Jq), 1e-12);
                if (n % 2 == 0) {
                    Complex be = 1.0, bo = 1.0, ae = 1.0, ao = 1.0;
                    for (int i = 0; i < n; i += 2) {
                        be *= ab.b[i];
                        bo *= ab.b[i + 1];
                        ae *= ab.a[i];
                        ao *= ab.a[i + 1];
                    }
                    Complex sign = q % 2 ? -1.0 : 1.0;
                    o.residual(std::abs(inv.I[0] - (be + bo)) / (1.0 + std::abs(be + bo)), 1e-12);
                    o.residual(std::abs(inv.J[0] - sign * (ae + ao)) / (1.0 + std::abs(ae + ao)), 1e-12);
                }
            }
    });

    criterion(4, "genus from the branch-point census", 0.0, [](Outcome& o) {
        for (int n = 5; n <= 9; ++n)
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                SpectralInvariants tw = spectral_invariants(generated(n, seed, cli::FileKind::XY, false).xy);
                int g = branch_points(tw, {.closed = false}).genus;
                o.residual(std::abs(g - twisted_genus(n)), 0.0);
                SpectralInvariants cl = spectral_invariants(generated(n, seed, cli::FileKind::Vertices, true).xy);
                int gc = branch_points(cl, {.closed = true}).genus;
                o.residual(std::abs(gc - closed_genus(n)), 0.0);
            }
    });

    criterion(5, "closed-polygon relations", 1e-8, [](Outcome& o) {
        double smallest_control = INFINITY;
        for (int n = 5; n <= 9; ++n)
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                o.residual(closed_relations_residual(spectral_invariants(generated(n, seed, cli::FileKind::Vertices, true).xy)), 1e-8);
                smallest_control = std::min(smallest_control, closed_relations_residual(spectral_invariants(
                                                                  generated(n, seed, cli::FileKind::Vertices, false).xy)));
            }
        o.require(smallest_control > 1e-2, "a twisted control satisfies the relations");
        o.detail = o.detail.empty() ? fmt("smallest twisted control", smallest_control) : o.detail;
    });

    criterion(6, "Puiseux leading terms at the marked points", 1e-6, [](Outcome& o) {
        for (int n = 4; n <= 9; ++n)
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                SpectralInvariants inv = spectral_invariants(generated(n, seed, cli::FileKind::XY, false).xy);
                o.residual(singularity_expansions_check(inv).max_residual, 1e-6);
            }
    });

    criterion(7, "Floquet-Bloch limits and monodromy asymptotics", 1e-6, [](Outcome& o) {
        double asym = 0.0;
        for (int n : {4, 5, 7, 8})
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                ABCoords ab = *generated(n, seed, cli::FileKind::AB, false).ab;
                o.residual(marked_point_limits(ab).max_residual, 1e-6);
                AsymptoticsReport a = monodromy_asymptotics_check(ab);
                asym = std::max(asym, a.max_residual);
                o.require(a.max_residual < 1e-10, "monodromy asymptotics above 1e-10");
            }
        o.detail = o.detail.empty() ? fmt("asymptotics worst", asym) : o.detail;
    });

    criterion(8, "Poisson and 2-form suite", 1e-7, [](Outcome& o) {
        for (int n = 4; n <= 9; ++n)
            for (std::uint64_t seed = 0; seed < 3; ++seed) {
                XYCoords xy = generated(n, seed, cli::FileKind::XY, false).xy;
                o.residual(involution_check(xy), 1e-8);
                o.residual(bracket_invariance_check(xy), 1e-8);
                o.residual(onleaf_inverse_check(xy).leaf_residual, 1e-7);
                o.residual(omega_invariance_check(xy).leaf_residual, 1e-7);
                const int two_g = 2 * twisted_genus(n);
                o.require(numeric_rank(poisson_tensor(n).P) == two_g, "rank P != 2g");
                o.require(omega_leaf_rank(xy) == two_g, "rank of the 2-form on the leaf != 2g");
            }
    });

    criterion(9, "closed pentagon orbit is periodic", 1e-8, [](Outcome& o) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            auto states = orbit(generated(5, seed, cli::FileKind::XY, true).xy, 5).states;
            o.require(states.size() == 6, "orbit stopped early");
            double one = INFINITY;
            for (int s = 0; s < 5; ++s) one = std::min(one, coords_distance(states[1], states[0], s));
            o.residual(one, 1e-8);
            o.residual(coords_distance(states[5], states[0]), 1e-8);
        }
    });

    criterion(10, "geometric step matches the coordinate formulas", 1e-9, [](Outcome& o) {
        for (int n : {4, 5, 7, 8})
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                VertexChain c = *generated(n, seed, cli::FileKind::Vertices, false).chain;
                VertexChain img = pentagram_step_geometric(c);
                o.residual(coords_distance(xy_from_chain(img), pentagram_xy(xy_from_chain(c))), 1e-9);
                o.residual(coords_distance(ab_from_chain(img), pentagram_ab(ab_from_chain(c))), 1e-9);
            }
    });

    return failures == 0 ? 0 : 1;
}
