#include <algorithm>
#include <cmath>
#include <limits>

#include "pentagram/roots.hpp"
#include "pentagram/spectral.hpp"

namespace pentagram {

namespace {

using Poly = std::vector<Complex>;  // ascending powers of z

Poly pmul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Complex(0.0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Poly padd(Poly a, const Poly& b, Complex s = 1.0) {
    if (a.size() < b.size()) a.resize(b.size(), Complex(0.0));
    for (size_t i = 0; i < b.size(); ++i) a[i] += s * b[i];
    return a;
}

Poly monomial(Complex c, int e) {
    Poly p(e + 1, Complex(0.0));
    p[e] = c;
    return p;
}

}  // namespace

int discriminant_zero_order(int n) { return n; }

std::vector<Complex> discriminant_polynomial(const SpectralInvariants& s) {
    const int n = s.n, q = s.q;
    // z^n R = A k^3 + B k^2 + Cc k + D
    Poly A = monomial(1.0, n);
    Poly B(n + 1, Complex(0.0));
    for (int j = 0; j <= q; ++j) B[n + j - q] = -s.J[j];
    Poly Cc(q + 1, Complex(0.0));
    for (int j = 0; j <= q; ++j) Cc[q - j] = s.I[j];
    const Complex D = -1.0;

    Poly B2 = pmul(B, B), C2 = pmul(Cc, Cc);
    Poly disc = pmul(pmul(A, B), Cc);
    for (auto& c : disc) c *= 18.0 * D;
    disc = padd(disc, pmul(B2, B), -4.0 * D);
    disc = padd(disc, pmul(B2, C2));
    disc = padd(disc, pmul(A, pmul(C2, Cc)), -4.0);
    disc = padd(disc, pmul(A, A), -27.0 * D * D);

    const int order = discriminant_zero_order(n);
    double scale = 0.0;
    for (const auto& c : disc) scale = std::max(scale, std::abs(c));
    for (int e = 0; e < order && e < static_cast<int>(disc.size()); ++e)
        if (std::abs(disc[e]) > 1e-8 * scale)
            throw Error(ErrorKind::Degenerate, "discriminant does not vanish to order n at z = 0");
    disc.erase(disc.begin(), disc.begin() + std::min<size_t>(order, disc.size()));
    while (!disc.empty() && disc.back() == Complex(0.0)) disc.pop_back();
    return disc;
}

std::vector<PuiseuxTerm> marked_point_terms(const SpectralInvariants& s) {
    const Complex Iq = s.I[s.q], Jq = s.J[s.q], I0 = s.I[0], J0 = s.J[0];
    std::vector<PuiseuxTerm> t;
    t.push_back({"O1", 0.0, 1.0 / Iq});
    t.push_back({"W1", 0.0, Jq});
    if (s.n % 2 == 0) {
        Complex r0 = std::sqrt(J0 * J0 / 4.0 - Iq);
        Complex ri = std::sqrt(I0 * I0 - 4.0 * Jq);
        t.push_back({"O2", double(-s.q), J0 / 2.0 + r0});
        t.push_back({"O3", double(-s.q), J0 / 2.0 - r0});
        t.push_back({"W2", double(-s.q), (I0 + ri) / (2.0 * Jq)});
        t.push_back({"W3", double(-s.q), (I0 - ri) / (2.0 * Jq)});
    } else {
        t.push_back({"O2", -s.n / 2.0, std::sqrt(-Iq)});
        t.push_back({"W2", -s.n / 2.0, 1.0 / std::sqrt(-Jq)});
    }
    return t;
}

CurveAnalysis branch_points(const SpectralInvariants& s, const CurveOptions& opt) {
    CurveAnalysis out;
    std::vector<Complex> poly = discriminant_polynomial(s);
    if (poly.size() < 2 || std::abs(poly.front()) == 0.0)
        throw Error(ErrorKind::NonGeneric, "discriminant has extra roots at z = 0");

    bool closed = opt.closed ? *opt.closed : closed_relations_residual(s) < 1e-6;
    if (closed) {
        poly = deflate(std::move(poly), 1.0, 6);
        out.closed_triple_point = true;
    }

    RootResult rr = aberth_roots(poly);
    if (!rr.converged) throw Error(ErrorKind::NonGeneric, "branch point iteration did not converge");
    auto clusters = cluster_roots(rr.roots, opt.cluster_tol);
    for (const auto& c : clusters)
        if (c.multiplicity > 1)
            throw Error(ErrorKind::NonGeneric, "multiple branch point near z = " + std::to_string(c.center.real()) +
                                                   (c.center.imag() < 0 ? "" : "+") +
                                                   std::to_string(c.center.imag()) + "i");
    out.branch_z = rr.roots;
    std::sort(out.branch_z.begin(), out.branch_z.end(), [](Complex a, Complex b) {
        return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : std::arg(a) < std::arg(b);
    });
    out.nu_finite = static_cast<int>(rr.roots.size());
    // O_2 and W_2 are branch points of the 3-sheeted cover for odd n.
    out.nu_total = out.nu_finite + (s.n % 2 == 1 ? 2 : 0);
    out.genus = out.nu_total / 2 - 2;
    out.marked_points = marked_point_terms(s);
    return out;
}

Complex extrapolate_to_zero(std::span<const Complex> h, std::span<const Complex> f) {
    std::vector<Complex> p(f.begin(), f.end());
    const size_t m = p.size();
    for (size_t level = 1; level < m; ++level)
        for (size_t i = 0; i + level < m; ++i)
            p[i] = (-h[i + level] * p[i] + h[i] * p[i + 1]) / (h[i] - h[i + level]);
    return p[0];
}

namespace {

constexpr double kTheta = 0.37;  // direction of approach in the z-plane

std::vector<Complex> cubic_roots(Complex c3, Complex c2, Complex c1, Complex c0) {
    std::vector<Complex> c = {c0, c1, c2, c3};
    return aberth_roots(c).roots;
}

std::vector<Complex> sorted_by_modulus(std::vector<Complex> v) {
    std::sort(v.begin(), v.end(), [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
    return v;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

// Two largest roots at each sample, continued by nearest match.
std::vector<std::array<Complex, 2>> track_pair(const std::vector<std::vector<Complex>>& roots) {
    std::vector<std::array<Complex, 2>> out;
    for (const auto& r : roots) {
        auto s = sorted_by_modulus(r);
        std::array<Complex, 2> pair = {s[1], s[2]};
        if (!out.empty()) {
            const auto& prev = out.back();
            double keep = std::abs(pair[0] - prev[0]) + std::abs(pair[1] - prev[1]);
            double swap = std::abs(pair[1] - prev[0]) + std::abs(pair[0] - prev[1]);
            if (swap < keep) std::swap(pair[0], pair[1]);
        }
        out.push_back(pair);
    }
    return out;
}

double rel(Complex est, Complex expected) {
    return std::abs(est - expected) / std::max(std::abs(expected), 1e-300);
}

// Adds both assignments of two estimates to two expected values, keeping the better.
void add_pair(SingularityReport& rep, const std::string& a, const std::string& b, Complex e0, Complex e1,
              Complex x0, Complex x1) {
    double keep = std::max(rel(x0, e0), rel(x1, e1));
    double swap = std::max(rel(x1, e0), rel(x0, e1));
    if (swap < keep) std::swap(x0, x1);
    rep.checks.push_back({a, e0, x0, rel(x0, e0)});
    rep.checks.push_back({b, e1, x1, rel(x1, e1)});
}

}  // namespace

std::array<double, 2> branch_radii(const SpectralInvariants& inv) {
    RootResult r = aberth_roots(discriminant_polynomial(inv));
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& z : r.roots) {
        double m = std::abs(z);
        if (m == 0.0 || !std::isfinite(m)) continue;
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    return {lo, hi};
}

std::array<double, 3> radii_toward_zero(double nearest_branch, double base) {
    double r = std::min(base, 1e-2 * nearest_branch);
    return {r, 0.1 * r, 0.01 * r};
}

std::array<double, 3> radii_toward_infinity(double farthest_branch, double base) {
    double r = std::max(base, 1e2 * farthest_branch);
    return {r, 10.0 * r, 100.0 * r};
}

SingularityReport singularity_expansions_check(const SpectralInvariants& s) {
    const int n = s.n, q = s.q;
    const Complex Iq = s.I[q], Jq = s.J[q], I0 = s.I[0], J0 = s.J[0];
    if (Iq == Complex(0.0) || Jq == Complex(0.0))
        throw Error(ErrorKind::Degenerate, "expansions need I_q, J_q != 0");
    if (n % 2 == 0 && (std::abs(J0 * J0 / 4.0 - Iq) < 1e-12 * std::abs(Iq) ||
                       std::abs(I0 * I0 - 4.0 * Jq) < 1e-12 * std::abs(Jq)))
        throw Error(ErrorKind::Degenerate, "leading terms at O_2/O_3 or W_2/W_3 coincide");

    const auto [nearest, farthest] = branch_radii(s);
    const std::array<double, 3> small = radii_toward_zero(nearest, 1e-4);
    const std::array<double, 3> large = radii_toward_infinity(farthest, 1e4);
    const Complex dir = std::polar(1.0, kTheta);
    const Complex half_dir = std::polar(1.0, kTheta / 2.0);

    SingularityReport rep;

    // Growth exponents from the unscaled cubic.
    auto growth = [&](const std::array<double, 3>& radii) {
        std::vector<double> lx;
        std::array<std::vector<double>, 3> ly;
        for (double r : radii) {
            Complex z = r * dir;
            Complex zn = std::pow(z, -n);
            Complex Jz = 0.0, Iz = 0.0;
            for (int j = 0; j <= q; ++j) {
                Jz += s.J[j] * std::pow(z, j - q);
                Iz += s.I[j] * std::pow(z, q - j);
            }
            auto k = sorted_by_modulus(cubic_roots(1.0, -Jz, Iz * zn, -zn));
            lx.push_back(std::log(r));
            for (int i = 0; i < 3; ++i) ly[i].push_back(std::log(std::abs(k[i])));
        }
        std::array<double, 3> e{};
        for (int i = 0; i < 3; ++i) e[i] = slope(lx, ly[i]);
        std::sort(e.begin(), e.end());
        return e;
    };
    rep.growth_at_zero = growth(small);
    rep.growth_at_infinity = growth(large);

    std::vector<Complex> hz, hs, k_o1, k_w1;
    std::vector<std::vector<Complex>> scaled0, scaled_inf;
    std::vector<Complex> hinf, hsinf;
    for (double r : small) {
        Complex z = r * dir;
        Complex sq = std::sqrt(r) * half_dir;
        hz.push_back(z);
        hs.push_back(sq);
        // O_1: u = 1/k solves u^3 - I(z) u^2 + z^n J(z) u - z^n = 0.
        Complex Iz = 0.0, znJ = 0.0;
        for (int j = 0; j <= q; ++j) {
            Iz += s.I[j] * std::pow(z, q - j);
            znJ += s.J[j] * std::pow(z, n + j - q);
        }
        auto u = sorted_by_modulus(cubic_roots(1.0, -Iz, znJ, -std::pow(z, n)));
        k_o1.push_back(1.0 / u[2]);
        if (n % 2 == 0) {
            // kappa = k z^q: kappa^3 - (sum J_j z^j) kappa^2 + I(z) kappa - z^q = 0.
            Complex c2 = 0.0;
            for (int j = 0; j <= q; ++j) c2 += s.J[j] * std::pow(z, j);
            scaled0.push_back(cubic_roots(1.0, -c2, Iz, -std::pow(z, q)));
        } else {
            // kappa = k s^n with s^2 = z: kappa^3 - (sum J_j s^{2j+1}) kappa^2 + I(z) kappa - s^n = 0.
            Complex c2 = 0.0;
            for (int j = 0; j <= q; ++j) c2 += s.J[j] * std::pow(sq, 2 * j + 1);
            scaled0.push_back(cubic_roots(1.0, -c2, Iz, -std::pow(sq, n)));
        }
    }
    for (double r : large) {
        Complex z = r * dir;
        Complex t = 1.0 / (std::sqrt(r) * half_dir);  // 1/sqrt(z)
        hinf.push_back(1.0 / z);
        hsinf.push_back(t);
        Complex Jz = 0.0, Iz = 0.0;
        for (int j = 0; j <= q; ++j) {
            Jz += s.J[j] * std::pow(z, j - q);
            Iz += s.I[j] * std::pow(z, q - j);
        }
        Complex zn = std::pow(z, -n);
        auto k = sorted_by_modulus(cubic_roots(1.0, -Jz, Iz * zn, -zn));
        k_w1.push_back(k[2]);
        if (n % 2 == 0) {
            // mu = z^{-q}/k: mu^3 - (sum I_j z^{-j}) mu^2 + J(z) mu - z^{-q} = 0.
            Complex c2 = 0.0;
            for (int j = 0; j <= q; ++j) c2 += s.I[j] * std::pow(z, -j);
            scaled_inf.push_back(cubic_roots(1.0, -c2, Jz, -std::pow(z, -q)));
        } else {
            // mu = 1/(k s^n), t = 1/s: mu^3 - (sum I_j t^{2j+1}) mu^2 + J(z) mu - t^n = 0.
            Complex c2 = 0.0;
            for (int j = 0; j <= q; ++j) c2 += s.I[j] * std::pow(t, 2 * j + 1);
            scaled_inf.push_back(cubic_roots(1.0, -c2, Jz, -std::pow(t, n)));
        }
    }

    Complex o1 = extrapolate_to_zero(hz, k_o1);
    rep.checks.push_back({"O1 leading", 1.0 / Iq, o1, rel(o1, 1.0 / Iq)});
    Complex w1 = extrapolate_to_zero(hinf, k_w1);
    rep.checks.push_back({"W1 leading", Jq, w1, rel(w1, Jq)});

    auto p0 = track_pair(scaled0);
    auto pinf = track_pair(scaled_inf);
    std::vector<Complex> a0, b0, ai, bi;
    for (const auto& p : p0) {
        a0.push_back(p[0]);
        b0.push_back(p[1]);
    }
    for (const auto& p : pinf) {
        ai.push_back(1.0 / p[0]);
        bi.push_back(1.0 / p[1]);
    }

    if (n % 2 == 0) {
        Complex r0 = std::sqrt(J0 * J0 / 4.0 - Iq);
        add_pair(rep, "O2 leading", "O3 leading", J0 / 2.0 + r0, J0 / 2.0 - r0, extrapolate_to_zero(hz, a0),
                 extrapolate_to_zero(hz, b0));
        Complex ri = std::sqrt(I0 * I0 - 4.0 * Jq);
        add_pair(rep, "W2 leading", "W3 leading", (I0 + ri) / (2.0 * Jq), (I0 - ri) / (2.0 * Jq),
                 extrapolate_to_zero(hinf, ai), extrapolate_to_zero(hinf, bi));
    } else {
        // The two branches satisfy kappa_-(s) = -kappa_+(-s), so their half
        // difference and their half sum divided by s are series in z = s^2.
        // The branch limits are +-(half difference at 0).
        std::vector<Complex> even0, sub0, eveni, subi;
        for (size_t i = 0; i < a0.size(); ++i) {
            even0.push_back((a0[i] - b0[i]) / 2.0);
            sub0.push_back((a0[i] + b0[i]) / (2.0 * hs[i]));
        }
        for (size_t i = 0; i < ai.size(); ++i) {
            eveni.push_back((ai[i] - bi[i]) / 2.0);
            subi.push_back((ai[i] + bi[i]) / (2.0 * hsinf[i]));
        }
        Complex lead0 = extrapolate_to_zero(hz, even0), leadi = extrapolate_to_zero(hinf, eveni);
        Complex r0 = std::sqrt(-Iq);
        add_pair(rep, "O2+ leading", "O2- leading", r0, -r0, lead0, -lead0);
        Complex e0 = extrapolate_to_zero(hz, sub0);
        rep.checks.push_back({"O2 subleading", J0 / 2.0, e0, rel(e0, J0 / 2.0)});
        Complex rw = 1.0 / std::sqrt(-Jq);
        add_pair(rep, "W2+ leading", "W2- leading", rw, -rw, leadi, -leadi);
        Complex ei = extrapolate_to_zero(hinf, subi);
        rep.checks.push_back({"W2 subleading", I0 / (2.0 * Jq), ei, rel(ei, I0 / (2.0 * Jq))});
    }
    for (const auto& c : rep.checks) rep.max_residual = std::max(rep.max_residual, c.residual);
    return rep;
}

}  // namespace pentagram
