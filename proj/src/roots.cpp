#include "pentagram/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pentagram/error.hpp"

namespace pentagram {

Complex horner(std::span<const Complex> c, Complex z) {
    Complex acc = 0.0;
    for (size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
    return acc;
}

namespace {

// p(z) and p'(z) together.
void eval_pd(std::span<const Complex> c, Complex z, Complex& p, Complex& dp) {
    p = 0.0;
    dp = 0.0;
    for (size_t k = c.size(); k-- > 0;) {
        dp = dp * z + p;
        p = p * z + c[k];
    }
}

// Roundoff bound of Horner's rule at z: sum |c_k| |z|^k times a small multiple of eps.
double horner_noise(std::span<const Complex> c, Complex z) {
    const double r = std::abs(z);
    double acc = 0.0;
    for (size_t k = c.size(); k-- > 0;) acc = acc * r + std::abs(c[k]);
    return 4.0 * static_cast<double>(c.size()) * std::numeric_limits<double>::epsilon() * acc;
}

void newton_polish(std::span<const Complex> c, Complex& z, int steps) {
    for (int s = 0; s < steps; ++s) {
        Complex p, dp;
        eval_pd(c, z, p, dp);
        if (dp == Complex(0.0)) return;
        Complex step = p / dp;
        Complex cand = z - step;
        Complex pc, dpc;
        eval_pd(c, cand, pc, dpc);
        if (std::abs(pc) >= std::abs(p)) return;
        z = cand;
    }
}

}  // namespace

RootResult aberth_roots(std::span<const Complex> coeffs, const RootOptions& opt) {
    std::vector<Complex> c(coeffs.begin(), coeffs.end());
    while (!c.empty() && c.back() == Complex(0.0)) c.pop_back();
    if (c.empty()) throw Error(ErrorKind::InvalidInput, "zero polynomial");
    const int deg = static_cast<int>(c.size()) - 1;
    RootResult res;
    if (deg == 0) {
        res.converged = true;
        return res;
    }
    const Complex lead = c.back();
    for (auto& v : c) v /= lead;

    // Start on a circle whose radius is the geometric mean of root moduli,
    // with an irrational angular offset to avoid symmetric stalls.
    double radius = std::pow(std::max(std::abs(c[0]), 1e-300), 1.0 / deg);
    if (c[0] == Complex(0.0)) radius = 1.0;
    std::vector<Complex> z(deg);
    for (int k = 0; k < deg; ++k)
        z[k] = std::polar(radius, 2.0 * std::numbers::pi * k / deg + 0.4);

    std::vector<bool> done(deg, false);
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        bool all = true;
        for (int k = 0; k < deg; ++k) {
            if (done[k]) continue;
            Complex p, dp;
            eval_pd(c, z[k], p, dp);
            if (std::abs(p) <= horner_noise(c, z[k])) {
                done[k] = true;
                continue;
            }
            Complex ratio = p / dp;
            Complex sum = 0.0;
            for (int j = 0; j < deg; ++j)
                if (j != k) sum += 1.0 / (z[k] - z[j]);
            Complex w = ratio / (1.0 - ratio * sum);
            z[k] -= w;
            if (std::abs(w) <= opt.tolerance * std::max(std::abs(z[k]), 1e-300))
                done[k] = true;
            else
                all = false;
        }
        if (all) break;
    }
    res.iterations = it;
    res.converged = std::all_of(done.begin(), done.end(), [](bool b) { return b; });
    for (auto& r : z) newton_polish(c, r, 3);
    res.roots = std::move(z);
    return res;
}

std::vector<RootCluster> cluster_roots(std::span<const Complex> roots, double rel_tol) {
    const int m = static_cast<int>(roots.size());
    std::vector<int> parent(m);
    for (int i = 0; i < m; ++i) parent[i] = i;
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            double scale = std::max({std::abs(roots[i]), std::abs(roots[j]), 1e-300});
            if (std::abs(roots[i] - roots[j]) < rel_tol * scale) parent[find(i)] = find(j);
        }
    std::vector<RootCluster> out;
    std::vector<int> slot(m, -1);
    for (int i = 0; i < m; ++i) {
        int r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<int>(out.size());
            out.push_back({0.0, 0});
        }
        auto& cl = out[slot[r]];
        cl.center += roots[i];
        cl.multiplicity += 1;
    }
    for (auto& cl : out) cl.center /= static_cast<double>(cl.multiplicity);
    return out;
}

std::vector<Complex> deflate(std::vector<Complex> c, Complex r, int k) {
    for (int pass = 0; pass < k; ++pass) {
        const int deg = static_cast<int>(c.size()) - 1;
        if (deg < 1) throw Error(ErrorKind::InvalidInput, "cannot deflate a constant");
        std::vector<Complex> q(deg);
        Complex carry = c[deg];
        for (int i = deg - 1; i >= 0; --i) {
            q[i] = carry;
            carry = c[i] + carry * r;
        }
        c = std::move(q);
    }
    return c;
}

}  // namespace pentagram
