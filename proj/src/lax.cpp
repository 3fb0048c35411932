#include "pentagram/lax.hpp"

#include <algorithm>

namespace pentagram {

namespace {

using P = LaurentPolyC;

P zpow(Complex c, int e) { return P::monomial(c, e); }

double max_norm(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

LaurentMatrix lax_L(const ABCoords& ab, long i) {
    LaurentMatrix m;
    m(0, 0) = P(-ab.B(i));
    m(0, 1) = P(1.0);
    m(1, 0) = zpow(-ab.A(i), -1);
    m(1, 2) = zpow(1.0, -1);
    m(2, 0) = P(1.0);
    return m;
}

LaurentMatrix lax_L_inverse(const ABCoords& ab, long i) {
    LaurentMatrix m;
    m(0, 2) = P(1.0);
    m(1, 0) = P(1.0);
    m(1, 2) = P(ab.B(i));
    m(2, 1) = zpow(1.0, 1);
    m(2, 2) = P(ab.A(i));
    return m;
}

LaurentMatrix lax_Ltilde(const XYCoords& xy, long i) { return lax_Ltilde_entries(xy.X(i + 2), xy.Y(i + 2)); }

LaurentMatrix lax_Ltilde_inverse(const XYCoords& xy, long i) {
    return lax_Ltilde_inverse_entries(xy.X(i + 2), xy.Y(i + 2));
}

namespace {

// 1 + a_{k+1} b_k, checked against vanishing.
Complex lambda_piece(const ABCoords& ab, long k) {
    Complex p = ab.A(k + 1) * ab.B(k);
    if (vanishes(1.0 + p, std::abs(p)))
        throw Error(ErrorKind::DegenerateLambda, "1 + a_{k+1} b_k vanishes at k=" + std::to_string(wrap(k, ab.n())));
    return 1.0 + p;
}

void require_supported(int n) {
    if (n % 3 == 0) throw Error(ErrorKind::UnsupportedN, "P is defined only for n = 3m+1, 3m+2");
}

}  // namespace

Complex lambda_factor(const ABCoords& ab, long i) {
    require_supported(ab.n());
    const int m = product_length(ab.n());
    Complex r = 1.0;
    for (long l = 1; l <= m; ++l) r *= lambda_piece(ab, i + 3 * l);
    return r;
}

LaurentMatrix pmatrix_P(const ABCoords& ab, long i) {
    require_supported(ab.n());
    auto lam = [&](long k) { return lambda_factor(ab, k); };
    LaurentMatrix m;
    if (ab.n() % 3 == 1) {
        m(0, 0) = P(-ab.A(i) * lam(i - 1));
        m(0, 2) = P(lam(i - 1));
        m(1, 0) = P(lam(i - 3));
        m(1, 1) = P(-ab.A(i + 1) * lam(i));
        m(1, 2) = P(ab.B(i - 1) * lam(i - 3));
        m(2, 1) = zpow(lam(i - 2), 1);
    } else {
        auto f = [&](long k) { return lambda_piece(ab, k); };
        Complex li = lam(i), lim1 = lam(i - 1), lim2 = lam(i - 2), lip1 = lam(i + 1);
        m(0, 0) = P(-ab.A(i) * li * lim1 * f(i));
        m(0, 2) = P(li * lim1 * f(i));
        m(1, 0) = P(li * lim2 * f(i));
        m(1, 1) = P(-ab.A(i + 1) * li * lip1 * f(i + 1));
        m(1, 2) = P(ab.B(i - 1) * li * lim2 * f(i));
        m(2, 1) = zpow(lip1 * lim1 * f(i + 1), 1);
    }
    return m;
}

LaurentMatrix pmatrix_Ptilde(const XYCoords& xy, long i) {
    auto f = [&](long k) { return 1.0 - xy.X(k) * xy.Y(k); };
    LaurentMatrix m;
    m(0, 0) = P(f(i + 2));
    m(0, 2) = P(f(i + 2));
    m(1, 0) = P(xy.X(i + 1) * xy.Y(i + 1) * f(i + 2));
    m(1, 1) = P(f(i + 1));
    m(1, 2) = P(f(i + 2));
    m(2, 1) = zpow(-xy.Y(i + 2) * f(i + 3), 1);
    return m;
}

namespace {

template <class Coords, class LFn, class PFn>
double zc_residual(const Coords& s, const Coords& s1, std::span<const Complex> zs, LFn lax, PFn pm) {
    const int n = s.n();
    double worst = 0.0;
    for (long i = 0; i < n; ++i) {
        LaurentMatrix l_next = lax(s1, i), l_now = lax(s, i);
        LaurentMatrix p_i = pm(s, i), p_next = pm(s, i + 1);
        for (Complex z : zs) {
            if (z == Complex(0.0)) throw Error(ErrorKind::ZeroZ, "z sample must be nonzero");
            Mat3 lhs = l_next.evaluate(z) * p_i.evaluate(z);
            Mat3 rhs = p_next.evaluate(z) * l_now.evaluate(z);
            double scale = std::max({max_norm(lhs), max_norm(rhs), 1e-300});
            worst = std::max(worst, max_norm(lhs - rhs) / scale);
        }
    }
    return worst;
}

}  // namespace

double zero_curvature_residual(const ABCoords& state, const ABCoords& next, std::span<const Complex> zs) {
    return zc_residual(state, next, zs, lax_L, pmatrix_P);
}

double zero_curvature_residual(const XYCoords& state, const XYCoords& next, std::span<const Complex> zs) {
    return zc_residual(state, next, zs, lax_Ltilde, pmatrix_Ptilde);
}

double zero_curvature_residual(const ABCoords& state, std::span<const Complex> zs) {
    return zero_curvature_residual(state, pentagram_ab(state), zs);
}

double zero_curvature_residual(const XYCoords& state, std::span<const Complex> zs) {
    return zero_curvature_residual(state, pentagram_xy(state), zs);
}

Monodromy monodromy_T(const ABCoords& ab, long base) {
    Monodromy m;
    m.kind = LaxKind::AB;
    m.n = ab.n();
    m.T = LaurentMatrix::identity();
    m.T_inv = LaurentMatrix::identity();
    for (long k = 0; k < m.n; ++k) {
        m.T = lax_L(ab, base + k) * m.T;
        m.T_inv = m.T_inv * lax_L_inverse(ab, base + k);
    }
    return m;
}

Monodromy monodromy_T(const XYCoords& xy, long base) {
    Monodromy m;
    m.kind = LaxKind::XY;
    m.n = xy.n();
    monodromy_xy_raw(xy.x, xy.y, base, m.T, m.T_inv);
    return m;
}

AsymptoticsReport monodromy_asymptotics_check(const ABCoords& ab) {
    const int n = ab.n();
    const int q = n / 2;
    Monodromy mono = monodromy_T(ab, 0);
    const double scale_T = std::max(mono.T.max_abs_coefficient(), 1e-300);
    const double scale_Ti = std::max(mono.T_inv.max_abs_coefficient(), 1e-300);

    AsymptoticsReport rep;
    auto prod = [](long lo, long hi, auto term) {
        Complex r = 1.0;
        for (long i = lo; i <= hi; ++i) r *= term(i);
        return r;
    };
    auto a = [&](long i) { return ab.A(i); };
    auto b = [&](long i) { return ab.B(i); };
    auto neg_a = [&](long i) { return -ab.A(i); };

    auto expect = [&](bool inverse, int r, int c, int e, Complex value) {
        const LaurentMatrix& m = inverse ? mono.T_inv : mono.T;
        Complex got = m(r, c).coeff(e);
        double denom = value == Complex(0.0) ? (inverse ? scale_Ti : scale_T) : std::abs(value);
        AsymptoticEntry entry{std::string(inverse ? "Tinv" : "T") + "(" + std::to_string(r) + "," +
                                  std::to_string(c) + ")@z^" + std::to_string(e),
                              value, got, std::abs(got - value) / denom};
        rep.entries.push_back(entry);
    };

    if (n % 2 == 0) {
        const int e = -q;
        expect(false, 0, 0, e, std::pow(-1.0, q) * prod(0, q - 1, [&](long i) { return a(2 * i); }));
        expect(false, 0, 1, e, 0.0);
        expect(false, 0, 2, e, std::pow(-1.0, q - 1) * prod(1, q - 1, [&](long i) { return a(2 * i); }));
        expect(false, 1, 1, e, std::pow(-1.0, q) * prod(0, q - 1, [&](long i) { return a(2 * i + 1); }));
        for (int c = 0; c < 3; ++c) expect(false, 2, c, e, 0.0);
        const int f = q;
        expect(true, 0, 0, f, 0.0);
        expect(true, 0, 1, f, prod(1, q - 1, [&](long i) { return b(2 * i); }));
        expect(true, 0, 2, f, 0.0);
        expect(true, 1, 0, f, 0.0);
        expect(true, 1, 1, f, prod(0, q - 1, [&](long i) { return b(2 * i); }));
        expect(true, 1, 2, f, 0.0);
        expect(true, 2, 0, f, prod(1, q - 1, [&](long i) { return b(2 * i - 1); }));
        expect(true, 2, 2, f, prod(1, q, [&](long i) { return b(2 * i - 1); }));
    } else {
        // T: most singular order z^{-(q+1)} only in the (1,0), (1,2) entries.
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                Complex v = 0.0;
                if (r == 1 && c == 0) v = prod(0, q, [&](long i) { return neg_a(2 * i); });
                if (r == 1 && c == 2) v = prod(1, q, [&](long i) { return neg_a(2 * i); });
                expect(false, r, c, -(q + 1), v);
            }
        expect(false, 0, 1, -q, prod(1, q, [&](long i) { return neg_a(2 * i - 1); }));
        expect(false, 2, 1, -q, 0.0);
        // T^{-1}: top order z^{q+1} only in (2,1).
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                Complex v = 0.0;
                if (r == 2 && c == 1) v = prod(1, q, [&](long i) { return b(2 * i - 1); });
                expect(true, r, c, q + 1, v);
            }
        expect(true, 0, 2, q, prod(1, q, [&](long i) { return b(2 * i); }));
        expect(true, 1, 0, q, prod(0, q - 1, [&](long i) { return b(2 * i); }));
        expect(true, 1, 2, q, prod(0, q, [&](long i) { return b(2 * i); }));
    }

    for (const auto& e : rep.entries) rep.max_residual = std::max(rep.max_residual, e.residual);
    // Closed forms that are products of the data vanish when some a_j or b_j does.
    for (int j = 0; j < n; ++j)
        if (ab.a[j] == Complex(0.0) || ab.b[j] == Complex(0.0)) rep.degenerate = true;
    return rep;
}

double gauge_relation_check(const ABCoords& ab) {
    product_length(ab.n());
    XYCoords xy = ab_to_xy(ab);
    double worst = 0.0;
    for (long i = 0; i < ab.n(); ++i) {
        LaurentMatrix lt = lax_Ltilde(xy, i);
        LaurentMatrix l = lax_L(ab, i);
        // (g_{i+1}^{-1} L_i g_i)_{rc} = L_{rc} g_i[c] / g_{i+1}[r]
        Complex gi[3] = {1.0, ab.B(i), -ab.A(i)};
        Complex gn[3] = {1.0, ab.B(i + 1), -ab.A(i + 1)};
        Complex s = -ab.B(i + 1) / ab.A(i);
        LaurentMatrix rhs;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) rhs(r, c) = l(r, c) * (s * gi[c] / gn[r]);
        worst = std::max(worst, max_coefficient_distance(lt, rhs) / lt.max_abs_coefficient());
    }
    return worst;
}

LaurentMatrix primed_inverse_matrix(const PrimedLax& p) {
    LaurentMatrix m;
    m(0, 2) = P(p.c);
    m(1, 0) = P(p.d);
    m(1, 2) = P(p.b);
    m(2, 1) = zpow(p.e, 1);
    m(2, 2) = P(p.a);
    return m;
}

namespace {

void require_nonzero(const std::vector<PrimedLax>& primed) {
    if (primed.size() < 4) throw Error(ErrorKind::InvalidInput, "gauge_reduce needs n >= 4");
    for (const auto& p : primed)
        for (Complex v : {p.a, p.b, p.c, p.d, p.e})
            if (v == Complex(0.0)) throw Error(ErrorKind::InvalidInput, "primed entries must be nonzero");
}

void check_constraint(Complex lhs, Complex rhs, const char* what) {
    if (std::abs(lhs - rhs) > 1e-10 * std::max(1.0, std::abs(rhs)))
        throw Error(ErrorKind::ConstraintViolated, what);
}

}  // namespace

GaugeReductionAB gauge_reduce_ab(const std::vector<PrimedLax>& primed, Complex mu) {
    require_nonzero(primed);
    const int n = static_cast<int>(primed.size());
    if (n % 3 == 0) throw Error(ErrorKind::UnsupportedN, "ab target needs n mod 3 != 0");
    Complex prod = 1.0;
    for (const auto& p : primed) prod *= p.c * p.d * p.e;
    check_constraint(prod, 1.0, "prod c'd'e' must equal 1 for the ab target");

    // One step: (al, be, ga)_{j+1} = (d' be_j, e' ga_j, c' al_j). F is the n-step
    // map; F^3 = prod(c'd'e') Id = Id, so (I + F + F^2) e_alpha is a fixed point.
    auto step = [&](const Vec3& g, int j) {
        return Vec3(primed[j].d * g(1), primed[j].e * g(2), primed[j].c * g(0));
    };
    auto run = [&](Vec3 g) {
        for (int j = 0; j < n; ++j) g = step(g, j);
        return g;
    };
    Vec3 e0(1.0, 0.0, 0.0);
    Vec3 f1 = run(e0);
    Vec3 g0 = e0 + f1 + run(f1);
    g0 *= mu / g0(0);

    GaugeReductionAB out;
    out.gauge.alpha.resize(n + 1);
    out.gauge.beta.resize(n + 1);
    out.gauge.gamma.resize(n + 1);
    Vec3 g = g0;
    for (int j = 0; j <= n; ++j) {
        out.gauge.alpha[j] = g(0);
        out.gauge.beta[j] = g(1);
        out.gauge.gamma[j] = g(2);
        if (j < n) g = step(g, j);
    }
    std::vector<Complex> a(n), b(n);
    for (int j = 0; j < n; ++j) {
        a[j] = primed[j].a * out.gauge.gamma[j] / out.gauge.gamma[j + 1];
        b[j] = primed[j].b * out.gauge.beta[j] / out.gauge.gamma[j + 1];
    }
    out.gauge.alpha.pop_back();
    out.gauge.beta.pop_back();
    out.gauge.gamma.pop_back();
    out.coords = ABCoords(std::move(a), std::move(b));
    return out;
}

GaugeReductionXY gauge_reduce_xy(const std::vector<PrimedLax>& primed, Complex mu) {
    require_nonzero(primed);
    const int n = static_cast<int>(primed.size());
    Complex lhs = 1.0, rhs = n % 2 == 0 ? 1.0 : -1.0;
    for (const auto& p : primed) {
        lhs *= p.a;
        rhs *= p.b * p.e;
    }
    check_constraint(lhs, rhs, "prod a' must equal (-1)^n prod b'e' for the xy target");

    // c' al_j = b' be_j = -a' ga_j and be_{j+1} = e' ga_j.
    GaugeSequence g;
    g.alpha.resize(n + 1);
    g.beta.resize(n + 1);
    g.gamma.resize(n + 1);
    g.alpha[0] = mu;
    for (int j = 0; j <= n; ++j) {
        const PrimedLax& p = primed[wrap(j, n)];
        g.beta[j] = p.c * g.alpha[j] / p.b;
        g.gamma[j] = -p.c * g.alpha[j] / p.a;
        if (j < n) {
            const PrimedLax& pn = primed[wrap(j + 1, n)];
            g.alpha[j + 1] = pn.b * p.e * g.gamma[j] / pn.c;
        }
    }
    std::vector<Complex> x(n), y(n);
    for (int j = 0; j < n; ++j) {
        x[wrap(j + 2, n)] = -primed[j].d * g.beta[j] / g.alpha[j + 1];
        y[wrap(j + 2, n)] = -g.gamma[j + 1] / (primed[j].c * g.alpha[j]);
    }
    g.alpha.pop_back();
    g.beta.pop_back();
    g.gamma.pop_back();
    return GaugeReductionXY{XYCoords(std::move(x), std::move(y)), std::move(g)};
}

}  // namespace pentagram
