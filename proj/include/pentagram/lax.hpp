#pragma once

#include <span>
#include <string>
#include <vector>

#include "pentagram/coords.hpp"
#include "pentagram/laurent.hpp"

namespace pentagram {

enum class LaxKind { AB, XY };

// L_i = [[-b_i, 1, 0], [-a_i/z, 0, 1/z], [1, 0, 0]], det L_i = 1/z.
LaurentMatrix lax_L(const ABCoords& ab, long i);
LaurentMatrix lax_L_inverse(const ABCoords& ab, long i);

// Lax matrix in (x, y) built from x = x_{i+2}, y = y_{i+2}.
template <class S>
LaurentMatrix3<S> lax_Ltilde_entries(const S& x, const S& y) {
    using P = LaurentPoly<S>;
    LaurentMatrix3<S> m;
    S inv_x = S(1.0) / x;
    m(0, 0) = P(inv_x);
    m(0, 1) = P(S(-1.0) * inv_x);
    m(1, 0) = P::monomial(S(1.0), -1);
    m(1, 2) = P::monomial(S(1.0), -1);
    m(2, 0) = P(S(-1.0) * y);
    return m;
}

template <class S>
LaurentMatrix3<S> lax_Ltilde_inverse_entries(const S& x, const S& y) {
    using P = LaurentPoly<S>;
    LaurentMatrix3<S> m;
    S inv_y = S(1.0) / y;
    m(0, 2) = P(S(-1.0) * inv_y);
    m(1, 0) = P(S(-1.0) * x);
    m(1, 2) = P(S(-1.0) * inv_y);
    m(2, 1) = P::monomial(S(1.0), 1);
    m(2, 2) = P(inv_y);
    return m;
}

LaurentMatrix lax_Ltilde(const XYCoords& xy, long i);
LaurentMatrix lax_Ltilde_inverse(const XYCoords& xy, long i);

// lambda_i = prod_{l=1..m} (1 + a_{i+3l+1} b_{i+3l}).
Complex lambda_factor(const ABCoords& ab, long i);

LaurentMatrix pmatrix_P(const ABCoords& ab, long i);
LaurentMatrix pmatrix_Ptilde(const XYCoords& xy, long i);

// max_i,z |L_{i,t+1} P_i - P_{i+1} L_{i,t}| / max operand norm. The next state
// is computed by the pentagram map unless given explicitly.
double zero_curvature_residual(const ABCoords& state, std::span<const Complex> z_samples);
double zero_curvature_residual(const XYCoords& state, std::span<const Complex> z_samples);
double zero_curvature_residual(const ABCoords& state, const ABCoords& next, std::span<const Complex> z_samples);
double zero_curvature_residual(const XYCoords& state, const XYCoords& next, std::span<const Complex> z_samples);

struct Monodromy {
    LaxKind kind = LaxKind::AB;
    int n = 0;
    LaurentMatrix T;      // L_{i+n-1} ... L_i
    LaurentMatrix T_inv;  // L_i^{-1} ... L_{i+n-1}^{-1}
};

Monodromy monodromy_T(const ABCoords& ab, long base = 0);
Monodromy monodromy_T(const XYCoords& xy, long base = 0);

// Ordered xy monodromy product for any scalar type (used for differentiation).
template <class S>
void monodromy_xy_raw(const std::vector<S>& x, const std::vector<S>& y, long base, LaurentMatrix3<S>& T,
                      LaurentMatrix3<S>& T_inv) {
    const int n = static_cast<int>(x.size());
    T = LaurentMatrix3<S>::identity();
    T_inv = LaurentMatrix3<S>::identity();
    for (long k = 0; k < n; ++k) {
        int j = wrap(base + k + 2, n);
        T = lax_Ltilde_entries(x[j], y[j]) * T;
        T_inv = T_inv * lax_Ltilde_inverse_entries(x[j], y[j]);
    }
}

struct AsymptoticEntry {
    std::string label;  // which matrix, entry and exponent
    Complex expected;
    Complex actual;
    double residual;
};

struct AsymptoticsReport {
    std::vector<AsymptoticEntry> entries;
    double max_residual = 0.0;
    bool degenerate = false;  // some predicted leading coefficient is zero
};

// Compares the leading Laurent coefficients of T_0 at z = 0 and T_0^{-1} at
// z = infinity with their closed forms in (a, b).
AsymptoticsReport monodromy_asymptotics_check(const ABCoords& ab);

// max over i of the coefficient mismatch in Lt_i = -(b_{i+1}/a_i) g_{i+1}^{-1} L_i g_i,
// g_i = diag(1, b_i, -a_i), relative to the largest coefficient of Lt_i.
double gauge_relation_check(const ABCoords& ab);

// Entries of L'_j^{-1} = [[0, 0, c], [d, 0, b], [0, e z, a]].
struct PrimedLax {
    Complex a, b, c, d, e;
};

LaurentMatrix primed_inverse_matrix(const PrimedLax& p);

struct GaugeSequence {
    std::vector<Complex> alpha, beta, gamma;  // g_j = diag(alpha_j, beta_j, gamma_j), g_n = g_0

    int n() const { return static_cast<int>(alpha.size()); }
};

struct GaugeReductionAB {
    ABCoords coords;
    GaugeSequence gauge;
};

struct GaugeReductionXY {
    XYCoords coords;
    GaugeSequence gauge;
};

// Finds diagonal g_j with g_j L'_j^{-1} g_{j+1}^{-1} = L_j^{-1} (resp. the xy
// form); mu is the free scale of g_0 and does not affect the coordinates.
GaugeReductionAB gauge_reduce_ab(const std::vector<PrimedLax>& primed, Complex mu = 1.0);
GaugeReductionXY gauge_reduce_xy(const std::vector<PrimedLax>& primed, Complex mu = 1.0);

}  // namespace pentagram
