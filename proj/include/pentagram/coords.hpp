#pragma once

#include <optional>
#include <vector>

#include "pentagram/error.hpp"
#include "pentagram/types.hpp"

namespace pentagram {

// Relative size below which a denominator is treated as zero.
inline constexpr double kDenominatorTol = 1e-12;

inline bool vanishes(Complex value, double scale) {
    return std::abs(value) < kDenominatorTol * (1.0 + scale);
}

// Corner coordinates a_j, b_j of the difference equation
// V_{j+3} = a_j V_{j+2} + b_j V_{j+1} + V_j. Any n >= 4 is accepted so the
// Lax machinery can treat them as formal variables; operations that need an
// actual polygon reject n divisible by 3.
struct ABCoords {
    std::vector<Complex> a, b;

    ABCoords() = default;
    ABCoords(std::vector<Complex> a_, std::vector<Complex> b_);

    int n() const { return static_cast<int>(a.size()); }
    Complex A(long i) const { return a[wrap(i, n())]; }
    Complex B(long i) const { return b[wrap(i, n())]; }

    // Throws InvalidInput if some a_j, b_j or 1 + a_{i+1} b_i vanishes.
    void require_valid() const;
};

struct XYCoords {
    std::vector<Complex> x, y;

    XYCoords() = default;
    XYCoords(std::vector<Complex> x_, std::vector<Complex> y_);

    int n() const { return static_cast<int>(x.size()); }
    Complex X(long i) const { return x[wrap(i, n())]; }
    Complex Y(long i) const { return y[wrap(i, n())]; }

    // Throws InvalidInput if some x_i, y_i or 1 - x_i y_i vanishes.
    void require_valid() const;
};

// m with n = 3m+1 or 3m+2; throws IndivisibilityViolated when 3 | n.
int product_length(int n);

XYCoords ab_to_xy(const ABCoords& ab);
ABCoords xy_to_ab(const XYCoords& xy);

ABCoords pentagram_ab(const ABCoords& ab);
XYCoords pentagram_xy(const XYCoords& xy);

// The xy map written for any field-like scalar, without degeneracy checks.
template <class S>
void pentagram_xy_raw(const std::vector<S>& x, const std::vector<S>& y, std::vector<S>& tx,
                      std::vector<S>& ty) {
    const int n = static_cast<int>(x.size());
    std::vector<S> f(n);
    for (int k = 0; k < n; ++k) f[k] = S(1.0) - x[k] * y[k];
    tx.assign(n, S(0.0));
    ty.assign(n, S(0.0));
    for (int i = 0; i < n; ++i) {
        tx[i] = x[i] * (f[wrap(i - 1, n)] / f[wrap(i + 1, n)]);
        ty[i] = y[wrap(i + 1, n)] * (f[wrap(i + 2, n)] / f[i]);
    }
}

template <class Coords>
struct OrbitResult {
    std::vector<Coords> states;
    // Set when the map became undefined; states then end at the last good point.
    std::optional<Error> failure;

    bool complete() const { return !failure.has_value(); }
};

OrbitResult<XYCoords> orbit(const XYCoords& xy, int steps);
OrbitResult<ABCoords> orbit_ab(const ABCoords& ab, int steps);

// Max modulus of componentwise difference, optionally after a cyclic shift:
// compares x1[i + shift] with x2[i].
double coords_distance(const XYCoords& p, const XYCoords& q, int shift = 0);
double coords_distance(const ABCoords& p, const ABCoords& q);

}  // namespace pentagram
