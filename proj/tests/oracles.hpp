#pragma once

// Independent reference computations used only by the tests. None of these
// go through the Laurent-polynomial code or the library's closed forms.

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <vector>

#include "pentagram/coords.hpp"
#include "pentagram/types.hpp"

namespace oracle {

using pentagram::Complex;
using pentagram::Mat3;

// Numeric L_i(z) and Lt_i(z) straight from the matrix definitions.
inline Mat3 L_num(const pentagram::ABCoords& ab, long i, Complex z) {
    Mat3 m;
    m << -ab.B(i), 1.0, 0.0, -ab.A(i) / z, 0.0, 1.0 / z, 1.0, 0.0, 0.0;
    return m;
}

inline Mat3 Lt_num(const pentagram::XYCoords& xy, long i, Complex z) {
    Complex x = xy.X(i + 2), y = xy.Y(i + 2);
    Mat3 m;
    m << 1.0 / x, -1.0 / x, 0.0, 1.0 / z, 0.0, 1.0 / z, -y, 0.0, 0.0;
    return m;
}

inline Mat3 T_num(const pentagram::ABCoords& ab, Complex z) {
    Mat3 t = Mat3::Identity();
    for (long i = 0; i < ab.n(); ++i) t = L_num(ab, i, z) * t;
    return t;
}

inline Mat3 Tt_num(const pentagram::XYCoords& xy, Complex z) {
    Mat3 t = Mat3::Identity();
    for (long i = 0; i < xy.n(); ++i) t = Lt_num(xy, i, z) * t;
    return t;
}

// Laurent coefficient c_e of f(z) = sum c_e z^e from samples on |z| = 1
// (discrete Fourier transform; exact when the support is narrower than N).
template <class F>
Complex fourier_coefficient(F f, int e, int N = 64) {
    Complex acc = 0.0;
    for (int k = 0; k < N; ++k) {
        Complex z = std::polar(1.0, 2.0 * std::numbers::pi * k / N);
        acc += f(z) * std::pow(z, -e);
    }
    return acc / double(N);
}

// (I_j, J_j) of the ab kind through numeric traces and the DFT.
inline void invariants_by_dft(const pentagram::ABCoords& ab, std::vector<Complex>& I, std::vector<Complex>& J) {
    const int q = ab.n() / 2;
    I.assign(q + 1, 0.0);
    J.assign(q + 1, 0.0);
    for (int j = 0; j <= q; ++j) {
        J[j] = fourier_coefficient([&](Complex z) { return T_num(ab, z).trace(); }, j - q);
        I[j] = fourier_coefficient([&](Complex z) { return Mat3(T_num(ab, z).inverse()).trace(); }, q - j);
    }
}

// Polynomial roots as companion-matrix eigenvalues (ascending coefficients).
inline std::vector<Complex> companion_roots(const std::vector<Complex>& c) {
    const int d = static_cast<int>(c.size()) - 1;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) M(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) M(i, d - 1) = -c[i] / c[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M);
    std::vector<Complex> r(d);
    for (int i = 0; i < d; ++i) r[i] = es.eigenvalues()(i);
    return r;
}

// Greedy matching distance between two root sets, relative to modulus.
inline double root_set_distance(std::vector<Complex> a, std::vector<Complex> b) {
    if (a.size() != b.size()) return 1e300;
    double worst = 0.0;
    for (const auto& r : a) {
        size_t best = 0;
        for (size_t j = 1; j < b.size(); ++j)
            if (std::abs(b[j] - r) < std::abs(b[best] - r)) best = j;
        worst = std::max(worst, std::abs(b[best] - r) / std::max(1.0, std::abs(r)));
        b.erase(b.begin() + best);
    }
    return worst;
}

// Intersection of affine segments' supporting lines p1p2 and p3p4 in R^2.
inline Eigen::Vector2d affine_intersection(Eigen::Vector2d p1, Eigen::Vector2d p2, Eigen::Vector2d p3,
                                           Eigen::Vector2d p4) {
    Eigen::Matrix2d A;
    A.col(0) = p2 - p1;
    A.col(1) = p3 - p4;
    Eigen::Vector2d t = A.partialPivLu().solve(p3 - p1);
    return p1 + t(0) * (p2 - p1);
}

}  // namespace oracle
