#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <vector>

namespace pentagram {

using Complex = std::complex<double>;
using Vec3 = Eigen::Matrix<Complex, 3, 1>;
using Covec3 = Eigen::Matrix<Complex, 1, 3>;
using Mat3 = Eigen::Matrix<Complex, 3, 3>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Periodic index reduction; works for negative i.
inline int wrap(long i, int n) {
    long r = i % n;
    return static_cast<int>(r < 0 ? r + n : r);
}

// Cube root with argument in (-pi/3, pi/3].
inline Complex principal_cbrt(Complex w) {
    if (w == Complex(0.0)) return w;
    double r = std::cbrt(std::abs(w));
    double arg = std::arg(w) / 3.0;  // std::arg is in (-pi, pi]
    return std::polar(r, arg);
}

inline const Complex& omega3() {
    static const Complex w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    return w;
}

}  // namespace pentagram
