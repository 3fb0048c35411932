#pragma once

// Forward-mode dual numbers over C with a dense gradient vector.
// An empty gradient stands for the zero gradient, so constants are cheap.

#include <algorithm>
#include <cmath>
#include <vector>

#include "pentagram/types.hpp"

namespace pentagram {

class Dual {
public:
    Dual() = default;
    Dual(Complex v) : v_(v) {}  // NOLINT: implicit lift of constants
    Dual(double v) : v_(v) {}   // NOLINT
    Dual(Complex v, std::vector<Complex> g) : v_(v), g_(std::move(g)) {}

    // The variable with index `idx` out of `dim`, seeded with derivative `seed`.
    static Dual variable(Complex v, int idx, int dim, Complex seed = 1.0) {
        std::vector<Complex> g(dim, Complex(0.0));
        g[idx] = seed;
        return Dual(v, std::move(g));
    }

    Complex value() const { return v_; }
    const std::vector<Complex>& grad() const { return g_; }
    Complex d(int i) const { return i < static_cast<int>(g_.size()) ? g_[i] : Complex(0.0); }
    int dim() const { return static_cast<int>(g_.size()); }

    Dual& operator+=(const Dual& o) {
        v_ += o.v_;
        axpy(Complex(1.0), o.g_);
        return *this;
    }
    Dual& operator-=(const Dual& o) {
        v_ -= o.v_;
        axpy(Complex(-1.0), o.g_);
        return *this;
    }
    Dual& operator*=(const Dual& o) {
        if (&o == this) return *this *= Dual(o);
        // d(uv) = u dv + v du
        for (auto& x : g_) x *= o.v_;
        axpy(v_, o.g_);
        v_ *= o.v_;
        return *this;
    }
    Dual& operator/=(const Dual& o) {
        if (&o == this) return *this /= Dual(o);
        Complex inv = 1.0 / o.v_;
        Complex q = v_ * inv;
        for (auto& x : g_) x *= inv;
        axpy(-q * inv, o.g_);
        v_ = q;
        return *this;
    }

    friend Dual operator+(Dual a, const Dual& b) { return a += b; }
    friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
    friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
    friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
    friend Dual operator-(Dual a) {
        a.v_ = -a.v_;
        for (auto& x : a.g_) x = -x;
        return a;
    }

private:
    void axpy(Complex s, const std::vector<Complex>& o) {
        if (o.empty()) return;
        if (g_.size() < o.size()) g_.resize(o.size(), Complex(0.0));
        for (size_t i = 0; i < o.size(); ++i) g_[i] += s * o[i];
    }

    Complex v_{0.0};
    std::vector<Complex> g_;
};

// Largest modulus among value and derivatives; drives coefficient pruning.
inline double magnitude(const Dual& d) {
    double m = std::abs(d.value());
    for (const auto& g : d.grad()) m = std::max(m, std::abs(g));
    return m;
}

inline double magnitude(const Complex& c) { return std::abs(c); }

inline Complex value_of(const Complex& c) { return c; }
inline Complex value_of(const Dual& d) { return d.value(); }

}  // namespace pentagram
