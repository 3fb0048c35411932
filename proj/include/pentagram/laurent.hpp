#pragma once

// Laurent polynomials in the spectral parameter z and 3x3 matrices of them.
// Scalar type S is Complex for ordinary use and Dual when differentiating.

#include <array>
#include <cmath>
#include <map>

#include "pentagram/dual.hpp"
#include "pentagram/types.hpp"

namespace pentagram {

// Coefficients below this fraction of the largest one are dropped after arithmetic.
inline constexpr double kPruneRelative = 1e-13;

template <class S>
class LaurentPoly {
public:
    using Terms = std::map<int, S>;

    LaurentPoly() = default;
    LaurentPoly(const S& c) {  // NOLINT: constants convert implicitly
        if (magnitude(c) != 0.0) terms_.emplace(0, c);
    }

    static LaurentPoly monomial(const S& c, int exponent) {
        LaurentPoly p;
        if (magnitude(c) != 0.0) p.terms_.emplace(exponent, c);
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int min_exponent() const { return terms_.empty() ? 0 : terms_.begin()->first; }
    int max_exponent() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

    S coeff(int e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? S(0.0) : it->second;
    }

    double max_abs_coefficient() const {
        double m = 0.0;
        for (const auto& [e, c] : terms_) m = std::max(m, magnitude(c));
        return m;
    }

    S evaluate(Complex z) const {
        S acc(0.0);
        for (const auto& [e, c] : terms_) acc += c * S(std::pow(z, e));
        return acc;
    }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (const auto& [e, c] : o.terms_) terms_[e] += c;
        prune();
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) {
        for (const auto& [e, c] : o.terms_) terms_[e] -= c;
        prune();
        return *this;
    }
    LaurentPoly& operator*=(const S& s) {
        for (auto& [e, c] : terms_) c *= s;
        prune();
        return *this;
    }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator-(LaurentPoly a) { return a *= S(-1.0); }
    friend LaurentPoly operator*(LaurentPoly a, const S& s) { return a *= s; }
    friend LaurentPoly operator*(const S& s, LaurentPoly a) { return a *= s; }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) r.terms_[ea + eb] += ca * cb;
        r.prune();
        return r;
    }

    // Multiply by z^k.
    LaurentPoly shifted(int k) const {
        LaurentPoly r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e + k, c);
        return r;
    }

    void prune() {
        double m = max_abs_coefficient();
        double cut = kPruneRelative * m;
        for (auto it = terms_.begin(); it != terms_.end();) {
            double a = magnitude(it->second);
            if (a == 0.0 || a < cut)
                it = terms_.erase(it);
            else
                ++it;
        }
    }

private:
    Terms terms_;
};

template <class S>
class LaurentMatrix3 {
public:
    using Poly = LaurentPoly<S>;

    LaurentMatrix3() = default;

    static LaurentMatrix3 identity() {
        LaurentMatrix3 m;
        for (int i = 0; i < 3; ++i) m(i, i) = Poly(S(1.0));
        return m;
    }

    Poly& operator()(int r, int c) { return e_[3 * r + c]; }
    const Poly& operator()(int r, int c) const { return e_[3 * r + c]; }

    friend LaurentMatrix3 operator*(const LaurentMatrix3& a, const LaurentMatrix3& b) {
        LaurentMatrix3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                Poly acc;
                for (int k = 0; k < 3; ++k) {
                    if (a(i, k).is_zero() || b(k, j).is_zero()) continue;
                    acc += a(i, k) * b(k, j);
                }
                r(i, j) = std::move(acc);
            }
        return r;
    }
    friend LaurentMatrix3 operator+(LaurentMatrix3 a, const LaurentMatrix3& b) {
        for (int i = 0; i < 9; ++i) a.e_[i] += b.e_[i];
        return a;
    }
    friend LaurentMatrix3 operator-(LaurentMatrix3 a, const LaurentMatrix3& b) {
        for (int i = 0; i < 9; ++i) a.e_[i] -= b.e_[i];
        return a;
    }
    friend LaurentMatrix3 operator*(const S& s, LaurentMatrix3 a) {
        for (auto& p : a.e_) p *= s;
        return a;
    }

    Poly trace() const { return (*this)(0, 0) + (*this)(1, 1) + (*this)(2, 2); }

    Poly det() const {
        const auto& m = *this;
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
               m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    }

    // Values only (derivative parts of Dual coefficients are discarded).
    Mat3 evaluate(Complex z) const {
        Mat3 out;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) out(i, j) = value_of((*this)(i, j).evaluate(z));
        return out;
    }

    double max_abs_coefficient() const {
        double m = 0.0;
        for (const auto& p : e_) m = std::max(m, p.max_abs_coefficient());
        return m;
    }

    int min_exponent() const {
        int m = 0;
        bool any = false;
        for (const auto& p : e_)
            if (!p.is_zero()) {
                m = any ? std::min(m, p.min_exponent()) : p.min_exponent();
                any = true;
            }
        return m;
    }
    int max_exponent() const {
        int m = 0;
        bool any = false;
        for (const auto& p : e_)
            if (!p.is_zero()) {
                m = any ? std::max(m, p.max_exponent()) : p.max_exponent();
                any = true;
            }
        return m;
    }

private:
    std::array<Poly, 9> e_{};
};

using LaurentPolyC = LaurentPoly<Complex>;
using LaurentMatrix = LaurentMatrix3<Complex>;

// Max coefficient distance between two Laurent polynomials / matrices.
template <class S>
double max_coefficient_distance(const LaurentPoly<S>& a, const LaurentPoly<S>& b) {
    std::map<int, bool> keys;
    for (const auto& [e, c] : a.terms()) keys[e] = true;
    for (const auto& [e, c] : b.terms()) keys[e] = true;
    double m = 0.0;
    for (const auto& [e, unused] : keys) m = std::max(m, magnitude(a.coeff(e) - b.coeff(e)));
    return m;
}

template <class S>
double max_coefficient_distance(const LaurentMatrix3<S>& a, const LaurentMatrix3<S>& b) {
    double m = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m = std::max(m, max_coefficient_distance(a(i, j), b(i, j)));
    return m;
}

}  // namespace pentagram
