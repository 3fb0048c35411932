#include "pentagram/random.hpp"

#include <numbers>

namespace pentagram {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : eng_(splitmix64(seed ^ splitmix64(stream))) {}

double Rng::uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

Complex Rng::near_unit() {
    double r = uniform(0.5, 1.5);
    double a = uniform(-0.5, 0.5);
    return std::polar(r, a);
}

Complex Rng::box() {
    double re = uniform(-1.0, 1.0);
    double im = uniform(-1.0, 1.0);
    return {re, im};
}

ABCoords random_ab(int n, Rng& rng) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<Complex> a(n), b(n);
        for (auto& v : a) v = rng.near_unit();
        for (auto& v : b) v = rng.near_unit();
        ABCoords ab(std::move(a), std::move(b));
        try {
            ab.require_valid();
            return ab;
        } catch (const Error&) {
        }
    }
    throw Error(ErrorKind::GenerationFailed, "no valid ab sample in 100 attempts");
}

XYCoords random_xy(int n, Rng& rng) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<Complex> x(n), y(n);
        for (auto& v : x) v = rng.near_unit();
        for (auto& v : y) v = -rng.near_unit();
        XYCoords xy(std::move(x), std::move(y));
        try {
            xy.require_valid();
            return xy;
        } catch (const Error&) {
        }
    }
    throw Error(ErrorKind::GenerationFailed, "no valid xy sample in 100 attempts");
}

Mat3 random_sl3(Rng& rng) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        Mat3 g;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g(i, j) = rng.box() + (i == j ? 1.0 : 0.0);
        Complex d = g.determinant();
        if (std::abs(d) > 0.1) return g / principal_cbrt(d);
    }
    throw Error(ErrorKind::GenerationFailed, "no well-conditioned matrix in 100 attempts");
}

VertexChain random_twisted_chain(int n, Rng& rng) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<Vec3> v(n);
        for (auto& p : v) p = Vec3(rng.box(), rng.box(), rng.box());
        Mat3 M = random_sl3(rng);
        try {
            VertexChain c(std::move(v), M);
            if (c.min_triple_det() >= 0.05) return c;
        } catch (const Error&) {
        }
    }
    throw Error(ErrorKind::GenerationFailed, "no generic twisted chain in 100 attempts");
}

VertexChain random_closed_chain(int n, Rng& rng, double min_triple, int attempts) {
    if (n < 5) throw Error(ErrorKind::UnsupportedN, "closed polygons need n >= 5");
    for (int attempt = 0; attempt < attempts; ++attempt) {
        std::vector<Vec3> v(n);
        for (auto& p : v) {
            double r = std::sqrt(rng.uniform());
            double t = 2.0 * std::numbers::pi * rng.uniform();
            p = Vec3(r * std::cos(t), r * std::sin(t), 1.0);
        }
        try {
            VertexChain c = VertexChain::closed(std::move(v));
            if (c.min_triple_det() >= min_triple) return c;
        } catch (const Error&) {
        }
    }
    throw Error(ErrorKind::GenerationFailed, "no well-spread closed polygon in " + std::to_string(attempts) +
                                                 " attempts");
}

}  // namespace pentagram
