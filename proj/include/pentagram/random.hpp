#pragma once

// Portable seeded generation. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; doubles are formed from the top 53 bits
// so no library-specific distribution code is involved. Independent streams
// (one per polygon index in a sweep) are seeded with SplitMix64(seed, stream).

#include <cstdint>
#include <random>

#include "pentagram/coords.hpp"
#include "pentagram/polygon.hpp"

namespace pentagram {

std::uint64_t splitmix64(std::uint64_t x);

class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    double uniform();  // [0, 1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Modulus in [0.5, 1.5], argument in [-0.5, 0.5].
    Complex near_unit();
    // Real and imaginary parts uniform in [-1, 1].
    Complex box();

private:
    std::mt19937_64 eng_;
};

ABCoords random_ab(int n, Rng& rng);
XYCoords random_xy(int n, Rng& rng);
VertexChain random_twisted_chain(int n, Rng& rng);

// Plane polygon (M = Id) with vertices uniform in the unit disk, resampled
// until every normalized consecutive triple has |det| >= min_triple.
VertexChain random_closed_chain(int n, Rng& rng, double min_triple = 0.05, int attempts = 100);

Mat3 random_sl3(Rng& rng);

}  // namespace pentagram
