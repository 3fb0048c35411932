#include <numeric>

#include "doctest.h"
#include "pentagram/coords.hpp"
#include "pentagram/random.hpp"
#include "pentagram/spectral.hpp"

using namespace pentagram;

TEST_CASE("ab_to_xy of the all-ones string") {
    ABCoords ab(std::vector<Complex>(4, 1.0), std::vector<Complex>(4, 1.0));
    XYCoords xy = ab_to_xy(ab);
    for (int i = 0; i < 4; ++i) {
        CHECK(xy.x[i] == Complex(1.0));
        CHECK(xy.y[i] == Complex(-1.0));
    }
}

TEST_CASE("x_i y_i = -1/(a_{i-1} b_{i-2})") {
    Rng rng(11);
    for (int n : {4, 5, 7, 8}) {
        ABCoords ab = random_ab(n, rng);
        XYCoords xy = ab_to_xy(ab);
        for (int i = 0; i < n; ++i) {
            Complex expect = -1.0 / (ab.A(i - 1) * ab.B(i - 2));
            CHECK(std::abs(xy.x[i] * xy.y[i] - expect) < 1e-12 * std::abs(expect));
        }
    }
}

TEST_CASE("telescoping product of x and -1/y") {
    Rng rng(5);
    ABCoords ab = random_ab(5, rng);
    XYCoords xy = ab_to_xy(ab);
    Complex lhs = 1.0, pa = 1.0, pb = 1.0;
    for (int i = 0; i < 5; ++i) {
        lhs *= xy.x[i] * (-1.0 / xy.y[i]);
        pa *= ab.a[i];
        pb *= ab.b[i];
    }
    // prod x = prod a / (prod b)^2 and prod(-1/y) = (prod a)^2 / prod b
    Complex rhs = std::pow(pa / pb, 3);
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));
}

TEST_CASE("xy_to_ab roundtrip over seeds") {
    for (int n : {4, 5, 7, 8})
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(seed, n);
            ABCoords ab = random_ab(n, rng);
            XYCoords xy = ab_to_xy(ab);
            XYCoords back = ab_to_xy(xy_to_ab(xy));
            CHECK(coords_distance(back, xy) < 1e-10);
        }
}

TEST_CASE("xy_to_ab rejects n divisible by 3") {
    Rng rng(1);
    XYCoords xy = random_xy(6, rng);
    try {
        xy_to_ab(xy);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::IndivisibilityViolated);
    }
}

TEST_CASE("xy_to_ab of the constant string is constant with a = b") {
    XYCoords xy(std::vector<Complex>(4, 1.0), std::vector<Complex>(4, -1.0));
    ABCoords ab = xy_to_ab(xy);
    for (int j = 0; j < 4; ++j) {
        CHECK(std::abs(ab.a[j] - ab.a[0]) < 1e-12);
        CHECK(std::abs(ab.b[j] - ab.b[0]) < 1e-12);
        CHECK(std::abs(ab.a[j] - ab.b[j]) < 1e-12);
    }
    CHECK(coords_distance(ab_to_xy(ab), xy) < 1e-12);
}

TEST_CASE("pentagram_ab conserves the spectral invariants") {
    Rng rng(7, 7);
    ABCoords ab = random_ab(7, rng);
    ABCoords img = pentagram_ab(ab);
    SpectralInvariants before = spectral_invariants(ab), after = spectral_invariants(img);
    for (int j = 0; j <= before.q; ++j) {
        CHECK(std::abs(after.I[j] - before.I[j]) < 1e-9 * std::abs(before.I[j]));
        CHECK(std::abs(after.J[j] - before.J[j]) < 1e-9 * std::abs(before.J[j]));
    }
    Complex pa = 1.0, pt = 1.0;
    for (int j = 0; j < 7; ++j) {
        pa *= ab.a[j];
        pt *= img.a[j];
    }
    CHECK(std::abs(pt - pa) < 1e-10 * std::abs(pa));
}

TEST_CASE("pentagram_ab detects a vanishing factor") {
    Rng rng(2);
    ABCoords ab = random_ab(4, rng);
    // n = 4: the denominator of T*(a_2) is 1 + a_1 b_0.
    ab.a[1] = -1.0 / ab.b[0];
    try {
        pentagram_ab(ab);
        FAIL("expected MapUndefined");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MapUndefined);
    }
}

TEST_CASE("pentagram_ab rejects n divisible by 3") {
    Rng rng(3);
    ABCoords ab = random_ab(6, rng);
    CHECK_THROWS_AS(pentagram_ab(ab), Error);
}

TEST_CASE("constant xy strings are fixed exactly") {
    XYCoords xy(std::vector<Complex>(7, Complex(0.3, 0.2)), std::vector<Complex>(7, Complex(-1.1, 0.4)));
    XYCoords img = pentagram_xy(xy);
    for (int i = 0; i < 7; ++i) {
        CHECK(img.x[i] == xy.x[i]);
        CHECK(img.y[i] == xy.y[i]);
    }
}

TEST_CASE("xy map agrees with the ab route") {
    for (int n : {4, 5, 7, 8})
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            Rng rng(seed, 100 + n);
            ABCoords ab = random_ab(n, rng);
            XYCoords direct = pentagram_xy(ab_to_xy(ab));
            XYCoords via = ab_to_xy(pentagram_ab(ab));
            CHECK(coords_distance(direct, via) < 1e-9);
            // and the inverse-coordinate route from xy
            XYCoords xy = ab_to_xy(ab);
            XYCoords back = ab_to_xy(pentagram_ab(xy_to_ab(xy)));
            CHECK(coords_distance(back, pentagram_xy(xy)) < 1e-9);
        }
}

TEST_CASE("pentagram_xy detects 1 - x y = 0") {
    Rng rng(4);
    XYCoords xy = random_xy(5, rng);
    xy.y[2] = 1.0 / xy.x[2];
    CHECK_THROWS_AS(pentagram_xy(xy), Error);
}

TEST_CASE("orbit edge cases") {
    Rng rng(42, 7);
    XYCoords xy = random_xy(7, rng);
    auto single = orbit(xy, 0);
    REQUIRE(single.states.size() == 1);
    CHECK(coords_distance(single.states[0], xy) == 0.0);

    XYCoords c(std::vector<Complex>(5, 0.7), std::vector<Complex>(5, -0.9));
    auto flat = orbit(c, 50);
    REQUIRE(flat.states.size() == 51);
    for (const auto& s : flat.states) CHECK(coords_distance(s, c) == 0.0);
}

TEST_CASE("orbit reports the failing step") {
    // Make the second step undefined by forcing 1 - x'_0 y'_0 = 0.
    Rng rng(9);
    XYCoords xy = random_xy(5, rng);
    XYCoords img = pentagram_xy(xy);
    // y'_0 = y_1 f_2 / f_0 while x'_0 = x_0 f_4 / f_1 does not involve x_2:
    // choose x_2 so that x'_0 y'_0 = 1.
    Complex f0 = 1.0 - xy.x[0] * xy.y[0];
    Complex f2 = f0 / (xy.y[1] * img.x[0]);
    xy.x[2] = (1.0 - f2) / xy.y[2];
    auto r = orbit(xy, 5);
    REQUIRE_FALSE(r.complete());
    CHECK(r.failure->kind() == ErrorKind::MapUndefinedAtStep);
    CHECK(r.failure->step() == 2);
    CHECK(r.states.size() == 2);
}

TEST_CASE("invariant drift along a long orbit") {
    Rng rng(42, 7);
    XYCoords xy = random_xy(7, rng);
    auto r = orbit(xy, 100);
    REQUIRE(r.complete());
    CHECK(conservation_drift(std::span<const XYCoords>(r.states)) < 1e-9);
}
