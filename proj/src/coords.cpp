#include "pentagram/coords.hpp"

#include <limits>
#include <string>

namespace pentagram {

namespace {

void require_length(size_t p, size_t q, const char* what) {
    if (p != q) throw Error(ErrorKind::InvalidInput, std::string(what) + ": length mismatch");
    if (p < 4) throw Error(ErrorKind::InvalidInput, std::string(what) + ": need n >= 4");
}

}  // namespace

ABCoords::ABCoords(std::vector<Complex> a_, std::vector<Complex> b_)
    : a(std::move(a_)), b(std::move(b_)) {
    require_length(a.size(), b.size(), "ABCoords");
}

void ABCoords::require_valid() const {
    for (int j = 0; j < n(); ++j) {
        if (a[j] == Complex(0.0) || b[j] == Complex(0.0))
            throw Error(ErrorKind::InvalidInput, "zero a_j or b_j at j=" + std::to_string(j));
        if (vanishes(1.0 + A(j + 1) * B(j), std::abs(A(j + 1) * B(j))))
            throw Error(ErrorKind::InvalidInput, "1 + a_{j+1} b_j vanishes at j=" + std::to_string(j));
    }
}

XYCoords::XYCoords(std::vector<Complex> x_, std::vector<Complex> y_)
    : x(std::move(x_)), y(std::move(y_)) {
    require_length(x.size(), y.size(), "XYCoords");
}

void XYCoords::require_valid() const {
    for (int i = 0; i < n(); ++i) {
        if (x[i] == Complex(0.0) || y[i] == Complex(0.0))
            throw Error(ErrorKind::InvalidInput, "zero x_i or y_i at i=" + std::to_string(i));
        if (vanishes(1.0 - x[i] * y[i], std::abs(x[i] * y[i])))
            throw Error(ErrorKind::InvalidInput, "1 - x_i y_i vanishes at i=" + std::to_string(i));
    }
}

int product_length(int n) {
    if (n % 3 == 0)
        throw Error(ErrorKind::IndivisibilityViolated, "n = " + std::to_string(n) + " is divisible by 3");
    return (n - (n % 3)) / 3;
}

XYCoords ab_to_xy(const ABCoords& ab) {
    const int n = ab.n();
    std::vector<Complex> x(n), y(n);
    for (int i = 0; i < n; ++i) {
        Complex den_x = ab.B(i - 2) * ab.B(i - 1);
        Complex den_y = ab.A(i - 2) * ab.A(i - 1);
        if (den_x == Complex(0.0) || den_y == Complex(0.0))
            throw Error(ErrorKind::DivisionByZero, "ab_to_xy needs nonzero a_j, b_j");
        x[i] = ab.A(i - 2) / den_x;
        y[i] = -ab.B(i - 1) / den_y;
    }
    return XYCoords(std::move(x), std::move(y));
}

namespace {

// Linear map (log a, log b) -> (log x, log(-y)) of ab_to_xy.
CMatrix ab_log_system(int n) {
    CMatrix M = CMatrix::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        // log x_i = A_{i-2} - B_{i-2} - B_{i-1}
        M(i, wrap(i - 2, n)) += 1.0;
        M(i, n + wrap(i - 2, n)) -= 1.0;
        M(i, n + wrap(i - 1, n)) -= 1.0;
        // log(-y_i) = B_{i-1} - A_{i-2} - A_{i-1}
        M(n + i, n + wrap(i - 1, n)) += 1.0;
        M(n + i, wrap(i - 2, n)) -= 1.0;
        M(n + i, wrap(i - 1, n)) -= 1.0;
    }
    return M;
}

double xy_mismatch(const XYCoords& p, const XYCoords& q) {
    double m = 0.0;
    for (int i = 0; i < p.n(); ++i) {
        m = std::max(m, std::abs(p.x[i] - q.x[i]) / std::abs(q.x[i]));
        m = std::max(m, std::abs(p.y[i] - q.y[i]) / std::abs(q.y[i]));
    }
    return m;
}

}  // namespace

ABCoords xy_to_ab(const XYCoords& xy) {
    const int n = xy.n();
    product_length(n);
    for (int i = 0; i < n; ++i)
        if (xy.x[i] == Complex(0.0) || xy.y[i] == Complex(0.0))
            throw Error(ErrorKind::NoPreimage, "zero coordinate has no preimage");

    Eigen::PartialPivLU<CMatrix> lu(ab_log_system(n));
    CVector rhs(2 * n), sol;
    for (int i = 0; i < n; ++i) {
        rhs(i) = std::log(xy.x[i]);
        rhs(n + i) = std::log(-xy.y[i]);
    }
    sol = lu.solve(rhs);

    std::vector<Complex> a(n), b(n);
    for (int j = 0; j < n; ++j) {
        a[j] = std::exp(sol(j));
        b[j] = std::exp(sol(n + j));
    }
    ABCoords ab(a, b);

    // Multiplicative refinement: solve the same system for the log of the
    // remaining ratio. The ratios are near 1, so principal logs are safe.
    for (int pass = 0; pass < 2; ++pass) {
        XYCoords img = ab_to_xy(ab);
        for (int i = 0; i < n; ++i) {
            rhs(i) = std::log(xy.x[i] / img.x[i]);
            rhs(n + i) = std::log(xy.y[i] / img.y[i]);
        }
        CVector delta = lu.solve(rhs);
        for (int j = 0; j < n; ++j) {
            ab.a[j] *= std::exp(delta(j));
            ab.b[j] *= std::exp(delta(n + j));
        }
    }
    if (xy_mismatch(ab_to_xy(ab), xy) > 1e-10)
        throw Error(ErrorKind::NoPreimage, "multiplicative system is inconsistent");
    return ab;
}

ABCoords pentagram_ab(const ABCoords& ab) {
    const int n = ab.n();
    const int m = product_length(n);
    // 1 + a_i b_j
    auto f = [&](long i, long j) { return 1.0 + ab.A(i) * ab.B(j); };
    auto checked_ratio = [](Complex num, Complex den, const char* which, long i) {
        if (den == Complex(0.0) || vanishes(den, std::abs(num)))
            throw Error(ErrorKind::MapUndefined,
                        std::string("vanishing factor in T*(") + which + "_" + std::to_string(i) + ")");
        return num / den;
    };
    std::vector<Complex> ta(n), tb(n);
    for (long i = 0; i < n; ++i) {
        Complex num = 1.0, den = 1.0;
        for (long l = 1; l <= m; ++l) {
            num *= f(i + 3 * l + 2, i + 3 * l + 1);
            den *= f(i - 3 * l + 2, i - 3 * l + 1);
        }
        ta[i] = ab.A(i + 2) * checked_ratio(num, den, "a", i);

        num = 1.0;
        den = 1.0;
        for (long l = 1; l <= m; ++l) {
            num *= f(i - 3 * l, i - 3 * l - 1);
            den *= f(i + 3 * l, i + 3 * l - 1);
        }
        tb[i] = ab.B(i - 1) * checked_ratio(num, den, "b", i);
    }
    return ABCoords(std::move(ta), std::move(tb));
}

XYCoords pentagram_xy(const XYCoords& xy) {
    const int n = xy.n();
    for (int k = 0; k < n; ++k) {
        Complex p = xy.x[k] * xy.y[k];
        if (vanishes(1.0 - p, std::abs(p)))
            throw Error(ErrorKind::MapUndefined, "1 - x_k y_k vanishes at k=" + std::to_string(k));
    }
    XYCoords out;
    pentagram_xy_raw(xy.x, xy.y, out.x, out.y);
    return out;
}

namespace {

template <class Coords, class Step>
OrbitResult<Coords> run_orbit(const Coords& start, int steps, Step step) {
    if (steps < 0) throw Error(ErrorKind::InvalidInput, "steps must be nonnegative");
    OrbitResult<Coords> r;
    r.states.reserve(steps + 1);
    r.states.push_back(start);
    for (int t = 1; t <= steps; ++t) {
        try {
            r.states.push_back(step(r.states.back()));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::MapUndefined) throw;
            r.failure = Error(ErrorKind::MapUndefinedAtStep, "step " + std::to_string(t) + ": " + e.what());
            r.failure->at_step(t);
            break;
        }
    }
    return r;
}

}  // namespace

OrbitResult<XYCoords> orbit(const XYCoords& xy, int steps) {
    return run_orbit(xy, steps, [](const XYCoords& s) { return pentagram_xy(s); });
}

OrbitResult<ABCoords> orbit_ab(const ABCoords& ab, int steps) {
    return run_orbit(ab, steps, [](const ABCoords& s) { return pentagram_ab(s); });
}

double coords_distance(const XYCoords& p, const XYCoords& q, int shift) {
    if (p.n() != q.n()) return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (int i = 0; i < p.n(); ++i) {
        m = std::max(m, std::abs(p.X(i + shift) - q.x[i]) / (1.0 + std::abs(q.x[i])));
        m = std::max(m, std::abs(p.Y(i + shift) - q.y[i]) / (1.0 + std::abs(q.y[i])));
    }
    return m;
}

double coords_distance(const ABCoords& p, const ABCoords& q) {
    if (p.n() != q.n()) return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (int i = 0; i < p.n(); ++i) {
        m = std::max(m, std::abs(p.a[i] - q.a[i]) / (1.0 + std::abs(q.a[i])));
        m = std::max(m, std::abs(p.b[i] - q.b[i]) / (1.0 + std::abs(q.b[i])));
    }
    return m;
}

}  // namespace pentagram
