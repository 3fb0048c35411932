#include "pentagram/polygon.hpp"

#include <limits>
#include <string>

namespace pentagram {

namespace {

Complex det3(const Vec3& a, const Vec3& b, const Vec3& c) {
    Mat3 m;
    m << a, b, c;
    return m.determinant();
}

Vec3 cross(const Vec3& a, const Vec3& b) {
    return Vec3(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0));
}

bool near_zero(const Vec3& v) { return v.norm() == 0.0; }

// Tolerance for "two unit vectors are proportional".
constexpr double kCoincidenceTol = 1e-12;

}  // namespace

ProjectivePoint::ProjectivePoint(const Vec3& h) : h_(h) {
    if (near_zero(h)) throw Error(ErrorKind::InvalidInput, "zero homogeneous vector");
}

bool ProjectivePoint::same_as(const ProjectivePoint& other, double tol) const {
    return cross(unit(), other.unit()).cwiseAbs().maxCoeff() < tol;
}

ProjectiveLine line_through(const ProjectivePoint& p, const ProjectivePoint& q) {
    Vec3 l = cross(p.unit(), q.unit());
    if (l.norm() < kCoincidenceTol) throw Error(ErrorKind::DegenerateLine, "points coincide");
    return ProjectiveLine{(l / l.norm()).transpose()};
}

ProjectivePoint intersect(const ProjectiveLine& l1, const ProjectiveLine& l2) {
    Vec3 a = l1.l.transpose() / l1.l.norm();
    Vec3 b = l2.l.transpose() / l2.l.norm();
    Vec3 p = cross(a, b);
    if (p.norm() < kCoincidenceTol) throw Error(ErrorKind::DegenerateIntersection, "lines coincide");
    return ProjectivePoint(p / p.norm());
}

VertexChain::VertexChain(std::vector<Vec3> vertices, const Mat3& monodromy, Unchecked)
    : v_(std::move(vertices)), m_(monodromy) {
    if (v_.size() < 4) throw Error(ErrorKind::InvalidInput, "a chain needs n >= 4");
    for (const auto& v : v_)
        if (near_zero(v)) throw Error(ErrorKind::InvalidInput, "zero vertex");
    Complex d = m_.determinant();
    if (std::abs(d) < 1e-300) throw Error(ErrorKind::InvalidInput, "singular monodromy");
    m_ /= principal_cbrt(d);
    m_inv_ = m_.inverse();
}

VertexChain::VertexChain(std::vector<Vec3> vertices, const Mat3& monodromy)
    : VertexChain(std::move(vertices), monodromy, Unchecked{}) {
    if (min_triple_det() < kGenericityTol)
        throw Error(ErrorKind::DegenerateChain, "three consecutive vertices are collinear");
}

VertexChain VertexChain::closed(std::vector<Vec3> vertices) {
    return VertexChain(std::move(vertices), Mat3::Identity());
}

Vec3 VertexChain::vertex(long j) const {
    const int nn = n();
    Vec3 v = v_[wrap(j, nn)];
    long k = (j - wrap(j, nn)) / nn;
    for (; k > 0; --k) v = m_ * v;
    for (; k < 0; ++k) v = m_inv_ * v;
    return v;
}

double VertexChain::min_triple_det() const {
    double m = std::numeric_limits<double>::infinity();
    for (long j = 0; j < n(); ++j) {
        Vec3 a = vertex(j), b = vertex(j + 1), c = vertex(j + 2);
        m = std::min(m, std::abs(det3(a / a.norm(), b / b.norm(), c / c.norm())));
    }
    return m;
}

VertexChain VertexChain::transformed(const Mat3& g) const {
    std::vector<Vec3> w;
    w.reserve(v_.size());
    for (const auto& v : v_) w.push_back(g * v);
    return VertexChain(std::move(w), g * m_ * g.inverse());
}

Vec3 NormalizedLift::at(long j) const {
    const int nn = n();
    Vec3 v = V[wrap(j, nn)];
    long k = (j - wrap(j, nn)) / nn;
    Mat3 inv = k < 0 ? Mat3(monodromy.inverse()) : Mat3::Identity();
    for (; k > 0; --k) v = monodromy * v;
    for (; k < 0; ++k) v = inv * v;
    return v;
}

VertexChain pentagram_step_geometric(const VertexChain& chain) {
    const int n = chain.n();
    std::vector<Vec3> out(n);
    for (long i = 0; i < n; ++i) {
        try {
            ProjectiveLine d1 = line_through(ProjectivePoint(chain.vertex(i - 1)), ProjectivePoint(chain.vertex(i + 1)));
            ProjectiveLine d2 = line_through(ProjectivePoint(chain.vertex(i)), ProjectivePoint(chain.vertex(i + 2)));
            out[i] = intersect(d1, d2).h();
        } catch (const Error& e) {
            throw Error(ErrorKind::DegenerateDiagonal, "diagonals at vertex " + std::to_string(i) + ": " + e.what());
        }
    }
    VertexChain image(std::move(out), chain.monodromy(), VertexChain::Unchecked{});
    if (image.min_triple_det() < kGenericityTol)
        throw Error(ErrorKind::MapUndefined, "image has three consecutive collinear vertices");
    return image;
}

NormalizedLift lift_normalized(const VertexChain& chain) {
    const int n = chain.n();
    product_length(n);
    if (chain.min_triple_det() < kGenericityTol)
        throw Error(ErrorKind::DegenerateChain, "chain is not generic");

    // s_j s_{j+1} s_{j+2} D_j = 1 with s periodic; solve in logs.
    CMatrix circ = CMatrix::Zero(n, n);
    CVector rhs(n);
    for (long j = 0; j < n; ++j) {
        for (int k = 0; k < 3; ++k) circ(j, wrap(j + k, n)) += 1.0;
        rhs(j) = -std::log(det3(chain.vertex(j), chain.vertex(j + 1), chain.vertex(j + 2)));
    }
    CVector l = circ.partialPivLu().solve(rhs);

    std::vector<Complex> s(n);
    for (int j = 0; j < n; ++j) s[j] = std::exp(l(j));
    // Fix the Z/3 ambiguity: arg(s_0) in [0, 2pi/3).
    double arg0 = std::arg(s[0]);
    if (arg0 < 0) arg0 += 2.0 * std::numbers::pi;
    int k = static_cast<int>(std::floor(arg0 / (2.0 * std::numbers::pi / 3.0)));
    Complex fix = std::pow(omega3(), -k);
    NormalizedLift lift;
    lift.monodromy = chain.monodromy();
    lift.V.resize(n);
    for (int j = 0; j < n; ++j) lift.V[j] = s[j] * fix * chain.vertices()[j];
    return lift;
}

namespace {

// Coefficients (al, be, ga) with w3 = al w2 + be w1 + ga w0.
Vec3 recurrence_coefficients(const Vec3& w0, const Vec3& w1, const Vec3& w2, const Vec3& w3) {
    Mat3 basis;
    basis << w2, w1, w0;
    return basis.partialPivLu().solve(w3);
}

}  // namespace

ABCoords ab_from_chain(const VertexChain& chain) {
    NormalizedLift lift = lift_normalized(chain);
    const int n = chain.n();
    std::vector<Complex> a(n), b(n);
    for (long j = 0; j < n; ++j) {
        Vec3 c = recurrence_coefficients(lift.at(j), lift.at(j + 1), lift.at(j + 2), lift.at(j + 3));
        if (std::abs(c(2) - 1.0) > 1e-8)
            throw Error(ErrorKind::InconsistentLift, "V_j coefficient " + std::to_string(std::abs(c(2))) + " != 1");
        a[j] = c(0);
        b[j] = c(1);
    }
    return ABCoords(std::move(a), std::move(b));
}

VertexChain chain_from_ab(const ABCoords& ab) {
    const int n = ab.n();
    product_length(n);
    std::vector<Vec3> V(n + 3);
    V[0] = Vec3(1, 0, 0);
    V[1] = Vec3(0, 1, 0);
    V[2] = Vec3(0, 0, 1);
    for (int j = 0; j + 3 < n + 3; ++j) V[j + 3] = ab.a[j] * V[j + 2] + ab.b[j] * V[j + 1] + V[j];
    Mat3 M;
    M << V[n], V[n + 1], V[n + 2];
    V.resize(n);
    try {
        return VertexChain(std::move(V), M);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InvalidInput) throw Error(ErrorKind::DegenerateChain, e.what());
        throw;
    }
}

XYCoords xy_from_chain(const VertexChain& chain) {
    const int n = chain.n();
    std::vector<Complex> al(n), be(n), ga(n);
    for (long j = 0; j < n; ++j) {
        Vec3 w0 = chain.vertex(j), w1 = chain.vertex(j + 1), w2 = chain.vertex(j + 2), w3 = chain.vertex(j + 3);
        Vec3 c = recurrence_coefficients(w0, w1, w2, w3);
        al[j] = c(0);
        be[j] = c(1);
        ga[j] = c(2);
    }
    std::vector<Complex> x(n), y(n);
    for (long i = 0; i < n; ++i) {
        Complex dx = be[wrap(i - 2, n)] * be[wrap(i - 1, n)];
        Complex dy = al[wrap(i - 2, n)] * al[wrap(i - 1, n)];
        if (std::abs(dx) == 0.0 || std::abs(dy) == 0.0)
            throw Error(ErrorKind::DegenerateChain, "corner coordinates undefined (vanishing recurrence coefficient)");
        x[i] = al[wrap(i - 2, n)] * ga[wrap(i - 1, n)] / dx;
        y[i] = -be[wrap(i - 1, n)] / dy;
    }
    return XYCoords(std::move(x), std::move(y));
}

Equivalence projectively_equivalent(const VertexChain& c1, const VertexChain& c2, double tol) {
    Equivalence r;
    r.residual = std::numeric_limits<double>::infinity();
    if (c1.n() != c2.n()) return r;
    XYCoords p = xy_from_chain(c1), q = xy_from_chain(c2);
    for (int s = 0; s < p.n(); ++s) {
        double d = coords_distance(p, q, s);
        if (d < r.residual) {
            r.residual = d;
            r.shift = s;
        }
        if (d < tol && !r.equivalent) {
            r.equivalent = true;
            r.shift = s;
            r.residual = d;
            break;
        }
    }
    return r;
}

}  // namespace pentagram
