#pragma once

#include <vector>

#include "pentagram/coords.hpp"
#include "pentagram/error.hpp"
#include "pentagram/types.hpp"

namespace pentagram {

// Minimum |det| of three consecutive unit-norm vertices for a generic chain.
inline constexpr double kGenericityTol = 1e-9;

class ProjectivePoint {
public:
    explicit ProjectivePoint(const Vec3& h);

    const Vec3& h() const { return h_; }
    Vec3 unit() const { return h_ / h_.norm(); }

    // Proportionality test through the 2x2 minors of the unit representatives.
    bool same_as(const ProjectivePoint& other, double tol = 1e-10) const;

private:
    Vec3 h_;
};

// Homogeneous covector l; a point p lies on the line iff l . p = 0.
struct ProjectiveLine {
    Covec3 l;

    Complex apply(const Vec3& p) const { return (l * p)(0, 0); }
};

ProjectiveLine line_through(const ProjectivePoint& p, const ProjectivePoint& q);
ProjectivePoint intersect(const ProjectiveLine& l1, const ProjectiveLine& l2);

// n base vertices phi(0..n-1) and a monodromy M with phi(j+n) = M phi(j).
// The constructor rescales M to det M = 1 (principal cube root) and rejects
// chains with three consecutive collinear vertices.
class VertexChain {
public:
    VertexChain(std::vector<Vec3> vertices, const Mat3& monodromy);

    // Plane polygon: M = Id.
    static VertexChain closed(std::vector<Vec3> vertices);

    int n() const { return static_cast<int>(v_.size()); }
    const std::vector<Vec3>& vertices() const { return v_; }
    const Mat3& monodromy() const { return m_; }

    // Vertex j of the bi-infinite chain, j may be negative or >= n.
    Vec3 vertex(long j) const;

    // Smallest |det(u_j, u_{j+1}, u_{j+2})| over unit-norm representatives.
    double min_triple_det() const;

    // Apply g in GL(3) to every vertex; the monodromy becomes g M g^{-1}.
    VertexChain transformed(const Mat3& g) const;

private:
    struct Unchecked {};
    VertexChain(std::vector<Vec3> vertices, const Mat3& monodromy, Unchecked);
    friend VertexChain pentagram_step_geometric(const VertexChain&);

    std::vector<Vec3> v_;
    Mat3 m_;
    Mat3 m_inv_;
};

struct NormalizedLift {
    std::vector<Vec3> V;
    Mat3 monodromy;

    int n() const { return static_cast<int>(V.size()); }
    Vec3 at(long j) const;
};

VertexChain pentagram_step_geometric(const VertexChain& chain);

NormalizedLift lift_normalized(const VertexChain& chain);
ABCoords ab_from_chain(const VertexChain& chain);
VertexChain chain_from_ab(const ABCoords& ab);

// Projectively invariant (x, y) of a chain for every n, including 3 | n.
// Uses the unnormalized recurrence V_{j+3} = al_j V_{j+2} + be_j V_{j+1} + ga_j V_j
// of the given representatives, whose scale dependence cancels in
//   x_i = al_{i-2} ga_{i-1} / (be_{i-2} be_{i-1}),  y_i = -be_{i-1} / (al_{i-2} al_{i-1}).
XYCoords xy_from_chain(const VertexChain& chain);

struct Equivalence {
    bool equivalent = false;
    int shift = 0;           // xy(c2)_i = xy(c1)_{i + shift}
    double residual = 0.0;   // best mismatch over all shifts
};

Equivalence projectively_equivalent(const VertexChain& c1, const VertexChain& c2, double tol = 1e-8);

}  // namespace pentagram
