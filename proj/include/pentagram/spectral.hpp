#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pentagram/coords.hpp"
#include "pentagram/lax.hpp"
#include "pentagram/polygon.hpp"

namespace pentagram {

struct SpectralInvariants {
    int n = 0;
    int q = 0;
    std::vector<Complex> I;  // I_0 .. I_q
    std::vector<Complex> J;  // J_0 .. J_q
    Complex C{1.0};
};

// Reads J_j from the z^{j-q} coefficient of tr T and I_j from the z^{q-j}
// coefficient of tr T^{-1}. For the xy kind the traces are rescaled by C with
// C^3 = z^n det T; C is the scalar value of T(1) when that matrix is scalar
// (closed polygon), else the principal cube root, unless given explicitly.
SpectralInvariants invariants_from_monodromy(const Monodromy& mono, std::optional<Complex> C = std::nullopt);

SpectralInvariants spectral_invariants(const ABCoords& ab);
SpectralInvariants spectral_invariants(const XYCoords& xy, std::optional<Complex> C = std::nullopt);

// Cube root used by the xy kind: see invariants_from_monodromy.
Complex rescaling_constant(const Monodromy& xy_mono);

// max over states and invariants of |v_t - v_0| / (1 + |v_0|).
double conservation_drift(std::span<const SpectralInvariants> seq);
double conservation_drift(std::span<const XYCoords> orbit);
double conservation_drift(std::span<const ABCoords> orbit);

// Largest |I_j - I'_j|, |J_j - J'_j| scaled by 1 + |I_j| (resp. J_j).
double invariants_distance(const SpectralInvariants& p, const SpectralInvariants& q);

// R(k, z) = k^3 - k^2 sum J_j z^{j-q} + k z^{-n} sum I_j z^{q-j} - z^{-n}.
Complex curve_eval(const SpectralInvariants& inv, Complex k, Complex z);
Complex curve_dk(const SpectralInvariants& inv, Complex k, Complex z);
Complex curve_dz(const SpectralInvariants& inv, Complex k, Complex z);

// Ascending coefficients in z of the discriminant in k of z^n R(k, z),
// with the z^n factor at the origin removed.
std::vector<Complex> discriminant_polynomial(const SpectralInvariants& inv);

// Order of vanishing of the discriminant at z = 0 (always n for this family).
int discriminant_zero_order(int n);

struct PuiseuxTerm {
    std::string point;  // "O1", "O2", ..., "W3"
    double exponent;    // k ~ coefficient * z^exponent
    Complex coefficient;
};

struct CurveAnalysis {
    std::vector<Complex> branch_z;
    int nu_finite = 0;
    int nu_total = 0;
    int genus = 0;
    bool closed_triple_point = false;  // (z-1)^6 removed before counting
    std::vector<PuiseuxTerm> marked_points;
};

struct CurveOptions {
    double cluster_tol = 1e-7;
    // Treat the invariants as those of a closed polygon. Unset: decided by the
    // closed-polygon relations.
    std::optional<bool> closed;
};

CurveAnalysis branch_points(const SpectralInvariants& inv, const CurveOptions& opt = {});

// Leading terms at the six marked points predicted from the invariants.
std::vector<PuiseuxTerm> marked_point_terms(const SpectralInvariants& inv);

struct ExpansionCheck {
    std::string label;
    Complex expected;
    Complex estimate;
    double residual;  // relative to |expected|
};

struct SingularityReport {
    std::vector<ExpansionCheck> checks;
    std::array<double, 3> growth_at_zero{};      // exponents e with |k| ~ |z|^e, ascending
    std::array<double, 3> growth_at_infinity{};  // same at z = infinity
    double max_residual = 0.0;
};

SingularityReport singularity_expansions_check(const SpectralInvariants& inv);

// Smallest and largest modulus among the nonzero roots of the discriminant.
// Expansions at z = 0 and z = infinity converge inside these radii.
std::array<double, 2> branch_radii(const SpectralInvariants& inv);

// Three sample radii decreasing toward z = 0 (or increasing toward infinity),
// starting at `base` or further in when a branch point is closer.
std::array<double, 3> radii_toward_zero(double nearest_branch, double base);
std::array<double, 3> radii_toward_infinity(double farthest_branch, double base);

// Residuals of sum I_j - 3, sum J_j - 3, sum j I_j - (3q - n), sum j J_j - (3q - n),
// sum j^2 I_j - sum j^2 J_j.
std::array<Complex, 5> closed_polygon_relations(const SpectralInvariants& inv);
double closed_relations_residual(const SpectralInvariants& inv);

bool is_closed(const VertexChain& chain, double tol = 1e-8);

struct Casimirs {
    Complex E_n, O_n;
    std::optional<Complex> E_half, O_half;  // even n only
};

Casimirs casimir_map(const SpectralInvariants& inv);

struct FloquetBloch {
    Complex z, k;
    Vec3 psi;        // component sum 1
    Covec3 psi_star; // psi_star . psi = 1
};

// Eigen-data of T(z) on one sheet; sheets are ordered by |k| then arg k.
FloquetBloch floquet_bloch(const Mat3& T, Complex z, int branch);

// det^2 of the matrix of sum-normalized eigenvectors in the given root order.
Complex F_function(const Mat3& T, std::array<int, 3> order = {0, 1, 2});

struct LimitCheck {
    std::string label;
    Complex expected;
    Complex estimate;
    double residual;
};

struct MarkedPointLimits {
    std::vector<LimitCheck> checks;
    double max_residual = 0.0;
};

MarkedPointLimits marked_point_limits(const ABCoords& ab);

// Polynomial extrapolation of f(h) to h = 0 from samples (Neville).
Complex extrapolate_to_zero(std::span<const Complex> h, std::span<const Complex> f);

}  // namespace pentagram
