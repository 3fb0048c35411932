#pragma once

#include <functional>
#include <vector>

#include "pentagram/coords.hpp"
#include "pentagram/dual.hpp"
#include "pentagram/spectral.hpp"

namespace pentagram {

// All objects here live in logarithmic coordinates (u_0..u_{n-1}, v_0..v_{n-1}),
// u_i = log x_i, v_i = log y_i, where the bracket and the 2-form are constant.

struct PoissonTensor {
    int n = 0;
    CMatrix P;  // 2n x 2n, antisymmetric
};

PoissonTensor poisson_tensor(int n);

Complex poisson_bracket(const PoissonTensor& P, const CVector& f_grad, const CVector& g_grad);

struct InvariantGradients {
    SpectralInvariants values;
    CMatrix grad;  // rows I_0..I_q, J_0..J_q; columns u then v
};

// Forward-mode derivatives of the xy-kind invariants.
InvariantGradients invariant_gradients(const XYCoords& xy);

// Central differences with step h in (u, v), for cross-checking.
CMatrix invariant_gradients_fd(const XYCoords& xy, double h = 1e-6);

double involution_check(const XYCoords& xy);

struct CasimirCheck {
    double residual = 0.0;  // max |P grad(Casimir)|
    int kernel_dim = 0;     // 2n - rank P
    int casimir_rank = 0;   // rank of the Casimir gradients
};

CasimirCheck casimir_check(const XYCoords& xy);

// A coordinate map x, y -> x', y' written for dual numbers.
using DualMap = std::function<void(const std::vector<Dual>&, const std::vector<Dual>&, std::vector<Dual>&,
                                   std::vector<Dual>&)>;

// The pentagram map in xy coordinates.
DualMap pentagram_dual_map();

// Jacobian of a map in logarithmic coordinates.
CMatrix log_jacobian(const XYCoords& xy, const DualMap& map = pentagram_dual_map());

double bracket_invariance_check(const XYCoords& xy, const DualMap& map = pentagram_dual_map());

struct TwoForm {
    int n = 0, q = 0;
    CMatrix A;  // 2n x 2n, antisymmetric
};

TwoForm omega0_matrix(int n);

struct LeafFrame {
    CMatrix basis;  // 2n x 2g, orthonormal columns
};

// Common kernel of the differentials of I_q, J_q (and I_0, J_0 for even n).
LeafFrame leaf_frame(const XYCoords& xy);

struct OnLeafInverse {
    double leaf_residual = 0.0;  // max over frame vectors of |P A xi - xi|
    double pap_residual = 0.0;   // |P A P - P|
};

OnLeafInverse onleaf_inverse_check(const XYCoords& xy);

struct OmegaInvariance {
    double leaf_residual = 0.0;      // |B^T (J^T A J - A) B|, B a leaf frame
    double one_sided_residual = 0.0; // |(J^T A J - A) B|, recorded only
    double unprojected_residual = 0.0;
};

OmegaInvariance omega_invariance_check(const XYCoords& xy, const DualMap& map = pentagram_dual_map());

// Rank of the 2-form restricted to the leaf through xy.
int omega_leaf_rank(const XYCoords& xy);

int numeric_rank(const CMatrix& m, double rel_tol = 1e-9);

}  // namespace pentagram
