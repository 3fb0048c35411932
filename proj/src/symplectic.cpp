#include "pentagram/symplectic.hpp"

#include <Eigen/SVD>

namespace pentagram {

PoissonTensor poisson_tensor(int n) {
    PoissonTensor t{n, CMatrix::Zero(2 * n, 2 * n)};
    for (int i = 0; i < n; ++i) {
        // {u_i, u_{i+1}} = 1, {v_i, v_{i+1}} = -1; indices collide harmlessly for small n.
        t.P(i, wrap(i + 1, n)) += 1.0;
        t.P(i, wrap(i - 1, n)) -= 1.0;
        t.P(n + i, n + wrap(i - 1, n)) += 1.0;
        t.P(n + i, n + wrap(i + 1, n)) -= 1.0;
    }
    return t;
}

Complex poisson_bracket(const PoissonTensor& P, const CVector& f, const CVector& g) {
    return f.transpose() * P.P * g;
}

namespace {

void seed_log_variables(const XYCoords& xy, std::vector<Dual>& x, std::vector<Dual>& y) {
    const int n = xy.n();
    x.clear();
    y.clear();
    for (int i = 0; i < n; ++i) {
        x.push_back(Dual::variable(xy.x[i], i, 2 * n, xy.x[i]));  // dx/du = x
        y.push_back(Dual::variable(xy.y[i], n + i, 2 * n, xy.y[i]));
    }
}

CVector grad_row(const Dual& d, int dim) {
    CVector g = CVector::Zero(dim);
    for (int i = 0; i < dim; ++i) g(i) = d.d(i);
    return g;
}

}  // namespace

InvariantGradients invariant_gradients(const XYCoords& xy) {
    const int n = xy.n(), q = n / 2;
    InvariantGradients out;
    Monodromy mono = monodromy_T(xy);
    Complex C = rescaling_constant(mono);
    out.values = invariants_from_monodromy(mono, C);

    std::vector<Dual> x, y;
    seed_log_variables(xy, x, y);
    LaurentMatrix3<Dual> T, Ti;
    monodromy_xy_raw(x, y, 0, T, Ti);
    // C^3 = prod y/x, so dC = (C/3)(sum dv - sum du) on the chosen branch.
    std::vector<Complex> cg(2 * n);
    for (int i = 0; i < n; ++i) {
        cg[i] = -C / 3.0;
        cg[n + i] = C / 3.0;
    }
    Dual Cd(C, cg);
    auto trT = T.trace(), trTi = Ti.trace();
    out.grad.resize(2 * q + 2, 2 * n);
    for (int j = 0; j <= q; ++j) {
        Dual I = Cd * trTi.coeff(q - j);
        Dual J = trT.coeff(j - q) / Cd;
        out.grad.row(j) = grad_row(I, 2 * n).transpose();
        out.grad.row(q + 1 + j) = grad_row(J, 2 * n).transpose();
    }
    return out;
}

CMatrix invariant_gradients_fd(const XYCoords& xy, double h) {
    const int n = xy.n(), q = n / 2;
    const Complex C0 = rescaling_constant(monodromy_T(xy));
    CMatrix g(2 * q + 2, 2 * n);
    for (int col = 0; col < 2 * n; ++col) {
        std::array<SpectralInvariants, 2> side;
        for (int s = 0; s < 2; ++s) {
            double step = s == 0 ? h : -h;
            XYCoords p = xy;
            if (col < n)
                p.x[col] *= std::exp(step);
            else
                p.y[col - n] *= std::exp(step);
            // Same branch of C as at the base point.
            Complex C = C0 * std::exp((col < n ? -step : step) / 3.0);
            side[s] = spectral_invariants(p, C);
        }
        for (int j = 0; j <= q; ++j) {
            g(j, col) = (side[0].I[j] - side[1].I[j]) / (2.0 * h);
            g(q + 1 + j, col) = (side[0].J[j] - side[1].J[j]) / (2.0 * h);
        }
    }
    return g;
}

double involution_check(const XYCoords& xy) {
    InvariantGradients g = invariant_gradients(xy);
    PoissonTensor P = poisson_tensor(xy.n());
    CMatrix B = g.grad * P.P * g.grad.transpose();
    return B.cwiseAbs().maxCoeff();
}

int numeric_rank(const CMatrix& m, double rel_tol) {
    Eigen::JacobiSVD<CMatrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > rel_tol * s(0)) ++r;
    return r;
}

namespace {

// Gradients (rows) of the Casimirs built from the invariant gradients.
CMatrix casimir_gradients(const InvariantGradients& g, int n) {
    const int q = n / 2;
    const auto& v = g.values;
    auto gI = [&](int j) { return CVector(g.grad.row(j).transpose()); };
    auto gJ = [&](int j) { return CVector(g.grad.row(q + 1 + j).transpose()); };
    Casimirs c = casimir_map(v);
    std::vector<CVector> rows;
    rows.push_back(c.E_n * (gJ(q) / v.J[q] - 2.0 * gI(q) / v.I[q]));
    rows.push_back(c.O_n * (gI(q) / v.I[q] - 2.0 * gJ(q) / v.J[q]));
    if (n % 2 == 0) {
        rows.push_back(*c.E_half * (gI(0) / v.I[0] - gI(q) / v.I[q]));
        rows.push_back(*c.O_half * (gJ(0) / v.J[0] - gJ(q) / v.J[q]));
    }
    CMatrix out(rows.size(), 2 * n);
    for (size_t r = 0; r < rows.size(); ++r) out.row(r) = rows[r].transpose();
    return out;
}

}  // namespace

CasimirCheck casimir_check(const XYCoords& xy) {
    const int n = xy.n();
    InvariantGradients g = invariant_gradients(xy);
    PoissonTensor P = poisson_tensor(n);
    CMatrix cg = casimir_gradients(g, n);
    CasimirCheck out;
    out.residual = (P.P * cg.transpose()).cwiseAbs().maxCoeff();
    out.kernel_dim = 2 * n - numeric_rank(P.P);
    out.casimir_rank = numeric_rank(cg);
    return out;
}

DualMap pentagram_dual_map() {
    return [](const std::vector<Dual>& x, const std::vector<Dual>& y, std::vector<Dual>& tx,
              std::vector<Dual>& ty) { pentagram_xy_raw(x, y, tx, ty); };
}

CMatrix log_jacobian(const XYCoords& xy, const DualMap& map) {
    // Evaluate once in plain arithmetic so undefined points raise MapUndefined.
    pentagram_xy(xy);
    const int n = xy.n();
    std::vector<Dual> x, y, tx, ty;
    seed_log_variables(xy, x, y);
    map(x, y, tx, ty);
    CMatrix J(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        J.row(i) = (grad_row(tx[i], 2 * n) / tx[i].value()).transpose();
        J.row(n + i) = (grad_row(ty[i], 2 * n) / ty[i].value()).transpose();
    }
    return J;
}

double bracket_invariance_check(const XYCoords& xy, const DualMap& map) {
    CMatrix J = log_jacobian(xy, map);
    CMatrix P = poisson_tensor(xy.n()).P;
    return (J * P * J.transpose() - P).cwiseAbs().maxCoeff();
}

TwoForm omega0_matrix(int n) {
    if (n < 4) throw Error(ErrorKind::InvalidInput, "omega0 needs n >= 4");
    TwoForm w{n, n / 2, CMatrix::Zero(2 * n, 2 * n)};
    for (int j = 0; j < w.q; ++j)
        for (int k = 0; k <= j; ++k) {
            int r = wrap(2 * j + 1, n), c = wrap(2 * k, n);
            w.A(r, c) += 1.0;
            w.A(c, r) -= 1.0;
            w.A(n + r, n + c) -= 1.0;
            w.A(n + c, n + r) += 1.0;
        }
    return w;
}

LeafFrame leaf_frame(const XYCoords& xy) {
    const int n = xy.n(), q = n / 2;
    InvariantGradients g = invariant_gradients(xy);
    std::vector<int> rows = {q, 2 * q + 1};  // I_q, J_q
    if (n % 2 == 0) {
        rows.push_back(0);      // I_0
        rows.push_back(q + 1);  // J_0
    }
    CMatrix G(rows.size(), 2 * n);
    for (size_t r = 0; r < rows.size(); ++r) G.row(r) = g.grad.row(rows[r]);
    Eigen::JacobiSVD<CMatrix> svd(G, Eigen::ComputeFullV);
    const int rank = numeric_rank(G);
    if (rank != static_cast<int>(rows.size()))
        throw Error(ErrorKind::NonGeneric, "leaf constraints are dependent at this point");
    return LeafFrame{svd.matrixV().rightCols(2 * n - rank)};
}

OnLeafInverse onleaf_inverse_check(const XYCoords& xy) {
    const int n = xy.n();
    CMatrix P = poisson_tensor(n).P;
    CMatrix A = omega0_matrix(n).A;
    LeafFrame f = leaf_frame(xy);
    OnLeafInverse out;
    out.leaf_residual = (P * A * f.basis - f.basis).cwiseAbs().maxCoeff();
    out.pap_residual = (P * A * P - P).cwiseAbs().maxCoeff();
    return out;
}

OmegaInvariance omega_invariance_check(const XYCoords& xy, const DualMap& map) {
    const int n = xy.n();
    CMatrix J = log_jacobian(xy, map);
    CMatrix A = omega0_matrix(n).A;
    CMatrix D = J.transpose() * A * J - A;
    CMatrix B = leaf_frame(xy).basis;
    OmegaInvariance out;
    out.leaf_residual = (B.transpose() * D * B).cwiseAbs().maxCoeff();
    out.one_sided_residual = (D * B).cwiseAbs().maxCoeff();
    out.unprojected_residual = D.cwiseAbs().maxCoeff();
    return out;
}

int omega_leaf_rank(const XYCoords& xy) {
    CMatrix B = leaf_frame(xy).basis;
    return numeric_rank(B.transpose() * omega0_matrix(xy.n()).A * B);
}

}  // namespace pentagram
