#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <limits>
#include <numeric>

#include "pentagram/spectral.hpp"

namespace pentagram {

bool is_closed(const VertexChain& chain, double tol) {
    const Mat3& M = chain.monodromy();
    Complex s = M.trace() / 3.0;
    if (std::abs(s) == 0.0) return false;
    Mat3 N = M / s;
    return (N - Mat3::Identity()).cwiseAbs().maxCoeff() < tol;
}

namespace {

struct Eigen3 {
    std::array<Complex, 3> k;
    std::array<Vec3, 3> v;  // sum-normalized
};

// Eigenpairs ordered by |k| then arg k, with a separation check.
Eigen3 sorted_eigen(const Mat3& T) {
    Eigen::ComplexEigenSolver<Mat3> es(T);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::Degenerate, "eigen decomposition failed");
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        Complex ka = es.eigenvalues()(a), kb = es.eigenvalues()(b);
        if (std::abs(ka) != std::abs(kb)) return std::abs(ka) < std::abs(kb);
        return std::arg(ka) < std::arg(kb);
    });
    Eigen3 out;
    double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    for (int i = 0; i < 3; ++i) {
        out.k[i] = es.eigenvalues()(idx[i]);
        Vec3 v = es.eigenvectors().col(idx[i]);
        Complex sum = v.sum();
        if (std::abs(sum) < 1e-12 * v.norm())
            throw Error(ErrorKind::Degenerate, "eigenvector with zero component sum");
        out.v[i] = v / sum;
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(out.k[i] - out.k[j]) < 1e-8 * scale)
                throw Error(ErrorKind::NearBranchPoint, "eigenvalues of T(z) nearly coincide");
    return out;
}

}  // namespace

FloquetBloch floquet_bloch(const Mat3& T, Complex z, int branch) {
    if (branch < 0 || branch > 2) throw Error(ErrorKind::InvalidInput, "branch must be 0, 1 or 2");
    Eigen3 e = sorted_eigen(T);
    Mat3 V;
    V << e.v[0], e.v[1], e.v[2];
    // Rows of V^{-1} are the dual covectors: psi*_i . psi_j = delta_ij.
    Mat3 W = V.inverse();
    return FloquetBloch{z, e.k[branch], e.v[branch], W.row(branch)};
}

Complex F_function(const Mat3& T, std::array<int, 3> order) {
    Eigen3 e = sorted_eigen(T);
    Mat3 V;
    V << e.v[order[0]], e.v[order[1]], e.v[order[2]];
    Complex d = V.determinant();
    return d * d;
}

namespace {

constexpr double kDirection = 0.37;

Vec3 dominant_eigenvector(const Mat3& m) {
    Eigen::ComplexEigenSolver<Mat3> es(m);
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(best))) best = i;
    return es.eigenvectors().col(best);
}

// The two eigenvectors with the largest |eigenvalue|.
std::array<Vec3, 2> top_two_eigenvectors(const Mat3& m) {
    Eigen::ComplexEigenSolver<Mat3> es(m);
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return std::abs(es.eigenvalues()(a)) > std::abs(es.eigenvalues()(b));
    });
    return {es.eigenvectors().col(idx[0]), es.eigenvectors().col(idx[1])};
}

// z^{-e} M(z) with e the top exponent, summed term by term so that a large z
// leaves the entries of order one. An infinite z gives the top coefficient.
Mat3 evaluate_scaled(const LaurentMatrix& m, Complex z) {
    const int top = m.max_exponent();
    const bool at_infinity = std::isinf(z.real());
    Mat3 out = Mat3::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (const auto& [e, c] : m(i, j).terms()) {
                if (e == top)
                    out(i, j) += c;
                else if (!at_infinity)
                    out(i, j) += c * std::pow(z, e - top);
            }
    return out;
}

double rel(Complex est, Complex expected) {
    return std::abs(est - expected) / std::max(std::abs(expected), 1.0);
}

}  // namespace

MarkedPointLimits marked_point_limits(const ABCoords& ab) {
    ab.require_valid();
    const int n = ab.n();
    Monodromy mono = monodromy_T(ab, 0);
    const Complex dir = std::polar(1.0, kDirection);
    MarkedPointLimits rep;
    const auto [nearest, farthest] = branch_radii(spectral_invariants(ab));
    auto add = [&](const std::string& label, Complex expected, Complex est) {
        rep.checks.push_back({label, expected, est, rel(est, expected)});
    };

    // O_1: dominant eigenvector of T^{-1} (eigenvalue 1/k -> I_q) as z -> 0.
    {
        std::vector<Complex> h, r31, bar2, star0, star1, star2;
        for (double r : radii_toward_zero(nearest, 1e-3)) {
            Complex z = r * dir;
            Mat3 Ti = mono.T_inv.evaluate(z);
            Vec3 psi = dominant_eigenvector(Ti);
            Vec3 bar = psi / psi(0);
            Covec3 star = dominant_eigenvector(Ti.transpose()).transpose();
            star /= (star * bar)(0, 0);
            h.push_back(z);
            r31.push_back(bar(2));
            bar2.push_back(bar(1));
            star0.push_back(star(0));
            star1.push_back(star(1));
            star2.push_back(star(2));
        }
        add("a_0 from O1 (psi_3/psi_1)", ab.a[0], extrapolate_to_zero(h, r31));
        add("psi_bar_2(O1) = 1/a_1 + b_0", 1.0 / ab.a[1] + ab.b[0], extrapolate_to_zero(h, bar2));
        add("psi*_1(O1) = 0", 0.0, extrapolate_to_zero(h, star0));
        add("psi*_2(O1) = 0", 0.0, extrapolate_to_zero(h, star1));
        add("psi*_3(O1) = 1/a_0", 1.0 / ab.a[0], extrapolate_to_zero(h, star2));
    }

    // W_1: dominant eigenvector of T (k -> J_q) as z -> infinity.
    {
        std::vector<Complex> h, v;
        for (double r : radii_toward_infinity(farthest, 1e3)) {
            Complex z = r * dir;
            Vec3 psi = dominant_eigenvector(mono.T.evaluate(z));
            h.push_back(1.0 / z);
            v.push_back(-psi(0) / psi(2));
        }
        add("b_{n-1} from W1 (-psi_1/psi_3)", ab.b[n - 1], extrapolate_to_zero(h, v));
    }

    // W_2: among the two sheets with k -> 0 at infinity. The two leading
    // eigenvalues can be close, so the sheets separate only at large |z|.
    {
        std::vector<Complex> h, v;
        const std::array<double, 3> radii = radii_toward_infinity(farthest, 1e6);
        if (n % 2 == 0) {
            // At z = infinity the scaled T^{-1} is its top coefficient S0. On W_3 the
            // first eigenvector component of S0 vanishes; on W_2 it does not. The W_2
            // eigenvalue of S0 then identifies the sheet at every finite sample.
            Eigen::ComplexEigenSolver<Mat3> es0(evaluate_scaled(mono.T_inv, std::numeric_limits<double>::infinity()));
            std::array<int, 3> idx = {0, 1, 2};
            std::sort(idx.begin(), idx.end(), [&](int a, int b) {
                return std::abs(es0.eigenvalues()(a)) > std::abs(es0.eigenvalues()(b));
            });
            auto first_share = [&](int i) {
                Vec3 c = es0.eigenvectors().col(i);
                return std::abs(c(0)) / c.norm();
            };
            double s0 = first_share(idx[0]), s1 = first_share(idx[1]);
            if (std::max(s0, s1) < 1e4 * std::min(s0, s1) ||
                std::abs(es0.eigenvalues()(idx[0]) - es0.eigenvalues()(idx[1])) <
                    1e-8 * std::abs(es0.eigenvalues()(idx[0])))
                throw Error(ErrorKind::SheetTrackingFailed, "cannot separate W_2 from W_3");
            const Complex mu2 = es0.eigenvalues()(s0 > s1 ? idx[0] : idx[1]);
            for (double r : radii) {
                Complex z = r * dir;
                Eigen::ComplexEigenSolver<Mat3> es(evaluate_scaled(mono.T_inv, z));
                int best = 0;
                for (int i = 1; i < 3; ++i)
                    if (std::abs(es.eigenvalues()(i) - mu2) < std::abs(es.eigenvalues()(best) - mu2)) best = i;
                Vec3 w2 = es.eigenvectors().col(best);
                h.push_back(1.0 / z);
                v.push_back(w2(1) / w2(0));
            }
        } else {
            // The two sheets meet at the branch point W_2; averaging them
            // removes the odd powers of z^{-1/2}.
            for (double r : radii) {
                Complex z = r * dir;
                auto two = top_two_eigenvectors(evaluate_scaled(mono.T_inv, z));
                h.push_back(1.0 / z);
                v.push_back(0.5 * (two[0](1) / two[0](0) + two[1](1) / two[1](0)));
            }
        }
        add("b_0 from W2 (psi_2/psi_1)", ab.b[0], extrapolate_to_zero(h, v));
    }

    for (const auto& c : rep.checks) rep.max_residual = std::max(rep.max_residual, c.residual);
    return rep;
}

}  // namespace pentagram
