#include "pentagram/spectral.hpp"

#include <algorithm>

namespace pentagram {

namespace {

// Coefficients of `p` at exponents sign*(0..q) shifted by `offset`, after
// checking that nothing significant lies outside that window.
std::vector<Complex> read_window(const LaurentPolyC& p, int lo, int hi, const char* what) {
    const double scale = std::max(p.max_abs_coefficient(), 1e-300);
    for (const auto& [e, c] : p.terms())
        if ((e < lo || e > hi) && std::abs(c) > 1e-10 * scale)
            throw Error(ErrorKind::SupportMismatch,
                        std::string(what) + " has a coefficient at z^" + std::to_string(e));
    std::vector<Complex> out;
    for (int e = lo; e <= hi; ++e) out.push_back(p.coeff(e));
    return out;
}

bool is_scalar_matrix(const Mat3& m, Complex& value) {
    value = m.trace() / 3.0;
    double scale = m.cwiseAbs().maxCoeff();
    return (m - value * Mat3::Identity()).cwiseAbs().maxCoeff() <= 1e-8 * scale;
}

}  // namespace

Complex rescaling_constant(const Monodromy& mono) {
    Mat3 t1 = mono.T.evaluate(1.0);
    Complex c_cubed = t1.determinant();  // z^n det T is constant
    Complex c = principal_cbrt(c_cubed);
    Complex scalar;
    if (is_scalar_matrix(t1, scalar)) {
        // Closed polygon: T(1) = C Id, pick the cube root that matches it.
        Complex best = c;
        for (int k = 1; k < 3; ++k) {
            Complex cand = c * std::pow(omega3(), k);
            if (std::abs(cand - scalar) < std::abs(best - scalar)) best = cand;
        }
        c = best;
    }
    return c;
}

SpectralInvariants invariants_from_monodromy(const Monodromy& mono, std::optional<Complex> C) {
    SpectralInvariants inv;
    inv.n = mono.n;
    inv.q = mono.n / 2;
    const int q = inv.q;
    // tr T = sum J_j z^{j-q}  -> exponents -q..0 map to j = 0..q.
    inv.J = read_window(mono.T.trace(), -q, 0, "tr T");
    // tr T^{-1} = sum I_j z^{q-j} -> exponent e = q - j.
    std::vector<Complex> ti = read_window(mono.T_inv.trace(), 0, q, "tr T^{-1}");
    inv.I.assign(q + 1, 0.0);
    for (int j = 0; j <= q; ++j) inv.I[j] = ti[q - j];

    if (mono.kind == LaxKind::XY) {
        inv.C = C ? *C : rescaling_constant(mono);
        for (auto& v : inv.I) v *= inv.C;
        for (auto& v : inv.J) v /= inv.C;
    } else {
        inv.C = 1.0;
    }
    return inv;
}

SpectralInvariants spectral_invariants(const ABCoords& ab) { return invariants_from_monodromy(monodromy_T(ab)); }

SpectralInvariants spectral_invariants(const XYCoords& xy, std::optional<Complex> C) {
    return invariants_from_monodromy(monodromy_T(xy), C);
}

double invariants_distance(const SpectralInvariants& p, const SpectralInvariants& q) {
    if (p.n != q.n) return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (int j = 0; j <= p.q; ++j) {
        m = std::max(m, std::abs(p.I[j] - q.I[j]) / (1.0 + std::abs(q.I[j])));
        m = std::max(m, std::abs(p.J[j] - q.J[j]) / (1.0 + std::abs(q.J[j])));
    }
    return m;
}

double conservation_drift(std::span<const SpectralInvariants> seq) {
    double m = 0.0;
    for (const auto& s : seq) m = std::max(m, invariants_distance(s, seq.front()));
    return m;
}

double conservation_drift(std::span<const XYCoords> orbit) {
    // C^3 is conserved; holding C fixed avoids jumping between cube roots.
    std::vector<SpectralInvariants> seq;
    for (const auto& s : orbit)
        seq.push_back(seq.empty() ? spectral_invariants(s) : spectral_invariants(s, seq.front().C));
    return conservation_drift(std::span<const SpectralInvariants>(seq));
}

double conservation_drift(std::span<const ABCoords> orbit) {
    std::vector<SpectralInvariants> seq;
    for (const auto& s : orbit) seq.push_back(spectral_invariants(s));
    return conservation_drift(std::span<const SpectralInvariants>(seq));
}

namespace {

// J(z) = sum J_j z^{j-q}, I(z) = sum I_j z^{q-j} and their z-derivatives.
Complex J_of(const SpectralInvariants& s, Complex z, bool derivative = false) {
    Complex acc = 0.0;
    for (int j = 0; j <= s.q; ++j) {
        int e = j - s.q;
        acc += derivative ? s.J[j] * double(e) * std::pow(z, e - 1) : s.J[j] * std::pow(z, e);
    }
    return acc;
}

Complex I_of(const SpectralInvariants& s, Complex z, bool derivative = false) {
    Complex acc = 0.0;
    for (int j = 0; j <= s.q; ++j) {
        int e = s.q - j;
        if (derivative)
            acc += e == 0 ? Complex(0.0) : s.I[j] * double(e) * std::pow(z, e - 1);
        else
            acc += s.I[j] * std::pow(z, e);
    }
    return acc;
}

void require_nonzero_z(Complex z) {
    if (z == Complex(0.0)) throw Error(ErrorKind::ZeroZ, "the spectral curve is evaluated at z != 0");
}

}  // namespace

Complex curve_eval(const SpectralInvariants& s, Complex k, Complex z) {
    require_nonzero_z(z);
    Complex zn = std::pow(z, -s.n);
    return k * k * k - k * k * J_of(s, z) + k * I_of(s, z) * zn - zn;
}

Complex curve_dk(const SpectralInvariants& s, Complex k, Complex z) {
    require_nonzero_z(z);
    Complex zn = std::pow(z, -s.n);
    return 3.0 * k * k - 2.0 * k * J_of(s, z) + I_of(s, z) * zn;
}

Complex curve_dz(const SpectralInvariants& s, Complex k, Complex z) {
    require_nonzero_z(z);
    Complex zn = std::pow(z, -s.n);
    Complex dzn = -double(s.n) * std::pow(z, -s.n - 1);
    return -k * k * J_of(s, z, true) + k * (I_of(s, z, true) * zn + I_of(s, z) * dzn) - dzn;
}

std::array<Complex, 5> closed_polygon_relations(const SpectralInvariants& s) {
    Complex sI = 0.0, sJ = 0.0, jI = 0.0, jJ = 0.0, j2 = 0.0;
    for (int j = 0; j <= s.q; ++j) {
        sI += s.I[j];
        sJ += s.J[j];
        jI += double(j) * s.I[j];
        jJ += double(j) * s.J[j];
        j2 += double(j * j) * (s.I[j] - s.J[j]);
    }
    const double target = 3.0 * s.q - s.n;
    return {sI - 3.0, sJ - 3.0, jI - target, jJ - target, j2};
}

double closed_relations_residual(const SpectralInvariants& s) {
    double m = 0.0;
    for (Complex r : closed_polygon_relations(s)) m = std::max(m, std::abs(r));
    return m;
}

Casimirs casimir_map(const SpectralInvariants& s) {
    const Complex Iq = s.I[s.q], Jq = s.J[s.q];
    if (Iq == Complex(0.0) || Jq == Complex(0.0))
        throw Error(ErrorKind::DivisionByZero, "Casimirs need I_q, J_q != 0");
    const double sign_n = s.n % 2 == 0 ? 1.0 : -1.0;
    const double sign_q = s.q % 2 == 0 ? 1.0 : -1.0;
    Casimirs c;
    c.E_n = sign_n * Jq / (Iq * Iq);
    c.O_n = Iq / (Jq * Jq);
    if (s.n % 2 == 0) {
        c.E_half = sign_q * s.I[0] / Iq;
        c.O_half = sign_q * s.J[0] / Jq;
    }
    return c;
}

}  // namespace pentagram
