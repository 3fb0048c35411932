#pragma once

#include <span>
#include <vector>

#include "pentagram/types.hpp"

namespace pentagram {

struct RootOptions {
    int max_iterations = 500;
    double tolerance = 1e-13;  // relative correction size at convergence
};

struct RootResult {
    std::vector<Complex> roots;
    int iterations = 0;
    bool converged = false;
};

// All roots of sum_k c[k] z^k (ascending coefficients, c.back() != 0) by
// Aberth-Ehrlich simultaneous iteration followed by Newton polishing.
RootResult aberth_roots(std::span<const Complex> coeffs, const RootOptions& opt = {});

Complex horner(std::span<const Complex> coeffs, Complex z);

struct RootCluster {
    Complex center;
    int multiplicity = 1;
};

// Groups roots closer than rel_tol * max(|r_i|, |r_j|).
std::vector<RootCluster> cluster_roots(std::span<const Complex> roots, double rel_tol = 1e-7);

// Divides (z - r)^k out of the polynomial by synthetic division.
std::vector<Complex> deflate(std::vector<Complex> coeffs, Complex r, int k = 1);

}  // namespace pentagram
