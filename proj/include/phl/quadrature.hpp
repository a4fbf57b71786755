#pragma once

#include <complex>
#include <functional>

namespace phl {

// adaptive Gauss-Kronrod 15(7) on [a, b]; refines worst panels until the
// summed error estimate is below tol or the eval cap is hit
struct QuadResult {
    double value;
    double error_estimate;
    long long evals;
};

// seed_h bounds the initial panel length (oscillation scale); panels past the
// seed cap grow geometrically and rely on adaptive refinement
QuadResult adaptive_gk15(const std::function<double(double)>& f, double a, double b, double tol,
                         long long max_evals = 2'000'000, double seed_h = 0);

// v(beta) = int_0^1 e(beta x^k) dx, e(t) = exp(2 pi i t); k >= 1
std::complex<double> v_beta(double beta, long long k);

}  // namespace phl
