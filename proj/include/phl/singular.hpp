#pragma once

#include <map>
#include <string>

#include "phl/locals.hpp"

namespace phl {

struct SeriesOptions {
    long long prime_bound = 100;     // P: primes multiplied into the value
    int window_factor = 4;           // exact |chi_p - 1| window up to P' = max(window_factor*P, 200)
    long long analytic_cutoff = 100000;  // numeric prime sum before the integral-comparison bound
};

struct SingularValue {
    double value = 0;
    double tail_bound = 0;  // certified bound on the omitted Euler-factor mass
    std::map<long long, Rat> exact_factors;
    std::string truncation;
};

// Euler product over exact chi_p for p <= P plus every relevant prime (s >= 5)
SingularValue singular_series(const Equation& eq, const SeriesOptions& opt = {});

// sum_{q <= Q} T_a(q) on the complex path, with a certified bound on the
// omitted q-tail; dual route to the product above
struct SeriesSum {
    double value = 0;
    double tail_bound = 0;
    long long q_bound = 0;
};
SeriesSum singular_series_qsum(const Equation& eq, long long q_bound, const SeriesOptions& opt = {});

struct QuadratureOptions {
    double tol = 1e-6;
    double range_override = 0;  // force [-R, R] when > 0
};

struct SingularIntegral {
    double value = 0;
    double tail_bound = 0;  // analytic [-R,R] truncation + quadrature estimate
    bool mixed_signs = false;  // exact sign verdict: J != 0 iff true
    double range = 0;
};

// J_a = int prod_j v(a_j beta) d beta by adaptive quadrature (s >= k+1)
SingularIntegral singular_integral(const Equation& eq, const QuadratureOptions& opt = {});

struct Prediction {
    double value = 0;
    double error_bound = 0;
    SingularValue series;
    SingularIntegral integral;
};

// S_a * J_a * B^{s-k} with the propagated interval (s >= 5)
Prediction predicted_count(const Equation& eq, long long B, const SeriesOptions& sopt = {},
                           const QuadratureOptions& qopt = {});

}  // namespace phl
