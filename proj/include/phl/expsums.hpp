#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "phl/ints.hpp"

namespace phl {

struct ExpSumValue {
    std::complex<double> value;
    std::optional<Rat> exact;  // present when an exact counting evaluation exists
};

// W(q,r) = sum over units h mod q of e_q(r h^k)
ExpSumValue weyl_sum_W(long long q, long long r, long long k);

// T_a(q) = phi(q)^{-s} sum over units r of prod_j W(q, a_j r).
// For q = p^n the exact rational (telescoped unit-solution counts) is also
// computed and must agree with the complex path within 1e-9.
ExpSumValue local_factor_T(std::span<const long long> a, long long q, long long k);

// cached table of W(q, m) for all m in [0, q); shared across calls per (q, k)
const std::vector<std::complex<double>>& weyl_table(long long q, long long k);

// exact rational T_a(p^n) via M-counts (0 for n > xi(p)+lambda(p))
Rat local_factor_T_exact(std::span<const long long> a, long long p, int n, long long k);

}  // namespace phl
