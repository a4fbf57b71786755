#pragma once

#include <vector>

#include "phl/ints.hpp"

namespace phl {

// Exact counting of unit solutions of sum_j a_j x_j^k == target (mod p^n),
// shared by the exponential-sum, local-density and coefficient-density paths.

// histogram over units x mod p^n of a*x^k, length p^n; a taken mod p^n
std::vector<long long> unit_power_histogram(long long p, int n, long long a, long long k);

// M: number of tuples (x_1..x_s) of units mod p^n with sum a_j x_j^k == target.
// Coefficients may be 0 mod p^n. O(s * p^{2n}) histogram convolution.
Int count_unit_solutions_mod(std::span<const long long> a, long long k, long long p, int n,
                             long long target = 0);

// existence-only variant (bitset sumset reachability)
bool units_reachable(std::span<const long long> a, long long k, long long p, int n,
                     long long target = 0);

// p^n with the histogram budget check
long long checked_prime_power(long long p, int n);

}  // namespace phl
