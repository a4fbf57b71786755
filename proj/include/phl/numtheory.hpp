#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "phl/ints.hpp"

namespace phl {

struct PrimeFactorization {
    // (prime, exponent), primes strictly increasing, exponents >= 1.
    // Empty iff |n| == 1.
    std::vector<std::pair<long long, int>> factors;

    Int reconstruct() const {
        Int r = 1;
        for (auto [p, e] : factors) r *= ipow(p, static_cast<unsigned long>(e));
        return r;
    }
};

// Deterministic: trial division over the sieve, Pollard rho past its square.
PrimeFactorization factorize(long long n);

bool is_prime(unsigned long long n);
long long next_prime(long long n);  // smallest prime > n
std::vector<long long> primes_up_to(long long n);
long long nth_prime(int i);  // 0-based: nth_prime(0) == 2

// exact power of p dividing n (n != 0)
int valuation(long long n, long long p);
int valuation(const Int& n, long long p);

// xi(p) = nu(p)+2 for p=2 else nu(p)+1, where p^nu(p) || k
int xi(long long p, long long k);

// min over the coefficients of the p-adic valuation
int lambda_min(std::span<const long long> a, long long p);
int lambda_min(std::span<const Int> a, long long p);

struct LocalExponents {
    long long p;
    int nu;      // exact power of p in k
    int xi;      // lifting level: nu+2 at p=2, nu+1 otherwise
    int lambda;  // min p-adic valuation over the coefficients
};

LocalExponents local_exponents(long long p, long long k, std::span<const long long> a);

// {h^k mod p^n : h a unit mod p^n}, sorted
std::vector<long long> kth_power_residues(long long p, int n, long long k);

inline long long euler_phi_pp(long long p, int n) {
    // phi(p^n); phi(p^0) = 1
    if (n == 0) return 1;
    long long r = p - 1;
    for (int i = 1; i < n; ++i) r *= p;
    return r;
}

}  // namespace phl
