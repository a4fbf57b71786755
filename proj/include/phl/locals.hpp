#pragma once

#include <map>
#include <optional>
#include <vector>

#include "phl/ints.hpp"

namespace phl {

struct Equation {
    long long k;
    std::vector<long long> a;

    Equation(long long k_, std::vector<long long> a_) : k(k_), a(std::move(a_)) {
        if (k < 2) throw std::invalid_argument("Equation: k must be >= 2");
        if (a.size() < 2) throw std::invalid_argument("Equation: need at least 2 coefficients");
        for (long long aj : a)
            if (aj == 0) throw std::invalid_argument("Equation: zero coefficient");
    }

    int s() const { return static_cast<int>(a.size()); }
    long long max_abs() const {
        long long m = 0;
        for (long long aj : a) m = std::max(m, std::abs(aj));
        return m;
    }
    bool mixed_signs() const {
        bool pos = false, neg = false;
        for (long long aj : a) (aj > 0 ? pos : neg) = true;
        return pos && neg;
    }
};

struct PrimeLocalData {
    bool soluble;
    Rat chi;
    int check_level;  // xi(p)+lambda(p) used for the finite decision
};

struct LocalReport {
    std::map<long long, PrimeLocalData> per_prime;
    std::optional<long long> blocker;  // smallest prime with chi_p = 0
    bool real_positive = false;
    bool member = false;
    std::vector<long long> checked_primes;
};

// M_a(p^n): unit solutions of the congruence mod p^n, exact
Int count_unit_solutions(const Equation& eq, long long p, int n);

// exact p-adic density chi_p(a); finite evaluation at level xi(p) after the
// lambda(p) reduction chi_p(a) = p^lambda chi_p(a / p^lambda)
Rat chi_p(const Equation& eq, long long p);

bool is_zp_soluble(const Equation& eq, long long p);

// smallest prime with (p-1)^{s-1} p^{-s/2} > r^{s-1}; exact integer comparison
long long p0(int s, long long r);

// {p < p0(s,k)} ∪ {p | k} ∪ {p dividing at least s-2 coefficients}: outside
// this set chi_p > 0 is guaranteed, so membership is decidable on it (s >= 3)
std::vector<long long> relevant_primes(const Equation& eq);

LocalReport membership_Cprime(const Equation& eq);

}  // namespace phl
