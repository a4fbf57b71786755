#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phl/ints.hpp"

namespace phl {

struct DeltaPrime {
    Rat value;
    Int soluble_classes;  // soluble coefficient classes mod p^xi (brute path)
    Int total_classes;    // p^{xi*s}
    bool closed_form;     // true when the large-p formula was used
};

// density of coefficient tuples mod p^xi, not all divisible by p, whose
// congruence is unit-soluble; closed form when p > 2, p coprime to k and
// p >= p0(s,k), exact class counting otherwise (s >= 4)
DeltaPrime delta_prime_p(int s, long long k, long long p);
Rat delta_prime_closed(int s, long long k, long long p);
DeltaPrime delta_prime_brute(int s, long long k, long long p);

// delta_p = delta'_p (1 - p^{-s})^{-1}
Rat delta_p(int s, long long k, long long p);
// the explicit large-p formula for delta_p
Rat delta_closed_formula(int s, long long k, long long p);

// sum_{m=0}^{s-3} C(s,m)(1-1/p)^{s-m}p^{-m}, the lower-bound Euler factor
Rat delta_tilde_p(int s, long long p);

Rat delta_infinity(int s);

struct DensityTable {
    int s = 0;
    long long k = 0;
    long long prime_bound = 0;
    struct Row {
        Rat delta_prime;
        Rat delta;
        std::string method;  // "closed" or "brute"
    };
    std::map<long long, Row> per_prime;
    Rat delta_inf;
    double global_value = 0;
    double global_tail_estimate = 0;
};

DensityTable global_density(int s, long long k, long long prime_bound);
void write_density_csv(const DensityTable& t, const std::string& path);

// exhaustive membership count over |a| <= A (s >= 3 for the membership test)
struct EmpiricalCount {
    Int member_count;
    Int total_count;  // (2A)^s
};
EmpiricalCount empirical_cprime_density(int s, long long k, long long A);

struct CoprimeSpec {
    int s = 0;       // tuple length
    int arity = 2;   // subset size ("k" of the counting lemma)
    long long r = 1; // exemption modulus
    std::vector<long long> q;  // per-coordinate congruence moduli (each q_i | r)
    std::vector<long long> b;  // per-coordinate residues
    std::vector<long long> u;  // u_1..u_{arity-1}; r,u_i pairwise coprime

    void validate() const;
};

Int count_coprime_tuples(const CoprimeSpec& spec, long long n);

struct BracketedValue {
    double value = 0;
    double lower = 0;
    double upper = 0;
    long long prime_bound = 0;
};

// A_{s,arity,r} Euler product, truncated with a monotone tail bracket
BracketedValue coprime_density_A(int s, int arity, long long r, long long prime_bound = 100000);

// single Euler factor of A_{s,arity,r} at p (exact)
Rat coprime_factor_A(int s, int arity, long long p);

// f_{s,arity,r,i}(u) and alpha_{s,i}(d) of the coprime-density machinery
Rat coprime_f(int s, int arity, long long r, int i, long long u);
Rat coprime_alpha(int s, int i, long long d);

}  // namespace phl
