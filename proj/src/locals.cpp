#include "phl/locals.hpp"

#include <algorithm>
#include <set>

#include "phl/modcount.hpp"
#include "phl/numtheory.hpp"

namespace phl {

Int count_unit_solutions(const Equation& eq, long long p, int n) {
    if (n < 1) throw std::invalid_argument("count_unit_solutions: level must be >= 1");
    return count_unit_solutions_mod(eq.a, eq.k, p, n);
}

namespace {

std::vector<long long> reduce_by_lambda(const Equation& eq, long long p, int lambda) {
    std::vector<long long> b = eq.a;
    long long pl = 1;
    for (int i = 0; i < lambda; ++i) pl *= p;
    for (auto& bj : b) bj /= pl;
    return b;
}

}  // namespace

Rat chi_p(const Equation& eq, long long p) {
    int lambda = lambda_min(std::span<const long long>(eq.a), p);
    std::vector<long long> b = reduce_by_lambda(eq, p, lambda);
    int level = xi(p, eq.k);
    Int m = count_unit_solutions_mod(b, eq.k, p, level);
    Int num = ipow(p, static_cast<unsigned long>(level)) * m;
    Int den = ipow(euler_phi_pp(p, level), static_cast<unsigned long>(eq.a.size()));
    Rat chi_b = make_rat(num, den);
    return make_rat(ipow(p, static_cast<unsigned long>(lambda)), 1) * chi_b;
}

bool is_zp_soluble(const Equation& eq, long long p) {
    int lambda = lambda_min(std::span<const long long>(eq.a), p);
    std::vector<long long> b = reduce_by_lambda(eq, p, lambda);
    return units_reachable(b, eq.k, p, xi(p, eq.k));
}

long long p0(int s, long long r) {
    if (s < 3) throw std::invalid_argument("p0: s must be >= 3");
    if (r < 1) throw std::invalid_argument("p0: r must be >= 1");
    // (p-1)^{s-1} p^{-s/2} > r^{s-1}  <=>  (p-1)^{2(s-1)} > r^{2(s-1)} p^s
    Int rhs_base = ipow(r, 2ul * static_cast<unsigned long>(s - 1));
    for (long long p = 2;; p = next_prime(p)) {
        Int lhs = ipow(p - 1, 2ul * static_cast<unsigned long>(s - 1));
        Int rhs = rhs_base * ipow(p, static_cast<unsigned long>(s));
        if (lhs > rhs) return p;
    }
}

std::vector<long long> relevant_primes(const Equation& eq) {
    if (eq.s() < 3) throw std::invalid_argument("relevant_primes: s must be >= 3");
    std::set<long long> out;
    long long threshold = p0(eq.s(), eq.k);
    for (long long p : primes_up_to(threshold - 1)) out.insert(p);
    for (auto [p, e] : factorize(eq.k).factors) out.insert(p);
    // primes dividing at least s-2 of the coefficients
    std::map<long long, int> hits;
    for (long long aj : eq.a) {
        for (auto [p, e] : factorize(aj).factors) ++hits[p];
    }
    for (auto [p, c] : hits)
        if (c >= eq.s() - 2) out.insert(p);
    return {out.begin(), out.end()};
}

LocalReport membership_Cprime(const Equation& eq) {
    LocalReport rep;
    rep.real_positive = eq.mixed_signs();
    rep.checked_primes = relevant_primes(eq);
    for (long long p : rep.checked_primes) {
        Rat chi = chi_p(eq, p);
        LocalExponents ex = local_exponents(p, eq.k, eq.a);
        int level = ex.xi + ex.lambda;
        bool soluble = chi > 0;
        rep.per_prime[p] = PrimeLocalData{soluble, chi, level};
        if (!soluble && !rep.blocker) rep.blocker = p;
    }
    rep.member = rep.real_positive && !rep.blocker;
    return rep;
}

}  // namespace phl
