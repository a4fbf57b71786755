#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "phl/density.hpp"
#include "phl/locals.hpp"
#include "phl/numtheory.hpp"

using namespace phl;

namespace {

// naive gcd-filter oracle for the coprimality counts
Int coprime_oracle(const CoprimeSpec& spec, long long n) {
    Int count = 0;
    std::vector<long long> a(static_cast<size_t>(spec.s));
    auto r_coprime = [](long long g, long long r) {
        while (g > 1) {
            long long d = std::gcd(g, r);
            if (d == 1) return false;
            while (g % d == 0) g /= d;
        }
        return true;
    };
    std::function<void(int)> rec = [&](int j) {
        if (j == spec.s) {
            if (spec.arity <= spec.s) {
                std::vector<int> idx(static_cast<size_t>(spec.arity), 0);
                std::function<bool(int, int)> sub = [&](int pos, int lo) -> bool {
                    if (pos == spec.arity) {
                        long long g = 0;
                        for (int i : idx) g = std::gcd(g, a[static_cast<size_t>(i)]);
                        return r_coprime(g, spec.r);
                    }
                    for (int i = lo; i < spec.s; ++i) {
                        idx[static_cast<size_t>(pos)] = i;
                        if (!sub(pos + 1, i + 1)) return false;
                    }
                    return true;
                };
                if (!sub(0, 0)) return;
            }
            for (int i = 1; i <= std::min(spec.s, spec.arity - 1); ++i) {
                if (static_cast<int>(spec.u.size()) < i) continue;
                long long ui = spec.u[static_cast<size_t>(i - 1)];
                if (ui == 1) continue;
                std::vector<int> idx(static_cast<size_t>(i), 0);
                std::function<bool(int, int)> sub = [&](int pos, int lo) -> bool {
                    if (pos == i) {
                        long long g = 0;
                        for (int x : idx) g = std::gcd(g, a[static_cast<size_t>(x)]);
                        return r_coprime(std::gcd(g, ui), spec.r);
                    }
                    for (int x = lo; x < spec.s; ++x) {
                        idx[static_cast<size_t>(pos)] = x;
                        if (!sub(pos + 1, x + 1)) return false;
                    }
                    return true;
                };
                if (!sub(0, 0)) return;
            }
            ++count;
            return;
        }
        long long qj = spec.q.empty() ? 1 : spec.q[static_cast<size_t>(j)];
        long long bj = spec.b.empty() ? 0 : spec.b[static_cast<size_t>(j)] % qj;
        for (long long v = 1; v <= n; ++v) {
            if (qj > 1 && v % qj != bj) continue;
            a[static_cast<size_t>(j)] = v;
            rec(j + 1);
        }
    };
    rec(0);
    return count;
}

}  // namespace

TEST_CASE("worked example: delta'_2 = 7/64 via 448 soluble classes mod 8") {
    auto dp = delta_prime_p(4, 2, 2);
    CHECK(!dp.closed_form);
    CHECK(dp.soluble_classes == 448);
    CHECK(dp.total_classes == 4096);
    CHECK(dp.value == make_rat(7, 64));
}

TEST_CASE("worked example: remaining exact densities") {
    CHECK(delta_prime_p(4, 2, 3).value == make_rat(26, 81));
    CHECK(delta_prime_p(4, 2, 5).value == make_rat(496, 625));
    CHECK(delta_prime_p(4, 2, 7).value == make_rat(2268, 2401));
    CHECK(delta_p(4, 2, 2) == make_rat(7, 60));
    CHECK(delta_p(4, 2, 3) == make_rat(13, 40));
    CHECK(delta_p(4, 2, 5) == make_rat(31, 39));
    CHECK(delta_p(4, 2, 7) == make_rat(189, 200));
    CHECK(delta_infinity(4) == make_rat(7, 8));
    CHECK(delta_infinity(2) == make_rat(1, 2));
    CHECK(delta_infinity(10) == make_rat(511, 512));
}

TEST_CASE("closed form equals brute force at qualifying primes") {
    // s = 4, k = 2: the formula is valid from p0(4,2) = 11
    for (long long p : {11LL, 13LL, 17LL, 19LL, 23LL}) {
        auto brute = delta_prime_brute(4, 2, p);
        CHECK(delta_prime_closed(4, 2, p) == brute.value);
        CHECK(delta_prime_p(4, 2, p).closed_form);
        CHECK(delta_closed_formula(4, 2, p) ==
              brute.value / (Rat(1) - make_rat(1, ipow(p, 4))));
    }
    // s = 5, k = 3: validity from the per-prime criterion p >= p0(5, (3;p-1))
    for (long long p : {5LL, 7LL, 11LL, 13LL, 17LL, 19LL, 23LL, 29LL, 31LL}) {
        long long g = std::gcd(3LL, p - 1);
        if (p < p0(5, g)) continue;
        CHECK(delta_prime_closed(5, 3, p) == delta_prime_brute(5, 3, p).value);
    }
    // below the threshold the formula genuinely fails
    CHECK(delta_prime_closed(4, 2, 5) != delta_prime_brute(4, 2, 5).value);
}

TEST_CASE("coset-type reduction agrees with a per-class scan") {
    // independent oracle: enumerate every coefficient class mod p and decide
    // solubility by exhausting unit tuples
    auto naive = [](int s, long long k, long long p) {
        Int soluble = 0;
        std::vector<long long> a(static_cast<size_t>(s));
        std::function<void(int)> rec = [&](int j) {
            if (j == s) {
                bool all0 = true;
                for (long long v : a)
                    if (v % p != 0) all0 = false;
                if (all0) return;
                std::vector<long long> units;
                for (long long x = 1; x < p; ++x) units.push_back(x);
                std::vector<long long> xs(static_cast<size_t>(s));
                bool ok = false;
                std::function<void(int, long long)> inner = [&](int t, long long acc) {
                    if (ok) return;
                    if (t == s) {
                        if (acc % p == 0) ok = true;
                        return;
                    }
                    for (long long u : units)
                        inner(t + 1, (acc + a[static_cast<size_t>(t)] * powmod(u, k, p)) % p);
                };
                inner(0, 0);
                if (ok) ++soluble;
                return;
            }
            for (long long v = 0; v < p; ++v) {
                a[static_cast<size_t>(j)] = v;
                rec(j + 1);
            }
        };
        rec(0);
        return soluble;
    };
    CHECK(delta_prime_brute(4, 2, 3).soluble_classes == naive(4, 2, 3));
    CHECK(delta_prime_brute(4, 2, 5).soluble_classes == naive(4, 2, 5));
    CHECK(delta_prime_brute(4, 3, 7).soluble_classes == naive(4, 3, 7));  // g = 3 cosets
    CHECK(delta_prime_brute(3, 2, 5).soluble_classes == naive(3, 2, 5));
}

TEST_CASE("delta identity and tilde expansion") {
    for (long long p : {3LL, 5LL, 11LL, 13LL}) {
        Rat dp = delta_prime_p(4, 2, p).value;
        CHECK(delta_p(4, 2, p) == dp / (Rat(1) - make_rat(1, ipow(p, 4))));
    }
    // tilde factor: binomial tail identity and the coprime-density Euler factor
    for (int s : {4, 5, 6, 8}) {
        for (long long p : {2LL, 3LL, 7LL, 31LL}) {
            Rat direct = delta_tilde_p(s, p);
            Rat invp = make_rat(1, p);
            Rat top = make_rat(1, ipow(p, static_cast<unsigned long>(s))) +
                      Rat(s) * (Rat(1) - invp) * make_rat(1, ipow(p, static_cast<unsigned long>(s - 1))) +
                      make_rat(to_int(s) * to_int(s - 1), 2) * (Rat(1) - invp) * (Rat(1) - invp) *
                          make_rat(1, ipow(p, static_cast<unsigned long>(s - 2)));
            CHECK(direct == Rat(1) - top);
            CHECK(direct == coprime_factor_A(s, s - 2, p));
        }
    }
}

TEST_CASE("global density: the worked example's exact prefactor and value") {
    DensityTable t = global_density(4, 2, 97);
    Rat prefactor = t.delta_inf;
    for (long long p : {2LL, 3LL, 5LL, 7LL}) prefactor *= t.per_prime.at(p).delta;
    CHECK(prefactor == make_rat(31899, 1280000));
    CHECK(t.global_value > 0.022);
    CHECK(t.global_value < 0.024);
    CHECK(t.per_prime.at(2).method == "brute");
    CHECK(t.per_prime.at(13).method == "closed");
    CHECK(t.global_tail_estimate < 0.01);
}

TEST_CASE("global density decreases in the prime bound and stays in (0,1)") {
    double prev = 1.0;
    for (long long P : {10LL, 20LL, 30LL, 50LL}) {
        DensityTable t = global_density(6, 2, P);
        CHECK(t.global_value > 0.0);
        CHECK(t.global_value < 1.0);
        CHECK(t.global_value <= prev + 1e-15);
        prev = t.global_value;
    }
}

TEST_CASE("empirical membership count equals a plain per-tuple scan at A = 3") {
    auto fast = empirical_cprime_density(4, 2, 3);
    Int naive = 0;
    std::vector<long long> a(4);
    std::function<void(int)> rec = [&](int j) {
        if (j == 4) {
            if (membership_Cprime(Equation(2, a)).member) ++naive;
            return;
        }
        for (long long v = -3; v <= 3; ++v) {
            if (v == 0) continue;
            a[static_cast<size_t>(j)] = v;
            rec(j + 1);
        }
    };
    rec(0);
    CHECK(fast.member_count == naive);
    CHECK(fast.total_count == 1296);
}

TEST_CASE("count_coprime_tuples examples and oracle equivalence") {
    CoprimeSpec pairs;
    pairs.s = 2;
    pairs.arity = 2;
    CHECK(count_coprime_tuples(pairs, 4) == 11);

    CoprimeSpec odd;
    odd.s = 1;
    odd.arity = 2;
    odd.u = {2};
    CHECK(count_coprime_tuples(odd, 10) == 5);

    CoprimeSpec away2;
    away2.s = 3;
    away2.arity = 2;
    away2.r = 2;
    CHECK(count_coprime_tuples(away2, 6) == coprime_oracle(away2, 6));

    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 6; ++trial) {
        CoprimeSpec spec;
        spec.s = 1 + static_cast<int>(rng() % 3);
        spec.arity = 2 + static_cast<int>(rng() % 2);
        spec.r = 1 + static_cast<long long>(rng() % 4);
        if (spec.arity >= 2) {
            spec.u.assign(static_cast<size_t>(spec.arity - 1), 1);
            for (auto& ui : spec.u) {
                long long cand = 1 + static_cast<long long>(rng() % 6);
                ui = std::gcd(cand, spec.r) == 1 ? cand : 1;
            }
            // pairwise coprimality among the u_i
                for (size_t i = 0; i < spec.u.size(); ++i)
                for (size_t j = i + 1; j < spec.u.size(); ++j)
                    if (std::gcd(spec.u[i], spec.u[j]) != 1) spec.u[j] = 1;
        }
        long long n = 20 + static_cast<long long>(rng() % 31);
        CHECK(count_coprime_tuples(spec, n) == coprime_oracle(spec, n));
    }
}

TEST_CASE("congruence-constrained counts match the oracle") {
    CoprimeSpec spec;
    spec.s = 2;
    spec.arity = 2;
    spec.r = 6;
    spec.q = {3, 2};
    spec.b = {1, 1};
    CHECK(count_coprime_tuples(spec, 30) == coprime_oracle(spec, 30));
}

TEST_CASE("coprime density A_{2,2,1} is 6/pi^2") {
    auto a221 = coprime_density_A(2, 2, 1, 100000);
    double zeta2inv = 6.0 / (std::numbers::pi * std::numbers::pi);
    CHECK(std::abs(a221.value - zeta2inv) < 1e-3);
    CHECK(a221.lower <= a221.value);
    CHECK(a221.upper >= zeta2inv - 1e-3);
    // box count at n = 1000 within the lemma's error scale
    CoprimeSpec pairs;
    pairs.s = 2;
    pairs.arity = 2;
    double emp = Rat(count_coprime_tuples(pairs, 1000)).get_d() / 1e6;
    CHECK(std::abs(emp - a221.value) < 0.01);
}

TEST_CASE("coprime density is 1 when arity exceeds s") {
    CHECK(coprime_density_A(3, 4, 1, 1000).value == doctest::Approx(1.0));
    CHECK(coprime_factor_A(2, 3, 5) == Rat(1));
}

TEST_CASE("A_{3,2,1} against a brute-force box") {
    auto a321 = coprime_density_A(3, 2, 1, 100000);
    CoprimeSpec spec;
    spec.s = 3;
    spec.arity = 2;
    double emp = Rat(count_coprime_tuples(spec, 120)).get_d() / std::pow(120.0, 3);
    CHECK(std::abs(emp - a321.value) < 0.03);
}

TEST_CASE("f-function telescoping identities, exact") {
    // oracle for the divisor-sum side
    auto rhs = [&](int s, int arity, long long r, int i, long long u) {
        Rat acc(0);
        std::vector<long long> sq{1};
        for (auto [p, e] : factorize(u).factors) {
            size_t sz = sq.size();
            for (size_t t = 0; t < sz; ++t) sq.push_back(sq[t] * p);
        }
        for (long long d : sq) {
            if (std::gcd(d, r) != 1) continue;
            int omega = static_cast<int>(factorize(d).factors.size());
            int mu = omega % 2 == 0 ? 1 : -1;
            Int binom_pow = 1;
            Int cb;
            mpz_bin_uiui(cb.get_mpz_t(), s, i);
            for (int t = 0; t < omega; ++t) binom_pow *= cb;
            acc += Rat(to_int(mu)) * Rat(binom_pow) / coprime_alpha(s, i, d);
        }
        return acc;
    };
    for (int s : {2, 3, 5}) {
        for (int arity : {2, 3, 4}) {
            for (long long r : {1LL, 6LL}) {
                for (long long u = 1; u <= 100; ++u) {
                    if (arity >= 2) {
                        Rat lhs = coprime_f(s, arity, r, arity - 1, u);
                        CHECK(lhs == rhs(s, arity, r, arity - 1, u));
                    }
                    for (int i = 1; i <= arity - 2; ++i) {
                        Rat denom = coprime_f(s, arity, r, i + 1, u);
                        if (denom == 0) continue;
                        CHECK(coprime_f(s, arity, r, i, u) / denom == rhs(s, arity, r, i, u));
                    }
                }
            }
        }
    }
}

TEST_CASE("empirical sweep is independent of the worker count") {
    set_threads(1);
    auto one = empirical_cprime_density(4, 2, 4);
    set_threads(4);
    auto four = empirical_cprime_density(4, 2, 4);
    set_threads(0);
    CHECK(one.member_count == four.member_count);
    CHECK(one.total_count == four.total_count);
}

TEST_CASE("densities live in [0,1]") {
    for (long long p : {2LL, 3LL, 5LL, 13LL, 29LL}) {
        Rat d = delta_p(4, 2, p);
        CHECK(d >= 0);
        CHECK(d <= 1);
    }
}
