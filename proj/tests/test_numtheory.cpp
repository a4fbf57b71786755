#include <doctest.h>

#include <numeric>
#include <random>

#include "phl/numtheory.hpp"

using namespace phl;

TEST_CASE("factorize small values") {
    auto f12 = factorize(12);
    CHECK(f12.factors == std::vector<std::pair<long long, int>>{{2, 2}, {3, 1}});
    CHECK(factorize(1).factors.empty());
    CHECK(factorize(-1).factors.empty());
    CHECK(factorize(97).factors == std::vector<std::pair<long long, int>>{{97, 1}});
    CHECK_THROWS_AS(factorize(0), std::invalid_argument);
}

TEST_CASE("factorize reconstructs |n| on a sample up to 1e6") {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<long long> dist(2, 1'000'000);
    for (int i = 0; i < 2000; ++i) {
        long long n = dist(rng);
        auto pf = factorize(n);
        CHECK(pf.reconstruct() == to_int(n));
        for (size_t j = 1; j < pf.factors.size(); ++j)
            CHECK(pf.factors[j - 1].first < pf.factors[j].first);
    }
    CHECK(factorize(-360).reconstruct() == 360);
    // past the sieve square: forces the rho path
    long long big = 1000003LL * 1000033LL;
    auto pf = factorize(big);
    CHECK(pf.factors == std::vector<std::pair<long long, int>>{{1000003, 1}, {1000033, 1}});
}

TEST_CASE("xi") {
    CHECK(xi(2, 2) == 3);
    CHECK(xi(3, 2) == 1);
    CHECK(xi(3, 6) == 2);
    CHECK(xi(2, 3) == 2);
    CHECK(xi(2, 8) == 5);
    for (long long p : {3LL, 5LL, 7LL, 11LL})
        for (long long k : {2LL, 3LL, 4LL, 5LL})
            if (k % p != 0) CHECK(xi(p, k) == 1);
    CHECK(xi(5, 10) == 2);
    CHECK_THROWS_AS(xi(4, 2), std::invalid_argument);
}

TEST_CASE("lambda_min") {
    std::vector<long long> a1{4, 6, 10};
    CHECK(lambda_min(std::span<const long long>(a1), 2) == 1);
    std::vector<long long> a2{3, 9};
    CHECK(lambda_min(std::span<const long long>(a2), 3) == 1);
    std::vector<long long> a3{1, 5, 7};
    CHECK(lambda_min(std::span<const long long>(a3), 2) == 0);
    std::vector<long long> bad{3, 0};
    CHECK_THROWS_AS(lambda_min(std::span<const long long>(bad), 3), std::invalid_argument);
}

TEST_CASE("kth power residues: frozen examples and enumeration oracle") {
    CHECK(kth_power_residues(5, 1, 2) == std::vector<long long>{1, 4});
    CHECK(kth_power_residues(3, 1, 2) == std::vector<long long>{1});
    // h^3 mod 7 for h = 1..6 enumerated directly
    std::vector<long long> cubes;
    for (long long h = 1; h < 7; ++h) {
        long long v = (h * h * h) % 7;
        if (std::find(cubes.begin(), cubes.end(), v) == cubes.end()) cubes.push_back(v);
    }
    std::sort(cubes.begin(), cubes.end());
    CHECK(cubes == std::vector<long long>{1, 6});
    CHECK(kth_power_residues(7, 1, 3) == cubes);
}

TEST_CASE("kth power residue count is (p-1)/gcd(k,p-1)") {
    for (long long p : primes_up_to(200))
        for (long long k = 1; k <= 12; ++k)
            CHECK(static_cast<long long>(kth_power_residues(p, 1, k).size()) ==
                  (p - 1) / std::gcd(k, p - 1));
}

TEST_CASE("local exponent record") {
    std::vector<long long> a{4, 6, 10};
    auto e = local_exponents(2, 2, a);
    CHECK(e.nu == 1);
    CHECK(e.xi == 3);  // nu + 2 at p = 2
    CHECK(e.lambda == 1);
    auto e3 = local_exponents(3, 6, a);
    CHECK(e3.nu == 1);
    CHECK(e3.xi == 2);  // nu + 1 at odd p
    CHECK(e3.lambda == 0);
}

TEST_CASE("budget parsing (PHL_BUDGET)") {
    CHECK(parse_budget(nullptr) == (1LL << 26));
    CHECK(parse_budget("junk") == (1LL << 26));
    CHECK(parse_budget("-3") == (1LL << 26));
    CHECK(parse_budget("1048576") == 1048576);
}

TEST_CASE("prime helpers") {
    CHECK(is_prime(2));
    CHECK(is_prime(1000003));
    CHECK(!is_prime(1));
    CHECK(!is_prime(1000001));  // 101 * 9901
    CHECK(next_prime(13) == 17);
    CHECK(nth_prime(0) == 2);
    CHECK(nth_prime(4) == 11);
    CHECK(primes_up_to(10) == std::vector<long long>{2, 3, 5, 7});
    CHECK(valuation(48, 2) == 4);
    CHECK(valuation(to_int(-48), 2) == 4);
}
