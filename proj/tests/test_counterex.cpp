#include <doctest.h>

#include <numeric>

#include "phl/counterex.hpp"
#include "phl/locals.hpp"
#include "phl/numtheory.hpp"
#include "phl/search.hpp"

using namespace phl;

TEST_CASE("pythagorean parametrisation") {
    CHECK(pythagorean_params({3, 4, 5}) == std::pair<long long, long long>{2, 1});
    CHECK(pythagorean_params({5, 12, 13}) == std::pair<long long, long long>{3, 2});
    CHECK_THROWS_AS(pythagorean_params({6, 8, 10}), std::invalid_argument);
    CHECK_THROWS_AS(pythagorean_params({4, 3, 5}), std::invalid_argument);   // odd b
    CHECK_THROWS_AS(pythagorean_params({3, 4, 6}), std::invalid_argument);   // not a triple
}

TEST_CASE("parametrisation round-trips over primitive triples with c <= 1000") {
    int seen = 0;
    for (long long m = 2; m * m <= 1000; ++m) {
        for (long long n = 1; n < m; ++n) {
            if ((m - n) % 2 == 0 || std::gcd(m, n) != 1) continue;
            long long a = m * m - n * n, b = 2 * m * n, c = m * m + n * n;
            if (c > 1000) continue;
            ++seen;
            auto [mm, nn] = pythagorean_params({a, b, c});
            CHECK(mm == m);
            CHECK(nn == n);
            CHECK(mm * mm - nn * nn == a);
            CHECK(2 * mm * nn == b);
        }
    }
    CHECK(seen > 100);
}

TEST_CASE("pythagorean certificate (3,4,5), r = 85 verifies unconditionally") {
    auto cert = build_pythag_counterexample({3, 4, 5}, 85);
    CHECK(cert.accepted);
    CHECK(cert.exhaustively_checked);
    CHECK(!cert.flt_conditional);
    CHECK(cert.coeffs == std::vector<Int>{Int(9), Int(16), Int(-180625)});
    // C(3,4,5) = max{sqrt(2)*12, sqrt(288), sqrt(5328), 29} ~ 73.0 < 85
    bool found_c = false;
    for (const auto& item : cert.checklist)
        if (item.name == "r > C(a,b,c)") {
            found_c = true;
            CHECK(item.ok);
            CHECK(item.note.find("72.99") != std::string::npos);
        }
    CHECK(found_c);

    auto rep = verify_counterexample(cert);
    CHECK(rep.verified);
    CHECK(rep.unconditional);
}

TEST_CASE("pythagorean condition violations are itemized") {
    auto prime_r = build_pythag_counterexample({3, 4, 5}, 13);
    CHECK(!prime_r.accepted);
    CHECK(!prime_r.checklist[0].ok);  // r composite fails

    auto bad_r = build_pythag_counterexample({3, 4, 5}, 6);
    CHECK(!bad_r.accepted);
    bool mod4_fail = false, coprime_fail = false;
    for (const auto& item : bad_r.checklist) {
        if (item.name == "every prime of r is 1 mod 4" && !item.ok) mod4_fail = true;
        if (item.name == "r coprime to a and b" && !item.ok) coprime_fail = true;
    }
    CHECK(mod4_fail);
    CHECK(coprime_fail);
}

TEST_CASE("scaling r by an admissible prime preserves acceptance") {
    CHECK(build_pythag_counterexample({3, 4, 5}, 85).accepted);
    CHECK(build_pythag_counterexample({3, 4, 5}, 85 * 13).accepted);
    CHECK(build_pythag_counterexample({3, 4, 5}, 85 * 29).accepted);
}

TEST_CASE("locally soluble everywhere: pythagorean equation is a member") {
    auto cert = build_pythag_counterexample({3, 4, 5}, 85);
    std::vector<long long> a;
    for (const Int& c : cert.coeffs) a.push_back(c.get_si());
    auto rep = membership_Cprime(Equation(2, a));
    CHECK(rep.member);
    // ... and absence of prime solutions within the certificate bound
    auto sum = count_prime_solutions(Equation(2, a), cert.search_bound.get_si());
    CHECK(sum.unweighted == 0);
}

TEST_CASE("fermat Q(3) = 4 * 9 * product of primes in [5,83]") {
    Int expect = 36;
    for (long long p : primes_up_to(83))
        if (p >= 5) expect *= to_int(p);
    CHECK(fermat_Q(3) == expect);
    CHECK(p0(3, 3) == 89);
}

TEST_CASE("fermat certificate k = 3 with a = Q") {
    auto cert = build_fermat_counterexample(3, fermat_Q(3), Int(1), Int(1));
    CHECK(cert.accepted);
    CHECK(cert.flt_conditional);
    auto rep = verify_counterexample(cert);
    CHECK(rep.verified);
    CHECK(!rep.unconditional);  // rests on Fermat's last theorem
}

TEST_CASE("fermat: odd exponent makes the c-condition vacuous; k = 4, c = 2 fails pairwise") {
    auto odd = build_fermat_counterexample(3, fermat_Q(3), Int(1), Int(97));
    bool cond_c = false;
    for (const auto& item : odd.checklist)
        if (item.name == "-1 is a k-th power mod every prime of c") cond_c = item.ok;
    CHECK(cond_c);  // (-1)^3 = -1 for every odd k

    auto even = build_fermat_counterexample(4, fermat_Q(4), Int(1), Int(2));
    bool pairwise = true, c_cond = true;
    for (const auto& item : even.checklist) {
        if (item.name == "a, b, c pairwise coprime") pairwise = item.ok;
        if (item.name == "-1 is a k-th power mod every prime of c") c_cond = item.ok;
    }
    CHECK(c_cond);      // -1 = 1 mod 2
    CHECK(!pairwise);   // Q(4) is even, so gcd(a, c) > 1
    CHECK(!even.accepted);
}

TEST_CASE("blocked family with exponent-k products") {
    auto cert = build_blocked_family(3, 2, {1, 1, -1});
    CHECK(cert.accepted);
    CHECK(cert.coeffs == std::vector<Int>{Int(225), Int(100), Int(-36)});
    bool fails = false;
    for (const auto& item : cert.checklist)
        if (item.name == "forced candidate fails") {
            fails = item.ok;
            CHECK(item.note.find("900") != std::string::npos);
        }
    CHECK(fails);
    auto rep = verify_counterexample(cert);
    CHECK(rep.verified);
    CHECK(rep.unconditional);
    // the construction indeed has no prime solutions at desk scale
    CHECK(count_prime_solutions(Equation(2, {225, 100, -36}), 200).unweighted == 0);
}

TEST_CASE("blocked family: the paper's literal exponent-1 form is rejected") {
    auto cert = build_blocked_family(3, 2, {1, 1, -1}, /*literal_paper_form=*/true);
    CHECK(!cert.accepted);
    CHECK(cert.coeffs == std::vector<Int>{Int(15), Int(10), Int(-6)});
    bool fails_item = false;
    for (const auto& item : cert.checklist)
        if (item.name == "forced candidate fails") {
            fails_item = true;
            CHECK(!item.ok);
            CHECK(item.note.find("2,3,5") != std::string::npos);
        }
    CHECK(fails_item);
}

TEST_CASE("blocked family degenerate s = 2 case") {
    // a = (9, -4): the candidate (2,3) gives 36 - 36 = 0, so rejected
    auto cert = build_blocked_family(2, 2, {1, -1});
    CHECK(!cert.accepted);
}

TEST_CASE("blocked family skips primes dividing the b_j") {
    auto cert = build_blocked_family(3, 2, {5, 1, -1});
    std::string primes;
    for (const auto& [key, val] : cert.parameters)
        if (key == "primes") primes = val;
    CHECK(primes == "2,3,7");  // 5 divides b_1
}

TEST_CASE("claim certificates: (1,13,-1) is not a pHp counterexample") {
    CounterexampleCert claim;
    claim.family = CertFamily::claim;
    claim.k = 2;
    claim.coeffs = {Int(1), Int(13), Int(-1)};
    claim.search_bound = 1000;
    auto rep = verify_counterexample(claim);
    CHECK(!rep.verified);
    CHECK(rep.reason.find("not locally soluble") != std::string::npos);
    CHECK(rep.reason.find("3") != std::string::npos);  // the intro's Z_3^x failure
    bool z3 = false;
    for (const auto& c : rep.checks)
        if (c.name == "Z_p^x solubility at p = 3") z3 = !c.ok;
    CHECK(z3);
}

TEST_CASE("tampered certificates are rejected") {
    auto cert = build_pythag_counterexample({3, 4, 5}, 85);
    cert.coeffs[0] = Int(10);
    auto rep = verify_counterexample(cert);
    CHECK(!rep.verified);
    CHECK(rep.reason.find("do not match") != std::string::npos);
}

TEST_CASE("certificate JSON round trip") {
    auto cert = build_pythag_counterexample({3, 4, 5}, 85);
    auto back = cert_from_json(cert_to_json(cert));
    CHECK(back.family == cert.family);
    CHECK(back.k == cert.k);
    CHECK(back.coeffs == cert.coeffs);
    CHECK(back.parameters == cert.parameters);
    CHECK(back.search_bound == cert.search_bound);
    CHECK(back.accepted == cert.accepted);
    CHECK(back.flt_conditional == cert.flt_conditional);
    CHECK(back.checklist.size() == cert.checklist.size());
    auto rep = verify_counterexample(back);
    CHECK(rep.verified);
}
