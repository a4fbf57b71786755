#include "phl/expsums.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

#include "phl/modcount.hpp"
#include "phl/numtheory.hpp"

namespace phl {

namespace {

long long euler_phi(long long q) {
    long long r = q;
    auto pf = factorize(q);
    for (auto [p, e] : pf.factors) r -= r / p;
    return q == 1 ? 1 : r;
}

struct WTableCache {
    std::mutex mu;
    std::map<std::pair<long long, long long>, std::shared_ptr<const std::vector<std::complex<double>>>> map;
};

WTableCache& wcache() {
    static WTableCache c;
    return c;
}

std::shared_ptr<const std::vector<std::complex<double>>> build_w_table(long long q, long long k) {
    // histogram of h^k mod q over units, then one DFT row per m
    std::vector<long long> cnt(static_cast<size_t>(q), 0);
    for (long long h = 1; h <= q; ++h) {
        if (std::gcd(h, q) != 1) continue;
        ++cnt[static_cast<size_t>(powmod(h, k, q))];
    }
    if (q == 1) cnt[0] = 1;
    std::vector<long long> support;
    for (long long v = 0; v < q; ++v)
        if (cnt[static_cast<size_t>(v)]) support.push_back(v);

    auto table = std::make_shared<std::vector<std::complex<double>>>(static_cast<size_t>(q));
    const double two_pi = 2.0 * std::numbers::pi;
    for (long long m = 0; m < q; ++m) {
        std::complex<double> acc = 0;
        for (long long v : support) {
            double ang = two_pi * static_cast<double>(mulmod(m, v, q)) / static_cast<double>(q);
            acc += static_cast<double>(cnt[static_cast<size_t>(v)]) *
                   std::complex<double>(std::cos(ang), std::sin(ang));
        }
        (*table)[static_cast<size_t>(m)] = acc;
    }
    return table;
}

}  // namespace

const std::vector<std::complex<double>>& weyl_table(long long q, long long k) {
    if (q < 1) throw std::invalid_argument("weyl_table: q must be >= 1");
    if (q > budget()) throw resource_error("weyl_table: q exceeds budget " + std::to_string(budget()));
    auto& c = wcache();
    std::lock_guard<std::mutex> lock(c.mu);
    auto key = std::make_pair(q, k);
    auto it = c.map.find(key);
    if (it == c.map.end()) it = c.map.emplace(key, build_w_table(q, k)).first;
    return *it->second;
}

ExpSumValue weyl_sum_W(long long q, long long r, long long k) {
    if (q < 1) throw std::invalid_argument("weyl_sum_W: q must be >= 1");
    long long m = ((r % q) + q) % q;
    ExpSumValue out;
    out.value = weyl_table(q, k)[static_cast<size_t>(m)];
    if (m == 0) out.exact = Rat(to_int(euler_phi(q)));  // every term is 1
    return out;
}

ExpSumValue local_factor_T(std::span<const long long> a, long long q, long long k) {
    if (q < 1) throw std::invalid_argument("local_factor_T: q must be >= 1");
    const size_t s = a.size();
    if (s == 0) throw std::invalid_argument("local_factor_T: empty coefficients");
    for (long long aj : a)
        if (aj == 0) throw std::invalid_argument("local_factor_T: zero coefficient");

    ExpSumValue out;
    if (q == 1) {
        out.value = 1.0;
        out.exact = Rat(1);
        return out;
    }

    const auto& W = weyl_table(q, k);
    std::vector<long long> am(s);
    for (size_t j = 0; j < s; ++j) am[j] = ((a[j] % q) + q) % q;

    std::complex<double> sum = 0;
    long long phi = 0;
    for (long long r = 1; r <= q; ++r) {
        if (std::gcd(r, q) != 1) continue;
        ++phi;
        std::complex<double> prod = 1;
        for (size_t j = 0; j < s; ++j) prod *= W[static_cast<size_t>(mulmod(am[j], r, q))];
        sum += prod;
    }
    double scale = std::pow(static_cast<double>(phi), -static_cast<double>(s));
    out.value = sum * scale;

    // prime-power cross-check on the exact counting path
    auto pf = factorize(q);
    if (pf.factors.size() == 1) {
        long long p = pf.factors[0].first;
        int n = pf.factors[0].second;
        Rat exact = local_factor_T_exact(a, p, n, k);
        out.exact = exact;
        double gap = std::abs(out.value - std::complex<double>(to_double(exact), 0.0));
        if (gap > 1e-9 * std::max(1.0, std::abs(out.value)) + 1e-9)
            throw std::logic_error("local_factor_T: complex and exact paths disagree at q=" +
                                   std::to_string(q) + " (gap " + std::to_string(gap) + ")");
    }
    return out;
}

Rat local_factor_T_exact(std::span<const long long> a, long long p, int n, long long k) {
    if (n < 0) throw std::invalid_argument("local_factor_T_exact: n must be >= 0");
    if (n == 0) return Rat(1);
    // T(p^n) = S_n - S_{n-1} with S_n = p^n phi(p^n)^{-s} M(p^n)
    auto scaled_count = [&](int lvl) -> Rat {
        Int m = count_unit_solutions_mod(a, k, p, lvl);
        Int num = ipow(p, static_cast<unsigned long>(lvl)) * m;
        Int den = ipow(euler_phi_pp(p, lvl), static_cast<unsigned long>(a.size()));
        return make_rat(num, den);
    };
    return scaled_count(n) - scaled_count(n - 1);
}

}  // namespace phl
