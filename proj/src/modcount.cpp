#include "phl/modcount.hpp"

#include <algorithm>

#include "phl/numtheory.hpp"

namespace phl {

long long checked_prime_power(long long p, int n) {
    long long m = 1;
    for (int i = 0; i < n; ++i) {
        if (m > budget() / p)
            throw resource_error("histogram modulus p^n = " + std::to_string(p) + "^" + std::to_string(n) +
                                 " exceeds budget of " + std::to_string(budget()) + " residues");
        m *= p;
    }
    return m;
}

std::vector<long long> unit_power_histogram(long long p, int n, long long a, long long k) {
    long long m = checked_prime_power(p, n);
    std::vector<long long> h(static_cast<size_t>(m), 0);
    long long am = ((a % m) + m) % m;
    if (m == 1) {
        h[0] = 1;  // the single residue class counts as a unit
        return h;
    }
    // x^k mod m over units, then scale by a
    for (long long x = 1; x < m; ++x) {
        if (x % p == 0) continue;
        long long v = mulmod(am, powmod(x, k, m), m);
        ++h[static_cast<size_t>(v)];
    }
    return h;
}

namespace {

// cyclic convolution out[t] = sum_v A[v] * B[(t - v) mod m], exact
std::vector<long long> conv_u64(const std::vector<long long>& A, const std::vector<long long>& B,
                                bool& overflow) {
    const long long m = static_cast<long long>(A.size());
    std::vector<long long> out(A.size(), 0);
    overflow = false;
    for (long long t = 0; t < m; ++t) {
        unsigned __int128 acc = 0;
        for (long long v = 0; v < m; ++v) {
            long long av = A[static_cast<size_t>(v)];
            if (!av) continue;
            long long w = t - v;
            if (w < 0) w += m;
            acc += static_cast<unsigned __int128>(av) *
                   static_cast<unsigned long long>(B[static_cast<size_t>(w)]);
        }
        if (acc > static_cast<unsigned __int128>(INT64_MAX)) {
            overflow = true;
            return out;
        }
        out[static_cast<size_t>(t)] = static_cast<long long>(acc);
    }
    return out;
}

std::vector<Int> conv_mpz(const std::vector<Int>& A, const std::vector<long long>& B) {
    const long long m = static_cast<long long>(A.size());
    std::vector<Int> out(A.size(), Int(0));
    for (long long v = 0; v < m; ++v) {
        if (A[static_cast<size_t>(v)] == 0) continue;
        for (long long w = 0; w < m; ++w) {
            long long bv = B[static_cast<size_t>(w)];
            if (!bv) continue;
            long long t = v + w;
            if (t >= m) t -= m;
            out[static_cast<size_t>(t)] += A[static_cast<size_t>(v)] * to_int(bv);
        }
    }
    return out;
}

}  // namespace

Int count_unit_solutions_mod(std::span<const long long> a, long long k, long long p, int n,
                             long long target) {
    if (a.empty()) throw std::invalid_argument("count_unit_solutions_mod: empty coefficients");
    long long m = checked_prime_power(p, n);
    long long tgt = ((target % m) + m) % m;

    std::vector<std::vector<long long>> hists;
    hists.reserve(a.size());
    for (long long aj : a) hists.push_back(unit_power_histogram(p, n, aj, k));

    // running distribution of partial sums; u64 while it fits, else mpz
    std::vector<long long> cur = hists[0];
    std::vector<Int> cur_big;
    bool big = false;
    for (size_t j = 1; j + 1 < hists.size(); ++j) {
        if (!big) {
            bool overflow = false;
            auto next = conv_u64(cur, hists[j], overflow);
            if (!overflow) {
                cur = std::move(next);
                continue;
            }
            cur_big.clear();
            cur_big.reserve(cur.size());
            for (long long v : cur) cur_big.push_back(to_int(v));
            big = true;
        }
        cur_big = conv_mpz(cur_big, hists[j]);
    }

    if (hists.size() == 1) {
        return big ? cur_big[static_cast<size_t>(tgt)] : to_int(cur[static_cast<size_t>(tgt)]);
    }
    // final fold: read the mass of (target - last) without a full convolution
    const auto& last = hists.back();
    Int total = 0;
    for (long long v = 0; v < m; ++v) {
        long long lv = last[static_cast<size_t>(v)];
        if (!lv) continue;
        long long w = tgt - v;
        if (w < 0) w += m;
        if (big)
            total += cur_big[static_cast<size_t>(w)] * to_int(lv);
        else
            total += to_int(cur[static_cast<size_t>(w)]) * to_int(lv);
    }
    return total;
}

bool units_reachable(std::span<const long long> a, long long k, long long p, int n, long long target) {
    if (a.empty()) throw std::invalid_argument("units_reachable: empty coefficients");
    long long m = checked_prime_power(p, n);
    long long tgt = ((target % m) + m) % m;
    std::vector<bool> cur(static_cast<size_t>(m), false);
    cur[0] = true;
    for (long long aj : a) {
        auto h = unit_power_histogram(p, n, aj, k);
        std::vector<long long> support;
        for (long long v = 0; v < m; ++v)
            if (h[static_cast<size_t>(v)]) support.push_back(v);
        std::vector<bool> next(static_cast<size_t>(m), false);
        for (long long w = 0; w < m; ++w) {
            if (!cur[static_cast<size_t>(w)]) continue;
            for (long long v : support) {
                long long t = w + v;
                if (t >= m) t -= m;
                next[static_cast<size_t>(t)] = true;
            }
        }
        cur = std::move(next);
    }
    return cur[static_cast<size_t>(tgt)];
}

}  // namespace phl
