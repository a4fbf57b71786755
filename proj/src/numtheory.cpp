#include "phl/numtheory.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <thread>

namespace phl {

namespace {

constexpr long long kSieveBound = 1'000'000;

const std::vector<long long>& sieve_primes() {
    static const std::vector<long long> primes = [] {
        std::vector<bool> composite(kSieveBound + 1, false);
        std::vector<long long> ps;
        for (long long i = 2; i <= kSieveBound; ++i) {
            if (!composite[i]) {
                ps.push_back(i);
                for (long long j = i * i; j <= kSieveBound; j += i) composite[j] = true;
            }
        }
        return ps;
    }();
    return primes;
}

unsigned long long mulmod_u(unsigned long long a, unsigned long long b, unsigned long long m) {
    return static_cast<unsigned long long>((static_cast<unsigned __int128>(a) * b) % m);
}

unsigned long long powmod_u(unsigned long long b, unsigned long long e, unsigned long long m) {
    unsigned long long r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u(r, b, m);
        b = mulmod_u(b, b, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Pollard rho for composites that passed the sieve stage.
unsigned long long pollard_rho(unsigned long long n) {
    if (n % 2 == 0) return 2;
    for (unsigned long long c = 1;; ++c) {
        auto f = [&](unsigned long long x) { return (mulmod_u(x, x, n) + c) % n; };
        unsigned long long x = 2, y = 2, d = 1;
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            unsigned long long diff = x > y ? x - y : y - x;
            d = std::gcd(diff, n);
        }
        if (d != n) return d;
    }
}

void factor_rec(unsigned long long n, std::vector<long long>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(static_cast<long long>(n));
        return;
    }
    unsigned long long d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

bool is_prime(unsigned long long n) {
    if (n < 2) return false;
    for (unsigned long long p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    unsigned long long d = n - 1;
    int s = 0;
    while (d % 2 == 0) d /= 2, ++s;
    for (unsigned long long a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        unsigned long long x = powmod_u(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod_u(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

PrimeFactorization factorize(long long n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be nonzero");
    unsigned long long m = static_cast<unsigned long long>(n < 0 ? -(n + 1) : n);
    if (n < 0) m += 1;  // |LLONG_MIN| safe
    PrimeFactorization pf;
    for (long long p : sieve_primes()) {
        if (static_cast<unsigned long long>(p) * p > m) break;
        if (m % p == 0) {
            int e = 0;
            while (m % p == 0) m /= p, ++e;
            pf.factors.emplace_back(p, e);
        }
    }
    if (m > 1) {
        if (is_prime(m)) {
            pf.factors.emplace_back(static_cast<long long>(m), 1);
        } else {
            std::vector<long long> ps;
            factor_rec(m, ps);
            std::sort(ps.begin(), ps.end());
            for (size_t i = 0; i < ps.size();) {
                size_t j = i;
                while (j < ps.size() && ps[j] == ps[i]) ++j;
                pf.factors.emplace_back(ps[i], static_cast<int>(j - i));
                i = j;
            }
            std::sort(pf.factors.begin(), pf.factors.end());
        }
    }
    return pf;
}

long long next_prime(long long n) {
    long long m = std::max(n + 1, 2LL);
    while (!is_prime(static_cast<unsigned long long>(m))) ++m;
    return m;
}

std::vector<long long> primes_up_to(long long n) {
    std::vector<long long> out;
    if (n < 2) return out;
    if (n <= kSieveBound) {
        const auto& ps = sieve_primes();
        auto it = std::upper_bound(ps.begin(), ps.end(), n);
        out.assign(ps.begin(), it);
        return out;
    }
    out = sieve_primes();
    for (long long m = kSieveBound + 1; m <= n; ++m)
        if (is_prime(static_cast<unsigned long long>(m))) out.push_back(m);
    return out;
}

long long nth_prime(int i) {
    const auto& ps = sieve_primes();
    if (i < static_cast<int>(ps.size())) return ps[i];
    long long p = ps.back();
    for (int j = static_cast<int>(ps.size()); j <= i; ++j) p = next_prime(p);
    return p;
}

int valuation(long long n, long long p) {
    if (n == 0) throw std::invalid_argument("valuation: n must be nonzero");
    if (p < 2) throw std::invalid_argument("valuation: p must be >= 2");
    int v = 0;
    while (n % p == 0) n /= p, ++v;
    return v;
}

int valuation(const Int& n, long long p) {
    if (n == 0) throw std::invalid_argument("valuation: n must be nonzero");
    Int m = abs(n), q, r;
    int v = 0;
    Int pp = to_int(p);
    for (;;) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), pp.get_mpz_t());
        if (r != 0) break;
        m = q;
        ++v;
    }
    return v;
}

int xi(long long p, long long k) {
    if (!is_prime(static_cast<unsigned long long>(p))) throw std::invalid_argument("xi: p must be prime");
    if (k < 1) throw std::invalid_argument("xi: k must be >= 1");
    int nu = valuation(k, p);
    return p == 2 ? nu + 2 : nu + 1;
}

int lambda_min(std::span<const long long> a, long long p) {
    if (a.empty()) throw std::invalid_argument("lambda_min: empty coefficient vector");
    int best = -1;
    for (long long aj : a) {
        if (aj == 0) throw std::invalid_argument("lambda_min: zero coefficient");
        int v = valuation(aj, p);
        if (best < 0 || v < best) best = v;
    }
    return best;
}

LocalExponents local_exponents(long long p, long long k, std::span<const long long> a) {
    LocalExponents e;
    e.p = p;
    e.nu = valuation(k, p);
    e.xi = xi(p, k);
    e.lambda = lambda_min(a, p);
    return e;
}

int lambda_min(std::span<const Int> a, long long p) {
    if (a.empty()) throw std::invalid_argument("lambda_min: empty coefficient vector");
    int best = -1;
    for (const Int& aj : a) {
        if (aj == 0) throw std::invalid_argument("lambda_min: zero coefficient");
        int v = valuation(aj, p);
        if (best < 0 || v < best) best = v;
    }
    return best;
}

std::vector<long long> kth_power_residues(long long p, int n, long long k) {
    if (n < 1) throw std::invalid_argument("kth_power_residues: level must be >= 1");
    long long m = 1;
    for (int i = 0; i < n; ++i) {
        if (m > budget() / p)
            throw resource_error("kth_power_residues: p^n exceeds budget " + std::to_string(budget()));
        m *= p;
    }
    std::vector<bool> seen(static_cast<size_t>(m), false);
    std::vector<long long> out;
    for (long long h = 1; h < m; ++h) {
        if (h % p == 0) continue;
        long long v = powmod(h, k, m);
        if (!seen[static_cast<size_t>(v)]) {
            seen[static_cast<size_t>(v)] = true;
            out.push_back(v);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {
std::atomic<int> g_threads{0};
}

long long parse_budget(const char* text) {
    if (text) {
        long long v = std::atoll(text);
        if (v > 0) return v;
    }
    return 1LL << 26;
}

long long budget() {
    static const long long b = parse_budget(std::getenv("PHL_BUDGET"));
    return b;
}

void set_threads(int n) { g_threads.store(std::max(0, n)); }

int threads() {
    int t = g_threads.load();
    if (t > 0) return t;
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

void parallel_for(long long n, const std::function<void(long long, int)>& body) {
    int nt = std::min<long long>(threads(), std::max<long long>(1, n));
    if (nt <= 1) {
        for (long long i = 0; i < n; ++i) body(i, 0);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(nt));
    pool.reserve(nt);
    for (int w = 0; w < nt; ++w) {
        pool.emplace_back([=, &body, &errors] {
            try {
                for (long long i = w; i < n; i += nt) body(i, w);
            } catch (...) {
                errors[static_cast<size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace phl
