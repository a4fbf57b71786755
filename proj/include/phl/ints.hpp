#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace phl {

using Int = mpz_class;
using Rat = mpq_class;

// (base^exp) mod m for m < 2^62, exp >= 0
inline long long powmod(long long base, long long exp, long long m) {
    if (m <= 0) throw std::invalid_argument("powmod: modulus must be positive");
    if (m == 1) return 0;
    unsigned long long b = static_cast<unsigned long long>(((base % m) + m) % m);
    unsigned long long r = 1, mm = static_cast<unsigned long long>(m);
    while (exp > 0) {
        if (exp & 1) r = static_cast<unsigned long long>((static_cast<unsigned __int128>(r) * b) % mm);
        b = static_cast<unsigned long long>((static_cast<unsigned __int128>(b) * b) % mm);
        exp >>= 1;
    }
    return static_cast<long long>(r);
}

inline long long mulmod(long long x, long long y, long long m) {
    unsigned long long a = static_cast<unsigned long long>(((x % m) + m) % m);
    unsigned long long b = static_cast<unsigned long long>(((y % m) + m) % m);
    return static_cast<long long>((static_cast<unsigned __int128>(a) * b) % static_cast<unsigned long long>(m));
}

// gmpxx has no long long constructor on LP64; long is the same width here
inline Int to_int(long long v) { return Int(static_cast<long>(v)); }

inline Int ipow(const Int& base, unsigned long exp) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

inline Int ipow(long long base, unsigned long exp) { return ipow(to_int(base), exp); }

inline Rat make_rat(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat make_rat(long long num, long long den) { return make_rat(to_int(num), to_int(den)); }
inline Rat make_rat(const Int& num, long long den) { return make_rat(num, to_int(den)); }
inline Rat make_rat(long long num, const Int& den) { return make_rat(to_int(num), den); }

inline double to_double(const Rat& r) { return r.get_d(); }

inline std::string to_string(const Int& n) { return n.get_str(); }

// floor of the k-th root, n >= 0
inline Int iroot(const Int& n, unsigned long k) {
    Int r;
    mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
    return r;
}

inline bool fits_ll(const Int& n) { return n.fits_slong_p(); }

struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Enumeration / histogram budget (element counts). PHL_BUDGET overrides.
long long budget();
long long parse_budget(const char* text);  // default 2^26 on null/invalid

// Global worker count for parallel sweeps (results independent of it).
void set_threads(int n);
int threads();

// Deterministic parallel sweep: calls body(i) for i in [0, n); chunks are
// assigned statically so any per-chunk accumulation merges in index order.
void parallel_for(long long n, const std::function<void(long long, int)>& body);

}  // namespace phl
