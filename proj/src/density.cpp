#include "phl/density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>

#include "phl/locals.hpp"
#include "phl/modcount.hpp"
#include "phl/numtheory.hpp"

namespace phl {

namespace {

Int binom(int n, int m) {
    if (m < 0 || m > n) return 0;
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, m);
    return r;
}

Int multinomial(int s, const std::vector<int>& parts) {
    Int r;
    mpz_fac_ui(r.get_mpz_t(), s);
    for (int m : parts) {
        Int f;
        mpz_fac_ui(f.get_mpz_t(), m);
        r /= f;
    }
    return r;
}

long long p0_cached(int s, long long k);

bool closed_form_applies(int s, long long k, long long p) {
    return p > 2 && k % p != 0 && p >= p0_cached(s, k);
}

std::mutex g_p0_mu;
std::map<std::pair<int, long long>, long long> g_p0;

long long p0_cached(int s, long long k) {
    std::lock_guard<std::mutex> lock(g_p0_mu);
    auto key = std::make_pair(s, k);
    auto it = g_p0.find(key);
    if (it == g_p0.end()) it = g_p0.emplace(key, p0(s, k)).first;
    return it->second;
}

// soluble-class count mod p at level xi=1 via coset types: a coefficient class
// is 0 or one of g = (k;p-1) unit cosets of the k-th powers; solubility only
// depends on the multiset of types
Int brute_count_level1(int s, long long k, long long p) {
    std::vector<long long> pk = kth_power_residues(p, 1, k);
    // coset reps and value sets
    std::vector<std::vector<long long>> coset_sets;
    std::vector<bool> assigned(static_cast<size_t>(p), false);
    for (long long u = 1; u < p; ++u) {
        if (assigned[static_cast<size_t>(u)]) continue;
        std::vector<long long> cs;
        for (long long v : pk) {
            long long w = mulmod(u, v, p);
            assigned[static_cast<size_t>(w)] = true;
            cs.push_back(w);
        }
        coset_sets.push_back(std::move(cs));
    }
    // types: index 0 = zero class (1 value), 1..g = cosets ((p-1)/g values each)
    const int ntypes = static_cast<int>(coset_sets.size()) + 1;
    Int soluble = 0;

    std::vector<int> m(ntypes, 0);
    auto reachable = [&]() -> bool {
        std::vector<bool> cur(static_cast<size_t>(p), false);
        cur[0] = true;
        for (int t = 1; t < ntypes; ++t) {
            for (int rep = 0; rep < m[t]; ++rep) {
                std::vector<bool> next(static_cast<size_t>(p), false);
                for (long long w = 0; w < p; ++w) {
                    if (!cur[static_cast<size_t>(w)]) continue;
                    for (long long v : coset_sets[t - 1]) {
                        long long x = w + v;
                        if (x >= p) x -= p;
                        next[static_cast<size_t>(x)] = true;
                    }
                }
                cur = std::move(next);
            }
        }
        return cur[0];
    };
    long long coset_size = (p - 1) / static_cast<long long>(coset_sets.size());

    std::function<void(int, int)> rec = [&](int t, int left) {
        if (t == ntypes - 1) {
            m[t] = left;
            if (m[0] != s && reachable()) {
                Int w = multinomial(s, m);
                for (int i = 1; i < ntypes; ++i) w *= ipow(coset_size, static_cast<unsigned long>(m[i]));
                soluble += w;
            }
            return;
        }
        for (int c = 0; c <= left; ++c) {
            m[t] = c;
            rec(t + 1, left - c);
        }
    };
    rec(0, s);
    return soluble;
}

// general level: value multisets mod p^xi with reachability per multiset
Int brute_count_general(int s, long long k, long long p, int level) {
    long long m = checked_prime_power(p, level);
    double classes = std::pow(static_cast<double>(m), s);
    if (classes > static_cast<double>(budget()))
        throw resource_error("delta_prime brute force: " + std::to_string(m) + "^" + std::to_string(s) +
                             " coefficient classes exceed budget " + std::to_string(budget()));
    Int soluble = 0;
    std::vector<long long> vals;
    std::function<void(long long)> rec = [&](long long lo) {
        if (static_cast<int>(vals.size()) == s) {
            bool all_div = true;
            for (long long v : vals)
                if (v % p != 0) all_div = false;
            if (all_div) return;
            if (units_reachable(vals, k, p, level)) {
                std::vector<int> mult;
                for (size_t i = 0; i < vals.size();) {
                    size_t j = i;
                    while (j < vals.size() && vals[j] == vals[i]) ++j;
                    mult.push_back(static_cast<int>(j - i));
                    i = j;
                }
                soluble += multinomial(s, mult);
            }
            return;
        }
        for (long long v = lo; v < m; ++v) {
            vals.push_back(v);
            rec(v);
            vals.pop_back();
        }
    };
    rec(0);
    return soluble;
}

}  // namespace

Rat delta_prime_closed(int s, long long k, long long p) {
    // 1 - p^-s - s(1-1/p)p^-(s-1) - (s(s-1)/2)(1-1/p)^2 (1-(p-1;k)^-1) p^-(s-2)
    Int g = to_int(std::gcd(p - 1, k));
    Rat invp = make_rat(1, p);
    Rat one(1);
    Rat term1 = make_rat(1, ipow(p, static_cast<unsigned long>(s)));
    Rat term2 = Rat(s) * (one - invp) * make_rat(1, ipow(p, static_cast<unsigned long>(s - 1)));
    Rat term3 = make_rat(Int(s) * Int(s - 1), 2) * (one - invp) * (one - invp) *
                (one - make_rat(1, g)) * make_rat(1, ipow(p, static_cast<unsigned long>(s - 2)));
    return one - term1 - term2 - term3;
}

DeltaPrime delta_prime_brute(int s, long long k, long long p) {
    int level = xi(p, k);
    DeltaPrime out;
    out.closed_form = false;
    out.total_classes = ipow(ipow(p, static_cast<unsigned long>(level)),
                             static_cast<unsigned long>(s));
    out.soluble_classes = (level == 1 && p > 2 && k % p != 0) ? brute_count_level1(s, k, p)
                                                              : brute_count_general(s, k, p, level);
    out.value = make_rat(out.soluble_classes, out.total_classes);
    return out;
}

DeltaPrime delta_prime_p(int s, long long k, long long p) {
    if (s < 4) throw std::invalid_argument("delta_prime_p: s must be >= 4");
    if (closed_form_applies(s, k, p)) {
        DeltaPrime out;
        out.closed_form = true;
        out.value = delta_prime_closed(s, k, p);
        out.total_classes = ipow(p, static_cast<unsigned long>(s));
        Rat cnt = out.value * Rat(out.total_classes);
        out.soluble_classes = cnt.get_num();  // exact: denominator divides p^s
        return out;
    }
    return delta_prime_brute(s, k, p);
}

Rat delta_p(int s, long long k, long long p) {
    Rat dp = delta_prime_p(s, k, p).value;
    Rat corr = Rat(1) - make_rat(1, ipow(p, static_cast<unsigned long>(s)));
    return dp / corr;
}

Rat delta_closed_formula(int s, long long k, long long p) {
    Int g = to_int(std::gcd(p - 1, k));
    Rat invp = make_rat(1, p);
    Rat one(1);
    Rat corr = one / (one - make_rat(1, ipow(p, static_cast<unsigned long>(s))));
    Rat inner = Rat(s) * (one - invp) * make_rat(1, ipow(p, static_cast<unsigned long>(s - 1))) +
                make_rat(Int(s) * Int(s - 1), 2) * (one - invp) * (one - invp) *
                    (one - make_rat(1, g)) * make_rat(1, ipow(p, static_cast<unsigned long>(s - 2)));
    return one - corr * inner;
}

Rat delta_tilde_p(int s, long long p) {
    Rat acc(0);
    Rat invp = make_rat(1, p);
    Rat q = Rat(1) - invp;
    for (int m = 0; m <= s - 3; ++m) {
        Rat t = Rat(binom(s, m));
        for (int i = 0; i < s - m; ++i) t *= q;
        for (int i = 0; i < m; ++i) t *= invp;
        acc += t;
    }
    return acc;
}

Rat delta_infinity(int s) {
    if (s < 2) throw std::invalid_argument("delta_infinity: s must be >= 2");
    return Rat(1) - make_rat(1, ipow(2, static_cast<unsigned long>(s - 1)));
}

DensityTable global_density(int s, long long k, long long prime_bound) {
    if (s < 4) throw std::invalid_argument("global_density: s must be >= 4");
    DensityTable t;
    t.s = s;
    t.k = k;
    t.prime_bound = prime_bound;
    t.delta_inf = delta_infinity(s);
    double value = to_double(t.delta_inf);
    for (long long p : primes_up_to(prime_bound)) {
        DeltaPrime dp = delta_prime_p(s, k, p);
        Rat d = dp.value / (Rat(1) - make_rat(1, ipow(p, static_cast<unsigned long>(s))));
        t.per_prime[p] = DensityTable::Row{dp.value, d, dp.closed_form ? "closed" : "brute"};
        value *= to_double(d);
    }
    t.global_value = value;
    // omitted-factor estimate: closed-form deficits over (P, 10P], then an
    // integral comparison modelled on deficit ~ p^-(s-2)
    double window = 0;
    for (long long p : primes_up_to(prime_bound * 10))
        if (p > prime_bound) window += 1.0 - to_double(delta_closed_formula(s, k, p));
    double pb = static_cast<double>(prime_bound) * 10;
    double d_edge = 1.0 - to_double(delta_closed_formula(s, k, next_prime(static_cast<long long>(pb))));
    double beyond = d_edge * pb / ((s - 3) * std::log(pb));
    t.global_tail_estimate = value * (window + beyond);
    return t;
}

void write_density_csv(const DensityTable& t, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open csv path " + path);
    f << "p,delta_prime_num,delta_prime_den,delta_num,delta_den,method\n";
    for (const auto& [p, row] : t.per_prime) {
        f << p << ',' << row.delta_prime.get_num().get_str() << ','
          << row.delta_prime.get_den().get_str() << ',' << row.delta.get_num().get_str() << ','
          << row.delta.get_den().get_str() << ',' << row.method << '\n';
    }
    f << "global,,,," << t.global_value << ",prime_bound=" << t.prime_bound << '\n';
}

EmpiricalCount empirical_cprime_density(int s, long long k, long long A) {
    if (s < 3) throw std::invalid_argument("empirical_cprime_density: s must be >= 3");
    if (A < 1) throw std::invalid_argument("empirical_cprime_density: A must be >= 1");
    double total = std::pow(2.0 * static_cast<double>(A), s);
    if (total > static_cast<double>(budget()))
        throw resource_error("empirical_cprime_density: (2A)^s = " + std::to_string(total) +
                             " exceeds budget " + std::to_string(budget()));

    // enumerate sorted coefficient multisets; membership is invariant under
    // coordinate permutation and global negation
    std::vector<std::vector<long long>> canon;
    std::vector<Int> weights;
    std::vector<long long> vals;
    std::function<void(long long)> rec = [&](long long lo) {
        if (static_cast<int>(vals.size()) == s) {
            std::vector<long long> neg(vals.rbegin(), vals.rend());
            for (auto& v : neg) v = -v;
            if (neg < vals) return;  // counted at its negation
            std::vector<int> mult;
            for (size_t i = 0; i < vals.size();) {
                size_t j = i;
                while (j < vals.size() && vals[j] == vals[i]) ++j;
                mult.push_back(static_cast<int>(j - i));
                i = j;
            }
            Int w = multinomial(s, mult);
            if (neg != vals) w *= 2;
            canon.push_back(vals);
            weights.push_back(w);
            return;
        }
        for (long long v = lo; v <= A; ++v) {
            if (v == 0) continue;
            vals.push_back(v);
            rec(v);
            vals.pop_back();
        }
    };
    rec(-A);

    std::vector<Int> partial(threads(), Int(0));
    parallel_for(static_cast<long long>(canon.size()), [&](long long i, int worker) {
        Equation eq(k, canon[static_cast<size_t>(i)]);
        if (membership_Cprime(eq).member) partial[static_cast<size_t>(worker)] += weights[static_cast<size_t>(i)];
    });
    EmpiricalCount out;
    out.member_count = 0;
    for (const Int& c : partial) out.member_count += c;
    out.total_count = ipow(2 * A, static_cast<unsigned long>(s));
    return out;
}

void CoprimeSpec::validate() const {
    if (s < 1) throw std::invalid_argument("CoprimeSpec: s must be >= 1");
    if (arity < 2) throw std::invalid_argument("CoprimeSpec: arity must be >= 2");
    if (r < 1) throw std::invalid_argument("CoprimeSpec: r must be >= 1");
    if (!q.empty() && static_cast<int>(q.size()) != s)
        throw std::invalid_argument("CoprimeSpec: q must have s entries");
    if (!b.empty() && b.size() != q.size())
        throw std::invalid_argument("CoprimeSpec: b must match q");
    for (long long qi : q)
        if (qi < 1 || r % qi != 0) throw std::invalid_argument("CoprimeSpec: each q_i must divide r");
    std::vector<long long> mods{r};
    for (long long ui : u) {
        if (ui < 1) throw std::invalid_argument("CoprimeSpec: u_i must be positive");
        mods.push_back(ui);
    }
    for (size_t i = 0; i < mods.size(); ++i)
        for (size_t j = i + 1; j < mods.size(); ++j)
            if (std::gcd(mods[i], mods[j]) != 1)
                throw std::invalid_argument("CoprimeSpec: r and the u_i must be pairwise coprime");
}

namespace {

// all prime factors of g divide r
bool r_coprime(long long g, long long r) {
    while (g > 1) {
        long long d = std::gcd(g, r);
        if (d == 1) return false;
        while (g % d == 0) g /= d;
    }
    return true;
}

}  // namespace

Int count_coprime_tuples(const CoprimeSpec& spec, long long n) {
    spec.validate();
    double work = std::pow(static_cast<double>(n), spec.s);
    if (work > static_cast<double>(budget()) * 4)
        throw resource_error("count_coprime_tuples: n^s = " + std::to_string(work) +
                             " exceeds budget " + std::to_string(budget() * 4));

    const int s = spec.s;
    std::vector<long long> a(static_cast<size_t>(s));
    Int count = 0;

    auto admissible = [&]() {
        // arity-wise r-coprime
        if (spec.arity <= s) {
            std::vector<int> idx(static_cast<size_t>(spec.arity));
            std::function<bool(int, int)> subsets = [&](int pos, int lo) -> bool {
                if (pos == spec.arity) {
                    long long g = 0;
                    for (int i : idx) g = std::gcd(g, a[static_cast<size_t>(i)]);
                    return r_coprime(g, spec.r);
                }
                for (int i = lo; i < s; ++i) {
                    idx[static_cast<size_t>(pos)] = i;
                    if (!subsets(pos + 1, i + 1)) return false;
                }
                return true;
            };
            if (!subsets(0, 0)) return false;
        }
        // i-wise r-coprime to u_i
        int imax = std::min(s, spec.arity - 1);
        for (int i = 1; i <= imax; ++i) {
            if (static_cast<int>(spec.u.size()) < i || spec.u[static_cast<size_t>(i - 1)] == 1) continue;
            long long ui = spec.u[static_cast<size_t>(i - 1)];
            std::vector<int> idx(static_cast<size_t>(i));
            std::function<bool(int, int)> subsets = [&](int pos, int lo) -> bool {
                if (pos == i) {
                    long long g = 0;
                    for (int j : idx) g = std::gcd(g, a[static_cast<size_t>(j)]);
                    return r_coprime(std::gcd(g, ui), spec.r);
                }
                for (int j = lo; j < s; ++j) {
                    idx[static_cast<size_t>(pos)] = j;
                    if (!subsets(pos + 1, j + 1)) return false;
                }
                return true;
            };
            if (!subsets(0, 0)) return false;
        }
        return true;
    };

    std::function<void(int)> rec = [&](int j) {
        if (j == s) {
            if (admissible()) ++count;
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

Rat coprime_factor_A(int s, int arity, long long p) {
    Rat acc(0);
    Rat invp = make_rat(1, p);
    Rat q = Rat(1) - invp;
    for (int m = 0; m < arity; ++m) {
        Rat t = Rat(binom(s, m));
        for (int i = 0; i < s - m; ++i) t *= q;
        for (int i = 0; i < m; ++i) t *= invp;
        acc += t;
    }
    return acc;
}

BracketedValue coprime_density_A(int s, int arity, long long r, long long prime_bound) {
    if (arity < 2) throw std::invalid_argument("coprime_density_A: arity must be >= 2");
    BracketedValue out;
    out.prime_bound = prime_bound;
    double v = 1.0;
    for (long long p : primes_up_to(prime_bound)) {
        if (r % p == 0) continue;
        v *= to_double(coprime_factor_A(s, arity, p));
    }
    out.value = v;
    // 1 - factor_p <= 2^s p^-arity: bracket below by the omitted product
    double pb = static_cast<double>(prime_bound);
    double tail = std::pow(2.0, s) *
                  (std::pow(pb, 1.0 - arity) / (arity - 1.0) + std::pow(pb, -static_cast<double>(arity)));
    out.upper = v;
    out.lower = v * std::max(0.0, 1.0 - tail);
    return out;
}

Rat coprime_f(int s, int arity, long long r, int i, long long u) {
    Rat acc(1);
    for (auto [p, e] : factorize(u).factors) {
        if (r % p == 0) continue;
        Int num = 0, den = 0;
        for (int m = 0; m < arity; ++m) {
            Int t = binom(s, m) * ipow(p - 1, static_cast<unsigned long>(arity - 1 - m));
            den += t;
            if (m >= i) num += t;
        }
        acc *= make_rat(den - num, den);
    }
    return acc;
}

Rat coprime_alpha(int s, int i, long long d) {
    Rat acc = make_rat(ipow(d, static_cast<unsigned long>(i)), 1);
    for (auto [p, e] : factorize(d).factors) {
        Rat invp = make_rat(1, p);
        Rat q = Rat(1) - invp;
        Rat f(0);
        for (int m = 0; m <= i; ++m) {
            Rat t = Rat(binom(s, m));
            for (int j = 0; j < i - m; ++j) t *= q;
            for (int j = 0; j < m; ++j) t *= invp;
            f += t;
        }
        acc *= f;
    }
    return acc;
}

}  // namespace phl
