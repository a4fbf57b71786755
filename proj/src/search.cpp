#include "phl/search.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <unordered_map>

#include "phl/numtheory.hpp"
#include "phl/singular.hpp"

namespace phl {

namespace {

using i128 = __int128;

struct Hash128 {
    size_t operator()(i128 v) const {
        unsigned long long lo = static_cast<unsigned long long>(v);
        unsigned long long hi = static_cast<unsigned long long>(static_cast<unsigned __int128>(v) >> 64);
        unsigned long long x = lo ^ (hi * 0x9e3779b97f4a7c15ULL);
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return static_cast<size_t>(x);
    }
};

struct SideEntry {
    long long count = 0;
    double weight = 0;
    std::vector<long long> min_tuple;       // lex-least partial tuple
    std::vector<long long> min_with_top;    // lex-least containing the top prime (may be empty)
};

struct MitmContext {
    std::vector<long long> primes;
    std::vector<double> logs;
    std::vector<std::vector<i128>> terms;  // terms[j][i] = a_j * p_i^k
};

MitmContext make_context(const std::vector<long long>& a, long long k,
                         const std::vector<long long>& primes) {
    MitmContext ctx;
    ctx.primes = primes;
    ctx.logs.reserve(primes.size());
    for (long long p : primes) ctx.logs.push_back(std::log(static_cast<double>(p)));
    // range sanity: |sum| must fit a 128-bit key
    Int cap = 0;
    for (long long aj : a) cap += abs(to_int(aj));
    if (!primes.empty()) cap *= ipow(primes.back(), static_cast<unsigned long>(k));
    Int lim = ipow(Int(2), 126);
    if (cap >= lim)
        throw resource_error("search: partial sums exceed the 128-bit key range");
    ctx.terms.assign(a.size(), {});
    for (size_t j = 0; j < a.size(); ++j) {
        ctx.terms[j].reserve(primes.size());
        for (long long p : primes) {
            i128 pk = 1;
            for (long long e = 0; e < k; ++e) pk *= p;
            ctx.terms[j].push_back(static_cast<i128>(a[j]) * pk);
        }
    }
    return ctx;
}

void check_budget(size_t np, int half, const char* what) {
    double work = std::pow(static_cast<double>(np), half);
    if (work > static_cast<double>(budget()))
        throw resource_error(std::string(what) + ": pi(B)^" + std::to_string(half) + " = " +
                             std::to_string(static_cast<double>(np)) + "^" + std::to_string(half) +
                             " = " + std::to_string(work) + " exceeds budget " +
                             std::to_string(budget()));
}

// enumerate tuples over ctx.primes for coefficient indices [lo, hi)
template <typename F>
void enumerate_side(const MitmContext& ctx, int lo, int hi, const F& leaf) {
    std::vector<int> idx(static_cast<size_t>(hi - lo), 0);
    std::vector<long long> tuple(static_cast<size_t>(hi - lo), 0);
    std::function<void(int, i128, double)> rec = [&](int j, i128 sum, double w) {
        if (j == hi - lo) {
            leaf(tuple, sum, w);
            return;
        }
        for (size_t i = 0; i < ctx.primes.size(); ++i) {
            tuple[static_cast<size_t>(j)] = ctx.primes[i];
            rec(j + 1, sum + ctx.terms[static_cast<size_t>(lo + j)][i], w * ctx.logs[i]);
        }
    };
    rec(0, 0, 1.0);
}

struct MitmResult {
    Int unweighted = 0;
    double weighted = 0;
    std::optional<std::vector<long long>> lex_least;
    std::optional<std::vector<long long>> lex_least_with_top;  // containing primes.back()
};

// all prime tuples with sum_j a_j x_j^k == target over the given prime set
MitmResult mitm_search(const std::vector<long long>& a, long long k,
                       const std::vector<long long>& primes, i128 target, bool track_top = false) {
    const int s = static_cast<int>(a.size());
    const int left = s / 2, right = s - left;
    MitmResult res;
    if (primes.empty()) return res;
    check_budget(primes.size(), right, "count_prime_solutions");
    MitmContext ctx = make_context(a, k, primes);
    const long long top = primes.back();

    std::unordered_map<i128, SideEntry, Hash128> table;
    table.reserve(static_cast<size_t>(std::pow(static_cast<double>(primes.size()), left)) * 2 + 16);
    enumerate_side(ctx, 0, left, [&](const std::vector<long long>& tuple, i128 sum, double w) {
        SideEntry& e = table[sum];
        e.count += 1;
        e.weight += w;
        if (e.min_tuple.empty() || tuple < e.min_tuple) e.min_tuple = tuple;
        if (track_top && std::find(tuple.begin(), tuple.end(), top) != tuple.end()) {
            if (e.min_with_top.empty() || tuple < e.min_with_top) e.min_with_top = tuple;
        }
    });

    auto consider = [&](std::optional<std::vector<long long>>& best, const std::vector<long long>& l,
                        const std::vector<long long>& r) {
        std::vector<long long> full = l;
        full.insert(full.end(), r.begin(), r.end());
        if (!best || full < *best) best = full;
    };

    enumerate_side(ctx, left, s, [&](const std::vector<long long>& tuple, i128 sum, double w) {
        auto it = table.find(target - sum);
        if (it == table.end()) return;
        const SideEntry& e = it->second;
        res.unweighted += to_int(e.count);
        res.weighted += e.weight * w;
        consider(res.lex_least, e.min_tuple, tuple);
        if (track_top) {
            bool right_has = std::find(tuple.begin(), tuple.end(), top) != tuple.end();
            if (right_has) {
                consider(res.lex_least_with_top, e.min_tuple, tuple);
            } else if (!e.min_with_top.empty()) {
                consider(res.lex_least_with_top, e.min_with_top, tuple);
            }
        }
    });
    return res;
}

SolutionRecord make_record(const std::vector<long long>& a, long long k,
                           const std::vector<long long>& x, long long B, const Int& target) {
    Int acc = 0;
    for (size_t j = 0; j < a.size(); ++j)
        acc += to_int(a[j]) * ipow(x[j], static_cast<unsigned long>(k));
    if (acc != target)
        throw std::logic_error("search: witness failed exact re-verification");
    SolutionRecord rec;
    rec.x = x;
    rec.bound = B;
    rec.weight = 1.0;
    for (long long xj : x) rec.weight *= std::log(static_cast<double>(xj));
    return rec;
}

}  // namespace

SearchSummary count_prime_solutions(const Equation& eq, long long B,
                                    std::optional<double> window_psi) {
    SearchSummary out;
    std::vector<long long> primes = primes_up_to(B);
    if (window_psi) {
        double cutoff = static_cast<double>(B) * std::pow(std::log(static_cast<double>(B)), -*window_psi);
        long long lo = static_cast<long long>(std::floor(cutoff));
        out.window_lo = lo;
        std::erase_if(primes, [&](long long p) { return static_cast<double>(p) <= cutoff; });
    }
    MitmResult res = mitm_search(eq.a, eq.k, primes, 0);
    out.unweighted = res.unweighted;
    out.weighted = res.weighted;
    if (res.lex_least) out.witness = make_record(eq.a, eq.k, *res.lex_least, B, 0);
    return out;
}

std::optional<SolutionRecord> smallest_solution(const Equation& eq, std::optional<long long> limit) {
    long long lim;
    if (limit) {
        lim = *limit;
    } else {
        int s_hat = eq.s() - 1;
        if (s_hat % 2 != 0) --s_hat;  // largest even number below s
        if (s_hat < 3 * eq.k)
            throw std::invalid_argument(
                "smallest_solution: s_hat < 3k, the default bound does not apply; supply a limit");
        double expo = 1.0 / static_cast<double>(s_hat - eq.k);
        lim = static_cast<long long>(
            std::ceil(std::pow(2.0, expo) * std::pow(static_cast<double>(eq.max_abs()), expo)));
    }
    std::vector<long long> primes = primes_up_to(lim);
    std::vector<long long> prefix;
    for (long long p : primes) {
        prefix.push_back(p);
        MitmResult res = mitm_search(eq.a, eq.k, prefix, 0, /*track_top=*/true);
        if (res.lex_least_with_top)
            return make_record(eq.a, eq.k, *res.lex_least_with_top, lim, 0);
    }
    return std::nullopt;
}

std::optional<SolutionRecord> solve_inhomogeneous(const std::vector<long long>& a, const Int& n,
                                                  long long k, long long B) {
    if (a.empty()) throw std::invalid_argument("solve_inhomogeneous: empty coefficients");
    for (long long aj : a)
        if (aj == 0) throw std::invalid_argument("solve_inhomogeneous: zero coefficient");
    if (k < 1) throw std::invalid_argument("solve_inhomogeneous: k must be >= 1");
    Int lim = ipow(Int(2), 126);
    if (abs(n) >= lim) throw resource_error("solve_inhomogeneous: target exceeds the key range");
    i128 target = 0;
    {
        bool negative = n < 0;
        Int m = abs(n);
        Int hi = m >> 64, loo = m - (hi << 64);
        target = (static_cast<i128>(hi.get_ui()) << 64) + static_cast<i128>(loo.get_ui());
        if (negative) target = -target;
    }
    std::vector<long long> primes = primes_up_to(B);
    MitmResult res = mitm_search(a, k, primes, target);
    if (!res.lex_least) return std::nullopt;
    return make_record(a, k, *res.lex_least, B, n);
}

ConverseVerdict check_partial_converse(const Equation& eq, double lambda, long long B) {
    if (eq.s() < 3) throw std::invalid_argument("check_partial_converse: s must be >= 3");
    ConverseVerdict out;
    out.bound = B;
    out.threshold = std::pow(static_cast<double>(eq.max_abs()), lambda);
    std::vector<long long> primes = primes_up_to(B);
    std::erase_if(primes, [&](long long p) { return static_cast<double>(p) <= out.threshold; });
    MitmResult res = mitm_search(eq.a, eq.k, primes, 0);
    if (!res.lex_least) {
        out.outcome = ConverseOutcome::holds_vacuously;
        return out;
    }
    out.witness = make_record(eq.a, eq.k, *res.lex_least, B, 0);
    LocalReport rep = membership_Cprime(eq);
    if (rep.member) {
        out.outcome = ConverseOutcome::holds_witnessed;
    } else {
        out.outcome = ConverseOutcome::violated;
        out.blocker = rep.blocker;
    }
    return out;
}

MsqStats mean_square_experiment(int s, long long k, long long A, long long B,
                                std::optional<long long> sample, bool collect_rows) {
    if (s < 5) throw std::invalid_argument("mean_square_experiment: s must be >= 5");
    MsqStats stats;
    stats.s = s;
    stats.k = k;
    stats.A = A;
    stats.B = B;
    double box = std::pow(2.0 * static_cast<double>(A), s);
    stats.exhaustive = !sample;
    if (!sample && box > static_cast<double>(budget()))
        throw resource_error("mean_square_experiment: (2A)^s = " + std::to_string(box) +
                             " exceeds budget " + std::to_string(budget()) +
                             "; pass a sample size");

    // rho, S, J are invariant under coordinate permutation and global negation
    std::map<std::vector<long long>, std::pair<double, double>> cache;  // canon -> (rho, pred)
    SeriesOptions sopt;
    sopt.prime_bound = 30;
    sopt.window_factor = 1;  // skip the exact tail window; only the value is used here
    sopt.analytic_cutoff = 20000;
    QuadratureOptions qopt;
    qopt.tol = 1e-4;

    auto eval_tuple = [&](const std::vector<long long>& a) {
        std::vector<long long> c1 = a, c2 = a;
        std::sort(c1.begin(), c1.end());
        for (auto& v : c2) v = -v;
        std::sort(c2.begin(), c2.end());
        std::vector<long long> canon = std::min(c1, c2);
        auto it = cache.find(canon);
        if (it == cache.end()) {
            Equation eq(k, canon);
            double rho = count_prime_solutions(eq, B).weighted;
            Prediction pred = predicted_count(eq, B, sopt, qopt);
            it = cache.emplace(canon, std::make_pair(rho, pred.value)).first;
        }
        return it->second;
    };

    double acc = 0;
    long long count = 0;
    auto visit = [&](const std::vector<long long>& a) {
        auto [rho, pred] = eval_tuple(a);
        double err = rho - pred;
        acc += err * err;
        ++count;
        if (collect_rows) stats.rows.push_back(MsqRow{a, rho, pred, err * err});
    };

    if (!sample) {
        std::vector<long long> a(static_cast<size_t>(s));
        std::function<void(int)> rec = [&](int j) {
            if (j == s) {
                visit(a);
                return;
            }
            for (long long v = -A; v <= A; ++v) {
                if (v == 0) continue;
                a[static_cast<size_t>(j)] = v;
                rec(j + 1);
            }
        };
        rec(0);
    } else {
        std::mt19937_64 rng(0x9a0c5eedULL ^ (static_cast<unsigned long long>(s) << 40) ^
                            (static_cast<unsigned long long>(k) << 28) ^
                            (static_cast<unsigned long long>(A) << 14) ^
                            static_cast<unsigned long long>(B));
        std::uniform_int_distribution<long long> dist(1, 2 * A);
        std::vector<long long> a(static_cast<size_t>(s));
        for (long long t = 0; t < *sample; ++t) {
            for (auto& v : a) {
                long long d = dist(rng);
                v = d <= A ? d : A - d;  // uniform over [-A,-1] ∪ [1,A]
            }
            visit(a);
        }
    }
    stats.tuples = to_int(count);
    stats.mean_sq = count ? acc / static_cast<double>(count) : 0.0;
    double est_sum = stats.mean_sq * box;
    stats.normalized = est_sum / (std::pow(static_cast<double>(A), s - 2) *
                                  std::pow(static_cast<double>(B), 2.0 * (s - k)));
    return stats;
}

void write_msq_csv(const MsqStats& stats, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open csv path " + path);
    for (int j = 1; j <= stats.s; ++j) f << "a_" << j << ',';
    f << "rho,prediction,sq_error\n";
    for (const auto& row : stats.rows) {
        for (long long aj : row.a) f << aj << ',';
        f << row.rho << ',' << row.prediction << ',' << row.sq_error << '\n';
    }
}

}  // namespace phl
