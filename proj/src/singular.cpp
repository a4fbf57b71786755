#include "phl/singular.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <numbers>
#include <set>

#include "phl/expsums.hpp"
#include "phl/modcount.hpp"
#include "phl/numtheory.hpp"
#include "phl/quadrature.hpp"

namespace phl {

namespace {

// |T_a(p)| <= (p-1)^{1-s} p^{s/2} (k;p-1)^s, from |W(p,m)| <= p^{1/2}(k;p-1);
// valid whenever p divides no coefficient
double crude_prime_term(long long p, int s, long long k) {
    double g = static_cast<double>(std::gcd(k, p - 1));
    double pp = static_cast<double>(p);
    return std::pow(pp - 1.0, 1.0 - s) * std::pow(pp, 0.5 * s) * std::pow(g, s);
}

// sum over primes > Pprime of the crude term: numeric prime sum to the cutoff,
// integer-sum comparison beyond (f decreasing; exponent 1 - s/2 <= -3/2)
double analytic_tail(long long p_start, int s, long long k, long long cutoff,
                     const std::set<long long>& skip = {}) {
    double acc = 0;
    for (long long p : primes_up_to(cutoff))
        if (p > p_start && !skip.count(p)) acc += crude_prime_term(p, s, k);
    // beyond the cutoff: (n-1)^{1-s} <= e^{(s-1)/cutoff} n^{1-s}, so the term
    // is at most k^s c_corr n^{1-s/2}; integral comparison over integers
    double c = static_cast<double>(cutoff);
    double ks = std::pow(static_cast<double>(k), s) * std::exp((s - 1.0) / c);
    double expo = 1.0 - 0.5 * s;  // < -1 for s >= 5
    acc += ks * (std::pow(c, expo + 1.0) / (-expo - 1.0) + std::pow(c, expo));
    return acc;
}

long long max_lambda_level(const Equation& eq, long long p) {
    return xi(p, eq.k) + lambda_min(std::span<const long long>(eq.a), p);
}

// sum_{n=1}^{xi+lambda} |T_a(p^n)| exactly (zero beyond by the vanishing lemma)
Rat exact_abs_tail_at(const Equation& eq, long long p) {
    Rat acc(0);
    int top = static_cast<int>(max_lambda_level(eq, p));
    for (int n = 1; n <= top; ++n) {
        Rat t = local_factor_T_exact(eq.a, p, n, eq.k);
        acc += abs(t);
    }
    return acc;
}

// primes dividing some coefficient: the generic |W(p,m)| <= sqrt(p)(k;p-1)
// bound does not cover the W(p,0) = p-1 factors, so these primes get a
// corrected term (p-1)^{1-s+d} (sqrt(p) k)^{s-d} with d divisible coefficients
double coefficient_divisor_terms(const Equation& eq, long long above,
                                 const std::set<long long>& skip) {
    std::map<long long, int> hits;
    for (long long aj : eq.a)
        for (auto [p, e] : factorize(aj).factors) ++hits[p];
    double acc = 0;
    for (auto [p, d] : hits) {
        if (p <= above || skip.count(p)) continue;
        double pp = static_cast<double>(p);
        acc += std::pow(pp - 1.0, 1.0 - eq.s() + d) *
               std::pow(std::sqrt(pp) * static_cast<double>(eq.k), eq.s() - d);
    }
    return acc;
}

}  // namespace

SingularValue singular_series(const Equation& eq, const SeriesOptions& opt) {
    if (eq.s() < 5)
        throw std::invalid_argument("singular_series: s must be >= 5 (absolute convergence)");
    SingularValue out;
    std::set<long long> ps;
    for (long long p : primes_up_to(opt.prime_bound)) ps.insert(p);
    for (long long p : relevant_primes(eq)) ps.insert(p);

    Rat product(1);
    bool zero = false;
    for (long long p : ps) {
        Rat chi = chi_p(eq, p);
        out.exact_factors[p] = chi;
        if (chi == 0) zero = true;
        product *= chi;
    }
    out.truncation = "primes <= " + std::to_string(opt.prime_bound) + " plus relevant primes";
    if (zero) {
        out.value = 0;
        out.tail_bound = 0;  // some chi_p = 0: the full product is exactly 0
        return out;
    }
    out.value = to_double(product);

    // window [P, P']: exact |chi_p - 1| per prime (all such p have lambda = 0,
    // p coprime to k, so only T_a(p) survives)
    long long pprime = std::max<long long>(opt.prime_bound * opt.window_factor, opt.prime_bound);
    if (opt.window_factor > 1) pprime = std::max<long long>(pprime, 200);
    double log_excess = 0;
    for (long long p : primes_up_to(pprime)) {
        if (ps.count(p)) continue;
        Rat t = exact_abs_tail_at(eq, p);
        double e = to_double(t);
        log_excess += std::log1p(e);
    }
    double analytic = analytic_tail(pprime, eq.s(), eq.k, std::max(opt.analytic_cutoff, pprime), ps) +
                      coefficient_divisor_terms(eq, pprime, ps);
    double total = std::expm1(log_excess + analytic);
    out.tail_bound = std::abs(out.value) * total;
    return out;
}

SeriesSum singular_series_qsum(const Equation& eq, long long q_bound, const SeriesOptions& opt) {
    if (eq.s() < 5) throw std::invalid_argument("singular_series_qsum: s must be >= 5");
    SeriesSum out;
    out.q_bound = q_bound;
    double acc = 0, abs_acc = 0;
    for (long long q = 1; q <= q_bound; ++q) {
        auto t = local_factor_T(eq.a, q, eq.k);
        acc += t.value.real();
        abs_acc += std::abs(t.value);
    }
    out.value = acc;

    // q-tail: sum_{q>Q} |T(q)| <= prod_p beta_p - sum_{q<=Q} |T(q)|,
    // beta_p = 1 + sum_n |T(p^n)| (finite by the vanishing lemma)
    long long pprime = std::max<long long>(opt.prime_bound * opt.window_factor, 200);
    for (long long p : relevant_primes(eq)) pprime = std::max(pprime, p);
    std::set<long long> small;
    for (long long p : primes_up_to(pprime)) small.insert(p);
    double log_prod = 0;
    for (long long p : small) log_prod += std::log1p(to_double(exact_abs_tail_at(eq, p)));
    log_prod += analytic_tail(pprime, eq.s(), eq.k, std::max(opt.analytic_cutoff, pprime)) +
                coefficient_divisor_terms(eq, pprime, small);
    double full_abs = std::exp(log_prod);
    out.tail_bound = std::max(0.0, full_abs - abs_acc) + 1e-9;
    return out;
}

SingularIntegral singular_integral(const Equation& eq, const QuadratureOptions& opt) {
    if (eq.s() < eq.k + 1)
        throw std::invalid_argument("singular_integral: requires s >= k+1 for a convergent tail");
    SingularIntegral out;
    out.mixed_signs = eq.mixed_signs();
    if (!out.mixed_signs) {
        out.value = 0;
        out.tail_bound = 0;
        out.range = 0;
        return out;  // same-sign coefficients: J vanishes identically
    }

    const int s = eq.s();
    const long long k = eq.k;
    const double ck = 1.0 + 1.0 / (k * std::numbers::pi);  // |v(b)| <= ck |b|^{-1/k}
    double prod_ainv = 1.0;
    for (long long aj : eq.a) prod_ainv *= std::pow(std::abs(static_cast<double>(aj)), -1.0 / k);
    double sk = static_cast<double>(s) / k;
    auto tail_at = [&](double R) {
        return 2.0 * std::pow(ck, s) * prod_ainv * std::pow(R, 1.0 - sk) / (sk - 1.0);
    };
    double R;
    if (opt.range_override > 0) {
        R = opt.range_override;
    } else {
        R = std::pow(opt.tol / (2.0 * std::pow(ck, s) * prod_ainv) * (sk - 1.0), 1.0 / (1.0 - sk));
        R = std::clamp(R, 1.0, 1e7);
    }

    auto integrand = [&](double beta) {
        std::complex<double> prod = 1.0;
        for (long long aj : eq.a) prod *= v_beta(static_cast<double>(aj) * beta, k);
        return 2.0 * prod.real();  // v(-b) = conj(v(b)): fold the negative axis
    };
    // panel seed at the fastest oscillation scale 1/max|a_j|
    double seed_h = 3.0 / static_cast<double>(eq.max_abs());
    QuadResult qr = adaptive_gk15(integrand, 0.0, R, opt.tol, 2'000'000, seed_h);
    out.value = qr.value;
    out.range = R;
    out.tail_bound = tail_at(R) + qr.error_estimate;
    return out;
}

Prediction predicted_count(const Equation& eq, long long B, const SeriesOptions& sopt,
                           const QuadratureOptions& qopt) {
    if (eq.s() < 5) throw std::invalid_argument("predicted_count: s must be >= 5");
    Prediction out;
    out.series = singular_series(eq, sopt);
    out.integral = singular_integral(eq, qopt);
    double scale = std::pow(static_cast<double>(B), static_cast<double>(eq.s() - eq.k));
    out.value = out.series.value * out.integral.value * scale;
    out.error_bound = (std::abs(out.series.value) * out.integral.tail_bound +
                       std::abs(out.integral.value) * out.series.tail_bound +
                       out.series.tail_bound * out.integral.tail_bound) *
                      scale;
    return out;
}

}  // namespace phl
