#pragma once

#include <optional>
#include <vector>

#include "phl/ints.hpp"
#include "phl/locals.hpp"

namespace phl {

struct SolutionRecord {
    std::vector<long long> x;  // primes, verified exactly against the equation
    double weight = 0;         // prod log x_j
    long long bound = 0;       // search bound B
};

struct SearchSummary {
    double weighted = 0;  // rho_a(B) (or the windowed variant)
    Int unweighted = 0;
    std::optional<SolutionRecord> witness;  // lexicographically least
    std::optional<long long> window_lo;     // exclusive lower cutoff, if windowed
};

// exact meet-in-the-middle count of prime solutions with every x_j <= B;
// window_psi restricts to B(log B)^{-psi} < x_j <= B
SearchSummary count_prime_solutions(const Equation& eq, long long B,
                                    std::optional<double> window_psi = {});

// witness minimising max x_j, ties broken lexicographically; limit defaults to
// the smallest-solution bound ceil(2^{1/(s_hat-k)} |a|^{1/(s_hat-k)}) when
// s_hat >= 3k, and must be supplied otherwise
std::optional<SolutionRecord> smallest_solution(const Equation& eq,
                                                std::optional<long long> limit = {});

// witness of sum a_j x_j^k = n in primes <= B (lexicographically least)
std::optional<SolutionRecord> solve_inhomogeneous(const std::vector<long long>& a, const Int& n,
                                                  long long k, long long B);

enum class ConverseOutcome { holds_witnessed, holds_vacuously, violated };

struct ConverseVerdict {
    ConverseOutcome outcome;
    std::optional<SolutionRecord> witness;
    std::optional<long long> blocker;
    double threshold = 0;  // |a|^lambda
    long long bound = 0;
};

// hunts for a prime solution with min_j x_j > |a|^lambda below B, then tests
// membership of the coefficient vector
ConverseVerdict check_partial_converse(const Equation& eq, double lambda, long long B = 1000);

struct MsqRow {
    std::vector<long long> a;
    double rho = 0;
    double prediction = 0;
    double sq_error = 0;
};

struct MsqStats {
    int s = 0;
    long long k = 0, A = 0, B = 0;
    Int tuples = 0;
    bool exhaustive = true;
    double mean_sq = 0;
    double normalized = 0;  // estimated box sum over A^{s-2} B^{2s-2k}
    std::vector<MsqRow> rows;
};

MsqStats mean_square_experiment(int s, long long k, long long A, long long B,
                                std::optional<long long> sample = {}, bool collect_rows = false);

void write_msq_csv(const MsqStats& stats, const std::string& path);

}  // namespace phl
