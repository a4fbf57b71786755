#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phl/ints.hpp"

namespace phl {

struct PythagoreanTriple {
    long long a, b, c;  // a^2 + b^2 = c^2, b even, primitive
};

// the (m, n) of a = m^2-n^2, b = 2mn, c = m^2+n^2; rejects non-primitive or
// odd-b input
std::pair<long long, long long> pythagorean_params(const PythagoreanTriple& t);

enum class CertFamily { pythagorean, fermat, blocked, claim };

std::string family_name(CertFamily f);

struct ChecklistItem {
    std::string name;
    bool ok;
    std::string note;
};

struct CounterexampleCert {
    CertFamily family = CertFamily::claim;
    long long k = 2;
    std::vector<Int> coeffs;
    std::vector<std::pair<std::string, std::string>> parameters;  // stable order
    std::vector<ChecklistItem> checklist;
    Int search_bound = 0;          // 0: absence independent of any bound (blocked family)
    bool exhaustively_checked = false;
    bool flt_conditional = false;  // absence rests on Fermat's last theorem
    bool accepted = false;
};

// a^2 x^2 + b^2 y^2 - c^2 r^2 z^2 with the three admissibility conditions on r
CounterexampleCert build_pythag_counterexample(const PythagoreanTriple& t, long long r);

// a^k x^k + b^k y^k - c^k z^k, k >= 3, Q | ab; absence via Fermat's last theorem
CounterexampleCert build_fermat_counterexample(long long k, const Int& a, const Int& b, const Int& c);
Int fermat_Q(long long k);

// a_j = b_j prod_{i != j} p_i^k over the first s primes avoiding the b_j;
// literal_paper_form uses exponent-1 products instead and is validated by the
// same direct substitution
CounterexampleCert build_blocked_family(int s, long long k, const std::vector<long long>& b,
                                        bool literal_paper_form = false);

struct VerifyReport {
    bool verified = false;
    bool unconditional = false;
    std::vector<ChecklistItem> checks;
    std::string reason;  // set when rejected
};

VerifyReport verify_counterexample(const CounterexampleCert& cert,
                                   std::optional<Int> search_bound_override = {});

std::string cert_to_json(const CounterexampleCert& cert);
CounterexampleCert cert_from_json(const std::string& text);

}  // namespace phl
