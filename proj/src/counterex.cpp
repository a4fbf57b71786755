#include "phl/counterex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <json.hpp>

#include "phl/locals.hpp"
#include "phl/modcount.hpp"
#include "phl/numtheory.hpp"
#include "phl/search.hpp"

namespace phl {

namespace {

using ordered_json = nlohmann::ordered_json;

Int isqrt_exact(const Int& n) {
    Int r = iroot(n, 2);
    return r * r == n ? r : Int(-1);
}

bool fits_equation(const std::vector<Int>& coeffs, std::vector<long long>& out) {
    out.clear();
    for (const Int& c : coeffs) {
        if (!fits_ll(c)) return false;
        out.push_back(c.get_si());
    }
    return true;
}

// unit solubility of sum c_j x_j^k == 0 (mod p^level) with big coefficients
bool wide_soluble(const std::vector<Int>& coeffs, long long k, long long p, int level) {
    long long m = checked_prime_power(p, level);
    std::vector<long long> red;
    red.reserve(coeffs.size());
    for (const Int& c : coeffs) {
        Int r = c % to_int(m);
        if (r < 0) r += to_int(m);
        red.push_back(r.get_si());
    }
    return units_reachable(red, k, p, level);
}

// strip the given primes, then factor the (desk-scale) remainder
std::set<long long> prime_support(Int n, const std::vector<long long>& known) {
    std::set<long long> out;
    n = abs(n);
    if (n == 0) throw std::invalid_argument("prime_support: zero");
    for (long long p : known) {
        Int pp = to_int(p);
        if (n % pp == 0) {
            out.insert(p);
            while (n % pp == 0) n /= pp;
        }
    }
    if (n > 1) {
        if (!fits_ll(n))
            throw resource_error("prime_support: residual cofactor too large to factor");
        for (auto [p, e] : factorize(n.get_si()).factors) out.insert(p);
    }
    return out;
}

void push(std::vector<ChecklistItem>& list, const std::string& name, bool ok,
          const std::string& note = "") {
    list.push_back(ChecklistItem{name, ok, note});
}

bool all_ok(const std::vector<ChecklistItem>& list) {
    return std::all_of(list.begin(), list.end(), [](const ChecklistItem& c) { return c.ok; });
}

// local solubility of the wide equation over an explicit prime list
ChecklistItem wide_local_check(const std::vector<Int>& coeffs, long long k,
                               const std::set<long long>& primes) {
    for (long long p : primes) {
        int lam = lambda_min(std::span<const Int>(coeffs.data(), coeffs.size()), p);
        if (!wide_soluble(coeffs, k, p, xi(p, k) + lam))
            return ChecklistItem{"locally soluble at every relevant prime", false,
                                 "fails in the units mod " + std::to_string(p) + "^" +
                                     std::to_string(xi(p, k) + lam)};
    }
    std::string who;
    for (long long p : primes) who += (who.empty() ? "" : ",") + std::to_string(p);
    return ChecklistItem{"locally soluble at every relevant prime", true, "checked p in {" + who + "}"};
}

}  // namespace

std::string family_name(CertFamily f) {
    switch (f) {
        case CertFamily::pythagorean: return "pythagorean";
        case CertFamily::fermat: return "fermat";
        case CertFamily::blocked: return "blocked";
        case CertFamily::claim: return "claim";
    }
    return "claim";
}

std::pair<long long, long long> pythagorean_params(const PythagoreanTriple& t) {
    if (t.a <= 0 || t.b <= 0 || t.c <= 0)
        throw std::invalid_argument("pythagorean_params: sides must be positive");
    if (t.a * t.a + t.b * t.b != t.c * t.c)
        throw std::invalid_argument("pythagorean_params: not a Pythagorean triple");
    if (t.b % 2 != 0) throw std::invalid_argument("pythagorean_params: b must be even");
    if (std::gcd(std::gcd(t.a, t.b), t.c) != 1)
        throw std::invalid_argument("pythagorean_params: triple is not primitive");
    Int m2 = to_int(t.c + t.a) / 2, n2 = to_int(t.c - t.a) / 2;
    Int m = isqrt_exact(m2), n = isqrt_exact(n2);
    if (m <= 0 || n <= 0 || 2 * m * n != to_int(t.b))
        throw std::invalid_argument("pythagorean_params: parametrisation does not exist");
    return {m.get_si(), n.get_si()};
}

CounterexampleCert build_pythag_counterexample(const PythagoreanTriple& t, long long r) {
    auto [m, n] = pythagorean_params(t);  // validates the triple
    (void)m;
    (void)n;
    CounterexampleCert cert;
    cert.family = CertFamily::pythagorean;
    cert.k = 2;
    Int a = to_int(t.a), b = to_int(t.b), c = to_int(t.c), R = to_int(r);
    cert.coeffs = {a * a, b * b, -c * c * R * R};
    cert.parameters = {{"a", std::to_string(t.a)},
                       {"b", std::to_string(t.b)},
                       {"c", std::to_string(t.c)},
                       {"r", std::to_string(r)}};

    push(cert.checklist, "r > 1 and r is not prime",
         r > 1 && !is_prime(static_cast<unsigned long long>(r)));
    bool all14 = true;
    if (r > 1)
        for (auto [p, e] : factorize(r).factors)
            if (p % 4 != 1) all14 = false;
    push(cert.checklist, "every prime of r is 1 mod 4", r > 1 && all14);
    push(cert.checklist, "r coprime to a and b", std::gcd(r, t.a) == 1 && std::gcd(r, t.b) == 1);

    // the four case bounds of the no-solution argument
    Int A1 = 2 * a * a * b * b;
    Int A2 = a * a * b * b * b * b / 16 + a * a * b * b;
    Int A3 = a * a * b * b + 4 * a * a * a * a * b * b;
    Int A4 = a * a + a * b + b * b / 2;
    double C = std::max(std::sqrt(to_double(Rat(std::max({A1, A2, A3})))), to_double(Rat(A4)));
    bool r_big = R * R > A1 && R * R > A2 && R * R > A3 && R > A4;
    push(cert.checklist, "r > C(a,b,c)",
         r_big, "C(a,b,c) = " + std::to_string(C) + ", z-bound C/r = " + std::to_string(C / r));

    std::vector<long long> ll;
    if (fits_equation(cert.coeffs, ll)) {
        Equation eq(2, ll);
        LocalReport rep = membership_Cprime(eq);
        push(cert.checklist, "locally soluble at every relevant prime", rep.member && rep.real_positive,
             rep.blocker ? "blocked at p = " + std::to_string(*rep.blocker) : "");
        // any prime solution has x <= cC/a, y <= cC/b, z <= C/r
        long long bound = static_cast<long long>(
            std::ceil(C * static_cast<double>(t.c) / static_cast<double>(std::min(t.a, t.b)))) + 1;
        cert.search_bound = to_int(bound);
        if (r_big && rep.member) {
            SearchSummary sum = count_prime_solutions(eq, bound);
            push(cert.checklist, "no prime solutions within the derived bound", sum.unweighted == 0,
                 "exhaustive up to " + std::to_string(bound));
            cert.exhaustively_checked = sum.unweighted == 0;
        }
    } else {
        push(cert.checklist, "coefficients fit the search range", false,
             "c^2 r^2 exceeds the machine range");
    }
    cert.accepted = all_ok(cert.checklist);
    return cert;
}

Int fermat_Q(long long k) {
    if (k < 3) throw std::invalid_argument("fermat_Q: k must be >= 3");
    long long threshold = p0(3, k);
    std::set<long long> ps;
    for (long long p : primes_up_to(threshold - 1)) ps.insert(p);
    for (auto [p, e] : factorize(k).factors) ps.insert(p);
    Int q = 1;
    for (long long p : ps) q *= ipow(p, static_cast<unsigned long>(xi(p, k)));
    return q;
}

CounterexampleCert build_fermat_counterexample(long long k, const Int& a, const Int& b, const Int& c) {
    if (k < 3) throw std::invalid_argument("build_fermat_counterexample: k must be >= 3");
    if (a <= 0 || b <= 0 || c <= 0)
        throw std::invalid_argument("build_fermat_counterexample: a, b, c must be positive");
    CounterexampleCert cert;
    cert.family = CertFamily::fermat;
    cert.k = k;
    cert.flt_conditional = true;
    unsigned long uk = static_cast<unsigned long>(k);
    cert.coeffs = {ipow(a, uk), ipow(b, uk), -ipow(c, uk)};
    cert.parameters = {{"a", a.get_str()}, {"b", b.get_str()}, {"c", c.get_str()},
                       {"Q", fermat_Q(k).get_str()}};

    push(cert.checklist, "a, b, c pairwise coprime",
         gcd(a, b) == 1 && gcd(a, c) == 1 && gcd(b, c) == 1);
    Int Q = fermat_Q(k);
    push(cert.checklist, "Q divides ab", (a * b) % Q == 0);

    long long threshold = p0(3, k);
    std::vector<long long> known = primes_up_to(threshold);
    for (auto [p, e] : factorize(k).factors) known.push_back(p);

    bool cond_c = true;
    std::string bad;
    for (long long p : prime_support(c, known)) {
        long long g = std::gcd(k, p - 1);
        bool kth = p == 2 || ((p - 1) / g) % 2 == 0 || k % 2 == 1;
        if (!kth) {
            cond_c = false;
            bad = std::to_string(p);
        }
    }
    push(cert.checklist, "-1 is a k-th power mod every prime of c", cond_c,
         cond_c ? "" : "fails at p = " + bad);

    std::set<long long> locals;
    for (long long p : primes_up_to(threshold - 1)) locals.insert(p);
    for (auto [p, e] : factorize(k).factors) locals.insert(p);
    for (const Int& x : {a, b, c})
        for (long long p : prime_support(x, known)) locals.insert(p);
    cert.checklist.push_back(wide_local_check(cert.coeffs, k, locals));

    // token scan; absence itself rests on Fermat's last theorem
    long long scan = 100;
    cert.search_bound = to_int(scan);
    bool clean = true;
    Int ck = ipow(c, uk);
    for (long long x : primes_up_to(scan)) {
        for (long long y : primes_up_to(scan)) {
            Int lhs = ipow(a, uk) * ipow(x, uk) + ipow(b, uk) * ipow(y, uk);
            if (lhs % ck != 0) continue;
            Int zk = lhs / ck;
            Int z = iroot(zk, uk);
            if (ipow(z, uk) == zk && fits_ll(z) && is_prime(static_cast<unsigned long long>(z.get_si())))
                clean = false;
        }
    }
    push(cert.checklist, "no small prime solutions (scan)", clean,
         "x, y scanned up to " + std::to_string(scan) + "; absence in general is conditional on FLT");
    cert.exhaustively_checked = false;
    cert.accepted = all_ok(cert.checklist);
    return cert;
}

CounterexampleCert build_blocked_family(int s, long long k, const std::vector<long long>& b,
                                        bool literal_paper_form) {
    if (s < 2) throw std::invalid_argument("build_blocked_family: s must be >= 2");
    if (static_cast<int>(b.size()) != s)
        throw std::invalid_argument("build_blocked_family: b must have s entries");
    for (long long bj : b)
        if (bj == 0) throw std::invalid_argument("build_blocked_family: zero entry in b");

    CounterexampleCert cert;
    cert.family = CertFamily::blocked;
    cert.k = k;

    // first s primes not dividing any b_j
    std::vector<long long> ps;
    for (long long p = 2; static_cast<int>(ps.size()) < s; p = next_prime(p)) {
        bool divides = false;
        for (long long bj : b)
            if (bj % p == 0) divides = true;
        if (!divides) ps.push_back(p);
    }
    unsigned long expo = literal_paper_form ? 1ul : static_cast<unsigned long>(k);
    cert.coeffs.resize(static_cast<size_t>(s));
    for (int j = 0; j < s; ++j) {
        Int prod = 1;
        for (int i = 0; i < s; ++i)
            if (i != j) prod *= ipow(ps[static_cast<size_t>(i)], expo);
        cert.coeffs[static_cast<size_t>(j)] = to_int(b[static_cast<size_t>(j)]) * prod;
    }
    std::string bstr, pstr;
    for (int j = 0; j < s; ++j) {
        bstr += (j ? "," : "") + std::to_string(b[static_cast<size_t>(j)]);
        pstr += (j ? "," : "") + std::to_string(ps[static_cast<size_t>(j)]);
    }
    cert.parameters = {{"b", bstr},
                       {"primes", pstr},
                       {"product_exponent", std::to_string(expo)}};

    bool pos = false, neg = false;
    for (long long bj : b) (bj > 0 ? pos : neg) = true;
    push(cert.checklist, "coefficients have mixed signs", pos && neg);

    bool forcing = true;
    for (int j = 0; j < s && forcing; ++j) {
        if (cert.coeffs[static_cast<size_t>(j)] % to_int(ps[static_cast<size_t>(j)]) == 0) forcing = false;
        for (int i = 0; i < s; ++i)
            if (i != j && cert.coeffs[static_cast<size_t>(i)] % to_int(ps[static_cast<size_t>(j)]) != 0)
                forcing = false;
    }
    push(cert.checklist, "divisibility forces x_j = p_j", forcing,
         "p_j divides every coefficient except the j-th");

    Int residue = 0;
    for (int j = 0; j < s; ++j)
        residue += cert.coeffs[static_cast<size_t>(j)] *
                   ipow(ps[static_cast<size_t>(j)], static_cast<unsigned long>(k));
    push(cert.checklist, "forced candidate fails", residue != 0,
         residue != 0 ? "substituting (" + pstr + ") leaves " + residue.get_str()
                      : "candidate (" + pstr + ") solves the equation; construction rejected");

    cert.search_bound = 0;  // forcing leaves a single candidate at any bound
    cert.exhaustively_checked = forcing && residue != 0;
    cert.accepted = all_ok(cert.checklist);
    return cert;
}

VerifyReport verify_counterexample(const CounterexampleCert& cert, std::optional<Int> bound_override) {
    VerifyReport rep;
    auto reject = [&](const std::string& why) {
        rep.verified = false;
        rep.reason = why;
        return rep;
    };

    switch (cert.family) {
        case CertFamily::pythagorean: {
            PythagoreanTriple t{};
            long long r = 0;
            for (const auto& [key, val] : cert.parameters) {
                if (key == "a") t.a = std::stoll(val);
                if (key == "b") t.b = std::stoll(val);
                if (key == "c") t.c = std::stoll(val);
                if (key == "r") r = std::stoll(val);
            }
            CounterexampleCert fresh = build_pythag_counterexample(t, r);
            rep.checks = fresh.checklist;
            if (fresh.coeffs != cert.coeffs) return reject("certificate coefficients do not match the parameters");
            if (!fresh.accepted) return reject("certificate conditions fail on re-check");
            if (bound_override) {
                std::vector<long long> ll;
                fits_equation(cert.coeffs, ll);
                SearchSummary sum = count_prime_solutions(Equation(cert.k, ll), bound_override->get_si());
                if (sum.unweighted != 0) return reject("prime solution found below the override bound");
            }
            rep.verified = true;
            rep.unconditional = true;
            return rep;
        }
        case CertFamily::fermat: {
            Int a, b, c;
            for (const auto& [key, val] : cert.parameters) {
                if (key == "a") a = Int(val);
                if (key == "b") b = Int(val);
                if (key == "c") c = Int(val);
            }
            CounterexampleCert fresh = build_fermat_counterexample(cert.k, a, b, c);
            rep.checks = fresh.checklist;
            if (fresh.coeffs != cert.coeffs) return reject("certificate coefficients do not match the parameters");
            if (!fresh.accepted) return reject("certificate conditions fail on re-check");
            rep.verified = true;
            rep.unconditional = false;  // flagged: rests on Fermat's last theorem
            return rep;
        }
        case CertFamily::blocked: {
            std::vector<long long> b;
            bool literal = false;
            for (const auto& [key, val] : cert.parameters) {
                if (key == "b") {
                    size_t pos = 0;
                    while (pos < val.size()) {
                        size_t comma = val.find(',', pos);
                        if (comma == std::string::npos) comma = val.size();
                        b.push_back(std::stoll(val.substr(pos, comma - pos)));
                        pos = comma + 1;
                    }
                }
                if (key == "product_exponent") literal = val == "1";
            }
            CounterexampleCert fresh =
                build_blocked_family(static_cast<int>(b.size()), cert.k, b, literal);
            rep.checks = fresh.checklist;
            if (fresh.coeffs != cert.coeffs) return reject("certificate coefficients do not match the parameters");
            if (!fresh.accepted) return reject("certificate conditions fail on re-check");
            rep.verified = true;
            rep.unconditional = true;
            return rep;
        }
        case CertFamily::claim: {
            std::vector<long long> ll;
            if (!fits_equation(cert.coeffs, ll))
                return reject("claim coefficients exceed the search range");
            Equation eq(cert.k, ll);
            LocalReport lrep = membership_Cprime(eq);
            for (const auto& [p, data] : lrep.per_prime)
                push(rep.checks, "Z_p^x solubility at p = " + std::to_string(p), data.soluble);
            push(rep.checks, "solution in positive reals", lrep.real_positive);
            if (!lrep.real_positive)
                return reject("coefficients all share a sign: no solution in positive reals");
            if (lrep.blocker) {
                std::string blockers;
                for (const auto& [p, data] : lrep.per_prime)
                    if (!data.soluble) blockers += (blockers.empty() ? "" : ", ") + std::to_string(p);
                return reject("not locally soluble at " + blockers +
                              ": the prime Hasse principle holds vacuously, not a counterexample");
            }
            Int bound = bound_override ? *bound_override : cert.search_bound;
            if (bound <= 0) return reject("claim certificate needs a positive search bound");
            SearchSummary sum = count_prime_solutions(eq, bound.get_si());
            push(rep.checks, "no prime solutions up to the bound", sum.unweighted == 0);
            if (sum.unweighted != 0) return reject("prime solution exists within the bound");
            rep.verified = true;
            rep.unconditional = false;  // absence established only up to the bound
            return rep;
        }
    }
    return reject("unknown certificate family");
}

std::string cert_to_json(const CounterexampleCert& cert) {
    ordered_json j;
    j["schema"] = "phl.cert.v1";
    j["family"] = family_name(cert.family);
    j["k"] = cert.k;
    ordered_json coeffs = ordered_json::array();
    for (const Int& c : cert.coeffs) coeffs.push_back(c.get_str());
    j["coeffs"] = coeffs;
    ordered_json params = ordered_json::object();
    for (const auto& [key, val] : cert.parameters) params[key] = val;
    j["parameters"] = params;
    ordered_json list = ordered_json::array();
    for (const auto& item : cert.checklist)
        list.push_back(ordered_json{{"name", item.name}, {"ok", item.ok}, {"note", item.note}});
    j["checklist"] = list;
    j["search_bound"] = cert.search_bound.get_str();
    j["exhaustively_checked"] = cert.exhaustively_checked;
    j["flt_conditional"] = cert.flt_conditional;
    j["accepted"] = cert.accepted;
    return j.dump(2);
}

CounterexampleCert cert_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    CounterexampleCert cert;
    std::string fam = j.at("family").get<std::string>();
    if (fam == "pythagorean") cert.family = CertFamily::pythagorean;
    else if (fam == "fermat") cert.family = CertFamily::fermat;
    else if (fam == "blocked") cert.family = CertFamily::blocked;
    else cert.family = CertFamily::claim;
    cert.k = j.at("k").get<long long>();
    for (const auto& c : j.at("coeffs")) cert.coeffs.emplace_back(c.get<std::string>());
    if (j.contains("parameters"))
        for (const auto& [key, val] : j.at("parameters").items())
            cert.parameters.emplace_back(key, val.get<std::string>());
    if (j.contains("checklist"))
        for (const auto& item : j.at("checklist"))
            cert.checklist.push_back(ChecklistItem{item.at("name").get<std::string>(),
                                                   item.at("ok").get<bool>(),
                                                   item.value("note", "")});
    if (j.contains("search_bound")) cert.search_bound = Int(j.at("search_bound").get<std::string>());
    cert.exhaustively_checked = j.value("exhaustively_checked", false);
    cert.flt_conditional = j.value("flt_conditional", false);
    cert.accepted = j.value("accepted", false);
    return cert;
}

}  // namespace phl
