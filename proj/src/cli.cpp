#include "phl/cli.hpp"

#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "phl/counterex.hpp"
#include "phl/density.hpp"
#include "phl/locals.hpp"
#include "phl/numtheory.hpp"
#include "phl/search.hpp"
#include "phl/singular.hpp"

namespace phl::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json jrat(const Rat& r) {
    return ordered_json{{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}};
}

std::vector<long long> parse_coeffs(const std::string& text) {
    std::vector<long long> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        size_t pos = 0;
        long long v = std::stoll(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("bad coefficient token: " + tok);
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty coefficient list");
    return out;
}

ordered_json jwitness(const std::optional<SolutionRecord>& w) {
    if (!w) return nullptr;
    ordered_json arr = ordered_json::array();
    for (long long x : w->x) arr.push_back(x);
    return arr;
}

struct Args {
    std::string a, b_vec, n, triple, cert_path, csv;
    long long k = 2, p = 2, B = 100, A = 4, r = 0, limit = 0, bound = 0;
    long long prime_bound = 100, sample = 0;
    int s = 4;
    double lambda = 1.0, psi = -1.0, tol = 1e-6;
    bool literal = false;
    std::string fermat_a = "", fermat_b = "1", fermat_c = "1";
};

}  // namespace

CommandResult run(const std::vector<std::string>& argv) {
    CLI::App app{"diagonal Diophantine equations in prime variables"};
    app.require_subcommand(1);
    app.fallthrough();
    int nthreads = 0;
    app.add_option("--threads", nthreads, "worker threads (default: machine parallelism)");

    Args args;
    ordered_json out;

    auto* chi = app.add_subcommand("chi", "exact p-adic density chi_p");
    chi->add_option("--a", args.a)->required();
    chi->add_option("--k", args.k)->required();
    chi->add_option("--p", args.p)->required();

    auto* member = app.add_subcommand("member", "membership of the locally soluble locus");
    member->add_option("--a", args.a)->required();
    member->add_option("--k", args.k)->required();

    auto* series = app.add_subcommand("series", "singular series Euler product");
    series->add_option("--a", args.a)->required();
    series->add_option("--k", args.k)->required();
    series->add_option("--prime-bound", args.prime_bound);

    auto* integral = app.add_subcommand("integral", "singular integral");
    integral->add_option("--a", args.a)->required();
    integral->add_option("--k", args.k)->required();
    integral->add_option("--tol", args.tol);

    auto* delta = app.add_subcommand("delta", "per-prime coefficient density");
    delta->add_option("--s", args.s)->required();
    delta->add_option("--k", args.k)->required();
    delta->add_option("--p", args.p)->required();

    auto* global = app.add_subcommand("global-density", "density of the locally soluble locus");
    global->add_option("--s", args.s)->required();
    global->add_option("--k", args.k)->required();
    global->add_option("--prime-bound", args.prime_bound);
    global->add_option("--csv", args.csv);

    auto* empirical = app.add_subcommand("empirical", "exhaustive membership count in a box");
    empirical->add_option("--s", args.s)->required();
    empirical->add_option("--k", args.k)->required();
    empirical->add_option("--A", args.A)->required();

    auto* search = app.add_subcommand("search", "count prime solutions up to B");
    search->add_option("--a", args.a)->required();
    search->add_option("--k", args.k)->required();
    search->add_option("--B", args.B)->required();
    search->add_option("--window-psi", args.psi);

    auto* smallest = app.add_subcommand("smallest", "least prime solution");
    smallest->add_option("--a", args.a)->required();
    smallest->add_option("--k", args.k)->required();
    smallest->add_option("--limit", args.limit);

    auto* inhom = app.add_subcommand("inhom", "prime solution of an inhomogeneous target");
    inhom->add_option("--a", args.a)->required();
    inhom->add_option("--n", args.n)->required();
    inhom->add_option("--k", args.k)->required();
    inhom->add_option("--B", args.B)->required();

    auto* converse = app.add_subcommand("converse", "partial converse check");
    converse->add_option("--a", args.a)->required();
    converse->add_option("--k", args.k)->required();
    converse->add_option("--lambda", args.lambda)->required();
    converse->add_option("--B", args.B);

    auto* msq = app.add_subcommand("msq", "mean-square error experiment");
    msq->add_option("--s", args.s)->required();
    msq->add_option("--k", args.k)->required();
    msq->add_option("--A", args.A)->required();
    msq->add_option("--B", args.B)->required();
    msq->add_option("--sample", args.sample);
    msq->add_option("--csv", args.csv);

    auto* cx = app.add_subcommand("counterexample", "construct counterexample certificates");
    auto* cx_py = cx->add_subcommand("pythag", "Pythagorean family (k = 2)");
    cx_py->add_option("--triple", args.triple, "a,b,c")->required();
    cx_py->add_option("--r", args.r)->required();
    auto* cx_fe = cx->add_subcommand("fermat", "Fermat family (k >= 3)");
    cx_fe->add_option("--k", args.k)->required();
    cx_fe->add_option("--a", args.fermat_a, "defaults to Q(k)");
    cx_fe->add_option("--b", args.fermat_b);
    cx_fe->add_option("--c", args.fermat_c);
    auto* cx_bl = cx->add_subcommand("blocked", "divisibility-blocked family");
    cx_bl->add_option("--s", args.s)->required();
    cx_bl->add_option("--k", args.k)->required();
    cx_bl->add_option("--b", args.b_vec)->required();
    cx_bl->add_flag("--literal", args.literal, "use the paper's exponent-1 products");
    cx->require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "re-verify a certificate file");
    verify->add_option("--cert", args.cert_path)->required();
    verify->add_option("--bound", args.bound);

    app.add_subcommand("paper-example", "reproduce the worked density example");

    std::vector<std::string> tokens(argv.rbegin(), argv.rend());
    try {
        app.parse(tokens);
    } catch (const CLI::ParseError& e) {
        ordered_json err{{"schema", "phl.error.v1"}, {"kind", "usage"}, {"message", e.what()}};
        return {3, err.dump(2)};
    }

    if (nthreads > 0) set_threads(nthreads);

    try {
        if (chi->parsed()) {
            Equation eq(args.k, parse_coeffs(args.a));
            Rat c = chi_p(eq, args.p);
            int level = xi(args.p, eq.k) + lambda_min(std::span<const long long>(eq.a), args.p);
            out = {{"schema", "phl.chi.v1"},
                   {"p", args.p},
                   {"k", args.k},
                   {"chi", jrat(c)},
                   {"soluble", c > 0},
                   {"check_level", level}};
        } else if (member->parsed()) {
            Equation eq(args.k, parse_coeffs(args.a));
            LocalReport rep = membership_Cprime(eq);
            ordered_json primes = ordered_json::array();
            for (const auto& [p, d] : rep.per_prime)
                primes.push_back({{"p", p},
                                  {"soluble", d.soluble},
                                  {"chi", jrat(d.chi)},
                                  {"check_level", d.check_level}});
            out = {{"schema", "phl.member.v1"},
                   {"member", rep.member},
                   {"real_positive", rep.real_positive},
                   {"blocker", rep.blocker ? ordered_json(*rep.blocker) : ordered_json(nullptr)},
                   {"per_prime", primes}};
        } else if (series->parsed()) {
            Equation eq(args.k, parse_coeffs(args.a));
            SeriesOptions opt;
            opt.prime_bound = args.prime_bound;
            SingularValue sv = singular_series(eq, opt);
            ordered_json factors = ordered_json::array();
            for (const auto& [p, chi] : sv.exact_factors)
                factors.push_back({{"p", p}, {"chi", jrat(chi)}});
            out = {{"schema", "phl.series.v1"},
                   {"value", sv.value},
                   {"tail_bound", sv.tail_bound},
                   {"truncation", sv.truncation},
                   {"factors", factors}};
        } else if (integral->parsed()) {
            Equation eq(args.k, parse_coeffs(args.a));
            QuadratureOptions opt;
            opt.tol = args.tol;
            SingularIntegral j = singular_integral(eq, opt);
            out = {{"schema", "phl.integral.v1"},
                   {"value", j.value},
                   {"tail_bound", j.tail_bound},
                   {"sign_verdict", j.mixed_signs ? "mixed-signs" : "all-same-sign"},
                   {"range", j.range}};
        } else if (delta->parsed()) {
            DeltaPrime dp = delta_prime_p(args.s, args.k, args.p);
            Rat d = dp.value / (Rat(1) - make_rat(1, ipow(args.p, static_cast<unsigned long>(args.s))));
            out = {{"schema", "phl.delta.v1"},
                   {"s", args.s},
                   {"k", args.k},
                   {"p", args.p},
                   {"delta", jrat(d)},
                   {"delta_prime", jrat(dp.value)},
                   {"method", dp.closed_form ? "closed" : "brute"},
                   {"soluble_classes", dp.soluble_classes.get_str()},
                   {"total_classes", dp.total_classes.get_str()}};
        } else if (global->parsed()) {
            DensityTable t = global_density(args.s, args.k, args.prime_bound);
            if (!args.csv.empty()) write_density_csv(t, args.csv);
            ordered_json primes = ordered_json::array();
            for (const auto& [p, row] : t.per_prime)
                primes.push_back({{"p", p},
                                  {"delta", jrat(row.delta)},
                                  {"delta_prime", jrat(row.delta_prime)},
                                  {"method", row.method}});
            out = {{"schema", "phl.global_density.v1"},
                   {"s", args.s},
                   {"k", args.k},
                   {"prime_bound", args.prime_bound},
                   {"delta_infinity", jrat(t.delta_inf)},
                   {"value", t.global_value},
                   {"tail_estimate", t.global_tail_estimate},
                   {"per_prime", primes}};
        } else if (empirical->parsed()) {
            EmpiricalCount c = empirical_cprime_density(args.s, args.k, args.A);
            double frac = Rat(c.member_count).get_d() / Rat(c.total_count).get_d();
            out = {{"schema", "phl.empirical.v1"},
                   {"s", args.s},
                   {"k", args.k},
                   {"A", args.A},
                   {"member_count", c.member_count.get_str()},
                   {"total_count", c.total_count.get_str()},
                   {"fraction", frac}};
        } else if (search->parsed()) {
            Equation eq(args.k, parse_coeffs(args.a));
            std::optional<double> psi;
            if (args.psi >= 0) psi = args.psi;
            SearchSummary sum = count_prime_solutions(eq, args.B, psi);
            out = {{"schema", "phl.search.v1"},
                   {"B", args.B},
                   {"weighted", sum.weighted},
                   {"unweighted", sum.unweighted.get_str()},
                   {"witness", jwitness(sum.witness)},
                   {"window_lo",
                    sum.window_lo ? ordered_json(*sum.window_lo) : ordered_json(nullptr)}};
        } else if (smallest->parsed()) {
            Equation eq(args.k, parse_coeffs(args.a));
            std::optional<long long> limit;
            if (args.limit > 0) limit = args.limit;
            std::optional<SolutionRecord> rec;
            long long used_limit = args.limit;
            try {
                rec = smallest_solution(eq, limit);
            } catch (const std::invalid_argument&) {
                used_limit = 1000;  // documented fallback when s_hat < 3k leaves no default
                rec = smallest_solution(eq, used_limit);
            }
            out = {{"schema", "phl.smallest.v1"},
                   {"solution", jwitness(rec)},
                   {"limit", used_limit}};
        } else if (inhom->parsed()) {
            auto rec = solve_inhomogeneous(parse_coeffs(args.a), Int(args.n), args.k, args.B);
            out = {{"schema", "phl.inhom.v1"},
                   {"n", args.n},
                   {"B", args.B},
                   {"solution", jwitness(rec)}};
        } else if (converse->parsed()) {
            Equation eq(args.k, parse_coeffs(args.a));
            ConverseVerdict v = check_partial_converse(eq, args.lambda, args.B);
            std::string verdict = v.outcome == ConverseOutcome::holds_witnessed ? "holds-witnessed"
                                  : v.outcome == ConverseOutcome::holds_vacuously
                                      ? "holds-vacuously"
                                      : "violated";
            out = {{"schema", "phl.converse.v1"},
                   {"lambda", args.lambda},
                   {"threshold", v.threshold},
                   {"B", v.bound},
                   {"verdict", verdict},
                   {"witness", jwitness(v.witness)},
                   {"blocker", v.blocker ? ordered_json(*v.blocker) : ordered_json(nullptr)}};
        } else if (msq->parsed()) {
            std::optional<long long> sample;
            if (args.sample > 0) sample = args.sample;
            MsqStats st = mean_square_experiment(args.s, args.k, args.A, args.B, sample,
                                                 !args.csv.empty());
            if (!args.csv.empty()) write_msq_csv(st, args.csv);
            out = {{"schema", "phl.msq.v1"},
                   {"s", args.s},
                   {"k", args.k},
                   {"A", args.A},
                   {"B", args.B},
                   {"tuples", st.tuples.get_str()},
                   {"exhaustive", st.exhaustive},
                   {"mean_sq", st.mean_sq},
                   {"normalized", st.normalized}};
        } else if (cx->parsed()) {
            CounterexampleCert cert;
            if (cx_py->parsed()) {
                auto t = parse_coeffs(args.triple);
                if (t.size() != 3) throw std::invalid_argument("--triple needs a,b,c");
                cert = build_pythag_counterexample(PythagoreanTriple{t[0], t[1], t[2]}, args.r);
            } else if (cx_fe->parsed()) {
                Int a = args.fermat_a.empty() ? fermat_Q(args.k) : Int(args.fermat_a);
                cert = build_fermat_counterexample(args.k, a, Int(args.fermat_b), Int(args.fermat_c));
            } else {
                cert = build_blocked_family(args.s, args.k, parse_coeffs(args.b_vec), args.literal);
            }
            return {cert.accepted ? 0 : 1, cert_to_json(cert)};
        } else if (verify->parsed()) {
            std::ifstream f(args.cert_path);
            if (!f) throw std::invalid_argument("cannot read certificate file " + args.cert_path);
            std::stringstream buf;
            buf << f.rdbuf();
            CounterexampleCert cert = cert_from_json(buf.str());
            std::optional<Int> bound;
            if (args.bound > 0) bound = to_int(args.bound);
            VerifyReport rep = verify_counterexample(cert, bound);
            ordered_json checks = ordered_json::array();
            for (const auto& c : rep.checks)
                checks.push_back({{"name", c.name}, {"ok", c.ok}, {"note", c.note}});
            out = {{"schema", "phl.verify.v1"},
                   {"family", family_name(cert.family)},
                   {"verified", rep.verified},
                   {"unconditional", rep.unconditional},
                   {"reason", rep.reason},
                   {"checks", checks}};
            return {rep.verified ? 0 : 1, out.dump(2)};
        } else {  // paper-example
            DeltaPrime d2p = delta_prime_p(4, 2, 2);
            Rat d2 = delta_p(4, 2, 2), d3 = delta_p(4, 2, 3), d5 = delta_p(4, 2, 5),
                d7 = delta_p(4, 2, 7);
            Rat prefactor = delta_infinity(4) * d2 * d3 * d5 * d7;
            DensityTable t = global_density(4, 2, 97);
            out = {{"schema", "phl.paper_example.v1"},
                   {"delta_infinity", jrat(delta_infinity(4))},
                   {"soluble_classes_mod8", d2p.soluble_classes.get_str()},
                   {"delta_2", jrat(d2)},
                   {"delta_3", jrat(d3)},
                   {"delta_5", jrat(d5)},
                   {"delta_7", jrat(d7)},
                   {"prefactor", jrat(prefactor)},
                   {"global_density_p97", t.global_value}};
        }
    } catch (const resource_error& e) {
        ordered_json err{{"schema", "phl.error.v1"}, {"kind", "resource"}, {"message", e.what()}};
        return {2, err.dump(2)};
    } catch (const std::exception& e) {
        ordered_json err{{"schema", "phl.error.v1"}, {"kind", "domain"}, {"message", e.what()}};
        return {1, err.dump(2)};
    }
    return {0, out.dump(2)};
}

}  // namespace phl::cli
