// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.
#include <chrono>
#include <functional>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "nqv/engine.hpp"
#include "nqv/queens.hpp"
#include "nqv/queens_spec.hpp"
#include "nqv/verify.hpp"

using namespace nqv;

namespace {

// Wall-clock limits, pinned.
constexpr double kSolve8Seconds = 60;
constexpr double kModel4Seconds = 300;

constexpr std::size_t kMaxN = 8;
constexpr std::size_t kInvarianceN = 6;
constexpr std::size_t kMinSampled = 10'000;
constexpr std::size_t kLemmaInstances = 120'000;
constexpr std::size_t kMutantSamples = 20'000;

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Solved {
    std::set<QueensSolution> solutions;
    std::size_t answers = 0;
    StreamEnd::Reason end = StreamEnd::Reason::exhausted;
    bool all_valid = true;
};

// No depth limit: returning at all is the termination evidence.
Solved run_queens(std::size_t n, SolveOptions o = {}) {
    Solved s;
    SolveResult r = solve(nqueens_program(), initial_query(n), o);
    s.end = r.end;
    s.answers = r.answers.size();
    for (const Answer& a : r.answers) {
        try {
            s.solutions.insert(extract_solution(a, n));
        } catch (const std::invalid_argument&) {
            s.all_valid = false;
        }
    }
    return s;
}

CheckOptions at(unsigned depth) {
    CheckOptions o;
    o.depth = depth;
    return o;
}

std::string first_counterexample(const CheckReport& r) {
    return r.counterexamples.empty() ? std::string() : "; first: " + r.counterexamples.front().subject;
}

Outcome oracle_equivalence() {
    std::ostringstream d;
    bool pass = true;
    double t8 = 0;
    d << "counts";
    for (std::size_t n = 1; n <= kMaxN; ++n) {
        const std::set<QueensSolution> oracle = brute_force_serial(n);
        pass = pass && brute_force(n) == oracle;
        auto t0 = std::chrono::steady_clock::now();
        Solved s = run_queens(n);
        if (n == 8) t8 = seconds_since(t0);
        const bool ok = s.all_valid && s.answers == s.solutions.size() && s.solutions == oracle;
        pass = pass && ok;
        d << " " << n << ":" << s.solutions.size() << "/" << oracle.size() << (ok ? "" : "!");
    }
    d << " (engine/oracle); n=8 in " << t8 << " s (limit " << kSolve8Seconds << " s)";
    return {pass && t8 < kSolve8Seconds, d.str()};
}

Outcome model_check() {
    std::ostringstream d;
    bool pass = true;
    for (unsigned depth : {3u, 4u}) {
        auto t0 = std::chrono::steady_clock::now();
        CheckReport r = check_model(nqueens_program(), SpecSet::named(SpecName::s), at(depth));
        double t = seconds_since(t0);
        pass = pass && r.passed() && r.counterexamples.empty();
        if (depth == 4) pass = pass && t < kModel4Seconds;
        d << "depth " << depth << ": " << to_string(r.verdict()) << ", " << r.counterexamples.size()
          << " counterexamples, " << t << " s" << first_counterexample(r) << "; ";
    }
    d << "limit at depth 4: " << kModel4Seconds << " s";
    return {pass, d.str()};
}

Outcome completeness() {
    const SpecSet s0 = SpecSet::named(SpecName::s0);
    const auto all = s0.sample(std::numeric_limits<std::size_t>::max());
    // Every S0_pqs atom with 1 <= i <= 3 of the sampling universe must be in the sample.
    const auto rows = sample_S0_pqs(SampleUniverse{}, std::numeric_limits<std::size_t>::max());
    std::set<Atom, AtomLess> sampled(all.begin(), all.end());
    std::set<std::size_t> row_numbers;
    bool includes = true;
    for (const Atom& a : rows) {
        includes = includes && sampled.count(a);
        row_numbers.insert(*numeral_value(a.arg(0)));
    }
    includes = includes && row_numbers == std::set<std::size_t>{1, 2, 3};

    CheckReport cov = check_completeness_condition(nqueens_program(), s0, all.size(), at(4));
    CheckReport rec = check_recurrent(nqueens_program(), LevelMapping::queens(), at(4));
    std::ostringstream d;
    d << "covered: " << to_string(cov.verdict()) << " on " << cov.instances_examined << " sampled S0 atoms (min "
      << kMinSampled << "), including all " << rows.size() << " S0_pqs atoms with i in {1,2,3}"
      << (includes ? "" : " [MISSING]") << first_counterexample(cov) << "; recurrent at depth 4: "
      << to_string(rec.verdict()) << first_counterexample(rec);
    return {cov.passed() && rec.passed() && includes && cov.instances_examined >= kMinSampled, d.str()};
}

Outcome lemma4() {
    Lemma4Options o{.instances = kLemmaInstances, .seed = 1, .max_row = 4};
    Lemma4Result r = lemma4_suite(o);
    std::ostringstream d;
    d << r.instances << " instances, 0 < m <= i <= " << o.max_row << "; forward premise held " << r.forward_premises
      << "x, backward premise " << r.backward_premises << "x; " << r.violations.size() << " violations";
    if (!r.violations.empty()) d << "; first: " << r.violations.front().subject;
    return {r.instances >= 100'000 && r.violations.empty() && r.forward_premises > 0 && r.backward_premises > 0, d.str()};
}

Outcome mutation() {
    std::ostringstream d;
    bool pass = true;
    for (Mutant m : {Mutant::swap_us_ds, Mutant::drop_ds_wrapper, Mutant::pq_nonuniform}) {
        d << to_string(m) << ":";
        bool failed = false;
        for (const CheckReport& r : mutant_suite(m, kMutantSamples, at(4))) {
            d << " " << r.check_name << "=" << to_string(r.verdict());
            failed = failed || r.verdict() == Verdict::fail;
        }
        d << "; ";
        pass = pass && failed;
    }
    d << "depth 4, " << kMutantSamples << " sampled S0 atoms";
    return {pass, d.str()};
}

Outcome exactness() {
    CheckReport r = check_spec_exact(pq_fragment(), SpecSet::named(SpecName::s_pq), s_pq_patterns(4), at(4));
    return {r.passed(), std::string("pq fragment vs S_pq on the depth-4 base: ") + to_string(r.verdict()) + first_counterexample(r)};
}

Outcome invariance() {
    std::ostringstream d;
    bool pass = true;
    for (std::size_t n = 1; n <= kInvarianceN; ++n) {
        const std::set<QueensSolution> ref = run_queens(n).solutions;
        for (bool occur : {true, false})
            for (SelectionRule rule : {SelectionRule::leftmost, SelectionRule::rightmost, SelectionRule::fair}) {
                Solved s = run_queens(n, {.rule = rule, .occur_check = occur});
                if (s.solutions != ref || !s.all_valid || s.end != StreamEnd::Reason::exhausted) {
                    pass = false;
                    d << "n=" << n << " " << to_string(rule) << " occur-check " << (occur ? "on" : "off") << " differs; ";
                }
            }
    }
    d << "n = 1.." << kInvarianceN << " x occur-check {on,off} x {leftmost,rightmost,fair}";
    return {pass, d.str()};
}

Outcome boundedness() {
    std::ostringstream d;
    bool pass = true;
    d << "bounds";
    for (std::size_t n = 1; n <= kMaxN; ++n) {
        auto b = check_query_bound(initial_query(n), LevelMapping::queens());
        pass = pass && b == 2 * n;
        d << " " << (b ? std::to_string(*b) : "none");
        Solved s = run_queens(n);
        pass = pass && s.end == StreamEnd::Reason::exhausted;
    }
    d << " for n = 1.." << kMaxN << " (want 2n); every query exhausted with no depth limit";
    return {pass, d.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"oracle equivalence", oracle_equivalence},
        {"model check at depths 3 and 4", model_check},
        {"completeness condition and recurrence", completeness},
        {"lemma property suite", lemma4},
        {"mutation sensitivity", mutation},
        {"S_pq exactness", exactness},
        {"occur-check and selection-rule invariance", invariance},
        {"boundedness and termination", boundedness},
    };
    bool all = true;
    int k = 0;
    for (const auto& [name, run] : criteria) {
        ++k;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        std::cout << "criterion " << k << " " << (o.pass ? "PASS" : "FAIL") << " [" << name << "] " << o.detail << " ("
                  << seconds_since(t0) << " s)" << std::endl;
    }
    return all ? 0 : 1;
}
