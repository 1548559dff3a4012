#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nqv/herbrand.hpp"
#include "nqv/queens.hpp"
#include "nqv/queens_spec.hpp"
#include "nqv/term.hpp"

namespace nqv {

enum class Verdict { pass, fail, resource_capped };
const char* to_string(Verdict v);

struct Counterexample {
    /// Ground clause instance or ground atom, canonical text.
    std::string subject;
    std::string explanation;

    friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

struct CheckReport {
    std::string check_name;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<Counterexample> counterexamples;
    BigCount instances_examined = 0;
    std::size_t nodes = 0;
    bool capped = false;
    /// Informational lines that do not affect the verdict.
    std::vector<std::string> notes;

    /// fail when a counterexample was found, even under a cap; otherwise
    /// resource_capped when the cap was hit, else pass.
    Verdict verdict() const;
    bool passed() const { return verdict() == Verdict::pass; }

    std::string text() const;
    /// Newline-delimited JSON: a summary record, then one record per
    /// counterexample and per note.
    std::string records() const;
};

struct CheckOptions {
    Signature sig = Signature::standard();
    unsigned depth = 3;
    /// Search nodes (or sampled atoms) a check may evaluate.
    std::size_t max_instances = 10'000'000;
    /// Counterexamples collected before a check stops looking.
    std::size_t max_counterexamples = 20;
    bool parallel = true;
};

/// Every clause instance in the depth-d slice whose body atoms are in s has its head in s.
CheckReport check_model(const Program& p, const SpecSet& s, const CheckOptions& opts = {});

struct CoverWitness {
    std::size_t clause_index = 0;
    /// Ground instance of the clause whose head is the covered atom.
    Clause instance;
};

struct Coverage {
    std::optional<CoverWitness> witness;
    bool capped = false;
    std::size_t nodes = 0;

    bool covered() const { return witness.has_value(); }
};

/**
 * Looks for a ground clause instance with head `a` and every body atom in s,
 * grounding body-only variables over terms of depth at most opts.depth.
 * No witness means "not covered within depth d", nothing more.
 */
Coverage check_covered(const Atom& a, const Program& p, const SpecSet& s, const CheckOptions& opts = {});
/// Does the witness really cover `a` with respect to s?
bool verify_cover_witness(const CoverWitness& w, const Atom& a, const Program& p, const SpecSet& s);

/// Every sampled atom of s (up to `sample_budget`) is covered by p.
CheckReport check_completeness_condition(const Program& p, const SpecSet& s, std::size_t sample_budget,
                                         const CheckOptions& opts = {});

/// Every clause instance in the depth-d slice has each body level below the head level.
CheckReport check_recurrent(const Program& p, const LevelMapping& lm, const CheckOptions& opts = {});

/// Largest level over all ground instances of q when the mapping fixes it structurally.
std::optional<std::size_t> check_query_bound(const Query& q, const LevelMapping& lm);

/**
 * Every atom of the depth-d fixpoint of p is in s_corr. Sampled atoms of
 * s_compl found in the fixpoint are reported as notes only, since the
 * bounded fixpoint under-approximates the least model.
 */
CheckReport compare_spec_fixpoint(const Program& p, const SpecSet& s_corr, const SpecSet& s_compl,
                                  std::size_t sample_budget, const CheckOptions& opts = {});

/**
 * The depth-d fixpoint of p and the depth-d slice of s coincide. `slice`
 * must denote that slice of s; each of its patterns is checked to lie in s
 * and in the fixpoint.
 */
CheckReport check_spec_exact(const Program& p, const SpecSet& s, const std::vector<Pattern>& slice,
                             const CheckOptions& opts = {});

// ---- diagonal-shift lemma property suite ----------------------------------------

struct Lemma4Options {
    std::size_t instances = 120'000;
    std::uint64_t seed = 1;
    std::size_t max_row = 4;
    bool parallel = true;
};

struct Lemma4Result {
    std::size_t instances = 0;
    std::size_t forward_premises = 0;
    std::size_t backward_premises = 0;
    std::vector<Counterexample> violations;

    friend bool operator==(const Lemma4Result&, const Lemma4Result&) = default;
};

/**
 * Generates ground (cs, us, ds, t, t', m, i) with 0 < m <= i <= max_row and checks:
 * forward, correct_up_to((cs,[t|us],ds), m, i) implies correct_up_to((cs,us,[t'|ds]), m, i+1);
 * backward, correct_up_to((cs,us,[t'|ds]), m, i+1) implies some t gives
 * correct_up_to((cs,[t|us],ds), m, i), with t drawn from the numerals up to
 * max_row and the terms of depth at most 1. Instance n depends only on
 * (seed, n), so serial and parallel runs agree.
 */
Lemma4Result lemma4_suite(const Lemma4Options& opts = {});
CheckReport lemma4_report(const Lemma4Result& r, const Lemma4Options& opts);

// ---- mutants --------------------------------------------------------------------

/**
 * Runs the mutant through the model check against S, the completeness
 * condition against S0 and the exactness of S_pq for its pq clauses.
 */
std::vector<CheckReport> mutant_suite(Mutant m, std::size_t sample_budget, const CheckOptions& opts = {});

}  // namespace nqv
