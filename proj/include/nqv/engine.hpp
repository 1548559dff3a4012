#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "nqv/term.hpp"
#include "nqv/unify.hpp"

namespace nqv {

enum class SelectionRule { leftmost, rightmost, fair };

/// Rotating choice: the atom at index (steps on the branch) mod (goal count).
/// "fair" has no single agreed meaning; this is the one used here.
std::optional<SelectionRule> parse_selection_rule(const std::string& s);
const char* to_string(SelectionRule r);

struct SolveOptions {
    SelectionRule rule = SelectionRule::leftmost;
    /// Maximum resolution steps on one branch.
    std::optional<std::size_t> depth_limit;
    std::optional<std::size_t> answer_limit;
    bool occur_check = true;
    /// Keep per-step records so trace() can replay the branch of each answer.
    bool record_trace = false;
};

struct Answer {
    /// Restricted to the query's variables.
    Substitution substitution;
    Query instantiated_query;
};

struct StreamEnd {
    enum class Reason { exhausted, truncated, answer_limit };
    Reason reason;
};

struct SolveStats {
    std::size_t steps = 0;  ///< successful resolution steps
    std::size_t answers = 0;
    std::size_t truncated_branches = 0;
    UnifyStats unify;
};

struct TraceStep {
    Atom goal;           ///< selected atom, fully instantiated before the step
    std::size_t clause;  ///< index into the program
    Atom renamed_head;
    Substitution mgu;    ///< the step's unifier, idempotent
};

class EngineError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/**
 * SLD resolution, depth first, clauses in source order. Each call to next()
 * resumes the search and yields the next computed answer, or the end marker
 * once the tree is exhausted. `truncated` means some branch hit the depth
 * limit, so the answers seen may be incomplete.
 */
class Solver {
public:
    /// Throws EngineError if the query is empty or calls a predicate with no clauses.
    Solver(const Program& p, Query q, SolveOptions opts = {});

    std::variant<Answer, StreamEnd> next();

    const SolveStats& stats() const { return stats_; }
    /// Steps of the branch that produced the most recent answer (needs record_trace).
    const std::vector<TraceStep>& trace() const { return last_trace_; }

private:
    struct Frame {
        std::vector<Atom> goals;
        std::size_t depth;
        std::size_t trail_mark;
        std::size_t selected;
        std::size_t next_clause = 0;
        std::optional<TraceStep> step;  ///< how this frame was reached
    };

    Answer make_answer() const;
    std::size_t select(const Frame& f) const;

    const Program& program_;
    Query query_;
    std::vector<VarId> query_vars_;
    SolveOptions opts_;
    std::map<std::pair<Symbol, std::size_t>, std::vector<std::size_t>> index_;
    std::vector<std::vector<VarId>> clause_vars_;

    Bindings env_;
    std::vector<Frame> stack_;
    bool started_ = false;
    bool truncated_ = false;
    bool done_ = false;
    SolveStats stats_;
    std::vector<TraceStep> last_trace_;
};

struct SolveResult {
    std::vector<Answer> answers;
    StreamEnd::Reason end;
    SolveStats stats;
};

SolveResult solve(const Program& p, const Query& q, const SolveOptions& opts = {});

/// Steps of the first successful branch, empty when there is none.
std::vector<TraceStep> derivation_trace(const Program& p, const Query& q, SolveOptions opts = {});

/// Fresh copy of c; the new variables carry no source names.
Clause rename_apart(const Clause& c, std::span<const VarId> vars);
Clause rename_apart(const Clause& c);

}  // namespace nqv
