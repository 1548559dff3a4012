#include "nqv/engine.hpp"

namespace nqv {

std::optional<SelectionRule> parse_selection_rule(const std::string& s) {
    if (s == "leftmost") return SelectionRule::leftmost;
    if (s == "rightmost") return SelectionRule::rightmost;
    if (s == "fair") return SelectionRule::fair;
    return std::nullopt;
}

const char* to_string(SelectionRule r) {
    switch (r) {
    case SelectionRule::leftmost: return "leftmost";
    case SelectionRule::rightmost: return "rightmost";
    case SelectionRule::fair: return "fair";
    }
    return "?";
}

Clause rename_apart(const Clause& c, std::span<const VarId> vars) {
    Substitution s;
    for (VarId v : vars) s.bind(v, Term::fresh());
    return s.apply(c);
}

Clause rename_apart(const Clause& c) {
    auto vars = vars_of(c);
    return rename_apart(c, vars);
}

Solver::Solver(const Program& p, Query q, SolveOptions opts)
    : program_(p), query_(std::move(q)), query_vars_(vars_of(query_)), opts_(opts) {
    if (query_.atoms.empty()) throw EngineError("empty query");
    if (opts_.depth_limit && *opts_.depth_limit == 0) throw EngineError("depth limit must be at least 1");
    for (std::size_t i = 0; i < p.clauses.size(); ++i) {
        const Atom& h = p.clauses[i].head;
        index_[{h.predicate(), h.arity()}].push_back(i);
        clause_vars_.push_back(vars_of(p.clauses[i]));
    }
    auto check = [this](const Atom& a) {
        if (!index_.count({a.predicate(), a.arity()}))
            throw EngineError("unknown predicate " + a.predicate().name() + "/" + std::to_string(a.arity()));
    };
    for (const Atom& a : query_.atoms) check(a);
    for (const Clause& c : p.clauses)
        for (const Atom& b : c.body) check(b);
}

std::size_t Solver::select(const Frame& f) const {
    if (f.goals.empty()) return 0;
    switch (opts_.rule) {
    case SelectionRule::leftmost: return 0;
    case SelectionRule::rightmost: return f.goals.size() - 1;
    case SelectionRule::fair: return f.depth % f.goals.size();
    }
    return 0;
}

Answer Solver::make_answer() const {
    Answer a;
    for (VarId v : query_vars_) {
        Term t = env_.resolve(Term::variable(v));
        if (!(t.is_var() && t.var() == v)) a.substitution.bind(v, std::move(t));
    }
    a.instantiated_query.atoms.reserve(query_.atoms.size());
    for (const Atom& q : query_.atoms) a.instantiated_query.atoms.push_back(a.substitution.apply(q));
    return a;
}

std::variant<Answer, StreamEnd> Solver::next() {
    if (done_) return StreamEnd{truncated_ ? StreamEnd::Reason::truncated : StreamEnd::Reason::exhausted};
    if (opts_.answer_limit && stats_.answers >= *opts_.answer_limit) return StreamEnd{StreamEnd::Reason::answer_limit};
    if (!started_) {
        started_ = true;
        Frame root{query_.atoms, 0, env_.mark(), 0, 0, std::nullopt};
        root.selected = select(root);
        stack_.push_back(std::move(root));
    }
    const UnifyOptions uopts{opts_.occur_check};
    while (!stack_.empty()) {
        Frame& f = stack_.back();
        if (f.goals.empty()) {
            env_.undo(f.trail_mark);
            Answer a = make_answer();
            if (opts_.record_trace) {
                last_trace_.clear();
                for (const Frame& g : stack_)
                    if (g.step) last_trace_.push_back(*g.step);
            }
            stack_.pop_back();
            ++stats_.answers;
            return a;
        }
        if (opts_.depth_limit && f.depth >= *opts_.depth_limit) {
            truncated_ = true;
            ++stats_.truncated_branches;
            stack_.pop_back();
            continue;
        }
        const Atom& goal = f.goals[f.selected];
        const auto& candidates = index_.at({goal.predicate(), goal.arity()});
        if (f.next_clause >= candidates.size()) {
            stack_.pop_back();
            continue;
        }
        const std::size_t ci = candidates[f.next_clause++];
        env_.undo(f.trail_mark);
        Clause renamed = rename_apart(program_.clauses[ci], clause_vars_[ci]);
        const std::size_t before = env_.mark();
        std::optional<Atom> resolved_goal;
        if (opts_.record_trace) resolved_goal = env_.resolve(goal);
        if (!unify(renamed.head, goal, env_, uopts, &stats_.unify)) continue;
        ++stats_.steps;

        Frame child{{}, f.depth + 1, env_.mark(), 0, 0, std::nullopt};
        child.goals.reserve(f.goals.size() - 1 + renamed.body.size());
        for (std::size_t i = 0; i < f.goals.size(); ++i) {
            if (i == f.selected)
                child.goals.insert(child.goals.end(), renamed.body.begin(), renamed.body.end());
            else
                child.goals.push_back(f.goals[i]);
        }
        child.selected = select(child);
        if (opts_.record_trace) {
            Substitution s;
            for (VarId v : env_.since(before)) s.bind(v, env_.resolve(Term::variable(v)));
            child.step = TraceStep{*resolved_goal, ci, renamed.head, std::move(s)};
        }
        stack_.push_back(std::move(child));  // invalidates f
    }
    done_ = true;
    return StreamEnd{truncated_ ? StreamEnd::Reason::truncated : StreamEnd::Reason::exhausted};
}

SolveResult solve(const Program& p, const Query& q, const SolveOptions& opts) {
    Solver s(p, q, opts);
    SolveResult r;
    for (;;) {
        auto item = s.next();
        if (auto* a = std::get_if<Answer>(&item)) {
            r.answers.push_back(std::move(*a));
            continue;
        }
        r.end = std::get<StreamEnd>(item).reason;
        break;
    }
    r.stats = s.stats();
    return r;
}

std::vector<TraceStep> derivation_trace(const Program& p, const Query& q, SolveOptions opts) {
    opts.record_trace = true;
    opts.answer_limit.reset();
    Solver s(p, q, opts);
    if (std::holds_alternative<Answer>(s.next())) return s.trace();
    return {};
}

}  // namespace nqv
