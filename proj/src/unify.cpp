#include "nqv/unify.hpp"

#include <unordered_set>

namespace nqv {

const Term& Bindings::deref(const Term& t) const {
    const Term* cur = &t;
    while (cur->is_var()) {
        auto it = map_.find(cur->var());
        if (it == map_.end()) break;
        cur = &it->second;
    }
    return *cur;
}

Term Bindings::resolve(const Term& t) const {
    if (t.ground() || map_.empty()) return t;
    const Term& d = deref(t);
    if (d.is_var() || d.ground()) return d;
    std::vector<Term> args;
    args.reserve(d.arity());
    bool changed = false;
    for (const Term& a : d.args()) {
        args.push_back(resolve(a));
        changed = changed || !(args.back() == a);
    }
    return changed ? Term::make(d.functor(), std::move(args)) : d;
}

void Bindings::bind(VarId v, Term t) {
    map_.insert_or_assign(v, std::move(t));
    trail_.push_back(v);
}

void Bindings::undo(std::size_t mark) {
    while (trail_.size() > mark) {
        map_.erase(trail_.back());
        trail_.pop_back();
    }
}

std::span<const VarId> Bindings::since(std::size_t mark) const {
    return std::span<const VarId>(trail_).subspan(mark);
}

bool Bindings::occurs(VarId v, const Term& t) const {
    std::vector<const Term*> stack{&t};
    while (!stack.empty()) {
        const Term& cur = deref(*stack.back());
        stack.pop_back();
        if (cur.ground()) continue;
        if (cur.is_var()) {
            if (cur.var() == v) return true;
            continue;
        }
        for (const Term& a : cur.args()) stack.push_back(&a);
    }
    return false;
}

namespace {

// Depth-first search for a cycle through the binding graph reachable from
// `roots`. The store was acyclic before the current call, so every cycle
// passes through one of the new bindings.
bool has_cycle(const Bindings& env, std::span<const VarId> roots) {
    enum class Mark { open, done };
    std::unordered_map<VarId, Mark> seen;
    struct Frame {
        VarId var;
        std::vector<VarId> pending;
    };
    auto children = [&env](VarId v) {
        std::vector<VarId> out;
        Term value = env.deref(Term::variable(v));
        // Bound variables below the first compound are the graph successors.
        std::vector<const Term*> stack{&value};
        while (!stack.empty()) {
            const Term* cur = stack.back();
            stack.pop_back();
            if (cur->ground()) continue;
            if (cur->is_var()) {
                if (env.bound(cur->var())) out.push_back(cur->var());
                continue;
            }
            for (const Term& a : cur->args()) stack.push_back(&a);
        }
        return out;
    };
    for (VarId root : roots) {
        if (seen.count(root)) continue;
        std::vector<Frame> stack;
        seen[root] = Mark::open;
        stack.push_back({root, children(root)});
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.pending.empty()) {
                seen[f.var] = Mark::done;
                stack.pop_back();
                continue;
            }
            VarId next = f.pending.back();
            f.pending.pop_back();
            auto it = seen.find(next);
            if (it != seen.end()) {
                if (it->second == Mark::open) return true;
                continue;
            }
            seen[next] = Mark::open;
            stack.push_back({next, children(next)});
        }
    }
    return false;
}

// Without the occur check a cyclic binding can make decomposition run
// forever, so the cycle pass also runs every this many steps.
constexpr std::size_t kCycleCheckInterval = 1 << 14;

}  // namespace

bool unify(const Term& a, const Term& b, Bindings& env, const UnifyOptions& opts, UnifyStats* stats) {
    if (stats) ++stats->attempts;
    const std::size_t mark = env.mark();
    auto fail = [&](bool occur) {
        env.undo(mark);
        if (stats) {
            ++stats->failures;
            if (occur) ++stats->occur_failures;
        }
        return false;
    };

    std::vector<std::pair<Term, Term>> work{{a, b}};
    std::size_t steps = 0;
    while (!work.empty()) {
        auto [x0, y0] = std::move(work.back());
        work.pop_back();
        const Term& x = env.deref(x0);
        const Term& y = env.deref(y0);
        if (x.is_var() && y.is_var() && x.var() == y.var()) continue;
        if (x.is_var() || y.is_var()) {
            const Term& v = x.is_var() ? x : y;
            const Term& t = x.is_var() ? y : x;
            if (opts.occur_check && !t.is_var() && env.occurs(v.var(), t)) return fail(true);
            env.bind(v.var(), t);
            continue;
        }
        if (x.functor() != y.functor() || x.arity() != y.arity()) return fail(false);
        if (x.ground() && y.ground()) {
            if (!(x == y)) return fail(false);
            continue;
        }
        // Push in reverse so the leftmost argument pair is solved first.
        for (std::size_t i = x.arity(); i-- > 0;) work.emplace_back(x.arg(i), y.arg(i));
        if (!opts.occur_check && ++steps % kCycleCheckInterval == 0 && has_cycle(env, env.since(mark)))
            return fail(true);
    }
    if (!opts.occur_check && has_cycle(env, env.since(mark))) return fail(true);
    return true;
}

bool unify(const Atom& a, const Atom& b, Bindings& env, const UnifyOptions& opts, UnifyStats* stats) {
    if (a.predicate() != b.predicate() || a.arity() != b.arity()) {
        if (stats) {
            ++stats->attempts;
            ++stats->failures;
        }
        return false;
    }
    return unify(a.as_term(), b.as_term(), env, opts, stats);
}

namespace {
std::optional<Substitution> extract(const Bindings& env) {
    Substitution s;
    for (VarId v : env.since(0)) s.bind(v, env.resolve(Term::variable(v)));
    return s;
}
}  // namespace

std::optional<Substitution> mgu(const Term& a, const Term& b, const UnifyOptions& opts) {
    Bindings env;
    if (!unify(a, b, env, opts)) return std::nullopt;
    return extract(env);
}

std::optional<Substitution> unify_atoms(const Atom& a, const Atom& b, const UnifyOptions& opts) {
    Bindings env;
    if (!unify(a, b, env, opts)) return std::nullopt;
    return extract(env);
}

namespace {
bool match(const Term& pattern, const Term& target, std::unordered_map<VarId, Term>& theta) {
    if (pattern.is_var()) {
        auto [it, inserted] = theta.emplace(pattern.var(), target);
        return inserted || it->second == target;
    }
    if (target.is_var() || pattern.functor() != target.functor() || pattern.arity() != target.arity()) return false;
    if (pattern.ground()) return pattern == target;
    for (std::size_t i = 0; i < pattern.arity(); ++i)
        if (!match(pattern.arg(i), target.arg(i), theta)) return false;
    return true;
}
}  // namespace

// Variables of `specific` are treated as constants, so the two terms should be
// renamed apart.
bool subsumes(const Term& general, const Term& specific) {
    std::unordered_map<VarId, Term> theta;
    return match(general, specific, theta);
}

bool is_variant(const Term& a, const Term& b) { return canonical_variant(a) == canonical_variant(b); }

}  // namespace nqv
