#include "nqv/herbrand.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "nqv/engine.hpp"
#include "nqv/parse.hpp"
#include "nqv/unify.hpp"

namespace nqv {

// ---- terms -----------------------------------------------------------------

std::vector<BigCount> term_counts(const Signature& sig, unsigned d) {
    const BigCount consts = sig.constants().size();
    const auto functors = sig.functors();
    std::vector<BigCount> t{consts};
    for (unsigned k = 1; k <= d; ++k) {
        BigCount next = consts;
        for (const auto& [f, n] : functors) next += boost::multiprecision::pow(t.back(), static_cast<unsigned>(n));
        t.push_back(std::move(next));
    }
    return t;
}

BigCount count_terms(const Signature& sig, unsigned d) { return term_counts(sig, d).back(); }

std::vector<Term> enumerate_terms(const Signature& sig, unsigned d, std::size_t cap) {
    if (count_terms(sig, d) > cap) throw ResourceCap("enumerate_terms: more than " + std::to_string(cap) + " terms");
    std::vector<Term> all;
    for (Symbol c : sig.constants()) all.push_back(Term::constant(c));
    const auto functors = sig.functors();
    std::size_t prev_start = 0;  // first index of the previous depth level
    for (unsigned k = 1; k <= d; ++k) {
        const std::size_t prev_end = all.size();
        for (const auto& [f, n] : functors) {
            // Argument tuples over depth <= k-1 with at least one argument at exactly k-1.
            std::vector<std::size_t> idx(n, 0);
            for (;;) {
                if (std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return i >= prev_start; })) {
                    std::vector<Term> args;
                    args.reserve(n);
                    for (std::size_t i : idx) args.push_back(all[i]);
                    all.push_back(Term::make(f, std::move(args)));
                }
                std::size_t pos = n;
                while (pos > 0 && ++idx[pos - 1] == prev_end) idx[--pos] = 0;
                if (pos == 0) break;
            }
        }
        prev_start = prev_end;
    }
    return all;
}

// ---- bounded clause slices -------------------------------------------------

namespace {

void note_depths(const Term& t, int pos, HoleBounds& out) {
    if (t.is_var()) {
        auto [it, fresh] = out.emplace(t.var(), pos);
        if (!fresh) it->second = std::max(it->second, pos);
        return;
    }
    if (t.ground()) return;
    for (const Term& a : t.args()) note_depths(a, pos + 1, out);
}

std::vector<Atom> atoms_of(const Clause& c) {
    std::vector<Atom> atoms{c.head};
    atoms.insert(atoms.end(), c.body.begin(), c.body.end());
    return atoms;
}

}  // namespace

HoleBounds occurrence_depths(std::span<const Atom> atoms) {
    HoleBounds out;
    for (const Atom& a : atoms)
        for (const Term& t : a.args()) note_depths(t, 0, out);
    return out;
}

std::optional<HoleBounds> instance_bounds(const Clause& c, unsigned d) {
    auto atoms = atoms_of(c);
    for (const Atom& a : atoms)
        for (const Term& t : a.args())
            if (t.depth() > d) return std::nullopt;
    HoleBounds b = occurrence_depths(atoms);
    for (auto& [v, pos] : b) pos = static_cast<int>(d) - pos;
    return b;
}

BigCount count_ground_instances(const Clause& c, const Signature& sig, unsigned d) {
    auto bounds = instance_bounds(c, d);
    if (!bounds) return 0;
    auto counts = term_counts(sig, d);
    BigCount n = 1;
    for (const auto& [v, b] : *bounds) n *= counts[b];
    return n;
}

bool blowup_warning(const Clause& c, unsigned d) { return d >= 2 && vars_of(c).size() > 6; }

void for_each_ground_instance(const Clause& c, const Signature& sig, unsigned d,
                              const std::function<bool(const Clause&)>& f, std::ostream* warn) {
    if (warn && blowup_warning(c, d))
        *warn << "warning: clause with " << vars_of(c).size() << " variables at depth " << d
              << " has a very large instance set\n";
    auto bounds = instance_bounds(c, d);
    if (!bounds) return;
    const auto vars = vars_of(c);
    if (vars.empty()) {
        f(c);
        return;
    }
    int maxb = 0;
    for (VarId v : vars) maxb = std::max(maxb, bounds->at(v));
    const auto terms = enumerate_terms(sig, static_cast<unsigned>(maxb));
    const auto counts = term_counts(sig, static_cast<unsigned>(maxb));
    std::vector<std::size_t> limit;
    for (VarId v : vars) limit.push_back(static_cast<std::size_t>(counts[bounds->at(v)]));
    std::vector<std::size_t> idx(vars.size(), 0);
    for (;;) {
        Substitution s;
        for (std::size_t i = 0; i < vars.size(); ++i) s.bind(vars[i], terms[idx[i]]);
        if (!f(s.apply(c))) return;
        std::size_t pos = vars.size();
        while (pos > 0 && ++idx[pos - 1] == limit[pos - 1]) idx[--pos] = 0;
        if (pos == 0) return;
    }
}

std::vector<Clause> enumerate_ground_instances(const Clause& c, const Signature& sig, unsigned d, std::size_t cap) {
    if (count_ground_instances(c, sig, d) > cap)
        throw ResourceCap("enumerate_ground_instances: more than " + std::to_string(cap) + " instances");
    std::vector<Clause> out;
    for_each_ground_instance(c, sig, d, [&](const Clause& g) {
        out.push_back(g);
        return true;
    });
    return out;
}

// ---- ground interpretations --------------------------------------------------

bool GroundAtomSet::insert(const Atom& a) {
    if (!a.ground()) throw std::invalid_argument("GroundAtomSet: non-ground atom " + to_string(a));
    return atoms_.insert(a).second;
}

bool GroundAtomSet::admitted_by(const Signature& sig) const {
    for (const Atom& a : atoms_)
        for (const Term& t : a.args())
            if (!sig.admits(t)) return false;
    return true;
}

std::string GroundAtomSet::serialize() const {
    std::vector<std::string> lines;
    lines.reserve(atoms_.size());
    for (const Atom& a : atoms_) lines.push_back(to_string(a));
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

GroundAtomSet GroundAtomSet::deserialize(std::string_view text) {
    GroundAtomSet s;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) s.insert(parse_atom(line));
    return s;
}

std::vector<std::pair<Symbol, std::size_t>> predicates_of(const Program& p) {
    std::set<std::pair<Symbol, std::size_t>> preds;
    for (const Clause& c : p.clauses) {
        preds.emplace(c.head.predicate(), c.head.arity());
        for (const Atom& b : c.body) preds.emplace(b.predicate(), b.arity());
    }
    return {preds.begin(), preds.end()};
}

GroundAtomSet herbrand_base(std::span<const std::pair<Symbol, std::size_t>> predicates, const Signature& sig,
                            unsigned d, std::size_t cap) {
    const auto terms = enumerate_terms(sig, d, cap);
    BigCount total = 0;
    for (const auto& [p, n] : predicates) total += boost::multiprecision::pow(BigCount(terms.size()), static_cast<unsigned>(n));
    if (total > cap) throw ResourceCap("herbrand_base: more than " + std::to_string(cap) + " atoms");
    GroundAtomSet base;
    for (const auto& [p, n] : predicates) {
        std::vector<std::size_t> idx(n, 0);
        for (;;) {
            std::vector<Term> args;
            for (std::size_t i : idx) args.push_back(terms[i]);
            base.insert(Atom(p, std::move(args)));
            std::size_t pos = n;
            while (pos > 0 && ++idx[pos - 1] == terms.size()) idx[--pos] = 0;
            if (pos == 0) break;
        }
    }
    return base;
}

namespace {

using Match = std::unordered_map<VarId, Term>;

// One-way matching: variables of `pat` bind, everything in `t` is opaque.
bool match(const Term& pat, const Term& t, Match& m) {
    if (pat.is_var()) {
        auto [it, fresh] = m.emplace(pat.var(), t);
        return fresh || it->second == t;
    }
    if (t.is_var() || pat.functor() != t.functor() || pat.arity() != t.arity()) return false;
    if (pat.ground()) return pat == t;
    for (std::size_t i = 0; i < pat.arity(); ++i)
        if (!match(pat.arg(i), t.arg(i), m)) return false;
    return true;
}

Term subst(const Match& m, const Term& t) {
    if (t.ground()) return t;
    if (t.is_var()) {
        auto it = m.find(t.var());
        return it == m.end() ? t : it->second;
    }
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const Term& a : t.args()) args.push_back(subst(m, a));
    return Term::make(t.functor(), std::move(args));
}

using Index = std::map<std::pair<Symbol, std::size_t>, std::vector<Atom>>;

// Semi-naive join: every combination of facts for the body with at least one
// fact drawn from `delta`. Calls f with the binding of the body variables.
void join(const std::vector<Atom>& body, const Index& old_facts, const Index& delta,
          const std::function<void(const Match&)>& f) {
    static const std::vector<Atom> none;
    auto facts = [&](const Index& ix, const Atom& a) -> const std::vector<Atom>& {
        auto it = ix.find({a.predicate(), a.arity()});
        return it == ix.end() ? none : it->second;
    };
    for (std::size_t j = 0; j < body.size(); ++j) {
        // body[<j] from old, body[j] from delta, body[>j] from old ∪ delta.
        std::function<void(std::size_t, const Match&)> rec = [&](std::size_t i, const Match& m) {
            if (i == body.size()) {
                f(m);
                return;
            }
            auto try_all = [&](const std::vector<Atom>& src) {
                for (const Atom& fact : src) {
                    Match m2 = m;
                    if (match(body[i].as_term(), fact.as_term(), m2)) rec(i + 1, m2);
                }
            };
            if (i < j) {
                try_all(facts(old_facts, body[i]));
            } else if (i == j) {
                try_all(facts(delta, body[i]));
            } else {
                try_all(facts(old_facts, body[i]));
                try_all(facts(delta, body[i]));
            }
        };
        rec(0, {});
    }
}

// Grounds the remaining variables of `head` within the depth-d base.
void ground_head(const Term& head, const Signature& sig, unsigned d, const std::function<void(const Atom&)>& f) {
    Atom h(head);
    for (const Term& t : h.args())
        if (t.depth() > d) return;
    auto vars = vars_of(head);
    if (vars.empty()) {
        f(h);
        return;
    }
    HoleBounds pos = occurrence_depths(std::span<const Atom>(&h, 1));
    const auto terms = enumerate_terms(sig, d);
    const auto counts = term_counts(sig, d);
    std::vector<std::size_t> limit;
    for (VarId v : vars) limit.push_back(static_cast<std::size_t>(counts[d - pos.at(v)]));
    std::vector<std::size_t> idx(vars.size(), 0);
    for (;;) {
        Match m;
        for (std::size_t i = 0; i < vars.size(); ++i) m.emplace(vars[i], terms[idx[i]]);
        f(Atom(subst(m, head)));
        std::size_t p = vars.size();
        while (p > 0 && ++idx[p - 1] == limit[p - 1]) idx[--p] = 0;
        if (p == 0) return;
    }
}

}  // namespace

GroundAtomSet tp_step(const Program& p, const GroundAtomSet& s, const GroundAtomSet& base) {
    GroundAtomSet out = s;
    Index facts;
    for (const Atom& a : s) facts[{a.predicate(), a.arity()}].push_back(a);
    for (const Clause& c : p.clauses) {
        auto emit = [&](const Match& m) {
            Term h = subst(m, c.head.as_term());
            for (const Atom& b : base) {
                Match hm;
                if (match(h, b.as_term(), hm)) out.insert(b);
            }
        };
        if (c.body.empty()) {
            emit({});
            continue;
        }
        // A plain join is the semi-naive join with every fact in delta.
        join(c.body, {}, facts, [&](const Match& m) {
            // Only the all-delta combination is produced when old is empty.
            emit(m);
        });
    }
    return out;
}

GroundAtomSet tp_fixpoint(const Program& p, const Signature& sig, unsigned d, std::size_t cap) {
    GroundAtomSet all;
    Index old_facts, delta;
    auto add = [&](const Atom& a, Index& next) {
        if (all.insert(a)) {
            next[{a.predicate(), a.arity()}].push_back(a);
            if (all.size() > cap) throw ResourceCap("tp_fixpoint: more than " + std::to_string(cap) + " atoms");
        }
    };
    for (const Clause& c : p.clauses)
        if (c.body.empty()) ground_head(c.head.as_term(), sig, d, [&](const Atom& a) { add(a, delta); });
    while (!delta.empty()) {
        Index next;
        for (const Clause& c : p.clauses) {
            if (c.body.empty()) continue;
            join(c.body, old_facts, delta, [&](const Match& m) {
                ground_head(subst(m, c.head.as_term()), sig, d, [&](const Atom& a) { add(a, next); });
            });
        }
        for (auto& [k, v] : delta) old_facts[k].insert(old_facts[k].end(), v.begin(), v.end());
        delta = std::move(next);
    }
    return all;
}

// ---- symbolic fixpoint ---------------------------------------------------------

namespace {

// Smallest bound on each variable of t implied by depth(σ(t)) <= b, or false
// when the skeleton alone is too deep.
bool constrain(const Term& t, int b, HoleBounds& out) {
    if (static_cast<int>(t.depth()) > b) return false;
    HoleBounds pos;
    note_depths(t, 0, pos);
    for (const auto& [v, p] : pos) {
        auto [it, fresh] = out.emplace(v, b - p);
        if (!fresh) it->second = std::min(it->second, b - p);
    }
    return true;
}

// Largest depth any instance of t can reach, or nothing when unbounded.
std::optional<int> max_depth(const Term& t, const HoleBounds& bounds) {
    HoleBounds pos;
    note_depths(t, 0, pos);
    int m = static_cast<int>(t.depth());
    for (const auto& [v, p] : pos) {
        auto it = bounds.find(v);
        if (it == bounds.end()) return std::nullopt;
        m = std::max(m, p + it->second);
    }
    return m;
}

}  // namespace

bool Pattern::matches(const Atom& a) const {
    Match m;
    if (!match(atom.as_term(), a.as_term(), m)) return false;
    for (const auto& [v, t] : m) {
        auto it = bounds.find(v);
        if (it != bounds.end() && static_cast<int>(t.depth()) > it->second) return false;
    }
    return true;
}

bool Pattern::subsumes(const Pattern& other) const {
    Match m;
    if (!match(atom.as_term(), other.atom.as_term(), m)) return false;
    for (const auto& [v, t] : m) {
        auto it = bounds.find(v);
        if (it == bounds.end()) continue;
        auto md = max_depth(t, other.bounds);
        if (!md || *md > it->second) return false;
    }
    return true;
}

BigCount Pattern::count(const std::vector<BigCount>& counts) const {
    BigCount n = 1;
    for (VarId v : vars_of(atom.as_term())) n *= counts.at(bounds.at(v));
    return n;
}

Pattern Pattern::renamed() const {
    Substitution s;
    HoleBounds b;
    for (VarId v : vars_of(atom.as_term())) {
        Term f = Term::fresh();
        s.bind(v, f);
        auto it = bounds.find(v);
        if (it != bounds.end()) b.emplace(f.var(), it->second);
    }
    return {s.apply(atom), std::move(b)};
}

std::string to_string(const Pattern& p) {
    Term c = canonical_variant(p.atom.as_term());
    std::string out = to_string(c);
    auto vars = vars_of(p.atom.as_term());
    if (vars.empty()) return out;
    out += " where ";
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (i) out += ", ";
        auto it = p.bounds.find(vars[i]);
        out += "depth(V" + std::to_string(i) + ") <= " + (it == p.bounds.end() ? std::string("inf") : std::to_string(it->second));
    }
    return out;
}

std::optional<Pattern> head_pattern(const Atom& head, const HoleBounds& constraints, unsigned d) {
    HoleBounds b;
    for (const Term& t : head.args())
        if (!constrain(t, static_cast<int>(d), b)) return std::nullopt;
    for (auto& [v, bound] : b) {
        auto it = constraints.find(v);
        if (it != constraints.end()) bound = std::min(bound, it->second);
        if (bound < 0) return std::nullopt;
    }
    return Pattern{head, std::move(b)};
}

bool SymbolicFixpoint::contains(const Atom& ground) const {
    return std::any_of(patterns.begin(), patterns.end(), [&](const Pattern& p) { return p.matches(ground); });
}

namespace {

Truth match3(const Pattern& p, const Term& pat, const Term& t, Match& theta, Kleene& ctx) {
    if (pat.is_var()) {
        Truth r = Truth::yes;
        auto [it, fresh] = theta.emplace(pat.var(), t);
        if (!fresh) return ctx.eq(it->second, t);
        auto b = p.bounds.find(pat.var());
        if (b == p.bounds.end()) return r;
        auto [lo, hi] = ctx.depth_range(t);
        if (lo > b->second) return Truth::no;
        if (hi <= b->second) return r;
        for (VarId v : vars_of(t)) ctx.block(v);
        return Truth::unknown;
    }
    if (t.is_var()) {
        ctx.block(t);
        return Truth::unknown;
    }
    if (pat.functor() != t.functor() || pat.arity() != t.arity()) return Truth::no;
    Truth r = Truth::yes;
    for (std::size_t i = 0; i < pat.arity() && r != Truth::no; ++i) r = conj(r, match3(p, pat.arg(i), t.arg(i), theta, ctx));
    return r;
}

}  // namespace

Truth SymbolicFixpoint::contains(Kleene& ctx, const Atom& partial) const {
    Truth r = Truth::no;
    for (const Pattern& p : patterns) {
        Match theta;
        r = disj(r, match3(p, p.atom.as_term(), partial.as_term(), theta, ctx));
        if (r == Truth::yes) break;
    }
    return r;
}

GroundAtomSet SymbolicFixpoint::ground(const Signature& sig, std::size_t cap) const {
    GroundAtomSet out;
    int maxb = 0;
    for (const Pattern& p : patterns)
        for (const auto& [v, b] : p.bounds) maxb = std::max(maxb, b);
    const auto terms = enumerate_terms(sig, static_cast<unsigned>(maxb), cap);
    const auto counts = term_counts(sig, static_cast<unsigned>(maxb));
    for (const Pattern& p : patterns) {
        auto vars = vars_of(p.atom.as_term());
        if (p.count(counts) > cap) throw ResourceCap("pattern expansion exceeds the cap");
        std::vector<std::size_t> limit;
        for (VarId v : vars) limit.push_back(static_cast<std::size_t>(counts[p.bounds.at(v)]));
        std::vector<std::size_t> idx(vars.size(), 0);
        for (;;) {
            Match m;
            for (std::size_t i = 0; i < vars.size(); ++i) m.emplace(vars[i], terms[idx[i]]);
            out.insert(Atom(subst(m, p.atom.as_term())));
            if (out.size() > cap) throw ResourceCap("pattern expansion exceeds the cap");
            std::size_t q = vars.size();
            while (q > 0 && ++idx[q - 1] == limit[q - 1]) idx[--q] = 0;
            if (q == 0) break;
        }
    }
    return out;
}

SymbolicFixpoint symbolic_fixpoint(const Program& p, unsigned d, std::size_t cap) {
    using Key = std::pair<Symbol, std::size_t>;
    SymbolicFixpoint fx;
    std::map<Key, std::vector<std::size_t>> old_ix, delta_ix;

    std::vector<std::size_t> fresh_delta;
    auto add = [&](Pattern q) {
        const Key k{q.atom.predicate(), q.atom.arity()};
        for (const auto* ix : {&old_ix, &delta_ix})
            if (auto it = ix->find(k); it != ix->end())
                for (std::size_t i : it->second)
                    if (fx.patterns[i].subsumes(q)) return;
        for (std::size_t i : fresh_delta)
            if (fx.patterns[i].subsumes(q)) return;
        fx.patterns.push_back(std::move(q));
        fresh_delta.push_back(fx.patterns.size() - 1);
        if (fx.patterns.size() > cap) throw ResourceCap("symbolic_fixpoint: more than " + std::to_string(cap) + " patterns");
    };
    auto commit = [&]() {
        for (auto& [k, v] : delta_ix) old_ix[k].insert(old_ix[k].end(), v.begin(), v.end());
        delta_ix.clear();
        for (std::size_t i : fresh_delta) {
            const Atom& a = fx.patterns[i].atom;
            delta_ix[{a.predicate(), a.arity()}].push_back(i);
        }
        fresh_delta.clear();
    };

    for (const Clause& c : p.clauses)
        if (c.body.empty())
            if (auto q = head_pattern(c.head, {}, d)) add(std::move(*q));
    commit();

    static const std::vector<std::size_t> none;
    auto ids = [&](const std::map<Key, std::vector<std::size_t>>& ix, const Atom& a) -> const std::vector<std::size_t>& {
        auto it = ix.find({a.predicate(), a.arity()});
        return it == ix.end() ? none : it->second;
    };

    while (!delta_ix.empty()) {
        ++fx.rounds;
        for (const Clause& c0 : p.clauses) {
            if (c0.body.empty()) continue;
            for (std::size_t j = 0; j < c0.body.size(); ++j) {
                Clause c = rename_apart(c0);
                Bindings env;
                HoleBounds cons;
                std::vector<Pattern> chosen;
                std::function<void(std::size_t)> rec = [&](std::size_t i) {
                    if (i == c.body.size()) {
                        HoleBounds k;
                        for (const Pattern& q : chosen)
                            for (const auto& [v, b] : q.bounds)
                                if (!constrain(env.resolve(Term::variable(v)), b, k)) return;
                        for (const auto& [v, b] : k)
                            if (b < 0) return;
                        if (auto hp = head_pattern(env.resolve(c.head), k, d)) add(std::move(*hp));
                        return;
                    }
                    auto visit = [&](const std::vector<std::size_t>& src) {
                        for (std::size_t pi : src) {
                            Pattern q = fx.patterns[pi].renamed();
                            const std::size_t mark = env.mark();
                            if (!unify(c.body[i], q.atom, env)) continue;
                            chosen.push_back(std::move(q));
                            rec(i + 1);
                            chosen.pop_back();
                            env.undo(mark);
                        }
                    };
                    // Copies keep the index lists stable while `add` appends patterns.
                    if (i < j) {
                        visit(std::vector<std::size_t>(ids(old_ix, c.body[i])));
                    } else if (i == j) {
                        visit(std::vector<std::size_t>(ids(delta_ix, c.body[i])));
                    } else {
                        visit(std::vector<std::size_t>(ids(old_ix, c.body[i])));
                        visit(std::vector<std::size_t>(ids(delta_ix, c.body[i])));
                    }
                };
                rec(0);
            }
        }
        commit();
    }
    return fx;
}

}  // namespace nqv
