#include "nqv/term.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace nqv {

struct TermNode {
    Symbol functor;
    VarId var{};
    std::string name;
    std::vector<Term> args;
    std::size_t hash = 0;
    unsigned depth = 0;
    bool is_var = false;
    bool ground = true;

    TermNode() = default;
    TermNode(const TermNode&) = delete;
    TermNode& operator=(const TermNode&) = delete;

    // Releases uniquely owned children iteratively so that long s/cons chains
    // do not recurse once per level.
    ~TermNode() {
        std::vector<std::shared_ptr<const TermNode>> pending;
        auto steal = [&pending](std::vector<Term>& args) {
            for (Term& t : args)
                if (t.node_ && t.node_.use_count() == 1) pending.push_back(std::move(t.node_));
        };
        steal(args);
        while (!pending.empty()) {
            std::shared_ptr<const TermNode> n = std::move(pending.back());
            pending.pop_back();
            steal(const_cast<TermNode&>(*n).args);
        }
    }
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

const std::string& empty_string() {
    static const std::string s;
    return s;
}

}  // namespace

VarId fresh_var_id() {
    static std::atomic<std::uint64_t> next{1};
    return VarId{next.fetch_add(1, std::memory_order_relaxed)};
}

Term Term::variable(VarId id, std::string name) {
    auto n = std::make_shared<TermNode>();
    n->is_var = true;
    n->var = id;
    n->name = std::move(name);
    n->ground = false;
    n->hash = mix(0x51ed270b, static_cast<std::size_t>(id));
    return Term(std::move(n));
}

Term Term::fresh(std::string name) { return variable(fresh_var_id(), std::move(name)); }

Term Term::make(Symbol functor, std::vector<Term> args) {
    assert(functor.valid());
    auto n = std::make_shared<TermNode>();
    n->functor = functor;
    std::size_t h = mix(functor.hash(), args.size());
    unsigned depth = 0;
    bool ground = true;
    for (const Term& a : args) {
        assert(a.valid());
        h = mix(h, a.hash());
        depth = std::max(depth, a.depth() + 1);
        ground = ground && a.ground();
    }
    n->hash = h;
    n->depth = depth;
    n->ground = ground;
    n->args = std::move(args);
    return Term(std::move(n));
}

bool Term::is_var() const { return node_->is_var; }
VarId Term::var() const {
    assert(is_var());
    return node_->var;
}
const std::string& Term::var_name() const { return is_var() ? node_->name : empty_string(); }
Symbol Term::functor() const {
    assert(!is_var());
    return node_->functor;
}
std::size_t Term::arity() const { return node_->args.size(); }
std::span<const Term> Term::args() const { return node_->args; }
const Term& Term::arg(std::size_t i) const { return node_->args.at(i); }
bool Term::ground() const { return node_->ground; }
unsigned Term::depth() const { return node_->depth; }
std::size_t Term::hash() const { return node_->hash; }

bool operator==(const Term& a, const Term& b) {
    std::vector<std::pair<const TermNode*, const TermNode*>> stack{{a.node_.get(), b.node_.get()}};
    while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        if (x == y) continue;
        if (!x || !y) return false;
        if (x->hash != y->hash || x->is_var != y->is_var || x->depth != y->depth) return false;
        if (x->is_var) {
            if (x->var != y->var) return false;
            continue;
        }
        if (x->functor != y->functor || x->args.size() != y->args.size()) return false;
        for (std::size_t i = 0; i < x->args.size(); ++i)
            stack.emplace_back(x->args[i].node_.get(), y->args[i].node_.get());
    }
    return true;
}

int compare(const Term& a, const Term& b) {
    if (a.is_var() != b.is_var()) return a.is_var() ? -1 : 1;
    if (a.is_var()) {
        auto x = static_cast<std::uint64_t>(a.var()), y = static_cast<std::uint64_t>(b.var());
        return x < y ? -1 : (x > y ? 1 : 0);
    }
    if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
    if (a.functor() != b.functor()) return a.functor() < b.functor() ? -1 : 1;
    for (std::size_t i = 0; i < a.arity(); ++i)
        if (int c = compare(a.arg(i), b.arg(i)); c != 0) return c;
    return 0;
}

// ---- numerals and lists ---------------------------------------------------

Term numeral(std::size_t n) {
    Term t = Term::constant(sym::zero());
    for (std::size_t i = 0; i < n; ++i) t = Term::make(sym::succ(), {std::move(t)});
    return t;
}

std::optional<std::size_t> numeral_value(const Term& t) {
    std::size_t n = 0;
    const Term* cur = &t;
    while (cur->is(sym::succ(), 1)) {
        ++n;
        cur = &cur->arg(0);
    }
    if (cur->is(sym::zero(), 0)) return n;
    return std::nullopt;
}

Term nil() { return Term::constant(sym::nil()); }
Term cons(Term head, Term tail) { return Term::make(sym::cons(), {std::move(head), std::move(tail)}); }

Term make_list(std::vector<Term> elements, Term tail) {
    Term t = std::move(tail);
    for (auto it = elements.rbegin(); it != elements.rend(); ++it) t = cons(std::move(*it), std::move(t));
    return t;
}

std::optional<Term> kth_member(const Term& t, std::size_t k) {
    if (k == 0) return std::nullopt;
    const Term* cur = &t;
    for (std::size_t i = 1; i < k; ++i) {
        if (!cur->is(sym::cons(), 2)) return std::nullopt;
        cur = &cur->arg(1);
    }
    if (!cur->is(sym::cons(), 2)) return std::nullopt;
    return cur->arg(0);
}

std::vector<std::pair<std::size_t, Term>> members_with_index(const Term& t) {
    std::vector<std::pair<std::size_t, Term>> out;
    const Term* cur = &t;
    for (std::size_t k = 1; cur->is(sym::cons(), 2); ++k) {
        out.emplace_back(k, cur->arg(0));
        cur = &cur->arg(1);
    }
    return out;
}

namespace {
const Term& spine_end(const Term& t, std::size_t& length) {
    const Term* cur = &t;
    length = 0;
    while (cur->is(sym::cons(), 2)) {
        ++length;
        cur = &cur->arg(1);
    }
    return *cur;
}
}  // namespace

bool is_proper_list(const Term& t) {
    std::size_t len;
    return spine_end(t, len).is(sym::nil(), 0);
}

std::optional<std::size_t> list_length(const Term& t) {
    std::size_t len;
    if (spine_end(t, len).is(sym::nil(), 0)) return len;
    return std::nullopt;
}

bool distinct_members(const Term& t) {
    if (!is_proper_list(t)) return false;
    std::unordered_set<Term, TermHash> seen;
    for (auto& [k, e] : members_with_index(t))
        if (!seen.insert(e).second) return false;
    return true;
}

namespace {
void collect_vars(const Term& t, std::vector<VarId>& out, std::unordered_set<std::uint64_t>& seen) {
    if (t.ground()) return;
    if (t.is_var()) {
        if (seen.insert(static_cast<std::uint64_t>(t.var())).second) out.push_back(t.var());
        return;
    }
    for (const Term& a : t.args()) collect_vars(a, out, seen);
}
}  // namespace

std::vector<VarId> vars_of(const Term& t) {
    std::vector<VarId> out;
    std::unordered_set<std::uint64_t> seen;
    collect_vars(t, out, seen);
    return out;
}

bool occurs_in(VarId v, const Term& t) {
    if (t.ground()) return false;
    if (t.is_var()) return t.var() == v;
    for (const Term& a : t.args())
        if (occurs_in(v, a)) return true;
    return false;
}

// ---- atoms, clauses -------------------------------------------------------

Atom::Atom(Term t) : term_(std::move(t)) {
    if (!term_.valid() || term_.is_var()) throw std::invalid_argument("an atom must be a compound term");
}

std::vector<VarId> vars_of(const Clause& c) {
    std::vector<VarId> out;
    std::unordered_set<std::uint64_t> seen;
    for (const Atom& b : c.body) collect_vars(b.as_term(), out, seen);
    collect_vars(c.head.as_term(), out, seen);
    return out;
}

std::vector<VarId> vars_of(const Query& q) {
    std::vector<VarId> out;
    std::unordered_set<std::uint64_t> seen;
    for (const Atom& a : q.atoms) collect_vars(a.as_term(), out, seen);
    return out;
}

// ---- signature --------------------------------------------------------------

Signature Signature::minimal() {
    Signature s;
    s.declare(sym::zero(), 0);
    s.declare(sym::succ(), 1);
    s.declare(sym::nil(), 0);
    s.declare(sym::cons(), 2);
    return s;
}

Signature Signature::standard() {
    Signature s = minimal();
    for (const char* c : {"a", "b", "c", "d", "e", "f"}) s.declare(Symbol(c), 0);
    return s;
}

void Signature::declare(Symbol f, std::size_t arity) {
    auto [it, inserted] = arities_.emplace(f, arity);
    if (!inserted && it->second != arity)
        throw std::invalid_argument("symbol " + f.name() + " declared with arity " + std::to_string(it->second) +
                                    " cannot be used with arity " + std::to_string(arity));
}

std::optional<std::size_t> Signature::arity_of(Symbol f) const {
    auto it = arities_.find(f);
    if (it == arities_.end()) return std::nullopt;
    return it->second;
}

bool Signature::contains(Symbol f, std::size_t arity) const {
    auto a = arity_of(f);
    return a && *a == arity;
}

std::vector<Symbol> Signature::constants() const {
    std::vector<Symbol> out;
    for (auto& [f, n] : arities_)
        if (n == 0) out.push_back(f);
    return out;
}

std::vector<std::pair<Symbol, std::size_t>> Signature::functors() const {
    std::vector<std::pair<Symbol, std::size_t>> out;
    for (auto& [f, n] : arities_)
        if (n > 0) out.emplace_back(f, n);
    return out;
}

std::vector<std::pair<Symbol, std::size_t>> Signature::symbols() const { return {arities_.begin(), arities_.end()}; }

bool Signature::admits(const Term& t) const {
    if (t.is_var()) return true;
    if (!contains(t.functor(), t.arity())) return false;
    for (const Term& a : t.args())
        if (!admits(a)) return false;
    return true;
}

// ---- substitutions ----------------------------------------------------------

void Substitution::bind(VarId v, Term t) {
    if (t.is_var() && t.var() == v) {
        map_.erase(v);
        return;
    }
    map_.insert_or_assign(v, std::move(t));
}

const Term* Substitution::lookup(VarId v) const {
    auto it = map_.find(v);
    return it == map_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term& t) const {
    if (map_.empty() || t.ground()) return t;
    if (t.is_var()) {
        const Term* b = lookup(t.var());
        return b ? *b : t;
    }
    std::vector<Term> args;
    args.reserve(t.arity());
    bool changed = false;
    for (const Term& a : t.args()) {
        args.push_back(apply(a));
        changed = changed || !(args.back() == a);
    }
    return changed ? Term::make(t.functor(), std::move(args)) : t;
}

Atom Substitution::apply(const Atom& a) const { return Atom(apply(a.as_term())); }

Clause Substitution::apply(const Clause& c) const {
    Clause out{apply(c.head), {}};
    out.body.reserve(c.body.size());
    for (const Atom& b : c.body) out.body.push_back(apply(b));
    return out;
}

Substitution Substitution::compose(const Substitution& first, const Substitution& second) {
    Substitution out;
    for (auto& [v, t] : first.map_) out.bind(v, second.apply(t));
    for (auto& [v, t] : second.map_)
        if (!first.lookup(v)) out.bind(v, t);
    return out;
}

Substitution Substitution::restricted_to(std::span<const VarId> vars) const {
    Substitution out;
    for (VarId v : vars)
        if (const Term* t = lookup(v)) out.bind(v, *t);
    return out;
}

bool Substitution::idempotent() const {
    for (auto& [v, t] : map_)
        for (auto& [w, u] : map_)
            if (occurs_in(v, u)) return false;
    return true;
}

Term apply_subst(const Substitution& s, const Term& t) { return s.apply(t); }

// ---- printing ---------------------------------------------------------------

namespace {

void print(std::ostream& os, const Term& t) {
    if (t.is_var()) {
        if (!t.var_name().empty())
            os << t.var_name();
        else
            os << "_G" << static_cast<std::uint64_t>(t.var());
        return;
    }
    if (auto n = numeral_value(t)) {
        os << *n;
        return;
    }
    if (t.is(sym::nil(), 0)) {
        os << "[]";
        return;
    }
    if (t.is(sym::cons(), 2)) {
        os << '[';
        const Term* cur = &t;
        bool first = true;
        while (cur->is(sym::cons(), 2)) {
            if (!first) os << ',';
            first = false;
            print(os, cur->arg(0));
            cur = &cur->arg(1);
        }
        if (!cur->is(sym::nil(), 0)) {
            os << '|';
            print(os, *cur);
        }
        os << ']';
        return;
    }
    os << t.functor().name();
    if (t.arity() > 0) {
        os << '(';
        for (std::size_t i = 0; i < t.arity(); ++i) {
            if (i) os << ',';
            print(os, t.arg(i));
        }
        os << ')';
    }
}

}  // namespace

std::string to_string(const Term& t) {
    std::ostringstream os;
    print(os, t);
    return os.str();
}

std::string to_string(const Atom& a) { return to_string(a.as_term()); }

std::string to_string(const Clause& c) {
    std::string s = to_string(c.head);
    if (!c.body.empty()) {
        s += " :- ";
        for (std::size_t i = 0; i < c.body.size(); ++i) {
            if (i) s += ", ";
            s += to_string(c.body[i]);
        }
    }
    return s + ".";
}

std::string to_string(const Query& q) {
    std::string s;
    for (std::size_t i = 0; i < q.atoms.size(); ++i) {
        if (i) s += ", ";
        s += to_string(q.atoms[i]);
    }
    return s;
}

std::string to_string(const Program& p) {
    std::string s;
    for (const Clause& c : p.clauses) s += to_string(c) + "\n";
    return s;
}

std::string to_string(const Substitution& s) {
    std::string out = "{";
    bool first = true;
    for (auto& [v, t] : s.bindings()) {
        if (!first) out += ", ";
        first = false;
        out += to_string(Term::variable(v)) + " -> " + to_string(t);
    }
    return out + "}";
}

std::ostream& operator<<(std::ostream& os, const Term& t) {
    print(os, t);
    return os;
}
std::ostream& operator<<(std::ostream& os, const Atom& a) { return os << a.as_term(); }
std::ostream& operator<<(std::ostream& os, const Clause& c) { return os << to_string(c); }

Term canonical_variant(const Term& t) {
    Substitution s;
    std::size_t i = 0;
    // Canonical ids live above the range handed out by fresh_var_id(), so two
    // variants map to equal terms.
    for (VarId v : vars_of(t)) {
        s.bind(v, Term::variable(VarId{(1ULL << 63) + i}, "V" + std::to_string(i)));
        ++i;
    }
    return s.apply(t);
}

}  // namespace nqv
