#include "nqv/kleene.hpp"

#include <algorithm>

#include "nqv/unify.hpp"

#include <optional>

namespace nqv {

const char* to_string(Truth t) {
    switch (t) {
    case Truth::no: return "no";
    case Truth::unknown: return "unknown";
    case Truth::yes: return "yes";
    }
    return "?";
}

std::optional<int> Kleene::bound(VarId v) const {
    if (!bounds_) return std::nullopt;
    auto it = bounds_->find(v);
    if (it == bounds_->end()) return std::nullopt;
    return it->second;
}

void Kleene::block(const Term& t) {
    if (t.is_var()) blocking_.push_back(t.var());
}

Kleene::Member Kleene::kth_member(const Term& t, std::size_t k) {
    if (k == 0) return {Truth::no, {}};
    const Term* cur = &t;
    for (std::size_t i = 1;; ++i) {
        if (cur->is_var()) {
            // A hole of depth 0 is a constant, never a cons cell.
            if (bound(cur->var()) == 0) return {Truth::no, {}};
            block(*cur);
            return {Truth::unknown, {}};
        }
        if (!cur->is(sym::cons(), 2)) return {Truth::no, {}};
        if (i == k) return {Truth::yes, cur->arg(0)};
        cur = &cur->arg(1);
    }
}

Kleene::Numeral Kleene::numeral(const Term& t) {
    std::size_t n = 0;
    const Term* cur = &t;
    for (;;) {
        if (cur->is_var()) {
            block(*cur);
            return {Truth::unknown};
        }
        if (cur->is(sym::zero(), 0)) return {Truth::yes, n};
        if (!cur->is(sym::succ(), 1)) return {Truth::no};
        ++n;
        cur = &cur->arg(0);
    }
}

Truth Kleene::is_cons(const Term& t) {
    if (t.is_var()) {
        if (bound(t.var()) == 0) return Truth::no;
        block(t);
        return Truth::unknown;
    }
    return truth(t.is(sym::cons(), 2));
}

Truth Kleene::is_proper_list(const Term& t) {
    const Term* cur = &t;
    while (cur->is(sym::cons(), 2)) cur = &cur->arg(1);
    if (cur->is_var()) {
        block(*cur);
        return Truth::unknown;
    }
    return truth(cur->is(sym::nil(), 0));
}

namespace {

// First variable met where a and b disagree; both are unifiable so every
// disagreement involves a variable.
void disagreement(const Term& a, const Term& b, std::vector<VarId>& out) {
    if (a == b) return;
    if (a.is_var() || b.is_var()) {
        if (a.is_var()) out.push_back(a.var());
        if (b.is_var()) out.push_back(b.var());
        return;
    }
    for (std::size_t i = 0; i < a.arity() && out.empty(); ++i) disagreement(a.arg(i), b.arg(i), out);
}

}  // namespace

Truth Kleene::eq(const Term& a, const Term& b) {
    if (a == b) return Truth::yes;
    if (a.ground() && b.ground()) return Truth::no;
    Key key = Kleene::key(a, b);
    for (auto it = assumed_.rbegin(); it != assumed_.rend(); ++it)
        if (it->first.first == key.first && it->first.second == key.second) return it->second;
    Bindings env;
    if (!unify(a, b, env)) return Truth::no;
    if (bounds_) {
        // A unifier forcing a hole beyond its depth bound has no completion.
        for (VarId v : env.since(0)) {
            auto bnd = bound(v);
            if (!bnd) continue;
            Term val = env.resolve(Term::variable(v));
            if (depth_range(val).first > *bnd) return Truth::no;
        }
    }
    std::vector<VarId> holes;
    disagreement(a, b, holes);
    for (VarId h : holes) block_eq(h);
    unknown_keys_.push_back(std::move(key));
    return Truth::unknown;
}

Truth Kleene::eq_numeral(const Term& t, std::size_t n) { return eq(t, nqv::numeral(n)); }

Truth Kleene::distinct_members(const Term& t) {
    std::vector<Term> elems;
    const Term* cur = &t;
    while (cur->is(sym::cons(), 2)) {
        elems.push_back(cur->arg(0));
        cur = &cur->arg(1);
    }
    Truth r = Truth::yes;
    if (cur->is_var()) {
        block(*cur);
        r = Truth::unknown;
    } else if (!cur->is(sym::nil(), 0)) {
        return Truth::no;
    }
    for (std::size_t x = 0; x < elems.size() && r != Truth::no; ++x)
        for (std::size_t y = x + 1; y < elems.size() && r != Truth::no; ++y) r = conj(r, neg(eq(elems[x], elems[y])));
    return r;
}

Truth Kleene::member_of(const Term& e, const Term& list) {
    Truth r = Truth::no;
    const Term* cur = &list;
    while (cur->is(sym::cons(), 2) && r != Truth::yes) {
        r = disj(r, eq(cur->arg(0), e));
        cur = &cur->arg(1);
    }
    if (r != Truth::yes && cur->is_var()) {
        block(*cur);
        r = disj(r, Truth::unknown);
    }
    return r;
}

std::pair<int, int> Kleene::depth_range(const Term& t) {
    if (t.is_var()) {
        auto b = bound(t.var());
        return {0, b ? *b : 1 << 28};
    }
    if (t.ground()) return {static_cast<int>(t.depth()), static_cast<int>(t.depth())};
    int lo = 0, hi = 0;
    for (const Term& a : t.args()) {
        auto [l, h] = depth_range(a);
        lo = std::max(lo, l + 1);
        hi = std::max(hi, h + 1);
    }
    return {lo, hi};
}

namespace {

// Tightest bound on each hole of t implied by depth(t) <= b.
bool constrain(const Term& t, int b, HoleBounds& out) {
    if (static_cast<int>(t.depth()) > b) return false;
    struct Walk {
        HoleBounds& out;
        int b;
        void operator()(const Term& u, int pos) {
            if (u.is_var()) {
                auto [it, fresh] = out.emplace(u.var(), b - pos);
                if (!fresh) it->second = std::min(it->second, b - pos);
                return;
            }
            if (u.ground()) return;
            for (const Term& a : u.args()) (*this)(a, pos + 1);
        }
    };
    Walk{out, b}(t, 0);
    return true;
}

struct Split {
    const Evaluation& f;

    // nullopt: the branch has no completions.
    std::optional<Truth> run(const std::vector<Term>& targets, const HoleBounds& bounds,
                             const std::vector<Kleene::Key>& diseqs, unsigned depth, Decision* top) {
        Kleene ctx(&bounds);
        for (const auto& k : diseqs) {
            if (k.first == k.second) return std::nullopt;
            ctx.assume(k, Truth::no);
        }
        Truth r = f(ctx, targets);
        if (top) {
            top->shape_holes = ctx.blocking();
            top->eq_holes = ctx.eq_blocking();
        }
        if (r != Truth::unknown || depth == 0 || ctx.unknown_keys().empty()) return r;

        // Split on the equality met most often; ties go to the earliest.
        const auto& keys = ctx.unknown_keys();
        std::size_t best = 0, best_count = 0;
        for (std::size_t i = 0; i < keys.size(); ++i) {
            std::size_t c = 0;
            for (const auto& k : keys) c += k.first == keys[i].first && k.second == keys[i].second;
            if (c > best_count) {
                best = i;
                best_count = c;
            }
        }
        const Kleene::Key key = keys[best];

        std::optional<Truth> yes;
        if (auto theta = mgu(key.first, key.second)) {
            HoleBounds nb;
            if (narrow_bounds(*theta, bounds, nb)) {
                std::vector<Term> t2;
                t2.reserve(targets.size());
                for (const Term& t : targets) t2.push_back(theta->apply(t));
                std::vector<Kleene::Key> d2;
                for (const auto& k : diseqs) d2.push_back(Kleene::key(theta->apply(k.first), theta->apply(k.second)));
                yes = run(t2, nb, d2, depth - 1, nullptr);
                if (yes == Truth::unknown) return Truth::unknown;
            }
        }
        auto d3 = diseqs;
        d3.push_back(key);
        std::optional<Truth> no = run(targets, bounds, d3, depth - 1, nullptr);
        if (!yes) return no;
        if (!no) return yes;
        return *yes == *no ? *yes : Truth::unknown;
    }
};

}  // namespace

bool narrow_bounds(const Substitution& theta, const HoleBounds& bounds, HoleBounds& out) {
    out.clear();
    for (const auto& [v, b] : bounds)
        if (!theta.lookup(v)) out.emplace(v, b);
    for (const auto& [v, t] : theta.bindings()) {
        auto it = bounds.find(v);
        if (it == bounds.end()) continue;
        if (!constrain(t, it->second, out)) return false;
    }
    for (const auto& [v, b] : out)
        if (b < 0) return false;
    return true;
}

Decision decide(std::span<const Term> targets, const HoleBounds& bounds, const Evaluation& f, unsigned depth) {
    Decision d;
    Split s{f};
    std::vector<Term> t(targets.begin(), targets.end());
    auto r = s.run(t, bounds, {}, depth, &d);
    d.value = r.value_or(Truth::unknown);
    return d;
}

}  // namespace nqv
