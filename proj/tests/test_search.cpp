#include "doctest.h"
#include "nqv/search.hpp"
#include "nqv/unify.hpp"
#include "support.hpp"

using namespace nqv;
using namespace nqv::testing;

namespace {

Signature tiny() {
    Signature s;
    s.declare(sym::zero(), 0);
    s.declare(Symbol("a"), 0);
    s.declare(sym::succ(), 1);
    s.declare(sym::cons(), 2);
    return s;
}

// Substitutes every hole by each term of its bound, calling f on the result.
void groundings(const std::vector<Term>& targets, const HoleBounds& holes, const Signature& sig,
                const std::function<void(const std::vector<Term>&)>& f) {
    std::vector<VarId> vs;
    for (const auto& [v, b] : holes) vs.push_back(v);
    int maxb = 0;
    for (const auto& [v, b] : holes) maxb = std::max(maxb, b);
    auto terms = enumerate_terms(sig, static_cast<unsigned>(maxb));
    std::vector<std::size_t> idx(vs.size(), 0);
    for (;;) {
        Substitution s;
        bool ok = true;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (static_cast<int>(terms[idx[i]].depth()) > holes.at(vs[i])) ok = false;
            s.bind(vs[i], terms[idx[i]]);
        }
        if (ok) {
            std::vector<Term> g;
            for (const Term& t : targets) g.push_back(s.apply(t));
            f(g);
        }
        std::size_t p = vs.size();
        while (p > 0 && ++idx[p - 1] == terms.size()) idx[--p] = 0;
        if (p == 0) return;
    }
}

// Conditions used throughout: each mixes structure and equalities.
const std::vector<std::pair<const char*, Condition>>& conditions() {
    static const std::vector<std::pair<const char*, Condition>> cs = {
        {"equal", [](Kleene& k, std::span<const Term> t) { return k.eq(t[0], t[1]); }},
        {"second member is first",
         [](Kleene& k, std::span<const Term> t) {
             auto m = k.kth_member(t[1], 2);
             if (m.exists != Truth::yes) return m.exists;
             return k.eq(m.value, t[0]);
         }},
        {"member and distinct",
         [](Kleene& k, std::span<const Term> t) { return conj(k.member_of(t[0], t[1]), k.distinct_members(t[1])); }},
        {"numeral above one",
         [](Kleene& k, std::span<const Term> t) {
             auto n = k.numeral(t[0]);
             if (n.is_numeral != Truth::yes) return n.is_numeral;
             return truth(n.value > 1);
         }},
        {"proper list not equal",
         [](Kleene& k, std::span<const Term> t) { return conj(k.is_proper_list(t[1]), neg(k.eq(t[0], t[1]))); }},
    };
    return cs;
}

}  // namespace

TEST_CASE("truth tables") {
    CHECK(conj(Truth::yes, Truth::unknown) == Truth::unknown);
    CHECK(conj(Truth::no, Truth::unknown) == Truth::no);
    CHECK(disj(Truth::yes, Truth::unknown) == Truth::yes);
    CHECK(disj(Truth::no, Truth::unknown) == Truth::unknown);
    CHECK(neg(Truth::unknown) == Truth::unknown);
    CHECK(implies(Truth::no, Truth::unknown) == Truth::yes);
    CHECK(std::string(to_string(Truth::unknown)) == "unknown");
}

TEST_CASE("kleene views") {
    Term x = Term::fresh(), y = Term::fresh();
    HoleBounds b{{x.var(), 2}, {y.var(), 0}};
    Kleene k(&b);
    CHECK(k.kth_member(T("[a,b]"), 2).exists == Truth::yes);
    CHECK(k.kth_member(T("[a,b]"), 3).exists == Truth::no);
    CHECK(k.kth_member(cons(T("a"), x), 2).exists == Truth::unknown);
    CHECK(k.kth_member(cons(T("a"), y), 2).exists == Truth::no);
    CHECK(k.is_cons(y) == Truth::no);
    CHECK(k.is_cons(x) == Truth::unknown);
    CHECK(k.numeral(T("s(s(0))")).value == 2);
    CHECK(k.numeral(Term::make(sym::succ(), {x})).is_numeral == Truth::unknown);
    CHECK(k.eq(x, x) == Truth::yes);
    CHECK(k.eq(T("a"), T("b")) == Truth::no);
    CHECK(k.eq(T("s(a)"), Term::make(sym::succ(), {x})) == Truth::unknown);
    // y has depth 0, so it can never be s(0).
    CHECK(k.eq(y, T("s(0)")) == Truth::no);
    CHECK(k.distinct_members(T("[a,b,a]")) == Truth::no);
    CHECK(k.distinct_members(make_list({T("a"), x})) == Truth::unknown);
    CHECK(k.member_of(T("b"), T("[a,b]")) == Truth::yes);
    CHECK(k.member_of(T("c"), make_list({T("a")}, x)) == Truth::unknown);
    CHECK(k.depth_range(cons(x, y)) == std::pair{1, 3});
    CHECK_FALSE(k.unknown_keys().empty());
}

TEST_CASE("kleene values are sound on every grounding") {
    Term x = Term::fresh(), y = Term::fresh(), z = Term::fresh();
    TermGen gen(7, {x, y, z});
    HoleBounds holes{{x.var(), 1}, {y.var(), 1}, {z.var(), 1}};
    for (int round = 0; round < 60; ++round) {
        std::vector<Term> targets{gen(2), gen(3)};
        for (const auto& [name, cond] : conditions()) {
            Kleene k(&holes);
            Truth partial = cond(k, targets);
            Decision dec = decide(targets, holes, cond, 6);
            if (partial != Truth::unknown) CHECK(dec.value == partial);
            groundings(targets, holes, tiny(), [&](const std::vector<Term>& g) {
                Kleene kg;
                Truth v = cond(kg, g);
                CHECK(v != Truth::unknown);
                if (partial != Truth::unknown) CHECK_MESSAGE(v == partial, name);
                if (dec.value != Truth::unknown) CHECK_MESSAGE(v == dec.value, name);
            });
        }
    }
}

TEST_CASE("narrow bounds") {
    Term x = Term::fresh(), y = Term::fresh(), z = Term::fresh();
    HoleBounds b{{x.var(), 2}, {y.var(), 3}};
    Substitution s;
    s.bind(x.var(), cons(y, z));
    HoleBounds out;
    REQUIRE(narrow_bounds(s, b, out));
    CHECK(out.at(y.var()) == 1);
    CHECK(out.at(z.var()) == 1);
    CHECK(out.count(x.var()) == 0);
    Substitution deep;
    deep.bind(x.var(), T("s(s(s(0)))"));
    CHECK_FALSE(narrow_bounds(deep, b, out));
}

TEST_CASE("narrowing agrees with brute force") {
    Term x = Term::fresh(), y = Term::fresh(), z = Term::fresh();
    TermGen gen(11, {x, y, z});
    for (int round = 0; round < 40; ++round) {
        SearchSpace space{tiny(), {gen(2), gen(2)}, {}};
        for (const Term& t : space.targets)
            for (VarId v : vars_of(t)) space.holes.emplace(v, 1 + round % 2);
        for (const auto& [name, cond] : conditions()) {
            SearchOutcome brute = brute_force_search(space, cond);
            SearchOutcome serial = search(space, cond, {.parallel = false});
            SearchOutcome par = search(space, cond, {.parallel = true});
            CHECK_MESSAGE(serial.examined == brute.examined, name);
            CHECK_MESSAGE(serial.satisfying == brute.satisfying, name);
            CHECK(par.examined == serial.examined);
            CHECK(par.satisfying == serial.satisfying);
            CHECK(par.witnesses == serial.witnesses);
            for (const auto& w : serial.witnesses) {
                Kleene k;
                CHECK(cond(k, w) == Truth::yes);
            }
        }
    }
}

TEST_CASE("stop after a number of hits is deterministic") {
    Term x = Term::fresh(), y = Term::fresh();
    SearchSpace space{Signature::standard(), {x, y}, {{x.var(), 2}, {y.var(), 2}}};
    Condition differ = [](Kleene& k, std::span<const Term> t) { return neg(k.eq(t[0], t[1])); };
    for (std::size_t stop : {1u, 3u, 17u, 200u}) {
        SearchOptions so{.max_witnesses = 1000, .parallel = false, .stop_after = stop};
        SearchOutcome serial = search(space, differ, so);
        so.parallel = true;
        SearchOutcome par = search(space, differ, so);
        CHECK(serial.stopped);
        CHECK(serial.satisfying_nodes == stop);
        CHECK(serial.witnesses.size() == stop);
        CHECK(par.stopped);
        CHECK(par.witnesses == serial.witnesses);
        CHECK(par.examined == serial.examined);
        CHECK(par.satisfying == serial.satisfying);
    }
}

TEST_CASE("node cap") {
    Term x = Term::fresh(), y = Term::fresh();
    SearchSpace space{Signature::standard(), {x, y}, {{x.var(), 3}, {y.var(), 3}}};
    Condition never = [](Kleene& k, std::span<const Term> t) {
        auto a = k.numeral(t[0]);
        auto b = k.numeral(t[1]);
        if (a.is_numeral != Truth::yes || b.is_numeral != Truth::yes) return conj(a.is_numeral, b.is_numeral);
        return truth(a.value + b.value == 99);
    };
    SearchOutcome out = search(space, never, {.node_cap = 5, .parallel = false});
    CHECK(out.capped);
    CHECK(search(space, never, {.parallel = false}).satisfying == 0);
    CHECK_THROWS_AS(search(SearchSpace{tiny(), {x}, {}}, never), std::invalid_argument);
    CHECK_THROWS_AS(brute_force_search(space, never, 10), ResourceCap);
    SearchSpace small{tiny(), {x, y}, {{x.var(), 1}, {y.var(), 1}}};
    SearchOutcome part = brute_force_search(small, never, 10);
    CHECK(part.capped);
    CHECK(part.examined == 10);
}
