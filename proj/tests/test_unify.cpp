#include "doctest.h"
#include "nqv/unify.hpp"
#include "support.hpp"

using namespace nqv;
using nqv::testing::A;
using nqv::testing::T;

namespace {
UnifyOptions on{true}, off{false};
}

TEST_CASE("mgu of a variable with itself is empty") {
    Term x = Term::fresh("X");
    auto s = mgu(x, x);
    REQUIRE(s);
    CHECK(s->empty());
}

TEST_CASE("occur check") {
    Term x = Term::fresh("X");
    Term sx = Term::make(sym::succ(), {x});
    CHECK_FALSE(mgu(x, sx, on));
    // Cycles are rejected in both modes.
    CHECK_FALSE(mgu(x, sx, off));

    Term y = Term::fresh("Y");
    Term f1 = Term::make(Symbol("f"), {x, y});
    Term f2 = Term::make(Symbol("f"), {Term::make(sym::succ(), {y}), Term::make(sym::succ(), {x})});
    CHECK_FALSE(mgu(f1, f2, on));
    CHECK_FALSE(mgu(f1, f2, off));
}

TEST_CASE("occur failures are counted") {
    Term x = Term::fresh("X");
    Bindings env;
    UnifyStats st;
    CHECK_FALSE(unify(x, Term::make(sym::succ(), {x}), env, off, &st));
    CHECK(st.occur_failures == 1);
    CHECK(env.mark() == 0);
}

TEST_CASE("one step of the pq base clause") {
    Term i = Term::fresh("I"), a = Term::fresh("A"), b = Term::fresh("B"), c = Term::fresh("C");
    Symbol pq("pq");
    Atom head(pq, {i, cons(i, a), cons(i, b), cons(i, c)});
    Term t1 = Term::fresh("T1"), u = Term::fresh("U"), d = Term::fresh("D");
    Atom goal(pq, {numeral(1), cons(numeral(1), t1), u, d});
    auto s = unify_atoms(head, goal);
    REQUIRE(s);
    CHECK(s->apply(head) == s->apply(goal));
    CHECK(*s->lookup(i.var()) == numeral(1));
    CHECK(*kth_member(s->apply(u), 1) == numeral(1));
    CHECK(*kth_member(s->apply(d), 1) == numeral(1));
    CHECK(s->idempotent());
}

TEST_CASE("unify_atoms") {
    auto s = unify_atoms(A("pqs(0,X,Y,Z)"), A("pqs(0,[],[],[])"));
    REQUIRE(s);
    CHECK(s->size() == 3);
    for (auto& [v, t] : s->bindings()) CHECK(t == nil());
    CHECK_FALSE(unify_atoms(A("pqs(0,X,Y,Z)"), A("pq(0,X,Y,Z)")));
    CHECK_FALSE(unify_atoms(A("pq(0,[],[],[])"), A("pq(s(0),[],[],[])")));
}

TEST_CASE("failed unification leaves bindings untouched") {
    Bindings env;
    Term x = Term::fresh("X");
    REQUIRE(unify(x, numeral(0), env));
    std::size_t m = env.mark();
    CHECK_FALSE(unify(Term::make(Symbol("f"), {Term::fresh(), numeral(1)}), Term::make(Symbol("f"), {x, x}), env));
    CHECK(env.mark() == m);
}

TEST_CASE("random unification properties") {
    auto vars = nqv::testing::make_vars(4);
    nqv::testing::TermGen gen(7, vars);
    int successes = 0;
    for (int round = 0; round < 3000; ++round) {
        Term a = gen(4), b = gen(4);
        auto s = mgu(a, b, on);
        auto s_off = mgu(a, b, off);
        auto r = mgu(b, a, on);
        // Symmetry of success and agreement of the two modes.
        REQUIRE(s.has_value() == r.has_value());
        REQUIRE(s.has_value() == s_off.has_value());
        if (!s) continue;
        ++successes;
        CHECK(s->apply(a) == s->apply(b));
        CHECK(s_off->apply(a) == s_off->apply(b));
        CHECK(s->idempotent());
        CHECK(is_variant(s->apply(a), r->apply(a)));
        // Most general: any unifier factors through s. Checked against the
        // grounding obtained by binding leftover variables to a constant.
        Substitution g;
        for (VarId v : vars_of(s->apply(a))) g.bind(v, T("a"));
        Substitution tau = Substitution::compose(*s, g);
        CHECK(tau.apply(a) == tau.apply(b));
        Substitution st = Substitution::compose(*s, tau);
        CHECK(st.apply(a) == tau.apply(a));
    }
    CHECK(successes > 100);
}
