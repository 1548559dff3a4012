#include "doctest.h"
#include "support.hpp"

using namespace nqv;
using nqv::testing::A;
using nqv::testing::T;

TEST_CASE("numerals") {
    CHECK(to_string(numeral(0)) == "0");
    CHECK(numeral(2) == Term::make(sym::succ(), {Term::make(sym::succ(), {Term::constant(sym::zero())})}));
    CHECK_FALSE(numeral_value(nil()).has_value());
    CHECK_FALSE(numeral_value(T("s(nil)")).has_value());
    CHECK(numeral_value(T("s(s(s(0)))")) == 3u);
}

TEST_CASE("numeral round trip up to a million") {
    // Builds and tears down long chains, which also exercises the iterative destructor.
    for (std::size_t n : {0u, 1u, 7u, 1000u, 123456u, 1000000u}) CHECK(numeral_value(numeral(n)) == n);
    Term big = numeral(1000000);
    CHECK(big.depth() == 1000000u);
}

TEST_CASE("kth_member") {
    Term t = T("[1,a,2,b]");
    CHECK(kth_member(t, 3) == numeral(2));
    CHECK(kth_member(t, 4) == T("b"));
    CHECK_FALSE(kth_member(t, 5).has_value());
    CHECK_FALSE(kth_member(t, 0).has_value());

    Term x = Term::fresh("X");
    CHECK_FALSE(kth_member(cons(numeral(0), x), 2).has_value());
    CHECK(kth_member(cons(numeral(0), x), 1) == numeral(0));

    // Open list with 1 at position i+1 for i = 3.
    Term open = make_list({T("c"), T("d"), T("e"), numeral(1)}, Term::fresh());
    CHECK(kth_member(open, 4) == numeral(1));
    // Cons chains with a non-list tail still have members.
    CHECK(kth_member(T("cons(a,s(0))"), 1) == T("a"));
}

TEST_CASE("members_with_index") {
    auto m = members_with_index(T("[1,0]"));
    REQUIRE(m.size() == 2);
    CHECK(m[0].first == 1);
    CHECK(m[0].second == numeral(1));
    CHECK(m[1].first == 2);
    CHECK(m[1].second == numeral(0));
    CHECK(members_with_index(nil()).empty());
    auto open = members_with_index(cons(T("a"), Term::fresh()));
    REQUIRE(open.size() == 1);
    CHECK(open[0].second == T("a"));
}

TEST_CASE("proper lists and distinct members") {
    Term t = T("[1,a,2,b]");
    CHECK(is_proper_list(t));
    CHECK(list_length(t) == 4u);
    CHECK(distinct_members(t));

    CHECK(is_proper_list(T("[1,1]")));
    CHECK_FALSE(distinct_members(T("[1,1]")));

    Term open = cons(numeral(1), Term::fresh());
    CHECK_FALSE(is_proper_list(open));
    CHECK_FALSE(list_length(open).has_value());
    CHECK_FALSE(distinct_members(open));
    CHECK(list_length(nil()) == 0u);
    CHECK(distinct_members(nil()));
}

TEST_CASE("apply_subst") {
    Term x = Term::fresh("X"), y = Term::fresh("Y");
    Substitution s;
    s.bind(x.var(), numeral(0));
    CHECK(apply_subst(s, Term::make(sym::succ(), {x})) == numeral(1));

    Substitution empty;
    Term t = cons(x, Term::make(sym::succ(), {y}));
    CHECK(apply_subst(empty, t) == t);

    Substitution s2;
    s2.bind(x.var(), numeral(1));
    s2.bind(y.var(), nil());
    CHECK(to_string(apply_subst(s2, cons(x, y))) == "[1]");

    Term g = T("[a,b]");
    CHECK(apply_subst(s2, g) == g);
}

TEST_CASE("substitution drops identity bindings") {
    Term x = Term::fresh("X");
    Substitution s;
    s.bind(x.var(), x);
    CHECK(s.empty());
}

TEST_CASE("composition agrees with sequential application") {
    auto vars = nqv::testing::make_vars(4);
    nqv::testing::TermGen gen(11, vars);
    for (int round = 0; round < 300; ++round) {
        Substitution a, b;
        for (const Term& v : vars) {
            if (gen.rng()() % 2) a.bind(v.var(), gen(3));
            if (gen.rng()() % 2) b.bind(v.var(), gen(3));
        }
        Substitution ab = Substitution::compose(a, b);
        for (int k = 0; k < 5; ++k) {
            Term t = gen(4);
            CHECK(ab.apply(t) == b.apply(a.apply(t)));
        }
    }
}

TEST_CASE("generalized member is closed under substitution") {
    auto vars = nqv::testing::make_vars(3);
    nqv::testing::TermGen gen(29, vars);
    for (int round = 0; round < 500; ++round) {
        Term t = gen(5);
        Substitution s;
        for (const Term& v : vars) s.bind(v.var(), gen(3));
        Term ts = s.apply(t);
        for (std::size_t k = 1; k <= 6; ++k) {
            auto e = kth_member(t, k);
            if (!e) continue;
            auto es = kth_member(ts, k);
            REQUIRE(es.has_value());
            CHECK(*es == s.apply(*e));
        }
    }
}

TEST_CASE("printing") {
    CHECK(to_string(T("[1,2|X]")).substr(0, 6) == "[1,2|X");
    CHECK(to_string(T("cons(a,b)")) == "[a|b]");
    CHECK(to_string(T("[]")) == "[]");
    CHECK(to_string(A("pqs(2,[1,a,2,b],[c,d,2],[e,1,2])")) == "pqs(2,[1,a,2,b],[c,d,2],[e,1,2])");
    CHECK(to_string(Term::make(Symbol("f"), {T("s(nil)")})) == "f(s([]))");
}

TEST_CASE("canonical variants") {
    Term a = T("g(X,Y,X)");
    Term b = T("g(U,V,U)");
    Term c = T("g(U,V,V)");
    CHECK(canonical_variant(a) == canonical_variant(b));
    CHECK_FALSE(canonical_variant(a) == canonical_variant(c));
    CHECK(to_string(canonical_variant(a)) == "g(V0,V1,V0)");
}

TEST_CASE("signature") {
    Signature s = Signature::minimal();
    CHECK(s.constants().size() == 2);
    CHECK(s.functors().size() == 2);
    CHECK_THROWS_AS(s.declare(sym::succ(), 2), std::invalid_argument);
    Signature st = Signature::standard();
    CHECK(st.constants().size() == 8);
    CHECK(st.admits(T("[a,s(0)|f]")));
    CHECK_FALSE(s.admits(T("[a]")));
}

TEST_CASE("term order is total and consistent with equality") {
    nqv::testing::TermGen gen(5, nqv::testing::make_vars(2));
    std::vector<Term> ts;
    for (int i = 0; i < 200; ++i) ts.push_back(gen(3));
    for (const Term& x : ts)
        for (const Term& y : ts) {
            CHECK((compare(x, y) == 0) == (x == y));
            CHECK(compare(x, y) == -compare(y, x));
        }
}
