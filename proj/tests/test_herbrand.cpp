#include <set>
#include <sstream>

#include "doctest.h"
#include "nqv/engine.hpp"
#include "nqv/herbrand.hpp"
#include "nqv/queens.hpp"
#include "nqv/queens_spec.hpp"
#include "support.hpp"

using namespace nqv;
using namespace nqv::testing;

namespace {

// {0/0, cons/2}: small enough to ground whole bases by hand.
Signature tiny() {
    Signature s;
    s.declare(sym::zero(), 0);
    s.declare(sym::cons(), 2);
    return s;
}

// Naive oracle: all terms of depth <= d by repeated closure.
std::set<Term, TermLess> closure(const Signature& sig, unsigned d) {
    std::set<Term, TermLess> all;
    for (Symbol c : sig.constants()) all.insert(Term::constant(c));
    for (unsigned k = 0; k < d; ++k) {
        std::vector<Term> prev(all.begin(), all.end());
        for (const auto& [f, n] : sig.functors()) {
            if (n == 1)
                for (const Term& a : prev) all.insert(Term::make(f, {a}));
            if (n == 2)
                for (const Term& a : prev)
                    for (const Term& b : prev) all.insert(Term::make(f, {a, b}));
        }
    }
    return all;
}

// {0/0, s/1, cons/2}: numerals and lists without nil.
Signature small() {
    Signature s = tiny();
    s.declare(sym::succ(), 1);
    return s;
}

}  // namespace

TEST_CASE("term enumeration") {
    auto d0 = enumerate_terms(Signature::standard(), 0);
    REQUIRE(d0.size() == 8);
    CHECK(to_string(d0.front()) == "0");
    CHECK(count_terms(Signature::standard(), 0) == 8);

    auto d1 = enumerate_terms(Signature::standard(), 1);
    std::set<Term, TermLess> s1(d1.begin(), d1.end());
    CHECK(s1.size() == d1.size());
    CHECK(s1.count(T("s(0)")));
    CHECK(s1.count(T("[0]")));
    CHECK(s1.count(T("[a|b]")));

    CHECK(enumerate_terms(Signature::minimal(), 1).size() == 8);
    CHECK(count_terms(Signature::minimal(), 1) == 8);

    for (unsigned d = 0; d <= 2; ++d) {
        auto got = enumerate_terms(Signature::minimal(), d);
        auto want = closure(Signature::minimal(), d);
        CHECK(got.size() == want.size());
        CHECK(std::set<Term, TermLess>(got.begin(), got.end()) == want);
        CHECK(BigCount(got.size()) == count_terms(Signature::minimal(), d));
        for (std::size_t i = 1; i < got.size(); ++i) CHECK(got[i - 1].depth() <= got[i].depth());
    }
    CHECK_THROWS_AS(enumerate_terms(Signature::standard(), 3, 1000), ResourceCap);
}

TEST_CASE("term counts outgrow 64 bits") {
    BigCount c = count_terms(Signature::standard(), 5);
    CHECK(c > BigCount(std::numeric_limits<std::uint64_t>::max()));
}

TEST_CASE("ground clause instances") {
    Program p = nqueens_program();
    CHECK(count_ground_instances(p.clauses[0], Signature::standard(), 0) == 512);
    CHECK(enumerate_ground_instances(p.clauses[0], Signature::standard(), 0).size() == 512);
    CHECK(count_ground_instances(p.clauses[2], Signature::standard(), 0) == 0);
    CHECK(enumerate_ground_instances(p.clauses[2], Signature::standard(), 0).empty());
    CHECK(count_ground_instances(p.clauses[2], Signature::standard(), 1) > 0);

    Clause ground = parse_program("q(0, [a]).").clauses[0];
    auto one = enumerate_ground_instances(ground, Signature::standard(), 2);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == ground);

    // Every enumerated instance keeps each argument within the bound.
    auto inst = enumerate_ground_instances(p.clauses[3], tiny(), 2);
    CHECK(BigCount(inst.size()) == count_ground_instances(p.clauses[3], tiny(), 2));
    for (const Clause& c : inst) {
        for (const Term& a : c.head.args()) CHECK(a.depth() <= 2);
        for (const Atom& b : c.body)
            for (const Term& a : b.args()) CHECK(a.depth() <= 2);
    }
}

TEST_CASE("blowup warning") {
    Clause wide = parse_program("p(A,B,C,D,E,F,G).").clauses[0];
    CHECK(blowup_warning(wide, 2));
    CHECK_FALSE(blowup_warning(wide, 1));
    std::ostringstream warn;
    std::size_t n = 0;
    for_each_ground_instance(wide, tiny(), 2, [&](const Clause&) { return ++n < 3; }, &warn);
    CHECK(n == 3);
    CHECK_FALSE(warn.str().empty());
}

TEST_CASE("tp_step") {
    Program pq = pq_fragment();
    GroundAtomSet base = herbrand_base(predicates_of(pq), tiny(), 2);
    GroundAtomSet first = tp_step(pq, {}, base);
    CHECK_FALSE(first.empty());
    for (const Atom& a : base) {
        bool unit_instance = a.arg(1).is(sym::cons(), 2) && a.arg(2).is(sym::cons(), 2) && a.arg(3).is(sym::cons(), 2) &&
                             a.arg(1).arg(0) == a.arg(0) && a.arg(2).arg(0) == a.arg(0) && a.arg(3).arg(0) == a.arg(0);
        CHECK(first.contains(a) == unit_instance);
    }
    GroundAtomSet second = tp_step(pq, first, base);
    CHECK(second.size() > first.size());
    for (const Atom& a : first) CHECK(second.contains(a));

    Program q = nqueens_program();
    GroundAtomSet qbase = herbrand_base(predicates_of(q), tiny(), 1);
    GroundAtomSet zero = tp_step(q, {}, qbase);
    for (const Atom& a : qbase)
        if (a.predicate() == Symbol("pqs") && a.arg(0) == numeral(0)) CHECK(zero.contains(a));
}

TEST_CASE("fixpoints") {
    CHECK(tp_fixpoint(Program{}, tiny(), 2).empty());

    // The bounded fixpoint of the pq clauses is the bounded slice of S_pq.
    Program pq = pq_fragment();
    for (unsigned d = 1; d <= 2; ++d) {
        GroundAtomSet fix = tp_fixpoint(pq, tiny(), d);
        GroundAtomSet base = herbrand_base(predicates_of(pq), tiny(), d);
        for (const Atom& a : base) CHECK(fix.contains(a) == in_S_pq(a));
    }

    GroundAtomSet q = tp_fixpoint(nqueens_program(), small(), 2);
    CHECK(q.contains(A("pqs(0,0,0,0)")));
    // Under-approximation: this answer's derivation passes through
    // pqs(0,[s(0)|0],[_,s(0)|0],[s(0)|0]), whose third argument has depth 3.
    const Atom one = A("pqs(s(0),[s(0)|0],[s(0)|0],[0,s(0)|0])");
    CHECK(q.size() > 0);
    CHECK_FALSE(q.contains(one));
    CHECK(symbolic_fixpoint(nqueens_program(), 3).contains(one));
    CHECK_FALSE(symbolic_fixpoint(nqueens_program(), 3).contains(A("pqs(s(0),[0|0],[s(0)|0],[0,s(0)|0])")));
    GroundAtomSet q1 = tp_fixpoint(nqueens_program(), small(), 1);
    for (const Atom& a : q1) CHECK(q.contains(a));
    CHECK_THROWS_AS(tp_fixpoint(nqueens_program(), Signature::standard(), 2, 100), ResourceCap);

    // Never derived: the fourth argument is not of the form [t|ds].
    for (unsigned d = 1; d <= 4; ++d) CHECK_FALSE(symbolic_fixpoint(nqueens_program(), d).contains(A("pqs(1,[1,1],[],[])")));
}

TEST_CASE("fixpoint atoms are provable") {
    Program p = nqueens_program();
    GroundAtomSet fix = tp_fixpoint(p, small(), 2);
    std::size_t checked = 0;
    for (const Atom& a : fix) {
        if (checked++ == 200) break;
        SolveResult r = solve(p, Query{{a}}, {.depth_limit = 50, .answer_limit = 1});
        CHECK(r.answers.size() == 1);
    }
}

TEST_CASE("symbolic fixpoint denotes the ground one") {
    for (const Program& p : {pq_fragment(), nqueens_program(), pq_fragment(Mutant::pq_nonuniform)}) {
        for (unsigned d = 1; d <= 2; ++d) {
            SymbolicFixpoint sym = symbolic_fixpoint(p, d);
            GroundAtomSet ground = tp_fixpoint(p, small(), d);
            CHECK(sym.ground(small()) == ground);
            for (const Atom& a : ground) CHECK(sym.contains(a));
        }
    }
    SymbolicFixpoint pq4 = symbolic_fixpoint(pq_fragment(), 4);
    CHECK(pq4.patterns.size() == 4);
    CHECK(pq4.contains(A("pq(s(0),[0,s(0)],[0,s(0)],[0,s(0)])")));
    CHECK_FALSE(pq4.contains(A("pq(s(0),[0,s(0)],[s(0)],[0,s(0)])")));
}

TEST_CASE("three-valued fixpoint membership") {
    SymbolicFixpoint fix = symbolic_fixpoint(pq_fragment(), 3);
    Term x = Term::fresh(), t = Term::fresh();
    HoleBounds b{{x.var(), 1}, {t.var(), 1}};
    Kleene k(&b);
    Atom yes(Symbol("pq"), {numeral(1), cons(numeral(1), t), cons(numeral(1), nil()), cons(numeral(1), nil())});
    CHECK(fix.contains(k, yes) == Truth::yes);
    Atom open(Symbol("pq"), {x, cons(x, nil()), cons(numeral(0), nil()), cons(numeral(0), nil())});
    CHECK(fix.contains(k, open) == Truth::unknown);
    Atom no(Symbol("pq"), {x, nil(), nil(), nil()});
    CHECK(fix.contains(k, no) == Truth::no);
}

TEST_CASE("ground atom sets") {
    GroundAtomSet s;
    CHECK(s.insert(A("p(b)")));
    CHECK(s.insert(A("p(a)")));
    CHECK_FALSE(s.insert(A("p(a)")));
    CHECK_THROWS_AS(s.insert(A("p(X)")), std::invalid_argument);
    CHECK(s.serialize() == "p(a)\np(b)\n");
    CHECK(GroundAtomSet::deserialize(s.serialize()) == s);
    CHECK(s.admitted_by(Signature::standard()));
    GroundAtomSet g;
    g.insert(A("p(g)"));
    CHECK_FALSE(g.admitted_by(Signature::standard()));

    GroundAtomSet fix = tp_fixpoint(pq_fragment(), tiny(), 2);
    CHECK(GroundAtomSet::deserialize(fix.serialize()) == fix);
}

TEST_CASE("patterns") {
    Term x = Term::fresh();
    Pattern p{Atom(Symbol("p"), {x}), {{x.var(), 1}}};
    CHECK(p.matches(A("p(s(0))")));
    CHECK_FALSE(p.matches(A("p(s(s(0)))")));
    CHECK(p.count(term_counts(Signature::minimal(), 1)) == 8);
    Term y = Term::fresh();
    Pattern q{Atom(Symbol("p"), {Term::make(sym::succ(), {y})}), {{y.var(), 0}}};
    CHECK(p.subsumes(q));
    CHECK_FALSE(q.subsumes(p));
    Pattern r = p.renamed();
    CHECK(r.matches(A("p(a)")));
    CHECK(vars_of(r.atom.as_term()) != vars_of(p.atom.as_term()));
}
