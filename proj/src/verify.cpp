#include "nqv/verify.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include <json.hpp>
#include <omp.h>

#include "nqv/engine.hpp"
#include "nqv/search.hpp"
#include "nqv/unify.hpp"

namespace nqv {

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::resource_capped: return "resource-capped";
    }
    return "?";
}

Verdict CheckReport::verdict() const {
    if (!counterexamples.empty()) return Verdict::fail;
    return capped ? Verdict::resource_capped : Verdict::pass;
}

std::string CheckReport::text() const {
    std::ostringstream os;
    os << "check " << check_name << ": " << to_string(verdict()) << "\n";
    for (const auto& [k, v] : parameters) os << "  " << k << " = " << v << "\n";
    os << "  instances examined: " << instances_examined << " (search nodes: " << nodes << ")\n";
    if (capped) os << "  resource cap reached\n";
    for (const auto& n : notes) os << "  note: " << n << "\n";
    for (const auto& c : counterexamples) os << "  counterexample: " << c.subject << "\n    " << c.explanation << "\n";
    return os.str();
}

std::string CheckReport::records() const {
    using nlohmann::json;
    std::ostringstream os;
    json head = {{"check", check_name},
                 {"verdict", to_string(verdict())},
                 {"instances_examined", instances_examined.str()},
                 {"nodes", nodes},
                 {"capped", capped},
                 {"counterexamples", counterexamples.size()}};
    json params = json::object();
    for (const auto& [k, v] : parameters) params[k] = v;
    head["parameters"] = params;
    os << head.dump() << "\n";
    for (const auto& c : counterexamples)
        os << json{{"check", check_name}, {"counterexample", c.subject}, {"explanation", c.explanation}}.dump() << "\n";
    for (const auto& n : notes) os << json{{"check", check_name}, {"note", n}}.dump() << "\n";
    return os.str();
}

namespace {

std::string signature_text(const Signature& sig) {
    std::string s;
    for (const auto& [f, n] : sig.symbols()) {
        if (!s.empty()) s += ",";
        s += f.name() + "/" + std::to_string(n);
    }
    return s;
}

CheckReport start(std::string name, const CheckOptions& opts) {
    CheckReport r;
    r.check_name = std::move(name);
    r.parameters = {{"depth", std::to_string(opts.depth)}, {"signature", signature_text(opts.sig)}};
    return r;
}

std::vector<Term> clause_targets(const Clause& c) {
    std::vector<Term> t{c.head.as_term()};
    for (const Atom& b : c.body) t.push_back(b.as_term());
    return t;
}

Clause clause_of(const std::vector<Term>& ground) {
    Clause c;
    c.head = Atom(ground.front());
    for (std::size_t i = 1; i < ground.size(); ++i) c.body.emplace_back(ground[i]);
    return c;
}

std::size_t left(const CheckReport& r, const CheckOptions& opts) {
    return opts.max_instances > r.nodes ? opts.max_instances - r.nodes : 0;
}

void absorb(CheckReport& r, const SearchOutcome& out) {
    r.instances_examined += out.examined;
    r.nodes += out.nodes;
    r.capped = r.capped || out.capped;
}

// Runs `cond` over the depth-d instances of every clause; satisfying
// instances become counterexamples explained by `explain`.
template <class Cond, class Explain>
void clause_sweep(CheckReport& r, const Program& p, const CheckOptions& opts, Cond cond, Explain explain,
                  bool skip_units = false) {
    for (std::size_t ci = 0; ci < p.clauses.size(); ++ci) {
        if (skip_units && p.clauses[ci].is_unit()) continue;
        const std::size_t want = opts.max_counterexamples - std::min(opts.max_counterexamples, r.counterexamples.size());
        if (want == 0) {
            r.notes.push_back("stopped after " + std::to_string(r.counterexamples.size()) + " counterexamples");
            return;
        }
        if (left(r, opts) == 0) {
            r.capped = true;
            return;
        }
        Clause c = rename_apart(p.clauses[ci]);
        auto bounds = instance_bounds(c, opts.depth);
        if (!bounds) continue;
        SearchSpace space{opts.sig, clause_targets(c), *bounds};
        SearchOptions so;
        so.node_cap = left(r, opts);
        so.max_witnesses = want;
        so.stop_after = want;
        so.parallel = opts.parallel;
        Condition f = [&](Kleene& k, std::span<const Term> t) { return cond(k, t, ci); };
        SearchOutcome out = search(space, f, so);
        absorb(r, out);
        for (const auto& w : out.witnesses) {
            Clause inst = clause_of(w);
            r.counterexamples.push_back({to_string(inst), "clause " + std::to_string(ci + 1) + ": " + explain(inst)});
        }
    }
}

}  // namespace

CheckReport check_model(const Program& p, const SpecSet& s, const CheckOptions& opts) {
    CheckReport r = start("model", opts);
    r.parameters.emplace_back("spec", s.name());
    auto cond = [&](Kleene& k, std::span<const Term> t, std::size_t) {
        Truth body = Truth::yes;
        for (std::size_t i = 1; i < t.size() && body != Truth::no; ++i) body = conj(body, s.contains(k, Atom(t[i])));
        if (body == Truth::no) return body;
        return conj(body, neg(s.contains(k, Atom(t[0]))));
    };
    auto explain = [&](const Clause&) { return "every body atom is in " + s.name() + ", the head is not"; };
    clause_sweep(r, p, opts, cond, explain);
    return r;
}

Coverage check_covered(const Atom& a, const Program& p, const SpecSet& s, const CheckOptions& opts) {
    if (!a.ground()) throw std::invalid_argument("check_covered: atom is not ground");
    Coverage cov;
    for (std::size_t ci = 0; ci < p.clauses.size(); ++ci) {
        Clause c = rename_apart(p.clauses[ci]);
        auto theta = unify_atoms(c.head, a);
        if (!theta) continue;
        SearchSpace space{opts.sig, {}, {}};
        for (const Atom& b : c.body) {
            space.targets.push_back(theta->apply(b.as_term()));
            for (VarId v : vars_of(space.targets.back())) space.holes.emplace(v, static_cast<int>(opts.depth));
        }
        SearchOptions so;
        so.node_cap = opts.max_instances > cov.nodes ? opts.max_instances - cov.nodes : 0;
        so.max_witnesses = 1;
        so.stop_after = 1;
        so.parallel = opts.parallel;
        Condition f = [&](Kleene& k, std::span<const Term> t) {
            Truth r = Truth::yes;
            for (std::size_t i = 0; i < t.size() && r != Truth::no; ++i) r = conj(r, s.contains(k, Atom(t[i])));
            return r;
        };
        SearchOutcome out = search(space, f, so);
        cov.nodes += out.nodes;
        cov.capped = cov.capped || out.capped;
        if (!out.witnesses.empty()) {
            Clause inst;
            inst.head = a;
            for (const Term& t : out.witnesses.front()) inst.body.emplace_back(t);
            cov.witness = CoverWitness{ci, std::move(inst)};
            cov.capped = false;
            return cov;
        }
    }
    return cov;
}

bool verify_cover_witness(const CoverWitness& w, const Atom& a, const Program& p, const SpecSet& s) {
    if (w.clause_index >= p.clauses.size() || !(w.instance.head == a)) return false;
    const Clause& c = p.clauses[w.clause_index];
    if (c.body.size() != w.instance.body.size()) return false;
    const Symbol tuple("$clause");
    if (!subsumes(Term::make(tuple, clause_targets(c)), Term::make(tuple, clause_targets(w.instance)))) return false;
    for (const Atom& b : w.instance.body)
        if (!b.ground() || !s.contains(b)) return false;
    return true;
}

CheckReport check_completeness_condition(const Program& p, const SpecSet& s, std::size_t sample_budget,
                                         const CheckOptions& opts) {
    CheckReport r = start("covered", opts);
    r.parameters.emplace_back("spec", s.name());
    r.parameters.emplace_back("sample_budget", std::to_string(sample_budget));
    const std::vector<Atom> atoms = s.sample(sample_budget);
    std::vector<Coverage> res(atoms.size());
    CheckOptions inner = opts;
    inner.parallel = false;
    inner.max_instances = std::max<std::size_t>(opts.max_instances / std::max<std::size_t>(atoms.size(), 1), 1000);
    const long n = static_cast<long>(atoms.size());
    if (opts.parallel) {
#pragma omp parallel for schedule(dynamic, 64)
        for (long i = 0; i < n; ++i) res[i] = check_covered(atoms[i], p, s, inner);
    } else {
        for (long i = 0; i < n; ++i) res[i] = check_covered(atoms[i], p, s, inner);
    }
    std::size_t uncovered = 0, capped = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        r.nodes += res[i].nodes;
        if (res[i].covered()) continue;
        if (res[i].capped) {
            ++capped;
            continue;
        }
        ++uncovered;
        if (r.counterexamples.size() < opts.max_counterexamples)
            r.counterexamples.push_back({to_string(atoms[i]), "not covered within depth " + std::to_string(opts.depth)});
    }
    r.instances_examined = atoms.size();
    r.capped = capped > 0;
    r.notes.push_back(std::to_string(atoms.size()) + " sampled atoms of " + s.name() + ", " +
                      std::to_string(uncovered) + " not covered, " + std::to_string(capped) + " undecided at the cap");
    if (atoms.empty()) r.notes.push_back("the sampler produced no atoms");
    return r;
}

CheckReport check_recurrent(const Program& p, const LevelMapping& lm, const CheckOptions& opts) {
    CheckReport r = start("recurrent", opts);
    auto cond = [&](Kleene& k, std::span<const Term> t, std::size_t) {
        Truth some = Truth::no;
        for (std::size_t i = 1; i < t.size() && some != Truth::yes; ++i)
            some = disj(some, neg(lm.greater(k, Atom(t[0]), Atom(t[i]))));
        return some;
    };
    auto explain = [&](const Clause& c) {
        std::string s = "head level " + std::to_string(lm.level(c.head)) + ", body levels";
        for (const Atom& b : c.body) s += " " + std::to_string(lm.level(b));
        return s;
    };
    clause_sweep(r, p, opts, cond, explain, true);
    return r;
}

std::optional<std::size_t> check_query_bound(const Query& q, const LevelMapping& lm) {
    std::size_t best = 0;
    for (const Atom& a : q.atoms) {
        if (!lm.maps(a)) return std::nullopt;
        LinearLevel f = lm.level_form(a);
        if (!f.bounded()) return std::nullopt;
        best = std::max(best, static_cast<std::size_t>(f.constant));
    }
    return best;
}

namespace {

// Searches the instances of each pattern for atoms outside `in`; false
// when the search stopped early.
template <class In>
bool patterns_within(CheckReport& r, const std::vector<Pattern>& patterns, const std::string& what, In in,
                     const std::string& failure, const CheckOptions& opts) {
    for (const Pattern& pat : patterns) {
        const std::size_t want = opts.max_counterexamples - std::min(opts.max_counterexamples, r.counterexamples.size());
        if (want == 0) return false;
        if (left(r, opts) == 0) {
            r.capped = true;
            return false;
        }
        SearchSpace space{opts.sig, {pat.atom.as_term()}, pat.bounds};
        SearchOptions so;
        so.node_cap = left(r, opts);
        so.max_witnesses = want;
        so.stop_after = want;
        so.parallel = opts.parallel;
        Condition f = [&](Kleene& k, std::span<const Term> t) { return neg(in(k, Atom(t[0]))); };
        SearchOutcome out = search(space, f, so);
        absorb(r, out);
        for (const auto& w : out.witnesses)
            r.counterexamples.push_back({to_string(Atom(w[0])), what + " within depth " + std::to_string(opts.depth) +
                                                                    " but " + failure});
    }
    return true;
}

std::optional<SymbolicFixpoint> fixpoint_or_cap(CheckReport& r, const Program& p, const CheckOptions& opts) {
    try {
        SymbolicFixpoint fix = symbolic_fixpoint(p, opts.depth);
        r.notes.push_back("depth-" + std::to_string(opts.depth) + " fixpoint: " + std::to_string(fix.patterns.size()) +
                          " patterns after " + std::to_string(fix.rounds) + " rounds");
        return fix;
    } catch (const ResourceCap& e) {
        r.capped = true;
        r.notes.push_back(e.what());
        return std::nullopt;
    }
}

}  // namespace

CheckReport compare_spec_fixpoint(const Program& p, const SpecSet& s_corr, const SpecSet& s_compl,
                                  std::size_t sample_budget, const CheckOptions& opts) {
    CheckReport r = start("fixpoint", opts);
    r.parameters.emplace_back("correctness_spec", s_corr.name());
    r.parameters.emplace_back("completeness_spec", s_compl.name());
    auto fix = fixpoint_or_cap(r, p, opts);
    if (!fix) return r;
    patterns_within(r, fix->patterns, "derived", [&](Kleene& k, const Atom& a) { return s_corr.contains(k, a); },
                    "not in " + s_corr.name(), opts);
    const std::vector<Atom> atoms = s_compl.sample(sample_budget);
    std::size_t present = 0;
    for (const Atom& a : atoms) present += fix->contains(a);
    r.notes.push_back("bounded evidence: " + std::to_string(present) + " of " + std::to_string(atoms.size()) +
                      " sampled atoms of " + s_compl.name() + " are in the depth-" + std::to_string(opts.depth) +
                      " fixpoint");
    return r;
}

CheckReport check_spec_exact(const Program& p, const SpecSet& s, const std::vector<Pattern>& slice,
                             const CheckOptions& opts) {
    CheckReport r = start("exact", opts);
    r.parameters.emplace_back("spec", s.name());
    auto fix = fixpoint_or_cap(r, p, opts);
    if (!fix) return r;
    if (!patterns_within(r, fix->patterns, "derived", [&](Kleene& k, const Atom& a) { return s.contains(k, a); },
                         "not in " + s.name(), opts))
        return r;
    if (!patterns_within(r, slice, "generated", [&](Kleene& k, const Atom& a) { return s.contains(k, a); },
                         "not in " + s.name(), opts))
        return r;
    patterns_within(r, slice, "in " + s.name(), [&](Kleene& k, const Atom& a) { return fix->contains(k, a); },
                    "not derived", opts);
    return r;
}

// ---- diagonal-shift lemma ---------------------------------------------------------

namespace {

struct L4Instance {
    Term cs, us, ds, t, t2;
    std::size_t m = 0, i = 0;
};

class L4Gen {
public:
    L4Gen(std::uint64_t seed, std::size_t n, std::size_t max_row) : max_row_(max_row) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n >> 32)};
        rng_.seed(seq);
    }

    std::size_t pick(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }

    Term filler() {
        static const char* names[] = {"a", "b", "nil"};
        std::size_t r = pick(0, max_row_ + 3);
        if (r <= max_row_ + 1) return numeral(r);
        return Term::constant(Symbol(names[pick(0, 2)]));
    }

    Term tail() { return pick(0, 3) == 0 ? Term::constant(Symbol("c")) : nil(); }

    // A placement of queens 1..m built to be correct as seen from `row`,
    // except when two queens share a diagonal and one overwrites the other.
    PlacementTriple placement(std::size_t m, std::size_t row) {
        const std::size_t len = m + pick(0, 2);
        std::vector<std::size_t> cols(len);
        for (std::size_t k = 0; k < len; ++k) cols[k] = k + 1;
        std::shuffle(cols.begin(), cols.end(), rng_);
        std::vector<Term> cs(len);
        static const char* extra[] = {"a", "b", "c", "d"};
        for (std::size_t k = 0, e = 0; k < len; ++k) cs[k] = Term::constant(Symbol(extra[e++ % 4]));
        std::vector<std::pair<long, long>> up, down;
        for (std::size_t j = 1; j <= m; ++j) {
            const long k = static_cast<long>(cols[j - 1]);
            cs[k - 1] = numeral(j);
            up.emplace_back(up_diag_number(static_cast<long>(j), k, static_cast<long>(row)), static_cast<long>(j));
            down.emplace_back(down_diag_number(static_cast<long>(j), k, static_cast<long>(row)), static_cast<long>(j));
        }
        return {make_list(cs, nil()), diag(up), diag(down)};
    }

    std::optional<Term> perturb(const Term& list) {
        std::vector<Term> elems;
        const Term* cur = &list;
        while (cur->is(sym::cons(), 2)) {
            elems.push_back(cur->arg(0));
            cur = &cur->arg(1);
        }
        if (elems.empty()) return std::nullopt;
        elems[pick(0, elems.size() - 1)] = filler();
        return make_list(elems, *cur);
    }

    L4Instance next(std::size_t n) {
        L4Instance x;
        x.i = pick(1, max_row_);
        x.m = pick(1, x.i);
        const bool backward = n % 2 == 1;
        if (!backward) {
            PlacementTriple p = placement(x.m, x.i);
            if (!p.us.is(sym::cons(), 2)) p.us = cons(filler(), p.us);
            x.cs = p.cs;
            x.t = p.us.arg(0);
            x.us = p.us.arg(1);
            x.ds = p.ds;
            x.t2 = filler();
        } else {
            PlacementTriple p = placement(x.m, x.i + 1);
            if (!p.ds.is(sym::cons(), 2)) p.ds = cons(filler(), p.ds);
            x.cs = p.cs;
            x.us = p.us;
            x.t2 = p.ds.arg(0);
            x.ds = p.ds.arg(1);
            x.t = filler();
        }
        // Every third instance gets one element changed at random.
        if (n % 3 == 2) {
            Term* lists[] = {&x.cs, &x.us, &x.ds};
            Term& target = *lists[pick(0, 2)];
            if (auto changed = perturb(target)) target = *changed;
        }
        return x;
    }

private:
    Term diag(const std::vector<std::pair<long, long>>& req) {
        long len = 0;
        for (const auto& [l, j] : req) len = std::max(len, l);
        len += static_cast<long>(pick(0, 1));
        std::vector<Term> elems;
        for (long l = 1; l <= len; ++l) elems.push_back(filler());
        for (const auto& [l, j] : req)
            if (l > 0) elems[l - 1] = numeral(static_cast<std::size_t>(j));
        return make_list(elems, tail());
    }

    std::size_t max_row_;
    std::mt19937_64 rng_;
};

std::string describe(const L4Instance& x) {
    return "m=" + std::to_string(x.m) + " i=" + std::to_string(x.i) + " cs=" + to_string(x.cs) +
           " us=" + to_string(x.us) + " ds=" + to_string(x.ds) + " t=" + to_string(x.t) + " t'=" + to_string(x.t2);
}

struct L4Outcome {
    bool forward_premise = false;
    bool backward_premise = false;
    std::optional<Counterexample> violation;
};

L4Outcome run_instance(const L4Instance& x, const std::vector<Term>& universe) {
    L4Outcome o;
    if (correct_up_to({x.cs, cons(x.t, x.us), x.ds}, x.m, x.i)) {
        o.forward_premise = true;
        if (!correct_up_to({x.cs, x.us, cons(x.t2, x.ds)}, x.m, x.i + 1))
            o.violation = Counterexample{describe(x), "forward: correct from row i, not from row i+1"};
    }
    if (correct_up_to({x.cs, x.us, cons(x.t2, x.ds)}, x.m, x.i + 1)) {
        o.backward_premise = true;
        bool found = false;
        for (const Term& t : universe)
            if (correct_up_to({x.cs, cons(t, x.us), x.ds}, x.m, x.i)) {
                found = true;
                break;
            }
        if (!found && !o.violation)
            o.violation = Counterexample{describe(x), "backward: no t in the bounded universe restores row i"};
    }
    return o;
}

}  // namespace

Lemma4Result lemma4_suite(const Lemma4Options& opts) {
    // Candidates for the existential t: numerals up to max_row plus every term of depth <= 1.
    std::vector<Term> universe;
    for (std::size_t j = 0; j <= opts.max_row; ++j) universe.push_back(numeral(j));
    for (const Term& t : enumerate_terms(Signature::standard(), 1))
        if (std::find(universe.begin(), universe.end(), t) == universe.end()) universe.push_back(t);

    std::vector<L4Outcome> out(opts.instances);
    const long n = static_cast<long>(opts.instances);
    auto one = [&](long k) {
        const auto idx = static_cast<std::size_t>(k);
        L4Gen gen(opts.seed, idx, opts.max_row);
        out[idx] = run_instance(gen.next(idx), universe);
    };
    if (opts.parallel) {
#pragma omp parallel for schedule(static, 256)
        for (long k = 0; k < n; ++k) one(k);
    } else {
        for (long k = 0; k < n; ++k) one(k);
    }
    Lemma4Result r;
    r.instances = opts.instances;
    for (const L4Outcome& o : out) {
        r.forward_premises += o.forward_premise;
        r.backward_premises += o.backward_premise;
        if (o.violation) r.violations.push_back(*o.violation);
    }
    return r;
}

CheckReport lemma4_report(const Lemma4Result& r, const Lemma4Options& opts) {
    CheckReport rep;
    rep.check_name = "lemma4";
    rep.parameters = {{"instances", std::to_string(opts.instances)},
                      {"seed", std::to_string(opts.seed)},
                      {"max_row", std::to_string(opts.max_row)}};
    rep.instances_examined = r.instances;
    rep.counterexamples = r.violations;
    rep.notes.push_back("forward premise held on " + std::to_string(r.forward_premises) + " instances");
    rep.notes.push_back("backward premise held on " + std::to_string(r.backward_premises) + " instances");
    return rep;
}

std::vector<CheckReport> mutant_suite(Mutant m, std::size_t sample_budget, const CheckOptions& opts) {
    std::vector<CheckReport> out;
    out.push_back(check_model(nqueens_program(m), SpecSet::named(SpecName::s), opts));
    out.push_back(check_completeness_condition(nqueens_program(m), SpecSet::named(SpecName::s0), sample_budget, opts));
    out.push_back(
        check_spec_exact(pq_fragment(m), SpecSet::named(SpecName::s_pq), s_pq_patterns(opts.depth), opts));
    for (CheckReport& r : out) r.parameters.emplace_back("program", m == Mutant::none ? "nqueens" : to_string(m));
    return out;
}

}  // namespace nqv
