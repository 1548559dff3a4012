#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nqv/symbol.hpp"

namespace nqv {

enum class VarId : std::uint64_t {};

/// A fresh identifier, unique for the lifetime of the process.
VarId fresh_var_id();

struct TermNode;

/**
 * Immutable first-order term: a variable or a functor applied to arguments.
 * Constants are 0-ary compounds. Copies share structure.
 *
 * Each node caches its hash, groundness and depth (constructor nesting with
 * variables counted as depth 0), so those queries are O(1).
 */
class Term {
public:
    Term() = default;

    static Term variable(VarId id, std::string name = {});
    /// New variable with a process-unique id.
    static Term fresh(std::string name = {});
    static Term make(Symbol functor, std::vector<Term> args = {});
    static Term constant(Symbol functor) { return make(functor); }

    bool valid() const { return node_ != nullptr; }
    bool is_var() const;
    bool is_compound() const { return !is_var(); }
    bool is_constant() const { return is_compound() && arity() == 0; }

    VarId var() const;
    /// Source name of a variable; empty for anonymous and generated variables.
    const std::string& var_name() const;

    Symbol functor() const;
    std::size_t arity() const;
    std::span<const Term> args() const;
    const Term& arg(std::size_t i) const;

    bool ground() const;
    unsigned depth() const;
    std::size_t hash() const;

    bool is(Symbol f, std::size_t n) const { return is_compound() && functor() == f && arity() == n; }

    friend bool operator==(const Term& a, const Term& b);

private:
    friend struct TermNode;
    explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const TermNode> node_;
};

/// Structural total order: variables before compounds, then arity, name, arguments.
int compare(const Term& a, const Term& b);

struct TermLess {
    bool operator()(const Term& a, const Term& b) const { return compare(a, b) < 0; }
};

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};

// ---- numerals and lists -------------------------------------------------

Term numeral(std::size_t n);
/// Inverse of numeral(); empty when t is not of the form s^n(0).
std::optional<std::size_t> numeral_value(const Term& t);

Term nil();
Term cons(Term head, Term tail);
Term make_list(std::vector<Term> elements, Term tail = nil());

/// e such that t = [e1,...,e(k-1), e | e'], or empty when the cons spine ends first.
std::optional<Term> kth_member(const Term& t, std::size_t k);
/// Every (k, e) with kth_member(t, k) == e, in increasing k.
std::vector<std::pair<std::size_t, Term>> members_with_index(const Term& t);

bool is_proper_list(const Term& t);
std::optional<std::size_t> list_length(const Term& t);
/// Proper list whose members are pairwise syntactically different.
bool distinct_members(const Term& t);

/// Variables of t in left-to-right order of first occurrence.
std::vector<VarId> vars_of(const Term& t);
bool occurs_in(VarId v, const Term& t);

// ---- atoms, clauses, programs -------------------------------------------

class Atom {
public:
    Atom() = default;
    Atom(Symbol predicate, std::vector<Term> args) : term_(Term::make(predicate, std::move(args))) {}
    explicit Atom(Term t);

    Symbol predicate() const { return term_.functor(); }
    std::size_t arity() const { return term_.arity(); }
    std::span<const Term> args() const { return term_.args(); }
    const Term& arg(std::size_t i) const { return term_.arg(i); }
    bool ground() const { return term_.ground(); }
    const Term& as_term() const { return term_; }

    friend bool operator==(const Atom& a, const Atom& b) { return a.term_ == b.term_; }

private:
    Term term_;
};

struct AtomLess {
    bool operator()(const Atom& a, const Atom& b) const { return compare(a.as_term(), b.as_term()) < 0; }
};

struct AtomHash {
    std::size_t operator()(const Atom& a) const { return a.as_term().hash(); }
};

struct Clause {
    Atom head;
    std::vector<Atom> body;

    bool is_unit() const { return body.empty(); }
    friend bool operator==(const Clause&, const Clause&) = default;
};

/// Variables of the clause, body first then head, in order of first occurrence.
std::vector<VarId> vars_of(const Clause& c);

struct Query {
    std::vector<Atom> atoms;
};

std::vector<VarId> vars_of(const Query& q);

struct Program {
    std::vector<Clause> clauses;
};

// ---- signature ------------------------------------------------------------

/// Function symbols with fixed arities. Herbrand universe is built from these.
class Signature {
public:
    /// {0/0, s/1, nil/0, cons/2}.
    static Signature minimal();
    /// minimal() plus the filler constants a..f.
    static Signature standard();

    /// Throws std::invalid_argument on an arity clash.
    void declare(Symbol f, std::size_t arity);
    std::optional<std::size_t> arity_of(Symbol f) const;
    bool contains(Symbol f, std::size_t arity) const;

    /// Constants ordered by name.
    std::vector<Symbol> constants() const;
    /// Non-constant symbols ordered by name.
    std::vector<std::pair<Symbol, std::size_t>> functors() const;
    /// Every symbol ordered by name.
    std::vector<std::pair<Symbol, std::size_t>> symbols() const;

    /// Every function symbol of t is declared with the right arity.
    bool admits(const Term& t) const;

    friend bool operator==(const Signature&, const Signature&) = default;

private:
    std::map<Symbol, std::size_t> arities_;
};

// ---- substitutions --------------------------------------------------------

/**
 * Finite map from variables to terms, applied simultaneously.
 * Bindings x -> x are never stored.
 */
class Substitution {
public:
    Substitution() = default;

    void bind(VarId v, Term t);
    const Term* lookup(VarId v) const;
    bool empty() const { return map_.empty(); }
    std::size_t size() const { return map_.size(); }
    const std::map<VarId, Term>& bindings() const { return map_; }

    Term apply(const Term& t) const;
    Atom apply(const Atom& a) const;
    Clause apply(const Clause& c) const;

    /// Applying the result equals applying `first` then `second`.
    static Substitution compose(const Substitution& first, const Substitution& second);
    Substitution restricted_to(std::span<const VarId> vars) const;
    bool idempotent() const;

    friend bool operator==(const Substitution&, const Substitution&) = default;

private:
    std::map<VarId, Term> map_;
};

Term apply_subst(const Substitution& s, const Term& t);

// ---- printing -------------------------------------------------------------

/// Canonical text: numerals as decimals, lists in bracket syntax.
std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Clause& c);
std::string to_string(const Query& q);
std::string to_string(const Program& p);
std::string to_string(const Substitution& s);

std::ostream& operator<<(std::ostream& os, const Term& t);
std::ostream& operator<<(std::ostream& os, const Atom& a);
std::ostream& operator<<(std::ostream& os, const Clause& c);

/// Renames variables to V0, V1, ... in order of first occurrence, so variants print identically.
Term canonical_variant(const Term& t);

}  // namespace nqv

template <>
struct std::hash<nqv::VarId> {
    std::size_t operator()(nqv::VarId v) const noexcept { return std::hash<std::uint64_t>{}(static_cast<std::uint64_t>(v)); }
};
