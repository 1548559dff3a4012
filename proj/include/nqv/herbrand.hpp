#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nqv/kleene.hpp"
#include "nqv/term.hpp"

namespace nqv {

using BigCount = boost::multiprecision::cpp_int;

/// Raised when a bounded computation exceeds its resource cap.
class ResourceCap : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- terms -----------------------------------------------------------------

/// Number of ground terms of depth at most d, from T(0) = #constants and
/// T(d) = #constants + sum over f/n of T(d-1)^n.
BigCount count_terms(const Signature& sig, unsigned d);
/// count_terms for every depth 0..d.
std::vector<BigCount> term_counts(const Signature& sig, unsigned d);

/**
 * Every ground term of depth at most d, each once, ordered by depth and then
 * by functor name and argument positions. Throws ResourceCap when the count
 * exceeds `cap`.
 */
std::vector<Term> enumerate_terms(const Signature& sig, unsigned d, std::size_t cap = 10'000'000);

// ---- bounded clause slices -------------------------------------------------

/// Constructors above the deepest occurrence of each variable, per atom argument.
HoleBounds occurrence_depths(std::span<const Atom> atoms);

/**
 * Depth bound of every variable of `c` such that each argument of each atom
 * of the instance has depth at most d. Empty when the clause skeleton alone
 * exceeds d, in which case the slice has no instances.
 */
std::optional<HoleBounds> instance_bounds(const Clause& c, unsigned d);

BigCount count_ground_instances(const Clause& c, const Signature& sig, unsigned d);

/// Whether enumerating `c` at depth d triggers the combinatorial blowup warning.
bool blowup_warning(const Clause& c, unsigned d);

/**
 * Calls `f` on every ground instance of `c` in the depth-d slice, in the
 * deterministic term order, until it returns false. Writes a warning to
 * `warn` (when given) for clauses with more than six variables at d >= 2.
 */
void for_each_ground_instance(const Clause& c, const Signature& sig, unsigned d,
                              const std::function<bool(const Clause&)>& f, std::ostream* warn = nullptr);
std::vector<Clause> enumerate_ground_instances(const Clause& c, const Signature& sig, unsigned d,
                                               std::size_t cap = 10'000'000);

// ---- ground interpretations --------------------------------------------------

class GroundAtomSet {
public:
    GroundAtomSet() = default;

    /// Throws std::invalid_argument for a non-ground atom.
    bool insert(const Atom& a);
    bool contains(const Atom& a) const { return atoms_.count(a) != 0; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    bool admitted_by(const Signature& sig) const;

    auto begin() const { return atoms_.begin(); }
    auto end() const { return atoms_.end(); }

    /// One atom per line in canonical text, lines sorted.
    std::string serialize() const;
    static GroundAtomSet deserialize(std::string_view text);

    friend bool operator==(const GroundAtomSet&, const GroundAtomSet&) = default;

private:
    std::set<Atom, AtomLess> atoms_;
};

/// Every atom p(t1..tn) with each ti of depth at most d, over the given predicates.
GroundAtomSet herbrand_base(std::span<const std::pair<Symbol, std::size_t>> predicates, const Signature& sig,
                            unsigned d, std::size_t cap = 10'000'000);
std::vector<std::pair<Symbol, std::size_t>> predicates_of(const Program& p);

/// s ∪ {H ∈ base : some ground instance H <- B1..Bn of a clause has every Bi ∈ s}.
GroundAtomSet tp_step(const Program& p, const GroundAtomSet& s, const GroundAtomSet& base);

/**
 * Least fixpoint of the immediate consequence operator on the depth-d base.
 * This under-approximates the least model restricted to the base: derivations
 * through atoms deeper than d are cut. Throws ResourceCap past `cap` atoms.
 */
GroundAtomSet tp_fixpoint(const Program& p, const Signature& sig, unsigned d, std::size_t cap = 10'000'000);

// ---- symbolic fixpoint ---------------------------------------------------------

/**
 * The ground atoms θ(atom) where θ maps every variable v of `atom` to a term
 * of depth at most bounds[v]. Patterns built here keep those instances inside
 * the depth-d base.
 */
struct Pattern {
    Atom atom;
    HoleBounds bounds;

    /// Does the ground atom a belong to the pattern?
    bool matches(const Atom& a) const;
    /// Is every instance of `other` an instance of this pattern?
    bool subsumes(const Pattern& other) const;
    BigCount count(const std::vector<BigCount>& counts) const;
    /// Fresh variables, same denotation.
    Pattern renamed() const;
};

std::string to_string(const Pattern& p);

/// Pattern of a clause head restricted to the depth-d base, or empty when none fits.
std::optional<Pattern> head_pattern(const Atom& head, const HoleBounds& constraints, unsigned d);

struct SymbolicFixpoint {
    std::vector<Pattern> patterns;
    std::size_t rounds = 0;

    bool contains(const Atom& ground) const;
    /// Three-valued membership of a partial atom whose holes have bounds in ctx.
    Truth contains(Kleene& ctx, const Atom& partial) const;
    /// Expands every pattern over the signature; only for small slices.
    GroundAtomSet ground(const Signature& sig, std::size_t cap = 10'000'000) const;
};

/**
 * Semi-naive bottom-up iteration over patterns. Denotes exactly the ground
 * fixpoint tp_fixpoint(p, sig, d) for any signature covering the program's
 * symbols, without enumerating the base. Throws ResourceCap past `cap` patterns.
 */
SymbolicFixpoint symbolic_fixpoint(const Program& p, unsigned d, std::size_t cap = 1'000'000);

}  // namespace nqv
