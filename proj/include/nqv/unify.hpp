#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "nqv/term.hpp"

namespace nqv {

struct UnifyOptions {
    bool occur_check = true;
};

struct UnifyStats {
    std::size_t attempts = 0;
    std::size_t failures = 0;
    /// Bindings refused because the variable occurs in its value. With the
    /// occur check off these are caught by the final cycle pass instead.
    std::size_t occur_failures = 0;
};

/**
 * Triangular binding store with a trail. Terms stay immutable; a variable's
 * value may mention other bound variables and is chased by deref()/resolve().
 */
class Bindings {
public:
    const Term& deref(const Term& t) const;
    /// t with every bound variable replaced, recursively.
    Term resolve(const Term& t) const;
    Atom resolve(const Atom& a) const { return Atom(resolve(a.as_term())); }

    bool bound(VarId v) const { return map_.count(v) != 0; }
    void bind(VarId v, Term t);

    std::size_t mark() const { return trail_.size(); }
    void undo(std::size_t mark);
    /// Variables bound since `mark`, oldest first.
    std::span<const VarId> since(std::size_t mark) const;

    /// Does v occur in t after dereferencing?
    bool occurs(VarId v, const Term& t) const;

private:
    std::unordered_map<VarId, Term> map_;
    std::vector<VarId> trail_;
};

/**
 * Unifies in place, left to right. On failure every binding made by this
 * call is undone. Variable-variable pairs bind the left variable.
 */
bool unify(const Term& a, const Term& b, Bindings& env, const UnifyOptions& opts = {}, UnifyStats* stats = nullptr);
bool unify(const Atom& a, const Atom& b, Bindings& env, const UnifyOptions& opts = {}, UnifyStats* stats = nullptr);

/// Idempotent most general unifier, or nothing on clash or cycle.
std::optional<Substitution> mgu(const Term& a, const Term& b, const UnifyOptions& opts = {});
std::optional<Substitution> unify_atoms(const Atom& a, const Atom& b, const UnifyOptions& opts = {});

/// Is `general` at least as general as `specific` (specific = general·θ)?
bool subsumes(const Term& general, const Term& specific);
bool is_variant(const Term& a, const Term& b);

}  // namespace nqv
