#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nqv/term.hpp"

namespace nqv {

/// Strong Kleene truth values.
enum class Truth : std::uint8_t { no = 0, unknown = 1, yes = 2 };

constexpr Truth truth(bool b) { return b ? Truth::yes : Truth::no; }
constexpr Truth neg(Truth a) { return static_cast<Truth>(2 - static_cast<int>(a)); }
constexpr Truth conj(Truth a, Truth b) { return a < b ? a : b; }
constexpr Truth disj(Truth a, Truth b) { return a < b ? b : a; }
constexpr Truth implies(Truth a, Truth b) { return disj(neg(a), b); }
const char* to_string(Truth t);

/// Per-hole depth bounds of a partial instance.
using HoleBounds = std::unordered_map<VarId, int>;

/**
 * Evaluation context for predicates over partial instances. Every variable
 * in an evaluated term is a hole: it stands for some ground term (of depth at
 * most its bound, when bounds are known). A `yes` or `no` answer holds for
 * every completion of the holes.
 *
 * Unknown results record the holes that blocked them, which the grounding
 * search expands next. Unknown equalities are also recorded as keys so the
 * search can case-split on them: evaluating under an assumed value for a
 * key stays sound because the strong Kleene connectives are monotone.
 */
class Kleene {
public:
    explicit Kleene(const HoleBounds* bounds = nullptr) : bounds_(bounds) {}

    // Structural views. Each returns `unknown` when a hole decides the answer.
    struct Member {
        Truth exists;
        Term value;  ///< valid when exists == yes
    };
    Member kth_member(const Term& t, std::size_t k);
    struct Numeral {
        Truth is_numeral;
        std::size_t value = 0;  ///< valid when is_numeral == yes
    };
    Numeral numeral(const Term& t);
    Truth is_cons(const Term& t);
    Truth is_proper_list(const Term& t);

    Truth eq(const Term& a, const Term& b);
    Truth eq_numeral(const Term& t, std::size_t n);
    /// Proper list with pairwise syntactically different members.
    Truth distinct_members(const Term& t);
    /// Some kth_member of `list` equals e.
    Truth member_of(const Term& e, const Term& list);
    /// Smallest and largest possible depth of the completions of t.
    std::pair<int, int> depth_range(const Term& t);

    /// Bound of a hole; holes without a recorded bound are treated as unbounded.
    std::optional<int> bound(VarId v) const;
    /// Records a hole whose shape (spine, numeral, depth) decides the result.
    void block(VarId hole) { blocking_.push_back(hole); }
    void block(const Term& t);
    /// Records a hole inside an undecided equality; case splitting may settle those.
    void block_eq(VarId hole) { eq_blocking_.push_back(hole); }

    using Key = std::pair<Term, Term>;
    static Key key(const Term& a, const Term& b) { return compare(a, b) < 0 ? Key{a, b} : Key{b, a}; }
    /// Evaluate eq on this key as `value`.
    void assume(const Key& k, Truth value) { assumed_.emplace_back(k, value); }
    void clear_record() {
        blocking_.clear();
        eq_blocking_.clear();
        unknown_keys_.clear();
    }

    const std::vector<VarId>& blocking() const { return blocking_; }
    const std::vector<VarId>& eq_blocking() const { return eq_blocking_; }
    const std::vector<Key>& unknown_keys() const { return unknown_keys_; }
    const std::vector<std::pair<Key, Truth>>& assumptions() const { return assumed_; }

private:
    const HoleBounds* bounds_;
    std::vector<VarId> blocking_;
    std::vector<VarId> eq_blocking_;
    std::vector<Key> unknown_keys_;
    std::vector<std::pair<Key, Truth>> assumed_;
};

/// Three-valued condition over partially instantiated targets.
using Evaluation = std::function<Truth(Kleene&, std::span<const Term>)>;

struct Decision {
    Truth value = Truth::unknown;
    /// Blocking holes of the unsplit evaluation, shape holes first.
    std::vector<VarId> shape_holes;
    std::vector<VarId> eq_holes;
};

/**
 * Evaluates `f` and, while the result is unknown, case-splits on a recorded
 * equality a = b up to `depth` levels. The equal branch continues on the
 * instance under mgu(a, b) with the bounds narrowed to match; the other
 * branch keeps a != b as an assumption. The two branches partition the
 * completions, so a value on which both agree holds for all of them.
 */
Decision decide(std::span<const Term> targets, const HoleBounds& bounds, const Evaluation& f, unsigned depth);

/// Narrows `bounds` under θ: the holes of θ(x) get at most bound(x) minus
/// their nesting depth. False when some completion set becomes empty.
bool narrow_bounds(const Substitution& theta, const HoleBounds& bounds, HoleBounds& out);

}  // namespace nqv
