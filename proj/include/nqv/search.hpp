#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nqv/herbrand.hpp"
#include "nqv/kleene.hpp"
#include "nqv/term.hpp"

namespace nqv {

/**
 * A finite set of ground instances: every way of replacing each hole of
 * `targets` by a ground term over `sig` whose depth is within the hole's bound.
 * Every variable occurring in `targets` must have a bound in `holes`.
 */
struct SearchSpace {
    Signature sig;
    std::vector<Term> targets;
    HoleBounds holes;
};

/// Three-valued condition on (partially instantiated) targets.
using Condition = std::function<Truth(Kleene&, std::span<const Term>)>;

struct SearchOptions {
    /// Evaluated search nodes before the search gives up.
    std::size_t node_cap = 10'000'000;
    /// Satisfying instances kept, in search order.
    std::size_t max_witnesses = 20;
    /// Levels of case splitting on undecided equalities per node.
    unsigned split_depth = 6;
    bool parallel = true;
    /// Stop once this many satisfying nodes were found; 0 searches everything.
    std::size_t stop_after = 0;
};

struct SearchOutcome {
    /// Ground instances whose condition value was decided.
    BigCount examined = 0;
    /// Those where the condition holds.
    BigCount satisfying = 0;
    /// Decided nodes where the condition holds; each stands for one or more instances.
    std::size_t satisfying_nodes = 0;
    /// Nodes behind the result, fixed for a given space and mode. The node
    /// cap counts all evaluations, including parallel work that was discarded.
    std::size_t nodes = 0;
    bool capped = false;
    /// The search ended early because of stop_after.
    bool stopped = false;
    /// One ground instance per satisfying node, in search order. After a cap
    /// in parallel mode which nodes were reached depends on scheduling.
    std::vector<std::vector<Term>> witnesses;
};

/**
 * Decides `cond` on every instance of the space by narrowing: holes are
 * expanded one constructor at a time (constants by name, then functors by
 * name) only where the three-valued evaluation is blocked, so a decided node
 * settles all of its completions at once.
 *
 * The parallel form splits the tree breadth-first and merges the subtrees in
 * order, so counts and witnesses match the serial form whenever the cap is
 * not hit, including searches cut short by stop_after.
 */
SearchOutcome search(const SearchSpace& space, const Condition& cond, const SearchOptions& opts = {});

/// Reference: evaluates `cond` on every ground instance, one at a time.
SearchOutcome brute_force_search(const SearchSpace& space, const Condition& cond, std::size_t cap = 10'000'000);

}  // namespace nqv
