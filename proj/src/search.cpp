#include "nqv/search.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <stdexcept>

#include <omp.h>

namespace nqv {

namespace {

struct Node {
    std::vector<Term> targets;
    HoleBounds holes;
};

class Kernel {
public:
    Kernel(const SearchSpace& space, const Condition& cond, const SearchOptions& opts)
        : cond_(cond), opts_(opts), consts_(space.sig.constants()), functors_(space.sig.functors()) {
        int maxb = 0;
        for (const auto& [v, b] : space.holes) maxb = std::max(maxb, b);
        counts_ = term_counts(space.sig, static_cast<unsigned>(maxb));
        if (consts_.empty()) throw std::invalid_argument("search: signature has no constants");
    }

    std::atomic<std::size_t> nodes{0};
    std::atomic<bool> capped{false};

    // Decides the node or names the hole to expand next.
    Truth evaluate(const Node& n, VarId& pick) {
        if (nodes.fetch_add(1, std::memory_order_relaxed) >= opts_.node_cap) {
            capped = true;
            return Truth::unknown;
        }
        Decision dec = decide(n.targets, n.holes, cond_, opts_.split_depth);
        if (dec.value != Truth::unknown) return dec.value;
        // Shape holes first: undecided equalities are left to case splitting
        // as long as something structural remains to expand.
        bool found = false;
        for (const auto* list : {&dec.shape_holes, &dec.eq_holes}) {
            for (VarId h : *list)
                if (n.holes.count(h) && (!found || h < pick)) {
                    pick = h;
                    found = true;
                }
            if (found) break;
        }
        if (!found)
            for (const auto& [h, b] : n.holes)
                if (!found || h < pick) {
                    pick = h;
                    found = true;
                }
        if (!found) throw std::logic_error("search: condition undecided on a ground instance");
        return Truth::unknown;
    }

    BigCount weight(const Node& n) const {
        BigCount w = 1;
        for (const auto& [h, b] : n.holes) w *= counts_[b];
        return w;
    }

    std::vector<Node> expand(const Node& n, VarId h) const {
        const int b = n.holes.at(h);
        std::vector<Node> out;
        auto child = [&](Term value, const std::vector<Term>& fresh) {
            Substitution s;
            s.bind(h, std::move(value));
            Node c;
            c.targets.reserve(n.targets.size());
            for (const Term& t : n.targets) c.targets.push_back(s.apply(t));
            c.holes = n.holes;
            c.holes.erase(h);
            for (const Term& f : fresh) c.holes.emplace(f.var(), b - 1);
            out.push_back(std::move(c));
        };
        for (Symbol c : consts_) child(Term::constant(c), {});
        if (b >= 1)
            for (const auto& [f, arity] : functors_) {
                std::vector<Term> fresh;
                for (std::size_t i = 0; i < arity; ++i) fresh.push_back(Term::fresh());
                child(Term::make(f, fresh), fresh);
            }
        return out;
    }

    std::vector<Term> witness(const Node& n) const {
        Substitution s;
        for (const auto& [h, b] : n.holes) s.bind(h, Term::constant(consts_.front()));
        std::vector<Term> out;
        for (const Term& t : n.targets) out.push_back(s.apply(t));
        return out;
    }

    void record(const Node& n, Truth t, SearchOutcome& out) const {
        BigCount w = weight(n);
        out.examined += w;
        if (t != Truth::yes) return;
        out.satisfying += w;
        ++out.satisfying_nodes;
        if (out.witnesses.size() < opts_.max_witnesses) out.witnesses.push_back(witness(n));
    }

    // Serial depth-first narrowing of one subtree; gives up after `limit`
    // satisfying nodes when limit > 0.
    void dfs(Node root, SearchOutcome& out, std::size_t limit, const std::function<bool()>& stop) {
        std::vector<Node> stack;
        stack.push_back(std::move(root));
        while (!stack.empty()) {
            if (capped || stop()) return;
            Node n = std::move(stack.back());
            stack.pop_back();
            VarId pick{};
            Truth t = evaluate(n, pick);
            if (capped) return;
            ++out.nodes;
            if (t != Truth::unknown) {
                record(n, t, out);
                if (t == Truth::yes && limit && out.satisfying_nodes >= limit) {
                    out.stopped = true;
                    return;
                }
                continue;
            }
            auto kids = expand(n, pick);
            for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(std::move(*it));
        }
    }

private:
    const Condition& cond_;
    const SearchOptions& opts_;
    std::vector<Symbol> consts_;
    std::vector<std::pair<Symbol, std::size_t>> functors_;
    std::vector<BigCount> counts_;
};

Node root_of(const SearchSpace& space) {
    for (const Term& t : space.targets)
        for (VarId v : vars_of(t))
            if (!space.holes.count(v)) throw std::invalid_argument("search: variable without a depth bound");
    return {space.targets, space.holes};
}

void finish(SearchOutcome& out, const Kernel& k) {
    out.capped = k.capped.load();
}

}  // namespace

SearchOutcome search(const SearchSpace& space, const Condition& cond, const SearchOptions& opts) {
    Kernel k(space, cond, opts);
    SearchOutcome out;
    const auto never = [] { return false; };
    if (!opts.parallel) {
        k.dfs(root_of(space), out, opts.stop_after, never);
        finish(out, k);
        return out;
    }

    // Breadth-first split until there is enough work for every thread.
    struct Entry {
        Node node;
        bool decided = false;
        Truth value = Truth::unknown;
    };
    std::vector<Entry> entries;
    entries.push_back({root_of(space)});
    std::size_t split_nodes = 0;
    const std::size_t want = static_cast<std::size_t>(omp_get_max_threads()) * 32;
    for (int round = 0; round < 24; ++round) {
        std::size_t pending = 0;
        for (const Entry& e : entries) pending += !e.decided;
        if (pending == 0 || pending >= want || k.capped) break;
        std::vector<Entry> next;
        for (Entry& e : entries) {
            if (e.decided) {
                next.push_back(std::move(e));
                continue;
            }
            VarId pick{};
            Truth t = k.evaluate(e.node, pick);
            if (k.capped) break;
            ++split_nodes;
            if (t != Truth::unknown) {
                next.push_back({std::move(e.node), true, t});
                continue;
            }
            for (Node& c : k.expand(e.node, pick)) next.push_back({std::move(c)});
        }
        entries = std::move(next);
    }

    // Any entry that alone reaches stop_after bounds the prefix that matters,
    // so later entries can be skipped without changing the merged result.
    std::vector<SearchOutcome> parts(entries.size());
    std::vector<Node> saved(opts.stop_after ? entries.size() : 0);
    std::atomic<std::size_t> first_full{std::numeric_limits<std::size_t>::max()};
    const long total = static_cast<long>(entries.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < total; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        auto stop = [&] { return first_full.load() < idx; };
        if (stop() || k.capped) continue;
        Entry& e = entries[idx];
        if (e.decided) {
            k.record(e.node, e.value, parts[idx]);
            parts[idx].stopped = opts.stop_after == 1 && e.value == Truth::yes;
        } else {
            if (opts.stop_after) saved[idx] = e.node;
            k.dfs(std::move(e.node), parts[idx], opts.stop_after, stop);
        }
        if (parts[idx].stopped) {
            std::size_t cur = first_full.load();
            while (idx < cur && !first_full.compare_exchange_weak(cur, idx)) {
            }
        }
    }

    // Nodes are summed over the merged prefix only; work skipped or redone
    // depends on timing and is not reported.
    std::size_t hits = 0;
    out.nodes = split_nodes;
    for (std::size_t idx = 0; idx < parts.size(); ++idx) {
        SearchOutcome& p = parts[idx];
        if (opts.stop_after && hits + p.satisfying_nodes >= opts.stop_after && !entries[idx].decided) {
            // Redo the subtree that crosses the limit with the remaining budget.
            const std::size_t left = opts.stop_after - hits;
            p = SearchOutcome{};
            k.dfs(std::move(saved[idx]), p, left, never);
        }
        out.examined += p.examined;
        out.nodes += p.nodes;
        out.satisfying += p.satisfying;
        out.satisfying_nodes += p.satisfying_nodes;
        hits += p.satisfying_nodes;
        for (auto& w : p.witnesses)
            if (out.witnesses.size() < opts.max_witnesses) out.witnesses.push_back(std::move(w));
        if (opts.stop_after && hits >= opts.stop_after) {
            out.stopped = true;
            break;
        }
    }
    finish(out, k);
    return out;
}

SearchOutcome brute_force_search(const SearchSpace& space, const Condition& cond, std::size_t cap) {
    SearchOutcome out;
    std::vector<VarId> holes;
    for (const Term& t : space.targets)
        for (VarId v : vars_of(t))
            if (std::find(holes.begin(), holes.end(), v) == holes.end()) holes.push_back(v);
    for (const auto& [h, b] : space.holes)
        if (std::find(holes.begin(), holes.end(), h) == holes.end()) holes.push_back(h);
    int maxb = 0;
    for (VarId h : holes) maxb = std::max(maxb, space.holes.at(h));
    const auto terms = enumerate_terms(space.sig, static_cast<unsigned>(maxb), cap);
    const auto counts = term_counts(space.sig, static_cast<unsigned>(maxb));
    std::vector<std::size_t> limit;
    for (VarId h : holes) limit.push_back(static_cast<std::size_t>(counts[space.holes.at(h)]));
    std::vector<std::size_t> idx(holes.size(), 0);
    for (;;) {
        if (out.nodes++ >= cap) {
            out.capped = true;
            out.witnesses.clear();
            return out;
        }
        Substitution s;
        for (std::size_t i = 0; i < holes.size(); ++i) s.bind(holes[i], terms[idx[i]]);
        std::vector<Term> ground;
        for (const Term& t : space.targets) ground.push_back(s.apply(t));
        Kleene ctx;
        Truth t = cond(ctx, ground);
        if (t == Truth::unknown) throw std::logic_error("brute_force_search: condition undecided on a ground instance");
        out.examined += 1;
        if (t == Truth::yes) {
            out.satisfying += 1;
            ++out.satisfying_nodes;
            out.witnesses.push_back(std::move(ground));
        }
        std::size_t p = holes.size();
        while (p > 0 && ++idx[p - 1] == limit[p - 1]) idx[--p] = 0;
        if (p == 0) break;
    }
    return out;
}

}  // namespace nqv
