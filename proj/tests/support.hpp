#pragma once

// Shared helpers for the unit tests: seeded random terms and parsing shortcuts.

#include <random>
#include <vector>

#include "nqv/parse.hpp"
#include "nqv/term.hpp"

namespace nqv::testing {

inline Term T(std::string_view s) { return parse_term(s); }
inline Atom A(std::string_view s) { return parse_atom(s); }

/// Random term over the standard signature plus the given variables.
class TermGen {
public:
    explicit TermGen(std::uint64_t seed, std::vector<Term> vars = {}) : rng_(seed), vars_(std::move(vars)) {}

    Term operator()(unsigned depth) {
        std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 4);
        int c = pick(rng_);
        if (c == 0 && !vars_.empty()) return vars_[std::uniform_int_distribution<std::size_t>(0, vars_.size() - 1)(rng_)];
        if (c <= 1) {
            static const char* consts[] = {"0", "nil", "a", "b", "c"};
            return Term::constant(Symbol(consts[std::uniform_int_distribution<int>(0, 4)(rng_)]));
        }
        if (c == 2) return Term::make(sym::succ(), {(*this)(depth - 1)});
        return cons((*this)(depth - 1), (*this)(depth - 1));
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
    std::vector<Term> vars_;
};

inline std::vector<Term> make_vars(std::size_t n) {
    std::vector<Term> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(Term::fresh("X" + std::to_string(i)));
    return v;
}

}  // namespace nqv::testing
