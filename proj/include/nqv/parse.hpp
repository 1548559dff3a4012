#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "nqv/term.hpp"

namespace nqv {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Predicate name -> arity, as collected while parsing.
using PredicateTable = std::map<Symbol, std::size_t>;

/**
 * Prolog-subset reader.
 *
 *   clause  ::= atom [":-" atom {"," atom}] "."
 *   term    ::= Var | "_" | integer | name ["(" term {"," term} ")"] | list
 *   list    ::= "[" "]" | "[" term {"," term} ["|" term] "]"
 *
 * Integers denote numerals s^n(0). Each "_" is a distinct fresh variable;
 * named variables are shared within one clause or query. "%" starts a
 * comment running to end of line.
 *
 * Function symbols are declared into `sig` as they are met; a use that
 * clashes with a declared arity is a ParseError.
 */
class Parser {
public:
    explicit Parser(Signature& sig) : sig_(sig) {}

    Program program(std::string_view text);
    /// A conjunction "a1, ..., an" with optional "?-" prefix and trailing ".".
    Query query(std::string_view text);
    Term term(std::string_view text);
    Atom atom(std::string_view text);

    const PredicateTable& predicates() const { return predicates_; }

private:
    Signature& sig_;
    PredicateTable predicates_;
};

Program parse_program(std::string_view text, Signature& sig);
/// Parses against a copy of Signature::standard().
Program parse_program(std::string_view text);
Query parse_query(std::string_view text, Signature& sig);
Query parse_query(std::string_view text);
Term parse_term(std::string_view text);
Atom parse_atom(std::string_view text);

/// Collects the function symbols used by the program (plus `base`).
Signature signature_of(const Program& p, Signature base = Signature::minimal());

}  // namespace nqv
