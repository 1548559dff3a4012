#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nqv/engine.hpp"
#include "nqv/term.hpp"

namespace nqv {

/// Layered-diagonal n-queens program, clauses numbered 0..3 in this order.
inline constexpr std::string_view kNqueensSource =
    "pqs(0,_,_,_).\n"
    "pqs(s(I),Cs,Us,[_|Ds]) :- pqs(I,Cs,[_|Us],Ds), pq(s(I),Cs,Us,Ds).\n"
    "pq(I,[I|_],[I|_],[I|_]).\n"
    "pq(I,[_|Cs],[_|Us],[_|Ds]) :- pq(I,Cs,Us,Ds).\n";

/// Single-clause edits used to check that the verification suite can fail.
enum class Mutant {
    none,
    /// Us and Ds exchanged throughout the body of the recursive pqs clause.
    swap_us_ds,
    /// Recursive pqs clause takes Ds instead of [_|Ds] as fourth head argument.
    drop_ds_wrapper,
    /// Recursive pq clause leaves the up-diagonal list unstripped.
    pq_nonuniform,
};

std::optional<Mutant> parse_mutant(std::string_view name);
const char* to_string(Mutant m);
std::string_view mutant_source(Mutant m);

Program nqueens_program(Mutant m = Mutant::none);
/// Clauses for pq only.
Program pq_fragment(Mutant m = Mutant::none);

/// pqs(n, [V1,...,Vn], W1, W2) with n + 2 distinct fresh variables; n >= 1.
Query initial_query(std::size_t n);

/// rows[k-1] is the row of the queen standing in column k.
struct QueensSolution {
    std::vector<int> rows;
    friend auto operator<=>(const QueensSolution&, const QueensSolution&) = default;
};

bool is_solution(const QueensSolution& s);

/// Reads the column list of an answer to initial_query(n). Throws
/// std::invalid_argument unless it is a ground placement solving n-queens.
QueensSolution extract_solution(const Answer& ans, std::size_t n);

/// All solutions for 1 <= n <= 10, permutations searched in parallel.
std::set<QueensSolution> brute_force(std::size_t n);
/// Same result, single thread; kept as the reference for brute_force.
std::set<QueensSolution> brute_force_serial(std::size_t n);

/// Row j on line j (top to bottom), 'Q' in its column, '.' elsewhere.
std::string render_board(const QueensSolution& s);
/// "n;r1,r2,...,rn"
std::string export_line(const QueensSolution& s);

}  // namespace nqv
