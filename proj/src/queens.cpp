#include "nqv/queens.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "nqv/parse.hpp"

namespace nqv {

namespace {

constexpr std::string_view kSwapUsDs =
    "pqs(0,_,_,_).\n"
    "pqs(s(I),Cs,Us,[_|Ds]) :- pqs(I,Cs,[_|Ds],Us), pq(s(I),Cs,Ds,Us).\n"
    "pq(I,[I|_],[I|_],[I|_]).\n"
    "pq(I,[_|Cs],[_|Us],[_|Ds]) :- pq(I,Cs,Us,Ds).\n";

constexpr std::string_view kDropDsWrapper =
    "pqs(0,_,_,_).\n"
    "pqs(s(I),Cs,Us,Ds) :- pqs(I,Cs,[_|Us],Ds), pq(s(I),Cs,Us,Ds).\n"
    "pq(I,[I|_],[I|_],[I|_]).\n"
    "pq(I,[_|Cs],[_|Us],[_|Ds]) :- pq(I,Cs,Us,Ds).\n";

constexpr std::string_view kPqNonuniform =
    "pqs(0,_,_,_).\n"
    "pqs(s(I),Cs,Us,[_|Ds]) :- pqs(I,Cs,[_|Us],Ds), pq(s(I),Cs,Us,Ds).\n"
    "pq(I,[I|_],[I|_],[I|_]).\n"
    "pq(I,[_|Cs],Us,[_|Ds]) :- pq(I,Cs,Us,Ds).\n";

}  // namespace

std::optional<Mutant> parse_mutant(std::string_view name) {
    if (name == "none") return Mutant::none;
    if (name == "swap-us-ds") return Mutant::swap_us_ds;
    if (name == "drop-ds-wrapper") return Mutant::drop_ds_wrapper;
    if (name == "pq-nonuniform") return Mutant::pq_nonuniform;
    return std::nullopt;
}

const char* to_string(Mutant m) {
    switch (m) {
    case Mutant::none: return "none";
    case Mutant::swap_us_ds: return "swap-us-ds";
    case Mutant::drop_ds_wrapper: return "drop-ds-wrapper";
    case Mutant::pq_nonuniform: return "pq-nonuniform";
    }
    return "?";
}

std::string_view mutant_source(Mutant m) {
    switch (m) {
    case Mutant::none: return kNqueensSource;
    case Mutant::swap_us_ds: return kSwapUsDs;
    case Mutant::drop_ds_wrapper: return kDropDsWrapper;
    case Mutant::pq_nonuniform: return kPqNonuniform;
    }
    return kNqueensSource;
}

Program nqueens_program(Mutant m) { return parse_program(mutant_source(m)); }

Program pq_fragment(Mutant m) {
    Program all = nqueens_program(m);
    Program out;
    for (Clause& c : all.clauses)
        if (c.head.predicate().name() == "pq") out.clauses.push_back(std::move(c));
    return out;
}

Query initial_query(std::size_t n) {
    if (n == 0) throw std::invalid_argument("initial_query needs n >= 1");
    std::vector<Term> vs;
    for (std::size_t k = 1; k <= n; ++k) vs.push_back(Term::fresh("V" + std::to_string(k)));
    return Query{{Atom(Symbol("pqs"), {numeral(n), make_list(std::move(vs)), Term::fresh("W1"), Term::fresh("W2")})}};
}

bool is_solution(const QueensSolution& s) {
    const int n = static_cast<int>(s.rows.size());
    std::vector<int> sorted = s.rows;
    std::sort(sorted.begin(), sorted.end());
    for (int k = 0; k < n; ++k)
        if (sorted[k] != k + 1) return false;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (std::abs(s.rows[a] - s.rows[b]) == b - a) return false;
    return true;
}

QueensSolution extract_solution(const Answer& ans, std::size_t n) {
    if (ans.instantiated_query.atoms.size() != 1) throw std::invalid_argument("not an answer to a queens query");
    const Atom& a = ans.instantiated_query.atoms[0];
    if (a.predicate().name() != "pqs" || a.arity() != 4) throw std::invalid_argument("not an answer to a queens query");
    const Term& q = a.arg(1);
    auto len = list_length(q);
    if (!len || *len != n) throw std::invalid_argument("column list " + to_string(q) + " has the wrong shape");
    QueensSolution s;
    for (auto& [k, e] : members_with_index(q)) {
        auto v = numeral_value(e);
        if (!v) throw std::invalid_argument("column list " + to_string(q) + " holds a non-numeral");
        s.rows.push_back(static_cast<int>(*v));
    }
    if (!is_solution(s)) throw std::invalid_argument("column list " + to_string(q) + " is not a solution");
    return s;
}

namespace {

void check_range(std::size_t n) {
    if (n < 1 || n > 10) throw std::invalid_argument("brute force handles 1 <= n <= 10");
}

}  // namespace

std::set<QueensSolution> brute_force_serial(std::size_t n) {
    check_range(n);
    std::set<QueensSolution> out;
    std::vector<int> rows(n);
    std::iota(rows.begin(), rows.end(), 1);
    do {
        QueensSolution s{rows};
        if (is_solution(s)) out.insert(std::move(s));
    } while (std::next_permutation(rows.begin(), rows.end()));
    return out;
}

std::set<QueensSolution> brute_force(std::size_t n) {
    check_range(n);
    const int ni = static_cast<int>(n);
    // Same permutation sweep as the serial reference, split by the first column's row.
    std::vector<std::set<QueensSolution>> parts(n);
#pragma omp parallel for schedule(dynamic)
    for (int first = 1; first <= ni; ++first) {
        std::vector<int> rows{first};
        for (int r = 1; r <= ni; ++r)
            if (r != first) rows.push_back(r);
        do {
            QueensSolution s{rows};
            if (is_solution(s)) parts[first - 1].insert(std::move(s));
        } while (std::next_permutation(rows.begin() + 1, rows.end()));
    }
    std::set<QueensSolution> out;
    for (auto& p : parts) out.merge(p);
    return out;
}

std::string render_board(const QueensSolution& s) {
    const int n = static_cast<int>(s.rows.size());
    std::string out;
    for (int j = 1; j <= n; ++j) {
        for (int k = 0; k < n; ++k) out += s.rows[k] == j ? 'Q' : '.';
        out += '\n';
    }
    return out;
}

std::string export_line(const QueensSolution& s) {
    std::ostringstream os;
    os << s.rows.size() << ';';
    for (std::size_t k = 0; k < s.rows.size(); ++k) os << (k ? "," : "") << s.rows[k];
    return os.str();
}

}  // namespace nqv
