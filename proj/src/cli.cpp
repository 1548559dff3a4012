#include "nqv/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <functional>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "nqv/engine.hpp"
#include "nqv/parse.hpp"
#include "nqv/queens.hpp"
#include "nqv/queens_spec.hpp"
#include "nqv/verify.hpp"

namespace nqv::cli {

namespace {

constexpr std::size_t kMaxBoard = 12;

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Common {
    std::string rule = "leftmost";
    std::string occur = "on";
    std::string format = "text";
    std::string mutate = "none";
    std::string signature_file;

    bool records() const { return format == "records"; }
    Mutant mutant() const { return *parse_mutant(mutate); }
    SolveOptions solve_options(std::optional<std::size_t> depth) const {
        SolveOptions o;
        o.rule = *parse_selection_rule(rule);
        o.occur_check = occur == "on";
        o.depth_limit = depth;
        return o;
    }
    Signature signature() const {
        if (signature_file.empty()) return Signature::standard();
        Signature s = parse_signature(read_file(signature_file));
        for (const auto& [f, n] : Signature::minimal().symbols())
            if (!s.contains(f, n))
                throw UsageError("signature must declare " + std::string(f.name()) + "/" + std::to_string(n));
        return s;
    }
};

void add_common(CLI::App* app, Common& c, bool engine, bool verify) {
    if (engine) {
        app->add_option("--rule", c.rule, "Selection rule")
            ->check(CLI::IsMember({"leftmost", "rightmost", "fair"}))
            ->capture_default_str();
        app->add_option("--occur-check", c.occur, "Occur check in unification")
            ->check(CLI::IsMember({"on", "off"}))
            ->capture_default_str();
    }
    if (verify) app->add_option("--signature", c.signature_file, "File of name/arity declarations")->check(CLI::ExistingFile);
    app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "records"}))->capture_default_str();
    app->add_option("--mutate", c.mutate, "Run a built-in program mutant")
        ->check(CLI::IsMember({"none", "swap-us-ds", "drop-ds-wrapper", "pq-nonuniform"}))
        ->capture_default_str();
}

const char* end_name(StreamEnd::Reason r) {
    switch (r) {
    case StreamEnd::Reason::exhausted: return "exhausted";
    case StreamEnd::Reason::truncated: return "truncated";
    case StreamEnd::Reason::answer_limit: return "answer-limit";
    }
    return "?";
}

std::string plural(std::size_t n, const char* word) { return std::to_string(n) + " " + word + (n == 1 ? "" : "s"); }

// ---- solve ------------------------------------------------------------------

struct SolveArgs {
    std::size_t n = 0;
    bool boards = false;
    std::optional<std::size_t> depth;
};

int cmd_solve(const SolveArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
    using nlohmann::json;
    if (a.n < 1 || a.n > kMaxBoard) throw UsageError("n must be between 1 and " + std::to_string(kMaxBoard));
    const Program p = nqueens_program(c.mutant());
    Solver solver(p, initial_query(a.n), c.solve_options(a.depth));
    std::size_t count = 0;
    bool bad = false;
    StreamEnd::Reason end;
    for (;;) {
        auto step = solver.next();
        if (auto* e = std::get_if<StreamEnd>(&step)) {
            end = e->reason;
            break;
        }
        const Answer& ans = std::get<Answer>(step);
        ++count;
        try {
            QueensSolution s = extract_solution(ans, a.n);
            if (c.records())
                out << json{{"type", "solution"}, {"n", a.n}, {"rows", s.rows}, {"line", export_line(s)}}.dump() << "\n";
            else {
                out << export_line(s) << "\n";
                if (a.boards) out << render_board(s) << "\n";
            }
        } catch (const std::invalid_argument&) {
            bad = true;
            const std::string text = to_string(ans.instantiated_query);
            if (c.records())
                out << json{{"type", "non-solution"}, {"n", a.n}, {"answer", text}}.dump() << "\n";
            else
                out << "not a solution: " << text << "\n";
        }
    }
    if (c.records())
        out << json{{"type", "summary"}, {"n", a.n}, {"solutions", count}, {"end", end_name(end)}}.dump() << "\n";
    else {
        out << plural(count, "solution") << "\n";
        if (end == StreamEnd::Reason::truncated) out << "% truncated: a branch reached the depth limit\n";
    }
    if (bad) err << "some answers are not n-queens solutions\n";
    return bad ? check_failed : ok;
}

// ---- query ------------------------------------------------------------------

struct QueryArgs {
    std::string text;
    std::string program_file;
    std::optional<std::size_t> depth;
    std::optional<std::size_t> answers;
};

int cmd_query(const QueryArgs& a, const Common& c, std::ostream& out) {
    using nlohmann::json;
    Signature sig = Signature::standard();
    const Program p = a.program_file.empty() ? nqueens_program(c.mutant()) : parse_program(read_file(a.program_file), sig);
    const Query q = parse_query(a.text, sig);
    SolveOptions o = c.solve_options(a.depth);
    o.answer_limit = a.answers;
    SolveResult r = solve(p, q, o);

    // Named query variables, first occurrence order.
    std::vector<Term> named;
    std::function<void(const Term&)> collect = [&](const Term& t) {
        if (t.is_var()) {
            if (!t.var_name().empty() && std::find(named.begin(), named.end(), t) == named.end()) named.push_back(t);
            return;
        }
        for (const Term& x : t.args()) collect(x);
    };
    for (const Atom& at : q.atoms) collect(at.as_term());
    std::size_t index = 0;
    for (const Answer& ans : r.answers) {
        ++index;
        if (c.records()) {
            json b = json::object();
            for (const Term& v : named) b[v.var_name()] = to_string(ans.substitution.apply(v));
            out << json{{"type", "answer"}, {"index", index}, {"query", to_string(ans.instantiated_query)}, {"bindings", b}}
                       .dump()
                << "\n";
            continue;
        }
        std::string line;
        for (const Term& v : named) {
            if (!line.empty()) line += ", ";
            line += v.var_name() + " = " + to_string(ans.substitution.apply(v));
        }
        out << (line.empty() ? "yes" : line) << "\n";
    }
    if (c.records())
        out << json{{"type", "end"}, {"answers", r.answers.size()}, {"end", end_name(r.end)}}.dump() << "\n";
    else {
        out << plural(r.answers.size(), "answer") << "\n";
        if (r.end == StreamEnd::Reason::truncated) out << "% truncated: a branch reached the depth limit\n";
    }
    return ok;
}

// ---- verify -----------------------------------------------------------------

struct VerifyArgs {
    std::string suite;
    unsigned depth = 3;
    std::size_t max_instances = CheckOptions{}.max_instances;
    std::size_t samples = 20'000;
    std::size_t n = 8;
    std::string query;
    std::string atom;
    std::string spec;
    std::size_t instances = Lemma4Options{}.instances;
    std::uint64_t seed = 1;
    bool serial = false;
};

SpecSet spec_or(const std::string& name, SpecName fallback) {
    if (name.empty()) return SpecSet::named(fallback);
    return SpecSet::named(*parse_spec_name(name));
}

CheckReport bound_report(const VerifyArgs& a) {
    CheckReport r;
    r.check_name = "bound";
    Query q = a.query.empty() ? initial_query(a.n) : parse_query(a.query);
    r.parameters.emplace_back("query", to_string(q));
    r.instances_examined = 1;
    if (auto b = check_query_bound(q, LevelMapping::queens())) {
        r.parameters.emplace_back("bound", std::to_string(*b));
    } else {
        r.counterexamples.push_back({to_string(q), "no finite level bound over the ground instances of the query"});
    }
    return r;
}

CheckReport covered_atom_report(const VerifyArgs& a, const Program& p, const SpecSet& s, const CheckOptions& o) {
    CheckReport r;
    r.check_name = "covered";
    r.parameters = {{"depth", std::to_string(o.depth)}, {"spec", s.name()}, {"atom", a.atom}};
    Atom atom = parse_atom(a.atom);
    if (!atom.ground()) throw UsageError("--atom must be ground");
    Coverage c = check_covered(atom, p, s, o);
    r.instances_examined = 1;
    r.nodes = c.nodes;
    if (c.witness) {
        r.notes.push_back("clause " + std::to_string(c.witness->clause_index + 1) + ": " + to_string(c.witness->instance));
    } else if (c.capped) {
        r.capped = true;
    } else {
        r.counterexamples.push_back({a.atom, "no clause instance with this head has its body in " + s.name()});
    }
    return r;
}

int cmd_verify(const VerifyArgs& a, const Common& c, std::ostream& out) {
    CheckOptions o;
    o.sig = c.signature();
    o.depth = a.depth;
    o.max_instances = a.max_instances;
    o.parallel = !a.serial;
    const Program p = nqueens_program(c.mutant());
    const bool all = a.suite == "all";

    std::vector<CheckReport> reports;
    if (all || a.suite == "model") reports.push_back(check_model(p, spec_or(a.spec, SpecName::s), o));
    if (all || a.suite == "covered") {
        SpecSet s = spec_or(a.spec, SpecName::s0);
        reports.push_back(a.atom.empty() ? check_completeness_condition(p, s, a.samples, o) : covered_atom_report(a, p, s, o));
    }
    if (all || a.suite == "recurrent") reports.push_back(check_recurrent(p, LevelMapping::queens(), o));
    if (all || a.suite == "bound") reports.push_back(bound_report(a));
    if (all || a.suite == "lemma4") {
        Lemma4Options lo{.instances = a.instances, .seed = a.seed, .parallel = !a.serial};
        reports.push_back(lemma4_report(lemma4_suite(lo), lo));
    }
    if (all || a.suite == "fixpoint")
        reports.push_back(compare_spec_fixpoint(p, SpecSet::named(SpecName::s), SpecSet::named(SpecName::s0), a.samples, o));

    bool failed = false, capped_any = false;
    for (CheckReport& r : reports) {
        if (c.mutant() != Mutant::none) r.parameters.emplace_back("program", c.mutate);
        out << (c.records() ? r.records() : r.text());
        failed = failed || r.verdict() == Verdict::fail;
        capped_any = capped_any || r.verdict() == Verdict::resource_capped;
    }
    if (failed) return check_failed;
    return capped_any ? capped : ok;
}

}  // namespace

Signature parse_signature(std::string_view text) {
    Signature sig;
    std::string cleaned;
    bool comment = false;
    for (char ch : text) {
        if (ch == '%') comment = true;
        if (ch == '\n') comment = false;
        cleaned += comment || ch == ',' ? ' ' : ch;
    }
    std::istringstream in(cleaned);
    std::string item;
    while (in >> item) {
        auto slash = item.rfind('/');
        if (slash == std::string::npos || slash == 0 || slash + 1 == item.size())
            throw std::invalid_argument("bad signature item '" + item + "'");
        std::size_t arity = 0;
        for (char d : item.substr(slash + 1)) {
            if (d < '0' || d > '9') throw std::invalid_argument("bad arity in '" + item + "'");
            arity = arity * 10 + static_cast<std::size_t>(d - '0');
        }
        sig.declare(Symbol(item.substr(0, slash)), arity);
    }
    return sig;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Definite-clause engine and n-queens verification toolkit", "nqv"};
    app.require_subcommand(1);

    Common solve_c, query_c, verify_c;
    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "All solutions of the n-queens query");
    solve->add_option("n", sa.n, "Board size")->required();
    solve->add_flag("--boards", sa.boards, "Draw each board");
    solve->add_option("--depth", sa.depth, "Resolution steps allowed on one branch");
    add_common(solve, solve_c, true, false);

    QueryArgs qa;
    auto* query = app.add_subcommand("query", "Answers to a query against a program");
    query->add_option("query", qa.text, "Query text, e.g. \"pqs(0,A,B,C)\"")->required();
    query->add_option("--program", qa.program_file, "Program file (default: the built-in n-queens program)")
        ->check(CLI::ExistingFile);
    query->add_option("--depth", qa.depth, "Resolution steps allowed on one branch");
    query->add_option("--answers", qa.answers, "Stop after this many answers");
    add_common(query, query_c, true, false);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run verification checks on the n-queens program");
    verify->add_option("suite", va.suite, "Which check")
        ->required()
        ->check(CLI::IsMember({"model", "covered", "recurrent", "bound", "lemma4", "fixpoint", "all"}));
    verify->add_option("--depth", va.depth, "Term depth bound for clause instances")->capture_default_str();
    verify->add_option("--max-instances", va.max_instances, "Search node budget per check")->capture_default_str();
    verify->add_option("--samples", va.samples, "Sampled specification atoms")->capture_default_str();
    verify->add_option("--n", va.n, "Board size for the bound check")->capture_default_str();
    verify->add_option("--query", va.query, "Query for the bound check instead of the n-queens query");
    verify->add_option("--atom", va.atom, "Check coverage of this ground atom only");
    verify->add_option("--spec", va.spec, "Specification for model/covered")
        ->check(CLI::IsMember({"s_pq", "s_pqs", "s", "s0_pqs", "s0"}));
    verify->add_option("--instances", va.instances, "Lemma instances")->capture_default_str();
    verify->add_option("--seed", va.seed, "Lemma instance seed")->capture_default_str();
    verify->add_flag("--serial", va.serial, "Single-threaded kernels");
    add_common(verify, verify_c, false, true);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return usage;
    }

    try {
        if (solve->parsed()) return cmd_solve(sa, solve_c, out, err);
        if (query->parsed()) return cmd_query(qa, query_c, out);
        if (va.n < 1) throw UsageError("--n must be at least 1");
        return cmd_verify(va, verify_c, out);
    } catch (const UsageError& e) {
        err << e.what() << "\n";
        return usage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return usage;
    } catch (const std::invalid_argument& e) {
        err << e.what() << "\n";
        return usage;
    } catch (const EngineError& e) {
        err << "engine error: " << e.what() << "\n";
        return check_failed;
    }
}

}  // namespace nqv::cli
