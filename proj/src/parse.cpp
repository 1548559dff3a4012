#include "nqv/parse.hpp"

#include <cctype>
#include <charconv>
#include <unordered_map>
#include <vector>

namespace nqv {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { name, var, integer, lparen, rparen, lbrack, rbrack, comma, bar, dot, neck, query, end };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

const char* describe(Tok t) {
    switch (t) {
    case Tok::name: return "name";
    case Tok::var: return "variable";
    case Tok::integer: return "integer";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::lbrack: return "'['";
    case Tok::rbrack: return "']'";
    case Tok::comma: return "','";
    case Tok::bar: return "'|'";
    case Tok::dot: return "'.'";
    case Tok::neck: return "':-'";
    case Tok::query: return "'?-'";
    case Tok::end: return "end of input";
    }
    return "token";
}

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '%') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        std::size_t l = line, cl = col;
        auto single = [&](Tok k) {
            out.push_back({k, std::string(1, c), l, cl});
            advance(1);
        };
        if (std::islower(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            out.push_back({Tok::name, std::string(src.substr(i, j - i)), l, cl});
            advance(j - i);
        } else if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            out.push_back({Tok::var, std::string(src.substr(i, j - i)), l, cl});
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            out.push_back({Tok::integer, std::string(src.substr(i, j - i)), l, cl});
            advance(j - i);
        } else if (c == ':' && i + 1 < src.size() && src[i + 1] == '-') {
            out.push_back({Tok::neck, ":-", l, cl});
            advance(2);
        } else if (c == '?' && i + 1 < src.size() && src[i + 1] == '-') {
            out.push_back({Tok::query, "?-", l, cl});
            advance(2);
        } else if (c == '(') {
            single(Tok::lparen);
        } else if (c == ')') {
            single(Tok::rparen);
        } else if (c == '[') {
            single(Tok::lbrack);
        } else if (c == ']') {
            single(Tok::rbrack);
        } else if (c == ',') {
            single(Tok::comma);
        } else if (c == '|') {
            single(Tok::bar);
        } else if (c == '.') {
            single(Tok::dot);
        } else {
            throw ParseError(l, cl, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Tok::end, "", line, col});
    return out;
}

class Reader {
public:
    Reader(std::string_view src, Signature& sig, PredicateTable& preds)
        : toks_(tokenize(src)), sig_(sig), preds_(preds) {}

    bool at(Tok k) const { return toks_[pos_].kind == k; }
    bool at_end() const { return at(Tok::end); }

    const Token& expect(Tok k) {
        const Token& t = toks_[pos_];
        if (t.kind != k) fail(t, std::string("expected ") + describe(k) + ", found " + describe(t.kind));
        ++pos_;
        return t;
    }

    bool accept(Tok k) {
        if (!at(k)) return false;
        ++pos_;
        return true;
    }

    [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw ParseError(t.line, t.column, msg); }

    void new_scope() { scope_.clear(); }

    Clause clause() {
        Clause c{atom(), {}};
        if (accept(Tok::neck)) c.body = conjunction();
        expect(Tok::dot);
        return c;
    }

    std::vector<Atom> conjunction() {
        std::vector<Atom> atoms{atom()};
        while (accept(Tok::comma)) atoms.push_back(atom());
        return atoms;
    }

    Atom atom() {
        const Token& t = toks_[pos_];
        if (t.kind != Tok::name) fail(t, std::string("expected an atom, found ") + describe(t.kind));
        ++pos_;
        Symbol pred(t.text);
        std::vector<Term> args;
        if (accept(Tok::lparen)) args = arguments();
        auto [it, inserted] = preds_.emplace(pred, args.size());
        if (!inserted && it->second != args.size())
            fail(t, "predicate " + t.text + "/" + std::to_string(args.size()) + " clashes with " + t.text + "/" +
                        std::to_string(it->second));
        return Atom(pred, std::move(args));
    }

    Term term() {
        const Token& t = toks_[pos_];
        switch (t.kind) {
        case Tok::var: {
            ++pos_;
            if (t.text == "_") return Term::fresh();
            auto it = scope_.find(t.text);
            if (it == scope_.end()) it = scope_.emplace(t.text, Term::fresh(t.text)).first;
            return it->second;
        }
        case Tok::integer: {
            ++pos_;
            std::size_t n = 0;
            auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), n);
            if (ec != std::errc()) fail(t, "integer out of range: " + t.text);
            declare(t, sym::zero(), 0);
            if (n > 0) declare(t, sym::succ(), 1);
            return numeral(n);
        }
        case Tok::name: {
            ++pos_;
            Symbol f(t.text);
            std::vector<Term> args;
            if (accept(Tok::lparen)) args = arguments();
            declare(t, f, args.size());
            return Term::make(f, std::move(args));
        }
        case Tok::lbrack: {
            ++pos_;
            declare(t, sym::nil(), 0);
            if (accept(Tok::rbrack)) return nil();
            declare(t, sym::cons(), 2);
            std::vector<Term> elems{term()};
            while (accept(Tok::comma)) elems.push_back(term());
            Term tail = nil();
            if (accept(Tok::bar)) tail = term();
            expect(Tok::rbrack);
            return make_list(std::move(elems), std::move(tail));
        }
        default: fail(t, std::string("expected a term, found ") + describe(t.kind));
        }
    }

private:
    std::vector<Term> arguments() {
        std::vector<Term> args{term()};
        while (accept(Tok::comma)) args.push_back(term());
        expect(Tok::rparen);
        return args;
    }

    void declare(const Token& t, Symbol f, std::size_t n) {
        try {
            sig_.declare(f, n);
        } catch (const std::invalid_argument& e) {
            fail(t, e.what());
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    Signature& sig_;
    PredicateTable& preds_;
    std::unordered_map<std::string, Term> scope_;
};

}  // namespace

Program Parser::program(std::string_view text) {
    Reader r(text, sig_, predicates_);
    Program p;
    while (!r.at_end()) {
        r.new_scope();
        p.clauses.push_back(r.clause());
    }
    return p;
}

Query Parser::query(std::string_view text) {
    Reader r(text, sig_, predicates_);
    r.accept(Tok::query);
    Query q{r.conjunction()};
    r.accept(Tok::dot);
    r.expect(Tok::end);
    return q;
}

Term Parser::term(std::string_view text) {
    Reader r(text, sig_, predicates_);
    Term t = r.term();
    r.accept(Tok::dot);
    r.expect(Tok::end);
    return t;
}

Atom Parser::atom(std::string_view text) {
    Reader r(text, sig_, predicates_);
    Atom a = r.atom();
    r.accept(Tok::dot);
    r.expect(Tok::end);
    return a;
}

Program parse_program(std::string_view text, Signature& sig) { return Parser(sig).program(text); }

Program parse_program(std::string_view text) {
    Signature sig = Signature::standard();
    return parse_program(text, sig);
}

Query parse_query(std::string_view text, Signature& sig) { return Parser(sig).query(text); }

Query parse_query(std::string_view text) {
    Signature sig = Signature::standard();
    return parse_query(text, sig);
}

Term parse_term(std::string_view text) {
    Signature sig = Signature::standard();
    return Parser(sig).term(text);
}

Atom parse_atom(std::string_view text) {
    Signature sig = Signature::standard();
    return Parser(sig).atom(text);
}

namespace {
void declare_all(const Term& t, Signature& sig) {
    if (t.is_var()) return;
    sig.declare(t.functor(), t.arity());
    for (const Term& a : t.args()) declare_all(a, sig);
}
}  // namespace

Signature signature_of(const Program& p, Signature base) {
    for (const Clause& c : p.clauses) {
        for (const Term& a : c.head.args()) declare_all(a, base);
        for (const Atom& b : c.body)
            for (const Term& a : b.args()) declare_all(a, base);
    }
    return base;
}

}  // namespace nqv
