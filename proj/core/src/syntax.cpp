#include "ogeo/syntax.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace ogeo {

namespace {

enum class Tok { Ident, LParen, RParen, LBrack, RBrack, Comma, Not, And, Or, Arrow, All, Some, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t offset;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

struct Alias {
    std::string_view bytes;
    Tok kind;
};

// UTF-8 spellings of the connectives used in displayed formulas.
constexpr Alias kAliases[] = {
    {"\xE2\x88\x80", Tok::All},    // forall
    {"\xE2\x88\x83", Tok::Some},   // exists
    {"\xE2\x88\xBC", Tok::Not},    // tilde operator
    {"\xC2\xAC", Tok::Not},        // not sign
    {"\xE2\x88\xA7", Tok::And},    // logical and
    {"\xE2\x88\xA8", Tok::Or},     // logical or
    {"\xE2\x86\x92", Tok::Arrow},  // rightwards arrow
};

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (ident_start(c)) {
            while (i < s.size() && ident_char(s[i])) ++i;
            out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
            continue;
        }
        switch (c) {
            case '(': out.push_back({Tok::LParen, "(", i++}); continue;
            case ')': out.push_back({Tok::RParen, ")", i++}); continue;
            case '[': out.push_back({Tok::LBrack, "[", i++}); continue;
            case ']': out.push_back({Tok::RBrack, "]", i++}); continue;
            case ',': out.push_back({Tok::Comma, ",", i++}); continue;
            case '~': out.push_back({Tok::Not, "~", i++}); continue;
            case '&': out.push_back({Tok::And, "&", i++}); continue;
            case '|': out.push_back({Tok::Or, "|", i++}); continue;
            case '-':
                if (i + 1 < s.size() && s[i + 1] == '>') {
                    out.push_back({Tok::Arrow, "->", i});
                    i += 2;
                    continue;
                }
                break;
            default:
                break;
        }
        bool matched = false;
        for (const auto& a : kAliases) {
            if (s.substr(i, a.bytes.size()) == a.bytes) {
                out.push_back({a.kind, std::string(a.bytes), i});
                i += a.bytes.size();
                matched = true;
                break;
            }
        }
        if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

class Parser {
public:
    Parser(std::string_view src, const Signature& sig) : toks_(lex(src)), sig_(sig) {}

    Formula formula_eof() {
        Formula f = implication();
        expect_end();
        return f;
    }

    Term term_eof() {
        Term t = term();
        expect_end();
        return t;
    }

private:
    const Token& peek(std::size_t k = 0) const {
        return toks_[std::min(pos_ + k, toks_.size() - 1)];
    }
    const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }
    const Token& expect(Tok k, const char* what) {
        if (peek().kind != k) fail(std::string("expected ") + what);
        return next();
    }
    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        std::string near = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw ParseError(msg + " near " + near, t.offset);
    }
    void expect_end() {
        if (peek().kind != Tok::End) fail("unexpected trailing input");
    }

    bool is_fn(const Token& t) const { return t.kind == Tok::Ident && sig_.has_function(t.text); }

    Formula implication() {
        Formula lhs = disjunction();
        if (accept(Tok::Arrow)) return Formula::implies(lhs, implication());
        return lhs;
    }

    Formula disjunction() {
        Formula f = conjunction();
        while (accept(Tok::Or)) f = Formula::disj(f, conjunction());
        return f;
    }

    Formula conjunction() {
        Formula f = unary();
        while (accept(Tok::And)) f = Formula::conj(f, unary());
        return f;
    }

    // Recognizes `(Ax)`, `(A x)`, `(∀x)` and the existential forms.
    std::optional<std::pair<Formula::Kind, std::string>> quantifier_prefix() {
        if (peek().kind != Tok::LParen) return std::nullopt;
        const Token& a = peek(1);
        if (a.kind == Tok::All || a.kind == Tok::Some) {
            if (peek(2).kind != Tok::Ident || peek(3).kind != Tok::RParen) return std::nullopt;
            auto k = a.kind == Tok::All ? Formula::Kind::Forall : Formula::Kind::Exists;
            std::string v = peek(2).text;
            pos_ += 4;
            return std::make_pair(k, v);
        }
        if (a.kind != Tok::Ident || (a.text[0] != 'A' && a.text[0] != 'E')) return std::nullopt;
        auto k = a.text[0] == 'A' ? Formula::Kind::Forall : Formula::Kind::Exists;
        if (a.text.size() > 1 && peek(2).kind == Tok::RParen) {
            if (sig_.predicate_arity(a.text) == 0) return std::nullopt;
            std::string v = a.text.substr(1);
            pos_ += 3;
            return std::make_pair(k, v);
        }
        if (a.text.size() == 1 && peek(2).kind == Tok::Ident && peek(3).kind == Tok::RParen &&
            sig_.predicate_arity(a.text) < 0) {
            std::string v = peek(2).text;
            pos_ += 4;
            return std::make_pair(k, v);
        }
        return std::nullopt;
    }

    Formula unary() {
        if (accept(Tok::Not)) return Formula::negation(unary());
        if (auto q = quantifier_prefix()) {
            if (sig_.has_function(q->second)) fail("function symbol used as bound variable");
            return Formula::quant(q->first, q->second, unary());
        }
        if (peek().kind == Tok::LBrack) {
            if (is_fn(peek(1))) fail("term where a formula was expected");
            next();
            Formula f = implication();
            expect(Tok::RBrack, "']'");
            return f;
        }
        if (accept(Tok::LParen)) {
            Formula f = implication();
            expect(Tok::RParen, "')'");
            return f;
        }
        return atom();
    }

    Formula atom() {
        if (peek().kind != Tok::Ident) fail("expected a formula");
        const Token& name = next();
        int arity = sig_.predicate_arity(name.text);
        if (arity < 0) {
            --pos_;
            fail("unknown predicate '" + name.text + "'");
        }
        std::vector<Term> args;
        if (arity > 0 && peek().kind == Tok::LParen && peek().offset == name.offset + name.text.size()) {
            next();
            args = call_args();
        } else {
            for (int i = 0; i < arity; ++i) args.push_back(term());
        }
        if (static_cast<int>(args.size()) != arity) {
            throw ParseError("predicate '" + name.text + "' expects " + std::to_string(arity) +
                                 " arguments, got " + std::to_string(args.size()),
                             name.offset);
        }
        return Formula::atom(upper(name.text), std::move(args));
    }

    // After the opening '(' of a call: `t1, t2, ... )`.
    std::vector<Term> call_args() {
        std::vector<Term> args;
        if (accept(Tok::RParen)) return args;
        args.push_back(term());
        while (accept(Tok::Comma)) args.push_back(term());
        expect(Tok::RParen, "')' or ','");
        return args;
    }

    Term application(const Token& fn, std::vector<Term> args) {
        int arity = sig_.function_arity(fn.text);
        if (static_cast<int>(args.size()) != arity) {
            throw ParseError("function '" + fn.text + "' expects " + std::to_string(arity) +
                                 " arguments, got " + std::to_string(args.size()),
                             fn.offset);
        }
        return Term::app(lower(fn.text), std::move(args));
    }

    Term term() {
        const Token& t = peek();
        if (t.kind == Tok::LBrack) {
            next();
            if (!is_fn(peek())) {
                if (peek().kind == Tok::Ident)
                    fail("unknown function symbol '" + peek().text + "'");
                fail("expected a function symbol");
            }
            const Token& fn = next();
            std::vector<Term> args;
            int arity = sig_.function_arity(fn.text);
            for (int i = 0; i < arity; ++i) args.push_back(term());
            if (peek().kind != Tok::RBrack) fail("function '" + fn.text + "' arity mismatch: expected ']'");
            next();
            return application(fn, std::move(args));
        }
        if (t.kind != Tok::Ident) fail("expected a term");
        const Token& id = next();
        if (sig_.has_function(id.text)) {
            if (peek().kind != Tok::LParen) {
                --pos_;
                fail("function symbol '" + id.text + "' used without arguments");
            }
            next();
            return application(id, call_args());
        }
        if (peek().kind == Tok::LParen && peek().offset == id.offset + id.text.size()) {
            fail("unknown function symbol '" + id.text + "'");
        }
        return Term::var(id.text);
    }

    std::vector<Token> toks_;
    const Signature& sig_;
    std::size_t pos_ = 0;
};

int prec(const Formula& f) {
    switch (f.kind()) {
        case Formula::Kind::Implies: return 1;
        case Formula::Kind::Or: return 2;
        case Formula::Kind::And: return 3;
        default: return 4;
    }
}

void print_rec(const Formula& f, int need, std::string& out) {
    bool wrap = prec(f) < need;
    if (wrap) out += '[';
    switch (f.kind()) {
        case Formula::Kind::Atom:
            out += f.pred();
            for (const auto& a : f.args()) {
                out += ' ';
                out += print_term(a);
            }
            break;
        case Formula::Kind::Not:
            out += '~';
            print_rec(f.body(), 4, out);
            break;
        case Formula::Kind::Forall:
        case Formula::Kind::Exists:
            out += f.is(Formula::Kind::Forall) ? "(A" : "(E";
            out += f.var();
            out += ')';
            print_rec(f.body(), 4, out);
            break;
        case Formula::Kind::Implies:
            print_rec(f.lhs(), 2, out);
            out += " -> ";
            print_rec(f.rhs(), 1, out);
            break;
        case Formula::Kind::Or:
            print_rec(f.lhs(), 2, out);
            out += " | ";
            print_rec(f.rhs(), 3, out);
            break;
        case Formula::Kind::And:
            print_rec(f.lhs(), 3, out);
            out += " & ";
            print_rec(f.rhs(), 4, out);
            break;
    }
    if (wrap) out += ']';
}

}  // namespace

Term parse_term(std::string_view src, const Signature& sig) { return Parser(src, sig).term_eof(); }

Formula parse_formula(std::string_view src, const Signature& sig) {
    return Parser(src, sig).formula_eof();
}

std::string print_term(const Term& t) {
    if (t.is_var()) return t.name();
    std::string s = "[" + t.name();
    for (const auto& a : t.args()) s += " " + print_term(a);
    return s + "]";
}

std::string print_term_call(const Term& t) {
    if (t.is_var()) return t.name();
    std::string s = t.name() + "(";
    for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) s += ",";
        s += print_term_call(t.args()[i]);
    }
    return s + ")";
}

std::string print_formula(const Formula& f) {
    std::string out;
    print_rec(f, 1, out);
    return out;
}

bool is_identifier(std::string_view s) {
    if (s.empty() || !ident_start(s[0])) return false;
    for (char c : s)
        if (!ident_char(c)) return false;
    return true;
}

}  // namespace ogeo
