#include "stlf/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <optional>
#include <vector>

namespace stlf {

namespace {

enum class Tok {
    End,
    Ident,
    Number,
    True,
    Inf,
    Next,     // X
    UntilOp,  // U
    ReleaseOp,  // R
    Box,      // []
    Diamond,  // <>
    Not,      // !
    AndOp,    // &&
    OrOp,     // ||
    Arrow,    // ->
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Underscore,
    Plus,
    Minus,
    Star,
    Ge,
    Gt,
    Le,
    Lt,
};

struct Token {
    Tok kind;
    std::string text;
    double number = 0.0;
    std::size_t line = 1;
    std::size_t col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_ws();
            Token t = next();
            out.push_back(t);
            if (t.kind == Tok::End) break;
        }
        return out;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++col_;
                ++pos_;
            } else {
                break;
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(line_, col_, msg); }

    Token make(Tok kind, std::size_t len) {
        Token t{kind, text_.substr(pos_, len), 0.0, line_, col_};
        pos_ += len;
        col_ += len;
        return t;
    }

    Token next() {
        if (pos_ >= text_.size()) return Token{Tok::End, "", 0.0, line_, col_};
        char c = text_[pos_];
        char c2 = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            // '_' immediately before '[' or '(' introduces an interval, both
            // standalone and at the end of an operator word (as in "U_[0,2]").
            if (c == '_' && (c2 == '[' || c2 == '(')) return make(Tok::Underscore, 1);
            std::size_t len = 0;
            while (pos_ + len < text_.size()) {
                char w = text_[pos_ + len];
                if (w == '_' && pos_ + len + 1 < text_.size() &&
                    (text_[pos_ + len + 1] == '[' || text_[pos_ + len + 1] == '('))
                    break;
                if (!(std::isalnum(static_cast<unsigned char>(w)) || w == '_')) break;
                ++len;
            }
            std::string word = text_.substr(pos_, len);
            if (word == "true") return make(Tok::True, len);
            if (word == "inf") return make(Tok::Inf, len);
            if (word == "X") return make(Tok::Next, len);
            if (word == "U") return make(Tok::UntilOp, len);
            if (word == "R") return make(Tok::ReleaseOp, len);
            return make(Tok::Ident, len);
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(c2)))) {
            std::size_t len = 0;
            auto digits = [&] {
                while (pos_ + len < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[pos_ + len])))
                    ++len;
            };
            digits();
            if (pos_ + len < text_.size() && text_[pos_ + len] == '.') {
                ++len;
                digits();
            }
            if (pos_ + len < text_.size() &&
                (text_[pos_ + len] == 'e' || text_[pos_ + len] == 'E')) {
                std::size_t save = len;
                ++len;
                if (pos_ + len < text_.size() &&
                    (text_[pos_ + len] == '+' || text_[pos_ + len] == '-'))
                    ++len;
                std::size_t before = len;
                digits();
                if (len == before) len = save;  // bare 'e' is not an exponent
            }
            Token t = make(Tok::Number, len);
            t.number = std::strtod(t.text.c_str(), nullptr);
            return t;
        }
        switch (c) {
            case '(': return make(Tok::LParen, 1);
            case ')': return make(Tok::RParen, 1);
            case ']': return make(Tok::RBracket, 1);
            case ',': return make(Tok::Comma, 1);
            case '+': return make(Tok::Plus, 1);
            case '*': return make(Tok::Star, 1);
            case '!': return make(Tok::Not, 1);
            case '[':
                if (c2 == ']') return make(Tok::Box, 2);
                return make(Tok::LBracket, 1);
            case '<':
                if (c2 == '>') return make(Tok::Diamond, 2);
                if (c2 == '=') return make(Tok::Le, 2);
                return make(Tok::Lt, 1);
            case '>':
                if (c2 == '=') return make(Tok::Ge, 2);
                return make(Tok::Gt, 1);
            case '-':
                if (c2 == '>') return make(Tok::Arrow, 2);
                return make(Tok::Minus, 1);
            case '&':
                if (c2 == '&') return make(Tok::AndOp, 2);
                fail("expected '&&'");
            case '|':
                if (c2 == '|') return make(Tok::OrOp, 2);
                fail("expected '||'");
            default:
                fail(std::string("unexpected character '") + c + "'");
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class Parser {
public:
    Parser(std::vector<Token> tokens, const SignalSpace& space)
        : toks_(std::move(tokens)), space_(space) {}

    Formula run() {
        Formula f = parse_implies();
        expect(Tok::End, "end of input");
        return f;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
        return toks_[i];
    }
    const Token& advance() { return toks_[pos_++]; }
    bool accept(Tok k) {
        if (peek().kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail_at(const Token& t, const std::string& msg) {
        throw ParseError(t.line, t.col, msg + (t.kind == Tok::End ? " at end of input"
                                                                  : ", got '" + t.text + "'"));
    }
    void expect(Tok k, const std::string& what) {
        if (!accept(k)) fail_at(peek(), "expected " + what);
    }

    // -> (right-associative, lowest precedence)
    Formula parse_implies() {
        Formula lhs = parse_or();
        if (accept(Tok::Arrow)) return Formula::implies(std::move(lhs), parse_implies());
        return lhs;
    }

    Formula parse_or() {
        Formula f = parse_and();
        while (accept(Tok::OrOp)) f = Formula::disj(std::move(f), parse_and());
        return f;
    }

    Formula parse_and() {
        Formula f = parse_until();
        while (accept(Tok::AndOp)) f = Formula::conj(std::move(f), parse_until());
        return f;
    }

    // U / R (right-associative)
    Formula parse_until() {
        Formula lhs = parse_unary();
        if (peek().kind == Tok::UntilOp || peek().kind == Tok::ReleaseOp) {
            bool is_until = advance().kind == Tok::UntilOp;
            Interval i = parse_optional_interval();
            Formula rhs = parse_until();
            return is_until ? Formula::until(i, std::move(lhs), std::move(rhs))
                            : Formula::release(i, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Formula parse_unary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Not:
                advance();
                return Formula::negate(parse_unary());
            case Tok::Next:
                advance();
                return Formula::next(parse_unary());
            case Tok::Box: {
                advance();
                Interval i = parse_optional_interval();
                return Formula::always(i, parse_unary());
            }
            case Tok::Diamond: {
                advance();
                Interval i = parse_optional_interval();
                return Formula::eventually(i, parse_unary());
            }
            case Tok::LParen: {
                advance();
                Formula f = parse_implies();
                expect(Tok::RParen, "')'");
                return f;
            }
            case Tok::True:
                advance();
                return Formula::truth();
            case Tok::Ident:
            case Tok::Number:
            case Tok::Minus:
                return parse_predicate();
            default:
                fail_at(t, "expected a formula");
        }
    }

    Interval parse_optional_interval() {
        if (!accept(Tok::Underscore)) return Interval::unbounded();
        bool lo_closed;
        if (accept(Tok::LBracket))
            lo_closed = true;
        else if (accept(Tok::LParen))
            lo_closed = false;
        else
            fail_at(peek(), "expected '[' or '(' after '_'");
        const Token& lo_tok = peek();
        if (lo_tok.kind != Tok::Number) fail_at(lo_tok, "expected interval lower bound");
        double lo = advance().number;
        expect(Tok::Comma, "','");
        double hi;
        if (accept(Tok::Inf)) {
            hi = std::numeric_limits<double>::infinity();
        } else {
            const Token& hi_tok = peek();
            if (hi_tok.kind != Tok::Number) fail_at(hi_tok, "expected interval upper bound or 'inf'");
            hi = advance().number;
        }
        bool hi_closed;
        if (accept(Tok::RBracket))
            hi_closed = true;
        else if (accept(Tok::RParen))
            hi_closed = false;
        else
            fail_at(peek(), "expected ']' or ')'");
        if (lo > hi) {
            fail_at(lo_tok, "malformed interval: lower bound " + lo_tok.text +
                                " exceeds upper bound");
        }
        try {
            return Interval(lo, hi, lo_closed, hi_closed);
        } catch (const Error& e) {
            fail_at(lo_tok, std::string("malformed interval: ") + e.what());
        }
    }

    void check_channel(const Token& t) {
        if (!space_.has_channel(t.text) && !space_.has_parameter(t.text))
            fail_at(t, "unknown channel name '" + t.text + "'");
    }

    // pred ::= linexpr rel num | IDENT
    Formula parse_predicate() {
        std::map<std::string, double> coeffs;
        double constant = 0.0;
        std::size_t terms = 0;
        bool bare_ident_candidate = false;
        std::string first_ident;
        Token first_tok = peek();

        double sign = 1.0;
        if (accept(Tok::Minus)) sign = -1.0;

        while (true) {
            const Token& t = peek();
            if (t.kind == Tok::Number) {
                double v = advance().number;
                if (accept(Tok::Star)) {
                    const Token& id = peek();
                    if (id.kind != Tok::Ident) fail_at(id, "expected channel name after '*'");
                    check_channel(id);
                    coeffs[id.text] += sign * v;
                    advance();
                } else {
                    constant += sign * v;
                }
            } else if (t.kind == Tok::Ident) {
                check_channel(t);
                coeffs[t.text] += sign;
                if (terms == 0 && sign > 0) {
                    bare_ident_candidate = true;
                    first_ident = t.text;
                }
                advance();
            } else {
                fail_at(t, "expected a term");
            }
            ++terms;
            if (accept(Tok::Plus))
                sign = 1.0;
            else if (accept(Tok::Minus))
                sign = -1.0;
            else
                break;
        }

        Relation rel;
        switch (peek().kind) {
            case Tok::Ge: rel = Relation::Ge; break;
            case Tok::Gt: rel = Relation::Gt; break;
            case Tok::Le: rel = Relation::Le; break;
            case Tok::Lt: rel = Relation::Lt; break;
            default: {
                if (terms == 1 && bare_ident_candidate) {
                    // boolean channel reference
                    if (space_.kind_of(first_ident) != ChannelKind::Boolean)
                        fail_at(first_tok, "channel '" + first_ident +
                                               "' is not boolean; a bare name must reference "
                                               "a boolean channel");
                    return Formula::boolean_channel(first_ident);
                }
                fail_at(peek(), "expected a relation");
            }
        }
        advance();

        double bsign = 1.0;
        if (accept(Tok::Minus)) bsign = -1.0;
        const Token& bt = peek();
        if (bt.kind != Tok::Number) fail_at(bt, "expected a numeric bound");
        double bound = bsign * advance().number;

        if (coeffs.empty())
            fail_at(first_tok, "predicate must reference at least one channel");

        return Formula::linear(std::move(coeffs), rel, bound - constant);
    }

    std::vector<Token> toks_;
    const SignalSpace& space_;
    std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(const std::string& text, const SignalSpace& space) {
    return Parser(Lexer(text).run(), space).run();
}

}  // namespace stlf
