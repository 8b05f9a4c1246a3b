#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "vbcalc/error.hpp"
#include "vbcalc/polynomial.hpp"

namespace vbcalc {

/// Recursive-descent parser for the expression language:
///
///   expr     := term (('+'|'-') term)*
///   term     := factor ('*' factor)*
///   factor   := '-' factor | atom ('^' nat)?
///   atom     := rational | ident | '(' expr ')'
///   rational := int ('/' nat)?
///
/// Whitespace is insignificant; '#' starts a comment to end of line.
/// Identifiers must name chart coordinates.
class ExprParser {
public:
    ExprParser(const std::string& text, const Chart& chart)
        : text_(text), chart_(chart) {}

    Polynomial parse() {
        skip_ws();
        Polynomial p = parse_expr();
        skip_ws();
        if (pos_ < text_.size())
            fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return p;
    }

private:
    Polynomial parse_expr() {
        Polynomial p = parse_term();
        for (;;) {
            skip_ws();
            if (peek() == '+') {
                advance();
                p = p + parse_term();
            } else if (peek() == '-') {
                advance();
                p = p - parse_term();
            } else {
                return p;
            }
        }
    }

    Polynomial parse_term() {
        Polynomial p = parse_factor();
        for (;;) {
            skip_ws();
            if (peek() == '*') {
                advance();
                p = p * parse_factor();
            } else {
                return p;
            }
        }
    }

    Polynomial parse_factor() {
        skip_ws();
        if (peek() == '-') {
            advance();
            return -parse_factor();
        }
        Polynomial base = parse_atom();
        skip_ws();
        if (peek() == '^') {
            advance();
            skip_ws();
            unsigned e = parse_nat();
            return base.pow(e);
        }
        return base;
    }

    Polynomial parse_atom() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            advance();
            Polynomial p = parse_expr();
            skip_ws();
            if (peek() != ')') fail("expected ')'");
            advance();
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_rational();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id = parse_ident();
            int idx = chart_.find(id);
            if (idx < 0) fail("unknown identifier '" + id + "'");
            return Polynomial::variable(chart_, static_cast<std::size_t>(idx));
        }
        fail(c == '\0' ? std::string("unexpected end of input")
                       : "unexpected character '" + std::string(1, c) + "'");
        return Polynomial(chart_);  // unreachable
    }

    Polynomial parse_rational() {
        Integer num = parse_int_digits();
        skip_ws();
        if (peek() == '/') {
            advance();
            skip_ws();
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                fail("expected denominator");
            Integer den = parse_int_digits();
            if (den == 0) fail("zero denominator");
            return Polynomial::constant(chart_, Rational(num, den));
        }
        return Polynomial::constant(chart_, Rational(num));
    }

    Integer parse_int_digits() {
        Integer v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (peek() - '0');
            advance();
        }
        return v;
    }

    unsigned parse_nat() {
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            fail("expected exponent");
        unsigned v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + static_cast<unsigned>(peek() - '0');
            advance();
        }
        return v;
    }

    std::string parse_ident() {
        std::string id;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
            id += peek();
            advance();
        }
        return id;
    }

    void skip_ws() {
        for (;;) {
            while (pos_ < text_.size() &&
                   std::isspace(static_cast<unsigned char>(text_[pos_])))
                advance();
            if (pos_ < text_.size() && text_[pos_] == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else {
                return;
            }
        }
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void advance() {
        if (pos_ < text_.size()) {
            if (text_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, line_, col_);
    }

    const std::string& text_;
    Chart chart_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

/// Parses an expression over the chart into a canonical-form polynomial.
inline Polynomial parse_expression(const std::string& text, const Chart& chart) {
    return ExprParser(text, chart).parse();
}

}  // namespace vbcalc
