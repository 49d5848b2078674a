#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "frechet/errors.hpp"
#include "frechet/expr.hpp"

namespace frechet {

/// Recursive-descent parser for the CLI expression syntax: infix arithmetic
/// with variables x1..xd ("x" is accepted as an alias for x1), integer and
/// decimal literals (kept exact as rationals), '^' with an integer exponent,
/// and the functions exp(), log(), recip1m().
class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    Expr parse() {
        Expr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw UsageError("expression parse error at position " + std::to_string(pos_) + ": " + what);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    int peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : -1;
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_sum() {
        Expr e = parse_term();
        for (;;) {
            if (consume('+'))
                e = e + parse_term();
            else if (consume('-'))
                e = e - parse_term();
            else
                return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_unary();
        for (;;) {
            if (consume('*'))
                e = e * parse_unary();
            else if (consume('/'))
                e = e / parse_unary();
            else
                return e;
        }
    }

    Expr parse_unary() {
        if (consume('-'))
            return -parse_unary();
        if (consume('+'))
            return parse_unary();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (consume('^'))
            return pow(base, parse_int_literal());
        return base;
    }

    int parse_int_literal() {
        skip_ws();
        bool neg = false;
        if (consume('-'))
            neg = true;
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail("expected integer exponent after '^'");
        long v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + (text_[pos_++] - '0');
            if (v > 64)
                fail("exponent too large");
        }
        return static_cast<int>(neg ? -v : v);
    }

    Expr parse_atom() {
        int c = peek();
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            if (!consume(')'))
                fail("expected ')'");
            return e;
        }
        if (c == -1)
            fail("unexpected end of input");
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return parse_ident();
        fail(std::string("unexpected character '") + static_cast<char>(c) + "'");
    }

    Expr parse_number() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        // optional exponent part, e.g. 2.5e-3
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
                ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark; // not an exponent after all
            }
        }
        try {
            return Expr::constant(parse_rational(text_.substr(start, pos_ - start)));
        } catch (const UsageError&) {
            pos_ = start;
            fail("bad numeric literal");
        }
    }

    Expr parse_ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        if (name == "exp" || name == "log" || name == "recip1m") {
            if (!consume('('))
                fail("expected '(' after function name");
            Expr arg = parse_sum();
            if (!consume(')'))
                fail("expected ')'");
            if (name == "exp")
                return exp(arg);
            if (name == "log")
                return log(arg);
            return recip_one_minus(arg);
        }
        if (name == "x")
            return Expr::variable(0);
        if (name.size() > 1 && name[0] == 'x') {
            int idx = 0;
            for (std::size_t i = 1; i < name.size(); ++i) {
                if (!std::isdigit(static_cast<unsigned char>(name[i]))) {
                    idx = -1;
                    break;
                }
                idx = idx * 10 + (name[i] - '0');
            }
            if (idx >= 1)
                return Expr::variable(idx - 1);
        }
        pos_ = start;
        fail("unknown identifier '" + name + "'");
    }
};

inline Expr parse_expr(std::string_view text) { return ExprParser(text).parse(); }

} // namespace frechet
