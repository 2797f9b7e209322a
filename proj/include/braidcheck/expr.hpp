#pragma once

// Parser for scalar expressions in braiding files and certificates:
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | base ('^' signed-integer)?
//   base   := integer | 'q' | 'h' | '(' expr ')'
//
// Whitespace is insignificant. Decimal literals are rejected.

#include "braidcheck/scalar.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace braidcheck {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string_view s) : s_(s) {}

    Scalar parse() {
        Scalar v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Scalar expr() {
        Scalar v = term();
        for (;;) {
            if (accept('+'))
                v += term();
            else if (accept('-'))
                v -= term();
            else
                return v;
        }
    }
    Scalar term() {
        Scalar v = factor();
        for (;;) {
            if (accept('*')) {
                v *= factor();
            } else if (accept('/')) {
                std::size_t at = pos_;
                Scalar d = factor();
                if (d.is_zero()) throw ParseError("division by zero", at);
                v /= d;
            } else {
                return v;
            }
        }
    }
    Scalar factor() {
        if (accept('-')) return -factor();
        Scalar b = base();
        if (accept('^')) {
            skip();
            bool neg = false;
            if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
                neg = s_[pos_] == '-';
                ++pos_;
            }
            std::size_t at = pos_;
            long e = integer_literal();
            if (e > 4096) throw ParseError("exponent too large", at);
            if (neg && b.is_zero()) throw ParseError("negative power of zero", at);
            b = pow(b, neg ? -static_cast<int>(e) : static_cast<int>(e));
        }
        return b;
    }
    Scalar base() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        char c = s_[pos_];
        if (c == 'q' || c == 'h') {
            ++pos_;
            return Scalar::param(c == 'q' ? Param::q : Param::h);
        }
        if (c == '(') {
            ++pos_;
            Scalar v = expr();
            if (!accept(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
                fail("decimal literals are not supported");
            return Scalar(Rational(std::string(s_.substr(start, pos_ - start))));
        }
        if (c == '.') fail("decimal literals are not supported");
        fail("unexpected character '" + std::string(1, c) + "'");
    }
    long integer_literal() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer exponent");
        if (pos_ < s_.size() && s_[pos_] == '.') fail("decimal literals are not supported");
        if (pos_ - start > 6) throw ParseError("exponent too large", start);
        return std::stol(std::string(s_.substr(start, pos_ - start)));
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Scalar parse_scalar(std::string_view text) { return detail::ExprParser(text).parse(); }

}  // namespace braidcheck
