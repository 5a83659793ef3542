#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sturmspec/error.hpp"

namespace sturmspec::cli {

/**
 * @brief Expression tree over x.
 *
 * Grammar (loosest first):
 *   sum     := product (('+' | '-') product)*
 *   product := unary (('*' | '/') unary)*
 *   unary   := '-' unary | power
 *   power   := primary ('^' unary)?        right associative
 *   primary := number | 'x' | name '(' sum ')' | '(' sum ')'
 */
struct Expr {
    enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
    Kind kind = Kind::Number;
    double value = 0.0;
    std::string fn;  // for Call
    std::shared_ptr<const Expr> a, b;

    double eval(double x) const {
        switch (kind) {
            case Kind::Number: return value;
            case Kind::Var: return x;
            case Kind::Neg: return -a->eval(x);
            case Kind::Add: return a->eval(x) + b->eval(x);
            case Kind::Sub: return a->eval(x) - b->eval(x);
            case Kind::Mul: return a->eval(x) * b->eval(x);
            case Kind::Div: return a->eval(x) / b->eval(x);
            case Kind::Pow: return std::pow(a->eval(x), b->eval(x));
            case Kind::Call: return call(fn, a->eval(x));
        }
        return 0.0;
    }

    /** @brief Fully parenthesized text that parses back to the same tree. */
    std::string str() const {
        switch (kind) {
            case Kind::Number: {
                char buf[64];
                auto r = std::to_chars(buf, buf + sizeof buf, value);
                return std::string(buf, r.ptr);
            }
            case Kind::Var: return "x";
            case Kind::Neg: return "(-" + a->str() + ")";
            case Kind::Add: return "(" + a->str() + "+" + b->str() + ")";
            case Kind::Sub: return "(" + a->str() + "-" + b->str() + ")";
            case Kind::Mul: return "(" + a->str() + "*" + b->str() + ")";
            case Kind::Div: return "(" + a->str() + "/" + b->str() + ")";
            case Kind::Pow: return "(" + a->str() + "^" + b->str() + ")";
            case Kind::Call: return fn + "(" + a->str() + ")";
        }
        return {};
    }

    static bool known_function(std::string_view f) {
        return f == "exp" || f == "log" || f == "sin" || f == "cos" || f == "sqrt" || f == "tanh";
    }
    static double call(const std::string& f, double v) {
        if (f == "exp") return std::exp(v);
        if (f == "log") return std::log(v);
        if (f == "sin") return std::sin(v);
        if (f == "cos") return std::cos(v);
        if (f == "sqrt") return std::sqrt(v);
        return std::tanh(v);
    }
};

using ExprPtr = std::shared_ptr<const Expr>;

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view src) : s_(src) {}

    ExprPtr parse() {
        auto e = sum();
        skip();
        if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    static ExprPtr node(Expr::Kind k, ExprPtr a = nullptr, ExprPtr b = nullptr) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->a = std::move(a);
        e->b = std::move(b);
        return e;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, "column " + std::to_string(pos_ + 1));
    }
    void skip() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr sum() {
        auto e = product();
        for (;;) {
            if (eat('+'))
                e = node(Expr::Kind::Add, e, product());
            else if (eat('-'))
                e = node(Expr::Kind::Sub, e, product());
            else
                return e;
        }
    }
    ExprPtr product() {
        auto e = unary();
        for (;;) {
            if (eat('*'))
                e = node(Expr::Kind::Mul, e, unary());
            else if (eat('/'))
                e = node(Expr::Kind::Div, e, unary());
            else
                return e;
        }
    }
    ExprPtr unary() {
        if (eat('-')) return node(Expr::Kind::Neg, unary());
        return power();
    }
    ExprPtr power() {
        auto base = primary();
        if (eat('^')) return node(Expr::Kind::Pow, base, unary());
        return base;
    }
    ExprPtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if ((c >= '0' && c <= '9') || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string name(s_.substr(start, pos_ - start));
            if (name == "x") return node(Expr::Kind::Var);
            if (!Expr::known_function(name)) {
                pos_ = start;
                fail("unknown identifier '" + name + "'");
            }
            if (!eat('(')) fail("expected '(' after " + name);
            auto arg = sum();
            if (!eat(')')) fail("expected ')'");
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Call;
            e->fn = name;
            e->a = arg;
            return e;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
    ExprPtr number() {
        // digits [. digits] [e [+-] digits]
        std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') ++pos_, ++n;
            return n;
        };
        std::size_t n = digits();
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            n += digits();
        }
        if (n == 0) fail("malformed number");
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (digits() == 0) pos_ = save;  // "2e" leaves the e for the caller to reject
        }
        double v = 0.0;
        auto r = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (r.ec != std::errc()) fail("malformed number");
        auto e = std::make_shared<Expr>();
        e->value = v;
        return e;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/** @brief Parse an arithmetic expression in x; throws ParseError with the column. */
inline ExprPtr parse_expression(std::string_view src) { return detail::Parser(src).parse(); }

}  // namespace sturmspec::cli
