#include "distgeo/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace distgeo {

namespace {

const std::map<std::string, UnaryOp>& function_table() {
    static const std::map<std::string, UnaryOp> table = {
        {"sin", UnaryOp::Sin},   {"cos", UnaryOp::Cos},   {"tan", UnaryOp::Tan},
        {"exp", UnaryOp::Exp},   {"log", UnaryOp::Log},   {"sqrt", UnaryOp::Sqrt},
        {"sinh", UnaryOp::Sinh}, {"cosh", UnaryOp::Cosh}, {"tanh", UnaryOp::Tanh},
    };
    return table;
}

struct Token {
    enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Kind kind = Kind::End;
    int pos = 0;
    double number = 0.0;
    std::string text = {};
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : s_(text) {}

    Token next() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        const int pos = static_cast<int>(i_);
        if (i_ >= s_.size()) return {Token::Kind::End, pos};
        const char c = s_[i_];
        switch (c) {
            case '+': ++i_; return {Token::Kind::Plus, pos};
            case '-': ++i_; return {Token::Kind::Minus, pos};
            case '*': ++i_; return {Token::Kind::Star, pos};
            case '/': ++i_; return {Token::Kind::Slash, pos};
            case '^': ++i_; return {Token::Kind::Caret, pos};
            case '(': ++i_; return {Token::Kind::LParen, pos};
            case ')': ++i_; return {Token::Kind::RParen, pos};
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(pos);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
                ++j;
            Token t{Token::Kind::Ident, pos};
            t.text = s_.substr(i_, j - i_);
            i_ = j;
            return t;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }

private:
    Token number(int pos) {
        std::size_t j = i_;
        bool digits = false;
        while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) { ++j; digits = true; }
        if (j < s_.size() && s_[j] == '.') {
            ++j;
            while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) { ++j; digits = true; }
        }
        if (!digits) throw ParseError("malformed number literal", pos);
        if (j < s_.size() && (s_[j] == 'e' || s_[j] == 'E')) {
            std::size_t k = j + 1;
            if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
            if (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) {
                ++k;
                while (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) ++k;
                j = k;
            }
        }
        Token t{Token::Kind::Number, pos};
        t.number = std::stod(s_.substr(i_, j - i_));
        i_ = j;
        return t;
    }

    const std::string& s_;
    std::size_t i_ = 0;
};

}  // namespace

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& chart)
        : lexer_(text), chart_(chart) {
        advance();
    }

    Expr run() {
        Expr e = expr();
        if (tok_.kind != Token::Kind::End)
            throw ParseError("syntax error: expected an operator or end of input", tok_.pos);
        return e;
    }

private:
    void advance() { tok_ = lexer_.next(); }

    bool accept(Token::Kind k) {
        if (tok_.kind != k) return false;
        advance();
        return true;
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            const int pos = tok_.pos;
            if (accept(Token::Kind::Plus)) lhs = make_binary(BinaryOp::Add, std::move(lhs), term(), pos);
            else if (accept(Token::Kind::Minus)) lhs = make_binary(BinaryOp::Sub, std::move(lhs), term(), pos);
            else return lhs;
        }
    }

    Expr term() {
        Expr lhs = unary();
        for (;;) {
            const int pos = tok_.pos;
            if (accept(Token::Kind::Star)) lhs = make_binary(BinaryOp::Mul, std::move(lhs), unary(), pos);
            else if (accept(Token::Kind::Slash)) lhs = make_binary(BinaryOp::Div, std::move(lhs), unary(), pos);
            else return lhs;
        }
    }

    Expr unary() {
        const int pos = tok_.pos;
        if (accept(Token::Kind::Minus)) {
            Expr child = unary();
            // fold a literal so "-2" is one constant; negative integer
            // exponents then stay on the exact integer-power path
            if (child.kind() == Expr::Kind::Constant) {
                Expr e = Expr::constant(-child.constant_value());
                set_pos(e, pos);
                return e;
            }
            Expr e = Expr::unary(UnaryOp::Neg, std::move(child));
            set_pos(e, pos);
            return e;
        }
        return factor();
    }

    Expr factor() {
        Expr base = primary();
        const int pos = tok_.pos;
        if (accept(Token::Kind::Caret))
            return make_binary(BinaryOp::Pow, std::move(base), unary(), pos);
        return base;
    }

    Expr primary() {
        const Token t = tok_;
        switch (t.kind) {
            case Token::Kind::Number: {
                advance();
                Expr e = Expr::constant(t.number);
                set_pos(e, t.pos);
                return e;
            }
            case Token::Kind::LParen: {
                advance();
                Expr e = expr();
                if (!accept(Token::Kind::RParen))
                    throw ParseError("syntax error: expected ')'", tok_.pos);
                return e;
            }
            case Token::Kind::Ident: {
                advance();
                if (tok_.kind == Token::Kind::LParen) {
                    auto fn = function_table().find(t.text);
                    if (fn == function_table().end())
                        throw ParseError("unknown function '" + t.text + "'", t.pos);
                    advance();
                    Expr arg = expr();
                    if (!accept(Token::Kind::RParen))
                        throw ParseError("syntax error: expected ')'", tok_.pos);
                    Expr e = Expr::unary(fn->second, std::move(arg));
                    set_pos(e, t.pos);
                    return e;
                }
                for (std::size_t i = 0; i < chart_.size(); ++i) {
                    if (chart_[i] == t.text) {
                        Expr e = Expr::coord(static_cast<int>(i));
                        set_pos(e, t.pos);
                        return e;
                    }
                }
                throw ParseError("unknown identifier '" + t.text + "'", t.pos);
            }
            default:
                throw ParseError("syntax error: expected a number, coordinate, function or '('",
                                 t.pos);
        }
    }

    static Expr make_binary(BinaryOp op, Expr lhs, Expr rhs, int pos) {
        Expr e = Expr::binary(op, std::move(lhs), std::move(rhs));
        set_pos(e, pos);
        return e;
    }

    static void set_pos(Expr& e, int pos) { e.pos_ = pos; }

    Lexer lexer_;
    Token tok_{Token::Kind::End, 0};
    const std::vector<std::string>& chart_;
};

Expr Expr::constant(double c) {
    Expr e;
    e.kind_ = Kind::Constant;
    e.constant_ = c;
    return e;
}

Expr Expr::coord(int index) {
    Expr e;
    e.kind_ = Kind::Coord;
    e.coord_ = index;
    return e;
}

Expr Expr::unary(UnaryOp op, Expr child) {
    Expr e;
    e.kind_ = Kind::Unary;
    e.uop_ = op;
    e.kids_.push_back(std::move(child));
    return e;
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
    Expr e;
    e.kind_ = Kind::Binary;
    e.bop_ = op;
    e.kids_.push_back(std::move(lhs));
    e.kids_.push_back(std::move(rhs));
    return e;
}

Expr Expr::parse(const std::string& text, const std::vector<std::string>& chart) {
    return Parser(text, chart).run();
}

bool Expr::same_tree(const Expr& other) const {
    if (kind_ != other.kind_) return false;
    switch (kind_) {
        case Kind::Constant: return constant_ == other.constant_;
        case Kind::Coord: return coord_ == other.coord_;
        case Kind::Unary:
            return uop_ == other.uop_ && kids_[0].same_tree(other.kids_[0]);
        case Kind::Binary:
            return bop_ == other.bop_ && kids_[0].same_tree(other.kids_[0]) &&
                   kids_[1].same_tree(other.kids_[1]);
    }
    return false;
}

bool Expr::integer_constant(long long& out) const {
    if (kind_ != Kind::Constant) return false;
    if (!(std::abs(constant_) < 9.0e15)) return false;
    if (constant_ != std::nearbyint(constant_)) return false;
    out = static_cast<long long>(constant_);
    return true;
}

namespace {

const char* function_name(UnaryOp op) {
    switch (op) {
        case UnaryOp::Neg:  return "-";
        case UnaryOp::Sin:  return "sin";
        case UnaryOp::Cos:  return "cos";
        case UnaryOp::Tan:  return "tan";
        case UnaryOp::Exp:  return "exp";
        case UnaryOp::Log:  return "log";
        case UnaryOp::Sqrt: return "sqrt";
        case UnaryOp::Sinh: return "sinh";
        case UnaryOp::Cosh: return "cosh";
        case UnaryOp::Tanh: return "tanh";
    }
    return "?";
}

int precedence(const Expr& e) {
    if (e.kind() == Expr::Kind::Binary) {
        switch (e.binary_op()) {
            case BinaryOp::Add:
            case BinaryOp::Sub: return 1;
            case BinaryOp::Mul:
            case BinaryOp::Div: return 2;
            case BinaryOp::Pow: return 4;
        }
    }
    if (e.kind() == Expr::Kind::Unary && e.unary_op() == UnaryOp::Neg) return 3;
    // a negative literal prints with a leading minus, so it binds like one
    if (e.kind() == Expr::Kind::Constant && std::signbit(e.constant_value())) return 3;
    return 5;  // atoms and function applications
}

void print(const Expr& e, const std::vector<std::string>& chart, std::string& out);

void print_child(const Expr& child, bool need_parens, const std::vector<std::string>& chart,
                 std::string& out) {
    if (need_parens) out += '(';
    print(child, chart, out);
    if (need_parens) out += ')';
}

void print(const Expr& e, const std::vector<std::string>& chart, std::string& out) {
    switch (e.kind()) {
        case Expr::Kind::Constant: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", e.constant_value());
            out += buf;
            return;
        }
        case Expr::Kind::Coord:
            out += chart[static_cast<std::size_t>(e.coord_index())];
            return;
        case Expr::Kind::Unary: {
            if (e.unary_op() == UnaryOp::Neg) {
                out += '-';
                // -a*b would re-parse as (-a)*b, so parenthesize weaker children
                print_child(e.child(0), precedence(e.child(0)) < 3, chart, out);
                return;
            }
            out += function_name(e.unary_op());
            out += '(';
            print(e.child(0), chart, out);
            out += ')';
            return;
        }
        case Expr::Kind::Binary: {
            const int p = precedence(e);
            const Expr& l = e.child(0);
            const Expr& r = e.child(1);
            const char* sym = "?";
            bool lpar = precedence(l) < p;
            bool rpar = precedence(r) < p;
            switch (e.binary_op()) {
                case BinaryOp::Add: sym = " + "; rpar = rpar || precedence(r) == p; break;
                case BinaryOp::Sub: sym = " - "; rpar = rpar || precedence(r) == p; break;
                case BinaryOp::Mul: sym = "*"; rpar = rpar || precedence(r) == p; break;
                case BinaryOp::Div: sym = "/"; rpar = rpar || precedence(r) == p; break;
                case BinaryOp::Pow:
                    sym = "^";
                    lpar = precedence(l) <= p;     // right associative
                    rpar = precedence(r) < 3;      // exponent re-parses via `unary`
                    break;
            }
            print_child(l, lpar, chart, out);
            out += sym;
            print_child(r, rpar, chart, out);
            return;
        }
    }
}

}  // namespace

std::string Expr::str(const std::vector<std::string>& chart) const {
    std::string out;
    print(*this, chart, out);
    return out;
}

const std::vector<std::string>& expr_function_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, op] : function_table()) v.push_back(name);
        return v;
    }();
    return names;
}

}  // namespace distgeo
