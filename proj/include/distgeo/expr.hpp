#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "distgeo/errors.hpp"
#include "distgeo/jet.hpp"

namespace distgeo {

enum class UnaryOp { Neg, Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

// Immutable scalar expression over the chart coordinates.
//
// Grammar (EBNF, see README):
//   expr    = term { ("+" | "-") term } ;
//   term    = unary { ("*" | "/") unary } ;
//   unary   = "-" unary | factor ;
//   factor  = primary [ "^" unary ] ;          (* right associative *)
//   primary = number | coord | func "(" expr ")" | "(" expr ")" ;
//   func    = "sin"|"cos"|"tan"|"exp"|"log"|"sqrt"|"sinh"|"cosh"|"tanh" ;
class Expr {
public:
    enum class Kind { Constant, Coord, Unary, Binary };

    static Expr constant(double c);
    static Expr coord(int index);
    static Expr unary(UnaryOp op, Expr child);
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

    // Parses `text` over the given chart names. Throws ParseError with the
    // offending position and an expected-token message.
    static Expr parse(const std::string& text, const std::vector<std::string>& chart);

    Kind kind() const { return kind_; }
    double constant_value() const { return constant_; }
    int coord_index() const { return coord_; }
    UnaryOp unary_op() const { return uop_; }
    BinaryOp binary_op() const { return bop_; }
    const Expr& child(int i) const { return kids_[static_cast<std::size_t>(i)]; }
    int position() const { return pos_; }

    // Structural equality; source positions are ignored.
    bool same_tree(const Expr& other) const;

    // Emits text that parses back to an equal tree over the same chart.
    std::string str(const std::vector<std::string>& chart) const;

    // Exact dual-number evaluation: plain values at S = double, first
    // directional derivatives at Jet<double>, mixed second-order at
    // Jet<Jet<double>>. Domain failures throw EvalError with the node position.
    template <class S>
    S eval(const std::vector<S>& point) const {
        switch (kind_) {
            case Kind::Constant:
                return S(constant_);
            case Kind::Coord:
                return point[static_cast<std::size_t>(coord_)];
            case Kind::Unary: {
                S x = kids_[0].eval(point);
                using std::sin; using std::cos; using std::tan;
                using std::exp; using std::log; using std::sqrt;
                using std::sinh; using std::cosh; using std::tanh;
                switch (uop_) {
                    case UnaryOp::Neg:  return -x;
                    case UnaryOp::Sin:  return sin(x);
                    case UnaryOp::Cos:  return cos(x);
                    case UnaryOp::Tan:  return tan(x);
                    case UnaryOp::Exp:  return exp(x);
                    case UnaryOp::Log:
                        if (!(val(x) > 0.0)) throw EvalError("log of non-positive value", pos_);
                        return log(x);
                    case UnaryOp::Sqrt:
                        if (val(x) < 0.0) throw EvalError("sqrt of negative value", pos_);
                        return sqrt(x);
                    case UnaryOp::Sinh: return sinh(x);
                    case UnaryOp::Cosh: return cosh(x);
                    case UnaryOp::Tanh: return tanh(x);
                }
                throw EvalError("unhandled unary operator", pos_);
            }
            case Kind::Binary: {
                if (bop_ == BinaryOp::Pow) {
                    S base = kids_[0].eval(point);
                    long long n = 0;
                    if (kids_[1].integer_constant(n)) {
                        if (n < 0 && val(base) == 0.0)
                            throw EvalError("zero base with negative integer exponent", pos_);
                        return ipow(base, n);
                    }
                    S expo = kids_[1].eval(point);
                    if (!(val(base) > 0.0))
                        throw EvalError("pow with non-positive base and non-integer exponent", pos_);
                    using std::exp; using std::log;
                    return exp(expo * log(base));
                }
                S a = kids_[0].eval(point);
                S b = kids_[1].eval(point);
                switch (bop_) {
                    case BinaryOp::Add: return a + b;
                    case BinaryOp::Sub: return a - b;
                    case BinaryOp::Mul: return a * b;
                    case BinaryOp::Div:
                        if (val(b) == 0.0) throw EvalError("division by zero", pos_);
                        return a / b;
                    case BinaryOp::Pow: break;  // handled above
                }
                throw EvalError("unhandled binary operator", pos_);
            }
        }
        throw EvalError("corrupt expression node", pos_);
    }

    // True when this node is a constant with an exactly integral value.
    bool integer_constant(long long& out) const;

private:
    Kind kind_ = Kind::Constant;
    double constant_ = 0.0;
    int coord_ = 0;
    UnaryOp uop_ = UnaryOp::Neg;
    BinaryOp bop_ = BinaryOp::Add;
    std::vector<Expr> kids_;
    int pos_ = 0;

    friend class Parser;
};

// Known function names for the grammar, exposed for diagnostics.
const std::vector<std::string>& expr_function_names();

}  // namespace distgeo
