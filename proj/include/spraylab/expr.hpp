// Minimal calculator grammar for user-defined fields in config files.
//
// Variables x1..xn and y1..yn, decimal numbers, operators + - * / ^ with the
// usual precedence (^ binds tightest, right-associative), unary minus, and the
// functions sqrt, sin, cos, exp, ln. Parsed once into a tree that evaluates at
// any AD depth.
#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "spraylab/errors.hpp"
#include "spraylab/fields.hpp"

namespace spraylab {

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Op {
    number,
    var_x,
    var_y,
    add,
    sub,
    mul,
    div,
    pow_op,
    neg,
    fn_sqrt,
    fn_sin,
    fn_cos,
    fn_exp,
    fn_ln
  };
  Op op;
  double number = 0.0;
  int index = 0;  // 0-based variable index
  ExprPtr lhs, rhs;
};

struct Expr {
  ExprPtr root;
  std::string text;
  bool uses_y = false;
  bool is_constant = false;
};

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view text, int n_vars) : text_(text), n_(n_vars) {}

  ExprPtr parse() {
    ExprPtr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("unexpected trailing input at position " + std::to_string(pos_) +
                       " in expression '" + std::string(text_) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg + " at position " + std::to_string(pos_) + " in expression '" +
                     std::string(text_) + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  ExprPtr parse_sum() {
    ExprPtr lhs = parse_term();
    for (;;) {
      if (eat('+'))
        lhs = node(ExprNode::Op::add, lhs, parse_term());
      else if (eat('-'))
        lhs = node(ExprNode::Op::sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    for (;;) {
      if (eat('*'))
        lhs = node(ExprNode::Op::mul, lhs, parse_unary());
      else if (eat('/'))
        lhs = node(ExprNode::Op::div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  ExprPtr parse_unary() {
    if (eat('-')) {
      auto e = std::make_shared<ExprNode>();
      e->op = ExprNode::Op::neg;
      e->lhs = parse_unary();
      return e;
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    if (eat('^')) return node(ExprNode::Op::pow_op, base, parse_unary());
    return base;
  }

  ExprPtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_sum();
      if (!eat(')')) fail("missing closing parenthesis");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    fail(std::string("unexpected character '") + c + "'");
  }

  ExprPtr parse_number() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
      } else {
        pos_ = save;
      }
    }
    auto e = std::make_shared<ExprNode>();
    e->op = ExprNode::Op::number;
    try {
      e->number = std::stod(std::string(text_.substr(start, pos_ - start)));
    } catch (const std::exception&) {
      fail("malformed number");
    }
    return e;
  }

  ExprPtr parse_ident() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if ((name[0] == 'x' || name[0] == 'y') && name.size() > 1) {
      bool digits = true;
      for (size_t i = 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
      if (digits) {
        int idx = 0;
        try {
          idx = std::stoi(name.substr(1));
        } catch (const std::exception&) {
          fail("variable '" + name + "' index out of range");
        }
        if (idx < 1 || idx > n_) fail("variable '" + name + "' out of range for dimension");
        auto e = std::make_shared<ExprNode>();
        e->op = name[0] == 'x' ? ExprNode::Op::var_x : ExprNode::Op::var_y;
        e->index = idx - 1;
        return e;
      }
    }
    ExprNode::Op fn;
    if (name == "sqrt")
      fn = ExprNode::Op::fn_sqrt;
    else if (name == "sin")
      fn = ExprNode::Op::fn_sin;
    else if (name == "cos")
      fn = ExprNode::Op::fn_cos;
    else if (name == "exp")
      fn = ExprNode::Op::fn_exp;
    else if (name == "ln")
      fn = ExprNode::Op::fn_ln;
    else
      fail("unknown identifier '" + name + "'");
    if (!eat('(')) fail("expected '(' after function name");
    ExprPtr arg = parse_sum();
    if (!eat(')')) fail("missing closing parenthesis after function argument");
    auto e = std::make_shared<ExprNode>();
    e->op = fn;
    e->lhs = arg;
    return e;
  }

  static ExprPtr node(ExprNode::Op op, ExprPtr l, ExprPtr r) {
    auto e = std::make_shared<ExprNode>();
    e->op = op;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }

  std::string_view text_;
  int n_;
  size_t pos_ = 0;
};

inline bool expr_uses_y(const ExprNode& e) {
  if (e.op == ExprNode::Op::var_y) return true;
  if (e.lhs && expr_uses_y(*e.lhs)) return true;
  if (e.rhs && expr_uses_y(*e.rhs)) return true;
  return false;
}

inline bool expr_uses_var(const ExprNode& e) {
  if (e.op == ExprNode::Op::var_y || e.op == ExprNode::Op::var_x) return true;
  if (e.lhs && expr_uses_var(*e.lhs)) return true;
  if (e.rhs && expr_uses_var(*e.rhs)) return true;
  return false;
}

template <class T>
T eval_expr(const ExprNode& e, std::span<const T> x, std::span<const T> y) {
  using Op = ExprNode::Op;
  switch (e.op) {
    case Op::number: return T(e.number);
    case Op::var_x: return x[size_t(e.index)];
    case Op::var_y: return y[size_t(e.index)];
    case Op::add: return eval_expr(*e.lhs, x, y) + eval_expr(*e.rhs, x, y);
    case Op::sub: return eval_expr(*e.lhs, x, y) - eval_expr(*e.rhs, x, y);
    case Op::mul: return eval_expr(*e.lhs, x, y) * eval_expr(*e.rhs, x, y);
    case Op::div: return eval_expr(*e.lhs, x, y) / eval_expr(*e.rhs, x, y);
    case Op::pow_op: {
      // Constant exponents keep the derivative rule exact; general exponents
      // go through exp(b ln a).
      if (e.rhs->op == Op::number) return pow(eval_expr(*e.lhs, x, y), e.rhs->number);
      return exp(eval_expr(*e.rhs, x, y) * log(eval_expr(*e.lhs, x, y)));
    }
    case Op::neg: return -eval_expr(*e.lhs, x, y);
    case Op::fn_sqrt: return sqrt(eval_expr(*e.lhs, x, y));
    case Op::fn_sin: return sin(eval_expr(*e.lhs, x, y));
    case Op::fn_cos: return cos(eval_expr(*e.lhs, x, y));
    case Op::fn_exp: return exp(eval_expr(*e.lhs, x, y));
    case Op::fn_ln: return log(eval_expr(*e.lhs, x, y));
  }
  throw Error("unreachable expression node");
}

}  // namespace detail

inline Expr parse_expression(const std::string& text, int n_vars) {
  detail::ExprParser p(text, n_vars);
  Expr e;
  e.root = p.parse();
  e.text = text;
  e.uses_y = detail::expr_uses_y(*e.root);
  e.is_constant = !detail::expr_uses_var(*e.root);
  return e;
}

// Chart scalar from an expression; rejects fiber variables.
inline std::shared_ptr<const ChartScalar> chart_scalar_from_expr(const Expr& e) {
  if (e.uses_y)
    throw ValidationError("expression '" + e.text + "' must not use fiber variables y1..yn");
  return make_chart_scalar([root = e.root]<class T>(std::span<const T> x) -> T {
    std::span<const T> no_y;
    return detail::eval_expr(*root, x, no_y);
  });
}

inline std::shared_ptr<const PhaseScalar> phase_scalar_from_expr(const Expr& e) {
  return make_phase_scalar(
      [root = e.root]<class T>(std::span<const T> x, std::span<const T> y) -> T {
        return detail::eval_expr(*root, x, y);
      });
}

}  // namespace spraylab
