#pragma once

// Scalar expression trees: parsing, evaluation, symbolic differentiation.
//
// Grammar (whitespace and newlines are ignored):
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := ('-' | '+') factor | atom ['^' signed-number]
//   atom   := number | variable | func '(' args ')' | '(' expr ')'
//   func   := exp | sin | cos | gaussian
//
// gaussian(x, c, w) is exp(-(x - c)^2 / (2 w^2)). The two-argument form
// gaussian(c, w), available when y1..y3 are variables, is the isotropic
// spatial bump exp(-((y1 - c)^2 + (y2 - c)^2 + (y3 - c)^2) / (2 w^2)).
// Both are expanded into primitive nodes while parsing.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "localmath/error.hpp"

namespace localmath {

class Expr {
 public:
  enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Neg, Pow, Exp, Sin, Cos };

  Expr() : Expr(constant(0.0)) {}

  static Expr constant(double value) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Constant;
    n->value = value;
    return Expr(std::move(n));
  }

  static Expr variable(std::size_t index, std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    n->index = index;
    n->name = std::move(name);
    return Expr(std::move(n));
  }

  Kind kind() const { return node_->kind; }

  bool is_constant() const { return node_->kind == Kind::Constant; }
  bool is_constant(double v) const { return is_constant() && node_->value == v; }
  double constant_value() const { return node_->value; }

  /// Evaluates with variables[i] bound to variable index i. Out-of-range
  /// indices read as 0. May return non-finite values; callers decide.
  double evaluate(std::span<const double> variables) const { return eval(*node_, variables); }

  /// Symbolic partial derivative with respect to variable `index`.
  Expr derivative(std::size_t index) const {
    const Node& n = *node_;
    switch (n.kind) {
      case Kind::Constant:
        return constant(0.0);
      case Kind::Variable:
        return constant(n.index == index ? 1.0 : 0.0);
      case Kind::Add:
        return lhs().derivative(index) + rhs().derivative(index);
      case Kind::Sub:
        return lhs().derivative(index) - rhs().derivative(index);
      case Kind::Neg:
        return -lhs().derivative(index);
      case Kind::Mul:
        return lhs().derivative(index) * rhs() + lhs() * rhs().derivative(index);
      case Kind::Div: {
        const Expr u = lhs();
        const Expr v = rhs();
        return (u.derivative(index) * v - u * v.derivative(index)) / pow(v, 2.0);
      }
      case Kind::Pow: {
        const Expr u = lhs();
        return constant(n.value) * pow(u, n.value - 1.0) * u.derivative(index);
      }
      case Kind::Exp:
        return *this * lhs().derivative(index);
      case Kind::Sin:
        return cos(lhs()) * lhs().derivative(index);
      case Kind::Cos:
        return -(sin(lhs()) * lhs().derivative(index));
    }
    return constant(0.0);
  }

  /// Replaces variable `index` by `replacement` everywhere.
  Expr substitute(std::size_t index, const Expr& replacement) const {
    const Node& n = *node_;
    switch (n.kind) {
      case Kind::Constant:
        return *this;
      case Kind::Variable:
        return n.index == index ? replacement : *this;
      case Kind::Add:
        return lhs().substitute(index, replacement) + rhs().substitute(index, replacement);
      case Kind::Sub:
        return lhs().substitute(index, replacement) - rhs().substitute(index, replacement);
      case Kind::Mul:
        return lhs().substitute(index, replacement) * rhs().substitute(index, replacement);
      case Kind::Div:
        return lhs().substitute(index, replacement) / rhs().substitute(index, replacement);
      case Kind::Neg:
        return -lhs().substitute(index, replacement);
      case Kind::Pow:
        return pow(lhs().substitute(index, replacement), n.value);
      case Kind::Exp:
        return exp(lhs().substitute(index, replacement));
      case Kind::Sin:
        return sin(lhs().substitute(index, replacement));
      case Kind::Cos:
        return cos(lhs().substitute(index, replacement));
    }
    return *this;
  }

  /// Fully parenthesized text that parses back to an equivalent tree.
  std::string to_string() const {
    std::string out;
    print(*node_, out);
    return out;
  }

  friend Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return constant(a.constant_value() + b.constant_value());
    if (a.is_constant(0.0)) return b;
    if (b.is_constant(0.0)) return a;
    return binary(Kind::Add, a, b);
  }
  friend Expr operator-(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return constant(a.constant_value() - b.constant_value());
    if (b.is_constant(0.0)) return a;
    if (a.is_constant(0.0)) return -b;
    return binary(Kind::Sub, a, b);
  }
  friend Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return constant(a.constant_value() * b.constant_value());
    if (a.is_constant(0.0) || b.is_constant(0.0)) return constant(0.0);
    if (a.is_constant(1.0)) return b;
    if (b.is_constant(1.0)) return a;
    return binary(Kind::Mul, a, b);
  }
  friend Expr operator/(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant() && b.constant_value() != 0.0) {
      return constant(a.constant_value() / b.constant_value());
    }
    if (b.is_constant(1.0)) return a;
    return binary(Kind::Div, a, b);
  }
  friend Expr operator-(const Expr& a) {
    if (a.is_constant()) return constant(-a.constant_value());
    if (a.kind() == Kind::Neg) return a.lhs();
    return unary(Kind::Neg, a);
  }
  friend Expr pow(const Expr& base, double exponent) {
    if (exponent == 0.0) return constant(1.0);
    if (exponent == 1.0) return base;
    if (base.is_constant()) return constant(std::pow(base.constant_value(), exponent));
    auto n = std::make_shared<Node>();
    n->kind = Kind::Pow;
    n->value = exponent;
    n->children = {base.node_};
    return Expr(std::move(n));
  }
  friend Expr exp(const Expr& a) {
    if (a.is_constant()) return constant(std::exp(a.constant_value()));
    return unary(Kind::Exp, a);
  }
  friend Expr sin(const Expr& a) {
    if (a.is_constant()) return constant(std::sin(a.constant_value()));
    return unary(Kind::Sin, a);
  }
  friend Expr cos(const Expr& a) {
    if (a.is_constant()) return constant(std::cos(a.constant_value()));
    return unary(Kind::Cos, a);
  }

 private:
  struct Node {
    Kind kind = Kind::Constant;
    double value = 0.0;  // constant value or exponent
    std::size_t index = 0;
    std::string name;
    std::vector<std::shared_ptr<const Node>> children;
  };

  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  Expr lhs() const { return Expr(node_->children.at(0)); }
  Expr rhs() const { return Expr(node_->children.at(1)); }

  static Expr unary(Kind kind, const Expr& a) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->children = {a.node_};
    return Expr(std::move(n));
  }

  static Expr binary(Kind kind, const Expr& a, const Expr& b) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->children = {a.node_, b.node_};
    return Expr(std::move(n));
  }

  static double eval(const Node& n, std::span<const double> vars) {
    switch (n.kind) {
      case Kind::Constant:
        return n.value;
      case Kind::Variable:
        return n.index < vars.size() ? vars[n.index] : 0.0;
      case Kind::Add:
        return eval(*n.children[0], vars) + eval(*n.children[1], vars);
      case Kind::Sub:
        return eval(*n.children[0], vars) - eval(*n.children[1], vars);
      case Kind::Mul:
        return eval(*n.children[0], vars) * eval(*n.children[1], vars);
      case Kind::Div:
        return eval(*n.children[0], vars) / eval(*n.children[1], vars);
      case Kind::Neg:
        return -eval(*n.children[0], vars);
      case Kind::Pow: {
        const double base = eval(*n.children[0], vars);
        if (n.value == 2.0) return base * base;
        return std::pow(base, n.value);
      }
      case Kind::Exp:
        return std::exp(eval(*n.children[0], vars));
      case Kind::Sin:
        return std::sin(eval(*n.children[0], vars));
      case Kind::Cos:
        return std::cos(eval(*n.children[0], vars));
    }
    return 0.0;
  }

  static void print_number(double v, std::string& out) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (v < 0.0 || std::signbit(v)) {
      out += '(';
      out += buf;
      out += ')';
    } else {
      out += buf;
    }
  }

  static void print(const Node& n, std::string& out) {
    auto bin = [&](const char* op) {
      out += '(';
      print(*n.children[0], out);
      out += op;
      print(*n.children[1], out);
      out += ')';
    };
    auto call = [&](const char* f) {
      out += f;
      out += '(';
      print(*n.children[0], out);
      out += ')';
    };
    switch (n.kind) {
      case Kind::Constant:
        print_number(n.value, out);
        break;
      case Kind::Variable:
        out += n.name;
        break;
      case Kind::Add:
        bin(" + ");
        break;
      case Kind::Sub:
        bin(" - ");
        break;
      case Kind::Mul:
        bin(" * ");
        break;
      case Kind::Div:
        bin(" / ");
        break;
      case Kind::Neg:
        out += "(-";
        print(*n.children[0], out);
        out += ')';
        break;
      case Kind::Pow:
        out += '(';
        print(*n.children[0], out);
        out += '^';
        print_number(n.value, out);
        out += ')';
        break;
      case Kind::Exp:
        call("exp");
        break;
      case Kind::Sin:
        call("sin");
        break;
      case Kind::Cos:
        call("cos");
        break;
    }
  }

  std::shared_ptr<const Node> node_;
};

inline const std::vector<std::string>& spacetime_variables() {
  static const std::vector<std::string> names{"y0", "y1", "y2", "y3"};
  return names;
}

inline const std::vector<std::string>& path_variables() {
  static const std::vector<std::string> names{"s"};
  return names;
}

namespace detail {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, std::span<const std::string> variables)
      : text_(text), variables_(variables) {}

  Expr parse() {
    skip_space();
    if (at_end()) fail("empty expression");
    Expr e = parse_expr();
    skip_space();
    if (!at_end()) {
      if (peek() == ')') fail("unbalanced parentheses: unexpected ')'");
      fail(std::string("unexpected '") + peek() + "'");
    }
    return e;
  }

 private:
  struct Mark {
    std::size_t line;
    std::size_t column;
  };

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  Mark mark() const { return {line_, column_}; }

  [[noreturn]] void fail(const std::string& message) const { fail(message, mark()); }
  [[noreturn]] static void fail(const std::string& message, Mark at) {
    throw ParseError(message, at.line, at.column);
  }

  bool accept(char c) {
    skip_space();
    if (peek() != c) return false;
    advance();
    return true;
  }

  Expr parse_expr() {
    Expr e = parse_term();
    for (;;) {
      if (accept('+')) {
        e = e + parse_term();
      } else if (accept('-')) {
        e = e - parse_term();
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    for (;;) {
      if (accept('*')) {
        e = e * parse_factor();
      } else if (accept('/')) {
        e = e / parse_factor();
      } else {
        return e;
      }
    }
  }

  Expr parse_factor() {
    if (accept('-')) return -parse_factor();
    if (accept('+')) return parse_factor();
    Expr base = parse_atom();
    if (accept('^')) {
      skip_space();
      double sign = 1.0;
      if (peek() == '-' || peek() == '+') {
        sign = peek() == '-' ? -1.0 : 1.0;
        advance();
        skip_space();
      }
      if (!starts_number()) fail("exponent must be a number");
      return pow(base, sign * parse_number());
    }
    return base;
  }

  bool starts_number() const {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }

  double parse_number() {
    const Mark at = mark();
    const std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) advance();
    if (!at_end() && (peek() == 'e' || peek() == 'E')) {
      const std::size_t save = pos_;
      const Mark save_mark = mark();
      advance();
      if (!at_end() && (peek() == '+' || peek() == '-')) advance();
      if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) advance();
      } else {
        pos_ = save;
        line_ = save_mark.line;
        column_ = save_mark.column;
      }
    }
    const std::string token(text_.substr(start, pos_ - start));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      fail("malformed number '" + token + "'", at);
    }
    if (used != token.size()) fail("malformed number '" + token + "'", at);
    return v;
  }

  std::string parse_identifier() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
      advance();
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  Expr parse_atom() {
    skip_space();
    if (at_end()) fail("unexpected end of expression");
    if (starts_number()) return Expr::constant(parse_number());
    if (peek() == '(') {
      const Mark open = mark();
      advance();
      Expr e = parse_expr();
      if (!accept(')')) fail("unbalanced parentheses: missing ')' for '(' opened", open);
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_') {
      const Mark at = mark();
      const std::string name = parse_identifier();
      for (std::size_t i = 0; i < variables_.size(); ++i) {
        if (variables_[i] == name) return Expr::variable(i, name);
      }
      if (name == "exp" || name == "sin" || name == "cos" || name == "gaussian") {
        return parse_call(name, at);
      }
      fail("unknown identifier '" + name + "'", at);
    }
    fail(std::string("unexpected '") + peek() + "'");
  }

  Expr parse_call(const std::string& name, Mark at) {
    if (!accept('(')) fail("expected '(' after '" + name + "'");
    const Mark open = mark();
    std::vector<Expr> args;
    skip_space();
    if (peek() != ')') {
      args.push_back(parse_expr());
      while (accept(',')) args.push_back(parse_expr());
    }
    if (!accept(')')) fail("unbalanced parentheses: missing ')' for call opened", open);

    auto arity = [&](std::size_t expected) {
      if (args.size() != expected) {
        fail("arity mismatch: " + name + " takes " + std::to_string(expected) +
                 " argument(s), got " + std::to_string(args.size()),
             at);
      }
    };
    if (name == "exp") {
      arity(1);
      return exp(args[0]);
    }
    if (name == "sin") {
      arity(1);
      return sin(args[0]);
    }
    if (name == "cos") {
      arity(1);
      return cos(args[0]);
    }
    // gaussian
    if (args.size() == 3) return gaussian(args[0], args[1], args[2]);
    if (args.size() == 2) {
      std::vector<Expr> spatial;
      for (const char* v : {"y1", "y2", "y3"}) {
        for (std::size_t i = 0; i < variables_.size(); ++i) {
          if (variables_[i] == v) spatial.push_back(Expr::variable(i, v));
        }
      }
      if (spatial.size() != 3) {
        fail("gaussian(center, width) needs spacetime coordinates y1..y3", at);
      }
      Expr r2 = pow(spatial[0] - args[0], 2.0) + pow(spatial[1] - args[0], 2.0) +
                pow(spatial[2] - args[0], 2.0);
      return exp(-(r2 / (Expr::constant(2.0) * pow(args[1], 2.0))));
    }
    fail("arity mismatch: gaussian takes 2 or 3 arguments, got " + std::to_string(args.size()),
         at);
  }

  static Expr gaussian(const Expr& x, const Expr& center, const Expr& width) {
    return exp(-(pow(x - center, 2.0) / (Expr::constant(2.0) * pow(width, 2.0))));
  }

  std::string_view text_;
  std::span<const std::string> variables_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace detail

/// Parses `text` with the given variable names bound to indices 0, 1, ...
inline Expr parse_expression(std::string_view text, std::span<const std::string> variables) {
  return detail::ExpressionParser(text, variables).parse();
}

/// Parses an expression over the spacetime coordinates y0..y3.
inline Expr parse_spacetime_expression(std::string_view text) {
  return parse_expression(text, spacetime_variables());
}

}  // namespace localmath
