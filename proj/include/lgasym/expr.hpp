#pragma once

// Scalar expressions in the single variable x: parsing, printing,
// evaluation, exact differentiation and substitution.
//
// Grammar (whitespace insignificant):
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?        exponent must be free of x
//   atom   := number | 'x' | func '(' expr ')' | '(' expr ')'
//   func   := exp | log | sqrt | sin | cos | abs | sign
//
// '^' binds tighter than unary minus and is right-associative, so
// "-x^2" is -(x^2) and "x^-1^2" is x^(-(1^2)).

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lgasym/errors.hpp"

namespace lgasym {

enum class Op : std::uint8_t {
  Constant,
  Variable,
  Neg,
  Exp,
  Log,
  Sqrt,
  Sin,
  Cos,
  Abs,
  Sign,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
};

inline bool is_unary(Op op) noexcept { return op >= Op::Neg && op <= Op::Sign; }
inline bool is_binary(Op op) noexcept { return op >= Op::Add && op <= Op::Div; }

class Expr;

namespace detail {
struct Node;
}

// Immutable, shared expression tree handle. Copies are cheap.
class Expr {
public:
  Expr();  // the constant 0

  Op op() const noexcept;
  // Constant value, or the exponent of a Pow node.
  double value() const noexcept;
  const Expr& lhs() const noexcept;  // operand of unary ops, base of Pow
  const Expr& rhs() const noexcept;

  bool is_constant(double v) const noexcept { return op() == Op::Constant && value() == v; }
  std::size_t size() const noexcept;  // number of nodes

  // Raw node construction without folding (used by the parser).
  static Expr make_constant(double v);
  static Expr make_variable();
  static Expr make_unary(Op op, Expr arg);
  static Expr make_binary(Op op, Expr a, Expr b);
  static Expr make_pow(Expr base, double exponent);

private:
  explicit Expr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::Node> node_;
  friend bool structurally_equal(const Expr&, const Expr&);
};

namespace detail {
struct Node {
  Op op = Op::Constant;
  double value = 0.0;
  Expr lhs;
  Expr rhs;
  std::size_t size = 1;
};
}  // namespace detail

// A null handle is the constant 0.
inline Expr::Expr() = default;
inline Op Expr::op() const noexcept { return node_ ? node_->op : Op::Constant; }
inline double Expr::value() const noexcept { return node_ ? node_->value : 0.0; }
inline const Expr& Expr::lhs() const noexcept {
  static const Expr empty;
  return node_ ? node_->lhs : empty;
}
inline const Expr& Expr::rhs() const noexcept {
  static const Expr empty;
  return node_ ? node_->rhs : empty;
}
inline std::size_t Expr::size() const noexcept { return node_ ? node_->size : 1; }

inline Expr Expr::make_constant(double v) {
  return Expr(std::make_shared<detail::Node>(detail::Node{Op::Constant, v, {}, {}, 1}));
}
inline Expr Expr::make_variable() {
  return Expr(std::make_shared<detail::Node>(detail::Node{Op::Variable, 0.0, {}, {}, 1}));
}
inline Expr Expr::make_unary(Op op, Expr arg) {
  std::size_t n = arg.size() + 1;
  return Expr(std::make_shared<detail::Node>(detail::Node{op, 0.0, std::move(arg), {}, n}));
}
inline Expr Expr::make_binary(Op op, Expr a, Expr b) {
  std::size_t n = a.size() + b.size() + 1;
  return Expr(std::make_shared<detail::Node>(detail::Node{op, 0.0, std::move(a), std::move(b), n}));
}
inline Expr Expr::make_pow(Expr base, double exponent) {
  std::size_t n = base.size() + 1;
  return Expr(std::make_shared<detail::Node>(detail::Node{Op::Pow, exponent, std::move(base), {}, n}));
}

inline bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_ && a.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::Constant:
      return a.value() == b.value() || (std::isnan(a.value()) && std::isnan(b.value()));
    case Op::Variable:
      return true;
    case Op::Pow:
      return a.value() == b.value() && structurally_equal(a.lhs(), b.lhs());
    default:
      break;
  }
  if (is_unary(a.op())) return structurally_equal(a.lhs(), b.lhs());
  return structurally_equal(a.lhs(), b.lhs()) && structurally_equal(a.rhs(), b.rhs());
}

inline bool contains_variable(const Expr& e) {
  switch (e.op()) {
    case Op::Constant:
      return false;
    case Op::Variable:
      return true;
    case Op::Pow:
      return contains_variable(e.lhs());
    default:
      break;
  }
  if (is_unary(e.op())) return contains_variable(e.lhs());
  return contains_variable(e.lhs()) || contains_variable(e.rhs());
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

inline std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline const char* function_name(Op op) {
  switch (op) {
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Abs: return "abs";
    case Op::Sign: return "sign";
    default: return "";
  }
}

namespace detail {

// 1: + -   2: * /   3: unary minus   4: ^   5: atoms
inline int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    case Op::Constant:
      return e.value() < 0 || std::signbit(e.value()) ? 3 : 5;
    default:
      return 5;
  }
}

inline void print_to(std::string& out, const Expr& e);

inline void print_wrapped(std::string& out, const Expr& e, bool wrap) {
  if (wrap) out += '(';
  print_to(out, e);
  if (wrap) out += ')';
}

inline void print_to(std::string& out, const Expr& e) {
  switch (e.op()) {
    case Op::Constant:
      if (std::signbit(e.value())) {
        out += '-';
        out += format_number(-e.value());
      } else {
        out += format_number(e.value());
      }
      return;
    case Op::Variable:
      out += 'x';
      return;
    case Op::Neg:
      out += '-';
      print_wrapped(out, e.lhs(), precedence(e.lhs()) < 3);
      return;
    case Op::Pow:
      print_wrapped(out, e.lhs(), precedence(e.lhs()) < 5);
      out += '^';
      if (std::signbit(e.value())) {
        out += "(-";
        out += format_number(-e.value());
        out += ')';
      } else {
        out += format_number(e.value());
      }
      return;
    default:
      break;
  }
  if (is_unary(e.op())) {
    out += function_name(e.op());
    out += '(';
    print_to(out, e.lhs());
    out += ')';
    return;
  }
  const int p = precedence(e);
  const char sym = e.op() == Op::Add ? '+' : e.op() == Op::Sub ? '-' : e.op() == Op::Mul ? '*' : '/';
  print_wrapped(out, e.lhs(), precedence(e.lhs()) < p);
  out += sym;
  print_wrapped(out, e.rhs(), precedence(e.rhs()) <= p);
}

}  // namespace detail

// Text that parses back to the same tree for every parser-produced tree.
inline std::string to_string(const Expr& e) {
  std::string out;
  detail::print_to(out, e);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace detail {

[[noreturn]] inline void domain_fail(const char* what, const Expr& node, double x) {
  throw DomainError(std::string(what) + " in '" + to_string(node) + "' at x=" + format_number(x));
}

inline double apply_unary(Op op, double a, const Expr& node, double x) {
  double r = 0;
  switch (op) {
    case Op::Neg: return -a;
    case Op::Exp: r = std::exp(a); break;
    case Op::Log:
      if (!(a > 0)) domain_fail("log of non-positive value", node, x);
      r = std::log(a);
      break;
    case Op::Sqrt:
      if (a < 0) domain_fail("sqrt of negative value", node, x);
      r = std::sqrt(a);
      break;
    case Op::Sin: r = std::sin(a); break;
    case Op::Cos: r = std::cos(a); break;
    case Op::Abs: return std::fabs(a);
    case Op::Sign: return a > 0 ? 1.0 : (a < 0 ? -1.0 : 0.0);
    default: break;
  }
  if (!std::isfinite(r)) domain_fail("non-finite result", node, x);
  return r;
}

inline double apply_binary(Op op, double a, double b, const Expr& node, double x) {
  double r = 0;
  switch (op) {
    case Op::Add: r = a + b; break;
    case Op::Sub: r = a - b; break;
    case Op::Mul: r = a * b; break;
    case Op::Div:
      if (b == 0) domain_fail("division by zero", node, x);
      r = a / b;
      break;
    default: break;
  }
  if (!std::isfinite(r)) domain_fail("non-finite result", node, x);
  return r;
}

inline double apply_pow(double base, double exponent, const Expr& node, double x) {
  if (base < 0 && exponent != std::floor(exponent)) domain_fail("non-integer power of negative value", node, x);
  if (base == 0 && exponent < 0) domain_fail("negative power of zero", node, x);
  double r = std::pow(base, exponent);
  if (!std::isfinite(r)) domain_fail("non-finite result", node, x);
  return r;
}

}  // namespace detail

inline double evaluate(const Expr& e, double x) {
  switch (e.op()) {
    case Op::Constant: return e.value();
    case Op::Variable: return x;
    case Op::Pow: return detail::apply_pow(evaluate(e.lhs(), x), e.value(), e, x);
    default: break;
  }
  if (is_unary(e.op())) return detail::apply_unary(e.op(), evaluate(e.lhs(), x), e, x);
  const double a = evaluate(e.lhs(), x);
  const double b = evaluate(e.rhs(), x);
  return detail::apply_binary(e.op(), a, b, e, x);
}

// Value of an x-free expression, nullopt otherwise (or if it is undefined).
inline std::optional<double> constant_value(const Expr& e) {
  if (contains_variable(e)) return std::nullopt;
  try {
    return evaluate(e, 0.0);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

// Postfix program for fast repeated evaluation. Same semantics and errors
// as evaluate().
class CompiledExpr {
public:
  CompiledExpr() : CompiledExpr(Expr{}) {}
  explicit CompiledExpr(Expr e) : root_(std::move(e)) {
    emit(root_);
    std::size_t depth = 0, max_depth = 0;
    for (const auto& ins : code_) {
      if (ins.op == Op::Constant || ins.op == Op::Variable) {
        ++depth;
      } else if (is_binary(ins.op)) {
        --depth;
      }
      max_depth = std::max(max_depth, depth);
    }
    stack_size_ = max_depth;
  }

  double operator()(double x) const {
    constexpr std::size_t kInline = 64;
    double inline_stack[kInline] = {};
    std::vector<double> heap;
    double* st = inline_stack;
    if (stack_size_ > kInline) {
      heap.resize(stack_size_);
      st = heap.data();
    }
    std::size_t sp = 0;
    for (const auto& ins : code_) {
      switch (ins.op) {
        case Op::Constant: st[sp++] = ins.value; break;
        case Op::Variable: st[sp++] = x; break;
        case Op::Pow: st[sp - 1] = detail::apply_pow(st[sp - 1], ins.value, nodes_[ins.node], x); break;
        default:
          if (is_unary(ins.op)) {
            st[sp - 1] = detail::apply_unary(ins.op, st[sp - 1], nodes_[ins.node], x);
          } else {
            --sp;
            st[sp - 1] = detail::apply_binary(ins.op, st[sp - 1], st[sp], nodes_[ins.node], x);
          }
      }
    }
    return st[0];
  }

  const Expr& expr() const noexcept { return root_; }

private:
  struct Instr {
    Op op;
    double value;
    std::uint32_t node;  // index into nodes_, for error messages
  };

  void push(Op op, double value, const Expr& e) {
    code_.push_back({op, value, static_cast<std::uint32_t>(nodes_.size())});
    nodes_.push_back(e);
  }

  void emit(const Expr& e) {
    switch (e.op()) {
      case Op::Constant: push(Op::Constant, e.value(), e); return;
      case Op::Variable: push(Op::Variable, 0.0, e); return;
      case Op::Pow:
        emit(e.lhs());
        push(Op::Pow, e.value(), e);
        return;
      default: break;
    }
    emit(e.lhs());
    if (is_binary(e.op())) emit(e.rhs());
    push(e.op(), 0.0, e);
  }

  Expr root_;
  std::vector<Instr> code_;
  std::vector<Expr> nodes_;
  std::size_t stack_size_ = 1;
};

// ---------------------------------------------------------------------------
// Folding builders. Constant subtrees are folded only when defined, so
// domain errors still surface at evaluation time.
// ---------------------------------------------------------------------------

inline Expr constant(double v) { return Expr::make_constant(v); }
inline Expr variable() { return Expr::make_variable(); }

inline Expr unary(Op op, const Expr& a) {
  if (op == Op::Neg) {
    if (a.op() == Op::Neg) return a.lhs();
    if (a.op() == Op::Constant) return constant(-a.value());
  }
  if (a.op() == Op::Constant) {
    try {
      return constant(detail::apply_unary(op, a.value(), a, 0.0));
    } catch (const DomainError&) {
    }
  }
  return Expr::make_unary(op, a);
}

inline Expr operator-(const Expr& a) { return unary(Op::Neg, a); }
inline Expr exp(const Expr& a) { return unary(Op::Exp, a); }
inline Expr log(const Expr& a) { return unary(Op::Log, a); }
inline Expr sqrt(const Expr& a) { return unary(Op::Sqrt, a); }
inline Expr sin(const Expr& a) { return unary(Op::Sin, a); }
inline Expr cos(const Expr& a) { return unary(Op::Cos, a); }
inline Expr abs(const Expr& a) { return unary(Op::Abs, a); }
inline Expr sign(const Expr& a) { return unary(Op::Sign, a); }

inline Expr binary(Op op, const Expr& a, const Expr& b) {
  if (a.op() == Op::Constant && b.op() == Op::Constant) {
    try {
      return constant(detail::apply_binary(op, a.value(), b.value(), a, 0.0));
    } catch (const DomainError&) {
      return Expr::make_binary(op, a, b);
    }
  }
  switch (op) {
    case Op::Add:
      if (a.is_constant(0)) return b;
      if (b.is_constant(0)) return a;
      if (b.op() == Op::Neg) return binary(Op::Sub, a, b.lhs());
      if (a.op() == Op::Neg) return binary(Op::Sub, b, a.lhs());
      break;
    case Op::Sub:
      if (b.is_constant(0)) return a;
      if (a.is_constant(0)) return -b;
      if (b.op() == Op::Neg) return binary(Op::Add, a, b.lhs());
      break;
    case Op::Mul:
      if (a.is_constant(0) || b.is_constant(0)) return constant(0);
      if (a.is_constant(1)) return b;
      if (b.is_constant(1)) return a;
      if (a.is_constant(-1)) return -b;
      if (b.is_constant(-1)) return -a;
      if (a.op() == Op::Neg) return -binary(Op::Mul, a.lhs(), b);
      if (b.op() == Op::Neg) return -binary(Op::Mul, a, b.lhs());
      break;
    case Op::Div:
      if (a.is_constant(0) && !b.is_constant(0)) return constant(0);
      if (b.is_constant(1)) return a;
      if (a.op() == Op::Neg) return -binary(Op::Div, a.lhs(), b);
      break;
    default:
      break;
  }
  return Expr::make_binary(op, a, b);
}

inline Expr operator+(const Expr& a, const Expr& b) { return binary(Op::Add, a, b); }
inline Expr operator-(const Expr& a, const Expr& b) { return binary(Op::Sub, a, b); }
inline Expr operator*(const Expr& a, const Expr& b) { return binary(Op::Mul, a, b); }
inline Expr operator/(const Expr& a, const Expr& b) { return binary(Op::Div, a, b); }
inline Expr operator*(double a, const Expr& b) { return constant(a) * b; }
inline Expr operator+(const Expr& a, double b) { return a + constant(b); }

inline Expr pow(const Expr& base, double exponent) {
  if (exponent == 1.0) return base;
  if (exponent == 0.0) return constant(1.0);
  if (base.op() == Op::Constant) {
    try {
      return constant(detail::apply_pow(base.value(), exponent, base, 0.0));
    } catch (const DomainError&) {
      return Expr::make_pow(base, exponent);
    }
  }
  return Expr::make_pow(base, exponent);
}

// ---------------------------------------------------------------------------
// Differentiation and substitution
// ---------------------------------------------------------------------------

// d/dx. |u|' is taken as sign(u)*u' with sign(0) = 0.
inline Expr differentiate(const Expr& e) {
  switch (e.op()) {
    case Op::Constant: return constant(0);
    case Op::Variable: return constant(1);
    case Op::Sign: return constant(0);
    case Op::Pow: {
      const Expr& u = e.lhs();
      return e.value() * pow(u, e.value() - 1.0) * differentiate(u);
    }
    default: break;
  }
  if (is_unary(e.op())) {
    const Expr& u = e.lhs();
    const Expr du = differentiate(u);
    switch (e.op()) {
      case Op::Neg: return -du;
      case Op::Exp: return e * du;
      case Op::Log: return du / u;
      case Op::Sqrt: return du / (constant(2) * e);
      case Op::Sin: return cos(u) * du;
      case Op::Cos: return -(sin(u) * du);
      case Op::Abs: return sign(u) * du;
      default: break;
    }
  }
  const Expr& u = e.lhs();
  const Expr& v = e.rhs();
  const Expr du = differentiate(u);
  const Expr dv = differentiate(v);
  switch (e.op()) {
    case Op::Add: return du + dv;
    case Op::Sub: return du - dv;
    case Op::Mul: return du * v + u * dv;
    case Op::Div: return du / v - u * dv / pow(v, 2.0);
    default: break;
  }
  return constant(0);
}

inline Expr differentiate(const Expr& e, int order) {
  Expr d = e;
  for (int k = 0; k < order; ++k) d = differentiate(d);
  return d;
}

// e with every occurrence of x replaced by `with`.
inline Expr substitute(const Expr& e, const Expr& with) {
  switch (e.op()) {
    case Op::Constant: return e;
    case Op::Variable: return with;
    case Op::Pow: return pow(substitute(e.lhs(), with), e.value());
    default: break;
  }
  if (is_unary(e.op())) return unary(e.op(), substitute(e.lhs(), with));
  return binary(e.op(), substitute(e.lhs(), with), substitute(e.rhs(), with));
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
    return e;
  }

private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e = Expr::make_binary(Op::Add, e, term());
      } else if (accept('-')) {
        e = Expr::make_binary(Op::Sub, e, term());
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary_expr();
    for (;;) {
      if (accept('*')) {
        e = Expr::make_binary(Op::Mul, e, unary_expr());
      } else if (accept('/')) {
        e = Expr::make_binary(Op::Div, e, unary_expr());
      } else {
        return e;
      }
    }
  }

  Expr unary_expr() {
    if (accept('-')) return Expr::make_unary(Op::Neg, unary_expr());
    return power();
  }

  Expr power() {
    Expr base = atom();
    skip_ws();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t exp_pos = pos_;
    Expr exponent = unary_expr();
    if (contains_variable(exponent)) throw ParseError("exponent must not depend on x", exp_pos);
    double value = 0;
    try {
      value = evaluate(exponent, 0.0);
    } catch (const DomainError& err) {
      throw ParseError(std::string("exponent is undefined: ") + err.what(), exp_pos);
    }
    return Expr::make_pow(base, value);
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "x") return Expr::make_variable();
      static constexpr Op kFuncs[] = {Op::Exp, Op::Log, Op::Sqrt, Op::Sin, Op::Cos, Op::Abs, Op::Sign};
      for (Op f : kFuncs) {
        if (name == function_name(f)) {
          expect('(');
          Expr arg = expr();
          expect(')');
          return Expr::make_unary(f, arg);
        }
      }
      throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) throw ParseError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        // "2exp(x)" is not a number followed by an exponent.
        pos_ = save;
      }
    }
    const std::string literal(text_.substr(start, pos_ - start));
    return Expr::make_constant(std::stod(literal));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse(std::string_view text) { return detail::Parser(text).parse(); }

}  // namespace lgasym
