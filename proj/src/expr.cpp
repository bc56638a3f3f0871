#include "fharm/expr.hpp"

#include <cctype>
#include <cmath>
#include <vector>

#include "fharm/errors.hpp"

namespace fharm::expr {

Dual2 operator+(const Dual2& a, const Dual2& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}

Dual2 operator-(const Dual2& a, const Dual2& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}

Dual2 operator-(const Dual2& a) { return {-a.v, -a.d1, -a.d2}; }

Dual2 operator*(const Dual2& a, const Dual2& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1,
          a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

static Dual2 reciprocal(const Dual2& b) {
  const double iv = 1.0 / b.v;
  const double d1 = -b.d1 * iv * iv;
  const double d2 = (2.0 * b.d1 * b.d1 - b.v * b.d2) * iv * iv * iv;
  return {iv, d1, d2};
}

Dual2 operator/(const Dual2& a, const Dual2& b) { return a * reciprocal(b); }

// Composition rule for an analytic f: (f(a), f'(a) a1, f'(a) a2 + f''(a) a1^2).
static Dual2 compose(const Dual2& a, double f, double fp, double fpp) {
  return {f, fp * a.d1, fp * a.d2 + fpp * a.d1 * a.d1};
}

Dual2 dexp(const Dual2& a) {
  const double e = std::exp(a.v);
  return compose(a, e, e, e);
}

Dual2 dlog(const Dual2& a) {
  if (a.v <= 0.0)
    throw Error(ErrorKind::numeric, "log of non-positive value in expression");
  return compose(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
}

Dual2 dsinh(const Dual2& a) {
  const double s = std::sinh(a.v), c = std::cosh(a.v);
  return compose(a, s, c, s);
}

Dual2 dcosh(const Dual2& a) {
  const double s = std::sinh(a.v), c = std::cosh(a.v);
  return compose(a, c, s, c);
}

static Dual2 ipow(Dual2 base, long n) {
  if (n < 0) return reciprocal(ipow(base, -n));
  Dual2 acc{1.0, 0.0, 0.0};
  while (n > 0) {
    if (n & 1) acc = acc * base;
    base = base * base;
    n >>= 1;
  }
  return acc;
}

Dual2 dpow(const Dual2& a, const Dual2& b) {
  const bool const_exp = b.d1 == 0.0 && b.d2 == 0.0;
  if (const_exp) {
    const double n = b.v;
    // Integer exponents keep negative bases legal and exact.
    if (n == std::floor(n) && std::abs(n) <= 64.0)
      return ipow(a, static_cast<long>(n));
  }
  if (a.v <= 0.0)
    throw Error(ErrorKind::numeric,
                "non-integer power of non-positive base in expression");
  return dexp(b * dlog(a));
}

namespace {

enum class Op { constant, variable, add, sub, mul, div, pow, neg, fexp, fsinh, fcosh };

}  // namespace

struct Node {
  Op op;
  double value = 0.0;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr leaf(Op op, double v = 0.0) {
  return std::make_shared<Node>(Node{op, v, nullptr, nullptr});
}

NodePtr branch(Op op, NodePtr l, NodePtr r = nullptr) {
  return std::make_shared<Node>(Node{op, 0.0, std::move(l), std::move(r)});
}

class Parser {
 public:
  Parser(std::string_view src, std::string_view var) : src_(src), var_(var) {}

  NodePtr run() {
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::config, "expression parse error at position " +
                                       std::to_string(pos_) + ": " + what +
                                       " in \"" + std::string(src_) + "\"");
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  NodePtr parse_sum() {
    NodePtr e = parse_product();
    for (;;) {
      if (eat('+')) e = branch(Op::add, e, parse_product());
      else if (eat('-')) e = branch(Op::sub, e, parse_product());
      else return e;
    }
  }

  NodePtr parse_product() {
    NodePtr e = parse_unary();
    for (;;) {
      if (eat('*')) e = branch(Op::mul, e, parse_unary());
      else if (eat('/')) e = branch(Op::div, e, parse_unary());
      else return e;
    }
  }

  NodePtr parse_unary() {
    if (eat('-')) return branch(Op::neg, parse_unary());
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (eat('^')) return branch(Op::pow, base, parse_unary());  // right-assoc
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    if (eat('(')) {
      NodePtr e = parse_sum();
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    const char* begin = src_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return leaf(Op::constant, v);
  }

  NodePtr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == var_) return leaf(Op::variable);
    if (name == "pi") return leaf(Op::constant, 3.14159265358979323846);
    if (name == "e") return leaf(Op::constant, 2.71828182845904523536);
    Op fn;
    if (name == "exp") fn = Op::fexp;
    else if (name == "sinh") fn = Op::fsinh;
    else if (name == "cosh") fn = Op::fcosh;
    else fail("unknown identifier '" + std::string(name) + "'");
    if (!eat('(')) fail("expected '(' after function name");
    NodePtr arg = parse_sum();
    if (!eat(')')) fail("missing ')'");
    return branch(fn, arg);
  }

  std::string_view src_;
  std::string_view var_;
  std::size_t pos_ = 0;
};

Dual2 eval_node(const Node& n, const Dual2& x) {
  switch (n.op) {
    case Op::constant: return {n.value, 0.0, 0.0};
    case Op::variable: return x;
    case Op::add: return eval_node(*n.lhs, x) + eval_node(*n.rhs, x);
    case Op::sub: return eval_node(*n.lhs, x) - eval_node(*n.rhs, x);
    case Op::mul: return eval_node(*n.lhs, x) * eval_node(*n.rhs, x);
    case Op::div: return eval_node(*n.lhs, x) / eval_node(*n.rhs, x);
    case Op::pow: return dpow(eval_node(*n.lhs, x), eval_node(*n.rhs, x));
    case Op::neg: return -eval_node(*n.lhs, x);
    case Op::fexp: return dexp(eval_node(*n.lhs, x));
    case Op::fsinh: return dsinh(eval_node(*n.lhs, x));
    case Op::fcosh: return dcosh(eval_node(*n.lhs, x));
  }
  throw Error(ErrorKind::numeric, "corrupt expression node");
}

}  // namespace

Expression::Expression(std::shared_ptr<const Node> root, std::string src)
    : root_(std::move(root)), src_(std::move(src)) {}

Expression Expression::parse(std::string_view src, std::string_view var) {
  Parser p(src, var);
  return Expression(p.run(), std::string(src));
}

double Expression::operator()(double x) const {
  return eval_node(*root_, Dual2{x, 0.0, 0.0}).v;
}

Dual2 Expression::eval2(double x) const {
  return eval_node(*root_, Dual2{x, 1.0, 0.0});
}

}  // namespace fharm::expr
