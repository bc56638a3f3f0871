#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace fharm::expr {

/// Second-order dual number: value plus first and second derivative with
/// respect to the single free variable. Used to evaluate configured
/// expressions together with exact derivatives.
struct Dual2 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

Dual2 operator+(const Dual2& a, const Dual2& b);
Dual2 operator-(const Dual2& a, const Dual2& b);
Dual2 operator-(const Dual2& a);
Dual2 operator*(const Dual2& a, const Dual2& b);
Dual2 operator/(const Dual2& a, const Dual2& b);
Dual2 dexp(const Dual2& a);
Dual2 dlog(const Dual2& a);
Dual2 dsinh(const Dual2& a);
Dual2 dcosh(const Dual2& a);
Dual2 dpow(const Dual2& a, const Dual2& b);

struct Node;

/// One-variable arithmetic expression over +, -, *, /, ^, exp, sinh, cosh,
/// numeric literals and the constants pi and e. The variable name defaults
/// to "r"; profiles use "t".
class Expression {
 public:
  static Expression parse(std::string_view src, std::string_view var = "r");

  double operator()(double x) const;
  Dual2 eval2(double x) const;

  const std::string& source() const { return src_; }

 private:
  Expression(std::shared_ptr<const Node> root, std::string src);

  std::shared_ptr<const Node> root_;
  std::string src_;
};

}  // namespace fharm::expr
