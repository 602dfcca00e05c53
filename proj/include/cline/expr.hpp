#pragma once

// Closed-form expression pieces for weights and nonlinearities, e.g.
// "2*sin(2*x) - max(0, sin(x))". Parsed once into a postfix program and
// evaluated with a fixed-size value stack; polynomial expressions are
// differentiated symbolically.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cline {

class Expr {
 public:
  Expr() = default;

  // Parses `src` as an expression in the single free variable `var`.
  // Throws Error(validation) with a position-annotated message on bad input.
  static Expr parse(const std::string& src, const std::string& var = "x");

  double operator()(double x) const;
  bool empty() const { return nodes_.empty(); }
  const std::string& source() const { return src_; }

  // True when the expression is built only from +, -, *, constants, the
  // variable, integer powers, and division by constants.
  bool is_polynomial() const;

  // Symbolic derivative; available only for polynomial expressions.
  std::optional<Expr> derivative() const;

 private:
  enum class Op : std::uint8_t {
    constant, variable, add, sub, mul, div, neg, pow,
    sin, cos, tan, exp, log, sqrt, abs, min2, max2, atan, sinh, cosh, tanh,
  };
  struct Node {
    Op op;
    double value = 0.0;  // constant payload
    int a = -1, b = -1;  // child indices
  };

  int add_node(Node n);
  int diff(int idx, std::vector<Node>& out) const;  // returns node in `out`
  void compile();

  std::vector<Node> nodes_;  // tree, root = last
  std::string src_;

  // Flattened postfix program for evaluation.
  struct Instr {
    Op op;
    double value;
  };
  std::vector<Instr> prog_;

  friend class ExprParser;
};

}  // namespace cline
