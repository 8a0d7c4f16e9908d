#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wavectl::expr {

enum class NodeKind {
  kConstant,
  kVariable,
  kNeg,
  kSin,
  kCos,
  kExp,
  kLn,
  kAbs,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind;
  double constant = 0.0;  // kConstant
  int variable = 0;       // kVariable: index into the variable list
  NodePtr a, b;           // operands (b only for binary kinds)
};

NodePtr make_constant(double c);
NodePtr make_variable(int index);
NodePtr make_unary(NodeKind k, NodePtr a);
NodePtr make_binary(NodeKind k, NodePtr a, NodePtr b);

double eval(const Node& n, std::span<const double> vars);

// Symbolic derivative with respect to variable `var`. Constant folding keeps
// repeated differentiation from ballooning. abs() differentiates to the
// classical piecewise derivative (sign(u)·u'), which is what the numerics
// downstream expect away from the kink.
NodePtr diff(const NodePtr& n, int var);

// Recursive-descent parser. Grammar: + - * / ^ (right-associative), unary
// minus, sin/cos/exp/ln/abs, numeric literals, `pi`, and the variables passed
// in `vars`. Throws ParseError with a 1-based column on bad input.
NodePtr parse(std::string_view src, std::span<const std::string> vars);

}  // namespace wavectl::expr
