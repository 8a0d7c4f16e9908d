#include "wavectl/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "wavectl/errors.hpp"

namespace wavectl::expr {

NodePtr make_constant(double c) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kConstant;
  n->constant = c;
  return n;
}

NodePtr make_variable(int index) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kVariable;
  n->variable = index;
  return n;
}

NodePtr make_unary(NodeKind k, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  return n;
}

NodePtr make_binary(NodeKind k, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

double eval(const Node& n, std::span<const double> vars) {
  switch (n.kind) {
    case NodeKind::kConstant:
      return n.constant;
    case NodeKind::kVariable:
      return vars[static_cast<size_t>(n.variable)];
    case NodeKind::kNeg:
      return -eval(*n.a, vars);
    case NodeKind::kSin:
      return std::sin(eval(*n.a, vars));
    case NodeKind::kCos:
      return std::cos(eval(*n.a, vars));
    case NodeKind::kExp:
      return std::exp(eval(*n.a, vars));
    case NodeKind::kLn:
      return std::log(eval(*n.a, vars));
    case NodeKind::kAbs:
      return std::fabs(eval(*n.a, vars));
    case NodeKind::kAdd:
      return eval(*n.a, vars) + eval(*n.b, vars);
    case NodeKind::kSub:
      return eval(*n.a, vars) - eval(*n.b, vars);
    case NodeKind::kMul:
      return eval(*n.a, vars) * eval(*n.b, vars);
    case NodeKind::kDiv:
      return eval(*n.a, vars) / eval(*n.b, vars);
    case NodeKind::kPow:
      return std::pow(eval(*n.a, vars), eval(*n.b, vars));
  }
  return 0.0;
}

namespace {

bool is_const(const NodePtr& n, double v) {
  return n->kind == NodeKind::kConstant && n->constant == v;
}

bool is_const(const NodePtr& n) { return n->kind == NodeKind::kConstant; }

NodePtr fold_unary(NodeKind k, NodePtr a) {
  if (is_const(a)) {
    double v = a->constant;
    switch (k) {
      case NodeKind::kNeg: return make_constant(-v);
      case NodeKind::kSin: return make_constant(std::sin(v));
      case NodeKind::kCos: return make_constant(std::cos(v));
      case NodeKind::kExp: return make_constant(std::exp(v));
      case NodeKind::kLn:  return make_constant(std::log(v));
      case NodeKind::kAbs: return make_constant(std::fabs(v));
      default: break;
    }
  }
  return make_unary(k, std::move(a));
}

NodePtr fold_binary(NodeKind k, NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) {
    double x = a->constant, y = b->constant;
    switch (k) {
      case NodeKind::kAdd: return make_constant(x + y);
      case NodeKind::kSub: return make_constant(x - y);
      case NodeKind::kMul: return make_constant(x * y);
      case NodeKind::kDiv: return make_constant(x / y);
      case NodeKind::kPow: return make_constant(std::pow(x, y));
      default: break;
    }
  }
  switch (k) {
    case NodeKind::kAdd:
      if (is_const(a, 0.0)) return b;
      if (is_const(b, 0.0)) return a;
      break;
    case NodeKind::kSub:
      if (is_const(b, 0.0)) return a;
      if (is_const(a, 0.0)) return fold_unary(NodeKind::kNeg, std::move(b));
      break;
    case NodeKind::kMul:
      if (is_const(a, 0.0) || is_const(b, 0.0)) return make_constant(0.0);
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      break;
    case NodeKind::kDiv:
      if (is_const(a, 0.0)) return make_constant(0.0);
      if (is_const(b, 1.0)) return a;
      break;
    case NodeKind::kPow:
      if (is_const(b, 1.0)) return a;
      if (is_const(b, 0.0)) return make_constant(1.0);
      break;
    default:
      break;
  }
  return make_binary(k, std::move(a), std::move(b));
}

// sign(u) as a tree: u / |u|. Only reached by abs().
NodePtr sign_of(const NodePtr& u) {
  return fold_binary(NodeKind::kDiv, u, fold_unary(NodeKind::kAbs, u));
}

}  // namespace

NodePtr diff(const NodePtr& n, int var) {
  switch (n->kind) {
    case NodeKind::kConstant:
      return make_constant(0.0);
    case NodeKind::kVariable:
      return make_constant(n->variable == var ? 1.0 : 0.0);
    case NodeKind::kNeg:
      return fold_unary(NodeKind::kNeg, diff(n->a, var));
    case NodeKind::kSin:
      return fold_binary(NodeKind::kMul, fold_unary(NodeKind::kCos, n->a),
                         diff(n->a, var));
    case NodeKind::kCos:
      return fold_binary(
          NodeKind::kMul,
          fold_unary(NodeKind::kNeg, fold_unary(NodeKind::kSin, n->a)),
          diff(n->a, var));
    case NodeKind::kExp:
      return fold_binary(NodeKind::kMul, fold_unary(NodeKind::kExp, n->a),
                         diff(n->a, var));
    case NodeKind::kLn:
      return fold_binary(NodeKind::kDiv, diff(n->a, var), n->a);
    case NodeKind::kAbs:
      return fold_binary(NodeKind::kMul, sign_of(n->a), diff(n->a, var));
    case NodeKind::kAdd:
      return fold_binary(NodeKind::kAdd, diff(n->a, var), diff(n->b, var));
    case NodeKind::kSub:
      return fold_binary(NodeKind::kSub, diff(n->a, var), diff(n->b, var));
    case NodeKind::kMul:
      return fold_binary(
          NodeKind::kAdd, fold_binary(NodeKind::kMul, diff(n->a, var), n->b),
          fold_binary(NodeKind::kMul, n->a, diff(n->b, var)));
    case NodeKind::kDiv:
      // (a/b)' = a'/b - a b'/b^2
      return fold_binary(
          NodeKind::kSub, fold_binary(NodeKind::kDiv, diff(n->a, var), n->b),
          fold_binary(NodeKind::kDiv,
                      fold_binary(NodeKind::kMul, n->a, diff(n->b, var)),
                      fold_binary(NodeKind::kMul, n->b, n->b)));
    case NodeKind::kPow: {
      if (is_const(n->b)) {
        // Power rule keeps negative bases legal for constant exponents.
        double c = n->b->constant;
        return fold_binary(
            NodeKind::kMul, make_constant(c),
            fold_binary(NodeKind::kMul,
                        fold_binary(NodeKind::kPow, n->a,
                                    make_constant(c - 1.0)),
                        diff(n->a, var)));
      }
      // General a^b = exp(b ln a): (a^b)' = a^b (b' ln a + b a'/a).
      NodePtr term1 = fold_binary(NodeKind::kMul, diff(n->b, var),
                                  fold_unary(NodeKind::kLn, n->a));
      NodePtr term2 = fold_binary(
          NodeKind::kMul, n->b, fold_binary(NodeKind::kDiv, diff(n->a, var),
                                            n->a));
      return fold_binary(NodeKind::kMul, n,
                         fold_binary(NodeKind::kAdd, term1, term2));
    }
  }
  return make_constant(0.0);
}

namespace {

class Parser {
 public:
  Parser(std::string_view src, std::span<const std::string> vars)
      : src_(src), vars_(vars) {}

  NodePtr run() {
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, static_cast<int>(pos_) + 1);
  }

  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
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
    NodePtr e = parse_term();
    for (;;) {
      if (eat('+'))
        e = fold_binary(NodeKind::kAdd, e, parse_term());
      else if (eat('-'))
        e = fold_binary(NodeKind::kSub, e, parse_term());
      else
        return e;
    }
  }

  NodePtr parse_term() {
    NodePtr e = parse_unary();
    for (;;) {
      if (eat('*'))
        e = fold_binary(NodeKind::kMul, e, parse_unary());
      else if (eat('/'))
        e = fold_binary(NodeKind::kDiv, e, parse_unary());
      else
        return e;
    }
  }

  // Unary minus binds looser than ^, so -x^2 reads as -(x^2).
  NodePtr parse_unary() {
    if (eat('-')) return fold_unary(NodeKind::kNeg, parse_unary());
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (eat('^')) {
      // Right-associative; exponent may carry its own sign.
      return fold_binary(NodeKind::kPow, base, parse_unary());
    }
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_ident();
    if (eat('(')) {
      NodePtr e = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    size_t start = pos_;
    const char* begin = src_.data() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) {
      pos_ = start;
      fail("malformed number");
    }
    pos_ = start + static_cast<size_t>(end - begin);
    return make_constant(v);
  }

  NodePtr parse_ident() {
    size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '_'))
      ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    if (name == "pi") return make_constant(M_PI);
    for (size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return make_variable(static_cast<int>(i));

    NodeKind k;
    if (name == "sin")
      k = NodeKind::kSin;
    else if (name == "cos")
      k = NodeKind::kCos;
    else if (name == "exp")
      k = NodeKind::kExp;
    else if (name == "ln")
      k = NodeKind::kLn;
    else if (name == "abs")
      k = NodeKind::kAbs;
    else {
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    if (!eat('(')) fail("expected '(' after function name");
    NodePtr arg = parse_sum();
    if (!eat(')')) fail("expected ')'");
    return fold_unary(k, std::move(arg));
  }

  std::string_view src_;
  std::span<const std::string> vars_;
  size_t pos_ = 0;
};

}  // namespace

NodePtr parse(std::string_view src, std::span<const std::string> vars) {
  return Parser(src, vars).run();
}

}  // namespace wavectl::expr
