#include "core/expression.hpp"

#include <cctype>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace wkam {

namespace {

enum class Op {
  kConst,
  kVarX,
  kVarY,
  kVarI,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kPow,  // rhs restricted to a constant subtree
  kSin,
  kCos,
  kTan,
  kSqrt,
  kExp,
  kLog,
  kAbs,
};

}  // namespace

struct Expression::Node {
  Op op = Op::kConst;
  double value = 0.0;  // kConst only
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make_const(double v) {
  auto n = std::make_shared<Expression::Node>();
  n->op = Op::kConst;
  n->value = v;
  return n;
}

NodePtr make_node(Op op, NodePtr a, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

double eval_node(const Expression::Node& n, double x, double y, int comp) {
  switch (n.op) {
    case Op::kConst: return n.value;
    case Op::kVarX: return x;
    case Op::kVarY: return y;
    case Op::kVarI: return static_cast<double>(comp);
    case Op::kAdd: return eval_node(*n.a, x, y, comp) + eval_node(*n.b, x, y, comp);
    case Op::kSub: return eval_node(*n.a, x, y, comp) - eval_node(*n.b, x, y, comp);
    case Op::kMul: return eval_node(*n.a, x, y, comp) * eval_node(*n.b, x, y, comp);
    case Op::kDiv: return eval_node(*n.a, x, y, comp) / eval_node(*n.b, x, y, comp);
    case Op::kNeg: return -eval_node(*n.a, x, y, comp);
    case Op::kPow: return std::pow(eval_node(*n.a, x, y, comp), n.b->value);
    case Op::kSin: return std::sin(eval_node(*n.a, x, y, comp));
    case Op::kCos: return std::cos(eval_node(*n.a, x, y, comp));
    case Op::kTan: return std::tan(eval_node(*n.a, x, y, comp));
    case Op::kSqrt: return std::sqrt(eval_node(*n.a, x, y, comp));
    case Op::kExp: return std::exp(eval_node(*n.a, x, y, comp));
    case Op::kLog: return std::log(eval_node(*n.a, x, y, comp));
    case Op::kAbs: return std::abs(eval_node(*n.a, x, y, comp));
  }
  return 0.0;
}

bool is_const_zero(const NodePtr& n) { return n->op == Op::kConst && n->value == 0.0; }
bool is_const_one(const NodePtr& n) { return n->op == Op::kConst && n->value == 1.0; }

NodePtr simplified_add(NodePtr a, NodePtr b) {
  if (is_const_zero(a)) return b;
  if (is_const_zero(b)) return a;
  return make_node(Op::kAdd, std::move(a), std::move(b));
}

NodePtr simplified_sub(NodePtr a, NodePtr b) {
  if (is_const_zero(b)) return a;
  if (is_const_zero(a)) return make_node(Op::kNeg, std::move(b));
  return make_node(Op::kSub, std::move(a), std::move(b));
}

NodePtr simplified_mul(NodePtr a, NodePtr b) {
  if (is_const_zero(a) || is_const_zero(b)) return make_const(0.0);
  if (is_const_one(a)) return b;
  if (is_const_one(b)) return a;
  return make_node(Op::kMul, std::move(a), std::move(b));
}

NodePtr diff_node(const NodePtr& n, int axis);

NodePtr chain(const NodePtr& outer_derivative, const NodePtr& inner, int axis) {
  return simplified_mul(outer_derivative, diff_node(inner, axis));
}

NodePtr diff_node(const NodePtr& n, int axis) {
  switch (n->op) {
    case Op::kConst:
    case Op::kVarI:
      return make_const(0.0);
    case Op::kVarX: return make_const(axis == 0 ? 1.0 : 0.0);
    case Op::kVarY: return make_const(axis == 1 ? 1.0 : 0.0);
    case Op::kAdd: return simplified_add(diff_node(n->a, axis), diff_node(n->b, axis));
    case Op::kSub: return simplified_sub(diff_node(n->a, axis), diff_node(n->b, axis));
    case Op::kMul:
      return simplified_add(simplified_mul(diff_node(n->a, axis), n->b),
                            simplified_mul(n->a, diff_node(n->b, axis)));
    case Op::kDiv:
      // (a/b)' = a'/b - a b'/b^2
      return simplified_sub(
          make_node(Op::kDiv, diff_node(n->a, axis), n->b),
          make_node(Op::kDiv, simplified_mul(n->a, diff_node(n->b, axis)),
                    make_node(Op::kPow, n->b, make_const(2.0))));
    case Op::kNeg: return make_node(Op::kNeg, diff_node(n->a, axis));
    case Op::kPow: {
      const double e = n->b->value;
      if (e == 0.0) return make_const(0.0);
      NodePtr outer = simplified_mul(
          make_const(e), e == 1.0 ? make_const(1.0)
                                  : make_node(Op::kPow, n->a, make_const(e - 1.0)));
      if (e == 1.0) outer = make_const(e);
      return chain(outer, n->a, axis);
    }
    case Op::kSin: return chain(make_node(Op::kCos, n->a), n->a, axis);
    case Op::kCos: return chain(make_node(Op::kNeg, make_node(Op::kSin, n->a)), n->a, axis);
    case Op::kTan: {
      // 1/cos^2
      NodePtr sec2 = make_node(Op::kDiv, make_const(1.0),
                               make_node(Op::kPow, make_node(Op::kCos, n->a), make_const(2.0)));
      return chain(sec2, n->a, axis);
    }
    case Op::kSqrt: {
      NodePtr half = make_node(Op::kDiv, make_const(0.5), make_node(Op::kSqrt, n->a));
      return chain(half, n->a, axis);
    }
    case Op::kExp: return chain(make_node(Op::kExp, n->a), n->a, axis);
    case Op::kLog: return chain(make_node(Op::kDiv, make_const(1.0), n->a), n->a, axis);
    case Op::kAbs: {
      // sign(a) * a'; the derivative at a kink is reported as 0
      NodePtr sign = make_node(Op::kDiv, n->a, make_node(Op::kAbs, n->a));
      return chain(sign, n->a, axis);
    }
  }
  return make_const(0.0);
}

bool is_const_tree(const NodePtr& n) {
  switch (n->op) {
    case Op::kConst: return true;
    case Op::kVarX:
    case Op::kVarY:
    case Op::kVarI: return false;
    default:
      if (n->a && !is_const_tree(n->a)) return false;
      if (n->b && !is_const_tree(n->b)) return false;
      return true;
  }
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr run() {
    NodePtr root = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression error at position " + std::to_string(pos_) +
                                ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (consume('+')) {
        lhs = make_node(Op::kAdd, lhs, parse_term());
      } else if (consume('-')) {
        lhs = make_node(Op::kSub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (consume('*')) {
        lhs = make_node(Op::kMul, lhs, parse_factor());
      } else if (consume('/')) {
        lhs = make_node(Op::kDiv, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_factor() {
    NodePtr base = parse_unary();
    if (consume('^')) {
      NodePtr expo = parse_factor();  // right associative
      return make_pow(base, expo);
    }
    return base;
  }

  NodePtr make_pow(NodePtr base, NodePtr expo) {
    if (!is_const_tree(expo)) fail("exponent must be a constant expression");
    return make_node(Op::kPow, std::move(base), make_const(eval_node(*expo, 0, 0, 1)));
  }

  NodePtr parse_unary() {
    if (consume('-')) return make_node(Op::kNeg, parse_unary());
    if (consume('+')) return parse_unary();
    return parse_primary();
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    if (consume('(')) {
      NodePtr inner = parse_expr();
      if (!consume(')')) fail("missing ')'");
      return inner;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
            text_[pos_] == 'e' || text_[pos_] == 'E' ||
            ((text_[pos_] == '+' || text_[pos_] == '-') && pos_ > start &&
             (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
      ++pos_;
    }
    try {
      size_t used = 0;
      double v = std::stod(text_.substr(start, pos_ - start), &used);
      if (used != pos_ - start) fail("malformed number");
      return make_const(v);
    } catch (const std::exception&) {
      fail("malformed number");
    }
  }

  NodePtr parse_ident() {
    size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_')) {
      ++pos_;
    }
    std::string name = text_.substr(start, pos_ - start);
    if (name == "x" || name == "x0") return make_node(Op::kVarX, nullptr);
    if (name == "y" || name == "x1") return make_node(Op::kVarY, nullptr);
    if (name == "i") return make_node(Op::kVarI, nullptr);
    if (name == "pi") return make_const(M_PI);
    // function call
    static const std::pair<const char*, Op> kFns[] = {
        {"sin", Op::kSin}, {"cos", Op::kCos}, {"tan", Op::kTan},  {"sqrt", Op::kSqrt},
        {"exp", Op::kExp}, {"log", Op::kLog}, {"abs", Op::kAbs},
    };
    for (const auto& [fname, op] : kFns) {
      if (name == fname) {
        if (!consume('(')) fail("expected '(' after " + name);
        NodePtr arg = parse_expr();
        if (!consume(')')) fail("missing ')' after " + name + " argument");
        return make_node(op, arg);
      }
    }
    if (name == "pow") {
      if (!consume('(')) fail("expected '(' after pow");
      NodePtr base = parse_expr();
      if (!consume(',')) fail("pow expects two arguments");
      NodePtr expo = parse_expr();
      if (!consume(')')) fail("missing ')' after pow arguments");
      return make_pow(base, expo);
    }
    fail("unknown identifier '" + name + "'");
  }

  const std::string& text_;
  size_t pos_ = 0;
};

std::string render_derivative_name(const std::string& base, int axis) {
  return "d" + std::string(axis == 0 ? "x" : "y") + "(" + base + ")";
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Parser p(text);
  return Expression(p.run(), text);
}

double Expression::eval(double x, double y, int comp) const {
  return eval_node(*root_, x, y, comp);
}

Expression Expression::derivative(int axis) const {
  return Expression(diff_node(root_, axis), render_derivative_name(text_, axis));
}

}  // namespace wkam
