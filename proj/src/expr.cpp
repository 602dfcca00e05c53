#include "cline/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <map>

#include "cline/errors.hpp"

namespace cline {

namespace {

struct FnEntry {
  const char* name;
  int arity;
};

const std::map<std::string, std::pair<int, int>>& function_table() {
  // name -> (op as int, arity)
  using Op = int;
  static const std::map<std::string, std::pair<Op, int>> table = {
      {"sin", {8, 1}},  {"cos", {9, 1}},  {"tan", {10, 1}}, {"exp", {11, 1}},
      {"log", {12, 1}}, {"sqrt", {13, 1}}, {"abs", {14, 1}}, {"min", {15, 2}},
      {"max", {16, 2}}, {"atan", {17, 1}}, {"sinh", {18, 1}}, {"cosh", {19, 1}},
      {"tanh", {20, 1}},
  };
  return table;
}

}  // namespace

class ExprParser {
 public:
  ExprParser(const std::string& src, const std::string& var) : src_(src), var_(var) {}

  Expr run() {
    Expr e;
    e.src_ = src_;
    nodes_ = &e.nodes_;
    pos_ = 0;
    int root = parse_sum();
    skip_ws();
    if (pos_ != src_.size())
      fail(Errc::validation, "expression: trailing input at position " + std::to_string(pos_) +
                                 " in '" + src_ + "'");
    (void)root;  // root is nodes_->back() by construction
    e.compile();
    return e;
  }

 private:
  using Op = Expr::Op;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool consume(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void err(const std::string& what) {
    fail(Errc::validation,
         "expression: " + what + " at position " + std::to_string(pos_) + " in '" + src_ + "'");
  }

  int push(Op op, double v = 0.0, int a = -1, int b = -1) {
    nodes_->push_back({op, v, a, b});
    return static_cast<int>(nodes_->size()) - 1;
  }

  int parse_sum() {
    int lhs = parse_term();
    for (;;) {
      if (consume('+'))
        lhs = push(Op::add, 0, lhs, parse_term());
      else if (consume('-'))
        lhs = push(Op::sub, 0, lhs, parse_term());
      else
        return lhs;
    }
  }

  int parse_term() {
    int lhs = parse_unary();
    for (;;) {
      if (consume('*'))
        lhs = push(Op::mul, 0, lhs, parse_unary());
      else if (consume('/'))
        lhs = push(Op::div, 0, lhs, parse_unary());
      else
        return lhs;
    }
  }

  int parse_unary() {
    if (consume('-')) return push(Op::neg, 0, parse_unary());
    if (consume('+')) return parse_unary();
    return parse_power();
  }

  int parse_power() {
    int base = parse_primary();
    if (consume('^')) {
      // right-associative; exponent may itself be signed
      int expo = parse_unary();
      return push(Op::pow, 0, base, expo);
    }
    return base;
  }

  int parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) err("unexpected end of input");
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      int e = parse_sum();
      if (!consume(')')) err("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    err(std::string("unexpected character '") + c + "'");
  }

  int parse_number() {
    size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    return push(Op::constant, std::stod(src_.substr(start, pos_ - start)));
  }

  int parse_ident() {
    size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                  src_[pos_] == '_'))
      ++pos_;
    std::string name = src_.substr(start, pos_ - start);
    if (name == var_) return push(Op::variable);
    if (name == "pi") return push(Op::constant, M_PI);
    if (name == "e") return push(Op::constant, M_E);
    auto it = function_table().find(name);
    if (it == function_table().end()) err("unknown identifier '" + name + "'");
    if (!consume('(')) err("expected '(' after '" + name + "'");
    int a = parse_sum();
    int b = -1;
    if (it->second.second == 2) {
      if (!consume(',')) err("'" + name + "' expects two arguments");
      b = parse_sum();
    }
    if (!consume(')')) err("expected ')'");
    return push(static_cast<Op>(it->second.first), 0, a, b);
  }

  const std::string& src_;
  const std::string& var_;
  std::vector<Expr::Node>* nodes_ = nullptr;
  size_t pos_ = 0;
};

Expr Expr::parse(const std::string& src, const std::string& var) {
  return ExprParser(src, var).run();
}

int Expr::add_node(Node n) {
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size()) - 1;
}

void Expr::compile() {
  prog_.clear();
  // post-order flatten
  std::vector<std::pair<int, bool>> stack{{static_cast<int>(nodes_.size()) - 1, false}};
  while (!stack.empty()) {
    auto [idx, visited] = stack.back();
    stack.pop_back();
    const Node& n = nodes_[idx];
    if (visited || (n.a < 0 && n.b < 0)) {
      prog_.push_back({n.op, n.value});
      continue;
    }
    stack.push_back({idx, true});
    if (n.b >= 0) stack.push_back({n.b, false});
    if (n.a >= 0) stack.push_back({n.a, false});
  }
}

double Expr::operator()(double x) const {
  double st[64];
  int sp = 0;
  for (const Instr& in : prog_) {
    switch (in.op) {
      case Op::constant: st[sp++] = in.value; break;
      case Op::variable: st[sp++] = x; break;
      case Op::add: sp--; st[sp - 1] += st[sp]; break;
      case Op::sub: sp--; st[sp - 1] -= st[sp]; break;
      case Op::mul: sp--; st[sp - 1] *= st[sp]; break;
      case Op::div: sp--; st[sp - 1] /= st[sp]; break;
      case Op::neg: st[sp - 1] = -st[sp - 1]; break;
      case Op::pow: sp--; st[sp - 1] = std::pow(st[sp - 1], st[sp]); break;
      case Op::sin: st[sp - 1] = std::sin(st[sp - 1]); break;
      case Op::cos: st[sp - 1] = std::cos(st[sp - 1]); break;
      case Op::tan: st[sp - 1] = std::tan(st[sp - 1]); break;
      case Op::exp: st[sp - 1] = std::exp(st[sp - 1]); break;
      case Op::log: st[sp - 1] = std::log(st[sp - 1]); break;
      case Op::sqrt: st[sp - 1] = std::sqrt(st[sp - 1]); break;
      case Op::abs: st[sp - 1] = std::abs(st[sp - 1]); break;
      case Op::min2: sp--; st[sp - 1] = std::min(st[sp - 1], st[sp]); break;
      case Op::max2: sp--; st[sp - 1] = std::max(st[sp - 1], st[sp]); break;
      case Op::atan: st[sp - 1] = std::atan(st[sp - 1]); break;
      case Op::sinh: st[sp - 1] = std::sinh(st[sp - 1]); break;
      case Op::cosh: st[sp - 1] = std::cosh(st[sp - 1]); break;
      case Op::tanh: st[sp - 1] = std::tanh(st[sp - 1]); break;
    }
  }
  return st[0];
}

namespace {

bool is_nonneg_int(double v) { return v >= 0.0 && v == std::floor(v) && v < 64; }

}  // namespace

bool Expr::is_polynomial() const {
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    switch (n.op) {
      case Op::constant:
      case Op::variable:
      case Op::add:
      case Op::sub:
      case Op::mul:
      case Op::neg:
        break;
      case Op::div:
        if (nodes_[n.b].op != Op::constant) return false;
        break;
      case Op::pow:
        if (nodes_[n.b].op != Op::constant || !is_nonneg_int(nodes_[n.b].value)) return false;
        break;
      default:
        return false;
    }
  }
  return true;
}

int Expr::diff(int idx, std::vector<Node>& out) const {
  auto emit = [&out](Node n) {
    out.push_back(n);
    return static_cast<int>(out.size()) - 1;
  };
  auto clone = [&](int src, auto&& self) -> int {
    const Node& n = nodes_[src];
    Node c = n;
    if (n.a >= 0) c.a = self(n.a, self);
    if (n.b >= 0) c.b = self(n.b, self);
    out.push_back(c);
    return static_cast<int>(out.size()) - 1;
  };
  const Node& n = nodes_[idx];
  switch (n.op) {
    case Op::constant: return emit({Op::constant, 0.0});
    case Op::variable: return emit({Op::constant, 1.0});
    case Op::add: {
      int da = diff(n.a, out), db = diff(n.b, out);
      return emit({Op::add, 0, da, db});
    }
    case Op::sub: {
      int da = diff(n.a, out), db = diff(n.b, out);
      return emit({Op::sub, 0, da, db});
    }
    case Op::neg: return emit({Op::neg, 0, diff(n.a, out)});
    case Op::mul: {
      int da = diff(n.a, out);
      int bb = clone(n.b, clone);
      int t1 = emit({Op::mul, 0, da, bb});
      int aa = clone(n.a, clone);
      int db = diff(n.b, out);
      int t2 = emit({Op::mul, 0, aa, db});
      return emit({Op::add, 0, t1, t2});
    }
    case Op::div: {  // divisor is a constant by is_polynomial()
      int da = diff(n.a, out);
      int bb = clone(n.b, clone);
      return emit({Op::div, 0, da, bb});
    }
    case Op::pow: {  // d/dx a^k = k a^(k-1) a'
      double k = nodes_[n.b].value;
      int aa = clone(n.a, clone);
      int km1 = emit({Op::constant, k - 1.0});
      int p = emit({Op::pow, 0, aa, km1});
      int kc = emit({Op::constant, k});
      int t = emit({Op::mul, 0, kc, p});
      int da = diff(n.a, out);
      return emit({Op::mul, 0, t, da});
    }
    default:
      fail(Errc::validation, "derivative: non-polynomial node");
  }
}

std::optional<Expr> Expr::derivative() const {
  if (nodes_.empty() || !is_polynomial()) return std::nullopt;
  Expr d;
  d.src_ = "d/dx(" + src_ + ")";
  diff(static_cast<int>(nodes_.size()) - 1, d.nodes_);
  d.compile();
  return d;
}

}  // namespace cline
