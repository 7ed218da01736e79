#include "gcgeo/jet.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace gcgeo {

Jet operator+(const Jet& a, const Jet& b) {
  Jet r = a;
  r.v += b.v;
  r.g += b.g;
  r.h += b.h;
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet r = a;
  r.v -= b.v;
  r.g -= b.g;
  r.h -= b.h;
  return r;
}

Jet operator-(const Jet& a) {
  Jet r = a;
  r.v = -r.v;
  r.g = -r.g;
  r.h = -r.h;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r(a.dim());
  r.v = a.v * b.v;
  r.g = a.g * b.v + b.g * a.v;
  r.h = a.h * b.v + b.h * a.v + a.g * b.g.transpose() + b.g * a.g.transpose();
  return r;
}

static Jet jet_inv(const Jet& b) {
  Jet r(b.dim());
  const cplx iv = 1.0 / b.v;
  r.v = iv;
  r.g = -b.g * (iv * iv);
  r.h = -b.h * (iv * iv) + (b.g * b.g.transpose()) * (2.0 * iv * iv * iv);
  return r;
}

Jet operator/(const Jet& a, const Jet& b) { return a * jet_inv(b); }

Jet jet_exp(const Jet& a) {
  Jet r(a.dim());
  r.v = std::exp(a.v);
  r.g = r.v * a.g;
  r.h = r.v * (a.h + a.g * a.g.transpose());
  return r;
}

Jet jet_log(const Jet& a) {
  Jet r(a.dim());
  r.v = std::log(a.v);
  const cplx iv = 1.0 / a.v;
  r.g = a.g * iv;
  r.h = a.h * iv - (a.g * a.g.transpose()) * (iv * iv);
  return r;
}

Jet jet_sqrt(const Jet& a) {
  Jet r(a.dim());
  r.v = std::sqrt(a.v);
  const cplx i2 = 1.0 / (2.0 * r.v);
  r.g = a.g * i2;
  r.h = a.h * i2 - (a.g * a.g.transpose()) / (4.0 * r.v * r.v * r.v);
  return r;
}

Jet jet_conj(const Jet& a) {
  Jet r(a.dim());
  r.v = std::conj(a.v);
  r.g = a.g.conjugate();
  r.h = a.h.conjugate();
  return r;
}

Jet jet_abs2(const Jet& a) { return a * jet_conj(a); }

// ---------------------------------------------------------------------------
// expression building (with light constant folding)

static ExprPtr make_node(Op op, ExprPtr a = nullptr, ExprPtr b = nullptr, cplx v = 0.0,
                         int idx = -1) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->value = v;
  n->index = idx;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

JetScalar JetScalar::constant(cplx c) {
  if (c == cplx(0.0)) return JetScalar();
  return JetScalar(make_node(Op::kConst, nullptr, nullptr, c));
}

JetScalar JetScalar::coordinate(int i) {
  return JetScalar(make_node(Op::kCoord, nullptr, nullptr, 0.0, i));
}

bool JetScalar::is_zero() const {
  return !node_ || (node_->op == Op::kConst && node_->value == cplx(0.0));
}

cplx JetScalar::constant_value() const {
  if (!node_) return 0.0;
  if (node_->op != Op::kConst) throw std::logic_error("JetScalar: not a constant");
  return node_->value;
}

JetScalar operator+(const JetScalar& a, const JetScalar& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_constant() && b.is_constant())
    return JetScalar::constant(a.constant_value() + b.constant_value());
  return JetScalar(make_node(Op::kAdd, a.node(), b.node()));
}

JetScalar operator-(const JetScalar& a, const JetScalar& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  if (a.is_constant() && b.is_constant())
    return JetScalar::constant(a.constant_value() - b.constant_value());
  return JetScalar(make_node(Op::kSub, a.node(), b.node()));
}

JetScalar operator-(const JetScalar& a) {
  if (a.is_zero()) return a;
  if (a.is_constant()) return JetScalar::constant(-a.constant_value());
  if (a.node()->op == Op::kNeg) return JetScalar(a.node()->a);
  return JetScalar(make_node(Op::kNeg, a.node()));
}

JetScalar operator*(const JetScalar& a, const JetScalar& b) {
  if (a.is_zero() || b.is_zero()) return JetScalar();
  if (a.is_constant() && b.is_constant())
    return JetScalar::constant(a.constant_value() * b.constant_value());
  if (a.is_constant() && a.constant_value() == cplx(1.0)) return b;
  if (b.is_constant() && b.constant_value() == cplx(1.0)) return a;
  return JetScalar(make_node(Op::kMul, a.node(), b.node()));
}

JetScalar operator/(const JetScalar& a, const JetScalar& b) {
  if (b.is_zero()) throw std::invalid_argument("JetScalar: division by structural zero");
  if (a.is_zero()) return a;
  if (a.is_constant() && b.is_constant())
    return JetScalar::constant(a.constant_value() / b.constant_value());
  if (b.is_constant() && b.constant_value() == cplx(1.0)) return a;
  return JetScalar(make_node(Op::kDiv, a.node(), b.node()));
}

JetScalar js_exp(const JetScalar& a) {
  if (a.is_zero()) return JetScalar::constant(1.0);
  if (a.is_constant()) return JetScalar::constant(std::exp(a.constant_value()));
  return JetScalar(make_node(Op::kExp, a.node()));
}

JetScalar js_log(const JetScalar& a) {
  if (a.is_constant()) return JetScalar::constant(std::log(a.constant_value()));
  return JetScalar(make_node(Op::kLog, a.node()));
}

JetScalar js_sqrt(const JetScalar& a) {
  if (a.is_constant()) return JetScalar::constant(std::sqrt(a.constant_value()));
  return JetScalar(make_node(Op::kSqrt, a.node()));
}

JetScalar js_conj(const JetScalar& a) {
  if (a.is_zero()) return a;
  if (a.is_constant()) return JetScalar::constant(std::conj(a.constant_value()));
  if (a.node()->op == Op::kConj) return JetScalar(a.node()->a);
  return JetScalar(make_node(Op::kConj, a.node()));
}

JetScalar js_abs2(const JetScalar& a) {
  if (a.is_zero()) return a;
  if (a.is_constant()) return JetScalar::constant(std::norm(a.constant_value()));
  return JetScalar(make_node(Op::kAbs2, a.node()));
}

// ---------------------------------------------------------------------------
// evaluation

static Jet eval_node(const ExprNode* n, JetContext& ctx) {
  auto it = ctx.memo().find(n);
  if (it != ctx.memo().end()) return it->second;
  const int m = ctx.dim();
  Jet r;
  switch (n->op) {
    case Op::kConst:
      r = Jet::constant(m, n->value);
      break;
    case Op::kCoord:
      if (n->index < 0 || n->index >= m)
        throw std::invalid_argument("JetScalar: coordinate index out of range");
      r = Jet::coordinate(m, n->index, ctx.point()(n->index));
      break;
    case Op::kAdd:
      r = eval_node(n->a.get(), ctx) + eval_node(n->b.get(), ctx);
      break;
    case Op::kSub:
      r = eval_node(n->a.get(), ctx) - eval_node(n->b.get(), ctx);
      break;
    case Op::kMul:
      r = eval_node(n->a.get(), ctx) * eval_node(n->b.get(), ctx);
      break;
    case Op::kDiv:
      r = eval_node(n->a.get(), ctx) / eval_node(n->b.get(), ctx);
      break;
    case Op::kNeg:
      r = -eval_node(n->a.get(), ctx);
      break;
    case Op::kExp:
      r = jet_exp(eval_node(n->a.get(), ctx));
      break;
    case Op::kLog:
      r = jet_log(eval_node(n->a.get(), ctx));
      break;
    case Op::kSqrt:
      r = jet_sqrt(eval_node(n->a.get(), ctx));
      break;
    case Op::kConj:
      r = jet_conj(eval_node(n->a.get(), ctx));
      break;
    case Op::kAbs2:
      r = jet_abs2(eval_node(n->a.get(), ctx));
      break;
  }
  ctx.memo().emplace(n, r);
  return r;
}

Jet JetScalar::jet(JetContext& ctx) const {
  if (!node_) return Jet(ctx.dim());
  ctx.pin(node_);
  return eval_node(node_.get(), ctx);
}

// ---------------------------------------------------------------------------
// symbolic differentiation

namespace {
struct DiffCache {
  std::unordered_map<const ExprNode*, JetScalar> memo;
  int i;
};

JetScalar diff_node(const ExprPtr& node, DiffCache& c) {
  if (!node) return JetScalar();
  auto it = c.memo.find(node.get());
  if (it != c.memo.end()) return it->second;
  JetScalar a(node->a), b(node->b);
  JetScalar r;
  switch (node->op) {
    case Op::kConst:
      break;
    case Op::kCoord:
      r = node->index == c.i ? JetScalar::constant(1.0) : JetScalar();
      break;
    case Op::kAdd:
      r = diff_node(node->a, c) + diff_node(node->b, c);
      break;
    case Op::kSub:
      r = diff_node(node->a, c) - diff_node(node->b, c);
      break;
    case Op::kMul:
      r = diff_node(node->a, c) * b + a * diff_node(node->b, c);
      break;
    case Op::kDiv:
      r = diff_node(node->a, c) / b - a * diff_node(node->b, c) / (b * b);
      break;
    case Op::kNeg:
      r = -diff_node(node->a, c);
      break;
    case Op::kExp:
      r = JetScalar(node) * diff_node(node->a, c);
      break;
    case Op::kLog:
      r = diff_node(node->a, c) / a;
      break;
    case Op::kSqrt:
      r = diff_node(node->a, c) / (cplx(2.0) * JetScalar(node));
      break;
    case Op::kConj:
      r = js_conj(diff_node(node->a, c));
      break;
    case Op::kAbs2:
      r = js_conj(a) * diff_node(node->a, c) + a * js_conj(diff_node(node->a, c));
      break;
  }
  c.memo.emplace(node.get(), r);
  return r;
}
}  // namespace

JetScalar diff(const JetScalar& a, int i) {
  DiffCache c;
  c.i = i;
  return diff_node(a.node(), c);
}

// ---------------------------------------------------------------------------
// substitution

namespace {
JetScalar subst_node(const ExprPtr& node, const std::vector<JetScalar>& repl,
                     std::unordered_map<const ExprNode*, JetScalar>& memo) {
  if (!node) return JetScalar();
  auto it = memo.find(node.get());
  if (it != memo.end()) return it->second;
  JetScalar r;
  switch (node->op) {
    case Op::kConst:
      r = JetScalar(node);
      break;
    case Op::kCoord:
      if (node->index < 0 || node->index >= static_cast<int>(repl.size()))
        throw std::invalid_argument("substitute: coordinate index out of range");
      r = repl[node->index];
      break;
    case Op::kAdd:
      r = subst_node(node->a, repl, memo) + subst_node(node->b, repl, memo);
      break;
    case Op::kSub:
      r = subst_node(node->a, repl, memo) - subst_node(node->b, repl, memo);
      break;
    case Op::kMul:
      r = subst_node(node->a, repl, memo) * subst_node(node->b, repl, memo);
      break;
    case Op::kDiv:
      r = subst_node(node->a, repl, memo) / subst_node(node->b, repl, memo);
      break;
    case Op::kNeg:
      r = -subst_node(node->a, repl, memo);
      break;
    case Op::kExp:
      r = js_exp(subst_node(node->a, repl, memo));
      break;
    case Op::kLog:
      r = js_log(subst_node(node->a, repl, memo));
      break;
    case Op::kSqrt:
      r = js_sqrt(subst_node(node->a, repl, memo));
      break;
    case Op::kConj:
      r = js_conj(subst_node(node->a, repl, memo));
      break;
    case Op::kAbs2:
      r = js_abs2(subst_node(node->a, repl, memo));
      break;
  }
  memo.emplace(node.get(), r);
  return r;
}
}  // namespace

JetScalar substitute(const JetScalar& a, const std::vector<JetScalar>& repl) {
  std::unordered_map<const ExprNode*, JetScalar> memo;
  return subst_node(a.node(), repl, memo);
}

// ---------------------------------------------------------------------------
// printing

namespace {
void print_node(const ExprPtr& node, std::ostream& os) {
  if (!node) {
    os << "0";
    return;
  }
  switch (node->op) {
    case Op::kConst: {
      cplx v = node->value;
      if (v.imag() == 0.0) {
        os << v.real();
      } else if (v.real() == 0.0) {
        os << "(" << v.imag() << "*i)";
      } else {
        os << "(" << v.real() << (v.imag() >= 0 ? "+" : "-") << std::abs(v.imag()) << "*i)";
      }
      break;
    }
    case Op::kCoord:
      os << "$" << node->index;
      break;
    case Op::kAdd:
      os << "(";
      print_node(node->a, os);
      os << "+";
      print_node(node->b, os);
      os << ")";
      break;
    case Op::kSub:
      os << "(";
      print_node(node->a, os);
      os << "-";
      print_node(node->b, os);
      os << ")";
      break;
    case Op::kMul:
      os << "(";
      print_node(node->a, os);
      os << "*";
      print_node(node->b, os);
      os << ")";
      break;
    case Op::kDiv:
      os << "(";
      print_node(node->a, os);
      os << "/";
      print_node(node->b, os);
      os << ")";
      break;
    case Op::kNeg:
      os << "(-";
      print_node(node->a, os);
      os << ")";
      break;
    case Op::kExp:
      os << "exp(";
      print_node(node->a, os);
      os << ")";
      break;
    case Op::kLog:
      os << "log(";
      print_node(node->a, os);
      os << ")";
      break;
    case Op::kSqrt:
      os << "sqrt(";
      print_node(node->a, os);
      os << ")";
      break;
    case Op::kConj:
      os << "conj(";
      print_node(node->a, os);
      os << ")";
      break;
    case Op::kAbs2:
      os << "abs2(";
      print_node(node->a, os);
      os << ")";
      break;
  }
}
}  // namespace

std::string JetScalar::str() const {
  std::ostringstream os;
  print_node(node_, os);
  return os.str();
}

// ---------------------------------------------------------------------------
// parser (recursive descent over the scene grammar)

namespace {
struct Parser {
  const std::string& s;
  size_t pos = 0;
  const std::vector<std::string>& names;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("expression parse error at position " + std::to_string(pos) +
                                ": " + msg + " in \"" + s + "\"");
  }

  JetScalar expr() {
    JetScalar r = term();
    for (;;) {
      skip();
      if (eat('+'))
        r = r + term();
      else if (eat('-'))
        r = r - term();
      else
        return r;
    }
  }

  JetScalar term() {
    JetScalar r = unary();
    for (;;) {
      skip();
      if (eat('*'))
        r = r * unary();
      else if (eat('/'))
        r = r / unary();
      else
        return r;
    }
  }

  JetScalar unary() {
    skip();
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return atom();
  }

  JetScalar atom() {
    skip();
    if (pos >= s.size()) fail("unexpected end");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      JetScalar r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t end = pos;
      while (end < s.size() &&
             (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.' ||
              s[end] == 'e' || s[end] == 'E' ||
              ((s[end] == '+' || s[end] == '-') && (s[end - 1] == 'e' || s[end - 1] == 'E'))))
        ++end;
      double v = std::stod(s.substr(pos, end - pos));
      pos = end;
      return JetScalar::constant(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      size_t end = pos;
      if (s[end] == '$') ++end;
      while (end < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_'))
        ++end;
      std::string name = s.substr(pos, end - pos);
      pos = end;
      skip();
      if (pos < s.size() && s[pos] == '(') {
        ++pos;
        JetScalar arg = expr();
        if (!eat(')')) fail("expected ')' after function argument");
        if (name == "exp") return js_exp(arg);
        if (name == "log") return js_log(arg);
        if (name == "sqrt") return js_sqrt(arg);
        if (name == "conj") return js_conj(arg);
        if (name == "abs2") return js_abs2(arg);
        if (name == "re") return js_re(arg);
        if (name == "im") return js_im(arg);
        fail("unknown function '" + name + "'");
      }
      if (name == "i") return JetScalar::constant(kI);
      if (name == "pi") return JetScalar::constant(3.14159265358979323846);
      if (name[0] == '$') {
        int idx = std::stoi(name.substr(1));
        return JetScalar::coordinate(idx);
      }
      for (size_t k = 0; k < names.size(); ++k)
        if (names[k] == name) return JetScalar::coordinate(static_cast<int>(k));
      fail("unknown identifier '" + name + "'");
    }
    fail("unexpected character");
  }
};
}  // namespace

JetScalar parse_expr(const std::string& text, const std::vector<std::string>& coord_names) {
  Parser p{text, 0, coord_names};
  JetScalar r = p.expr();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return r;
}

}  // namespace gcgeo
