#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "gcgeo/types.hpp"

namespace gcgeo {

// Order-2 jet of a complex-valued function of m real coordinates:
// value, gradient and (symmetric) Hessian, propagated exactly.
struct Jet {
  cplx v{0.0};
  Vec g;
  Mat h;

  Jet() = default;
  explicit Jet(int m) : v(0.0), g(Vec::Zero(m)), h(Mat::Zero(m, m)) {}
  static Jet constant(int m, cplx c) {
    Jet j(m);
    j.v = c;
    return j;
  }
  static Jet coordinate(int m, int i, double x) {
    Jet j(m);
    j.v = x;
    j.g(i) = 1.0;
    return j;
  }
  int dim() const { return static_cast<int>(g.size()); }
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator-(const Jet& a);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet jet_exp(const Jet& a);
Jet jet_log(const Jet& a);   // principal branch
Jet jet_sqrt(const Jet& a);  // principal branch
Jet jet_conj(const Jet& a);  // coordinates are real, so conj commutes with d
Jet jet_abs2(const Jet& a);  // a * conj(a)

enum class Op {
  kConst,
  kCoord,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kExp,
  kLog,
  kSqrt,
  kConj,
  kAbs2,
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

// Immutable expression DAG node. Shared subtrees are evaluated once per
// point via the memo in JetContext.
struct ExprNode {
  Op op;
  cplx value{0.0};  // kConst
  int index{-1};    // kCoord
  ExprPtr a, b;
};

// Per-point evaluation context: memoizes node -> jet so expression DAGs
// with shared subtrees stay cheap. Evaluated roots are pinned so that node
// addresses cannot be recycled while their memo entries are live.
class JetContext {
 public:
  JetContext(const RVec& point) : p_(point) {}
  const RVec& point() const { return p_; }
  int dim() const { return static_cast<int>(p_.size()); }
  std::unordered_map<const ExprNode*, Jet>& memo() { return memo_; }
  void pin(ExprPtr root) { pins_.push_back(std::move(root)); }

 private:
  RVec p_;
  std::unordered_map<const ExprNode*, Jet> memo_;
  std::vector<ExprPtr> pins_;
};

// A scalar field given by a closed expression tree over the real
// coordinates of a chart, evaluable to order-2 jets at a point.
// Default-constructed JetScalar is the structural zero.
class JetScalar {
 public:
  JetScalar() = default;
  explicit JetScalar(ExprPtr n) : node_(std::move(n)) {}

  static JetScalar constant(cplx c);
  static JetScalar coordinate(int i);

  bool is_zero() const;
  bool is_constant() const { return !node_ || node_->op == Op::kConst; }
  cplx constant_value() const;
  const ExprPtr& node() const { return node_; }

  Jet jet(JetContext& ctx) const;
  Jet jet(const RVec& p) const {
    JetContext ctx(p);
    return jet(ctx);
  }
  cplx value(JetContext& ctx) const { return jet(ctx).v; }
  cplx value(const RVec& p) const { return jet(p).v; }

  std::string str() const;  // serialized form (scene grammar)

 private:
  ExprPtr node_;  // null means identically zero
};

JetScalar operator+(const JetScalar& a, const JetScalar& b);
JetScalar operator-(const JetScalar& a, const JetScalar& b);
JetScalar operator-(const JetScalar& a);
JetScalar operator*(const JetScalar& a, const JetScalar& b);
JetScalar operator/(const JetScalar& a, const JetScalar& b);
inline JetScalar operator+(const JetScalar& a, cplx c) { return a + JetScalar::constant(c); }
inline JetScalar operator+(cplx c, const JetScalar& a) { return JetScalar::constant(c) + a; }
inline JetScalar operator-(const JetScalar& a, cplx c) { return a - JetScalar::constant(c); }
inline JetScalar operator-(cplx c, const JetScalar& a) { return JetScalar::constant(c) - a; }
inline JetScalar operator*(const JetScalar& a, cplx c) { return a * JetScalar::constant(c); }
inline JetScalar operator*(cplx c, const JetScalar& a) { return JetScalar::constant(c) * a; }
inline JetScalar operator/(const JetScalar& a, cplx c) { return a / JetScalar::constant(c); }
inline JetScalar operator/(cplx c, const JetScalar& a) { return JetScalar::constant(c) / a; }
inline JetScalar operator*(double c, const JetScalar& a) { return JetScalar::constant(c) * a; }
inline JetScalar operator*(const JetScalar& a, double c) { return a * JetScalar::constant(c); }

JetScalar js_exp(const JetScalar& a);
JetScalar js_log(const JetScalar& a);
JetScalar js_sqrt(const JetScalar& a);
JetScalar js_conj(const JetScalar& a);
JetScalar js_abs2(const JetScalar& a);
inline JetScalar js_re(const JetScalar& a) { return (a + js_conj(a)) * cplx(0.5); }
inline JetScalar js_im(const JetScalar& a) { return (a - js_conj(a)) * (cplx(0.0, -0.5)); }

// Exact symbolic partial derivative d/dx_i (coordinates are real).
JetScalar diff(const JetScalar& a, int i);

// Substitute coordinate i by repl[i] (an expression over other coordinates).
JetScalar substitute(const JetScalar& a, const std::vector<JetScalar>& repl);

// Scene-grammar parser. Coordinate names map to indices; "i" is the
// imaginary unit; functions: exp, log, sqrt, conj, abs2, re, im.
JetScalar parse_expr(const std::string& text, const std::vector<std::string>& coord_names);

}  // namespace gcgeo
