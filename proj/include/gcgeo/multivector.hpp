#pragma once

#include <vector>

#include "gcgeo/jet.hpp"
#include "gcgeo/types.hpp"

namespace gcgeo {

// Coefficient-ring glue so the same graded algebra backs numeric mixed
// forms (R = cplx) and expression-tree form fields (R = JetScalar).
template <class R>
struct RingTraits;

template <>
struct RingTraits<cplx> {
  static cplx zero() { return cplx(0.0); }
  static bool is_zero(const cplx& x) { return x == cplx(0.0); }
};

template <>
struct RingTraits<JetScalar> {
  static JetScalar zero() { return JetScalar(); }
  static bool is_zero(const JetScalar& x) { return x.is_zero(); }
};

// Element of the full exterior algebra over an m-dimensional (complexified)
// coordinate frame, mixed degree. Multi-indices are bitmasks: bit j set
// means the basis covector e^{j} occurs; coefficients are stored densely
// over all 2^m masks. Desk scale (m <= 8) by design.
template <class R>
class Multivector {
 public:
  Multivector() : m_(0), c_(1, RingTraits<R>::zero()) {}
  explicit Multivector(int m) : m_(m), c_(size_t(1) << m, RingTraits<R>::zero()) {
    if (m < 0 || m > 16) throw std::invalid_argument("Multivector: bad dimension");
  }

  int dim() const { return m_; }
  size_t mask_count() const { return c_.size(); }

  const R& operator[](size_t mask) const { return c_[mask]; }
  R& operator[](size_t mask) { return c_[mask]; }

  static Multivector scalar(int m, R v) {
    Multivector r(m);
    r.c_[0] = std::move(v);
    return r;
  }

  // e^{j0} ^ e^{j1} ^ ... with unit coefficient; indices must be distinct.
  static Multivector basis(int m, std::initializer_list<int> js, R coeff) {
    Multivector r(m);
    size_t mask = 0;
    int sign = 1;
    // insertion sort with sign tracking so unsorted index lists work
    std::vector<int> v(js);
    for (size_t a = 0; a < v.size(); ++a)
      for (size_t b = a + 1; b < v.size(); ++b) {
        if (v[a] == v[b]) return r;  // repeated index: zero
        if (v[a] > v[b]) {
          std::swap(v[a], v[b]);
          sign = -sign;
        }
      }
    for (int j : v) mask |= size_t(1) << j;
    r.c_[mask] = sign > 0 ? coeff : neg(coeff);
    return r;
  }

  bool structurally_zero() const {
    for (const auto& x : c_)
      if (!RingTraits<R>::is_zero(x)) return false;
    return true;
  }

  Multivector degree_part(int k) const {
    Multivector r(m_);
    for (size_t mask = 0; mask < c_.size(); ++mask)
      if (popcount(mask) == k) r.c_[mask] = c_[mask];
    return r;
  }

  int max_degree() const {
    int d = -1;
    for (size_t mask = 0; mask < c_.size(); ++mask)
      if (!RingTraits<R>::is_zero(c_[mask])) d = std::max(d, popcount(mask));
    return d;
  }

  bool is_homogeneous(int k) const {
    for (size_t mask = 0; mask < c_.size(); ++mask)
      if (!RingTraits<R>::is_zero(c_[mask]) && popcount(mask) != k) return false;
    return true;
  }

  static int popcount(size_t mask) { return __builtin_popcountll(mask); }

  // Koszul sign of e^I ^ e^J for disjoint masks: (-1)^{# of pairs (i in I, j in J) with i > j}.
  static int wedge_sign(size_t maskI, size_t maskJ) {
    int swaps = 0;
    for (size_t j = maskJ; j; j &= j - 1) {
      const int bit = __builtin_ctzll(j);
      swaps += popcount(maskI >> (bit + 1));
    }
    return (swaps & 1) ? -1 : 1;
  }

 private:
  static R neg(const R& x) { return RingTraits<R>::zero() - x; }

  int m_;
  std::vector<R> c_;
};

template <class R>
Multivector<R> operator+(const Multivector<R>& a, const Multivector<R>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("Multivector: dimension mismatch");
  Multivector<R> r(a.dim());
  for (size_t mask = 0; mask < r.mask_count(); ++mask) r[mask] = a[mask] + b[mask];
  return r;
}

template <class R>
Multivector<R> operator-(const Multivector<R>& a, const Multivector<R>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("Multivector: dimension mismatch");
  Multivector<R> r(a.dim());
  for (size_t mask = 0; mask < r.mask_count(); ++mask) r[mask] = a[mask] - b[mask];
  return r;
}

template <class R>
Multivector<R> operator-(const Multivector<R>& a) {
  Multivector<R> r(a.dim());
  for (size_t mask = 0; mask < r.mask_count(); ++mask)
    r[mask] = RingTraits<R>::zero() - a[mask];
  return r;
}

template <class R, class S>
Multivector<R> operator*(const S& s, const Multivector<R>& a) {
  Multivector<R> r(a.dim());
  for (size_t mask = 0; mask < r.mask_count(); ++mask) r[mask] = s * a[mask];
  return r;
}

template <class R>
Multivector<R> wedge(const Multivector<R>& a, const Multivector<R>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("wedge: dimension mismatch");
  Multivector<R> r(a.dim());
  for (size_t i = 0; i < a.mask_count(); ++i) {
    if (RingTraits<R>::is_zero(a[i])) continue;
    for (size_t j = 0; j < b.mask_count(); ++j) {
      if (i & j) continue;
      if (RingTraits<R>::is_zero(b[j])) continue;
      const int sign = Multivector<R>::wedge_sign(i, j);
      R term = a[i] * b[j];
      if (sign < 0) term = RingTraits<R>::zero() - term;
      r[i | j] = r[i | j] + term;
    }
  }
  return r;
}

// Interior product with the vector X = sum_j X_j d/dx_j.
template <class R, class V>
Multivector<R> interior(const V& X, const Multivector<R>& a) {
  Multivector<R> r(a.dim());
  for (size_t mask = 0; mask < a.mask_count(); ++mask) {
    if (RingTraits<R>::is_zero(a[mask])) continue;
    int pos = 0;
    for (size_t rest = mask; rest; rest &= rest - 1, ++pos) {
      const int bit = __builtin_ctzll(rest);
      if (RingTraits<R>::is_zero(X[bit])) continue;
      R term = X[bit] * a[mask];
      if (pos & 1) term = RingTraits<R>::zero() - term;
      const size_t target = mask & ~(size_t(1) << bit);
      r[target] = r[target] + term;
    }
  }
  return r;
}

// Clifford action of X + xi: (X + xi) . a = i_X a + xi ^ a.
template <class R, class V>
Multivector<R> clifford(const V& X, const V& xi, const Multivector<R>& a) {
  const int m = a.dim();
  Multivector<R> one_form(m);
  for (int j = 0; j < m; ++j) one_form[size_t(1) << j] = xi[j];
  return interior(X, a) + wedge(one_form, a);
}

}  // namespace gcgeo
