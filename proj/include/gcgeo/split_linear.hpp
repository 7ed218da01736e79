#pragma once

#include <utility>

#include "gcgeo/types.hpp"

namespace gcgeo {

// ---------------------------------------------------------------------------
// dense linear algebra helpers (SVD-backed, relative threshold kRankTol)

// Orthonormal basis (standard Hermitian product) of the column span.
// abs_floor is an absolute singular-value cutoff for inputs with a known
// unit scale (projections of orthonormal columns may be numerically zero).
Mat orthonormal_span(const Mat& a, double rtol = kRankTol, double abs_floor = 0.0);
int numeric_rank(const Mat& a, double rtol = kRankTol);
// Orthonormal basis of { x : a x = 0 }.
Mat nullspace(const Mat& a, double rtol = kRankTol);
// Sine of the largest principal angle between equal-dimensional spans
// (computed from residuals, so it resolves angles down to machine eps).
// Returns 1 if dimensions differ.
double subspace_gap(const Mat& u1, const Mat& u2);
Mat subspace_intersection(const Mat& u1, const Mat& u2, double rtol = kRankTol);

// ---------------------------------------------------------------------------

// Finite-dimensional space with a symmetric nondegenerate bilinear pairing
// of split signature (the pointwise fibre of a Courant algebroid). The
// pairing is bilinear also over C: transposes, never adjoints.
class SplitSpace {
 public:
  SplitSpace(int dim, Mat pairing);

  // V + V* with pairing <(X,xi),(Y,eta)> = (xi.Y + eta.X)/2.
  static SplitSpace standard(int m);
  // Same space with the pairing negated (the "opposite" space).
  SplitSpace opposite() const;
  // Orthogonal product of two spaces (used for relation graphs W x V-bar).
  static SplitSpace product(const SplitSpace& w, const SplitSpace& v_opposite);

  int dim() const { return dim_; }
  const Mat& pairing() const { return q_; }
  bool is_real() const { return real_; }

  cplx pair(const Vec& a, const Vec& b) const { return (a.transpose() * q_ * b)(0, 0); }

 private:
  int dim_;
  Mat q_;
  bool real_;
};

// Subspace stored as an orthonormalized spanning set (with respect to the
// auxiliary Euclidean/Hermitian product, not the split pairing).
class Subspace {
 public:
  // Orthonormalizes the given spanning set; throws if the columns are
  // linearly dependent (rank below column count).
  static Subspace from_span(int ambient_dim, const Mat& span_cols);
  // Trusted orthonormal basis (internal fast path).
  static Subspace from_orthonormal(int ambient_dim, Mat basis);
  static Subspace zero(int ambient_dim);

  int ambient_dim() const { return ambient_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Mat& basis() const { return basis_; }

  Subspace conjugated() const { return from_orthonormal(ambient_, basis_.conjugate()); }
  // Image under an invertible linear map.
  Subspace mapped(const Mat& a) const { return from_span(ambient_, a * basis_); }

  bool same_as(const Subspace& other, double tol = kAngleTol) const;
  double gap_to(const Subspace& other) const { return subspace_gap(basis_, other.basis_); }
  Subspace intersect(const Subspace& other) const;

  // Max |<u_i, u_j>| over the pairing Gram matrix; 0 for the zero subspace.
  double isotropy_residual(const SplitSpace& v) const;

 private:
  Subspace(int ambient, Mat basis) : ambient_(ambient), basis_(std::move(basis)) {}
  int ambient_;
  Mat basis_;  // ambient_ x dim, orthonormal columns
};

// span{ v : <v, s> = 0 for all s in S }.
Subspace orthogonal_complement(const SplitSpace& v, const Subspace& s);

struct Reduction {
  SplitSpace reduced;   // K-perp / K with the induced pairing
  Mat projection;       // (dim reduced) x (ambient): coordinates along K of
                        // a vector in K-perp, in the chosen complement basis
  Mat complement_basis; // ambient x (dim reduced): section of the quotient
  Subspace k_perp;
};

// V // K := K-perp / K for isotropic K; the induced pairing is again
// split and nondegenerate.
Reduction reduce(const SplitSpace& v, const Subspace& k);

// Maximal isotropic subspace of W x V-bar, i.e. a linear relation V -> W
// compatible with the pairings. Graph vectors are (w, v) with the target
// block first.
class DiracRelation {
 public:
  DiracRelation(SplitSpace source, SplitSpace target, Subspace graph);

  static DiracRelation identity(const SplitSpace& v);
  // Graph of an invertible pairing-isometry phi : V -> W.
  static DiracRelation from_isometry(const SplitSpace& v, const SplitSpace& w, const Mat& phi);

  const SplitSpace& source() const { return source_; }
  const SplitSpace& target() const { return target_; }
  const Subspace& graph() const { return graph_; }

 private:
  SplitSpace source_, target_;
  Subspace graph_;
};

// Relation composition: d2 after d1. The result is again maximal isotropic.
DiracRelation compose(const DiracRelation& d2, const DiracRelation& d1);

// left = { v in V : (0, v) in graph }, right = { w in W : (w, 0) in graph }.
std::pair<Subspace, Subspace> relation_kernels(const DiracRelation& d);

// True iff J maps the maximal isotropic L onto itself (principal angles
// below tol). Throws if L is not maximal isotropic.
bool is_brane_invariant(const Subspace& l, const SplitSpace& v, const Mat& j,
                        double tol = kAngleTol);

}  // namespace gcgeo
