#include "gcgeo/split_linear.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace gcgeo {

Mat orthonormal_span(const Mat& a, double rtol, double abs_floor) {
  if (a.cols() == 0) return Mat(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = std::max(sv.size() ? sv(0) * rtol : 0.0, abs_floor);
  int r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  return svd.matrixU().leftCols(r);
}

int numeric_rank(const Mat& a, double rtol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() ? sv(0) * rtol : 0.0;
  int r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  return r;
}

Mat nullspace(const Mat& a, double rtol) {
  if (a.rows() == 0) return Mat::Identity(a.cols(), a.cols());
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() ? sv(0) * rtol : 0.0;
  int r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  return svd.matrixV().rightCols(a.cols() - r);
}

double subspace_gap(const Mat& u1, const Mat& u2) {
  if (u1.cols() != u2.cols()) return 1.0;
  if (u1.cols() == 0) return 0.0;
  // residual of projecting u2 onto span(u1); its spectral norm is the sine
  // of the largest principal angle
  Mat resid = u2 - u1 * (u1.adjoint() * u2);
  Eigen::JacobiSVD<Mat> svd(resid);
  return svd.singularValues()(0);
}

Mat subspace_intersection(const Mat& u1, const Mat& u2, double rtol) {
  if (u1.cols() == 0 || u2.cols() == 0) return Mat(u1.rows(), 0);
  Mat stacked(u1.rows(), u1.cols() + u2.cols());
  stacked << u1, -u2;
  Mat n = nullspace(stacked, rtol);
  if (n.cols() == 0) return Mat(u1.rows(), 0);
  return orthonormal_span(u1 * n.topRows(u1.cols()), rtol);
}

// ---------------------------------------------------------------------------

SplitSpace::SplitSpace(int dim, Mat pairing) : dim_(dim), q_(std::move(pairing)) {
  if (dim < 0 || dim % 2 != 0)
    throw std::invalid_argument("SplitSpace: dimension must be even and nonnegative");
  if (q_.rows() != dim || q_.cols() != dim)
    throw std::invalid_argument("SplitSpace: pairing shape mismatch");
  if (dim == 0) {  // the trivial fibre, target of relations collapsing a space
    real_ = true;
    return;
  }
  if ((q_ - q_.transpose()).cwiseAbs().maxCoeff() > kEntryTol)
    throw std::invalid_argument("SplitSpace: pairing is not symmetric");
  Eigen::JacobiSVD<Mat> svd(q_);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= kRankTol * sv(0))
    throw std::invalid_argument("SplitSpace: pairing is degenerate");
  real_ = q_.imag().cwiseAbs().maxCoeff() <= kEntryTol;
  if (real_) {
    Eigen::SelfAdjointEigenSolver<RMat> es(q_.real());
    int pos = 0, neg = 0;
    for (int k = 0; k < dim; ++k) (es.eigenvalues()(k) > 0 ? pos : neg)++;
    if (pos != neg)
      throw std::invalid_argument("SplitSpace: real pairing does not have split signature");
  }
}

SplitSpace SplitSpace::standard(int m) {
  Mat q = Mat::Zero(2 * m, 2 * m);
  q.topRightCorner(m, m) = 0.5 * Mat::Identity(m, m);
  q.bottomLeftCorner(m, m) = 0.5 * Mat::Identity(m, m);
  return SplitSpace(2 * m, q);
}

SplitSpace SplitSpace::opposite() const { return SplitSpace(dim_, -q_); }

SplitSpace SplitSpace::product(const SplitSpace& w, const SplitSpace& v_opposite) {
  Mat q = Mat::Zero(w.dim() + v_opposite.dim(), w.dim() + v_opposite.dim());
  q.topLeftCorner(w.dim(), w.dim()) = w.pairing();
  q.bottomRightCorner(v_opposite.dim(), v_opposite.dim()) = v_opposite.pairing();
  return SplitSpace(w.dim() + v_opposite.dim(), q);
}

// ---------------------------------------------------------------------------

Subspace Subspace::from_span(int ambient_dim, const Mat& span_cols) {
  if (span_cols.rows() != ambient_dim)
    throw std::invalid_argument("Subspace: ambient dimension mismatch");
  Mat u = orthonormal_span(span_cols);
  if (u.cols() != span_cols.cols())
    throw std::invalid_argument("Subspace: spanning set is linearly dependent");
  return Subspace(ambient_dim, std::move(u));
}

Subspace Subspace::from_orthonormal(int ambient_dim, Mat basis) {
  return Subspace(ambient_dim, std::move(basis));
}

Subspace Subspace::zero(int ambient_dim) { return Subspace(ambient_dim, Mat(ambient_dim, 0)); }

bool Subspace::same_as(const Subspace& other, double tol) const {
  return dim() == other.dim() && gap_to(other) < tol;
}

Subspace Subspace::intersect(const Subspace& other) const {
  return from_orthonormal(ambient_, subspace_intersection(basis_, other.basis_));
}

double Subspace::isotropy_residual(const SplitSpace& v) const {
  if (dim() == 0) return 0.0;
  Mat gram = basis_.transpose() * v.pairing() * basis_;
  return gram.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

Subspace orthogonal_complement(const SplitSpace& v, const Subspace& s) {
  if (s.ambient_dim() != v.dim())
    throw std::invalid_argument("orthogonal_complement: ambient mismatch");
  if (s.dim() == 0) return Subspace::from_orthonormal(v.dim(), Mat::Identity(v.dim(), v.dim()));
  // <x, s_j> = 0  <=>  (S^T Q) x = 0
  return Subspace::from_orthonormal(v.dim(), nullspace(s.basis().transpose() * v.pairing()));
}

Reduction reduce(const SplitSpace& v, const Subspace& k) {
  const double iso = k.isotropy_residual(v);
  if (iso > kEntryTol)
    throw std::invalid_argument("reduce: K is not isotropic (residual " + std::to_string(iso) +
                                ")");
  Subspace kperp = orthogonal_complement(v, k);
  // complement of K inside K-perp (Euclidean-orthogonal, for stability);
  // the absolute floor discards directions that lie in K up to roundoff
  Mat w;
  if (k.dim() == 0) {
    w = kperp.basis();
  } else {
    Mat proj = kperp.basis() - k.basis() * (k.basis().adjoint() * kperp.basis());
    w = orthonormal_span(proj, kRankTol, 1e-8);
  }
  const int r = v.dim() - 2 * k.dim();
  if (w.cols() != r) throw std::runtime_error("reduce: unexpected complement dimension");
  Mat induced = w.transpose() * v.pairing() * w;
  // projection: coordinates in [W K] of a vector of K-perp, W-block
  Mat wk(v.dim(), w.cols() + k.dim());
  wk << w, k.basis();
  Mat pinv = wk.completeOrthogonalDecomposition().pseudoInverse();
  Reduction out{SplitSpace(r, std::move(induced)), pinv.topRows(w.cols()), w, kperp};
  return out;
}

// ---------------------------------------------------------------------------

DiracRelation::DiracRelation(SplitSpace source, SplitSpace target, Subspace graph)
    : source_(std::move(source)), target_(std::move(target)), graph_(std::move(graph)) {
  if (graph_.ambient_dim() != source_.dim() + target_.dim())
    throw std::invalid_argument("DiracRelation: graph ambient mismatch");
  if (2 * graph_.dim() != source_.dim() + target_.dim())
    throw std::invalid_argument("DiracRelation: graph is not maximal");
  SplitSpace prod = SplitSpace::product(target_, source_.opposite());
  const double iso = graph_.isotropy_residual(prod);
  if (iso > 1e-7)
    throw std::invalid_argument("DiracRelation: graph is not isotropic (residual " +
                                std::to_string(iso) + ")");
}

DiracRelation DiracRelation::identity(const SplitSpace& v) {
  Mat g(2 * v.dim(), v.dim());
  g << Mat::Identity(v.dim(), v.dim()), Mat::Identity(v.dim(), v.dim());
  return DiracRelation(v, v, Subspace::from_span(2 * v.dim(), g));
}

DiracRelation DiracRelation::from_isometry(const SplitSpace& v, const SplitSpace& w,
                                           const Mat& phi) {
  Mat g(v.dim() + w.dim(), v.dim());
  g << phi, Mat::Identity(v.dim(), v.dim());
  return DiracRelation(v, w, Subspace::from_span(v.dim() + w.dim(), g));
}

DiracRelation compose(const DiracRelation& d2, const DiracRelation& d1) {
  if (d1.target().dim() != d2.source().dim() ||
      (d1.target().pairing() - d2.source().pairing()).cwiseAbs().maxCoeff() > kEntryTol)
    throw std::invalid_argument("compose: middle spaces do not match");
  const int nu = d1.source().dim(), nv = d1.target().dim(), nw = d2.target().dim();
  const Mat& g1 = d1.graph().basis();  // (nv+nu) x k1, rows: V then U
  const Mat& g2 = d2.graph().basis();  // (nw+nv) x k2, rows: W then V
  // match the middle V factors: V-block of g2 minus V-block of g1
  Mat match(nv, g2.cols() + g1.cols());
  match << g2.bottomRows(nv), -g1.topRows(nv);
  Mat n = nullspace(match);
  Mat wu(nw + nu, n.cols());
  wu.topRows(nw) = g2.topRows(nw) * n.topRows(g2.cols());
  wu.bottomRows(nu) = g1.bottomRows(nu) * n.bottomRows(g1.cols());
  Mat span = orthonormal_span(wu);
  if (2 * span.cols() != nw + nu)
    throw std::runtime_error("compose: composite graph has unexpected dimension");
  return DiracRelation(d1.source(), d2.target(),
                       Subspace::from_orthonormal(nw + nu, std::move(span)));
}

std::pair<Subspace, Subspace> relation_kernels(const DiracRelation& d) {
  const int nv = d.source().dim(), nw = d.target().dim();
  const Mat& g = d.graph().basis();
  // left: graph vectors with vanishing W-block, projected to V
  Mat nl = nullspace(g.topRows(nw));
  Subspace left = Subspace::from_orthonormal(nv, orthonormal_span(g.bottomRows(nv) * nl));
  Mat nr = nullspace(g.bottomRows(nv));
  Subspace right = Subspace::from_orthonormal(nw, orthonormal_span(g.topRows(nw) * nr));
  return {left, right};
}

bool is_brane_invariant(const Subspace& l, const SplitSpace& v, const Mat& j, double tol) {
  if (2 * l.dim() != v.dim() || l.isotropy_residual(v) > 1e-7)
    throw std::invalid_argument("is_brane_invariant: L is not maximal isotropic");
  return l.mapped(j).same_as(l, tol);
}

}  // namespace gcgeo
