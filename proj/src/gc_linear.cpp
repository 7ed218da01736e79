#include "gcgeo/gc_linear.hpp"

#include <Eigen/LU>

namespace gcgeo {

namespace {
RMat split_pairing(int m) {
  RMat q = RMat::Zero(2 * m, 2 * m);
  q.topRightCorner(m, m) = 0.5 * RMat::Identity(m, m);
  q.bottomLeftCorner(m, m) = 0.5 * RMat::Identity(m, m);
  return q;
}
}  // namespace

double GCStructure::invariant_residual(int m, const RMat& j) {
  const RMat q = split_pairing(m);
  const double sq = (j * j + RMat::Identity(2 * m, 2 * m)).cwiseAbs().maxCoeff();
  const double orth = (j.transpose() * q * j - q).cwiseAbs().maxCoeff();
  return std::max(sq, orth);
}

GCStructure::GCStructure(int m, RMat matrix) : m_(m), j_(std::move(matrix)) {
  if (m <= 0) throw std::invalid_argument("GCStructure: m must be positive");
  if (j_.rows() != 2 * m || j_.cols() != 2 * m)
    throw std::invalid_argument("GCStructure: matrix must be 2m x 2m");
  const double res = invariant_residual(m, j_);
  if (res > kEntryTol)
    throw std::invalid_argument("GCStructure: square/orthogonality residual " +
                                std::to_string(res));
}

GaugeField::GaugeField(int m, RMat b) : m_(m), b_(std::move(b)) {
  if (b_.rows() != m || b_.cols() != m)
    throw std::invalid_argument("GaugeField: matrix must be m x m");
  if ((b_ + b_.transpose()).cwiseAbs().maxCoeff() > kEntryTol)
    throw std::invalid_argument("GaugeField: B is not skew-symmetric");
}

double HolPoissonPoint::compatibility_residual(const RMat& i, const RMat& p) {
  const int m = static_cast<int>(i.rows());
  double r = (i * i + RMat::Identity(m, m)).cwiseAbs().maxCoeff();
  r = std::max(r, (p + p.transpose()).cwiseAbs().maxCoeff());
  r = std::max(r, (i * p - p * i.transpose()).cwiseAbs().maxCoeff());
  return r;
}

HolPoissonPoint::HolPoissonPoint(RMat i_in, RMat p_in) : i(std::move(i_in)), p(std::move(p_in)) {
  if (i.rows() != i.cols() || p.rows() != p.cols() || i.rows() != p.rows())
    throw std::invalid_argument("HolPoissonPoint: shape mismatch");
  const double res = compatibility_residual(i, p);
  if (res > kEntryTol)
    throw std::invalid_argument(
        "HolPoissonPoint: failed I^2 = -1 / P skew / IP = PI^T (residual " +
        std::to_string(res) + ")");
}

GCStructure gc_from_complex(const RMat& i) {
  const int m = static_cast<int>(i.rows());
  if ((i * i + RMat::Identity(m, m)).cwiseAbs().maxCoeff() > kEntryTol)
    throw std::invalid_argument("gc_from_complex: I^2 != -1");
  RMat j = RMat::Zero(2 * m, 2 * m);
  j.topLeftCorner(m, m) = -i;
  j.bottomRightCorner(m, m) = i.transpose();
  return GCStructure(m, std::move(j));
}

GCStructure gc_from_symplectic(const RMat& omega) {
  const int m = static_cast<int>(omega.rows());
  if ((omega + omega.transpose()).cwiseAbs().maxCoeff() > kEntryTol)
    throw std::invalid_argument("gc_from_symplectic: omega is not skew");
  Eigen::FullPivLU<RMat> lu(omega);
  if (!lu.isInvertible()) throw std::invalid_argument("gc_from_symplectic: omega is singular");
  RMat j = RMat::Zero(2 * m, 2 * m);
  j.topRightCorner(m, m) = lu.inverse();
  j.bottomLeftCorner(m, m) = -omega;
  return GCStructure(m, std::move(j));
}

GCStructure gc_from_hol_poisson(const HolPoissonPoint& hp) {
  const int m = static_cast<int>(hp.i.rows());
  RMat j = RMat::Zero(2 * m, 2 * m);
  j.topLeftCorner(m, m) = -hp.i;
  j.topRightCorner(m, m) = hp.p;
  j.bottomRightCorner(m, m) = hp.i.transpose();
  return GCStructure(m, std::move(j));
}

RMat underlying_poisson(const GCStructure& j) { return j.block_p(); }

GCStructure apply_b_transform(const GCStructure& j, const GaugeField& b) {
  const int m = j.m();
  if (b.m() != m) throw std::invalid_argument("apply_b_transform: dimension mismatch");
  RMat eb = RMat::Identity(2 * m, 2 * m);
  eb.bottomLeftCorner(m, m) = b.matrix();
  RMat ebi = RMat::Identity(2 * m, 2 * m);
  ebi.bottomLeftCorner(m, m) = -b.matrix();
  return GCStructure(m, eb * j.matrix() * ebi);
}

GaugeConditionResiduals check_gauge_condition(const RMat& i, const RMat& p, const RMat& b) {
  if (i.rows() != b.rows() || i.rows() != p.rows())
    throw std::invalid_argument("check_gauge_condition: shape mismatch");
  const RMat primary = b * i + i.transpose() * b + b * p * b;
  const RMat jnew = i + p * b;
  const RMat secondary = jnew.transpose() * b + b * i;
  return {primary.cwiseAbs().maxCoeff(), secondary.cwiseAbs().maxCoeff()};
}

Classification classify(const GCStructure& j) {
  Mat p = j.block_p().cast<cplx>();
  const int rank = numeric_rank(p);
  return {rank, (j.m() - rank) / 2, rank % 4 == 0};
}

GCStructure parity_product(const GCStructure& j) {
  const int m = j.m(), mm = m + 2;
  RMat w(2, 2);
  w << 0, 1, -1, 0;  // standard area form on R^2
  RMat out = RMat::Zero(2 * mm, 2 * mm);
  // interleave blocks: (V + R^2) + (V* + R^2*)
  out.block(0, 0, m, m) = j.block_a();
  out.block(0, mm, m, m) = j.block_p();
  out.block(mm, 0, m, m) = j.block_b();
  out.block(mm, mm, m, m) = -j.block_a().transpose();
  out.block(m, mm + m, 2, 2) = w.inverse();
  out.block(mm + m, m, 2, 2) = -w;
  return GCStructure(mm, std::move(out));
}

Subspace eigenbundle(const GCStructure& j) {
  const int n = 2 * j.m();
  Mat shifted = j.matrix().cast<cplx>() - kI * Mat::Identity(n, n);
  Mat basis = nullspace(shifted);
  if (basis.cols() != j.m())
    throw std::runtime_error("eigenbundle: +i eigenspace has unexpected dimension " +
                             std::to_string(basis.cols()));
  return Subspace::from_orthonormal(n, std::move(basis));
}

GCStructure gc_from_eigenbundle(const Subspace& l) {
  const int n = l.ambient_dim();
  if (2 * l.dim() != n)
    throw std::invalid_argument("gc_from_eigenbundle: L is not half-dimensional");
  Mat full(n, n);
  full << l.basis(), l.basis().conjugate();
  Eigen::FullPivLU<Mat> lu(full);
  if (!lu.isInvertible())
    throw std::invalid_argument("gc_from_eigenbundle: L meets its conjugate");
  Mat d = Mat::Zero(n, n);
  d.topLeftCorner(n / 2, n / 2) = kI * Mat::Identity(n / 2, n / 2);
  d.bottomRightCorner(n / 2, n / 2) = -kI * Mat::Identity(n / 2, n / 2);
  Mat j = full * d * lu.inverse();
  if (j.imag().cwiseAbs().maxCoeff() > 1e-8)
    throw std::runtime_error("gc_from_eigenbundle: result is not real");
  return GCStructure(n / 2, j.real());
}

}  // namespace gcgeo
