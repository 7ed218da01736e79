#include "gcgeo/spinor.hpp"

namespace gcgeo {

MixedForm conj(const MixedForm& a) {
  MixedForm r(a.dim());
  for (size_t mask = 0; mask < a.mask_count(); ++mask) r[mask] = std::conj(a[mask]);
  return r;
}

double form_norm(const MixedForm& a) {
  double m = 0.0;
  for (size_t mask = 0; mask < a.mask_count(); ++mask) m = std::max(m, std::abs(a[mask]));
  return m;
}

MixedForm two_form_from_matrix(const Mat& b) {
  const int m = static_cast<int>(b.rows());
  MixedForm r(m);
  for (int j = 0; j < m; ++j)
    for (int k = j + 1; k < m; ++k) r[(size_t(1) << j) | (size_t(1) << k)] = b(j, k);
  return r;
}

Mat two_form_to_matrix(const MixedForm& a) {
  const int m = a.dim();
  Mat b = Mat::Zero(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = j + 1; k < m; ++k) {
      const cplx v = a[(size_t(1) << j) | (size_t(1) << k)];
      b(j, k) = v;
      b(k, j) = -v;
    }
  return b;
}

MixedForm one_form(const Vec& xi) {
  MixedForm r(static_cast<int>(xi.size()));
  for (int j = 0; j < xi.size(); ++j) r[size_t(1) << j] = xi(j);
  return r;
}

MixedForm clifford_action(const CliffordVector& v, const MixedForm& rho) {
  if (v.x.size() != rho.dim() || v.xi.size() != rho.dim())
    throw std::invalid_argument("clifford_action: dimension mismatch");
  return clifford(v.x, v.xi, rho);
}

Subspace annihilator(const MixedForm& rho) {
  const int m = rho.dim();
  if (form_norm(rho) == 0.0) throw std::invalid_argument("annihilator: zero form");
  Mat a(static_cast<Eigen::Index>(rho.mask_count()), 2 * m);
  for (int j = 0; j < 2 * m; ++j) {
    CliffordVector v{Vec::Zero(m), Vec::Zero(m)};
    if (j < m)
      v.x(j) = 1.0;
    else
      v.xi(j - m) = 1.0;
    MixedForm col = clifford_action(v, rho);
    for (size_t mask = 0; mask < col.mask_count(); ++mask)
      a(static_cast<Eigen::Index>(mask), j) = col[mask];
  }
  return Subspace::from_orthonormal(2 * m, nullspace(a));
}

bool is_pure(const MixedForm& rho) { return annihilator(rho).dim() == rho.dim(); }

bool real_rank_zero(const MixedForm& rho) {
  Subspace ann = annihilator(rho);
  return ann.intersect(ann.conjugated()).dim() == 0;
}

cplx mukai_pairing(const MixedForm& a, const MixedForm& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("mukai_pairing: dimension mismatch");
  const size_t full = a.mask_count() - 1;
  cplx total = 0.0;
  for (size_t mask = 0; mask <= full; ++mask) {
    const cplx av = a[mask];
    if (av == cplx(0.0)) continue;
    const size_t comp = full & ~mask;
    const cplx bv = b[comp];
    if (bv == cplx(0.0)) continue;
    const int k = MixedForm::popcount(mask);
    const int sigma = ((k * (k - 1) / 2) % 2 == 0) ? 1 : -1;
    const int sign = MixedForm::wedge_sign(mask, comp) * sigma;
    total += cplx(sign) * av * bv;
  }
  return total;
}

MixedForm exp_two_form(const MixedForm& f) {
  if (!f.is_homogeneous(2) && form_norm(f) != 0.0)
    throw std::invalid_argument("exp_two_form: argument must be a 2-form");
  MixedForm acc = MixedForm::scalar(f.dim(), 1.0);
  MixedForm power = acc;
  double factorial = 1.0;
  for (int k = 1; 2 * k <= f.dim(); ++k) {
    power = wedge(power, f);
    factorial *= k;
    acc = acc + (1.0 / factorial) * power;
  }
  return acc;
}

MixedForm symplectic_generator(const Mat& omega) {
  if ((omega + omega.transpose()).cwiseAbs().maxCoeff() > kEntryTol)
    throw std::invalid_argument("symplectic_generator: omega is not skew");
  return exp_two_form(kI * two_form_from_matrix(omega));
}

MixedForm interior_bivector(const Mat& pi, const MixedForm& a) {
  const int m = a.dim();
  MixedForm r(m);
  for (int j = 0; j < m; ++j) {
    Vec ej = Vec::Zero(m);
    ej(j) = 1.0;
    for (int k = 0; k < m; ++k) {
      if (pi(j, k) == cplx(0.0)) continue;
      Vec ek = Vec::Zero(m);
      ek(k) = 1.0;
      // pi = sum_{j<k} pi_{jk} d_j ^ d_k, insertion i_{X^Y} = i_Y i_X
      r = r + 0.5 * pi(j, k) * interior(ek, interior(ej, a));
    }
  }
  return r;
}

MixedForm hol_poisson_generator(const Mat& pi, const MixedForm& zeta) {
  if (form_norm(zeta) == 0.0)
    throw std::invalid_argument("hol_poisson_generator: zero generator");
  MixedForm acc = zeta;
  MixedForm term = zeta;
  double factorial = 1.0;
  for (int k = 1; 2 * k <= zeta.dim(); ++k) {
    term = interior_bivector(pi, term);
    factorial *= k;
    acc = acc + (1.0 / factorial) * term;
  }
  return acc;
}

MixedForm b_transform_spinor(const Mat& b, const MixedForm& rho) {
  return wedge(exp_two_form(two_form_from_matrix(b)), rho);
}

Mat generator_bivector(const RMat& i, const RMat& p) {
  return 0.25 * ((i * p).cast<cplx>() + kI * p.cast<cplx>());
}

double collinearity_defect(const MixedForm& a, const MixedForm& b) {
  const double na = form_norm(a), nb = form_norm(b);
  if (na == 0.0 || nb == 0.0)
    throw std::invalid_argument("collinearity_defect: zero form");
  double worst = 0.0;
  for (size_t p = 0; p < a.mask_count(); ++p)
    for (size_t q = p + 1; q < a.mask_count(); ++q)
      worst = std::max(worst, std::abs(a[p] / na * b[q] / nb - a[q] / na * b[p] / nb));
  return worst;
}

}  // namespace gcgeo
