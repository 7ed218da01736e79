#include <doctest.h>

#include "gcgeo/gc_linear.hpp"
#include "oracles.hpp"

using namespace gcgeo;

namespace {

Rng test_rng(const char* tag) { return Rng(42).fork(tag); }

Mat random_mat(int r, int c, Rng& rng) {
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = cplx(rng.normal(), rng.normal());
  return m;
}

// isotropic-subspace generator shared with the check registry style
Subspace rand_max_isotropic(const SplitSpace& v, Rng& rng) {
  const int n = v.dim();
  Eigen::SelfAdjointEigenSolver<RMat> es(v.pairing().real());
  std::vector<int> pos, neg;
  for (int k = 0; k < n; ++k) (es.eigenvalues()(k) > 0 ? pos : neg).push_back(k);
  Mat base(n, n / 2);
  for (int k = 0; k < n / 2; ++k) {
    RVec up = es.eigenvectors().col(pos[k]) / std::sqrt(es.eigenvalues()(pos[k]));
    RVec un = es.eigenvectors().col(neg[k]) / std::sqrt(-es.eigenvalues()(neg[k]));
    base.col(k) = (up + un).cast<cplx>();
  }
  RMat s(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) s(r, c) = 0.3 * rng.normal();
  s = RMat(s - s.transpose().eval());
  return Subspace::from_span(n, (v.pairing().real().inverse() * s).exp().cast<cplx>() * base);
}

}  // namespace

TEST_CASE("orthogonal complement of the zero subspace is everything") {
  SplitSpace v = SplitSpace::standard(1);
  Subspace whole = orthogonal_complement(v, Subspace::zero(2));
  CHECK(whole.dim() == 2);
}

TEST_CASE("null vector in a hyperbolic plane is its own annihilator") {
  Mat q(2, 2);
  q << 0, 1, 1, 0;  // <e1,e2> = 1, <ei,ei> = 0
  SplitSpace v(2, q);
  Mat e1 = Mat::Zero(2, 1);
  e1(0, 0) = 1.0;
  Subspace s = Subspace::from_span(2, e1);
  Subspace perp = orthogonal_complement(v, s);
  CHECK(perp.dim() == 1);
  CHECK(perp.same_as(s));
}

TEST_CASE("random complement: dimension, orthogonality, LU oracle, involution") {
  Rng rng = test_rng("complement");
  SplitSpace v = SplitSpace::standard(4);
  for (int t = 0; t < 10; ++t) {
    Subspace s = Subspace::from_span(8, random_mat(8, 3, rng));
    Subspace perp = orthogonal_complement(v, s);
    CHECK(perp.dim() == 5);
    CHECK((s.basis().transpose() * v.pairing() * perp.basis()).cwiseAbs().maxCoeff() < 1e-9);
    Mat oracle_kernel = oracle::lu_kernel(s.basis().transpose() * v.pairing());
    CHECK(subspace_gap(perp.basis(), orthonormal_span(oracle_kernel)) < 1e-9);
    CHECK(orthogonal_complement(v, perp).gap_to(s) < 1e-9);
  }
}

TEST_CASE("reduction by the zero subspace is the identity") {
  SplitSpace v = SplitSpace::standard(2);
  Reduction red = reduce(v, Subspace::zero(4));
  CHECK(red.reduced.dim() == 4);
  CHECK((red.reduced.pairing() - v.pairing()).cwiseAbs().maxCoeff() < 1e-12);
  Vec x = Vec::Zero(4);
  x << 1.0, 2.0, -0.5, 0.25;
  CHECK((red.complement_basis * (red.projection * x) - x).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("reduction of the standard 4-dim fibre by span{e1}") {
  SplitSpace v = SplitSpace::standard(2);
  Mat e1 = Mat::Zero(4, 1);
  e1(0, 0) = 1.0;
  Reduction red = reduce(v, Subspace::from_span(4, e1));
  CHECK(red.reduced.dim() == 2);
  CHECK(red.reduced.is_real());
  Eigen::SelfAdjointEigenSolver<RMat> es(red.reduced.pairing().real());
  CHECK(es.eigenvalues()(0) < -1e-3);  // split signature survives
  CHECK(es.eigenvalues()(1) > 1e-3);
}

TEST_CASE("reduction by a non-isotropic subspace is rejected") {
  SplitSpace v = SplitSpace::standard(2);
  Mat bad(4, 1);
  bad << 1.0, 0.0, 1.0, 0.0;  // <v, v> = 1
  CHECK_THROWS_AS(reduce(v, Subspace::from_span(4, bad)), std::invalid_argument);
}

TEST_CASE("identity relation is neutral for composition") {
  Rng rng = test_rng("identity-compose");
  SplitSpace v = SplitSpace::standard(2), w = SplitSpace::standard(2);
  DiracRelation d(v, w, rand_max_isotropic(SplitSpace::product(w, v.opposite()), rng));
  CHECK(compose(DiracRelation::identity(w), d).graph().gap_to(d.graph()) < 1e-9);
  CHECK(compose(d, DiracRelation::identity(v)).graph().gap_to(d.graph()) < 1e-9);
}

TEST_CASE("shear graphs compose additively") {
  Rng rng = test_rng("shear");
  const int m = 3;
  SplitSpace v = SplitSpace::standard(m);
  RMat raw(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) raw(r, c) = rng.normal();
  RMat b1 = raw - raw.transpose();
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) raw(r, c) = rng.normal();
  RMat b2 = raw - raw.transpose();
  auto shear = [m](const RMat& b) {
    RMat e = RMat::Identity(2 * m, 2 * m);
    e.bottomLeftCorner(m, m) = b;
    return e.cast<cplx>();
  };
  DiracRelation g1 = DiracRelation::from_isometry(v, v, shear(b1));
  DiracRelation g2 = DiracRelation::from_isometry(v, v, shear(b2));
  DiracRelation sum = DiracRelation::from_isometry(v, v, shear(b1 + b2));
  CHECK(compose(g1, g2).graph().gap_to(sum.graph()) < 1e-9);
}

TEST_CASE("random compositions against an LU elimination oracle") {
  Rng rng = test_rng("compose-oracle");
  SplitSpace u = SplitSpace::standard(2), v = SplitSpace::standard(2),
             w = SplitSpace::standard(2);
  for (int t = 0; t < 8; ++t) {
    DiracRelation d1(u, v, rand_max_isotropic(SplitSpace::product(v, u.opposite()), rng));
    DiracRelation d2(v, w, rand_max_isotropic(SplitSpace::product(w, v.opposite()), rng));
    DiracRelation d21 = compose(d2, d1);
    CHECK(d21.graph().dim() == 4);
    CHECK(d21.graph().isotropy_residual(SplitSpace::product(w, u.opposite())) < 1e-9);
    // oracle: eliminate the middle factor with an LU kernel
    const Mat& g1 = d1.graph().basis();
    const Mat& g2 = d2.graph().basis();
    Mat match(4, g2.cols() + g1.cols());
    match << g2.bottomRows(4), -g1.topRows(4);
    Mat ker = oracle::lu_kernel(match);
    Mat wu(8, ker.cols());
    wu.topRows(4) = g2.topRows(4) * ker.topRows(g2.cols());
    wu.bottomRows(4) = g1.bottomRows(4) * ker.bottomRows(g1.cols());
    CHECK(subspace_gap(d21.graph().basis(), orthonormal_span(wu)) < 1e-8);
  }
}

TEST_CASE("kernels of an isometry graph vanish; collapse relation has full left kernel") {
  Rng rng = test_rng("kernels");
  const int m = 2;
  SplitSpace v = SplitSpace::standard(m);
  RMat raw(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) raw(r, c) = rng.normal();
  RMat e = RMat::Identity(4, 4);
  e.bottomLeftCorner(m, m) = raw - raw.transpose();
  auto [l0, r0] = relation_kernels(DiracRelation::from_isometry(v, v, e.cast<cplx>()));
  CHECK(l0.dim() == 0);
  CHECK(r0.dim() == 0);

  // relation to the trivial fibre: the left kernel is the defining isotropic
  SplitSpace trivial(0, Mat(0, 0));
  Subspace l = rand_max_isotropic(v, rng);
  DiracRelation collapse(v, trivial, Subspace::from_orthonormal(4, l.basis()));
  auto [left, right] = relation_kernels(collapse);
  CHECK(right.dim() == 0);
  CHECK(left.same_as(l, 1e-9));
}

TEST_CASE("a random relation transports the reduced pairing isometrically") {
  Rng rng = test_rng("isometry");
  SplitSpace v = SplitSpace::standard(3), w = SplitSpace::standard(2);
  DiracRelation d(v, w, rand_max_isotropic(SplitSpace::product(w, v.opposite()), rng));
  auto [kl, kr] = relation_kernels(d);
  CHECK(kl.isotropy_residual(v) < 1e-9);
  CHECK(kr.isotropy_residual(w) < 1e-9);
  // graph pairs transport the pairing on the nose
  const Mat& g = d.graph().basis();
  Mat gv = g.bottomRows(6), gw = g.topRows(4);
  CHECK((gv.transpose() * v.pairing() * gv - gw.transpose() * w.pairing() * gw)
            .cwiseAbs()
            .maxCoeff() < 1e-9);
  // the sources lie in the kernel-orthogonal, so the quotient map is defined
  CHECK((kl.basis().transpose() * v.pairing() * gv).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((kr.basis().transpose() * w.pairing() * gw).cwiseAbs().maxCoeff() < 1e-9);
  // dimensions of both reductions agree
  CHECK(v.dim() - 2 * kl.dim() == w.dim() - 2 * kr.dim());
}

TEST_CASE("brane invariance on the symplectic plane") {
  RMat omega(2, 2);
  omega << 0, 1, -1, 0;
  GCStructure j = gc_from_symplectic(omega);
  Mat jm = j.matrix().cast<cplx>();
  SplitSpace fibre = SplitSpace::standard(2);
  // complex graph of i*omega (= the +i eigenbundle): columns (X, i M X)
  Mat m = omega.cast<cplx>();
  Mat gi(4, 2);
  gi.topRows(2) = Mat::Identity(2, 2);
  gi.bottomRows(2) = kI * m;
  CHECK(is_brane_invariant(Subspace::from_span(4, gi), fibre, jm));
  // the real graph of omega is never invariant
  Mat gr(4, 2);
  gr.topRows(2) = Mat::Identity(2, 2);
  gr.bottomRows(2) = m;
  CHECK_FALSE(is_brane_invariant(Subspace::from_span(4, gr), fibre, jm));
  // the tangent space is swapped to the cotangent side
  Mat tm(4, 2);
  tm.setZero();
  tm(0, 0) = 1;
  tm(1, 1) = 1;
  CHECK_FALSE(is_brane_invariant(Subspace::from_span(4, tm), fibre, jm));
  // non-maximal input is rejected
  CHECK_THROWS_AS(is_brane_invariant(Subspace::from_span(4, tm.leftCols(1)), fibre, jm),
                  std::invalid_argument);
}

TEST_CASE("antiholomorphic-type isotropic is invariant for a complex structure") {
  RMat i2 = standard_complex_structure(1);  // on R^2
  GCStructure j = gc_from_complex(i2);
  // T^{0,1} + (T*)^{1,0}: spanned by (d_x + i d_y, 0) and (0, dx + i dy)
  Mat l(4, 2);
  l.setZero();
  l(0, 0) = 1;
  l(1, 0) = kI;
  l(2, 1) = 1;
  l(3, 1) = kI;
  CHECK(is_brane_invariant(Subspace::from_span(4, l), SplitSpace::standard(2),
                           j.matrix().cast<cplx>()));
}
