#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "gcgeo/fixtures.hpp"
#include "gcgeo/gc_linear.hpp"

using namespace gcgeo;

TEST_CASE("symplectic block structure on the plane") {
  RMat omega(2, 2);
  omega << 0, 1, -1, 0;
  GCStructure j = gc_from_symplectic(omega);
  RMat expected(4, 4);
  expected << 0, 0, 0, -1,  //
      0, 0, 1, 0,           //
      0, -1, 0, 0,          //
      1, 0, 0, 0;
  CHECK((j.matrix() - expected).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(gc_from_symplectic(RMat::Zero(2, 2)), std::invalid_argument);
}

TEST_CASE("complex block structure is diag(-I, I^T)") {
  RMat i = standard_complex_structure(1);
  GCStructure j = gc_from_complex(i);
  CHECK((j.block_a() + i).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(j.block_p().cwiseAbs().maxCoeff() < 1e-14);
  CHECK((j.matrix().bottomRightCorner(2, 2) - i.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(gc_from_complex(RMat::Identity(2, 2)), std::invalid_argument);
}

TEST_CASE("holomorphic Poisson block structure on R^4") {
  RMat i = standard_complex_structure(2);
  RMat skew = RMat::Zero(4, 4);
  skew(0, 2) = 1.0;
  skew(2, 0) = -1.0;  // elementary skew seed
  RMat p = skew - i * skew * i.transpose();
  GCStructure j = gc_from_hol_poisson(HolPoissonPoint(i, p));  // ctor checks invariants
  CHECK(GCStructure::invariant_residual(4, j.matrix()) < 1e-12);
  // incompatible P is rejected
  RMat bad = RMat::Zero(4, 4);
  bad(0, 1) = 1.0;
  bad(1, 0) = -1.0;
  CHECK_THROWS_AS(HolPoissonPoint(i, bad), std::invalid_argument);
}

TEST_CASE("underlying Poisson blocks") {
  RMat omega(2, 2);
  omega << 0, 2.0, -2.0, 0;
  CHECK((underlying_poisson(gc_from_symplectic(omega)) - omega.inverse())
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  CHECK(underlying_poisson(gc_from_complex(standard_complex_structure(1)))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  // invariance under a transform, against the explicit conjugation
  RMat b(2, 2);
  b << 0, 0.7, -0.7, 0;
  GCStructure jb = apply_b_transform(gc_from_symplectic(omega), GaugeField(2, b));
  RMat eb = RMat::Identity(4, 4);
  eb.bottomLeftCorner(2, 2) = b;
  RMat ebi = RMat::Identity(4, 4);
  ebi.bottomLeftCorner(2, 2) = -b;
  RMat oracle_matrix = eb * gc_from_symplectic(omega).matrix() * ebi;
  CHECK((jb.matrix() - oracle_matrix).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((underlying_poisson(jb) - omega.inverse()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("zero transform and transform additivity") {
  RMat omega(2, 2);
  omega << 0, 1, -1, 0;
  GCStructure j = gc_from_symplectic(omega);
  GCStructure j0 = apply_b_transform(j, GaugeField(2, RMat::Zero(2, 2)));
  CHECK((j.matrix() - j0.matrix()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("gauge-compatible transform keeps the holomorphic Poisson shape") {
  Rng rng = Rng(42).fork("gauge-shape");
  PairGroupoidData pg = pair_groupoid_fixture(standard_hol_symplectic(4), 4);
  for (int t = 0; t < 10; ++t) {
    RMat b = random_compatible_gauge(pg, rng);
    auto [primary, secondary] = check_gauge_condition(pg.i0, pg.p0, b);
    CHECK(primary < 1e-12);
    CHECK(secondary < 1e-12);
    GCStructure j = gc_from_hol_poisson(HolPoissonPoint(pg.i0, pg.p0));
    GCStructure jb = apply_b_transform(j, GaugeField(4, b));
    RMat jnew = pg.i0 + pg.p0 * b;
    CHECK(jb.block_b().cwiseAbs().maxCoeff() < 1e-11);          // lower-left coupling vanishes
    CHECK((jb.block_a() + jnew).cwiseAbs().maxCoeff() < 1e-11); // top-left is -(I + PB)
    CHECK((jb.block_p() - pg.p0).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("gauge condition residuals") {
  RMat i = standard_complex_structure(2);
  CHECK(check_gauge_condition(i, RMat::Zero(4, 4), RMat::Zero(4, 4)).primary == 0.0);
  // (1,1)-type form with P = 0: both residuals vanish
  Rng rng = Rng(42).fork("one-one");
  RMat raw(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) raw(r, c) = rng.normal();
  RMat s = raw - raw.transpose();
  RMat b11 = 0.5 * (s + i.transpose() * s * i);
  CHECK((b11 + b11.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  auto res = check_gauge_condition(i, RMat::Zero(4, 4), b11);
  CHECK(res.primary < 1e-12);
  CHECK(res.secondary < 1e-12);
  // a generic non-(1,1) form fails
  CHECK(check_gauge_condition(i, RMat::Zero(4, 4), s).primary > 1e-3);
}

TEST_CASE("classification and the parity product") {
  RMat omega4(4, 4);
  omega4.setZero();
  omega4(0, 1) = 1;
  omega4(1, 0) = -1;
  omega4(2, 3) = 1;
  omega4(3, 2) = -1;
  Classification c4 = classify(gc_from_symplectic(omega4));
  CHECK(c4.poisson_rank == 4);
  CHECK(c4.type == 0);
  CHECK(c4.parity_ok);

  Classification cc = classify(gc_from_complex(standard_complex_structure(1)));
  CHECK(cc.poisson_rank == 0);
  CHECK(cc.type == 1);
  CHECK(cc.parity_ok);

  RMat omega2(2, 2);
  omega2 << 0, 1, -1, 0;
  GCStructure plane = gc_from_symplectic(omega2);
  Classification c2 = classify(plane);
  CHECK(c2.poisson_rank == 2);
  CHECK_FALSE(c2.parity_ok);

  GCStructure fixed = parity_product(plane);
  Classification cf = classify(fixed);
  CHECK(cf.poisson_rank == 4);
  CHECK(cf.parity_ok);

  // complex plane times the symplectic plane: rank 2, mixed type
  GCStructure mixed = parity_product(gc_from_complex(standard_complex_structure(1)));
  Classification cm = classify(mixed);
  CHECK(cm.poisson_rank == 2);
  CHECK(cm.type == 1);
  CHECK_FALSE(cm.parity_ok);

  Classification ct = classify(parity_product(mixed));
  CHECK(ct.poisson_rank == 4);
  CHECK(ct.parity_ok);
}

TEST_CASE("eigenbundle of the symplectic plane matches the frozen basis") {
  RMat omega(2, 2);
  omega << 0, 1, -1, 0;
  Subspace l = eigenbundle(gc_from_symplectic(omega));
  CHECK(l.dim() == 2);
  Mat expected(4, 2);
  expected.setZero();
  // span{ d_1 - i e^2, d_2 + i e^1 }
  expected(0, 0) = 1;
  expected(3, 0) = -kI;
  expected(1, 1) = 1;
  expected(2, 1) = kI;
  CHECK(l.gap_to(Subspace::from_span(4, expected)) < 1e-12);
  CHECK(l.isotropy_residual(SplitSpace::standard(2)) < 1e-12);
  CHECK(l.intersect(l.conjugated()).dim() == 0);
}

TEST_CASE("eigenbundle of a complex structure splits into types") {
  Subspace l = eigenbundle(gc_from_complex(standard_complex_structure(1)));
  Mat expected(4, 2);
  expected.setZero();
  expected(0, 0) = 1;
  expected(1, 0) = kI;  // T^{0,1}: d_x + i d_y
  expected(2, 1) = 1;
  expected(3, 1) = kI;  // (T*)^{1,0}: dx + i dy
  CHECK(l.gap_to(Subspace::from_span(4, expected)) < 1e-12);
}

TEST_CASE("eigenbundle round trip") {
  RMat omega(2, 2);
  omega << 0, 1.5, -1.5, 0;
  GCStructure j = gc_from_symplectic(omega);
  GCStructure back = gc_from_eigenbundle(eigenbundle(j));
  CHECK((back.matrix() - j.matrix()).cwiseAbs().maxCoeff() < 1e-10);
}
