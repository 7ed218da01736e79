#pragma once

#include "gcgeo/cover.hpp"

namespace gcgeo {

// Built-in geometry on the quotient of C^2 minus the origin by doubling,
// worked on the fundamental shell 1 < |x| < 2 with explicit equivariance
// under x -> 2x. Coordinates (a1, b1, a2, b2) with x1 = a1 + i b1,
// x2 = a2 + i b2. Charts carry margins around the loci x1 = 0, x2 = 0.
struct HopfData {
  ChartPtr shell;       // fundamental shell only
  ChartPtr chart_c;     // shell, |x2| bounded below  (C, rho, P live here)
  ChartPtr chart_w;     // shell, |x1| and |x2| bounded below (w-side fields)
  ChartPtr chart_z;     // shell, |x2| bounded below, |x1/conj(x2)| < tube
  ChartPtr chart_rho2;  // shell, |x1| bounded below (alternate generator)

  JetScalar x1, x1b, x2, x2b, r2;

  FormField c_form;   // 2-form C with e^C the spinor
  FormField rho;      // e^C
  FormField rho_alt;  // (conj(x2)/x1) rho, written with the pole cancelled
  FormField h_twist;  // closed 3-form H with dC + H = 0 (closed-form route)
  FormField w_form;   // d w1 ^ d log w2
  FormField z_form;   // d log z1 ^ d log z2
  FormField b1;       // z_form - c_form (real on the tube)
  FormField b2;       // w_form - c_form (real)

  JetScalar w1c, w2c, z1c, z2c;  // complex coordinate scalars
  JetMap w_map, z_map;           // real 4-component chart maps
  JetMap deck;                   // x -> 2x on the ambient coordinates

  MatrixField i_w, i_z, p_field;
  HolomorphicCover cover;  // charts {z, w} with gauges {b1, b2}
};

HopfData hopf_fixture();

// Log-symplectic coordinate groupoid over the unit w2-disc: arrows
// (p1, p2, w1, w2) as four complex coordinates (eight reals), structure
// maps s(p,w) = w, t(p,w) = (w1 + w2 p1, w2 e^{p2}), with the constraint
// |w2| < 1 and |w2 e^{p2}| < 1 encoded in the arrow domain.
struct Phi22Data {
  LocalGroupoid g;
  FormField omega;        // d(w1 + w2 p1) ^ d p2 + d p1 ^ d w2 on arrows
  FormField base_w_form;  // d w1 ^ d log w2 on the punctured base
  ChartPtr base_nz;       // base sub-chart with |w2| bounded below
  ChartPtr arrows_nz;     // arrow sub-chart with |w2| bounded below
  std::function<RVec(Rng&)> singular_arrow_sampler;  // arrows with w2 = 0
  RVec arrow_deck_shift;  // additive representative of w1 -> w1 + log 4
};

Phi22Data phi22_fixture();

// Pair groupoid of R^{2k} with the constant multiplicative form
// t^* Omega0 - s^* Omega0. Holomorphic when Omega0 has a real part making
// (Im Omega0)^{-1} (Re Omega0) square to -1.
struct PairGroupoidData {
  HolSympGroupoidData data;
  Mat omega0;  // constant coefficient matrix on the base
  RMat i0, p0; // constant base complex structure and Poisson map (hol case)
  bool holomorphic = false;
};

// Throws on a degenerate Omega0, or on a nonvanishing real part that does
// not satisfy the complex-structure consistency.
PairGroupoidData pair_groupoid_fixture(const Mat& omega0, int m);

// dz1 ^ dz2 + dz3 ^ dz4 + ... on C^{2k} (m = 4k real): the standard
// constant holomorphic symplectic form in real coordinates.
Mat standard_hol_symplectic(int m);

// Random constant skew B with B I0 + I0^T B + B P0 B = 0 built by moving
// I0 along the symplectomorphism group: B = P0^{-1}(R I0 R^{-1} - I0).
RMat random_compatible_gauge(const PairGroupoidData& pg, Rng& rng, double scale = 0.3);

// Two disjoint copies of the base glued by B: diagonal components are the
// groupoid and its modification, the cross component carries
// Omega0 + t^*(B) along the identity bisection.
LocalizationData modification_fixture(const PairGroupoidData& pg, const RMat& b, Rng& rng);

// Chart-wise pair-groupoid realization of the localization of the shell
// geometry over {z-chart, w-chart}, with cross component t^* W - s^* Z.
LocalizationData hopf_localization_fixture(const HopfData& h);

}  // namespace gcgeo
