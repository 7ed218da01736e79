#pragma once

#include "gcgeo/split_linear.hpp"
#include "gcgeo/types.hpp"

namespace gcgeo {

// Conventions, fixed once for the whole library:
//  * fibre V + V*, vectors first; pairing [[0, I/2], [I/2, 0]];
//  * a 2-form acts as the map X -> beta(., X), i.e. plainly by its skew
//    coefficient matrix B_{jk} = beta(e_j, e_k);
//  * e^B = [[1, 0], [B, 1]],  complex blocks  gc_complex = [[-I, 0], [0, I^T]],
//    gc_symplectic = [[0, W^{-1}], [-W, 0]],  gc_hol_poisson = [[-I, P], [0, I^T]].
// With these choices the annihilator of e^{i omega} is the +i eigenbundle of
// gc_symplectic(omega) and e^B acts on spinors as e^B ^ rho.

// Real 2m x 2m matrix squaring to -1 and orthogonal for the split pairing.
class GCStructure {
 public:
  GCStructure(int m, RMat matrix);

  int m() const { return m_; }
  const RMat& matrix() const { return j_; }

  RMat block_a() const { return j_.topLeftCorner(m_, m_); }
  RMat block_p() const { return j_.topRightCorner(m_, m_); }
  RMat block_b() const { return j_.bottomLeftCorner(m_, m_); }

  static double invariant_residual(int m, const RMat& j);

 private:
  int m_;
  RMat j_;
};

// Skew m x m matrix of a real (or complex) 2-form gauge field.
class GaugeField {
 public:
  GaugeField(int m, RMat b);
  int m() const { return m_; }
  const RMat& matrix() const { return b_; }

 private:
  int m_;
  RMat b_;
};

// Pointwise holomorphic Poisson data: I^2 = -1, P skew, and I P = P I^T
// (equivalently I P skew), which makes pi = I P + i P a (2,0) bivector.
struct HolPoissonPoint {
  RMat i;
  RMat p;

  HolPoissonPoint(RMat i_in, RMat p_in);
  static double compatibility_residual(const RMat& i, const RMat& p);
};

GCStructure gc_from_complex(const RMat& i);
GCStructure gc_from_symplectic(const RMat& omega);
GCStructure gc_from_hol_poisson(const HolPoissonPoint& hp);

// Top-right block; invariant under B-transforms.
RMat underlying_poisson(const GCStructure& j);

// e^B J e^{-B}.
GCStructure apply_b_transform(const GCStructure& j, const GaugeField& b);

struct GaugeConditionResiduals {
  double primary;    // || B I + I^T B + B P B ||_inf
  double secondary;  // || J^T B + B I ||_inf with J = I + P B
};
GaugeConditionResiduals check_gauge_condition(const RMat& i, const RMat& p, const RMat& b);

struct Classification {
  int poisson_rank;  // rank of the underlying Poisson block (even)
  int type;          // (m - poisson_rank) / 2
  bool parity_ok;    // poisson_rank = 0 mod 4
};
Classification classify(const GCStructure& j);

// Block-diagonal product with the standard symplectic structure on R^2;
// raises the Poisson rank by 2 (and flips parity_ok when rank = 2 mod 4).
GCStructure parity_product(const GCStructure& j);

// +i eigenspace on the complexified fibre: m-dimensional, isotropic,
// meeting its conjugate trivially.
Subspace eigenbundle(const GCStructure& j);

// Inverse of eigenbundle: J = i(P_L - P_Lbar) for a maximal isotropic L
// with L meeting conj(L) trivially.
GCStructure gc_from_eigenbundle(const Subspace& l);

}  // namespace gcgeo
