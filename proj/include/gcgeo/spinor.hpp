#pragma once

#include "gcgeo/multivector.hpp"
#include "gcgeo/split_linear.hpp"
#include "gcgeo/types.hpp"

namespace gcgeo {

// Numeric element of the mixed-degree complex exterior algebra at a point.
using MixedForm = Multivector<cplx>;

struct CliffordVector {
  Vec x;   // vector part, size m
  Vec xi;  // covector part, size m
};

MixedForm conj(const MixedForm& a);
double form_norm(const MixedForm& a);  // max |coefficient|

// Skew coefficient matrix <-> degree-2 form (B_{jk} = beta(e_j, e_k)).
MixedForm two_form_from_matrix(const Mat& b);
Mat two_form_to_matrix(const MixedForm& a);

// Coefficient matrix of a 1-form / vector slot helpers.
MixedForm one_form(const Vec& xi);

// Clifford action (X + xi) . rho = i_X rho + xi ^ rho, as a vector in C^{2m}
// with the vector block first (matching the split_linear fibre layout).
MixedForm clifford_action(const CliffordVector& v, const MixedForm& rho);

// Ann(rho) inside C^{2m}: nullspace of v -> v . rho. Always isotropic.
Subspace annihilator(const MixedForm& rho);

bool is_pure(const MixedForm& rho);        // dim Ann = m
bool real_rank_zero(const MixedForm& rho); // Ann meets its conjugate trivially

// Top-degree coefficient of sigma(a) ^ b, sigma = (-1)^{k(k-1)/2} on degree k.
cplx mukai_pairing(const MixedForm& a, const MixedForm& b);

// Truncated exponential of a 2-form: 1 + F + F^F/2 + ...
MixedForm exp_two_form(const MixedForm& f);

// e^{i omega}; its annihilator is the +i eigenbundle of gc_from_symplectic.
MixedForm symplectic_generator(const Mat& omega);

// e^{i_pi} zeta for a bivector with coefficient matrix pi (pi_{jk} on
// d/dx_j ^ d/dx_k, insertion i_{X^Y} = i_Y i_X).
MixedForm hol_poisson_generator(const Mat& pi, const MixedForm& zeta);

MixedForm interior_bivector(const Mat& pi, const MixedForm& a);

// rho -> e^B ^ rho.
MixedForm b_transform_spinor(const Mat& b, const MixedForm& rho);

// Bivector feeding hol_poisson_generator so that its annihilator is the
// +i eigenbundle of the block structure built from (I, P): (IP + iP)/4.
// The 1/4 is forced by the half-normalized pairing once the symplectic
// dictionary e^{i omega} <-> [[0, w^{-1}], [-w, 0]] is fixed factor-free.
Mat generator_bivector(const RMat& i, const RMat& p);

// Collinearity of two nonzero forms (projective line-bundle comparison):
// max absolute 2x2 minor of the coefficient pair, after sup-normalization.
double collinearity_defect(const MixedForm& a, const MixedForm& b);

}  // namespace gcgeo
