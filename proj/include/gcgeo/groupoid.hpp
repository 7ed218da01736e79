#pragma once

#include <optional>

#include "gcgeo/fields.hpp"

namespace gcgeo {

// Numeric local Lie groupoid: base and arrow charts plus structure maps as
// analytic jet maps. Multiplication m(h, g) takes the LEFT factor first
// (source coordinates 0..d-1 = h, d..2d-1 = g) and is only defined on the
// declared composable domain.
struct LocalGroupoid {
  ChartPtr base;
  ChartPtr arrows;
  JetMap s, t;    // arrows -> base
  JetMap m;       // (arrows x arrows) -> arrows
  JetMap inv;     // arrows -> arrows
  JetMap id;      // base -> arrows
  std::function<bool(const RVec& h, const RVec& g)> composable;
  // Samples an arrow h with s(h) = given base point.
  std::function<RVec(const RVec& base_pt, Rng&)> s_fibre_sampler;

  RVec mul(const RVec& h, const RVec& g) const;
  RVec source_of(const RVec& g) const { return s.real_value(g); }
  RVec target_of(const RVec& g) const { return t.real_value(g); }

  std::pair<RVec, RVec> sample_composable_pair(Rng& rng, int max_tries = 10000) const;
  std::array<RVec, 3> sample_composable_triple(Rng& rng, int max_tries = 10000) const;
};

// Max residual over the groupoid axioms at n sampled instances.
double check_axioms(const LocalGroupoid& g, int n, Rng& rng);

// Max residual of m*(theta) = p1*(theta) + p2*(theta) over n sampled
// composable pairs, evaluated on a basis of the fibred-product tangent
// space. theta must be a 2-form field on the arrows.
double check_multiplicative(const LocalGroupoid& g, const FormField& theta, int n, Rng& rng);

// Max operator norm of s_* omega^{-1} t^* and t_* omega^{-1} s^* at n
// sampled arrow points (omega a nondegenerate real 2-form on arrows).
double check_fibre_orthogonality(const LocalGroupoid& g, const FormField& omega, int n,
                                 Rng& rng);

// Holomorphic symplectic groupoid data: Omega = B + i omega multiplicative,
// closed and nondegenerate, with I = omega^{-1} B an almost complex
// structure on the arrows.
struct HolSympGroupoidData {
  LocalGroupoid g;
  FormField omega_c;  // complex 2-form field on arrows

  FormField real_part() const { return omega_c.re(); }
  FormField imag_part() const { return omega_c.im(); }
  // omega^{-1} B at an arrow point.
  RMat arrow_complex_structure(const RVec& p) const;
  double consistency_residual(const RVec& p) const;  // ||(omega^{-1}B)^2 + 1||
};

// Base fields read off along the identity section: P = t_* omega^{-1} t^*
// and the complex structure solving t_* I_arrow = I_base t_*.
struct BaseHolPoisson {
  MatrixField i;
  MatrixField p;
  // consistency of t_* I_arrow = I_base t_* at a point
  std::function<double(const RVec&)> holomorphy_residual;
};
BaseHolPoisson differentiate_base(const HolSympGroupoidData& data);

// Anti-Poisson source: s_* omega^{-1} s^* at Id(x) (should equal -P).
RMat source_poisson_at(const HolSympGroupoidData& data, const RVec& base_pt);

// Omega_1 = Omega_0 + t^*(B) - s^*(B). Preconditions (checked at sampled
// base points): B closed and B I0 + I0^T B + B P B = 0 against the
// differentiated base data. Throws with the residual when violated.
HolSympGroupoidData modify(const HolSympGroupoidData& data, const FormField& b_base,
                           int precheck_samples, Rng& rng, double pre_tol = 1e-8);

// Multiplicative extension to words: F_n = sum_i p_i^*(F_1) evaluated on
// tangent vectors of the n-fold fibred product at a composable word
// (word[i] composes as m(word[i], word[i+1])).
Mat extend_multiplicative(const LocalGroupoid& g, const FormField& f1,
                          const std::vector<RVec>& word, const std::vector<RVec>& tangents);

// Orthonormal basis of the fibred-product tangent space at a word.
std::vector<RVec> word_tangent_basis(const LocalGroupoid& g, const std::vector<RVec>& word);

// Collapse slots (i, i+1) of a word by the local multiplication, pushing
// tangent vectors forward through its differential.
std::pair<std::vector<RVec>, std::vector<RVec>> collapse_word(const LocalGroupoid& g,
                                                              const std::vector<RVec>& word,
                                                              int i,
                                                              const std::vector<RVec>& tangents);

}  // namespace gcgeo
