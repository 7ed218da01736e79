#pragma once

#include "gcgeo/chart.hpp"
#include "gcgeo/multivector.hpp"
#include "gcgeo/spinor.hpp"

namespace gcgeo {

// Analytic map between coordinate charts, each component a JetScalar over
// the source coordinates.
class JetMap {
 public:
  JetMap() = default;
  JetMap(ChartPtr source, int target_dim, std::vector<JetScalar> components);

  const ChartPtr& source() const { return source_; }
  int source_dim() const { return source_->dim(); }
  int target_dim() const { return target_dim_; }
  const std::vector<JetScalar>& components() const { return comp_; }

  Vec value(JetContext& ctx) const;
  Vec value(const RVec& p) const;
  // Real target point (imaginary parts must be below tol; used for maps
  // between real charts whose components are built from complex expressions).
  RVec real_value(const RVec& p, double tol = 1e-9) const;
  // Jacobian d(target)/d(source), target_dim x source_dim.
  Mat jacobian(JetContext& ctx) const;
  Mat jacobian(const RVec& p) const;
  RMat real_jacobian(const RVec& p, double tol = 1e-9) const;

  // Composition: this after inner (expression-level substitution).
  JetMap after(const JetMap& inner) const;

 private:
  ChartPtr source_;
  int target_dim_ = 0;
  std::vector<JetScalar> comp_;
};

cplx jacobian_det(const JetMap& map, const RVec& p);

// Mixed-degree form with expression-tree coefficients over a chart.
class FormField {
 public:
  FormField() = default;
  FormField(ChartPtr chart, Multivector<JetScalar> coeffs);
  static FormField zero(ChartPtr chart);
  static FormField scalar(ChartPtr chart, JetScalar f);
  static FormField from_matrix(ChartPtr chart, const std::vector<std::vector<JetScalar>>& b);

  const ChartPtr& chart() const { return chart_; }
  const Multivector<JetScalar>& coeffs() const { return f_; }
  Multivector<JetScalar>& coeffs() { return f_; }
  int dim() const { return chart_->dim(); }

  MixedForm value(JetContext& ctx) const;
  MixedForm value(const RVec& p) const;

  // Exact symbolic exterior derivative (expression-level).
  FormField d() const;
  FormField re() const;
  FormField im() const;
  FormField conjugated() const;

  bool structurally_zero() const { return f_.structurally_zero(); }

 private:
  ChartPtr chart_;
  Multivector<JetScalar> f_;
};

FormField operator+(const FormField& a, const FormField& b);
FormField operator-(const FormField& a, const FormField& b);
FormField operator-(const FormField& a);
FormField operator*(const JetScalar& s, const FormField& a);
FormField operator*(cplx s, const FormField& a);
FormField wedge(const FormField& a, const FormField& b);

// d(sum f_I dx_I) at p via the jet gradients of the coefficients.
MixedForm exterior_d(const FormField& f, const RVec& p);
// Second exterior derivative assembled from the jet Hessians directly;
// vanishes exactly up to roundoff because Hessians are symmetric.
MixedForm exterior_d_twice(const FormField& f, const RVec& p);
// (d + H ^) F at p; H must be homogeneous of degree 3.
MixedForm twisted_d(const FormField& f, const FormField& h, const RVec& p);

// Least-squares residual of  v . rho + lambda rho = rho_deriv  over
// v in C^{2m}, lambda in C. Small residual certifies that rho_deriv lies
// in the Clifford image of rho.
double in_clifford_image(const MixedForm& rho_deriv, const MixedForm& rho);

// Pullback of a field along an analytic map (expression-level; uses the
// symbolic partials of the map components).
FormField pullback(const JetMap& map, const FormField& f);
// Pointwise pullback via the numeric Jacobian (independent route).
MixedForm pullback_value(const JetMap& map, const FormField& f, const RVec& p);

// d log f as a field.
FormField dlog(ChartPtr chart, const JetScalar& f);
// df as a field.
FormField d_scalar(ChartPtr chart, const JetScalar& f);

// Analytic section X + xi of the generalized tangent fibre over a chart.
class SectionField {
 public:
  SectionField(ChartPtr chart, std::vector<JetScalar> x, std::vector<JetScalar> xi);

  const ChartPtr& chart() const { return chart_; }
  const std::vector<JetScalar>& x() const { return x_; }
  const std::vector<JetScalar>& xi() const { return xi_; }

  CliffordVector value(const RVec& p) const;
  JetScalar pairing_with(const SectionField& other) const;  // <u, v> = (xi.Y + eta.X)/2

 private:
  ChartPtr chart_;
  std::vector<JetScalar> x_, xi_;
};

// H-twisted Dorfman bracket [u, v] = [X,Y] + L_X eta - i_Y d xi + i_Y i_X H,
// computed symbolically so brackets can be nested exactly.
SectionField courant_bracket(const SectionField& u, const SectionField& v, const FormField& h);
CliffordVector courant_bracket(const SectionField& u, const SectionField& v, const FormField& h,
                               const RVec& p);

// Matrix-valued field evaluated on demand (complex entries).
class MatrixField {
 public:
  MatrixField() = default;
  MatrixField(int rows, int cols, std::function<Mat(const RVec&)> eval)
      : rows_(rows), cols_(cols), eval_(std::move(eval)) {}
  static MatrixField from_entries(ChartPtr chart, std::vector<std::vector<JetScalar>> entries);
  // Complex structure of a holomorphic coordinate map: J^{-1} I_std J where
  // J is the real Jacobian of the map (components listed Re z1, Im z1, ...).
  static MatrixField pullback_complex_structure(const JetMap& holomorphic_chart_map);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Mat operator()(const RVec& p) const { return eval_(p); }
  RMat real_at(const RVec& p, double tol = 1e-8) const;

 private:
  int rows_ = 0, cols_ = 0;
  std::function<Mat(const RVec&)> eval_;
};

// Standard complex structure on R^{2k} with coordinates (x1,y1,x2,y2,...).
RMat standard_complex_structure(int half_dim);

}  // namespace gcgeo
