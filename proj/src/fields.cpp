#include "gcgeo/fields.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

namespace gcgeo {

JetMap::JetMap(ChartPtr source, int target_dim, std::vector<JetScalar> components)
    : source_(std::move(source)), target_dim_(target_dim), comp_(std::move(components)) {
  if (static_cast<int>(comp_.size()) != target_dim_)
    throw std::invalid_argument("JetMap: component count must match target dimension");
}

Vec JetMap::value(JetContext& ctx) const {
  Vec v(target_dim_);
  for (int k = 0; k < target_dim_; ++k) v(k) = comp_[k].value(ctx);
  return v;
}

Vec JetMap::value(const RVec& p) const {
  JetContext ctx(p);
  return value(ctx);
}

RVec JetMap::real_value(const RVec& p, double tol) const {
  Vec v = value(p);
  if (v.imag().cwiseAbs().maxCoeff() > tol)
    throw std::runtime_error("JetMap: target point has imaginary residue");
  return v.real();
}

Mat JetMap::jacobian(JetContext& ctx) const {
  Mat j(target_dim_, source_dim());
  for (int k = 0; k < target_dim_; ++k) j.row(k) = comp_[k].jet(ctx).g.transpose();
  return j;
}

Mat JetMap::jacobian(const RVec& p) const {
  JetContext ctx(p);
  return jacobian(ctx);
}

RMat JetMap::real_jacobian(const RVec& p, double tol) const {
  Mat j = jacobian(p);
  if (j.imag().cwiseAbs().maxCoeff() > tol)
    throw std::runtime_error("JetMap: Jacobian has imaginary residue");
  return j.real();
}

JetMap JetMap::after(const JetMap& inner) const {
  if (inner.target_dim() != source_dim())
    throw std::invalid_argument("JetMap::after: dimension mismatch");
  std::vector<JetScalar> comps;
  comps.reserve(comp_.size());
  for (const auto& c : comp_) comps.push_back(substitute(c, inner.components()));
  return JetMap(inner.source(), target_dim_, std::move(comps));
}

cplx jacobian_det(const JetMap& map, const RVec& p) {
  if (map.target_dim() != map.source_dim())
    throw std::invalid_argument("jacobian_det: map is not square");
  if (!map.source()->contains(p))
    throw std::invalid_argument("jacobian_det: point outside source domain");
  return map.jacobian(p).determinant();
}

// ---------------------------------------------------------------------------

FormField::FormField(ChartPtr chart, Multivector<JetScalar> coeffs)
    : chart_(std::move(chart)), f_(std::move(coeffs)) {
  if (f_.dim() != chart_->dim())
    throw std::invalid_argument("FormField: coefficient rank does not match chart dimension");
}

FormField FormField::zero(ChartPtr chart) {
  const int m = chart->dim();
  return FormField(std::move(chart), Multivector<JetScalar>(m));
}

FormField FormField::scalar(ChartPtr chart, JetScalar f) {
  const int m = chart->dim();
  return FormField(std::move(chart), Multivector<JetScalar>::scalar(m, std::move(f)));
}

FormField FormField::from_matrix(ChartPtr chart,
                                 const std::vector<std::vector<JetScalar>>& b) {
  const int m = chart->dim();
  Multivector<JetScalar> f(m);
  for (int j = 0; j < m; ++j)
    for (int k = j + 1; k < m; ++k)
      f[(size_t(1) << j) | (size_t(1) << k)] = b[j][k];
  return FormField(std::move(chart), std::move(f));
}

MixedForm FormField::value(JetContext& ctx) const {
  MixedForm r(f_.dim());
  for (size_t mask = 0; mask < f_.mask_count(); ++mask)
    if (!f_[mask].is_zero()) r[mask] = f_[mask].value(ctx);
  return r;
}

MixedForm FormField::value(const RVec& p) const {
  JetContext ctx(p);
  return value(ctx);
}

FormField FormField::d() const {
  const int m = f_.dim();
  Multivector<JetScalar> out(m);
  for (size_t mask = 0; mask < f_.mask_count(); ++mask) {
    if (f_[mask].is_zero()) continue;
    for (int j = 0; j < m; ++j) {
      if (mask & (size_t(1) << j)) continue;
      JetScalar pj = diff(f_[mask], j);
      if (pj.is_zero()) continue;
      const int sign = Multivector<JetScalar>::wedge_sign(size_t(1) << j, mask);
      const size_t target = mask | (size_t(1) << j);
      out[target] = out[target] + (sign > 0 ? pj : -pj);
    }
  }
  return FormField(chart_, std::move(out));
}

FormField FormField::re() const {
  Multivector<JetScalar> out(f_.dim());
  for (size_t mask = 0; mask < f_.mask_count(); ++mask)
    if (!f_[mask].is_zero()) out[mask] = js_re(f_[mask]);
  return FormField(chart_, std::move(out));
}

FormField FormField::im() const {
  Multivector<JetScalar> out(f_.dim());
  for (size_t mask = 0; mask < f_.mask_count(); ++mask)
    if (!f_[mask].is_zero()) out[mask] = js_im(f_[mask]);
  return FormField(chart_, std::move(out));
}

FormField FormField::conjugated() const {
  Multivector<JetScalar> out(f_.dim());
  for (size_t mask = 0; mask < f_.mask_count(); ++mask)
    if (!f_[mask].is_zero()) out[mask] = js_conj(f_[mask]);
  return FormField(chart_, std::move(out));
}

FormField operator+(const FormField& a, const FormField& b) {
  return FormField(a.chart(), a.coeffs() + b.coeffs());
}

FormField operator-(const FormField& a, const FormField& b) {
  return FormField(a.chart(), a.coeffs() - b.coeffs());
}

FormField operator-(const FormField& a) { return FormField(a.chart(), -a.coeffs()); }

FormField operator*(const JetScalar& s, const FormField& a) {
  Multivector<JetScalar> out(a.coeffs().dim());
  for (size_t mask = 0; mask < out.mask_count(); ++mask)
    if (!a.coeffs()[mask].is_zero()) out[mask] = s * a.coeffs()[mask];
  return FormField(a.chart(), std::move(out));
}

FormField operator*(cplx s, const FormField& a) { return JetScalar::constant(s) * a; }

FormField wedge(const FormField& a, const FormField& b) {
  return FormField(a.chart(), wedge(a.coeffs(), b.coeffs()));
}

MixedForm exterior_d(const FormField& f, const RVec& p) {
  if (!f.chart()->contains(p))
    throw std::invalid_argument("exterior_d: point outside chart domain");
  const int m = f.dim();
  JetContext ctx(p);
  MixedForm out(m);
  for (size_t mask = 0; mask < f.coeffs().mask_count(); ++mask) {
    if (f.coeffs()[mask].is_zero()) continue;
    const Jet jet = f.coeffs()[mask].jet(ctx);
    for (int j = 0; j < m; ++j) {
      if (mask & (size_t(1) << j)) continue;
      if (jet.g(j) == cplx(0.0)) continue;
      const int sign = MixedForm::wedge_sign(size_t(1) << j, mask);
      out[mask | (size_t(1) << j)] += cplx(sign) * jet.g(j);
    }
  }
  return out;
}

MixedForm exterior_d_twice(const FormField& f, const RVec& p) {
  const int m = f.dim();
  JetContext ctx(p);
  MixedForm out(m);
  for (size_t mask = 0; mask < f.coeffs().mask_count(); ++mask) {
    if (f.coeffs()[mask].is_zero()) continue;
    const Jet jet = f.coeffs()[mask].jet(ctx);
    for (int k = 0; k < m; ++k) {
      if (mask & (size_t(1) << k)) continue;
      const size_t mk = mask | (size_t(1) << k);
      const int sk = MixedForm::wedge_sign(size_t(1) << k, mask);
      for (int j = 0; j < m; ++j) {
        if (mk & (size_t(1) << j)) continue;
        const int sj = MixedForm::wedge_sign(size_t(1) << j, mk);
        out[mk | (size_t(1) << j)] += cplx(sj * sk) * jet.h(j, k);
      }
    }
  }
  return out;
}

MixedForm twisted_d(const FormField& f, const FormField& h, const RVec& p) {
  if (!h.coeffs().is_homogeneous(3))
    throw std::invalid_argument("twisted_d: twist must be a 3-form");
  JetContext ctx(p);
  return exterior_d(f, p) + wedge(h.value(ctx), f.value(ctx));
}

double in_clifford_image(const MixedForm& rho_deriv, const MixedForm& rho) {
  const int m = rho.dim();
  if (form_norm(rho) == 0.0) throw std::invalid_argument("in_clifford_image: zero spinor");
  const auto rows = static_cast<Eigen::Index>(rho.mask_count());
  Mat a(rows, 2 * m + 1);
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
  for (size_t mask = 0; mask < rho.mask_count(); ++mask)
    a(static_cast<Eigen::Index>(mask), 2 * m) = rho[mask];
  Vec b(rows);
  for (size_t mask = 0; mask < rho_deriv.mask_count(); ++mask)
    b(static_cast<Eigen::Index>(mask)) = rho_deriv[mask];
  Vec sol = a.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
  return (a * sol - b).norm();
}

FormField pullback(const JetMap& map, const FormField& f) {
  const int ms = map.source_dim();
  if (f.dim() != map.target_dim())
    throw std::invalid_argument("pullback: field does not live on the map target");
  // dphi_k as 1-form fields over the source
  std::vector<Multivector<JetScalar>> dphi;
  dphi.reserve(map.target_dim());
  for (int k = 0; k < map.target_dim(); ++k) {
    Multivector<JetScalar> one(ms);
    for (int j = 0; j < ms; ++j) {
      JetScalar pj = diff(map.components()[k], j);
      if (!pj.is_zero()) one[size_t(1) << j] = pj;
    }
    dphi.push_back(std::move(one));
  }
  Multivector<JetScalar> out(ms);
  for (size_t mask = 0; mask < f.coeffs().mask_count(); ++mask) {
    if (f.coeffs()[mask].is_zero()) continue;
    Multivector<JetScalar> term =
        Multivector<JetScalar>::scalar(ms, substitute(f.coeffs()[mask], map.components()));
    for (size_t rest = mask; rest; rest &= rest - 1)
      term = wedge(term, dphi[__builtin_ctzll(rest)]);
    out = out + term;
  }
  return FormField(map.source(), std::move(out));
}

MixedForm pullback_value(const JetMap& map, const FormField& f, const RVec& p) {
  if (!map.source()->contains(p))
    throw std::invalid_argument("pullback_value: point outside source domain");
  JetContext ctx(p);
  const Mat jac = map.jacobian(ctx);
  Vec target_pt = map.value(ctx);
  RVec tp(target_pt.size());
  for (int k = 0; k < target_pt.size(); ++k) {
    if (std::abs(target_pt(k).imag()) > 1e-9)
      throw std::runtime_error("pullback_value: image point has imaginary residue");
    tp(k) = target_pt(k).real();
  }
  MixedForm fv = f.value(tp);
  const int ms = map.source_dim();
  MixedForm out(ms);
  for (size_t mask = 0; mask < fv.mask_count(); ++mask) {
    if (fv[mask] == cplx(0.0)) continue;
    MixedForm term = MixedForm::scalar(ms, fv[mask]);
    for (size_t rest = mask; rest; rest &= rest - 1) {
      const int k = __builtin_ctzll(rest);
      term = wedge(term, one_form(jac.row(k).transpose()));
    }
    out = out + term;
  }
  return out;
}

FormField d_scalar(ChartPtr chart, const JetScalar& f) {
  const int m = chart->dim();
  Multivector<JetScalar> out(m);
  for (int j = 0; j < m; ++j) {
    JetScalar pj = diff(f, j);
    if (!pj.is_zero()) out[size_t(1) << j] = pj;
  }
  return FormField(std::move(chart), std::move(out));
}

FormField dlog(ChartPtr chart, const JetScalar& f) {
  const int m = chart->dim();
  Multivector<JetScalar> out(m);
  for (int j = 0; j < m; ++j) {
    JetScalar pj = diff(f, j);
    if (!pj.is_zero()) out[size_t(1) << j] = pj / f;
  }
  return FormField(std::move(chart), std::move(out));
}

// ---------------------------------------------------------------------------

SectionField::SectionField(ChartPtr chart, std::vector<JetScalar> x, std::vector<JetScalar> xi)
    : chart_(std::move(chart)), x_(std::move(x)), xi_(std::move(xi)) {
  const size_t m = static_cast<size_t>(chart_->dim());
  if (x_.size() != m || xi_.size() != m)
    throw std::invalid_argument("SectionField: component count mismatch");
}

CliffordVector SectionField::value(const RVec& p) const {
  JetContext ctx(p);
  const int m = chart_->dim();
  CliffordVector v{Vec(m), Vec(m)};
  for (int j = 0; j < m; ++j) {
    v.x(j) = x_[j].value(ctx);
    v.xi(j) = xi_[j].value(ctx);
  }
  return v;
}

JetScalar SectionField::pairing_with(const SectionField& other) const {
  JetScalar acc;
  for (size_t j = 0; j < x_.size(); ++j)
    acc = acc + xi_[j] * other.x_[j] + other.xi_[j] * x_[j];
  return acc * cplx(0.5);
}

SectionField courant_bracket(const SectionField& u, const SectionField& v, const FormField& h) {
  const ChartPtr& chart = u.chart();
  const int m = chart->dim();
  if (!h.structurally_zero() && !h.coeffs().is_homogeneous(3))
    throw std::invalid_argument("courant_bracket: twist must be a 3-form");
  // [X, Y]_Lie
  std::vector<JetScalar> xout(m);
  for (int j = 0; j < m; ++j) {
    JetScalar acc;
    for (int k = 0; k < m; ++k)
      acc = acc + u.x()[k] * diff(v.x()[j], k) - v.x()[k] * diff(u.x()[j], k);
    xout[j] = acc;
  }
  // L_X eta - i_Y d xi + i_Y i_X H
  std::vector<JetScalar> xiout(m);
  for (int j = 0; j < m; ++j) {
    JetScalar acc;
    for (int k = 0; k < m; ++k) {
      // (L_X eta)_j = X^k d_k eta_j + eta_k d_j X^k
      acc = acc + u.x()[k] * diff(v.xi()[j], k) + v.xi()[k] * diff(u.x()[k], j);
      // (i_Y d xi)_j = Y^k (d_k xi_j - d_j xi_k)
      acc = acc - v.x()[k] * (diff(u.xi()[j], k) - diff(u.xi()[k], j));
    }
    xiout[j] = acc;
  }
  if (!h.structurally_zero()) {
    Multivector<JetScalar> hx = interior(u.x(), h.coeffs());
    Multivector<JetScalar> hxy = interior(v.x(), hx);
    for (int j = 0; j < m; ++j) xiout[j] = xiout[j] + hxy[size_t(1) << j];
  }
  return SectionField(chart, std::move(xout), std::move(xiout));
}

CliffordVector courant_bracket(const SectionField& u, const SectionField& v, const FormField& h,
                               const RVec& p) {
  if (!u.chart()->contains(p))
    throw std::invalid_argument("courant_bracket: point outside chart domain");
  return courant_bracket(u, v, h).value(p);
}

// ---------------------------------------------------------------------------

MatrixField MatrixField::from_entries(ChartPtr chart,
                                      std::vector<std::vector<JetScalar>> entries) {
  const int r = static_cast<int>(entries.size());
  const int c = r ? static_cast<int>(entries[0].size()) : 0;
  auto data = std::make_shared<std::vector<std::vector<JetScalar>>>(std::move(entries));
  return MatrixField(r, c, [data, r, c](const RVec& p) {
    JetContext ctx(p);
    Mat out(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) out(i, j) = (*data)[i][j].value(ctx);
    return out;
  });
}

MatrixField MatrixField::pullback_complex_structure(const JetMap& map) {
  if (map.target_dim() != map.source_dim() || map.target_dim() % 2 != 0)
    throw std::invalid_argument("pullback_complex_structure: map must be square, even dim");
  const int n = map.target_dim();
  const RMat istd = standard_complex_structure(n / 2);
  auto m = std::make_shared<JetMap>(map);
  return MatrixField(n, n, [m, istd, n](const RVec& p) -> Mat {
    RMat jac = m->real_jacobian(p);
    Eigen::FullPivLU<RMat> lu(jac);
    if (!lu.isInvertible())
      throw std::runtime_error("pullback_complex_structure: singular Jacobian");
    RMat i = lu.solve(istd * jac);
    return i.cast<cplx>();
  });
}

RMat MatrixField::real_at(const RVec& p, double tol) const {
  Mat v = eval_(p);
  if (v.imag().cwiseAbs().maxCoeff() > tol)
    throw std::runtime_error("MatrixField: entries have imaginary residue");
  return v.real();
}

RMat standard_complex_structure(int half_dim) {
  RMat i = RMat::Zero(2 * half_dim, 2 * half_dim);
  for (int k = 0; k < half_dim; ++k) {
    i(2 * k + 1, 2 * k) = 1.0;
    i(2 * k, 2 * k + 1) = -1.0;
  }
  return i;
}

}  // namespace gcgeo
