#include "gcgeo/groupoid.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include "gcgeo/gc_linear.hpp"

namespace gcgeo {

namespace {
RVec concat(const RVec& a, const RVec& b) {
  RVec r(a.size() + b.size());
  r << a, b;
  return r;
}

RMat real_nullspace(const RMat& a, double rtol = kRankTol) {
  if (a.rows() == 0) return RMat::Identity(a.cols(), a.cols());
  Eigen::JacobiSVD<RMat> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() ? sv(0) * rtol : 0.0;
  int r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  return svd.matrixV().rightCols(a.cols() - r);
}
}  // namespace

RVec LocalGroupoid::mul(const RVec& h, const RVec& g) const { return m.real_value(concat(h, g)); }

std::pair<RVec, RVec> LocalGroupoid::sample_composable_pair(Rng& rng, int max_tries) const {
  for (int t_ = 0; t_ < max_tries; ++t_) {
    RVec g;
    try {
      g = arrows->sample(rng);
    } catch (const SamplingError&) {
      break;
    }
    RVec h = s_fibre_sampler(target_of(g), rng);
    if (h.size() == 0) continue;
    if (!arrows->contains(h)) continue;
    if (composable(h, g)) return {h, g};
  }
  throw SamplingError("groupoid '" + arrows->name() + "': no composable pair found");
}

std::array<RVec, 3> LocalGroupoid::sample_composable_triple(Rng& rng, int max_tries) const {
  for (int t_ = 0; t_ < max_tries; ++t_) {
    auto [h, g] = sample_composable_pair(rng);
    RVec k = s_fibre_sampler(target_of(h), rng);
    if (k.size() == 0 || !arrows->contains(k)) continue;
    if (!composable(k, h)) continue;
    // both association orders must be declared composable
    RVec hg = mul(h, g);
    RVec kh = mul(k, h);
    if (!arrows->contains(hg) || !arrows->contains(kh)) continue;
    if (!composable(k, hg) || !composable(kh, g)) continue;
    return {k, h, g};
  }
  throw SamplingError("groupoid '" + arrows->name() + "': no composable triple found");
}

double check_axioms(const LocalGroupoid& g, int n, Rng& rng) {
  double worst = 0.0;
  auto upd = [&worst](const RVec& a, const RVec& b) {
    worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
  };
  for (int k = 0; k < n; ++k) {
    RVec x = g.base->sample(rng);
    RVec idx = g.id.real_value(x);
    upd(g.source_of(idx), x);
    upd(g.target_of(idx), x);
    auto [h, gg] = g.sample_composable_pair(rng);
    RVec hg = g.mul(h, gg);
    upd(g.source_of(hg), g.source_of(gg));
    upd(g.target_of(hg), g.target_of(h));
    upd(g.mul(g.id.real_value(g.target_of(gg)), gg), gg);
    upd(g.mul(gg, g.id.real_value(g.source_of(gg))), gg);
    RVec gi = g.inv.real_value(gg);
    upd(g.mul(gg, gi), g.id.real_value(g.target_of(gg)));
    upd(g.mul(gi, gg), g.id.real_value(g.source_of(gg)));
    try {
      auto [k3, h3, g3] = g.sample_composable_triple(rng);
      upd(g.mul(g.mul(k3, h3), g3), g.mul(k3, g.mul(h3, g3)));
    } catch (const SamplingError&) {
      // associativity sampled opportunistically; pairs alone do not fail the run
    }
  }
  return worst;
}

namespace {
// Orthonormal basis (columns) of {(u, v) : Ds(h) u = Dt(g) v}.
RMat pair_tangent_basis(const LocalGroupoid& g, const RVec& h, const RVec& gg) {
  const int d = g.arrows->dim(), n = g.base->dim();
  RMat cons(n, 2 * d);
  cons << g.s.real_jacobian(h), -g.t.real_jacobian(gg);
  return real_nullspace(cons);
}
}  // namespace

double check_multiplicative(const LocalGroupoid& g, const FormField& theta, int n, Rng& rng) {
  if (!theta.coeffs().is_homogeneous(2))
    throw std::invalid_argument("check_multiplicative: theta must be a 2-form");
  const int d = g.arrows->dim();
  double worst = 0.0;
  int found = 0;
  for (int k = 0; k < n; ++k) {
    std::pair<RVec, RVec> pr;
    try {
      pr = g.sample_composable_pair(rng);
    } catch (const SamplingError&) {
      break;
    }
    const auto& [h, gg] = pr;
    ++found;
    RMat tb = pair_tangent_basis(g, h, gg);
    RVec hg = g.mul(h, gg);
    Mat theta_m = two_form_to_matrix(theta.value(hg));
    Mat theta_h = two_form_to_matrix(theta.value(h));
    Mat theta_g = two_form_to_matrix(theta.value(gg));
    RMat dm = g.m.real_jacobian(concat(h, gg));
    Mat lhs = dm.transpose().cast<cplx>() * theta_m * dm.cast<cplx>();
    Mat rhs = Mat::Zero(2 * d, 2 * d);
    rhs.topLeftCorner(d, d) = theta_h;
    rhs.bottomRightCorner(d, d) = theta_g;
    Mat resid = tb.transpose().cast<cplx>() * (lhs - rhs) * tb.cast<cplx>();
    worst = std::max(worst, resid.cwiseAbs().maxCoeff());
  }
  if (found < 16)
    throw SamplingError("check_multiplicative: only " + std::to_string(found) +
                        " composable samples");
  return worst;
}

double check_fibre_orthogonality(const LocalGroupoid& g, const FormField& omega, int n,
                                 Rng& rng) {
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    RVec p = g.arrows->sample(rng);
    Mat w = two_form_to_matrix(omega.value(p));
    Eigen::FullPivLU<Mat> lu(w);
    if (!lu.isInvertible())
      throw std::runtime_error("check_fibre_orthogonality: omega singular at a sample");
    Mat winv = lu.inverse();
    Mat ds = g.s.jacobian(p), dt = g.t.jacobian(p);
    worst = std::max(worst, (ds * winv * dt.transpose()).cwiseAbs().maxCoeff());
    worst = std::max(worst, (dt * winv * ds.transpose()).cwiseAbs().maxCoeff());
  }
  return worst;
}

RMat HolSympGroupoidData::arrow_complex_structure(const RVec& p) const {
  JetContext ctx(p);
  Mat w = two_form_to_matrix(omega_c.value(ctx));
  RMat b = w.real(), om = w.imag();
  Eigen::FullPivLU<RMat> lu(om);
  if (!lu.isInvertible())
    throw std::runtime_error("HolSympGroupoidData: Im Omega singular at a sample");
  return lu.solve(b);
}

double HolSympGroupoidData::consistency_residual(const RVec& p) const {
  RMat i = arrow_complex_structure(p);
  return (i * i + RMat::Identity(i.rows(), i.cols())).cwiseAbs().maxCoeff();
}

BaseHolPoisson differentiate_base(const HolSympGroupoidData& data) {
  auto d = std::make_shared<HolSympGroupoidData>(data);
  const int n = data.g.base->dim();
  auto at_id = [d](const RVec& x) {
    RVec e = d->g.id.real_value(x);
    RMat dt = d->g.t.real_jacobian(e);
    Mat w = two_form_to_matrix(d->omega_c.value(e));
    return std::tuple<RVec, RMat, Mat>(e, dt, w);
  };
  MatrixField p_field(n, n, [at_id, n](const RVec& x) -> Mat {
    auto [e, dt, w] = at_id(x);
    RMat om = w.imag();
    Eigen::FullPivLU<RMat> lu(om);
    if (!lu.isInvertible()) throw std::runtime_error("differentiate_base: Im Omega singular");
    RMat p = dt * lu.solve(dt.transpose());
    return p.cast<cplx>();
  });
  MatrixField i_field(n, n, [d, at_id, n](const RVec& x) -> Mat {
    auto [e, dt, w] = at_id(x);
    if (numeric_rank(dt.cast<cplx>()) < n)
      throw std::runtime_error("differentiate_base: t_* not surjective along Id");
    RMat i_arr = d->arrow_complex_structure(e);
    RMat right = dt * dt.transpose();
    RMat i_base = (dt * i_arr * dt.transpose()) * right.inverse();
    return i_base.cast<cplx>();
  });
  auto resid = [d, at_id](const RVec& x) {
    auto [e, dt, w] = at_id(x);
    RMat i_arr = d->arrow_complex_structure(e);
    RMat right = dt * dt.transpose();
    RMat i_base = (dt * i_arr * dt.transpose()) * right.inverse();
    return (i_base * dt - dt * i_arr).cwiseAbs().maxCoeff();
  };
  return BaseHolPoisson{std::move(i_field), std::move(p_field), resid};
}

RMat source_poisson_at(const HolSympGroupoidData& data, const RVec& base_pt) {
  RVec e = data.g.id.real_value(base_pt);
  RMat ds = data.g.s.real_jacobian(e);
  Mat w = two_form_to_matrix(data.omega_c.value(e));
  Eigen::FullPivLU<RMat> lu(w.imag());
  return ds * lu.solve(ds.transpose());
}

HolSympGroupoidData modify(const HolSympGroupoidData& data, const FormField& b_base,
                           int precheck_samples, Rng& rng, double pre_tol) {
  BaseHolPoisson base = differentiate_base(data);
  double worst = 0.0;
  for (int k = 0; k < precheck_samples; ++k) {
    RVec x = data.g.base->sample(rng);
    worst = std::max(worst, form_norm(exterior_d(b_base, x)));
    Mat bc = two_form_to_matrix(b_base.value(x));
    worst = std::max(worst, bc.imag().cwiseAbs().maxCoeff());
    RMat i0 = base.i.real_at(x);
    RMat p0 = base.p.real_at(x);
    worst = std::max(worst, check_gauge_condition(i0, p0, bc.real()).primary);
  }
  if (worst > pre_tol)
    throw std::invalid_argument("modify: B fails closedness/gauge precondition, residual " +
                                std::to_string(worst));
  FormField omega1 = data.omega_c + pullback(data.g.t, b_base) - pullback(data.g.s, b_base);
  return HolSympGroupoidData{data.g, std::move(omega1)};
}

std::vector<RVec> word_tangent_basis(const LocalGroupoid& g, const std::vector<RVec>& word) {
  const int d = g.arrows->dim(), nb = g.base->dim();
  const int n = static_cast<int>(word.size());
  RMat cons = RMat::Zero(nb * (n - 1), d * n);
  for (int i = 0; i + 1 < n; ++i) {
    cons.block(nb * i, d * i, nb, d) = g.s.real_jacobian(word[i]);
    cons.block(nb * i, d * (i + 1), nb, d) = -g.t.real_jacobian(word[i + 1]);
  }
  RMat basis = n > 1 ? real_nullspace(cons) : RMat::Identity(d, d);
  std::vector<RVec> out;
  for (int c = 0; c < basis.cols(); ++c) out.push_back(basis.col(c));
  return out;
}

Mat extend_multiplicative(const LocalGroupoid& g, const FormField& f1,
                          const std::vector<RVec>& word, const std::vector<RVec>& tangents) {
  const int d = g.arrows->dim();
  const int n = static_cast<int>(word.size());
  if (n == 0) throw std::invalid_argument("extend_multiplicative: empty word");
  for (int i = 0; i + 1 < n; ++i)
    if ((g.source_of(word[i]) - g.target_of(word[i + 1])).cwiseAbs().maxCoeff() > 1e-9)
      throw std::invalid_argument("extend_multiplicative: word is not composable at slot " +
                                  std::to_string(i));
  std::vector<Mat> theta(n);
  for (int i = 0; i < n; ++i) theta[i] = two_form_to_matrix(f1.value(word[i]));
  const int k = static_cast<int>(tangents.size());
  Mat out = Mat::Zero(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      cplx acc = 0.0;
      for (int i = 0; i < n; ++i) {
        Vec va = tangents[a].segment(d * i, d).cast<cplx>();
        Vec vb = tangents[b].segment(d * i, d).cast<cplx>();
        acc += (va.transpose() * theta[i] * vb)(0, 0);
      }
      out(a, b) = acc;
    }
  return out;
}

std::pair<std::vector<RVec>, std::vector<RVec>> collapse_word(
    const LocalGroupoid& g, const std::vector<RVec>& word, int i,
    const std::vector<RVec>& tangents) {
  const int d = g.arrows->dim();
  const int n = static_cast<int>(word.size());
  if (i < 0 || i + 1 >= n) throw std::invalid_argument("collapse_word: slot out of range");
  if (!g.composable(word[i], word[i + 1]))
    throw std::invalid_argument("collapse_word: slots not in the declared composable domain");
  RVec prod = g.mul(word[i], word[i + 1]);
  RMat dm = g.m.real_jacobian(concat(word[i], word[i + 1]));
  std::vector<RVec> new_word;
  for (int j = 0; j < n; ++j) {
    if (j == i) new_word.push_back(prod);
    if (j != i && j != i + 1) new_word.push_back(word[j]);
  }
  std::vector<RVec> new_tangents;
  for (const RVec& v : tangents) {
    RVec nv(d * (n - 1));
    int out_slot = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) {
        RVec pair_v(2 * d);
        pair_v << v.segment(d * i, d), v.segment(d * (i + 1), d);
        nv.segment(d * out_slot, d) = dm * pair_v;
        ++out_slot;
      } else if (j != i + 1) {
        nv.segment(d * out_slot, d) = v.segment(d * j, d);
        ++out_slot;
      }
    }
    new_tangents.push_back(nv);
  }
  return {new_word, new_tangents};
}

}  // namespace gcgeo
