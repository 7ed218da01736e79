#include "gcgeo/checks.hpp"

#include <future>
#include <unsupported/Eigen/MatrixFunctions>

#include "gcgeo/fixtures.hpp"

namespace gcgeo {

namespace {

CheckResult run_one(const RunConfig& cfg, const std::string& name, const std::string& desc,
                    double default_tol, const std::function<double(int&)>& body) {
  CheckResult r;
  r.name = name;
  r.description = desc;
  r.tolerance = cfg.tolerance_for(name, default_tol);
  try {
    int used = 0;
    r.max_residual = body(used);
    r.samples = used;
    r.status = r.max_residual < r.tolerance ? "pass" : "fail";
  } catch (const SamplingError&) {
    r.status = "inconclusive";
    r.max_residual = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

double upd(double& worst, double v) { return worst = std::max(worst, v); }

// --------------------------------------------------------------- shell suite

double hopf_closedness(const RunConfig& cfg, int& used) {
  HopfData hd = hopf_fixture();
  Rng rng = cfg.rng_for("hopf.closedness");
  double worst = 0.0;
  for (const RVec& p : hd.chart_c->sample_many(cfg.samples, rng)) {
    MixedForm resid = exterior_d(hd.c_form, p) + hd.h_twist.value(p);
    upd(worst, form_norm(resid));
    ++used;
  }
  return worst;
}

double hopf_integrability(const RunConfig& cfg, int& used, bool alt) {
  HopfData hd = hopf_fixture();
  Rng rng = cfg.rng_for(alt ? "hopf.integrability-alt" : "hopf.integrability");
  const FormField& gen = alt ? hd.rho_alt : hd.rho;
  const ChartPtr& chart = alt ? hd.chart_rho2 : hd.chart_c;
  double worst = 0.0;
  for (const RVec& p : chart->sample_many(cfg.samples, rng)) {
    MixedForm td = twisted_d(gen, hd.h_twist, p);
    upd(worst, in_clifford_image(td, gen.value(p)));
    ++used;
  }
  return worst;
}

double hopf_gauge_w(const RunConfig& cfg, int& used) {
  HopfData hd = hopf_fixture();
  Rng rng = cfg.rng_for("hopf.gauge-w");
  double worst = 0.0;
  for (const RVec& p : hd.chart_w->sample_many(cfg.samples, rng)) {
    JetContext ctx(p);
    const cplx w2 = hd.w2c.value(ctx);
    MixedForm lhs = w2 * wedge(exp_two_form(hd.b2.value(ctx)), hd.rho.value(ctx));
    MixedForm rhs = MixedForm::scalar(4, w2) +
                    wedge(one_form(hd.w1c.jet(ctx).g), one_form(hd.w2c.jet(ctx).g));
    upd(worst, form_norm(lhs - rhs));
    ++used;
  }
  return worst;
}

double hopf_gauge_z(const RunConfig& cfg, int& used) {
  HopfData hd = hopf_fixture();
  Rng rng = cfg.rng_for("hopf.gauge-z");
  double worst = 0.0;
  for (const RVec& p : hd.chart_z->sample_many(cfg.samples, rng)) {
    JetContext ctx(p);
    const cplx z1 = hd.z1c.value(ctx), z2 = hd.z2c.value(ctx);
    MixedForm lhs = (z1 * z2) * wedge(exp_two_form(hd.b1.value(ctx)), hd.rho.value(ctx));
    MixedForm rhs = MixedForm::scalar(4, z1 * z2) +
                    wedge(one_form(hd.z1c.jet(ctx).g), one_form(hd.z2c.jet(ctx).g));
    upd(worst, form_norm(lhs - rhs));
    ++used;
  }
  return worst;
}

double hopf_jacobian(const RunConfig& cfg, int& used) {
  HopfData hd = hopf_fixture();
  Rng rng = cfg.rng_for("hopf.jacobian");
  double worst = 0.0;
  for (const RVec& p : hd.chart_w->sample_many(cfg.samples, rng)) {
    JetContext ctx(p);
    const double det = hd.w_map.real_jacobian(p).determinant();
    const double expected = 4.0 / std::norm(hd.r2.value(ctx));  // 4 / R^4, R^2 real
    upd(worst, std::abs(det - expected) / std::abs(expected));
    ++used;
  }
  return worst;
}

double hopf_cover(const RunConfig& cfg, int& used) {
  HopfData hd = hopf_fixture();
  Rng rng = cfg.rng_for("hopf.cover");
  CoverReport rep = verify_cover(hd.cover, cfg.samples, rng);
  used = cfg.samples;
  return rep.max_residual();
}

double hopf_cover_negative(const RunConfig& cfg, int& used) {
  HopfData hd = hopf_fixture();
  Rng rng = cfg.rng_for("hopf.cover-negative");
  // both chart gauges have nonvanishing exterior derivative on the shell
  double worst = -1.0;
  for (const RVec& p : sample_overlap(hd.cover, 0, 1, cfg.samples, rng)) {
    const double d1 = form_norm(exterior_d(hd.b1, p));
    const double d2 = form_norm(exterior_d(hd.b2, p));
    upd(worst, 1e-3 - std::min(d1, d2));
    ++used;
  }
  return worst;
}

double hopf_im_parts(const RunConfig& cfg, int& used) {
  HopfData hd = hopf_fixture();
  Rng rng = cfg.rng_for("hopf.gauge-real");
  double worst = 0.0;
  for (const RVec& p : hd.chart_w->sample_many(cfg.samples / 2, rng)) {
    Mat b = two_form_to_matrix(hd.b2.value(p));
    upd(worst, b.imag().cwiseAbs().maxCoeff());
    ++used;
  }
  for (const RVec& p : hd.chart_z->sample_many(cfg.samples / 2, rng)) {
    Mat b = two_form_to_matrix(hd.b1.value(p));
    upd(worst, b.imag().cwiseAbs().maxCoeff());
    ++used;
  }
  return worst;
}

double hopf_imc_formula(const RunConfig& cfg, int& used) {
  HopfData hd = hopf_fixture();
  Rng rng = cfg.rng_for("hopf.imc-formula");
  FormField lhs = hd.c_form - hd.c_form.conjugated();
  FormField rhs =
      wedge(dlog(hd.chart_c, hd.x1b / hd.x1),
            d_scalar(hd.chart_c, js_log(hd.x2b * hd.x2 / hd.r2))) +
      wedge(dlog(hd.chart_c, hd.r2), dlog(hd.chart_c, hd.x2b / hd.x2));
  double worst = 0.0;
  for (const RVec& p : hd.chart_c->sample_many(cfg.samples, rng)) {
    upd(worst, form_norm(lhs.value(p) - rhs.value(p)));
    ++used;
  }
  return worst;
}

double hopf_b2_closed_form(const RunConfig& cfg, int& used) {
  HopfData hd = hopf_fixture();
  Rng rng = cfg.rng_for("hopf.b2-closed-form");
  FormField rhs = (js_abs2(hd.x2) / (2.0 * hd.r2)) *
                  wedge(dlog(hd.chart_w, hd.x1b / hd.x1), dlog(hd.chart_w, hd.x2b / hd.x2));
  double worst = 0.0;
  for (const RVec& p : hd.chart_w->sample_many(cfg.samples, rng)) {
    upd(worst, form_norm(hd.b2.value(p) - rhs.value(p)));
    ++used;
  }
  return worst;
}

double hopf_equivariance(const RunConfig& cfg, int& used) {
  HopfData hd = hopf_fixture();
  Rng rng = cfg.rng_for("hopf.equivariance");
  double worst = 0.0;
  auto invariant = [&](const FormField& f, const ChartPtr& chart, int n) {
    for (const RVec& p : chart->sample_many(n, rng)) {
      upd(worst, form_norm(pullback_value(hd.deck, f, p) - f.value(p)));
      ++used;
    }
  };
  const int n = std::max(4, cfg.samples / 4);
  invariant(hd.c_form, hd.chart_c, n);
  invariant(hd.rho, hd.chart_c, n);
  invariant(hd.h_twist, hd.shell, n);
  invariant(hd.w_form, hd.chart_w, n);
  invariant(hd.z_form, hd.chart_z, n);
  return worst;
}

double hopf_rho_alt_consistency(const RunConfig& cfg, int& used) {
  HopfData hd = hopf_fixture();
  Rng rng = cfg.rng_for("hopf.rho-alt");
  double worst = 0.0;
  // on the common domain the alternate generator is (conj x2 / x1) rho
  for (const RVec& p : hd.chart_w->sample_many(cfg.samples / 2, rng)) {
    JetContext ctx(p);
    const cplx f = (hd.x2b / hd.x1).value(ctx);
    upd(worst, form_norm(hd.rho_alt.value(ctx) - f * hd.rho.value(ctx)));
    ++used;
  }
  // near the degeneracy locus of C it stays pure (annihilator of full rank)
  Rng rng2 = cfg.rng_for("hopf.rho-alt-near");
  for (int k = 0; k < cfg.samples / 4; ++k) {
    RVec p = hd.chart_rho2->sample(rng2);
    p(2) *= 0.02;  // push towards x2 = 0, fixing |x1| bounded below
    p(3) *= 0.02;
    if (!hd.chart_rho2->contains(p)) continue;
    upd(worst, std::abs(annihilator(hd.rho_alt.value(p)).dim() - 4));
    ++used;
  }
  return worst;
}

double hopf_spinor_match(const RunConfig& cfg, int& used) {
  HopfData hd = hopf_fixture();
  Rng rng = cfg.rng_for("hopf.spinor-match");
  double worst = 0.0;
  for (const RVec& p : sample_overlap(hd.cover, 0, 1, std::max(8, cfg.samples / 2), rng)) {
    Subspace ann = annihilator(hd.rho.value(p));
    for (int chart = 0; chart < 2; ++chart) {
      GCStructure j = reconstruct_gc(hd.cover, chart, p);
      upd(worst, ann.gap_to(eigenbundle(j)));
    }
    ++used;
  }
  return worst;
}

double hopf_reconstruct_agreement(const RunConfig& cfg, int& used) {
  HopfData hd = hopf_fixture();
  Rng rng = cfg.rng_for("hopf.reconstruct");
  double worst = 0.0;
  for (const RVec& p : sample_overlap(hd.cover, 0, 1, cfg.samples, rng)) {
    GCStructure j0 = reconstruct_gc(hd.cover, 0, p);
    GCStructure j1 = reconstruct_gc(hd.cover, 1, p);
    upd(worst, (j0.matrix() - j1.matrix()).cwiseAbs().maxCoeff());
    RMat pp = hd.p_field.real_at(p);
    upd(worst, (underlying_poisson(j0) - pp).cwiseAbs().maxCoeff());
    ++used;
  }
  return worst;
}

// ------------------------------------------------------------- phi22 suite

double phi22_axioms(const RunConfig& cfg, int& used) {
  Phi22Data pd = phi22_fixture();
  Rng rng = cfg.rng_for("phi22.axioms");
  used = std::max(64, cfg.samples);
  return check_axioms(pd.g, used, rng);
}

double phi22_multiplicative(const RunConfig& cfg, int& used) {
  Phi22Data pd = phi22_fixture();
  Rng rng = cfg.rng_for("phi22.multiplicative");
  used = std::max(16, cfg.samples);
  return check_multiplicative(pd.g, pd.omega, used, rng);
}

double phi22_closed(const RunConfig& cfg, int& used) {
  Phi22Data pd = phi22_fixture();
  Rng rng = cfg.rng_for("phi22.closed");
  double worst = 0.0;
  for (int k = 0; k < cfg.samples; ++k) {
    RVec p = k % 2 == 0 ? pd.g.arrows->sample(rng) : pd.singular_arrow_sampler(rng);
    upd(worst, form_norm(exterior_d(pd.omega, p)));
    ++used;
  }
  return worst;
}

double phi22_nondegenerate(const RunConfig& cfg, int& used) {
  Phi22Data pd = phi22_fixture();
  Rng rng = cfg.rng_for("phi22.nondegenerate");
  double min_det = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cfg.samples; ++k) {
    RVec p = k % 2 == 0 ? pd.g.arrows->sample(rng) : pd.singular_arrow_sampler(rng);
    RMat w = two_form_to_matrix(pd.omega.value(p)).imag();
    min_det = std::min(min_det, std::abs(w.determinant()));
    ++used;
  }
  return 0.05 - min_det;  // negative iff bounded away from zero
}

double phi22_displayed_identity(const RunConfig& cfg, int& used) {
  Phi22Data pd = phi22_fixture();
  Rng rng = cfg.rng_for("phi22.t-minus-s");
  double worst = 0.0;
  for (const RVec& p : pd.arrows_nz->sample_many(cfg.samples, rng)) {
    MixedForm lhs = pullback_value(pd.g.t, pd.base_w_form, p) -
                    pullback_value(pd.g.s, pd.base_w_form, p);
    upd(worst, form_norm(lhs - pd.omega.value(p)));
    ++used;
  }
  return worst;
}

double phi22_fibre_orth(const RunConfig& cfg, int& used) {
  Phi22Data pd = phi22_fixture();
  Rng rng = cfg.rng_for("phi22.fibre-orth");
  used = cfg.samples;
  return check_fibre_orthogonality(pd.g, pd.omega.im(), cfg.samples, rng);
}

double phi22_diff_base(const RunConfig& cfg, int& used) {
  Phi22Data pd = phi22_fixture();
  Rng rng = cfg.rng_for("phi22.diff-base");
  HolSympGroupoidData data{pd.g, pd.omega};
  BaseHolPoisson base = differentiate_base(data);
  const RMat istd = standard_complex_structure(2);
  double worst = 0.0;
  for (const RVec& x : pd.base_nz->sample_many(std::max(8, cfg.samples / 4), rng)) {
    RMat p_num = base.p.real_at(x);
    RMat w = two_form_to_matrix(pd.base_w_form.value(x)).imag();
    upd(worst, (p_num - w.inverse()).cwiseAbs().maxCoeff());
    upd(worst, (base.i.real_at(x) - istd).cwiseAbs().maxCoeff());
    upd(worst, base.holomorphy_residual(x));
    upd(worst, (source_poisson_at(data, x) + p_num).cwiseAbs().maxCoeff());
    ++used;
  }
  return worst;
}

double phi22_equivariance(const RunConfig& cfg, int& used) {
  Phi22Data pd = phi22_fixture();
  Rng rng = cfg.rng_for("phi22.equivariance");
  const RVec& sh = pd.arrow_deck_shift;
  const RVec shb = sh.segment(4, 4);
  double worst = 0.0;
  for (int k = 0; k < cfg.samples; ++k) {
    auto [h, g] = pd.g.sample_composable_pair(rng);
    upd(worst, (pd.g.source_of(h + sh) - (pd.g.source_of(h) + shb)).cwiseAbs().maxCoeff());
    upd(worst, (pd.g.target_of(h + sh) - (pd.g.target_of(h) + shb)).cwiseAbs().maxCoeff());
    upd(worst, (pd.g.inv.real_value(h + sh) - (pd.g.inv.real_value(h) + sh)).cwiseAbs().maxCoeff());
    upd(worst, (pd.g.mul(h + sh, g + sh) - (pd.g.mul(h, g) + sh)).cwiseAbs().maxCoeff());
    RVec x = pd.g.base->sample(rng);
    upd(worst,
        (pd.g.id.real_value(x + shb) - (pd.g.id.real_value(x) + sh)).cwiseAbs().maxCoeff());
    upd(worst, form_norm(pd.omega.value(h + sh) - pd.omega.value(h)));
    ++used;
  }
  return worst;
}

// ------------------------------------------------------- pair groupoid suite

double pair_axioms(const RunConfig& cfg, int& used) {
  Rng rng = cfg.rng_for("pair.axioms");
  double worst = 0.0;
  // real symplectic plane (m = 2) exercises the groupoid layer alone
  Mat w2 = Mat::Zero(2, 2);
  w2(0, 1) = kI;
  w2(1, 0) = -kI;
  PairGroupoidData flat = pair_groupoid_fixture(w2, 2);
  upd(worst, check_axioms(flat.data.g, cfg.samples / 2, rng));
  PairGroupoidData hol = pair_groupoid_fixture(standard_hol_symplectic(4), 4);
  upd(worst, check_axioms(hol.data.g, cfg.samples / 2, rng));
  used = cfg.samples;
  return worst;
}

double pair_modify_law(const RunConfig& cfg, int& used) {
  Rng rng = cfg.rng_for("pair.modify");
  PairGroupoidData pg = pair_groupoid_fixture(standard_hol_symplectic(4), 4);
  BaseHolPoisson base0 = differentiate_base(pg.data);
  RVec x0 = pg.data.g.base->sample(rng);
  const RMat i0 = base0.i.real_at(x0);
  const RMat p0 = base0.p.real_at(x0);
  double worst = 0.0;
  const int rounds = 100;
  for (int k = 0; k < rounds; ++k) {
    RMat b = random_compatible_gauge(pg, rng);
    upd(worst, check_gauge_condition(i0, p0, b).primary);  // < 1e-12 by construction
    std::vector<std::vector<JetScalar>> entries(4, std::vector<JetScalar>(4));
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) entries[r][c] = JetScalar::constant(b(r, c));
    FormField bf = FormField::from_matrix(pg.data.g.base, entries);
    HolSympGroupoidData mod = modify(pg.data, bf, 2, rng);
    // multiplicative, arrow complex structure squares to -1, base law
    upd(worst, check_multiplicative(mod.g, mod.omega_c, 16, rng));
    RVec q = mod.g.arrows->sample(rng);
    upd(worst, mod.consistency_residual(q));
    BaseHolPoisson base1 = differentiate_base(mod);
    RVec x = mod.g.base->sample(rng);
    upd(worst, (base1.i.real_at(x) - (i0 + p0 * b)).cwiseAbs().maxCoeff());
    upd(worst, (base1.p.real_at(x) - p0).cwiseAbs().maxCoeff());
    ++used;
  }
  return worst;
}

double pair_symp_orth(const RunConfig& cfg, int& used) {
  Rng rng = cfg.rng_for("pair.symp-orth");
  PairGroupoidData pg = pair_groupoid_fixture(standard_hol_symplectic(4), 4);
  used = cfg.samples;
  return check_fibre_orthogonality(pg.data.g, pg.data.omega_c.im(), cfg.samples, rng);
}

double pair_symp_orth_negative(const RunConfig& cfg, int& used) {
  Rng rng = cfg.rng_for("pair.symp-orth-negative");
  PairGroupoidData pg = pair_groupoid_fixture(standard_hol_symplectic(4), 4);
  // a non-multiplicative symplectic form coupling the two factors
  Mat big = Mat::Zero(8, 8);
  big.topLeftCorner(4, 4) = pg.omega0;
  big.bottomRightCorner(4, 4) = -pg.omega0;
  big.topRightCorner(4, 4) = 0.3 * pg.omega0;
  big.bottomLeftCorner(4, 4) = -0.3 * pg.omega0.transpose();
  std::vector<std::vector<JetScalar>> entries(8, std::vector<JetScalar>(8));
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) entries[r][c] = JetScalar::constant(big(r, c));
  FormField bad = FormField::from_matrix(pg.data.g.arrows, entries);
  double maxnorm = check_fibre_orthogonality(pg.data.g, bad.im(), std::max(8, cfg.samples / 4),
                                             rng);
  used = std::max(8, cfg.samples / 4);
  return 1e-3 - maxnorm;  // negative iff the control clearly fails orthogonality
}

double pair_extend(const RunConfig& cfg, int& used) {
  Rng rng = cfg.rng_for("pair.extend");
  PairGroupoidData pg = pair_groupoid_fixture(standard_hol_symplectic(4), 4);
  const LocalGroupoid& g = pg.data.g;
  double worst = 0.0;
  const int rounds = std::max(4, cfg.samples / 8);
  for (int k = 0; k < rounds; ++k) {
    RVec a = g.base->sample(rng), b = g.base->sample(rng), c = g.base->sample(rng),
         d = g.base->sample(rng);
    RVec g1(8), g2(8), g3(8);
    g1 << a, b;
    g2 << b, c;
    g3 << c, d;
    std::vector<RVec> word = {g1, g2, g3};
    std::vector<RVec> tangents = word_tangent_basis(g, word);
    Mat f3 = extend_multiplicative(g, pg.data.omega_c, word, tangents);
    for (int slot = 0; slot < 2; ++slot) {
      auto [word2, tan2] = collapse_word(g, word, slot, tangents);
      Mat f2 = extend_multiplicative(g, pg.data.omega_c, word2, tan2);
      upd(worst, (f3 - f2).cwiseAbs().maxCoeff());
      auto [word1, tan1] = collapse_word(g, word2, 0, tan2);
      Mat f1 = extend_multiplicative(g, pg.data.omega_c, word1, tan1);
      upd(worst, (f3 - f1).cwiseAbs().maxCoeff());
    }
    ++used;
  }
  return worst;
}

double pair_global_nondeg(const RunConfig& cfg, int& used) {
  Rng rng = cfg.rng_for("pair.global-nondeg");
  PairGroupoidData pg = pair_groupoid_fixture(standard_hol_symplectic(4), 4);
  double min_near = std::numeric_limits<double>::infinity();
  double min_far = min_near;
  for (int k = 0; k < cfg.samples; ++k) {
    RVec x = pg.data.g.base->sample(rng);
    RVec near = pg.data.g.id.real_value(x);
    for (int j = 0; j < near.size(); ++j) near(j) += 0.05 * rng.normal();
    RVec far = pg.data.g.arrows->sample(rng);
    min_near = std::min(min_near,
                        std::abs(two_form_to_matrix(pg.data.omega_c.value(near)).imag().determinant()));
    min_far = std::min(min_far,
                       std::abs(two_form_to_matrix(pg.data.omega_c.value(far)).imag().determinant()));
    ++used;
  }
  return 0.5 * min_near - min_far;  // far dets keep the margin set near Id
}

double pair_modify_additive(const RunConfig& cfg, int& used) {
  Rng rng = cfg.rng_for("pair.modify-additive");
  PairGroupoidData pg = pair_groupoid_fixture(standard_hol_symplectic(4), 4);
  double worst = 0.0;
  const int rounds = 8;
  for (int k = 0; k < rounds; ++k) {
    RMat b1 = random_compatible_gauge(pg, rng, 0.2);
    PairGroupoidData pg1 = pair_groupoid_fixture(pg.omega0 + b1.cast<cplx>(), 4);
    RMat b2 = random_compatible_gauge(pg1, rng, 0.2);
    auto field = [&pg](const RMat& b) {
      std::vector<std::vector<JetScalar>> entries(4, std::vector<JetScalar>(4));
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) entries[r][c] = JetScalar::constant(b(r, c));
      return FormField::from_matrix(pg.data.g.base, entries);
    };
    HolSympGroupoidData once = modify(modify(pg.data, field(b1), 2, rng), field(b2), 2, rng);
    HolSympGroupoidData both = modify(pg.data, field(b1 + b2), 2, rng);
    RVec q = pg.data.g.arrows->sample(rng);
    upd(worst, form_norm(once.omega_c.value(q) - both.omega_c.value(q)));
    ++used;
  }
  return worst;
}

// --------------------------------------------------------- linear suites

GCStructure random_gc(int m, int variant, Rng& rng, bool conjugate, Mat* spinor_out) {
  // base structure with a known generator when requested
  RMat j0;
  Mat spinor_omega;  // for variant 0
  if (variant == 0) {
    RMat w(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) w(r, c) = rng.normal();
    RMat omega = w - w.transpose();
    for (int b = 0; b + 1 < m; b += 2) {
      omega(b, b + 1) += 2.0;
      omega(b + 1, b) -= 2.0;
    }
    j0 = gc_from_symplectic(omega).matrix();
    if (spinor_out) *spinor_out = kI * omega.cast<cplx>();
  } else {
    RMat r0(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) r0(r, c) = 0.3 * rng.normal();
    RMat rr = r0.exp();
    RMat i = rr * standard_complex_structure(m / 2) * rr.inverse();
    if (variant == 1) {
      j0 = gc_from_complex(i).matrix();
    } else {
      RMat skew(m, m);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) skew(r, c) = rng.normal();
      skew = RMat(0.5 * (skew - skew.transpose().eval()));
      RMat p = skew - i * skew * i.transpose();
      j0 = gc_from_hol_poisson(HolPoissonPoint(i, p)).matrix();
    }
  }
  if (conjugate) {
    // exponential of an infinitesimal pairing isometry [[A, P], [B, -A^T]]
    RMat a(m, m), p(m, m), b(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        a(r, c) = 0.2 * rng.normal();
        p(r, c) = 0.2 * rng.normal();
        b(r, c) = 0.2 * rng.normal();
      }
    RMat so = RMat::Zero(2 * m, 2 * m);
    so.topLeftCorner(m, m) = a;
    so.topRightCorner(m, m) = p - p.transpose();
    so.bottomLeftCorner(m, m) = b - b.transpose();
    so.bottomRightCorner(m, m) = -a.transpose();
    RMat g = so.exp();
    j0 = g * j0 * g.inverse();
  }
  return GCStructure(m, j0);
}

double linear_gc_suite(const RunConfig& cfg, int& used) {
  Rng rng = cfg.rng_for("linear.gc-suite");
  double worst = 0.0;
  const int rounds = 500;
  for (int m : {2, 4, 6}) {
    for (int k = 0; k < rounds; ++k) {
      const int variant = m == 2 ? k % 2 : k % 3;  // hol-Poisson needs m >= 4 for P != 0
      const bool conjugate = (k % 5) < 2;
      Mat spinor_omega;
      GCStructure j = random_gc(m, variant, rng, conjugate, &spinor_omega);
      RMat braw(m, m);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) braw(r, c) = rng.normal();
      GaugeField bf(m, braw - braw.transpose());
      GCStructure jb = apply_b_transform(j, bf);  // constructor enforces invariants
      upd(worst, (underlying_poisson(jb) - underlying_poisson(j)).cwiseAbs().maxCoeff());
      Classification c0 = classify(j), c1 = classify(jb);
      upd(worst, std::abs(c0.poisson_rank - c1.poisson_rank));
      upd(worst, std::abs(c0.type - c1.type));
      Subspace l = eigenbundle(jb);
      upd(worst, l.isotropy_residual(SplitSpace::standard(m)));
      upd(worst, l.intersect(l.conjugated()).dim());
      // additivity of transforms
      RMat braw2(m, m);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) braw2(r, c) = rng.normal();
      GaugeField bf2(m, braw2 - braw2.transpose());
      GCStructure j2 = apply_b_transform(jb, bf2);
      GCStructure j12 = apply_b_transform(j, GaugeField(m, bf.matrix() + bf2.matrix()));
      upd(worst, (j2.matrix() - j12.matrix()).cwiseAbs().maxCoeff());
      ++used;
    }
  }
  return worst;
}

double linear_spinor_crosscheck(const RunConfig& cfg, int& used) {
  Rng rng = cfg.rng_for("linear.spinor-crosscheck");
  double worst = 0.0;
  const int rounds = 40;
  for (int m : {2, 4, 6}) {
    for (int k = 0; k < rounds; ++k) {
      // symplectic route
      RMat w(m, m);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) w(r, c) = rng.normal();
      RMat omega = w - w.transpose();
      for (int b = 0; b + 1 < m; b += 2) {
        omega(b, b + 1) += 2.0;
        omega(b + 1, b) -= 2.0;
      }
      RMat braw(m, m);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) braw(r, c) = rng.normal();
      RMat bmat = braw - braw.transpose();
      MixedForm rho = b_transform_spinor(bmat.cast<cplx>(), symplectic_generator(omega.cast<cplx>()));
      GCStructure j = apply_b_transform(gc_from_symplectic(omega), GaugeField(m, bmat));
      upd(worst, annihilator(rho).gap_to(eigenbundle(j)));
      upd(worst, real_rank_zero(rho) ? 0.0 : 1.0);
      upd(worst, std::abs(mukai_pairing(rho, conj(rho))) > 1e-10 ? 0.0 : 1.0);
      if (m >= 4) {
        // holomorphic Poisson route
        RMat r0(m, m);
        for (int r = 0; r < m; ++r)
          for (int c = 0; c < m; ++c) r0(r, c) = 0.3 * rng.normal();
        RMat rr = r0.exp();
        RMat i = rr * standard_complex_structure(m / 2) * rr.inverse();
        RMat skew(m, m);
        for (int r = 0; r < m; ++r)
          for (int c = 0; c < m; ++c) skew(r, c) = rng.normal();
        skew = RMat(0.25 * (skew - skew.transpose().eval()));
        RMat p = skew - i * skew * i.transpose();
        // canonical generator: wedge of a basis of (1,0)-covectors of I
        Mat itc = i.transpose().cast<cplx>() - kI * Mat::Identity(m, m);
        Mat dz = nullspace(itc);
        MixedForm zeta = MixedForm::scalar(m, 1.0);
        for (int col = 0; col < dz.cols(); ++col) zeta = wedge(zeta, one_form(dz.col(col)));
        MixedForm rho_p = hol_poisson_generator(generator_bivector(i, p), zeta);
        GCStructure jp = gc_from_hol_poisson(HolPoissonPoint(i, p));
        upd(worst, annihilator(rho_p).gap_to(eigenbundle(jp)));
      }
      ++used;
    }
  }
  return worst;
}

SplitSpace random_split_space(int dim) { return SplitSpace::standard(dim / 2); }

Subspace random_maximal_isotropic(const SplitSpace& v, Rng& rng) {
  const int n = v.dim();
  // eigen-pair construction on the real pairing, then a random isometry
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
  Mat a = (v.pairing().real().inverse() * s).exp().cast<cplx>();
  return Subspace::from_span(n, a * base);
}

DiracRelation random_relation(const SplitSpace& src, const SplitSpace& tgt, Rng& rng) {
  SplitSpace prod = SplitSpace::product(tgt, src.opposite());
  Subspace graph = random_maximal_isotropic(prod, rng);
  return DiracRelation(src, tgt, graph);
}

double linear_dirac_suite(const RunConfig& cfg, int& used) {
  Rng rng = cfg.rng_for("linear.dirac-suite");
  double worst = 0.0;
  const int rounds = 500;
  const int dims[3] = {4, 6, 8};
  for (int k = 0; k < rounds; ++k) {
    SplitSpace u = random_split_space(dims[k % 3]);
    SplitSpace v = random_split_space(dims[(k + 1) % 3]);
    SplitSpace w = random_split_space(dims[(k + 2) % 3]);
    DiracRelation d1 = random_relation(u, v, rng);
    DiracRelation d2 = random_relation(v, w, rng);
    DiracRelation d21 = compose(d2, d1);  // constructor asserts maximal isotropy
    upd(worst, compose(DiracRelation::identity(w), d2).graph().gap_to(d2.graph()));
    DiracRelation d3 = random_relation(w, u, rng);
    upd(worst,
        compose(d3, d21).graph().gap_to(compose(compose(d3, d2), d1).graph()));
    // reduction by a random isotropic
    Subspace maximal = random_maximal_isotropic(v, rng);
    const int kd = 1 + static_cast<int>(rng.next() % static_cast<uint64_t>(v.dim() / 2));
    Subspace kk = Subspace::from_span(v.dim(), maximal.basis().leftCols(kd));
    Reduction red = reduce(v, kk);
    if (red.reduced.dim() > 0) {
      Eigen::JacobiSVD<Mat> svd(red.reduced.pairing());
      const auto& sv = svd.singularValues();
      upd(worst, sv(sv.size() - 1) < 1e-6 * sv(0) ? 1.0 : 0.0);  // induced pairing nondegenerate
    }
    // well-defined against K-shifts, pairing transported
    if (red.reduced.dim() > 0) {
      auto rand_vec = [&rng](int n) {
        Vec x(n);
        for (int j = 0; j < n; ++j) x(j) = cplx(rng.normal(), rng.normal());
        return x;
      };
      Vec lift = red.k_perp.basis() * rand_vec(red.k_perp.dim());
      Vec shift = kk.dim() ? Vec(kk.basis() * rand_vec(kk.dim())) : Vec(Vec::Zero(v.dim()));
      Vec c1 = red.projection * lift;
      Vec c2 = red.projection * (lift + shift);
      upd(worst, (c1 - c2).cwiseAbs().maxCoeff());
      Vec lift2 = red.k_perp.basis() * rand_vec(red.k_perp.dim());
      cplx down = (red.projection * lift).transpose() * red.reduced.pairing() *
                  (red.projection * lift2);
      upd(worst, std::abs(down - v.pair(lift, lift2)));
    }
    // kernels and the induced isometry
    auto [kl, kr] = relation_kernels(d21);
    upd(worst, kl.isotropy_residual(u));
    upd(worst, kr.isotropy_residual(w));
    if (u.dim() == w.dim()) upd(worst, std::abs(kl.dim() - kr.dim()));
    const Mat& gb = d21.graph().basis();
    Mat gv = gb.bottomRows(u.dim()), gw = gb.topRows(w.dim());
    Mat gram_v = gv.transpose() * u.pairing() * gv;
    Mat gram_w = gw.transpose() * w.pairing() * gw;
    upd(worst, (gram_v - gram_w).cwiseAbs().maxCoeff());
    ++used;
  }
  return worst;
}

double linear_complement_props(const RunConfig& cfg, int& used) {
  Rng rng = cfg.rng_for("linear.complement");
  double worst = 0.0;
  for (int k = 0; k < std::max(32, cfg.samples); ++k) {
    SplitSpace v = random_split_space(8);
    Mat span(8, 3);
    for (int c = 0; c < 3; ++c)
      for (int r = 0; r < 8; ++r) span(r, c) = cplx(rng.normal(), rng.normal());
    Subspace s = Subspace::from_span(8, span);
    Subspace perp = orthogonal_complement(v, s);
    upd(worst, std::abs(perp.dim() - 5));
    upd(worst, (s.basis().transpose() * v.pairing() * perp.basis()).cwiseAbs().maxCoeff());
    upd(worst, orthogonal_complement(v, perp).gap_to(s));
    ++used;
  }
  return worst;
}

// --------------------------------------------------------- calculus suite

ChartPtr flat_chart(int m) {
  return std::make_shared<Chart>("flat" + std::to_string(m), m,
                                 std::vector<std::pair<double, double>>(m, {-1.0, 1.0}),
                                 nullptr);
}

JetScalar random_poly(int m, Rng& rng, int degree = 2) {
  JetScalar f = JetScalar::constant(rng.normal());
  for (int j = 0; j < m; ++j) f = f + rng.normal() * JetScalar::coordinate(j);
  if (degree >= 2)
    for (int j = 0; j < m; ++j)
      for (int k = j; k < m; ++k)
        f = f + rng.normal() * JetScalar::coordinate(j) * JetScalar::coordinate(k);
  return f;
}

SectionField random_section(ChartPtr chart, Rng& rng) {
  const int m = chart->dim();
  std::vector<JetScalar> x, xi;
  for (int j = 0; j < m; ++j) {
    x.push_back(random_poly(m, rng));
    xi.push_back(random_poly(m, rng));
  }
  return SectionField(std::move(chart), std::move(x), std::move(xi));
}

FormField random_closed_three_form(ChartPtr chart, Rng& rng) {
  const int m = chart->dim();
  Multivector<JetScalar> two(m);
  for (int j = 0; j < m; ++j)
    for (int k = j + 1; k < m; ++k)
      two[(size_t(1) << j) | (size_t(1) << k)] = random_poly(m, rng);
  return FormField(chart, std::move(two)).d();
}

double courant_axioms(const RunConfig& cfg, int& used) {
  Rng rng = cfg.rng_for("courant.axioms");
  ChartPtr chart = flat_chart(4);
  double worst = 0.0;
  const int rounds = 6;
  const int pts = std::max(4, cfg.samples / 8);
  for (int k = 0; k < rounds; ++k) {
    FormField h = random_closed_three_form(chart, rng);
    SectionField u = random_section(chart, rng);
    SectionField v = random_section(chart, rng);
    SectionField w = random_section(chart, rng);
    SectionField uv = courant_bracket(u, v, h);
    SectionField vw = courant_bracket(v, w, h);
    SectionField uw = courant_bracket(u, w, h);
    SectionField jac_lhs = courant_bracket(u, vw, h);
    SectionField jac_rhs1 = courant_bracket(uv, w, h);
    SectionField jac_rhs2 = courant_bracket(v, uw, h);
    SectionField uu = courant_bracket(u, u, h);
    JetScalar f = random_poly(4, rng);
    SectionField fv(chart, {f * v.x()[0], f * v.x()[1], f * v.x()[2], f * v.x()[3]},
                    {f * v.xi()[0], f * v.xi()[1], f * v.xi()[2], f * v.xi()[3]});
    SectionField ufv = courant_bracket(u, fv, h);
    JetScalar xf;
    for (int j = 0; j < 4; ++j) xf = xf + u.x()[j] * diff(f, j);
    JetScalar uu_pair = u.pairing_with(u);
    JetScalar vv_pair = v.pairing_with(v);
    JetScalar lhs4;
    for (int j = 0; j < 4; ++j) lhs4 = lhs4 + u.x()[j] * diff(vv_pair, j);
    JetScalar rhs4 = 2.0 * uv.pairing_with(v);
    for (const RVec& p : chart->sample_many(pts, rng)) {
      JetContext ctx(p);
      // (1) Jacobi identity of the twisted Dorfman bracket
      for (int j = 0; j < 4; ++j) {
        upd(worst, std::abs(jac_lhs.x()[j].value(ctx) - jac_rhs1.x()[j].value(ctx) -
                            jac_rhs2.x()[j].value(ctx)));
        upd(worst, std::abs(jac_lhs.xi()[j].value(ctx) - jac_rhs1.xi()[j].value(ctx) -
                            jac_rhs2.xi()[j].value(ctx)));
        // (2) Leibniz rule in the second slot
        upd(worst, std::abs(ufv.x()[j].value(ctx) -
                            (xf * v.x()[j] + f * uv.x()[j]).value(ctx)));
        upd(worst, std::abs(ufv.xi()[j].value(ctx) -
                            (xf * v.xi()[j] + f * uv.xi()[j]).value(ctx)));
        // (3) [u,u] = rho* d <u,u> / 2, with rho* carrying the pairing factor
        upd(worst, std::abs(uu.x()[j].value(ctx)));
        upd(worst, std::abs(uu.xi()[j].value(ctx) - diff(uu_pair, j).value(ctx)));
      }
      // (4) invariance of the pairing
      upd(worst, std::abs(lhs4.value(ctx) - rhs4.value(ctx)));
      ++used;
    }
  }
  return worst;
}

double calculus_jets_vs_fd(const RunConfig& cfg, int& used) {
  Rng rng = cfg.rng_for("calculus.jets-vs-fd");
  const int m = 3;
  ChartPtr chart = flat_chart(m);
  double worst = 0.0;
  for (int k = 0; k < 12; ++k) {
    JetScalar f = random_poly(m, rng);
    JetScalar g =
        js_exp(0.3 * f) + js_log(JetScalar::constant(4.0) + js_abs2(f)) * js_conj(f) +
        js_sqrt(JetScalar::constant(2.0) + js_abs2(f));
    for (const RVec& p : chart->sample_many(std::max(4, cfg.samples / 16), rng)) {
      Jet jet = g.jet(p);
      const double h = 1e-5;
      upd(worst, (jet.h - jet.h.transpose()).cwiseAbs().maxCoeff());
      for (int j = 0; j < m; ++j) {
        RVec pp = p, pm = p;
        pp(j) += h;
        pm(j) -= h;
        cplx fd = (g.value(pp) - g.value(pm)) / (2.0 * h);
        upd(worst, std::abs(jet.g(j) - fd) / std::max(1.0, std::abs(fd)));
      }
      ++used;
    }
  }
  return worst;
}

double calculus_d_square(const RunConfig& cfg, int& used) {
  Rng rng = cfg.rng_for("calculus.d-square");
  HopfData hd = hopf_fixture();
  double worst = 0.0;
  ChartPtr chart = flat_chart(4);
  Multivector<JetScalar> coeffs(4);
  for (size_t mask = 0; mask < coeffs.mask_count(); ++mask)
    coeffs[mask] = random_poly(4, rng);
  FormField f(chart, std::move(coeffs));
  for (const RVec& p : chart->sample_many(cfg.samples / 2, rng)) {
    upd(worst, form_norm(exterior_d_twice(f, p)));
    upd(worst, form_norm(exterior_d(f.d(), p)));
    ++used;
  }
  for (const RVec& p : hd.chart_c->sample_many(cfg.samples / 2, rng)) {
    upd(worst, form_norm(exterior_d_twice(hd.c_form, p)));
    upd(worst, form_norm(exterior_d(hd.b2.d(), p)));
    ++used;
  }
  return worst;
}

double calculus_pullback_naturality(const RunConfig& cfg, int& used) {
  Rng rng = cfg.rng_for("calculus.pullback");
  HopfData hd = hopf_fixture();
  ChartPtr chart = flat_chart(4);
  double worst = 0.0;
  // polynomial map into the shell region composed with a random field there
  std::vector<JetScalar> comps;
  for (int j = 0; j < 4; ++j)
    comps.push_back(JetScalar::constant(1.2 * (j == 0 ? 1 : 0) + 0.2 * j) +
                    0.15 * random_poly(4, rng));
  JetMap phi(chart, 4, comps);
  Multivector<JetScalar> coeffs(4);
  for (int j = 0; j < 4; ++j)
    for (int k = j + 1; k < 4; ++k)
      coeffs[(size_t(1) << j) | (size_t(1) << k)] = random_poly(4, rng);
  FormField f(hd.shell, std::move(coeffs));
  FormField pf = pullback(phi, f);
  FormField dpf = pf.d();
  FormField df = f.d();
  FormField pdf = pullback(phi, df);
  for (const RVec& p : chart->sample_many(cfg.samples, rng)) {
    upd(worst, form_norm(dpf.value(p) - pdf.value(p)));
    upd(worst, form_norm(pf.value(p) - pullback_value(phi, f, p)));
    ++used;
  }
  // identity map pullback is evaluation
  JetMap ident(chart, 4,
               {JetScalar::coordinate(0), JetScalar::coordinate(1), JetScalar::coordinate(2),
                JetScalar::coordinate(3)});
  FormField idf = pullback(ident, FormField(chart, f.coeffs()));
  for (const RVec& p : chart->sample_many(4, rng)) {
    upd(worst, form_norm(idf.value(p) - f.value(p)));
    ++used;
  }
  return worst;
}

double calculus_clifford_witness(const RunConfig& cfg, int& used) {
  Rng rng = cfg.rng_for("calculus.clifford-witness");
  HopfData hd = hopf_fixture();
  double worst = 0.0;
  for (const RVec& p : hd.chart_c->sample_many(std::max(8, cfg.samples / 4), rng)) {
    MixedForm rho = hd.rho.value(p);
    CliffordVector v{Vec(4), Vec(4)};
    for (int j = 0; j < 4; ++j) {
      v.x(j) = cplx(rng.normal(), rng.normal());
      v.xi(j) = cplx(rng.normal(), rng.normal());
    }
    MixedForm target = clifford_action(v, rho) + cplx(rng.normal(), rng.normal()) * rho;
    upd(worst, in_clifford_image(target, rho));
    upd(worst, in_clifford_image(MixedForm(4), rho));
    ++used;
  }
  return worst;
}

double calculus_clifford_negative(const RunConfig& cfg, int& used) {
  Rng rng = cfg.rng_for("calculus.clifford-negative");
  HopfData hd = hopf_fixture();
  double min_res = std::numeric_limits<double>::infinity();
  for (const RVec& p : hd.chart_c->sample_many(std::max(8, cfg.samples / 4), rng)) {
    MixedForm rho = hd.rho.value(p);
    MixedForm noise(4);
    for (size_t mask = 0; mask < noise.mask_count(); ++mask)
      noise[mask] = cplx(rng.normal(), rng.normal());
    noise = (1.0 / form_norm(noise)) * noise;
    min_res = std::min(min_res, in_clifford_image(noise, rho));
    ++used;
  }
  return 1e-3 - min_res;  // generic forms stay far from the Clifford image
}

// ------------------------------------------------------ localization suite

double localization_roundtrip(const RunConfig& cfg, int& used) {
  Rng rng = cfg.rng_for("localization.roundtrip");
  PairGroupoidData pg = pair_groupoid_fixture(standard_hol_symplectic(4), 4);
  double worst = 0.0;
  const int rounds = 4;
  for (int k = 0; k < rounds; ++k) {
    RMat b = random_compatible_gauge(pg, rng);
    LocalizationData loc = modification_fixture(pg, b, rng);
    HolomorphicCover cov = differentiate_localization(loc);
    Rng vr = rng.fork("verify" + std::to_string(k));
    upd(worst, verify_cover(cov, std::max(8, cfg.samples / 4), vr).max_residual());
    for (const RVec& x : cov.charts[1].chart->sample_many(8, rng)) {
      Mat g = two_form_to_matrix(cov.charts[1].gauge.value(x)) -
              two_form_to_matrix(cov.charts[0].gauge.value(x));
      upd(worst, (g - b.cast<cplx>()).cwiseAbs().maxCoeff());
      ++used;
    }
  }
  return worst;
}

double localization_hopf(const RunConfig& cfg, int& used) {
  Rng rng = cfg.rng_for("localization.hopf");
  HopfData hd = hopf_fixture();
  LocalizationData loc = hopf_localization_fixture(hd);
  HolomorphicCover cov = differentiate_localization(loc);
  double worst = 0.0;
  Rng vr = rng.fork("verify");
  upd(worst, verify_cover(cov, std::max(16, cfg.samples / 2), vr).max_residual());
  FormField expected = FormField(hd.chart_z, hd.b2.coeffs()) - hd.b1;  // = W - Z
  for (const RVec& p : sample_overlap(cov, 0, 1, std::max(8, cfg.samples / 4), rng)) {
    MixedForm got = cov.charts[1].gauge.value(p) - cov.charts[0].gauge.value(p);
    upd(worst, form_norm(got - expected.value(p)));
    ++used;
  }
  return worst;
}

}  // namespace

PointClass classify_hopf_point(const RVec& p) {
  HopfData hd = hopf_fixture();
  const double x1sq = p(0) * p(0) + p(1) * p(1);
  const double x2sq = p(2) * p(2) + p(3) * p(3);
  MixedForm rho(4);
  if (x1sq >= x2sq && x1sq > 1e-8)
    rho = hd.rho_alt.value(p);
  else if (x2sq > 1e-8)
    rho = hd.rho.value(p);
  else
    throw std::invalid_argument("classify: point too close to the excluded origin locus");
  GCStructure j = gc_from_eigenbundle(annihilator(rho));
  Classification c = classify(j);
  return PointClass{c.poisson_rank, c.type, c.parity_ok};
}

const std::map<std::string, CheckFn>& check_registry() {
  static const std::map<std::string, CheckFn> reg = [] {
    std::map<std::string, CheckFn> r;
    auto add = [&r](const std::string& name, const std::string& desc, double tol,
                    double (*fn)(const RunConfig&, int&)) {
      r[name] = [name, desc, tol, fn](const RunConfig& cfg) {
        return run_one(cfg, name, desc, tol, [&cfg, fn](int& used) { return fn(cfg, used); });
      };
    };
    add("hopf.closedness", "dC + H vanishes coefficientwise on the shell", 1e-9,
        hopf_closedness);
    r["hopf.integrability"] = [](const RunConfig& cfg) {
      return run_one(cfg, "hopf.integrability",
                     "(d + H^)rho lies in the Clifford image of rho", 1e-8,
                     [&cfg](int& used) { return hopf_integrability(cfg, used, false); });
    };
    r["hopf.integrability-alt"] = [](const RunConfig& cfg) {
      return run_one(cfg, "hopf.integrability-alt",
                     "(d + H^)rho' lies in the Clifford image of rho' near x2 = 0", 1e-8,
                     [&cfg](int& used) { return hopf_integrability(cfg, used, true); });
    };
    add("hopf.gauge-w", "w2 e^{B2}^rho equals w2 + dw1^dw2", 1e-8, hopf_gauge_w);
    add("hopf.gauge-z", "z1 z2 e^{B1}^rho equals z1 z2 + dz1^dz2", 1e-8, hopf_gauge_z);
    add("hopf.jacobian", "w-chart Jacobian determinant equals 4/R^4", 1e-9, hopf_jacobian);
    add("hopf.cover", "two-chart cover gluing relations", 1e-8, hopf_cover);
    add("hopf.cover-negative", "chart gauges B1, B2 are individually non-closed", 0.0,
        hopf_cover_negative);
    add("hopf.gauge-real", "gauge fields B1, B2 are real 2-forms", 1e-9, hopf_im_parts);
    add("hopf.imc-formula", "C - conj(C) matches its d-log expression", 1e-9,
        hopf_imc_formula);
    add("hopf.b2-closed-form", "B2 matches its displayed closed form", 1e-9,
        hopf_b2_closed_form);
    add("hopf.equivariance", "fields are invariant under the doubling deck map", 1e-9,
        hopf_equivariance);
    add("hopf.rho-alt", "alternate generator matches (conj x2/x1) rho and stays pure", 1e-9,
        hopf_rho_alt_consistency);
    add("hopf.spinor-match", "annihilator of rho equals the reconstructed eigenbundle", 1e-8,
        hopf_spinor_match);
    add("hopf.reconstruct", "chart reconstructions agree and share the Poisson block", 1e-8,
        hopf_reconstruct_agreement);

    add("phi22.axioms", "groupoid axioms on sampled composable arrows", 1e-9, phi22_axioms);
    add("phi22.multiplicative", "arrow symplectic form is multiplicative", 1e-8,
        phi22_multiplicative);
    add("phi22.closed", "arrow symplectic form is closed, including w2 = 0", 1e-9,
        phi22_closed);
    add("phi22.nondegenerate", "imaginary part stays nondegenerate, including w2 = 0", 0.0,
        phi22_nondegenerate);
    add("phi22.t-minus-s", "arrow form equals t^* - s^* of the base log form off w2 = 0",
        1e-8, phi22_displayed_identity);
    add("phi22.fibre-orth", "source and target fibres are symplectically orthogonal", 1e-8,
        phi22_fibre_orth);
    add("phi22.diff-base", "base differentiation recovers the log-symplectic tensor", 1e-8,
        phi22_diff_base);
    add("phi22.equivariance", "structure maps commute with the deck shift of w1", 1e-9,
        phi22_equivariance);

    add("pair.axioms", "pair groupoid satisfies the groupoid axioms", 1e-9, pair_axioms);
    add("pair.modify", "gauge modification law on random compatible constant forms", 1e-9,
        pair_modify_law);
    add("pair.symp-orth", "fibre orthogonality on the pair groupoid", 1e-9, pair_symp_orth);
    add("pair.symp-orth-negative", "non-multiplicative control violates fibre orthogonality",
        0.0, pair_symp_orth_negative);
    add("pair.extend", "multiplicative extension is collapse-invariant on words", 1e-8,
        pair_extend);
    add("pair.global-nondeg", "nondegeneracy margin far from Id matches the margin near Id",
        0.0, pair_global_nondeg);
    add("pair.modify-additive", "modification is additive in the gauge field", 1e-9,
        pair_modify_additive);

    add("linear.gc-suite", "transform invariance and eigenbundles of random structures",
        1e-9, linear_gc_suite);
    add("linear.spinor-crosscheck",
        "annihilators of generated spinors match matrix eigenbundles", 1e-8,
        linear_spinor_crosscheck);
    add("linear.dirac-suite", "relation composition, reduction and kernels", 1e-9,
        linear_dirac_suite);
    add("linear.complement", "orthogonal complements: dimension, orthogonality, involution",
        1e-9, linear_complement_props);

    add("courant.axioms", "bracket axioms for random analytic sections and closed twists",
        1e-8, courant_axioms);
    add("calculus.jets-vs-fd", "jet gradients agree with central differences", 1e-7,
        calculus_jets_vs_fd);
    add("calculus.d-square", "exterior derivative squares to zero", 1e-10, calculus_d_square);
    add("calculus.pullback", "pullback commutes with d and matches the pointwise route",
        1e-9, calculus_pullback_naturality);
    add("calculus.clifford-witness", "constructed Clifford images are recognized", 1e-12,
        calculus_clifford_witness);
    add("calculus.clifford-negative", "generic forms are rejected as Clifford images", 0.0,
        calculus_clifford_negative);

    add("localization.roundtrip",
        "differentiating the two-copy modification returns the modifying gauge field", 1e-8,
        localization_roundtrip);
    add("localization.hopf", "differentiating the shell localization matches its cover",
        1e-8, localization_hopf);
    return r;
  }();
  return reg;
}

std::vector<std::string> all_check_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : check_registry()) names.push_back(k);
  return names;
}

std::vector<std::string> builtin_suite(const std::string& name) {
  auto by_prefix = [](std::initializer_list<const char*> prefixes) {
    std::vector<std::string> out;
    for (const auto& [k, v] : check_registry())
      for (const char* p : prefixes)
        if (k.rfind(p, 0) == 0) out.push_back(k);
    return out;
  };
  if (name == "all") return all_check_names();
  if (name == "hopf") return by_prefix({"hopf.", "phi22.", "localization.hopf"});
  if (name == "phi22") return by_prefix({"phi22."});
  if (name == "pair-groupoid") return by_prefix({"pair."});
  if (name == "linear") return by_prefix({"linear."});
  if (name == "courant") return by_prefix({"courant.", "calculus."});
  if (name == "localization") return by_prefix({"localization."});
  throw std::invalid_argument("unknown builtin suite '" + name + "'");
}

std::vector<std::string> builtin_names() {
  return {"all", "hopf", "phi22", "pair-groupoid", "linear", "courant", "localization"};
}

std::vector<CheckResult> run_check_fns(const std::vector<std::pair<std::string, CheckFn>>& fns,
                                       const RunConfig& cfg, bool parallel) {
  std::vector<CheckResult> results(fns.size());
  if (parallel) {
    std::vector<std::future<CheckResult>> futs;
    futs.reserve(fns.size());
    for (const auto& [name, fn] : fns)
      futs.push_back(std::async(std::launch::async, [&cfg, &fn] { return fn(cfg); }));
    for (size_t k = 0; k < fns.size(); ++k) results[k] = futs[k].get();
  } else {
    for (size_t k = 0; k < fns.size(); ++k) results[k] = fns[k].second(cfg);
  }
  std::sort(results.begin(), results.end(),
            [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
  return results;
}

std::vector<CheckResult> run_checks(const std::vector<std::string>& names,
                                    const RunConfig& cfg, bool parallel) {
  const auto& reg = check_registry();
  std::vector<std::pair<std::string, CheckFn>> fns;
  for (const auto& n : names) {
    auto it = reg.find(n);
    if (it == reg.end()) throw std::invalid_argument("unknown check '" + n + "'");
    fns.emplace_back(n, it->second);
  }
  return run_check_fns(fns, cfg, parallel);
}

nlohmann::ordered_json report_json(const std::vector<CheckResult>& results,
                                   const RunConfig& cfg) {
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json c;
    c["name"] = r.name;
    c["description"] = r.description;
    c["samples"] = r.samples;
    if (std::isnan(r.max_residual))
      c["max_residual"] = nullptr;
    else
      c["max_residual"] = r.max_residual;
    c["tolerance"] = r.tolerance;
    c["status"] = r.status;
    checks.push_back(std::move(c));
  }
  nlohmann::ordered_json rep;
  rep["schema"] = 1;
  rep["seed"] = cfg.seed;
  rep["samples"] = cfg.samples;
  rep["checks"] = std::move(checks);
  int code = report_exit_code(results);
  rep["status"] = code == 0 ? "pass" : (code == 1 ? "fail" : "inconclusive");
  return rep;
}

int report_exit_code(const std::vector<CheckResult>& results) {
  bool inconclusive = false;
  for (const auto& r : results) {
    if (r.status == "fail") return 1;
    if (r.status == "inconclusive") inconclusive = true;
  }
  return inconclusive ? 3 : 0;
}

}  // namespace gcgeo
