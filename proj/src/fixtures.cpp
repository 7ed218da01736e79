#include "gcgeo/fixtures.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace gcgeo {

namespace {

JetScalar coord(int i) { return JetScalar::coordinate(i); }

// complex coordinate built from two adjacent real coordinates
JetScalar complex_coord(int re_index) { return coord(re_index) + kI * coord(re_index + 1); }

JetMap projection_map(ChartPtr source, const std::vector<int>& indices) {
  std::vector<JetScalar> comps;
  comps.reserve(indices.size());
  for (int idx : indices) comps.push_back(coord(idx));
  return JetMap(std::move(source), static_cast<int>(indices.size()), std::move(comps));
}

// real 2k-component chart map from k complex scalars
JetMap real_chart_map(ChartPtr source, const std::vector<JetScalar>& zs) {
  std::vector<JetScalar> comps;
  for (const auto& z : zs) {
    comps.push_back(js_re(z));
    comps.push_back(js_im(z));
  }
  return JetMap(std::move(source), static_cast<int>(2 * zs.size()), std::move(comps));
}

double abs2_at(const RVec& p, int re_index) {
  return p(re_index) * p(re_index) + p(re_index + 1) * p(re_index + 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// Hopf shell

HopfData hopf_fixture() {
  HopfData hd;
  const std::vector<std::pair<double, double>> box(4, {-2.0, 2.0});
  const std::vector<std::string> names = {"a1", "b1", "a2", "b2"};
  const double r_lo = 1.05, r_hi = 1.95, margin = 0.1, tube = 0.45;

  auto in_shell = [=](const RVec& p) {
    const double r2 = abs2_at(p, 0) + abs2_at(p, 2);
    return r2 >= r_lo * r_lo && r2 <= r_hi * r_hi;
  };
  hd.shell = std::make_shared<Chart>("hopf-shell", 4, box, in_shell, names);
  hd.chart_c = std::make_shared<Chart>(
      "hopf-c", 4, box,
      [=](const RVec& p) { return in_shell(p) && abs2_at(p, 2) >= margin * margin; }, names);
  hd.chart_w = std::make_shared<Chart>(
      "hopf-w", 4, box,
      [=](const RVec& p) {
        return in_shell(p) && abs2_at(p, 0) >= margin * margin &&
               abs2_at(p, 2) >= margin * margin;
      },
      names);
  hd.chart_z = std::make_shared<Chart>(
      "hopf-z", 4, box,
      [=](const RVec& p) {
        return in_shell(p) && abs2_at(p, 2) >= margin * margin &&
               abs2_at(p, 0) <= tube * tube * abs2_at(p, 2);
      },
      names);
  hd.chart_rho2 = std::make_shared<Chart>(
      "hopf-rho2", 4, box,
      [=](const RVec& p) { return in_shell(p) && abs2_at(p, 0) >= margin * margin; }, names);

  hd.x1 = complex_coord(0);
  hd.x2 = complex_coord(2);
  hd.x1b = js_conj(hd.x1);
  hd.x2b = js_conj(hd.x2);
  hd.r2 = js_abs2(hd.x1) + js_abs2(hd.x2);

  const FormField dx1 = d_scalar(hd.chart_c, hd.x1);
  const FormField dx1b = d_scalar(hd.chart_c, hd.x1b);
  const FormField dx2 = d_scalar(hd.chart_c, hd.x2);
  const FormField dx2b = d_scalar(hd.chart_c, hd.x2b);

  const JetScalar inv_r2 = JetScalar::constant(1.0) / hd.r2;
  hd.c_form = inv_r2 * ((2.0 * hd.x1 / hd.x2b) * wedge(dx1b, dx2b) + wedge(dx1, dx1b) +
                        wedge(dx2, dx2b));
  // e^C truncates at the top degree
  {
    FormField one = FormField::scalar(hd.chart_c, JetScalar::constant(1.0));
    hd.rho = one + hd.c_form + JetScalar::constant(0.5) * wedge(hd.c_form, hd.c_form);
  }
  // alternate generator (conj(x2)/x1) e^C with the 1/conj(x2) pole cancelled
  {
    const JetScalar f = hd.x2b / hd.x1;
    FormField head = FormField::scalar(hd.chart_rho2, f);
    FormField two = inv_r2 * (2.0 * wedge(dx1b, dx2b) + f * (wedge(dx1, dx1b) + wedge(dx2, dx2b)));
    FormField top = (hd.x2b / (hd.x1 * hd.r2 * hd.r2)) * wedge(wedge(dx1, dx1b), wedge(dx2, dx2b));
    hd.rho_alt = FormField(hd.chart_rho2, (head + two + top).coeffs());
  }
  // closed-form twist: -H = (1/R^4)[(x2 dx2b - x2b dx2)^dx1^dx1b + (x1 dx1b - x1b dx1)^dx2^dx2b]
  {
    const JetScalar inv_r4 = inv_r2 * inv_r2;
    FormField t1 = hd.x2 * dx2b - hd.x2b * dx2;
    FormField t2 = hd.x1 * dx1b - hd.x1b * dx1;
    FormField minus_h = inv_r4 * (wedge(t1, wedge(dx1, dx1b)) + wedge(t2, wedge(dx2, dx2b)));
    hd.h_twist = FormField(hd.shell, (-minus_h).coeffs());
  }

  // w-side: w1 = log(x1b R^2 / x1), w2 = x2b / R
  hd.w1c = js_log(hd.x1b * hd.r2 / hd.x1);
  hd.w2c = hd.x2b / js_sqrt(hd.r2);
  hd.w_form = FormField(hd.chart_w,
                        wedge(d_scalar(hd.chart_w, hd.w1c), dlog(hd.chart_w, hd.w2c)).coeffs());
  hd.b2 = hd.w_form - FormField(hd.chart_w, hd.c_form.coeffs());
  hd.w_map = real_chart_map(hd.chart_w, {hd.w1c, hd.w2c});

  // z-side intermediates: p1 = Re(x1/x2b), q1 = i Im(x1/x2b), p2 = |x2|^2
  {
    const JetScalar u = hd.x1 / hd.x2b;
    const JetScalar p1 = js_re(u);
    const JetScalar q1 = u - p1;
    const JetScalar p2 = js_abs2(hd.x2);
    const JetScalar s = js_sqrt(p1 * p1 + 1.0);
    hd.z1c = p2 * (s + q1) / (s - q1);
    // angular factor enters with weight 1/2: conj(x2)/|x2| in place of conj(x2)/x2
    hd.z2c = hd.x2b * (p1 + s) / js_sqrt(p2);
  }
  hd.z_form =
      FormField(hd.chart_z, wedge(dlog(hd.chart_z, hd.z1c), dlog(hd.chart_z, hd.z2c)).coeffs());
  hd.b1 = hd.z_form - FormField(hd.chart_z, hd.c_form.coeffs());
  hd.z_map = real_chart_map(hd.chart_z, {hd.z1c, hd.z2c});

  hd.deck = JetMap(hd.shell, 4, {2.0 * coord(0), 2.0 * coord(1), 2.0 * coord(2), 2.0 * coord(3)});

  hd.i_w = MatrixField::pullback_complex_structure(hd.w_map);
  hd.i_z = MatrixField::pullback_complex_structure(hd.z_map);
  {
    FormField im_c = hd.c_form.im();
    hd.p_field = MatrixField(4, 4, [im_c](const RVec& p) -> Mat {
      RMat w = two_form_to_matrix(im_c.value(p)).real();
      return w.inverse().cast<cplx>();
    });
  }

  hd.cover.charts.push_back(CoverChart{hd.chart_z, hd.i_z, hd.b1});
  hd.cover.charts.push_back(CoverChart{hd.chart_w, hd.i_w, hd.b2});
  hd.cover.poisson = hd.p_field;
  hd.cover.overlaps = {{0, 1}};
  return hd;
}

// ---------------------------------------------------------------------------
// log-symplectic coordinate groupoid

Phi22Data phi22_fixture() {
  Phi22Data pd;
  const double disc = 0.9, margin = 0.1;
  const std::vector<std::string> base_names = {"u1", "v1", "u2", "v2"};
  const std::vector<std::string> arrow_names = {"c1", "d1", "c2", "d2", "u1", "v1", "u2", "v2"};

  std::vector<std::pair<double, double>> base_box = {
      {-2.0, 2.0}, {-2.0, 2.0}, {-0.92, 0.92}, {-0.92, 0.92}};
  auto base_dom = [=](const RVec& p) { return abs2_at(p, 2) <= disc * disc; };
  ChartPtr base = std::make_shared<Chart>("phi22-base", 4, base_box, base_dom, base_names);
  pd.base_nz = std::make_shared<Chart>(
      "phi22-base-nz", 4, base_box,
      [=](const RVec& p) { return base_dom(p) && abs2_at(p, 2) >= margin * margin; },
      base_names);

  std::vector<std::pair<double, double>> arrow_box = {
      {-1.2, 1.2}, {-1.2, 1.2}, {-0.9, 0.9}, {-0.9, 0.9},
      {-2.0, 2.0}, {-2.0, 2.0}, {-0.92, 0.92}, {-0.92, 0.92}};
  auto arrow_dom = [=](const RVec& p) {
    const double w2sq = abs2_at(p, 6);
    if (w2sq > disc * disc) return false;
    const double scale = std::exp(2.0 * p(2));  // |e^{p2}|^2
    return w2sq * scale <= disc * disc;
  };
  ChartPtr arrows = std::make_shared<Chart>("phi22", 8, arrow_box, arrow_dom, arrow_names);
  pd.arrows_nz = std::make_shared<Chart>(
      "phi22-nz", 8, arrow_box,
      [=](const RVec& p) { return arrow_dom(p) && abs2_at(p, 6) >= margin * margin; },
      arrow_names);

  const JetScalar p1 = complex_coord(0), p2 = complex_coord(2);
  const JetScalar w1 = complex_coord(4), w2 = complex_coord(6);

  JetMap s = projection_map(arrows, {4, 5, 6, 7});
  JetMap t = real_chart_map(arrows, {w1 + w2 * p1, w2 * js_exp(p2)});

  // multiplication source layout: left factor h in coords 0..7, right g in 8..15
  ChartPtr pair_space = std::make_shared<Chart>(
      "phi22-pairs", 16, std::vector<std::pair<double, double>>(16, {-2.0, 2.0}),
      nullptr);
  const JetScalar hp1 = complex_coord(0), hp2 = complex_coord(2);
  const JetScalar gp1 = complex_coord(8), gp2 = complex_coord(10);
  const JetScalar gw1 = complex_coord(12), gw2 = complex_coord(14);
  JetMap m = real_chart_map(pair_space, {gp1 + js_exp(gp2) * hp1, gp2 + hp2, gw1, gw2});

  JetMap inv = real_chart_map(arrows, {-p1 * js_exp(-p2), -p2, w1 + w2 * p1, w2 * js_exp(p2)});
  JetMap id = real_chart_map(base, {JetScalar(), JetScalar(), complex_coord(0), complex_coord(2)});

  LocalGroupoid g;
  g.base = base;
  g.arrows = arrows;
  g.s = std::move(s);
  g.t = std::move(t);
  g.m = std::move(m);
  g.inv = std::move(inv);
  g.id = std::move(id);
  g.composable = [arrows](const RVec& h, const RVec& gg) {
    const double ec = std::exp(gg(2)), cs = std::cos(gg(3)), sn = std::sin(gg(3));
    RVec tg(4);  // t(g) = (w1 + w2 p1, w2 e^{p2})
    tg << gg(4) + gg(6) * gg(0) - gg(7) * gg(1), gg(5) + gg(6) * gg(1) + gg(7) * gg(0),
        ec * (gg(6) * cs - gg(7) * sn), ec * (gg(6) * sn + gg(7) * cs);
    if ((h.segment(4, 4) - tg).cwiseAbs().maxCoeff() > 1e-9) return false;
    RVec prod(8);
    prod << gg(0) + ec * (cs * h(0) - sn * h(1)), gg(1) + ec * (sn * h(0) + cs * h(1)),
        gg(2) + h(2), gg(3) + h(3), gg(4), gg(5), gg(6), gg(7);
    return arrows->contains(prod);
  };
  g.s_fibre_sampler = [arrows, disc](const RVec& y, Rng& rng) -> RVec {
    for (int tries = 0; tries < 10000; ++tries) {
      RVec h(8);
      h(0) = rng.uniform(-1.2, 1.2);
      h(1) = rng.uniform(-1.2, 1.2);
      h(2) = rng.uniform(-0.9, 0.9);
      h(3) = rng.uniform(-0.9, 0.9);
      h.segment(4, 4) = y;
      if (arrows->contains(h)) return h;
    }
    return RVec();
  };
  pd.g = std::move(g);

  pd.omega = FormField(
      arrows, (wedge(d_scalar(arrows, w1 + w2 * p1), d_scalar(arrows, p2)) +
               wedge(d_scalar(arrows, p1), d_scalar(arrows, w2)))
                  .coeffs());
  pd.base_w_form = FormField(
      pd.base_nz,
      wedge(d_scalar(pd.base_nz, complex_coord(0)), dlog(pd.base_nz, complex_coord(2)))
          .coeffs());

  pd.singular_arrow_sampler = [arrows](Rng& rng) {
    RVec p = arrows->sample(rng);
    p(6) = 0.0;
    p(7) = 0.0;
    return p;
  };
  pd.arrow_deck_shift = RVec::Zero(8);
  pd.arrow_deck_shift(4) = std::log(4.0);
  return pd;
}

// ---------------------------------------------------------------------------
// pair groupoids

namespace {
LocalGroupoid pair_groupoid_structure(ChartPtr base, ChartPtr* arrows_out) {
  const int n = base->dim();
  std::vector<std::pair<double, double>> arrow_box;
  std::vector<std::string> arrow_names;
  for (int copy = 0; copy < 2; ++copy)
    for (int j = 0; j < n; ++j) {
      arrow_box.push_back(base->box()[j]);
      arrow_names.push_back((copy == 0 ? "t_" : "s_") + base->coord_names()[j]);
    }
  auto base_ptr = base;
  ChartPtr arrows = std::make_shared<Chart>(
      base->name() + "-pairs", 2 * n, arrow_box,
      [base_ptr, n](const RVec& p) {
        return base_ptr->contains(p.head(n)) && base_ptr->contains(p.tail(n));
      },
      arrow_names);
  if (arrows_out) *arrows_out = arrows;

  std::vector<int> head(n), tail(n), mul_idx;
  for (int j = 0; j < n; ++j) head[j] = j, tail[j] = n + j;
  // m(h, g) = (h.target, g.source); h occupies 0..2n-1, g occupies 2n..4n-1
  for (int j = 0; j < n; ++j) mul_idx.push_back(j);
  for (int j = 0; j < n; ++j) mul_idx.push_back(3 * n + j);
  ChartPtr pair_space = std::make_shared<Chart>(
      base->name() + "-pairpairs", 4 * n,
      std::vector<std::pair<double, double>>(4 * n, {-4.0, 4.0}), nullptr);
  std::vector<int> inv_idx;
  for (int j = 0; j < n; ++j) inv_idx.push_back(n + j);
  for (int j = 0; j < n; ++j) inv_idx.push_back(j);
  std::vector<int> id_idx;
  for (int copy = 0; copy < 2; ++copy)
    for (int j = 0; j < n; ++j) id_idx.push_back(j);

  LocalGroupoid g;
  g.base = base;
  g.arrows = arrows;
  g.s = projection_map(arrows, tail);
  g.t = projection_map(arrows, head);
  g.m = projection_map(pair_space, mul_idx);
  g.inv = projection_map(arrows, inv_idx);
  g.id = projection_map(base, id_idx);
  g.composable = [n, arrows](const RVec& h, const RVec& gg) {
    if ((h.tail(n) - gg.head(n)).cwiseAbs().maxCoeff() > 1e-9) return false;
    RVec prod(2 * n);
    prod << h.head(n), gg.tail(n);
    return arrows->contains(prod);
  };
  g.s_fibre_sampler = [base_ptr, n](const RVec& y, Rng& rng) -> RVec {
    try {
      RVec a = base_ptr->sample(rng);
      RVec h(2 * n);
      h << a, y;
      return h;
    } catch (const SamplingError&) {
      return RVec();
    }
  };
  return g;
}

FormField pair_arrow_form(const LocalGroupoid& g, const FormField& target_form,
                          const FormField& source_form) {
  const int n = g.base->dim();
  std::vector<int> head(n), tail(n);
  for (int j = 0; j < n; ++j) head[j] = j, tail[j] = n + j;
  JetMap p1 = projection_map(g.arrows, head);
  JetMap p2 = projection_map(g.arrows, tail);
  return pullback(p1, target_form) - pullback(p2, source_form);
}
}  // namespace

Mat standard_hol_symplectic(int m) {
  if (m % 4 != 0)
    throw std::invalid_argument("standard_hol_symplectic: real dimension must be 0 mod 4");
  Mat omega = Mat::Zero(m, m);
  for (int blk = 0; blk + 3 < m; blk += 4) {
    // dz ^ dz' on coordinates (x, y, x', y') starting at blk
    auto put = [&omega, blk](int a, int b, cplx v) {
      omega(blk + a, blk + b) = v;
      omega(blk + b, blk + a) = -v;
    };
    put(0, 2, 1.0);
    put(1, 3, -1.0);
    put(0, 3, kI);
    put(1, 2, kI);
  }
  return omega;
}

PairGroupoidData pair_groupoid_fixture(const Mat& omega0, int m) {
  if (omega0.rows() != m || omega0.cols() != m)
    throw std::invalid_argument("pair_groupoid_fixture: shape mismatch");
  if ((omega0 + omega0.transpose()).cwiseAbs().maxCoeff() > kEntryTol)
    throw std::invalid_argument("pair_groupoid_fixture: Omega0 is not skew");
  PairGroupoidData pg;
  pg.omega0 = omega0;
  RMat b0 = omega0.real(), w0 = omega0.imag();
  Eigen::FullPivLU<RMat> lu(w0);
  if (!lu.isInvertible())
    throw std::invalid_argument("pair_groupoid_fixture: Im Omega0 is degenerate");
  pg.p0 = lu.inverse();
  pg.holomorphic = b0.cwiseAbs().maxCoeff() > 0.0;
  if (pg.holomorphic) {
    pg.i0 = lu.solve(b0);
    if ((pg.i0 * pg.i0 + RMat::Identity(m, m)).cwiseAbs().maxCoeff() > kEntryTol)
      throw std::invalid_argument(
          "pair_groupoid_fixture: (Im Omega0)^{-1} Re Omega0 does not square to -1");
  } else {
    pg.i0 = RMat::Zero(m, m);
  }

  ChartPtr base = std::make_shared<Chart>(
      "pair-base", m, std::vector<std::pair<double, double>>(m, {-2.0, 2.0}), nullptr);
  ChartPtr arrows;
  LocalGroupoid g = pair_groupoid_structure(base, &arrows);

  Mat big = Mat::Zero(2 * m, 2 * m);
  big.topLeftCorner(m, m) = omega0;
  big.bottomRightCorner(m, m) = -omega0;
  std::vector<std::vector<JetScalar>> entries(2 * m, std::vector<JetScalar>(2 * m));
  for (int j = 0; j < 2 * m; ++j)
    for (int k = 0; k < 2 * m; ++k) entries[j][k] = JetScalar::constant(big(j, k));
  FormField omega_arr = FormField::from_matrix(arrows, entries);

  pg.data = HolSympGroupoidData{std::move(g), std::move(omega_arr)};
  return pg;
}

RMat random_compatible_gauge(const PairGroupoidData& pg, Rng& rng, double scale) {
  if (!pg.holomorphic)
    throw std::invalid_argument("random_compatible_gauge: fixture is not holomorphic");
  const int m = static_cast<int>(pg.i0.rows());
  RMat sym(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = j; k < m; ++k) sym(j, k) = sym(k, j) = rng.normal();
  RMat a = scale * pg.p0 * sym;  // infinitesimal symplectomorphism of P0
  RMat r = a.exp();
  RMat j_new = r * pg.i0 * r.inverse();
  RMat b = pg.p0.inverse() * (j_new - pg.i0);
  return 0.5 * (b - b.transpose());  // symmetrize away roundoff
}

LocalizationData modification_fixture(const PairGroupoidData& pg, const RMat& b, Rng& rng) {
  const int m = static_cast<int>(pg.i0.rows());
  std::vector<std::vector<JetScalar>> entries(m, std::vector<JetScalar>(m));
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) entries[j][k] = JetScalar::constant(b(j, k));
  FormField b_field = FormField::from_matrix(pg.data.g.base, entries);

  LocalizationData loc;
  loc.diagonal.push_back(pg.data);
  Rng pre = rng.fork("modify-precheck");
  loc.diagonal.push_back(modify(pg.data, b_field, 8, pre));

  CrossComponent c;
  c.i = 0;
  c.j = 1;
  c.omega_c = pg.data.omega_c + pullback(pg.data.g.t, b_field);
  c.id_bisection = pg.data.g.id;
  c.overlap = [](const RVec&) { return true; };
  loc.cross.push_back(std::move(c));
  return loc;
}

LocalizationData hopf_localization_fixture(const HopfData& h) {
  LocalizationData loc;
  ChartPtr arrows_z, arrows_w;
  LocalGroupoid gz = pair_groupoid_structure(h.chart_z, &arrows_z);
  LocalGroupoid gw = pair_groupoid_structure(h.chart_w, &arrows_w);
  FormField omega_z = pair_arrow_form(gz, h.z_form, h.z_form);
  FormField omega_w = pair_arrow_form(gw, h.w_form, h.w_form);
  loc.diagonal.push_back(HolSympGroupoidData{std::move(gz), std::move(omega_z)});
  loc.diagonal.push_back(HolSympGroupoidData{std::move(gw), std::move(omega_w)});

  // cross component from the z-chart to the w-chart: pairs (target, source)
  auto cz = h.chart_z;
  auto cw = h.chart_w;
  std::vector<std::pair<double, double>> arrow_box;
  for (int copy = 0; copy < 2; ++copy)
    for (int j = 0; j < 4; ++j) arrow_box.push_back(cz->box()[j]);
  ChartPtr cross_arrows = std::make_shared<Chart>(
      "hopf-cross", 8, arrow_box,
      [cw, cz](const RVec& p) { return cw->contains(p.head(4)) && cz->contains(p.tail(4)); });
  JetMap p1 = projection_map(cross_arrows, {0, 1, 2, 3});
  JetMap p2 = projection_map(cross_arrows, {4, 5, 6, 7});

  ChartPtr overlap_chart = std::make_shared<Chart>(
      "hopf-overlap", 4, cz->box(),
      [cw, cz](const RVec& p) { return cw->contains(p) && cz->contains(p); },
      cz->coord_names());

  CrossComponent c;
  c.i = 0;
  c.j = 1;
  c.omega_c = pullback(p1, h.w_form) - pullback(p2, h.z_form);
  c.id_bisection = projection_map(overlap_chart, {0, 1, 2, 3, 0, 1, 2, 3});
  c.overlap = [cw, cz](const RVec& p) { return cw->contains(p) && cz->contains(p); };
  loc.cross.push_back(std::move(c));
  return loc;
}

}  // namespace gcgeo
