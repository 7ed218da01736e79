#include "gcgeo/cover.hpp"

namespace gcgeo {

std::vector<RVec> sample_overlap(const HolomorphicCover& cov, int i, int j, int n, Rng& rng,
                                 int min_accept) {
  const Chart& ci = *cov.charts.at(i).chart;
  const Chart& cj = *cov.charts.at(j).chart;
  std::vector<RVec> pts;
  RVec p(ci.dim());
  int tries = 0;
  const int max_tries = 20000;
  while (static_cast<int>(pts.size()) < n && tries < max_tries) {
    ++tries;
    for (int k = 0; k < ci.dim(); ++k)
      p(k) = rng.uniform(ci.box()[k].first, ci.box()[k].second);
    if (ci.contains(p) && cj.contains(p)) pts.push_back(p);
  }
  if (static_cast<int>(pts.size()) < min_accept)
    throw SamplingError("cover overlap (" + ci.name() + ", " + cj.name() + "): only " +
                        std::to_string(pts.size()) + " admissible points");
  return pts;
}

CoverReport verify_cover(const HolomorphicCover& cov, int samples, Rng& rng, int min_accept) {
  CoverReport rep;
  const int nch = static_cast<int>(cov.charts.size());
  std::vector<std::pair<int, int>> pairs = cov.overlaps;
  if (pairs.empty())
    for (int i = 0; i < nch; ++i)
      for (int j = i + 1; j < nch; ++j) pairs.emplace_back(i, j);

  // per-chart holomorphic Poisson compatibility
  for (int i = 0; i < nch; ++i) {
    Rng sub = rng.fork("chart" + std::to_string(i));
    for (const RVec& p : cov.charts[i].chart->sample_many(std::max(4, samples / 4), sub)) {
      RMat ii = cov.charts[i].complex_structure.real_at(p);
      RMat pp = cov.poisson.real_at(p);
      rep.chart_compatibility =
          std::max(rep.chart_compatibility, HolPoissonPoint::compatibility_residual(ii, pp));
    }
  }

  for (auto [i, j] : pairs) {
    Rng sub = rng.fork("overlap" + std::to_string(i) + "_" + std::to_string(j));
    FormField bij = cov.charts[j].gauge - cov.charts[i].gauge;
    auto pts = sample_overlap(cov, i, j, samples, sub, min_accept);
    for (const RVec& p : pts) {
      rep.gluing_closed = std::max(rep.gluing_closed, form_norm(exterior_d(bij, p)));
      Mat bm = two_form_to_matrix(bij.value(p));
      if (bm.imag().cwiseAbs().maxCoeff() > 1e-8)
        throw std::runtime_error("verify_cover: gluing field has imaginary residue");
      RMat b = bm.real();
      RMat ii = cov.charts[i].complex_structure.real_at(p);
      RMat ij_ = cov.charts[j].complex_structure.real_at(p);
      RMat pp = cov.poisson.real_at(p);
      rep.gluing_linear =
          std::max(rep.gluing_linear, (ii + pp * b - ij_).cwiseAbs().maxCoeff());
      rep.gluing_quadratic =
          std::max(rep.gluing_quadratic, check_gauge_condition(ii, pp, b).primary);
    }
  }

  // cocycle on triple overlaps
  for (int i = 0; i < nch; ++i)
    for (int j = i + 1; j < nch; ++j)
      for (int k = j + 1; k < nch; ++k) {
        Rng sub = rng.fork("triple" + std::to_string(i) + std::to_string(j) + std::to_string(k));
        std::vector<RVec> pts;
        try {
          pts = sample_overlap(cov, i, j, samples, sub, 1);
        } catch (const SamplingError&) {
          continue;
        }
        FormField bij = cov.charts[j].gauge - cov.charts[i].gauge;
        FormField bjk = cov.charts[k].gauge - cov.charts[j].gauge;
        FormField bik = cov.charts[k].gauge - cov.charts[i].gauge;
        for (const RVec& p : pts) {
          if (!cov.charts[k].chart->contains(p)) continue;
          MixedForm resid = bij.value(p) + bjk.value(p) - bik.value(p);
          rep.cocycle = std::max(rep.cocycle, form_norm(resid));
        }
      }
  return rep;
}

GCStructure reconstruct_gc(const HolomorphicCover& cov, int chart_index, const RVec& p) {
  const CoverChart& cc = cov.charts.at(chart_index);
  if (!cc.chart->contains(p))
    throw std::invalid_argument("reconstruct_gc: point outside chart " + cc.chart->name());
  RMat ii = cc.complex_structure.real_at(p);
  RMat pp = cov.poisson.real_at(p);
  Mat bm = two_form_to_matrix(cc.gauge.value(p));
  if (bm.imag().cwiseAbs().maxCoeff() > 1e-8)
    throw std::runtime_error("reconstruct_gc: gauge field has imaginary residue");
  GCStructure model = gc_from_hol_poisson(HolPoissonPoint(ii, pp));
  // chart model J_i = e^{B_i} (global) e^{-B_i}; undo it
  return apply_b_transform(model, GaugeField(cc.chart->dim(), -bm.real()));
}

HolomorphicCover differentiate_localization(const LocalizationData& loc) {
  if (loc.diagonal.empty())
    throw std::invalid_argument("differentiate_localization: no diagonal components");
  const int nch = static_cast<int>(loc.diagonal.size());
  HolomorphicCover cov;
  std::vector<BaseHolPoisson> bases;
  bases.reserve(nch);
  for (int i = 0; i < nch; ++i) bases.push_back(differentiate_base(loc.diagonal[i]));

  auto cross_for = [&loc](int i, int j) -> const CrossComponent& {
    for (const auto& c : loc.cross)
      if (c.i == i && c.j == j) return c;
    throw std::invalid_argument("differentiate_localization: missing bisection data for (" +
                                std::to_string(i) + ", " + std::to_string(j) + ")");
  };

  for (int i = 0; i < nch; ++i) {
    ChartPtr chart = loc.diagonal[i].g.base;
    FormField gauge = FormField::zero(chart);
    if (i > 0) {
      const CrossComponent& c = cross_for(0, i);
      if (c.id_bisection.components().empty())
        throw std::invalid_argument("differentiate_localization: missing bisection data");
      gauge = pullback(c.id_bisection, c.omega_c.re());
    }
    cov.charts.push_back(CoverChart{chart, bases[i].i, std::move(gauge)});
  }
  cov.poisson = bases[0].p;
  return cov;
}

}  // namespace gcgeo
