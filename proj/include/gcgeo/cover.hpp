#pragma once

#include "gcgeo/gc_linear.hpp"
#include "gcgeo/groupoid.hpp"

namespace gcgeo {

// Chart-wise holomorphic Poisson presentation of a generalized complex
// structure: per-chart complex structure I_i and gauge 2-form B_i, with a
// shared real Poisson field P. All charts live over one ambient coordinate
// system; overlaps are predicate intersections.
//
// Gauge direction: the chart models are obtained FROM the global structure,
// J_i = e^{B_i} (global) e^{-B_i}, so reconstructing the global structure
// applies e^{-B_i}. With this orientation the gluing relations on overlaps
// read  I_i + P B_ij = I_j  and  B_ij I_i + I_i^T B_ij + B_ij P B_ij = 0
// for B_ij = B_j - B_i.
struct CoverChart {
  ChartPtr chart;
  MatrixField complex_structure;  // m x m field
  FormField gauge;                // degree-2 field B_i
};

struct HolomorphicCover {
  std::vector<CoverChart> charts;
  MatrixField poisson;  // shared P, m x m field
  // declared overlaps (i < j); empty means "derive from chart predicates"
  std::vector<std::pair<int, int>> overlaps;

  int ambient_dim() const { return charts.at(0).chart->dim(); }
};

struct CoverReport {
  double gluing_closed = 0.0;       // max ||d B_ij|| over overlap samples
  double gluing_linear = 0.0;       // max ||I_i + P B_ij - I_j||
  double gluing_quadratic = 0.0;    // max gauge-condition residual of B_ij
  double cocycle = 0.0;             // max ||B_ij + B_jk - B_ik|| (triple overlaps)
  double chart_compatibility = 0.0; // max HolPoissonPoint residual of (I_i, P)
  double max_residual() const {
    return std::max({gluing_closed, gluing_linear, gluing_quadratic, cocycle,
                     chart_compatibility});
  }
};

// Samples each declared overlap (at least min_accept admissible points or
// SamplingError) and evaluates the gluing relations.
CoverReport verify_cover(const HolomorphicCover& cov, int samples, Rng& rng,
                         int min_accept = 16);

// Sample points lying in both chart domains.
std::vector<RVec> sample_overlap(const HolomorphicCover& cov, int i, int j, int n, Rng& rng,
                                 int min_accept = 16);

// e^{-B_i} J_{I_i, P} e^{B_i} at p: the global structure seen from chart i.
GCStructure reconstruct_gc(const HolomorphicCover& cov, int chart_index, const RVec& p);

// Restriction data of a holomorphic localization: the diagonal components
// are honest groupoids over the cover charts; each cross component carries
// its holomorphic symplectic form and the identity bisection embedding of
// the overlap into its arrow space.
struct CrossComponent {
  int i = 0, j = 0;           // source chart i, target chart j
  FormField omega_c;          // complex 2-form on the component's arrow chart
  JetMap id_bisection;        // overlap (ambient coords) -> arrow chart
  std::function<bool(const RVec&)> overlap;  // ambient-coordinate predicate
};

struct LocalizationData {
  std::vector<HolSympGroupoidData> diagonal;  // one per chart, base = cover chart
  std::vector<CrossComponent> cross;
};

// Reads off (I_i, P) along the identity sections and the gluing fields from
// the real part of the cross-component symplectic forms along the identity
// bisections; chart 0 is the gauge anchor (B_0 = 0). verify_cover must pass
// on the output when the input data are consistent.
HolomorphicCover differentiate_localization(const LocalizationData& loc);

}  // namespace gcgeo
