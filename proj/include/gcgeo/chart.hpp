#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gcgeo/types.hpp"

namespace gcgeo {

// Coordinate domain: a sampling box, a membership predicate (which already
// encodes the margins around declared singular loci), and coordinate names
// for the expression grammar.
class Chart {
 public:
  Chart(std::string name, int dim, std::vector<std::pair<double, double>> box,
        std::function<bool(const RVec&)> domain,
        std::vector<std::string> coord_names = {});

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const std::vector<std::string>& coord_names() const { return coord_names_; }
  bool contains(const RVec& p) const { return domain_ ? domain_(p) : true; }
  const std::vector<std::pair<double, double>>& box() const { return box_; }

  // Rejection sampling; throws SamplingError after max_tries draws.
  RVec sample(Rng& rng, int max_tries = 10000) const;
  std::vector<RVec> sample_many(int n, Rng& rng) const;

 private:
  std::string name_;
  int dim_;
  std::vector<std::pair<double, double>> box_;
  std::function<bool(const RVec&)> domain_;
  std::vector<std::string> coord_names_;
};

using ChartPtr = std::shared_ptr<const Chart>;

}  // namespace gcgeo
