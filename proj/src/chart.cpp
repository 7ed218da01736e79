#include "gcgeo/chart.hpp"

namespace gcgeo {

Chart::Chart(std::string name, int dim, std::vector<std::pair<double, double>> box,
             std::function<bool(const RVec&)> domain, std::vector<std::string> coord_names)
    : name_(std::move(name)),
      dim_(dim),
      box_(std::move(box)),
      domain_(std::move(domain)),
      coord_names_(std::move(coord_names)) {
  if (dim <= 0) throw std::invalid_argument("Chart: dimension must be positive");
  if (static_cast<int>(box_.size()) != dim)
    throw std::invalid_argument("Chart: box size must match dimension");
  if (coord_names_.empty())
    for (int j = 0; j < dim; ++j) coord_names_.push_back("x" + std::to_string(j + 1));
}

RVec Chart::sample(Rng& rng, int max_tries) const {
  RVec p(dim_);
  for (int t = 0; t < max_tries; ++t) {
    for (int j = 0; j < dim_; ++j) p(j) = rng.uniform(box_[j].first, box_[j].second);
    if (contains(p)) return p;
  }
  throw SamplingError("chart '" + name_ + "': no admissible point in " +
                      std::to_string(max_tries) + " draws");
}

std::vector<RVec> Chart::sample_many(int n, Rng& rng) const {
  std::vector<RVec> pts;
  pts.reserve(n);
  for (int k = 0; k < n; ++k) pts.push_back(sample(rng));
  return pts;
}

}  // namespace gcgeo
