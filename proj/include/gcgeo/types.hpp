#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace gcgeo {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr cplx kI{0.0, 1.0};

// Relative threshold for rank / membership decisions (singular values).
inline constexpr double kRankTol = 1e-8;
// Subspace equality: sine of the largest principal angle.
inline constexpr double kAngleTol = 1e-9;
// Entrywise residual for algebraically exact identities.
inline constexpr double kEntryTol = 1e-9;
// Least-squares certificates.
inline constexpr double kLstsqTol = 1e-8;
// Margin by which samplers avoid declared singular loci.
inline constexpr double kDomainMargin = 1e-2;

// Thrown when rejection sampling cannot find enough admissible points;
// the CLI maps it to the "inconclusive" exit code.
class SamplingError : public std::runtime_error {
 public:
  explicit SamplingError(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic splitmix64-based generator. Distributions are implemented
// by hand so that identical seeds give identical streams everywhere.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller on our own uniforms.
  double normal() {
    double u1 = uniform01(), u2 = uniform01();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // Deterministic per-check split: child stream keyed by a label.
  Rng fork(const std::string& label) const {
    uint64_t h = 1469598103934665603ull ^ state_;
    for (char c : label) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    return Rng(h);
  }

 private:
  uint64_t state_;
};

}  // namespace gcgeo
