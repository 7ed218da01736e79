#pragma once

// Test-only reference implementations, kept independent of the library's
// computation paths: LU-based kernels instead of SVD, permutation-sort
// wedge signs instead of bitmask crossing counts, explicit Clifford
// matrices, finite differences instead of jets.

#include <Eigen/LU>
#include <algorithm>
#include <vector>

#include "gcgeo/spinor.hpp"

namespace oracle {

using namespace gcgeo;

// Kernel via full-pivot LU (library nullspace uses SVD).
inline Mat lu_kernel(const Mat& a) {
  if (a.rows() == 0) return Mat::Identity(a.cols(), a.cols());
  Eigen::FullPivLU<Mat> lu(a);
  lu.setThreshold(1e-10);
  return lu.kernel();
}

// Wedge of basis covectors with the sign from sorting the index list.
inline int sort_sign(std::vector<int> idx) {
  int sign = 1;
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = i + 1; j < idx.size(); ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) {
        std::swap(idx[i], idx[j]);
        sign = -sign;
      }
    }
  return sign;
}

inline std::vector<int> mask_to_indices(size_t mask) {
  std::vector<int> idx;
  for (size_t rest = mask; rest; rest &= rest - 1) idx.push_back(__builtin_ctzll(rest));
  return idx;
}

inline MixedForm naive_wedge(const MixedForm& a, const MixedForm& b) {
  MixedForm out(a.dim());
  for (size_t p = 0; p < a.mask_count(); ++p) {
    if (a[p] == cplx(0.0)) continue;
    for (size_t q = 0; q < b.mask_count(); ++q) {
      if (b[q] == cplx(0.0)) continue;
      std::vector<int> idx = mask_to_indices(p);
      for (int j : mask_to_indices(q)) idx.push_back(j);
      const int sign = sort_sign(idx);
      if (sign == 0) continue;
      out[p | q] += cplx(sign) * a[p] * b[q];
    }
  }
  return out;
}

// Matrix of the Clifford action v . (-) on the 2^m-dimensional exterior
// algebra, built entry by entry from the definition.
inline Mat clifford_matrix(const CliffordVector& v, int m) {
  const size_t n = size_t(1) << m;
  Mat out = Mat::Zero(n, n);
  for (size_t mask = 0; mask < n; ++mask) {
    // interior part: remove one index j in mask with sign (-1)^{pos}
    std::vector<int> idx = mask_to_indices(mask);
    for (size_t pos = 0; pos < idx.size(); ++pos) {
      const size_t target = mask & ~(size_t(1) << idx[pos]);
      out(target, mask) += (pos % 2 == 0 ? 1.0 : -1.0) * v.x(idx[pos]);
    }
    // exterior part: xi ^ e_mask
    for (int j = 0; j < m; ++j) {
      if (mask & (size_t(1) << j)) continue;
      std::vector<int> widx = {j};
      for (int i : idx) widx.push_back(i);
      out(mask | (size_t(1) << j), mask) += cplx(sort_sign(widx)) * v.xi(j);
    }
  }
  return out;
}

inline Vec flatten(const MixedForm& a) {
  Vec out(a.mask_count());
  for (size_t mask = 0; mask < a.mask_count(); ++mask)
    out(static_cast<Eigen::Index>(mask)) = a[mask];
  return out;
}

}  // namespace oracle
