#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rode/error.hpp"
#include "rode/gaussian_rational.hpp"
#include "rode/matrix.hpp"

namespace rode {

using GaussVec = std::vector<GaussianRational>;

/// Full solution set {particular + span(kernel_basis)} of A x = b.
struct AffineSolutionSet {
  std::optional<GaussVec> particular;  ///< empty when the system is inconsistent
  std::vector<GaussVec> kernel_basis;
  std::size_t rank = 0;

  bool consistent() const { return particular.has_value(); }
};

/// Exact Gauss-Jordan elimination over Q(i). The pivot in each column is
/// the candidate with the smallest numerator bit size, first one on ties,
/// so results are reproducible.
inline AffineSolutionSet linsolve_exact(const Matrix<GaussianRational>& A, const GaussVec& b) {
  if (A.rows() != b.size()) throw DimensionMismatch("linsolve: A has " + std::to_string(A.rows()) +
                                                    " rows but b has " + std::to_string(b.size()) + " entries");
  const std::size_t m = A.rows();
  const std::size_t n = A.cols();
  Matrix<GaussianRational> a(m, n + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = A(i, j);
    a(i, n) = b[i];
  }

  std::vector<std::size_t> pivot_cols;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    std::size_t best = m;
    for (std::size_t i = row; i < m; ++i) {
      if (a(i, col).is_zero()) continue;
      if (best == m || a(i, col).bit_size() < a(best, col).bit_size()) best = i;
    }
    if (best == m) continue;
    if (best != row)
      for (std::size_t j = 0; j <= n; ++j) std::swap(a(best, j), a(row, j));
    const GaussianRational inv = a(row, col).inverse();
    for (std::size_t j = col; j <= n; ++j)
      if (!a(row, j).is_zero()) a(row, j) *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row || a(i, col).is_zero()) continue;
      const GaussianRational factor = a(i, col);
      for (std::size_t j = col; j <= n; ++j)
        if (!a(row, j).is_zero()) a(i, j) -= factor * a(row, j);
    }
    pivot_cols.push_back(col);
    ++row;
  }

  AffineSolutionSet out;
  out.rank = pivot_cols.size();

  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : pivot_cols) is_pivot[c] = true;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    GaussVec k(n);
    k[free] = GaussianRational(1);
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) k[pivot_cols[i]] = -a(i, free);
    out.kernel_basis.push_back(std::move(k));
  }

  for (std::size_t i = pivot_cols.size(); i < m; ++i)
    if (!a(i, n).is_zero()) return out;

  GaussVec x(n);
  for (std::size_t i = 0; i < pivot_cols.size(); ++i) x[pivot_cols[i]] = a(i, n);
  out.particular = std::move(x);
  return out;
}

}  // namespace rode
