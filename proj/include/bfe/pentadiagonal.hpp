#pragma once

#include <span>
#include <vector>

namespace bfe {

/// Symmetric positive-definite cyclic pentadiagonal system with constant
/// bands: M(i,i) = diag, M(i,i+-1) = off1, M(i,i+-2) = off2, indices mod n.
///
/// Factored once by a structured Cholesky decomposition. Apart from the
/// band, only the last two rows of the factor fill in (the cyclic corners
/// couple every column to them), so factor and solve are both O(n).
class CyclicPentadiagonal {
 public:
  CyclicPentadiagonal(std::size_t n, double diag, double off1, double off2);

  std::size_t size() const { return n_; }
  void solve(std::span<const double> rhs, std::span<double> x) const;
  /// y = M x
  void multiply(std::span<const double> x, std::span<double> y) const;
  double entry(std::size_t i, std::size_t j) const;

 private:
  double& band(std::size_t row, int k) { return band_[3 * row + static_cast<std::size_t>(k)]; }
  double band(std::size_t row, int k) const { return band_[3 * row + static_cast<std::size_t>(k)]; }
  // Factor entry L(row, col) for row < n - 2 and col in {row-2, row-1, row}.
  double lower(std::size_t row, std::size_t col) const;

  std::size_t n_;
  double diag_, off1_, off2_;
  std::vector<double> band_;     // rows 0..n-3: L(i,i-2), L(i,i-1), L(i,i)
  std::vector<double> tail_[2];  // rows n-2, n-1: L(r, 0..r)
};

}  // namespace bfe
