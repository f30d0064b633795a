#include "bfe/pentadiagonal.hpp"

#include <cmath>
#include <string>

#include "bfe/error.hpp"

namespace bfe {

CyclicPentadiagonal::CyclicPentadiagonal(std::size_t n, double diag, double off1, double off2)
    : n_(n), diag_(diag), off1_(off1), off2_(off2), band_(3 * (n >= 2 ? n - 2 : 0), 0.0) {
  if (n < 5) fail(ErrorKind::InvalidArgument, "cyclic pentadiagonal system needs n >= 5");
  tail_[0].assign(n - 1, 0.0);
  tail_[1].assign(n, 0.0);
  const std::size_t m = n - 2;  // first tail row

  auto pivot = [](double v, std::size_t col) {
    if (!(v > 0) || !std::isfinite(v)) {
      fail(ErrorKind::DegenerateInput, "cyclic pentadiagonal system is not positive definite (column " +
                                           std::to_string(col) + ")");
    }
    return std::sqrt(v);
  };

  for (std::size_t j = 0; j < m; ++j) {
    const double l2 = j >= 2 ? band(j, 0) : 0.0;  // L(j, j-2)
    const double l1 = j >= 1 ? band(j, 1) : 0.0;  // L(j, j-1)
    const double d = pivot(entry(j, j) - l2 * l2 - l1 * l1, j);
    band(j, 2) = d;

    if (j + 1 < m) {
      const double prev = j >= 1 ? band(j + 1, 0) * l1 : 0.0;  // L(j+1, j-1) L(j, j-1)
      band(j + 1, 1) = (entry(j + 1, j) - prev) / d;
    }
    if (j + 2 < m) band(j + 2, 0) = entry(j + 2, j) / d;

    for (int t = 0; t < 2; ++t) {
      auto& row = tail_[t];
      double acc = entry(m + static_cast<std::size_t>(t), j);
      if (j >= 2) acc -= row[j - 2] * l2;
      if (j >= 1) acc -= row[j - 1] * l1;
      row[j] = acc / d;
    }
  }

  double s00 = 0.0, s10 = 0.0, s11 = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    s00 += tail_[0][k] * tail_[0][k];
    s10 += tail_[1][k] * tail_[0][k];
    s11 += tail_[1][k] * tail_[1][k];
  }
  const double d0 = pivot(entry(m, m) - s00, m);
  tail_[0][m] = d0;
  tail_[1][m] = (entry(m + 1, m) - s10) / d0;
  tail_[1][m + 1] = pivot(entry(m + 1, m + 1) - s11 - tail_[1][m] * tail_[1][m], m + 1);
}

double CyclicPentadiagonal::entry(std::size_t i, std::size_t j) const {
  const std::size_t d = i > j ? i - j : j - i;
  const std::size_t dist = std::min(d, n_ - d);
  switch (dist) {
    case 0: return diag_;
    case 1: return off1_;
    case 2: return off2_;
    default: return 0.0;
  }
}

double CyclicPentadiagonal::lower(std::size_t row, std::size_t col) const {
  return band(row, static_cast<int>(col + 2 - row));
}

void CyclicPentadiagonal::solve(std::span<const double> rhs, std::span<double> x) const {
  if (rhs.size() != n_ || x.size() != n_) fail(ErrorKind::InvalidArgument, "pentadiagonal solve: size mismatch");
  const std::size_t m = n_ - 2;
  std::vector<double> y(n_);

  for (std::size_t i = 0; i < m; ++i) {
    double acc = rhs[i];
    if (i >= 1) acc -= lower(i, i - 1) * y[i - 1];
    if (i >= 2) acc -= lower(i, i - 2) * y[i - 2];
    y[i] = acc / band(i, 2);
  }
  for (int t = 0; t < 2; ++t) {
    const std::size_t r = m + static_cast<std::size_t>(t);
    double acc = rhs[r];
    for (std::size_t k = 0; k < r; ++k) acc -= tail_[t][k] * y[k];
    y[r] = acc / tail_[t][r];
  }

  x[n_ - 1] = y[n_ - 1] / tail_[1][n_ - 1];
  x[m] = (y[m] - tail_[1][m] * x[n_ - 1]) / tail_[0][m];
  for (std::size_t i = m; i-- > 0;) {
    double acc = y[i] - tail_[0][i] * x[m] - tail_[1][i] * x[m + 1];
    if (i + 1 < m) acc -= lower(i + 1, i) * x[i + 1];
    if (i + 2 < m) acc -= lower(i + 2, i) * x[i + 2];
    x[i] = acc / band(i, 2);
  }
}

void CyclicPentadiagonal::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) fail(ErrorKind::InvalidArgument, "pentadiagonal multiply: size mismatch");
  const std::size_t n = n_;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = diag_ * x[i] + off1_ * (x[(i + n - 1) % n] + x[(i + 1) % n]) +
           off2_ * (x[(i + n - 2) % n] + x[(i + 2) % n]);
  }
}

}  // namespace bfe
