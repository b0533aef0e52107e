#include "bwc/linalg.hpp"

#include <stdexcept>

namespace bwc {

std::optional<std::vector<Rational>> solve_linear(Matrix a, std::vector<Rational> b) {
  const std::size_t n = a.size();
  const std::size_t m = n ? a[0].size() : 0;
  std::vector<mpq_class> flat(n * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> mpq_class& { return flat[i * (m + 1) + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) at(i, j) = a[i][j].raw();
    at(i, m) = b[i].raw();
  }
  a.clear();
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m && row < n; ++col) {
    std::size_t piv = row;
    while (piv < n && sgn(at(piv, col)) == 0) ++piv;
    if (piv == n) continue;
    if (piv != row)
      for (std::size_t j = 0; j <= m; ++j) std::swap(at(piv, j), at(row, j));
    mpq_class inv = 1 / at(row, col);
    for (std::size_t j = col; j <= m; ++j) at(row, j) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row || sgn(at(i, col)) == 0) continue;
      mpq_class f = at(i, col);
      for (std::size_t j = col; j <= m; ++j) {
        if (sgn(at(row, j)) != 0) at(i, j) -= f * at(row, j);
      }
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t i = row; i < n; ++i)
    if (sgn(at(i, m)) != 0) return std::nullopt;
  std::vector<Rational> x(m);
  for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = Rational(at(i, m));
  return x;
}

std::vector<Rational> stationary(const Matrix& p) {
  const std::size_t n = p.size();
  if (n == 0) return {};
  // (P^T - I) v = 0 with the last equation replaced by sum v = 1.
  Matrix a(n, std::vector<Rational>(n));
  std::vector<Rational> b(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = p[j][i];
    a[i][i] -= Rational(1);
  }
  for (std::size_t j = 0; j < n; ++j) a[n - 1][j] = Rational(1);
  b[n - 1] = Rational(1);
  auto v = solve_linear(std::move(a), std::move(b));
  if (!v) throw std::runtime_error("stationary distribution: singular system");
  return *v;
}

}  // namespace bwc
