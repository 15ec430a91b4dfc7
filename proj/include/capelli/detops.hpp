#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "capelli/detail/permutations.hpp"
#include "capelli/weyl.hpp"

namespace capelli {

/// Square matrix of Weyl elements, 1-based access.
class OperatorMatrix {
 public:
  explicit OperatorMatrix(int n) : n_(n), entries_(static_cast<std::size_t>(n) * n) {
    if (n < 1) throw std::invalid_argument("operator matrix must be at least 1x1");
  }

  /// Fills entry (i, j) from make(i, j).
  static OperatorMatrix build(int n, const std::function<WeylElement(int, int)>& make) {
    OperatorMatrix m(n);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) m.at(i, j) = make(i, j);
    return m;
  }

  [[nodiscard]] int n() const { return n_; }
  WeylElement& at(int i, int j) { return entries_.at(index(i, j)); }
  [[nodiscard]] const WeylElement& at(int i, int j) const { return entries_.at(index(i, j)); }

 private:
  [[nodiscard]] std::size_t index(int i, int j) const {
    if (i < 1 || j < 1 || i > n_ || j > n_) throw std::out_of_range("operator matrix index out of range");
    return static_cast<std::size_t>(i - 1) * n_ + (j - 1);
  }

  int n_;
  std::vector<WeylElement> entries_;
};

/// Left-to-right sequence of columns used when multiplying out a column determinant.
class ColumnOrder {
 public:
  explicit ColumnOrder(std::vector<int> columns) : columns_(std::move(columns)) {
    std::vector<int> sorted = columns_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k)
      if (sorted[k] != static_cast<int>(k) + 1) throw std::invalid_argument("column order is not a permutation");
  }

  static ColumnOrder natural(int n) {
    std::vector<int> c(static_cast<std::size_t>(n));
    std::iota(c.begin(), c.end(), 1);
    return ColumnOrder(std::move(c));
  }
  static ColumnOrder reversed(int n) {
    std::vector<int> c(static_cast<std::size_t>(n));
    std::iota(c.rbegin(), c.rend(), 1);
    return ColumnOrder(std::move(c));
  }

  [[nodiscard]] const std::vector<int>& columns() const { return columns_; }
  [[nodiscard]] int size() const { return static_cast<int>(columns_.size()); }
  [[nodiscard]] bool is_natural() const { return *this == natural(size()); }
  [[nodiscard]] bool is_reversed() const { return *this == reversed(size()); }

  friend bool operator==(const ColumnOrder&, const ColumnOrder&) = default;

 private:
  std::vector<int> columns_;
};

/// Column determinant sum_sigma sign(sigma) prod_c M[sigma(c), c], with the factors
/// multiplied in the given column order.
inline WeylElement column_det(const OperatorMatrix& m, const ColumnOrder& order) {
  const int n = m.n();
  if (order.size() != n) throw std::invalid_argument("column order size does not match matrix");
  WeylElement out;
  detail::for_each_permutation(n, [&](const std::vector<int>& sigma, int sign) {
    WeylElement product(sign);
    for (int c : order.columns()) {
      product *= m.at(sigma[c - 1] + 1, c);
      if (product.is_zero()) return;
    }
    out += product;
  });
  return out;
}

inline WeylElement column_det(const OperatorMatrix& m) { return column_det(m, ColumnOrder::natural(m.n())); }

}  // namespace capelli
