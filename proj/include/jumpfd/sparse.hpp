#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace jumpfd {

/// Compressed sparse row matrix with sorted column indices in each row.
class CsrMatrix {
 public:
  CsrMatrix() = default;

  /// Builds from per-row (column, value) lists. Duplicate columns within a row are summed.
  static CsrMatrix from_rows(std::vector<std::vector<std::pair<std::int32_t, double>>> rows);

  std::size_t rows() const { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
  std::size_t nonzeros() const { return values_.size(); }

  std::span<const std::int32_t> row_columns(std::size_t r) const {
    return {cols_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  std::span<const double> row_values(std::size_t r) const {
    return {values_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }

  /// Stored value at (r, c), or 0 if the entry is not stored.
  double at(std::size_t r, std::size_t c) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> diagonal() const;

  /// True when every stored (i, j) has a stored (j, i) with a bitwise-equal value.
  bool is_symmetric() const;

  /// One "row col value" line per stored entry, 0-based indices, 17 significant digits.
  void write_coordinate(std::ostream& os) const;

 private:
  std::vector<std::size_t> row_ptr_;
  std::vector<std::int32_t> cols_;
  std::vector<double> values_;
};

}  // namespace jumpfd
