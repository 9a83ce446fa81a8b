#include "jumpfd/sparse.hpp"

#include <algorithm>
#include <cstring>
#include <iomanip>
#include <ostream>

namespace jumpfd {

CsrMatrix CsrMatrix::from_rows(std::vector<std::vector<std::pair<std::int32_t, double>>> rows) {
  CsrMatrix m;
  m.row_ptr_.reserve(rows.size() + 1);
  m.row_ptr_.push_back(0);
  for (auto& row : rows) {
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!m.cols_.empty() && m.row_ptr_.back() < m.cols_.size() && m.cols_.back() == row[k].first) {
        m.values_.back() += row[k].second;
        continue;
      }
      m.cols_.push_back(row[k].first);
      m.values_.push_back(row[k].second);
    }
    m.row_ptr_.push_back(m.cols_.size());
  }
  return m;
}

double CsrMatrix::at(std::size_t r, std::size_t c) const {
  const auto cols = row_columns(r);
  const auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<std::int32_t>(c));
  if (it == cols.end() || *it != static_cast<std::int32_t>(c)) return 0.0;
  return row_values(r)[static_cast<std::size_t>(it - cols.begin())];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = rows();
  for (std::size_t r = 0; r < n; ++r) {
    double sum = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) sum += values_[k] * x[cols_[k]];
    y[r] = sum;
  }
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(rows(), 0.0);
  for (std::size_t r = 0; r < rows(); ++r) d[r] = at(r, r);
  return d;
}

bool CsrMatrix::is_symmetric() const {
  for (std::size_t r = 0; r < rows(); ++r) {
    const auto cols = row_columns(r);
    const auto vals = row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const auto c = static_cast<std::size_t>(cols[k]);
      if (c >= rows()) return false;
      const auto other = row_columns(c);
      const auto it = std::lower_bound(other.begin(), other.end(), static_cast<std::int32_t>(r));
      if (it == other.end() || *it != static_cast<std::int32_t>(r)) return false;
      const double mirrored = row_values(c)[static_cast<std::size_t>(it - other.begin())];
      if (std::memcmp(&mirrored, &vals[k], sizeof(double)) != 0) return false;
    }
  }
  return true;
}

void CsrMatrix::write_coordinate(std::ostream& os) const {
  const auto old_precision = os.precision(17);
  for (std::size_t r = 0; r < rows(); ++r) {
    const auto cols = row_columns(r);
    const auto vals = row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) os << r << ' ' << cols[k] << ' ' << vals[k] << '\n';
  }
  os.precision(old_precision);
}

}  // namespace jumpfd
