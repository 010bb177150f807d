#include "linpat/fp_matrix.hpp"

#include <utility>

#include "linpat/errors.hpp"
#include "linpat/fpspace.hpp"

namespace linpat {

FpMatrix::FpMatrix(int p, std::size_t rows, std::size_t cols) : p_(p), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

FpMatrix FpMatrix::from_rows(int p, const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols) {
  FpMatrix m(p, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw UsageError("row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) + " entries, expected " +
                       std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

void FpMatrix::set(std::size_t r, std::size_t c, std::int64_t v) noexcept { data_[r * cols_ + c] = mod_p(v, p_); }

void FpMatrix::append_row(std::span<const int> values) {
  if (values.size() != cols_) throw UsageError("appended row has the wrong width");
  for (int v : values) data_.push_back(mod_p(v, p_));
  ++rows_;
}

FpMatrix FpMatrix::rref(std::vector<std::size_t>* pivots) const {
  FpMatrix a = *this;
  std::vector<std::size_t> piv;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < cols_ && lead < rows_; ++c) {
    std::size_t sel = lead;
    while (sel < rows_ && a(sel, c) == 0) ++sel;
    if (sel == rows_) continue;
    if (sel != lead) {
      for (std::size_t k = 0; k < cols_; ++k) std::swap(a.data_[sel * cols_ + k], a.data_[lead * cols_ + k]);
    }
    const std::int64_t inv = inverse_mod(a(lead, c), p_);
    for (std::size_t k = 0; k < cols_; ++k) a.set(lead, k, inv * a(lead, k));
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == lead || a(r, c) == 0) continue;
      const std::int64_t f = a(r, c);
      for (std::size_t k = 0; k < cols_; ++k) a.set(r, k, a(r, k) - f * a(lead, k));
    }
    piv.push_back(c);
    ++lead;
  }
  FpMatrix out(p_, lead, cols_);
  std::copy(a.data_.begin(), a.data_.begin() + static_cast<std::ptrdiff_t>(lead * cols_), out.data_.begin());
  if (pivots) *pivots = std::move(piv);
  return out;
}

FpMatrix FpMatrix::nullspace() const {
  std::vector<std::size_t> pivots;
  const FpMatrix r = rref(&pivots);
  std::vector<bool> is_pivot(cols_, false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  FpMatrix basis(p_, 0, cols_);
  std::vector<int> v(cols_);
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    std::fill(v.begin(), v.end(), 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = mod_p(-r(i, free), p_);
    basis.append_row(v);
  }
  return basis.rref();
}

FpMatrix FpMatrix::select_columns(std::span<const std::size_t> columns) const {
  FpMatrix out(p_, rows_, columns.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t j = 0; j < columns.size(); ++j) out.data_[r * columns.size() + j] = (*this)(r, columns[j]);
  }
  return out;
}

FpMatrix FpMatrix::transpose() const {
  FpMatrix out(p_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out.data_[c * rows_ + r] = (*this)(r, c);
  }
  return out;
}

std::vector<int> FpMatrix::combine_rows(std::span<const int> coeffs) const {
  std::vector<std::int64_t> acc(cols_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (coeffs[r] == 0) continue;
    for (std::size_t c = 0; c < cols_; ++c) acc[c] += static_cast<std::int64_t>(coeffs[r]) * (*this)(r, c);
  }
  std::vector<int> out(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out[c] = mod_p(acc[c], p_);
  return out;
}

bool FpMatrix::annihilates(const FpMatrix& vectors) const {
  if (vectors.cols() != cols_) throw UsageError("annihilation check with mismatched widths");
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t v = 0; v < vectors.rows(); ++v) {
      std::int64_t acc = 0;
      for (std::size_t c = 0; c < cols_; ++c) acc += static_cast<std::int64_t>((*this)(r, c)) * vectors(v, c);
      if (mod_p(acc, p_) != 0) return false;
    }
  }
  return true;
}

}  // namespace linpat
