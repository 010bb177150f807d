#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace linpat {

/// Dense row-major matrix over F_p with entries kept in [0, p-1].
class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(int p, std::size_t rows, std::size_t cols);
  /// Entries may be negative or exceed p; they are reduced.
  static FpMatrix from_rows(int p, const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols);

  int prime() const noexcept { return p_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  int operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, std::int64_t v) noexcept;
  std::span<const int> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
  void append_row(std::span<const int> values);

  /// Reduced row-echelon form with zero rows dropped. Pivots are the leftmost non-zero
  /// entry of each row, scaled to 1, with every other entry of a pivot column cleared.
  FpMatrix rref(std::vector<std::size_t>* pivots = nullptr) const;
  std::size_t rank() const { return rref().rows(); }

  /// RREF basis (as rows) of {x in F_p^cols : this * x = 0}.
  FpMatrix nullspace() const;

  FpMatrix select_columns(std::span<const std::size_t> columns) const;
  FpMatrix transpose() const;

  /// Linear combination sum_i coeffs[i] * row(i), reduced mod p.
  std::vector<int> combine_rows(std::span<const int> coeffs) const;

  /// True when every row of `vectors` is annihilated by every row of this matrix.
  bool annihilates(const FpMatrix& vectors) const;

  friend bool operator==(const FpMatrix& a, const FpMatrix& b) noexcept {
    return a.p_ == b.p_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  int p_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<int> data_;
};

}  // namespace linpat
