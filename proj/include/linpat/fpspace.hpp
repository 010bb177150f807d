#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace linpat {

using Index = std::uint64_t;

/// Largest number of group elements a value table may hold.
inline constexpr Index kMaxTableSize = Index{1} << 26;

bool is_prime(std::int64_t v) noexcept;

/// Canonical residue of v in [0, p-1].
inline int mod_p(std::int64_t v, int p) noexcept {
  const std::int64_t r = v % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

/// Representative of r in [-(p-1)/2, (p-1)/2].
inline int signed_residue(int r, int p) noexcept { return r > (p - 1) / 2 ? r - p : r; }

int inverse_mod(int a, int p);

/// The group F_p^n for an odd prime p.
///
/// Elements are addressed by a linear index: the mixed-radix base-p expansion of the
/// canonical residues, most-significant coordinate first. A second numbering, the
/// order rank, lists elements in the signed lexicographic order.
class FpSpace {
 public:
  FpSpace(int p, int n);

  int prime() const noexcept { return p_; }
  int dim() const noexcept { return n_; }
  Index size() const noexcept { return size_; }
  /// p^(n-1-coord): the index weight of one coordinate.
  Index weight(int coord) const noexcept { return weights_[static_cast<std::size_t>(coord)]; }

  /// Number of table entries; throws CapacityError above kMaxTableSize.
  std::size_t table_size() const;

  void digits(Index idx, std::span<int> out) const noexcept;
  Index index_of(std::span<const int> digits) const noexcept;

  Index negate(Index idx) const noexcept;
  Index add(Index a, Index b) const noexcept;
  Index scale(int c, Index a) const noexcept;
  /// Euclidean dot product of two elements, reduced mod p.
  int dot(Index a, Index b) const noexcept;

  /// +1, 0 or -1 according to the first non-zero signed coordinate.
  int sign(Index idx) const noexcept;
  Index abs(Index idx) const noexcept { return sign(idx) < 0 ? negate(idx) : idx; }

  /// Position of idx in the signed lexicographic order; zero sits at (p^n - 1) / 2.
  Index order_rank(Index idx) const noexcept;
  Index from_order_rank(Index rank) const noexcept;

  friend bool operator==(const FpSpace& a, const FpSpace& b) noexcept {
    return a.p_ == b.p_ && a.n_ == b.n_;
  }

 private:
  int p_;
  int n_;
  Index size_;
  std::vector<Index> weights_;
};

/// A vector in F_p^n stored as canonical residues.
class GroupElement {
 public:
  GroupElement(const FpSpace& space, std::vector<int> coords);
  static GroupElement zero(const FpSpace& space);
  static GroupElement from_index(const FpSpace& space, Index idx);
  /// Parses "3,0,4"; negative entries are reduced mod p.
  static GroupElement parse(const FpSpace& space, std::string_view text);

  const FpSpace& space() const noexcept { return space_; }
  std::span<const int> coords() const noexcept { return coords_; }
  int coord(std::size_t i) const noexcept { return coords_[i]; }
  int signed_coord(std::size_t i) const noexcept { return signed_residue(coords_[i], space_.prime()); }
  Index index() const noexcept { return space_.index_of(coords_); }
  bool is_zero() const noexcept;
  int sign() const noexcept;

  GroupElement operator-() const;
  GroupElement operator+(const GroupElement& other) const;
  GroupElement operator-(const GroupElement& other) const;
  GroupElement scaled(int c) const;

  std::string to_string() const;

  friend bool operator==(const GroupElement& a, const GroupElement& b) noexcept {
    return a.space_ == b.space_ && a.coords_ == b.coords_;
  }
  friend std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b);

 private:
  FpSpace space_;
  std::vector<int> coords_;
};

/// Signed lexicographic order; throws UsageError when the domains differ.
std::strong_ordering compare(const GroupElement& a, const GroupElement& b);

/// h if h is non-negative in the signed order, otherwise -h.
GroupElement abs(const GroupElement& h);

/// All p^n elements sorted by the signed lexicographic order.
std::vector<GroupElement> enumerate_group(int p, int n);

}  // namespace linpat
