#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linpat/fp_matrix.hpp"

namespace linpat {

/// A linear subspace of F_p^t, held both as a kernel basis and as the equations cutting it out.
/// Both matrices are in reduced row-echelon form, so two spaces are equal exactly when their
/// matrices are.
class SolutionSpace {
 public:
  static SolutionSpace of_equations(const FpMatrix& equations);
  static SolutionSpace spanned_by(const FpMatrix& generators);

  int prime() const noexcept { return basis_.prime(); }
  std::size_t variables() const noexcept { return basis_.cols(); }
  std::size_t degrees_of_freedom() const noexcept { return basis_.rows(); }
  std::size_t codimension() const noexcept { return equations_.rows(); }
  bool is_free() const noexcept { return equations_.rows() == 0; }

  const FpMatrix& basis() const noexcept { return basis_; }
  const FpMatrix& equations() const noexcept { return equations_; }

  /// True when every row of `vectors` lies in the space.
  bool contains(const FpMatrix& vectors) const { return equations_.annihilates(vectors); }
  /// Coordinate projection onto `columns` (in the given order).
  SolutionSpace project(std::span<const std::size_t> columns) const;

  friend bool operator==(const SolutionSpace& a, const SolutionSpace& b) noexcept { return a.basis_ == b.basis_; }

 private:
  SolutionSpace(FpMatrix basis, FpMatrix equations) : basis_(std::move(basis)), equations_(std::move(equations)) {}
  FpMatrix basis_;
  FpMatrix equations_;
};

/// An m x t homogeneous system over F_p with t > m >= 1 and full rank m.
class LinearSystem {
 public:
  explicit LinearSystem(FpMatrix matrix);
  static LinearSystem from_rows(int p, const std::vector<std::vector<std::int64_t>>& rows);

  /// Text format: "p m t" then m rows of t integers; '#' starts a comment.
  static LinearSystem parse(std::istream& in);
  static LinearSystem load(const std::string& path);
  /// Inverse of parse, with entries written as signed representatives.
  std::string to_text() const;

  int prime() const noexcept { return matrix_.prime(); }
  std::size_t equations() const noexcept { return matrix_.rows(); }
  std::size_t variables() const noexcept { return matrix_.cols(); }
  std::size_t rank() const noexcept { return solutions_.codimension(); }
  std::size_t degrees_of_freedom() const noexcept { return solutions_.degrees_of_freedom(); }

  const FpMatrix& matrix() const noexcept { return matrix_; }
  const SolutionSpace& solutions() const noexcept { return solutions_; }

 private:
  FpMatrix matrix_;
  SolutionSpace solutions_;
};

/// The restriction of a system to a set of columns S: the projection of its solution space.
struct SubsystemView {
  std::size_t parent_variables = 0;
  std::vector<std::size_t> columns;
  SolutionSpace solutions;

  std::size_t size() const noexcept { return columns.size(); }
  std::size_t degrees_of_freedom() const noexcept { return solutions.degrees_of_freedom(); }
  /// RREF annihilator basis; has no rows when the projection is all of F_p^|S|.
  const FpMatrix& canonical_matrix() const noexcept { return solutions.equations(); }
  /// The canonical matrix as a standalone system; throws UsageError for a free restriction.
  LinearSystem as_system() const { return LinearSystem(canonical_matrix()); }
};

/// Minimum number of non-zero entries over non-zero vectors of the row space of `rows`.
/// Returns 0 for a matrix with no non-zero rows.
std::size_t shortest_equation_length(const FpMatrix& rows);
inline std::size_t shortest_equation_length(const LinearSystem& sys) { return shortest_equation_length(sys.matrix()); }

/// Every 2x2 minor of a two-row matrix is non-singular. Throws UsageError unless m = 2.
bool minors_generic(const FpMatrix& matrix);
inline bool minors_generic(const LinearSystem& sys) { return minors_generic(sys.matrix()); }

/// Some row-space vector is a scalar multiple of a balanced +-1 vector. Always false for odd t.
bool contains_additive_tuple(const FpMatrix& matrix);
inline bool contains_additive_tuple(const LinearSystem& sys) { return contains_additive_tuple(sys.matrix()); }

SubsystemView restrict(const SolutionSpace& space, std::span<const std::size_t> columns);
inline SubsystemView restrict(const LinearSystem& sys, std::span<const std::size_t> columns) {
  return restrict(sys.solutions(), columns);
}

/// Searches ordered injections S of small's columns into big's columns such that the projection
/// of big's solutions onto S lies inside small's solutions. Returns S (0-based, in small's
/// column order) or nullopt.
std::optional<std::vector<std::size_t>> contains(const SolutionSpace& big, const SolutionSpace& small);
inline std::optional<std::vector<std::size_t>> contains(const LinearSystem& big, const LinearSystem& small) {
  return contains(big.solutions(), small.solutions());
}

struct OperatorMatch {
  bool labeled = false;
  bool permuted = false;
  /// When permuted: column i of b corresponds to column permutation[i] of a.
  std::vector<std::size_t> permutation;
};

/// Compares two solution spaces as labeled subspaces and up to a permutation of columns.
OperatorMatch operators_equal(const SolutionSpace& a, const SolutionSpace& b);

}  // namespace linpat
