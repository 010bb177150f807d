#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "linpat/functions.hpp"
#include "linpat/systems.hpp"

namespace linpat {

struct DensityOptions {
  /// Maximum number of product terms a single evaluation may enumerate.
  std::uint64_t budget = 10'000'000;
  unsigned workers = 1;
};

/// One evaluation of a solution density.
struct DensityValue {
  Complex value;
  /// Normalized sum of |term|; the scale against which rounding is measured.
  double abs_sum = 0.0;
  std::uint64_t terms = 0;
  /// Bound on |value - exact| caused by the summation, given the input table exactly.
  double error_bound = 0.0;
};

/// p^(n d) with d the degrees of freedom; saturates at UINT64_MAX.
std::uint64_t direct_term_count(const SolutionSpace& sol, const FpSpace& space);
/// p^(n m) with m the number of independent equations; saturates at UINT64_MAX.
std::uint64_t fourier_term_count(const SolutionSpace& sol, const FpSpace& space);

/// T(f) by enumerating the solution space through its kernel basis, p^(n d) terms.
DensityValue density_direct(const SolutionSpace& sol, const GroupFunction& f, const DensityOptions& opts = {});
/// T(f) = sum over dual tuples (l_1..l_m) of prod_i f^(sum_j M_ji l_j), p^(n m) terms.
DensityValue density_fourier(const SolutionSpace& sol, const FourierTable& fhat, const DensityOptions& opts = {});
DensityValue density_fourier(const SolutionSpace& sol, const GroupFunction& f, const DensityOptions& opts = {});

/// Real part of T(f), evaluated by whichever route enumerates fewer terms.
double density(const SolutionSpace& sol, const GroupFunction& f, const DensityOptions& opts = {});
/// T(f^(x)A) = T(f)^A without materializing the power.
Complex density(const SolutionSpace& sol, const TensorPower& power, const DensityOptions& opts = {});

enum class DensityMethod { automatic, direct, fourier, both };

struct DensityReport {
  DensityMethod method = DensityMethod::automatic;
  bool has_direct = false;
  bool has_fourier = false;
  double value_direct = 0.0;
  double value_fourier = 0.0;
  double imag_direct = 0.0;
  double imag_fourier = 0.0;
  double discrepancy = 0.0;
  std::uint64_t terms_direct = 0;
  std::uint64_t terms_fourier = 0;

  double value() const noexcept { return has_direct ? value_direct : value_fourier; }
};

/// `automatic` picks the cheaper route; `both` evaluates each and records the discrepancy.
DensityReport density_report(const SolutionSpace& sol, const GroupFunction& f, DensityMethod method,
                             const DensityOptions& opts = {});

/// Whether r and s span a 2-dimensional subspace of F_p^n.
bool linearly_independent(const FpSpace& space, Index r, Index s);

/// The multiset {a_i r + b_i s : i in [k]} for a 2 x k equation matrix.
std::vector<Index> frequency_multiset(const FpMatrix& equations, const FpSpace& space, Index r, Index s);

/// Precomputed frequency multisets M(r, s) for every dual pair of a 2 x k system.
/// Pair (r, s) has index r * p^n + s.
class DualPairTable {
 public:
  /// Largest number of pairs a table may hold.
  static constexpr Index kMaxPairs = Index{1} << 24;

  DualPairTable(const FpMatrix& equations, const FpSpace& space);

  const FpSpace& space() const noexcept { return space_; }
  std::size_t width() const noexcept { return width_; }
  Index pairs() const noexcept { return pairs_; }
  Index independent_count() const noexcept { return independent_count_; }
  bool independent(Index pair) const noexcept { return independent_[static_cast<std::size_t>(pair)] != 0; }
  std::span<const std::uint32_t> frequencies(Index pair) const noexcept {
    return {freqs_.data() + static_cast<std::size_t>(pair) * width_, width_};
  }

 private:
  FpSpace space_;
  std::size_t width_;
  Index pairs_;
  Index independent_count_ = 0;
  std::vector<std::uint8_t> independent_;
  std::vector<std::uint32_t> freqs_;
};

/// The two halves of the Fourier-side sum of a 2 x k system: P over linearly independent
/// dual pairs, Q over the rest.
struct PQSplit {
  Complex P;
  Complex Q;
  Index independent_pairs = 0;
  Index dependent_pairs = 0;
};

PQSplit pq_split(const DualPairTable& pairs, const FourierTable& fhat);
/// Throws UsageError unless the system has exactly two equations.
PQSplit pq_split(const LinearSystem& sys, const FourierTable& fhat);

/// p^(n+1) + p^n - p: the number of dependent dual pairs, bounding |Q| for |f^| <= 1.
double dependent_pair_bound(const FpSpace& space);

struct DefectTerm {
  std::vector<std::size_t> columns;
  std::size_t degrees_of_freedom = 0;
  double density = 0.0;
  double contribution = 0.0;
};

/// T(1/2 + f) + T(1/2 - f) - 2^(1-t), computed directly and through the expansion
/// sum over even |S| >= s of 2^(1-t+|S|) T_{sys|S}(f).
struct DefectReport {
  std::size_t variables = 0;
  std::size_t shortest_equation = 0;
  double baseline = 0.0;  ///< 2^(1-t)
  double defect_direct = 0.0;
  double defect_expansion = 0.0;
  double discrepancy = 0.0;
  std::vector<DefectTerm> terms;

  /// The reported value; the expansion avoids cancellation against the baseline.
  double defect() const noexcept { return defect_expansion; }
};

/// Requires f real with |E f| <= 1e-10 and values in [-1/2, 1/2]; throws UsageError otherwise.
DefectReport commonness_defect(const LinearSystem& sys, const GroupFunction& f, const DensityOptions& opts = {});

}  // namespace linpat
