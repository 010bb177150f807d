#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linpat/density.hpp"
#include "linpat/systems.hpp"
#include "linpat/witness.hpp"

namespace linpat {

/// Subsets S of the columns of a system, |S| even and |S| >= k, grouped by the density
/// operator of the restriction up to a permutation of columns.
struct RestrictionClass {
  std::vector<std::size_t> columns;
  SolutionSpace solutions;
  std::vector<std::vector<std::size_t>> members;
  std::size_t size = 0;
  std::size_t degrees_of_freedom = 0;
  /// |S| + deg of the restriction.
  std::size_t exponent = 0;
  /// The projection is all of F_p^|S|, so the density of a zero-mean function vanishes.
  bool free = false;
  /// |S| = k and deg = k - 2: the classes of minimal exponent 2k - 2.
  bool minimal = false;

  std::size_t multiplicity() const noexcept { return members.size(); }
};

/// Requires s(sys) = k - 1 (UsageError otherwise). Asserts deg >= k - 2 on every class and
/// that the exponent is minimal exactly on the |S| = k, deg = k - 2 classes, throwing
/// std::logic_error if either fails.
std::vector<RestrictionClass> restriction_classes(const LinearSystem& sys, std::size_t k);

/// Rounds to the grid 2^-40 Z, keeps |v| <= bound and makes the integer sum exactly zero by
/// moving entries toward zero.
std::vector<double> quantize_zero_mean(std::span<const double> values, double bound = 1.0);
inline constexpr double kQuantum = 0x1.0p-40;

struct SeparationOptions {
  std::uint64_t max_iters = 2'000;
  double margin = 1e-3;
  int max_dim = 3;
  DensityOptions density;
};

struct Separation {
  int n0 = 0;
  std::uint64_t iteration = 0;
  std::vector<double> f0;
  /// Position in the candidate list of the class with the strictly largest |T|.
  std::size_t dominant = 0;
  std::vector<double> densities;
  double relative_margin = 0.0;
};

/// The random zero-mean, quantized function tried by separate() at (n0, iteration).
std::vector<double> separation_candidate(int p, int n0, std::uint64_t seed, std::uint64_t iteration);

/// Draws f0 on F_p^n0 for n0 = 1, 2, ..., max_dim until one class has |T| above all others by
/// the relative margin. Throws SearchExhausted when every domain fails.
Separation separate(std::span<const SolutionSpace> classes, int p, std::uint64_t seed, const SeparationOptions& opts = {});

/// Least even A >= 2 with mult_d |t0_d|^A |t1_d| > sum_{j != d} mult_j |t0_j|^A |t1_j|.
/// Throws SearchExhausted above `cap`.
unsigned choose_A(std::span<const double> t0, std::span<const double> t1, std::span<const std::size_t> mult,
                  std::size_t dominant, unsigned cap = 10'000);

/// A non-leading term of the defect: magnitude exp(log_magnitude), suppressed by p^(-B gap).
struct TailTerm {
  double log_magnitude = 0.0;
  std::size_t gap = 1;
};

/// Least B >= 0 with sum_j exp(log_magnitude_j) p^(-B gap_j) <= exp(log_lead) / 2.
unsigned choose_B(int p, double log_lead, std::span<const TailTerm> tail, unsigned cap = 10'000);

struct CertifyOptions {
  std::uint64_t seed = 1;
  SeparationOptions separation;
  SearchOptions witness;
  unsigned max_A = 10'000;
  unsigned max_B = 10'000;
  /// Term budget of the direct defect cross-check on the materialized function.
  std::uint64_t direct_budget = 10'000'000;
};

struct ClassRecord {
  std::vector<std::size_t> columns;
  std::vector<std::vector<std::int64_t>> equations;
  std::size_t multiplicity = 0;
  std::size_t size = 0;
  std::size_t degrees_of_freedom = 0;
  std::size_t exponent = 0;
  bool free = false;
  bool minimal = false;
  double density_f0 = 0.0;
  double error_f0 = 0.0;
  double density_f1 = 0.0;
  double error_f1 = 0.0;
};

/// Everything needed to replay the claim that sys is uncommon: the defect of
/// 1/2 +- f3, f3 = (1/2) f0^(x)A (x) f1 (x) 1_0^(x)B, equals
/// 2^(1-t) sum_classes mult p^(-B e) T(f0)^A T(f1) and is strictly negative.
struct UncommonnessCertificate {
  int p = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::int64_t>> system_rows;
  std::vector<std::vector<std::int64_t>> subsystem_rows;
  /// Columns of the big system onto which the subsystem embeds.
  std::vector<std::size_t> embedding;
  std::vector<ClassRecord> classes;
  /// Index into classes of the dominant minimal class.
  std::size_t dominant = 0;
  int n0 = 0;
  std::uint64_t separation_iteration = 0;
  std::vector<double> f0;
  WitnessCertificate witness;
  std::vector<double> f1;
  unsigned A = 0;
  unsigned B = 0;
  /// Exact rational bounds, as "num/den" strings.
  std::string lead_upper;
  std::string tail_bound;
  std::string defect_upper;
  double defect_estimate = 0.0;
  bool direct_checked = false;
  double direct_defect = 0.0;
  std::string direct_note;

  LinearSystem system() const { return LinearSystem::from_rows(p, system_rows); }
  LinearSystem subsystem() const { return LinearSystem::from_rows(p, subsystem_rows); }
  /// The closed-form inequality in words.
  std::string inequality() const;
};

/// Picks the first minimal class: a generic 2 x k system contained in sys, k = s(sys) + 1.
/// Throws UsageError if k is odd or no minimal class exists.
LinearSystem find_generic_subsystem(const LinearSystem& sys);

/// Runs the whole pipeline. Throws UsageError on failed preconditions and SearchExhausted when
/// separation or the witness search fails.
UncommonnessCertificate certify_uncommon(const LinearSystem& sys, const LinearSystem& sub, const CertifyOptions& opts = {});

struct CertificateVerification {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Replays every check from the stored data and the regeneration recipes, without searching.
CertificateVerification verify_certificate(const UncommonnessCertificate& cert, const DensityOptions& opts = {});

std::string certificate_to_json(const UncommonnessCertificate& cert);
UncommonnessCertificate certificate_from_json(const std::string& text);

}  // namespace linpat
