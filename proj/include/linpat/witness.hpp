#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linpat/density.hpp"
#include "linpat/functions.hpp"
#include "linpat/systems.hpp"

namespace linpat {

/// Whether the multiset W splits into pairs {v, -v}. Zero pairs with zero.
bool cancelling_partition(const FpSpace& space, std::span<const Index> multiset);
bool cancelling_partition(std::span<const GroupElement> multiset);

/// The frequency multiset M(r, s) of a 2 x k system together with the independence flag of (r, s).
struct FrequencyMultiset {
  std::vector<Index> entries;
  bool independent = false;
};

FrequencyMultiset frequency_multiset(const LinearSystem& sys, const FpSpace& space, Index r, Index s);

/// Support data for spectra living on M0 and -M0, where M0 = M(r0, s0) over F_p^2.
struct RestrictedSupport {
  FpSpace space;
  Index r0 = 0;
  Index s0 = 0;
  std::vector<Index> m0;
  /// Dual pairs (r, s), as r * p^2 + s, whose frequencies all lie in M0 and -M0.
  std::vector<Index> supported_pairs;
  /// For each supported pair, the frequencies as (column of M0, +1 or -1) in column order.
  std::vector<std::vector<std::pair<std::size_t, int>>> pair_terms;
};

/// Validates the hypotheses (2 x k, generic minors, independent r0 and s0) and the facts
/// 0 not in M0, |M0| = k and M0 disjoint from -M0. Throws UsageError naming the failed check.
RestrictedSupport restricted_support(const LinearSystem& sys, Index r0, Index s0);
/// The default anchor r0 = (1, 0), s0 = (0, 1).
RestrictedSupport restricted_support(const LinearSystem& sys);

/// F^ = phase_i / 2k on the i-th element of M0, conjugated on -M0, zero elsewhere.
FourierTable restricted_spectrum(const RestrictedSupport& support, std::span<const Complex> phases);
/// T(F) summed over the supported pairs only.
Complex restricted_density(const RestrictedSupport& support, std::span<const Complex> phases);
/// Pairs (r, s) with M(r, s) inside M0 and -M0 that nevertheless form a cancelling partition.
std::vector<Index> cancelling_supported_pairs(const LinearSystem& sys, const RestrictedSupport& support);

struct SampledFunction {
  GroupFunction function;
  FourierTable spectrum;
};

/// Phases for iteration `iteration` of the restricted construction, one per element of M0.
std::vector<Complex> restricted_phases(const RestrictedSupport& support, std::uint64_t seed, std::uint64_t iteration);
/// The real function F with restricted spectrum; |F| <= 1 and E F = 0.
SampledFunction restricted_support_sampler(const RestrictedSupport& support, std::uint64_t seed, std::uint64_t iteration);

/// Unit phases on every h > 0, conjugates on h < 0, zero at 0. The function is the real part
/// of the inverse transform, so |F| <= p^n.
SampledFunction full_phase_sampler(const LinearSystem& sys, int n, std::uint64_t seed, std::uint64_t iteration);
/// Same spectrum without the inverse transform.
FourierTable full_phase_spectrum(const FpSpace& space, std::uint64_t seed, std::uint64_t iteration);

enum class WitnessMethod { restricted_support, full_phase, odd_negation };
std::string to_string(WitnessMethod m);
WitnessMethod witness_method_from_string(const std::string& s);

/// A function f with E f = 0, |f| <= 1 and T(f) < 0, plus the recipe that regenerates it.
struct WitnessCertificate {
  std::vector<std::vector<std::int64_t>> system_rows;
  int p = 0;
  int n = 0;
  WitnessMethod method = WitnessMethod::full_phase;
  std::uint64_t seed = 0;
  std::uint64_t iteration = 0;
  Index r0 = 0;
  Index s0 = 0;
  bool negated = false;
  /// f = F / scale where F is the raw sampled function.
  double scale = 1.0;
  std::vector<double> values;
  double mean = 0.0;
  double sup_norm = 0.0;
  double density_direct = 0.0;
  double density_fourier = 0.0;
  /// T(F) for the raw function; the acceptance rule is raw_density < -threshold.
  double raw_density = 0.0;
  double threshold = 0.0;
  std::uint64_t term_count = 0;

  LinearSystem system() const { return LinearSystem::from_rows(p, system_rows); }
  GroupFunction function() const;
};

/// Distribution of sampled densities (on the raw scale) over the iterations that were tried.
struct SampleSummary {
  std::uint64_t iterations = 0;
  std::uint64_t negatives = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double standard_error = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct WitnessSearch {
  std::optional<WitnessCertificate> certificate;
  SampleSummary summary;
  std::string note;
};

struct SearchOptions {
  std::uint64_t max_iters = 10'000;
  DensityOptions density;
  /// The sign rule: raw T < -sign_tolerance * term_count.
  double sign_tolerance = 1e-9;
};

/// Random restricted-support search over F_p^2. Requires a generic 2 x k system with p > 2
/// and no additive k-tuple.
WitnessSearch search_witness_restricted(const LinearSystem& sys, std::uint64_t seed, const SearchOptions& opts = {});
/// Full-phase search over F_p^n for a generic 2 x k system; odd k takes the negation fast path.
WitnessSearch search_witness_full(const LinearSystem& sys, int n, std::uint64_t seed, const SearchOptions& opts = {});
/// Sample summary of restricted densities over `samples` iterations; its mean estimates E_F T(F) = 0.
SampleSummary restricted_density_distribution(const RestrictedSupport& support, std::uint64_t seed, std::uint64_t samples);

struct WitnessVerification {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Regenerates f from the recipe, compares it bit-for-bit with the stored table and re-checks
/// mean, sup norm and the sign of T by both density routes.
WitnessVerification verify_witness(const WitnessCertificate& cert, const DensityOptions& opts = {});

std::string witness_to_json(const WitnessCertificate& cert);
WitnessCertificate witness_from_json(const std::string& text);

/// Positive elements h > 0 in increasing signed order and, for every independent dual pair,
/// the h for which M(r, s) belongs to A_h: h is in M(r, s) and dominates |h'| for all h' in it.
class MartingaleIndex {
 public:
  static constexpr std::size_t kNoOwner = static_cast<std::size_t>(-1);

  /// Requires a generic 2 x k system; throws UsageError otherwise.
  MartingaleIndex(const FpMatrix& equations, const DualPairTable& pairs);

  std::span<const Index> positives() const noexcept { return positives_; }
  /// Position in positives() of the owner of `pair`, or kNoOwner.
  std::size_t owner(Index pair) const noexcept { return owner_[static_cast<std::size_t>(pair)]; }
  /// |A_h| for the h at position `pos`.
  std::size_t class_size(std::size_t pos) const noexcept { return class_sizes_[pos]; }
  std::size_t owned_pairs() const noexcept { return owned_; }

 private:
  std::vector<Index> positives_;
  std::vector<std::size_t> owner_;
  std::vector<std::size_t> class_sizes_;
  std::size_t owned_ = 0;
};

/// X_h = 2 sum_{M in A_h} Re prod_{m in M} F^(m), one entry per element of positives().
std::vector<double> martingale_decomposition(const DualPairTable& pairs, const MartingaleIndex& index,
                                             const FourierTable& fhat);

struct CltReport {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  Index independent_pairs = 0;
  /// Var P(F^) computed exactly as the number of ordered independent pairs whose multisets cancel.
  double exact_variance = 0.0;
  /// The subsum of the variance formula with M = M'.
  double diagonal_variance = 0.0;
  double mean_p = 0.0;
  double variance_p = 0.0;
  double mean_standardized = 0.0;
  double ks_distance = 0.0;
  std::vector<double> epsilons;
  /// sum_h E[X~_h^2 1{|X~_h| > eps}] per epsilon.
  std::vector<double> lindeberg;
  double fourth_moment_sum = 0.0;
  /// sum_{h1 != h2} E[X~_h1^2 X~_h2^2].
  double cross_moment_sum = 0.0;
  /// max over samples of |sum_h X_h - Re P|.
  double decomposition_error = 0.0;
};

/// Monte-Carlo diagnostic of the martingale central limit behaviour of P(F^).
CltReport clt_diagnostic(const LinearSystem& sys, int n, std::uint64_t samples, std::uint64_t seed,
                         unsigned workers = 1);

/// Kolmogorov-Smirnov distance between the empirical distribution of `values` and N(0, 1).
double ks_distance_to_normal(std::vector<double> values);

}  // namespace linpat
