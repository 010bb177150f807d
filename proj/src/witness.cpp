#include "linpat/witness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "linpat/errors.hpp"
#include "linpat/parallel.hpp"
#include "linpat/random.hpp"

namespace linpat {

bool cancelling_partition(const FpSpace& space, std::span<const Index> multiset) {
  if (multiset.size() % 2 != 0) return false;
  // Net count per absolute value: +1 for h > 0, -1 for h < 0. Zero must occur an even number of times.
  std::map<Index, long> net;
  std::size_t zeros = 0;
  for (Index h : multiset) {
    const int sg = space.sign(h);
    if (sg == 0) {
      ++zeros;
    } else {
      net[space.abs(h)] += sg;
    }
  }
  if (zeros % 2 != 0) return false;
  return std::all_of(net.begin(), net.end(), [](const auto& kv) { return kv.second == 0; });
}

bool cancelling_partition(std::span<const GroupElement> multiset) {
  if (multiset.empty()) return true;
  const FpSpace& space = multiset.front().space();
  std::vector<Index> idx;
  idx.reserve(multiset.size());
  for (const auto& g : multiset) {
    if (!(g.space() == space)) throw UsageError("cancelling partition over mixed groups");
    idx.push_back(g.index());
  }
  return cancelling_partition(space, idx);
}

FrequencyMultiset frequency_multiset(const LinearSystem& sys, const FpSpace& space, Index r, Index s) {
  return {frequency_multiset(sys.matrix(), space, r, s), linearly_independent(space, r, s)};
}

namespace {

void require_generic_pair_system(const LinearSystem& sys) {
  if (sys.equations() != 2) throw UsageError("construction needs a 2 x k system, got m=" + std::to_string(sys.equations()));
  if (!minors_generic(sys)) throw UsageError("construction needs every 2x2 minor to be non-singular");
}

}  // namespace

RestrictedSupport restricted_support(const LinearSystem& sys, Index r0, Index s0) {
  require_generic_pair_system(sys);
  const FpSpace space(sys.prime(), 2);
  const Index N = space.table_size();
  if (r0 >= N || s0 >= N) throw UsageError("anchor pair out of range");
  if (!linearly_independent(space, r0, s0)) throw UsageError("anchor vectors r0 and s0 are linearly dependent");
  RestrictedSupport sup{space, r0, s0, frequency_multiset(sys.matrix(), space, r0, s0), {}, {}};
  const std::size_t k = sup.m0.size();
  // frequency -> (column, sign) for M0 and -M0
  std::vector<std::pair<long, int>> where(static_cast<std::size_t>(N), {-1, 0});
  for (std::size_t i = 0; i < k; ++i) {
    const Index h = sup.m0[i];
    if (h == 0) throw UsageError("0 lies in M0");
    if (where[h].first >= 0) throw UsageError("M0 has repeated elements");
    where[h] = {static_cast<long>(i), +1};
  }
  for (std::size_t i = 0; i < k; ++i) {
    const Index h = space.negate(sup.m0[i]);
    if (where[h].first >= 0) throw UsageError("M0 meets -M0");
    where[h] = {static_cast<long>(i), -1};
  }
  std::vector<Index> ar(k), bs(k);
  for (Index r = 0; r < N; ++r) {
    for (std::size_t i = 0; i < k; ++i) ar[i] = space.scale(sys.matrix()(0, i), r);
    for (Index s = 0; s < N; ++s) {
      std::vector<std::pair<std::size_t, int>> terms;
      bool inside = true;
      for (std::size_t i = 0; i < k && inside; ++i) {
        const Index h = space.add(ar[i], space.scale(sys.matrix()(1, i), s));
        if (where[h].first < 0) {
          inside = false;
        } else {
          terms.emplace_back(static_cast<std::size_t>(where[h].first), where[h].second);
        }
      }
      if (!inside) continue;
      sup.supported_pairs.push_back(r * N + s);
      sup.pair_terms.push_back(std::move(terms));
    }
  }
  return sup;
}

RestrictedSupport restricted_support(const LinearSystem& sys) {
  const int p = sys.prime();
  // (1, 0) has index p, (0, 1) has index 1.
  return restricted_support(sys, static_cast<Index>(p), 1);
}

FourierTable restricted_spectrum(const RestrictedSupport& support, std::span<const Complex> phases) {
  const std::size_t k = support.m0.size();
  if (phases.size() != k) throw UsageError("need one phase per element of M0");
  std::vector<Complex> c(support.space.table_size(), 0.0);
  const double w = 1.0 / (2.0 * static_cast<double>(k));
  for (std::size_t i = 0; i < k; ++i) {
    c[support.m0[i]] = phases[i] * w;
    c[support.space.negate(support.m0[i])] = std::conj(phases[i]) * w;
  }
  return FourierTable(support.space, std::move(c));
}

Complex restricted_density(const RestrictedSupport& support, std::span<const Complex> phases) {
  const std::size_t k = support.m0.size();
  if (phases.size() != k) throw UsageError("need one phase per element of M0");
  const double w = 1.0 / (2.0 * static_cast<double>(k));
  Complex total = 0.0;
  for (const auto& terms : support.pair_terms) {
    Complex prod = 1.0;
    for (const auto& [col, sg] : terms) prod *= (sg > 0 ? phases[col] : std::conj(phases[col])) * w;
    total += prod;
  }
  return total;
}

std::vector<Index> cancelling_supported_pairs(const LinearSystem& sys, const RestrictedSupport& support) {
  std::vector<Index> bad;
  const Index N = support.space.size();
  for (Index pair : support.supported_pairs) {
    const auto m = frequency_multiset(sys.matrix(), support.space, pair / N, pair % N);
    if (cancelling_partition(support.space, m)) bad.push_back(pair);
  }
  return bad;
}

std::vector<Complex> restricted_phases(const RestrictedSupport& support, std::uint64_t seed, std::uint64_t iteration) {
  auto gen = make_stream(seed, StreamTag::restricted_phases, iteration);
  std::vector<Complex> phases(support.m0.size());
  for (Complex& z : phases) z = unit_phase(gen);
  return phases;
}

namespace {

GroupFunction real_inverse(const FourierTable& spectrum) {
  const GroupFunction raw = inverse_transform(spectrum);
  return GroupFunction::from_real(spectrum.space(), raw.real_values());
}

FourierTable phase_spectrum(const FpSpace& space, std::uint64_t seed, StreamTag tag, std::uint64_t iteration) {
  auto gen = make_stream(seed, tag, iteration);
  const Index N = space.table_size();
  std::vector<Complex> c(static_cast<std::size_t>(N), 0.0);
  for (Index rank = (N - 1) / 2 + 1; rank < N; ++rank) {
    const Index h = space.from_order_rank(rank);
    const Complex xi = unit_phase(gen);
    c[h] = xi;
    c[space.negate(h)] = std::conj(xi);
  }
  return FourierTable(space, std::move(c));
}

GroupFunction odd_candidate(const FpSpace& space, std::uint64_t seed, std::uint64_t iteration) {
  auto gen = make_stream(seed, StreamTag::odd_witness, iteration);
  std::vector<double> v(space.table_size());
  for (double& x : v) x = 2.0 * unit_uniform(gen) - 1.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double sup = 0.0;
  for (double& x : v) {
    x -= mean;
    sup = std::max(sup, std::abs(x));
  }
  if (sup > 1.0) {
    for (double& x : v) x /= sup;
  }
  return GroupFunction::from_real(space, v);
}

SampleSummary summarize(std::span<const double> values, double threshold) {
  SampleSummary s;
  s.iterations = values.size();
  if (values.empty()) return s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  s.mean = pairwise_sum<double>(values) / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) {
    ss += (v - s.mean) * (v - s.mean);
    if (v < -threshold) ++s.negatives;
  }
  s.stddev = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
  s.standard_error = s.stddev / std::sqrt(static_cast<double>(values.size()));
  return s;
}

std::vector<std::vector<std::int64_t>> rows_of(const LinearSystem& sys) {
  std::vector<std::vector<std::int64_t>> rows(sys.equations());
  for (std::size_t r = 0; r < sys.equations(); ++r) {
    for (std::size_t c = 0; c < sys.variables(); ++c) rows[r].push_back(signed_residue(sys.matrix()(r, c), sys.prime()));
  }
  return rows;
}

// Fills the oracle fields of a certificate and reports whether it meets the acceptance rule.
bool finalize(WitnessCertificate& cert, const LinearSystem& sys, const GroupFunction& f, const DensityOptions& opts) {
  cert.values = f.real_values();
  cert.mean = f.mean().real();
  cert.sup_norm = f.sup_norm();
  cert.density_direct = density_direct(sys.solutions(), f, opts).value.real();
  cert.density_fourier = density_fourier(sys.solutions(), f, opts).value.real();
  const double raw_scale = std::pow(cert.scale, static_cast<double>(sys.variables()));
  return std::abs(cert.mean) < 1e-10 && cert.sup_norm <= 1.0 + kRealTolerance &&
         cert.density_direct * raw_scale < -cert.threshold && cert.density_fourier * raw_scale < -cert.threshold &&
         std::abs(cert.density_direct - cert.density_fourier) < 1e-8;
}

WitnessCertificate base_certificate(const LinearSystem& sys, int n, WitnessMethod method, std::uint64_t seed,
                                    std::uint64_t term_count, double tolerance) {
  WitnessCertificate cert;
  cert.system_rows = rows_of(sys);
  cert.p = sys.prime();
  cert.n = n;
  cert.method = method;
  cert.seed = seed;
  cert.term_count = term_count;
  cert.threshold = tolerance * static_cast<double>(term_count);
  return cert;
}

constexpr std::uint64_t kBatch = 256;

// Evaluates raw densities in batches (in parallel within a batch) and returns the first
// iteration accepted by `accept`, scanning in index order.
template <class Eval, class Accept>
std::optional<std::uint64_t> batched_search(std::uint64_t max_iters, unsigned workers, Eval&& eval, Accept&& accept,
                                            std::vector<double>& history) {
  for (std::uint64_t start = 0; start < max_iters; start += kBatch) {
    const std::uint64_t count = std::min(kBatch, max_iters - start);
    std::vector<double> vals(static_cast<std::size_t>(count));
    parallel_for(static_cast<std::size_t>(count), workers, [&](std::size_t i) { vals[i] = eval(start + i); });
    for (std::uint64_t i = 0; i < count; ++i) {
      history.push_back(vals[static_cast<std::size_t>(i)]);
      if (accept(start + i, vals[static_cast<std::size_t>(i)])) return start + i;
    }
  }
  return std::nullopt;
}

}  // namespace

SampledFunction restricted_support_sampler(const RestrictedSupport& support, std::uint64_t seed, std::uint64_t iteration) {
  FourierTable spectrum = restricted_spectrum(support, restricted_phases(support, seed, iteration));
  GroupFunction f = real_inverse(spectrum);
  return {std::move(f), std::move(spectrum)};
}

FourierTable full_phase_spectrum(const FpSpace& space, std::uint64_t seed, std::uint64_t iteration) {
  return phase_spectrum(space, seed, StreamTag::full_phases, iteration);
}

SampledFunction full_phase_sampler(const LinearSystem& sys, int n, std::uint64_t seed, std::uint64_t iteration) {
  require_generic_pair_system(sys);
  const FpSpace space(sys.prime(), n);
  FourierTable spectrum = full_phase_spectrum(space, seed, iteration);
  GroupFunction f = real_inverse(spectrum);
  return {std::move(f), std::move(spectrum)};
}

std::string to_string(WitnessMethod m) {
  switch (m) {
    case WitnessMethod::restricted_support:
      return "restricted-support";
    case WitnessMethod::full_phase:
      return "full-phase";
    case WitnessMethod::odd_negation:
      return "odd-negation";
  }
  return "unknown";
}

WitnessMethod witness_method_from_string(const std::string& s) {
  if (s == "restricted-support") return WitnessMethod::restricted_support;
  if (s == "full-phase") return WitnessMethod::full_phase;
  if (s == "odd-negation") return WitnessMethod::odd_negation;
  throw UsageError("unknown witness method '" + s + "'");
}

GroupFunction WitnessCertificate::function() const {
  return GroupFunction::from_real(FpSpace(p, n), values);
}

SampleSummary restricted_density_distribution(const RestrictedSupport& support, std::uint64_t seed, std::uint64_t samples) {
  std::vector<double> vals(static_cast<std::size_t>(samples));
  for (std::uint64_t i = 0; i < samples; ++i) {
    vals[static_cast<std::size_t>(i)] = restricted_density(support, restricted_phases(support, seed, i)).real();
  }
  return summarize(vals, 0.0);
}

WitnessSearch search_witness_restricted(const LinearSystem& sys, std::uint64_t seed, const SearchOptions& opts) {
  require_generic_pair_system(sys);
  if (contains_additive_tuple(sys)) {
    throw UsageError("the restricted-support construction needs a system without an additive k-tuple");
  }
  const RestrictedSupport support = restricted_support(sys);
  const std::uint64_t terms = fourier_term_count(sys.solutions(), support.space);
  WitnessSearch out;
  WitnessCertificate cert =
      base_certificate(sys, 2, WitnessMethod::restricted_support, seed, terms, opts.sign_tolerance);
  cert.r0 = support.r0;
  cert.s0 = support.s0;
  std::vector<double> history;
  const auto found = batched_search(
      opts.max_iters, opts.density.workers,
      [&](std::uint64_t it) { return restricted_density(support, restricted_phases(support, seed, it)).real(); },
      [&](std::uint64_t it, double value) {
        if (value >= -cert.threshold) return false;
        cert.iteration = it;
        cert.raw_density = value;
        const SampledFunction s = restricted_support_sampler(support, seed, it);
        if (finalize(cert, sys, s.function, opts.density)) return true;
        out.note += "iteration " + std::to_string(it) + " rejected by the oracle cross-check; ";
        return false;
      },
      history);
  out.summary = summarize(history, cert.threshold);
  if (found) out.certificate = std::move(cert);
  return out;
}

WitnessSearch search_witness_full(const LinearSystem& sys, int n, std::uint64_t seed, const SearchOptions& opts) {
  require_generic_pair_system(sys);
  const FpSpace space(sys.prime(), n);
  const std::uint64_t terms = fourier_term_count(sys.solutions(), space);
  WitnessSearch out;
  std::vector<double> history;

  if (sys.variables() % 2 == 1) {
    // Odd number of variables: T(-f) = -T(f), so any f with T(f) != 0 yields a witness.
    WitnessCertificate cert = base_certificate(sys, n, WitnessMethod::odd_negation, seed, terms, opts.sign_tolerance);
    for (std::uint64_t it = 0; it < opts.max_iters; ++it) {
      GroupFunction f = odd_candidate(space, seed, it);
      const double value = density(sys.solutions(), f, opts.density);
      history.push_back(value);
      if (std::abs(value) <= cert.threshold) continue;
      cert.iteration = it;
      cert.negated = value > 0;
      if (cert.negated) f = f.affine(-1.0, 0.0);
      cert.raw_density = density(sys.solutions(), f, opts.density);
      if (finalize(cert, sys, f, opts.density)) {
        out.certificate = std::move(cert);
        break;
      }
    }
    out.summary = summarize(history, 0.0);
    out.note = "odd number of variables: negation fast path";
    return out;
  }

  const DualPairTable pairs(sys.matrix(), space);
  WitnessCertificate cert = base_certificate(sys, n, WitnessMethod::full_phase, seed, terms, opts.sign_tolerance);
  cert.scale = static_cast<double>(space.size());
  const auto found = batched_search(
      opts.max_iters, opts.density.workers,
      [&](std::uint64_t it) {
        const PQSplit pq = pq_split(pairs, full_phase_spectrum(space, seed, it));
        return (pq.P + pq.Q).real();
      },
      [&](std::uint64_t it, double value) {
        if (value >= -cert.threshold) return false;
        cert.iteration = it;
        cert.raw_density = value;
        const SampledFunction s = full_phase_sampler(sys, n, seed, it);
        const GroupFunction f = s.function.affine(1.0 / cert.scale, 0.0);
        if (finalize(cert, sys, f, opts.density)) return true;
        out.note += "iteration " + std::to_string(it) + " rejected by the oracle cross-check; ";
        return false;
      },
      history);
  out.summary = summarize(history, cert.threshold);
  if (found) {
    out.certificate = std::move(cert);
  } else {
    out.note += "no negative sample; try a larger n";
  }
  return out;
}

WitnessVerification verify_witness(const WitnessCertificate& cert, const DensityOptions& opts) {
  WitnessVerification v;
  auto fail = [&](std::string msg) {
    v.ok = false;
    v.failures.push_back(std::move(msg));
  };
  const LinearSystem sys = cert.system();
  const FpSpace space(cert.p, cert.n);
  std::vector<double> regenerated;
  switch (cert.method) {
    case WitnessMethod::restricted_support: {
      const auto support = restricted_support(sys, cert.r0, cert.s0);
      regenerated = restricted_support_sampler(support, cert.seed, cert.iteration).function.real_values();
      break;
    }
    case WitnessMethod::full_phase: {
      const auto s = full_phase_sampler(sys, cert.n, cert.seed, cert.iteration);
      regenerated = s.function.affine(1.0 / static_cast<double>(space.size()), 0.0).real_values();
      break;
    }
    case WitnessMethod::odd_negation: {
      GroupFunction f = odd_candidate(space, cert.seed, cert.iteration);
      if (cert.negated) f = f.affine(-1.0, 0.0);
      regenerated = f.real_values();
      break;
    }
  }
  if (regenerated != cert.values) fail("stored function differs from the regenerated one");
  const GroupFunction f = GroupFunction::from_real(space, cert.values);
  const double mean = f.mean().real();
  if (std::abs(mean) >= 1e-10) fail("mean " + std::to_string(mean) + " is not zero");
  if (f.sup_norm() > 1.0 + kRealTolerance) fail("sup norm exceeds 1");
  const double td = density_direct(sys.solutions(), f, opts).value.real();
  const double tf = density_fourier(sys.solutions(), f, opts).value.real();
  const double raw_scale = std::pow(cert.scale, static_cast<double>(sys.variables()));
  const double threshold = 1e-9 * static_cast<double>(fourier_term_count(sys.solutions(), space));
  if (!(td * raw_scale < -threshold)) fail("direct density is not below the threshold");
  if (!(tf * raw_scale < -threshold)) fail("Fourier density is not below the threshold");
  if (std::abs(td - tf) >= 1e-8) fail("density routes disagree");
  if (td != cert.density_direct) fail("stored direct density does not match");
  return v;
}

MartingaleIndex::MartingaleIndex(const FpMatrix& equations, const DualPairTable& pairs) {
  if (!minors_generic(equations)) throw UsageError("martingale decomposition needs generic minors");
  const FpSpace& space = pairs.space();
  const Index N = space.size();
  std::vector<std::size_t> pos_of(static_cast<std::size_t>(N), kNoOwner);
  for (Index rank = (N - 1) / 2 + 1; rank < N; ++rank) {
    const Index h = space.from_order_rank(rank);
    pos_of[h] = positives_.size();
    positives_.push_back(h);
  }
  class_sizes_.assign(positives_.size(), 0);
  owner_.assign(static_cast<std::size_t>(pairs.pairs()), kNoOwner);
  for (Index pair = 0; pair < pairs.pairs(); ++pair) {
    if (!pairs.independent(pair)) continue;
    Index best = 0;
    Index best_rank = 0;
    bool best_in_m = false;
    for (std::uint32_t m : pairs.frequencies(pair)) {
      const Index a = space.abs(m);
      const Index rank = space.order_rank(a);
      if (rank > best_rank) {
        best_rank = rank;
        best = a;
        best_in_m = a == m;
      }
    }
    if (!best_in_m) continue;
    owner_[static_cast<std::size_t>(pair)] = pos_of[best];
    ++class_sizes_[pos_of[best]];
    ++owned_;
  }
}

std::vector<double> martingale_decomposition(const DualPairTable& pairs, const MartingaleIndex& index,
                                             const FourierTable& fhat) {
  std::vector<double> x(index.positives().size(), 0.0);
  const auto c = fhat.coefficients();
  for (Index pair = 0; pair < pairs.pairs(); ++pair) {
    const std::size_t pos = index.owner(pair);
    if (pos == MartingaleIndex::kNoOwner) continue;
    Complex prod = 1.0;
    for (std::uint32_t m : pairs.frequencies(pair)) prod *= c[m];
    x[pos] += 2.0 * prod.real();
  }
  return x;
}

double ks_distance_to_normal(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-values[i] / std::sqrt(2.0));
    d = std::max({d, static_cast<double>(i + 1) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  return d;
}

namespace {

struct SignatureHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (std::uint64_t x : v) h = (h ^ x) * 0x100000001b3ull;
    return h;
  }
};

// Sorted (|h| << 1 | [h < 0]) over the multiset.
std::vector<std::uint64_t> signature(const FpSpace& space, std::span<const std::uint32_t> m, bool flip) {
  std::vector<std::uint64_t> sig;
  sig.reserve(m.size());
  for (std::uint32_t h : m) {
    const bool neg = (space.sign(h) < 0) != flip;
    sig.push_back((space.abs(h) << 1) | (neg ? 1u : 0u));
  }
  std::sort(sig.begin(), sig.end());
  return sig;
}

}  // namespace

CltReport clt_diagnostic(const LinearSystem& sys, int n, std::uint64_t samples, std::uint64_t seed, unsigned workers) {
  require_generic_pair_system(sys);
  if (samples == 0) throw UsageError("the CLT diagnostic needs at least one sample");
  const FpSpace space(sys.prime(), n);
  const DualPairTable pairs(sys.matrix(), space);
  const MartingaleIndex index(sys.matrix(), pairs);

  CltReport rep;
  rep.samples = samples;
  rep.seed = seed;
  rep.independent_pairs = pairs.independent_count();
  rep.epsilons = {0.5, 0.1, 0.02};

  // E[prod over M(A) u M(B)] is 1 exactly when the union cancels, which for independent pairs
  // means the signed signature of B is the negation of that of A.
  std::unordered_map<std::vector<std::uint64_t>, std::uint64_t, SignatureHash> counts;
  for (Index pair = 0; pair < pairs.pairs(); ++pair) {
    if (pairs.independent(pair)) ++counts[signature(space, pairs.frequencies(pair), false)];
  }
  std::uint64_t cancelling = 0;
  std::uint64_t diagonal = 0;
  std::vector<Index> both;
  for (Index pair = 0; pair < pairs.pairs(); ++pair) {
    if (!pairs.independent(pair)) continue;
    const auto it = counts.find(signature(space, pairs.frequencies(pair), true));
    if (it != counts.end()) cancelling += it->second;
    if (index.owner(pair) == MartingaleIndex::kNoOwner) continue;
    const auto m = pairs.frequencies(pair);
    both.assign(m.begin(), m.end());
    both.insert(both.end(), m.begin(), m.end());
    diagonal += cancelling_partition(space, both) ? 2 : 0;
    for (std::size_t i = m.size(); i < both.size(); ++i) both[i] = space.negate(both[i]);
    diagonal += cancelling_partition(space, both) ? 2 : 0;
  }
  rep.exact_variance = static_cast<double>(cancelling);
  rep.diagonal_variance = static_cast<double>(diagonal);
  const double sd = std::sqrt(rep.exact_variance);

  struct Sample {
    double p = 0.0;
    double decomposition_error = 0.0;
    double s2 = 0.0;
    double s4 = 0.0;
    std::vector<double> tails;
  };
  std::vector<Sample> out(static_cast<std::size_t>(samples));
  parallel_for(out.size(), workers, [&](std::size_t i) {
    const FourierTable fhat = phase_spectrum(space, seed, StreamTag::clt, i);
    const auto x = martingale_decomposition(pairs, index, fhat);
    const PQSplit pq = pq_split(pairs, fhat);
    Sample& s = out[i];
    s.p = pairwise_sum<double>(x);
    s.decomposition_error = std::abs(s.p - pq.P.real());
    s.tails.assign(rep.epsilons.size(), 0.0);
    for (double xh : x) {
      const double z = xh / sd;
      const double z2 = z * z;
      s.s2 += z2;
      s.s4 += z2 * z2;
      for (std::size_t e = 0; e < rep.epsilons.size(); ++e) {
        if (std::abs(z) > rep.epsilons[e]) s.tails[e] += z2;
      }
    }
  });

  const double count = static_cast<double>(samples);
  std::vector<double> ps, zs, cross, fourth;
  rep.lindeberg.assign(rep.epsilons.size(), 0.0);
  for (const Sample& s : out) {
    ps.push_back(s.p);
    zs.push_back(s.p / sd);
    cross.push_back(s.s2 * s.s2 - s.s4);
    fourth.push_back(s.s4);
    rep.decomposition_error = std::max(rep.decomposition_error, s.decomposition_error);
    for (std::size_t e = 0; e < rep.epsilons.size(); ++e) rep.lindeberg[e] += s.tails[e] / count;
  }
  rep.mean_p = pairwise_sum<double>(ps) / count;
  double ss = 0.0;
  for (double v : ps) ss += (v - rep.mean_p) * (v - rep.mean_p);
  rep.variance_p = samples > 1 ? ss / (count - 1.0) : 0.0;
  rep.mean_standardized = pairwise_sum<double>(zs) / count;
  rep.ks_distance = ks_distance_to_normal(zs);
  rep.fourth_moment_sum = pairwise_sum<double>(fourth) / count;
  rep.cross_moment_sum = pairwise_sum<double>(cross) / count;
  return rep;
}

}  // namespace linpat
