#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "linpat/amplify.hpp"
#include "linpat/density.hpp"
#include "linpat/errors.hpp"
#include "linpat/witness.hpp"
#include "oracles.hpp"

using namespace linpat;

namespace {

/// Tolerances and budgets, one per criterion.
constexpr double kDensityAgreement = 1e-8;    // AC1
constexpr double kTensorAgreement = 1e-9;     // AC3
constexpr double kMeanZero = 1e-10;           // AC4, AC6
constexpr double kSignTolerance = 1e-9;       // AC4, AC6: T < -kSignTolerance * terms
constexpr double kMartingale = 1e-8;          // AC7
constexpr double kFourierSplit = 1e-9;        // AC7
constexpr double kCltMean = 0.1;              // AC8
constexpr double kCltKs = 0.1;                // AC8
constexpr double kCltCross = 1.5;             // AC8
constexpr double kExpansion = 1e-8;           // AC10
constexpr std::uint64_t kWitnessIters = 10'000;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

LinearSystem four_ap() { return LinearSystem::from_rows(5, {{1, -2, 1, 0}, {0, 1, -2, 1}}); }
LinearSystem generic_f3() { return LinearSystem::from_rows(3, {{1, 0, 1, 1}, {0, 1, 1, 2}}); }
LinearSystem three_by_six() {
  return LinearSystem::from_rows(5, {{1, -2, 1, 0, 0, 0}, {0, 1, -2, 1, 0, 0}, {1, 0, 0, 1, 1, 2}});
}

std::vector<LinearSystem> generic_without_tuple(int p, std::size_t count) {
  std::vector<LinearSystem> out;
  for (int a = 1; a < p && out.size() < count; ++a) {
    for (int b = 1; b < p && out.size() < count; ++b) {
      for (int c = 1; c < p && out.size() < count; ++c) {
        for (int d = 1; d < p && out.size() < count; ++d) {
          const oracle::Rows rows{{1, 0, a, b}, {0, 1, c, d}};
          if (oracle::generic_minors(rows, p) && !oracle::additive_tuple(rows, p, 4)) {
            out.push_back(LinearSystem::from_rows(p, rows));
          }
        }
      }
    }
  }
  return out;
}

GroupFunction random_function(std::mt19937_64& g, const FpSpace& s) {
  return GroupFunction(s, oracle::random_complex(g, static_cast<std::size_t>(s.size())));
}

Outcome ac1() {
  auto g = oracle::stream(101);
  double worst = 0.0;
  int cases = 0;
  for (int p : {3, 5, 7}) {
    for (int n : {1, 2}) {
      for (std::size_t m : {1u, 2u, 3u}) {
        for (int rep = 0; rep < 12; ++rep) {
          const std::size_t t = m + 1 + static_cast<std::size_t>(oracle::below(g, p == 7 && n == 2 ? 2 : 3));
          const LinearSystem sys = LinearSystem::from_rows(p, oracle::random_full_rank(g, p, m, t));
          const GroupFunction f = random_function(g, FpSpace(p, n));
          DensityOptions opts;
          opts.budget = 100'000'000;
          const Complex a = density_direct(sys.solutions(), f, opts).value;
          const Complex b = density_fourier(sys.solutions(), f, opts).value;
          worst = std::max(worst, std::abs(a - b));
          ++cases;
        }
      }
    }
  }
  return {cases >= 200 && worst < kDensityAgreement,
          std::to_string(cases) + " cases, max |direct - fourier| = " + num(worst)};
}

Outcome ac2() {
  std::size_t checked = 0, mismatches = 0, generic = 0;
  auto check = [&](const oracle::Rows& rows, int p) {
    const LinearSystem sys = LinearSystem::from_rows(p, rows);
    const bool g = minors_generic(sys);
    const bool s = shortest_equation_length(sys) + 1 == sys.variables();
    const bool oracle_s = oracle::shortest_equation(rows, p, rows[0].size()) + 1 == rows[0].size();
    mismatches += (g != s || s != oracle_s) ? 1 : 0;
    generic += g ? 1 : 0;
    ++checked;
  };
  for (const oracle::Vec& v : oracle::all_vectors(3, 8)) {
    oracle::Rows rows{{v[0], v[1], v[2], v[3]}, {v[4], v[5], v[6], v[7]}};
    if (FpMatrix::from_rows(3, rows, 4).rank() == 2) check(rows, 3);
  }
  auto g = oracle::stream(102);
  for (int i = 0; i < 500; ++i) {
    const int p = i % 2 == 0 ? 5 : 7;
    const std::size_t k = 4 + static_cast<std::size_t>(i % 3);
    check(oracle::random_full_rank(g, p, 2, k), p);
  }
  return {mismatches == 0, std::to_string(checked) + " matrices (" + std::to_string(generic) + " generic), " +
                               std::to_string(mismatches) + " mismatches"};
}

Outcome ac3() {
  auto g = oracle::stream(103);
  double worst_tensor = 0.0, worst_zero = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int p = i % 3 == 0 ? 3 : 5;
    const std::size_t m = 1 + static_cast<std::size_t>(oracle::below(g, 2));
    const LinearSystem sys = LinearSystem::from_rows(p, oracle::random_full_rank(g, p, m, m + 2));
    const GroupFunction f1 = random_function(g, FpSpace(p, 1));
    const GroupFunction f2 = random_function(g, FpSpace(p, 1 + oracle::below(g, 2)));
    const Complex joint = density_direct(sys.solutions(), tensor(f1, f2)).value;
    const Complex split = density_direct(sys.solutions(), f1).value * density_direct(sys.solutions(), f2).value;
    worst_tensor = std::max(worst_tensor, std::abs(joint - split));
  }
  for (int i = 0; i < 100; ++i) {
    const int p = i % 3 == 0 ? 3 : 5;
    const std::size_t m = 1 + static_cast<std::size_t>(oracle::below(g, 2));
    const LinearSystem sys = LinearSystem::from_rows(p, oracle::random_full_rank(g, p, m, m + 2));
    const GroupFunction f = random_function(g, FpSpace(p, 1));
    const Complex with = density_direct(sys.solutions(), tensor(f, GroupFunction::zero_indicator(FpSpace(p, 1)))).value;
    const double scale = std::pow(static_cast<double>(p), -static_cast<double>(sys.degrees_of_freedom()));
    worst_zero = std::max(worst_zero, std::abs(with - scale * density_direct(sys.solutions(), f).value));
  }
  return {worst_tensor < kTensorAgreement && worst_zero < kTensorAgreement,
          "max tensor error " + num(worst_tensor) + ", max zero-indicator error " + num(worst_zero)};
}

Outcome ac4() {
  const auto systems = generic_without_tuple(7, 3);
  Outcome out{systems.size() >= 3, ""};
  SearchOptions opts;
  opts.max_iters = kWitnessIters;
  for (const auto& sys : systems) {
    const auto start = std::chrono::steady_clock::now();
    const WitnessSearch w = search_witness_restricted(sys, 1, opts);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = w.certificate.has_value() && secs < 60.0;
    if (w.certificate) {
      const WitnessCertificate& c = *w.certificate;
      ok = ok && std::abs(c.mean) < kMeanZero && c.raw_density < -kSignTolerance * static_cast<double>(c.term_count) &&
           c.density_direct < 0.0 && c.density_fourier < 0.0 && verify_witness(c).ok;
      out.detail += "iter " + std::to_string(c.iteration) + " T=" + num(c.density_direct) + "; ";
    }
    out.pass = out.pass && ok;
  }
  return out;
}

Outcome ac5() {
  std::size_t systems = 0, supported = 0, violations = 0;
  for (int p : {5, 7}) {
    for (const auto& sys : generic_without_tuple(p, 3)) {
      ++systems;
      const RestrictedSupport sup = restricted_support(sys);
      const FpSpace& s = sup.space;
      std::set<Index> allowed;
      for (Index h : sup.m0) {
        allowed.insert(h);
        allowed.insert(s.negate(h));
      }
      violations += cancelling_supported_pairs(sys, sup).size();
      for (Index r = 0; r < s.size(); ++r) {
        for (Index q = 0; q < s.size(); ++q) {
          const auto m = frequency_multiset(sys, s, r, q).entries;
          if (!std::all_of(m.begin(), m.end(), [&](Index h) { return allowed.count(h) > 0; })) continue;
          ++supported;
          std::vector<oracle::Vec> vs;
          for (Index h : m) vs.push_back(oracle::digits(h, p, 2));
          violations += oracle::cancelling(vs, p) ? 1 : 0;
        }
      }
    }
  }
  return {systems == 6 && violations == 0, std::to_string(systems) + " systems, " + std::to_string(supported) +
                                               " supported pairs, " + std::to_string(violations) + " cancelling"};
}

Outcome ac6() {
  SearchOptions opts;
  opts.max_iters = kWitnessIters;
  for (int n = 1; n <= 3; ++n) {
    const WitnessSearch w = search_witness_full(four_ap(), n, 1, opts);
    if (!w.certificate) continue;
    const WitnessCertificate& c = *w.certificate;
    const bool ok = std::abs(c.mean) < kMeanZero && c.sup_norm <= 1.0 && c.density_direct < 0.0 &&
                    c.density_fourier < 0.0 && verify_witness(c).ok;
    return {ok, "n = " + std::to_string(n) + ", iteration " + std::to_string(c.iteration) +
                    ", T(f) = " + num(c.density_direct)};
  }
  return {false, "no witness at n <= 3"};
}

Outcome ac7() {
  const auto sys = generic_f3();
  double worst_mart = 0.0, worst_split = 0.0;
  bool bound_ok = true;
  int spectra = 0;
  for (int n : {2, 3}) {
    const FpSpace s(3, n);
    const DualPairTable pairs(sys.matrix(), s);
    const MartingaleIndex index(sys.matrix(), pairs);
    for (std::uint64_t it = 0; it < 50; ++it) {
      const FourierTable fhat = full_phase_spectrum(s, 7, it);
      const PQSplit pq = pq_split(pairs, fhat);
      double sum = 0.0;
      for (double x : martingale_decomposition(pairs, index, fhat)) sum += x;
      worst_mart = std::max(worst_mart, std::abs(sum - pq.P.real()));
      worst_split = std::max(worst_split, std::abs(pq.P + pq.Q - density_fourier(sys.solutions(), fhat).value));
      bound_ok = bound_ok && std::abs(pq.Q) <= dependent_pair_bound(s) + 1e-9 &&
                 static_cast<double>(pq.dependent_pairs) == dependent_pair_bound(s);
      ++spectra;
    }
  }
  return {worst_mart < kMartingale && worst_split < kFourierSplit && bound_ok,
          std::to_string(spectra) + " spectra, max |sum X - Re P| = " + num(worst_mart) +
              ", max |P + Q - sum| = " + num(worst_split)};
}

Outcome ac8() {
  const CltReport r = clt_diagnostic(generic_f3(), 3, 2000, 1);
  const bool ok = std::abs(r.mean_standardized) < kCltMean && r.ks_distance < kCltKs && r.cross_moment_sum <= kCltCross &&
                  r.variance_p >= 0.0 && r.exact_variance >= r.diagonal_variance;
  return {ok, "mean " + num(r.mean_standardized) + ", KS " + num(r.ks_distance) +
                  ", cross-moment/Var^2 " + num(r.cross_moment_sum) + ", exact Var " +
                  num(r.exact_variance) + ", diagonal " + num(r.diagonal_variance)};
}

Outcome ac9() {
  const auto sys = generic_f3();
  const FpSpace s(3, 4);
  auto g = oracle::stream(109);
  auto pick = [&] {
    while (true) {
      const Index r = static_cast<Index>(oracle::below(g, 81));
      const Index q = static_cast<Index>(oracle::below(g, 81));
      if (linearly_independent(s, r, q)) return std::pair{r, q};
    }
  };
  std::size_t one = 0, many = 0, violations = 0;
  for (int i = 0; i < 10'000; ++i) {
    const auto [r, q] = pick();
    auto [r2, q2] = pick();
    if (i % 2 == 0) r2 = r;
    std::set<Index> a, b;
    for (Index h : frequency_multiset(sys.matrix(), s, r, q)) a.insert(s.abs(h));
    for (Index h : frequency_multiset(sys.matrix(), s, r2, q2)) b.insert(s.abs(h));
    std::size_t common = 0;
    for (Index h : a) common += b.count(h);
    if (common == 0) continue;
    const int dim = oracle::span_dimension(
        {oracle::digits(r, 3, 4), oracle::digits(q, 3, 4), oracle::digits(r2, 3, 4), oracle::digits(q2, 3, 4)}, 3);
    if (common == 1) {
      ++one;
      violations += dim <= 3 ? 0 : 1;
    } else {
      ++many;
      violations += dim == 2 ? 0 : 1;
    }
  }
  return {violations == 0, "10000 quadruples, " + std::to_string(one) + " with one common value, " +
                               std::to_string(many) + " with several, " + std::to_string(violations) + " violations"};
}

Outcome ac10() {
  SearchOptions opts;
  opts.max_iters = kWitnessIters;
  const LinearSystem odd = LinearSystem::from_rows(5, {{1, 1, 1}, {0, 1, 2}});
  const LinearSystem gen7 = LinearSystem::from_rows(7, {{1, 0, 1, 1}, {0, 1, 1, 2}});
  const std::vector<std::pair<LinearSystem, WitnessSearch>> cases{
      {odd, search_witness_full(odd, 1, 1, opts)},
      {four_ap(), search_witness_full(four_ap(), 2, 1, opts)},
      {gen7, search_witness_restricted(gen7, 1, opts)}};
  Outcome out;
  for (const auto& [sys, w] : cases) {
    if (!w.certificate) {
      out.pass = false;
      out.detail += "no witness; ";
      continue;
    }
    const GroupFunction f = w.certificate->function().affine(0.5, 0.0);
    const DefectReport d = commonness_defect(sys, f);
    double gap = std::abs(d.defect_direct - d.defect_expansion);
    const FpSpace& space = f.space();
    const auto rows = oracle::rows_of(sys.matrix());
    const double tuples = std::pow(static_cast<double>(space.size()), static_cast<double>(sys.variables()));
    if (tuples <= 1e6) {
      std::vector<Complex> plus(space.size()), minus(space.size());
      for (Index x = 0; x < space.size(); ++x) {
        plus[x] = 0.5 + f[x];
        minus[x] = 0.5 - f[x];
      }
      const double brute = (oracle::density(rows, sys.variables(), space.prime(), space.dim(), plus) +
                            oracle::density(rows, sys.variables(), space.prime(), space.dim(), minus))
                               .real() -
                           std::ldexp(1.0, 1 - static_cast<int>(sys.variables()));
      gap = std::max(gap, std::abs(brute - d.defect_expansion));
    }
    out.pass = out.pass && gap < kExpansion;
    out.detail += "defect " + num(d.defect_expansion) + " gap " + num(gap) + "; ";
  }
  return out;
}

Outcome ac11() {
  Outcome out;
  const std::vector<std::pair<LinearSystem, std::uint64_t>> systems{{four_ap(), 10'000'000}, {three_by_six(), 300'000'000}};
  for (const auto& [sys, budget] : systems) {
    const bool structure = shortest_equation_length(sys) == 3 && contains(sys, four_ap()).has_value();
    CertifyOptions opts;
    opts.direct_budget = budget;
    const UncommonnessCertificate c = certify_uncommon(sys, four_ap(), opts);
    const UncommonnessCertificate back = certificate_from_json(certificate_to_json(c));
    const bool verified = verify_certificate(back).ok;
    const bool negative = c.defect_upper.front() == '-';
    const bool direct = c.direct_checked && c.direct_defect < 0.0;
    out.pass = out.pass && structure && verified && negative && direct;
    out.detail += std::to_string(sys.equations()) + "x" + std::to_string(sys.variables()) + ": A=" +
                  std::to_string(c.A) + " B=" + std::to_string(c.B) + " bound " + num(c.defect_estimate) +
                  (direct ? " direct " + num(c.direct_defect) : std::string(" no direct check")) +
                  (verified ? " verified; " : " NOT verified; ");
  }
  return out;
}

}  // namespace

int main() {
  const std::vector<std::tuple<const char*, double, std::function<Outcome()>>> criteria{
      {"AC1", 60, ac1},  {"AC2", 60, ac2},  {"AC3", 60, ac3},   {"AC4", 180, ac4},
      {"AC5", 60, ac5},  {"AC6", 600, ac6}, {"AC7", 60, ac7},   {"AC8", 300, ac8},
      {"AC9", 60, ac9},  {"AC10", 60, ac10}, {"AC11", 600, ac11}};
  int failures = 0;
  for (const auto& [name, limit, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs < limit;
    failures += pass ? 0 : 1;
    std::printf("%s %s %s [%.2fs, limit %.0fs]\n", name, pass ? "PASS" : "FAIL", o.detail.c_str(), secs, limit);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
