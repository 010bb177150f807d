#include "linpat/amplify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "linpat/errors.hpp"
#include "linpat/random.hpp"

namespace linpat {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

Rational exact(double x) {
  if (!std::isfinite(x)) throw std::logic_error("non-finite value in an exact check");
  if (x == 0.0) return Rational(0);
  int e = 0;
  const double m = std::frexp(x, &e);
  const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  e -= 53;
  Rational r{BigInt(mant)};
  if (e > 0) {
    r *= Rational(BigInt(1) << e);
  } else if (e < 0) {
    r /= Rational(BigInt(1) << -e);
  }
  return r;
}

Rational power(const Rational& base, unsigned e) {
  Rational out(1);
  Rational b = base;
  while (e > 0) {
    if (e & 1u) out *= b;
    b *= b;
    e >>= 1u;
  }
  return out;
}

struct Interval {
  Rational lo;
  Rational hi;
};

Interval around(double value, double error) {
  const Rational v = exact(value);
  const Rational r = exact(error);
  return {v - r, v + r};
}

Interval multiply(const Interval& a, const Interval& b) {
  const Rational c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

Interval even_power(const Interval& a, unsigned e) {
  const Rational x = abs(a.lo);
  const Rational y = abs(a.hi);
  const Rational big = power(x > y ? x : y, e);
  if (a.lo <= 0 && a.hi >= 0) return {Rational(0), big};
  return {power(x < y ? x : y, e), big};
}

struct ExactCheck {
  Rational lead_upper;
  Rational tail_bound;
  Rational defect_upper;
  bool ok = false;
};

/// Common positive factor 2^(1-t) p^(-B (2k-2)) is applied only to defect_upper.
ExactCheck exact_check(const std::vector<ClassRecord>& classes, int p, std::size_t k, std::size_t t, unsigned A,
                       unsigned B) {
  ExactCheck out;
  Interval lead{Rational(0), Rational(0)};
  const std::size_t e_min = 2 * k - 2;
  for (const ClassRecord& c : classes) {
    if (c.free) continue;
    const Interval f2 =
        multiply(even_power(around(c.density_f0, c.error_f0), A), around(c.density_f1, c.error_f1));
    const Rational mult(static_cast<long long>(c.multiplicity));
    if (c.minimal) {
      lead.lo += mult * f2.lo;
      lead.hi += mult * f2.hi;
    } else {
      const Rational mag = abs(f2.lo) > abs(f2.hi) ? abs(f2.lo) : abs(f2.hi);
      const Rational damp = power(Rational(p), B * static_cast<unsigned>(c.exponent - e_min));
      out.tail_bound += mult * mag / damp;
    }
  }
  out.lead_upper = lead.hi;
  out.ok = lead.hi < 0 && out.tail_bound < -lead.hi;
  const Rational scale = Rational(1) / (power(Rational(2), static_cast<unsigned>(t - 1)) *
                                        power(Rational(p), B * static_cast<unsigned>(e_min)));
  out.defect_upper = scale * (lead.hi + out.tail_bound);
  return out;
}

std::string rational_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r) << '/' << denominator(r);
  return os.str();
}

std::vector<std::vector<std::int64_t>> signed_rows(const FpMatrix& m) {
  std::vector<std::vector<std::int64_t>> rows(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) rows[r].push_back(signed_residue(m(r, c), m.prime()));
  }
  return rows;
}

double log_sum_exp(std::span<const double> logs) {
  if (logs.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(logs.begin(), logs.end());
  if (std::isinf(top)) return top;
  double s = 0.0;
  for (double l : logs) s += std::exp(l - top);
  return top + std::log(s);
}

DensityValue real_direct(const SolutionSpace& sol, const std::vector<double>& values, int p, const DensityOptions& opts) {
  int dim = 0;
  for (std::size_t s = 1; s < values.size(); s *= static_cast<std::size_t>(p)) ++dim;
  const FpSpace space(p, dim);
  return density_direct(sol, GroupFunction::from_real(space, values), opts);
}

std::optional<double> direct_defect(const LinearSystem& sys, const UncommonnessCertificate& c, std::uint64_t budget,
                                    std::string& note) {
  const int n1 = c.witness.n;
  const std::uint64_t dim = static_cast<std::uint64_t>(c.n0) * c.A + static_cast<std::uint64_t>(n1) + c.B;
  const double log_terms = static_cast<double>(dim * sys.degrees_of_freedom()) * std::log(c.p);
  const double log_table = static_cast<double>(dim) * std::log(c.p);
  if (log_terms > std::log(static_cast<double>(budget)) + 1e-9 ||
      log_table > std::log(static_cast<double>(kMaxTableSize))) {
    note = "direct cross-check skipped: p^(" + std::to_string(dim) + " * " + std::to_string(sys.degrees_of_freedom()) +
           ") terms exceed the budget";
    return std::nullopt;
  }
  const FpSpace s0(c.p, c.n0);
  GroupFunction f = tensor_power(GroupFunction::from_real(s0, c.f0), c.A);
  f = tensor(f, GroupFunction::from_real(FpSpace(c.p, n1), c.f1));
  if (c.B > 0) f = tensor(f, GroupFunction::zero_indicator(FpSpace(c.p, static_cast<int>(c.B))));
  DensityOptions opts;
  opts.budget = budget;
  const double plus = density_direct(sys.solutions(), f.affine(0.5, 0.5), opts).value.real();
  const double minus = density_direct(sys.solutions(), f.affine(-0.5, 0.5), opts).value.real();
  note = "direct defect on F_" + std::to_string(c.p) + "^" + std::to_string(dim);
  return plus + minus - std::ldexp(1.0, 1 - static_cast<int>(sys.variables()));
}

}  // namespace

std::vector<RestrictionClass> restriction_classes(const LinearSystem& sys, std::size_t k) {
  const std::size_t t = sys.variables();
  if (t > 24) throw CapacityError("restriction classes enumerate 2^t subsets; t = " + std::to_string(t) + " is too large");
  const std::size_t s = shortest_equation_length(sys);
  if (k < 2 || s + 1 != k) {
    throw UsageError("s(system) = " + std::to_string(s) + ", expected k - 1 = " + std::to_string(k - 1));
  }
  std::vector<std::vector<std::size_t>> subsets;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << t); ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (size % 2 != 0 || size < k) continue;
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < t; ++i) {
      if (mask >> i & 1u) cols.push_back(i);
    }
    subsets.push_back(std::move(cols));
  }
  std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });

  std::vector<RestrictionClass> classes;
  for (const auto& cols : subsets) {
    SubsystemView view = restrict(sys, cols);
    const std::size_t deg = view.degrees_of_freedom();
    bool placed = false;
    for (RestrictionClass& c : classes) {
      if (c.size != cols.size() || c.degrees_of_freedom != deg) continue;
      if (!operators_equal(c.solutions, view.solutions).permuted) continue;
      c.members.push_back(cols);
      placed = true;
      break;
    }
    if (placed) continue;
    RestrictionClass c{cols, view.solutions, {cols}, cols.size(), deg, cols.size() + deg, view.solutions.is_free(), false};
    classes.push_back(std::move(c));
  }

  const std::size_t e_min = 2 * k - 2;
  for (RestrictionClass& c : classes) {
    if (c.degrees_of_freedom + 2 < k) {
      throw std::logic_error("restriction to " + std::to_string(c.size) + " columns has deg " +
                             std::to_string(c.degrees_of_freedom) + " < k - 2");
    }
    c.minimal = c.size == k && c.degrees_of_freedom == k - 2;
    if (c.exponent < e_min || (c.exponent == e_min) != c.minimal) {
      throw std::logic_error("exponent minimality fails for a class of size " + std::to_string(c.size));
    }
  }
  return classes;
}

std::vector<double> quantize_zero_mean(std::span<const double> values, double bound) {
  const auto limit = static_cast<std::int64_t>(std::floor(bound / kQuantum));
  std::vector<std::int64_t> q(values.size());
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    q[i] = std::clamp<std::int64_t>(std::llround(values[i] / kQuantum), -limit, limit);
    sum += q[i];
  }
  // Move the entries of the offending sign toward zero, largest first, until the sum vanishes.
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const int dir = sum > 0 ? 1 : -1;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dir * q[a] > dir * q[b]; });
  while (sum != 0) {
    const auto eligible = std::count_if(q.begin(), q.end(), [&](std::int64_t x) { return dir * x > 0; });
    if (eligible == 0) throw std::logic_error("cannot balance a quantized table");
    const std::int64_t share = std::max<std::int64_t>(1, dir * sum / eligible);
    for (std::size_t i : order) {
      if (sum == 0) break;
      if (dir * q[i] <= 0) continue;
      const std::int64_t step = std::min({share, dir * q[i], dir * sum});
      q[i] -= dir * step;
      sum -= dir * step;
    }
  }
  std::vector<double> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = static_cast<double>(q[i]) * kQuantum;
  return out;
}

std::vector<double> separation_candidate(int p, int n0, std::uint64_t seed, std::uint64_t iteration) {
  const FpSpace space(p, n0);
  auto gen = make_stream(seed, StreamTag::separation, (static_cast<std::uint64_t>(n0) << 32) | iteration);
  std::vector<double> v(space.table_size());
  for (double& x : v) x = 2.0 * unit_uniform(gen) - 1.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double sup = 0.0;
  for (double& x : v) {
    x -= mean;
    sup = std::max(sup, std::abs(x));
  }
  if (sup > 1.0) {
    for (double& x : v) x /= sup;
  }
  return quantize_zero_mean(v, 1.0);
}

Separation separate(std::span<const SolutionSpace> classes, int p, std::uint64_t seed, const SeparationOptions& opts) {
  if (classes.empty()) throw UsageError("separation needs at least one class");
  for (int n0 = 1; n0 <= opts.max_dim; ++n0) {
    const FpSpace space(p, n0);
    for (std::uint64_t it = 0; it < opts.max_iters; ++it) {
      Separation sep;
      sep.n0 = n0;
      sep.iteration = it;
      sep.f0 = separation_candidate(p, n0, seed, it);
      const GroupFunction f = GroupFunction::from_real(space, sep.f0);
      double top = -1.0;
      double second = 0.0;
      for (std::size_t j = 0; j < classes.size(); ++j) {
        const double d = density_direct(classes[j], f, opts.density).value.real();
        sep.densities.push_back(d);
        const double a = std::abs(d);
        if (a > top) {
          second = std::max(second, top);
          top = a;
          sep.dominant = j;
        } else {
          second = std::max(second, a);
        }
      }
      if (top <= 1e-12) continue;
      sep.relative_margin = (top - second) / top;
      if (sep.relative_margin >= opts.margin) return sep;
    }
  }
  throw SearchExhausted("no separating function found up to n0 = " + std::to_string(opts.max_dim) +
                        "; increase the dimension or the iteration budget");
}

unsigned choose_A(std::span<const double> t0, std::span<const double> t1, std::span<const std::size_t> mult,
                  std::size_t dominant, unsigned cap) {
  if (t0.size() != t1.size() || t0.size() != mult.size() || dominant >= t0.size()) {
    throw UsageError("choose_A needs one density pair and multiplicity per class");
  }
  if (t0[dominant] == 0.0 || t1[dominant] == 0.0) throw UsageError("the dominant class has zero density");
  for (unsigned A = 2; A <= cap; A += 2) {
    const double lhs = std::log(static_cast<double>(mult[dominant])) + A * std::log(std::abs(t0[dominant])) +
                       std::log(std::abs(t1[dominant]));
    std::vector<double> others;
    for (std::size_t j = 0; j < t0.size(); ++j) {
      if (j == dominant || t0[j] == 0.0 || t1[j] == 0.0) continue;
      others.push_back(std::log(static_cast<double>(mult[j])) + A * std::log(std::abs(t0[j])) + std::log(std::abs(t1[j])));
    }
    if (lhs > log_sum_exp(others)) return A;
  }
  throw SearchExhausted("no even A <= " + std::to_string(cap) + " makes the dominant class outweigh the others");
}

unsigned choose_B(int p, double log_lead, std::span<const TailTerm> tail, unsigned cap) {
  const double lp = std::log(static_cast<double>(p));
  for (unsigned B = 0; B <= cap; ++B) {
    std::vector<double> logs;
    for (const TailTerm& term : tail) logs.push_back(term.log_magnitude - B * static_cast<double>(term.gap) * lp);
    if (log_sum_exp(logs) <= log_lead - std::log(2.0)) return B;
  }
  throw SearchExhausted("no B <= " + std::to_string(cap) + " suppresses the tail");
}

std::string UncommonnessCertificate::inequality() const {
  auto approx = [](const std::string& r) {
    if (r.empty()) return std::string("?");
    std::ostringstream os;
    os << std::setprecision(6) << Rational(r).convert_to<double>();
    return os.str();
  };
  std::ostringstream os;
  os << "defect = 2^(1-" << (system_rows.empty() ? 0 : system_rows.front().size()) << ") * " << p << "^(-" << B << "*"
     << (k >= 1 ? 2 * k - 2 : 0) << ") * (lead + tail) with lead <= " << approx(lead_upper)
     << " and |tail| <= " << approx(tail_bound) << ", so defect <= " << approx(defect_upper) << " < 0";
  return os.str();
}

LinearSystem find_generic_subsystem(const LinearSystem& sys) {
  const std::size_t k = shortest_equation_length(sys) + 1;
  if (k % 2 != 0) throw UsageError("s(system) + 1 = " + std::to_string(k) + " is odd; no even generic subsystem applies");
  for (const RestrictionClass& c : restriction_classes(sys, k)) {
    if (c.minimal) return LinearSystem(c.solutions.equations());
  }
  throw UsageError("the system contains no generic 2 x " + std::to_string(k) + " subsystem");
}

UncommonnessCertificate certify_uncommon(const LinearSystem& sys, const LinearSystem& sub, const CertifyOptions& opts) {
  if (sys.prime() != sub.prime()) throw UsageError("systems are over different primes");
  const std::size_t k = sub.variables();
  if (sub.equations() != 2 || k < 4 || k % 2 != 0) {
    throw UsageError("the subsystem must be 2 x k with k even and at least 4");
  }
  const std::size_t s_sub = shortest_equation_length(sub);
  if (s_sub != k - 1) throw UsageError("subsystem has s = " + std::to_string(s_sub) + ", expected " + std::to_string(k - 1));
  const std::size_t s_big = shortest_equation_length(sys);
  if (s_big != k - 1) throw UsageError("system has s = " + std::to_string(s_big) + ", expected " + std::to_string(k - 1));
  const auto embedding = contains(sys, sub);
  if (!embedding) throw UsageError("the system does not contain the subsystem");

  const int p = sys.prime();
  UncommonnessCertificate cert;
  cert.p = p;
  cert.k = k;
  cert.seed = opts.seed;
  cert.system_rows = signed_rows(sys.matrix());
  cert.subsystem_rows = signed_rows(sub.matrix());
  cert.embedding = *embedding;

  const auto classes = restriction_classes(sys, k);
  std::vector<std::size_t> minimal;
  std::vector<SolutionSpace> minimal_spaces;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (!classes[i].minimal) continue;
    minimal.push_back(i);
    minimal_spaces.push_back(classes[i].solutions);
  }
  if (minimal.empty()) throw std::logic_error("a system containing a generic subsystem has no minimal class");

  const Separation sep = separate(minimal_spaces, p, opts.seed, opts.separation);
  cert.n0 = sep.n0;
  cert.separation_iteration = sep.iteration;
  cert.f0 = sep.f0;
  cert.dominant = minimal[sep.dominant];

  const LinearSystem hat(classes[cert.dominant].solutions.equations());
  WitnessSearch search;
  if (!contains_additive_tuple(hat)) {
    search = search_witness_restricted(hat, opts.seed, opts.witness);
  } else {
    for (int n = 2; n <= 3 && !search.certificate; ++n) search = search_witness_full(hat, n, opts.seed, opts.witness);
  }
  if (!search.certificate) throw SearchExhausted("no negative witness for the dominant class: " + search.note);
  cert.witness = *search.certificate;
  cert.f1 = quantize_zero_mean(cert.witness.values, 1.0);

  const DensityOptions& dopts = opts.separation.density;
  for (const RestrictionClass& c : classes) {
    ClassRecord r;
    r.columns = c.columns;
    r.equations = signed_rows(c.solutions.equations());
    r.multiplicity = c.multiplicity();
    r.size = c.size;
    r.degrees_of_freedom = c.degrees_of_freedom;
    r.exponent = c.exponent;
    r.free = c.free;
    r.minimal = c.minimal;
    if (!c.free) {
      const DensityValue d0 = real_direct(c.solutions, cert.f0, p, dopts);
      const DensityValue d1 = real_direct(c.solutions, cert.f1, p, dopts);
      r.density_f0 = d0.value.real();
      r.error_f0 = d0.error_bound;
      r.density_f1 = d1.value.real();
      r.error_f1 = d1.error_bound;
    }
    cert.classes.push_back(std::move(r));
  }
  const ClassRecord& dom = cert.classes[cert.dominant];
  if (!(dom.density_f1 + dom.error_f1 < 0.0)) throw SearchExhausted("the quantized witness lost its negative density");

  std::vector<double> t0, t1;
  std::vector<std::size_t> mult;
  std::size_t dom_pos = 0;
  for (std::size_t i : minimal) {
    if (i == cert.dominant) dom_pos = t0.size();
    t0.push_back(cert.classes[i].density_f0);
    t1.push_back(cert.classes[i].density_f1);
    mult.push_back(cert.classes[i].multiplicity);
  }
  unsigned A = choose_A(t0, t1, mult, dom_pos, opts.max_A);
  while (!(exact_check(cert.classes, p, k, sys.variables(), A, 0).lead_upper < 0)) {
    A += 2;
    if (A > opts.max_A) throw SearchExhausted("the leading total is not certifiably negative for any A <= cap");
  }

  // Leading total with |t0_dominant|^A factored out.
  double lead_scaled = 0.0;
  for (std::size_t j = 0; j < t0.size(); ++j) {
    lead_scaled += static_cast<double>(mult[j]) * std::pow(t0[j] / t0[dom_pos], static_cast<double>(A)) * t1[j];
  }
  const double log_unit = A * std::log(std::abs(t0[dom_pos]));
  const double log_lead = log_unit + std::log(std::abs(lead_scaled));
  std::vector<TailTerm> tail;
  for (const ClassRecord& c : cert.classes) {
    if (c.free || c.minimal || c.density_f0 == 0.0 || c.density_f1 == 0.0) continue;
    tail.push_back({std::log(static_cast<double>(c.multiplicity)) + A * std::log(std::abs(c.density_f0)) +
                        std::log(std::abs(c.density_f1)),
                    c.exponent - (2 * k - 2)});
  }
  unsigned B = choose_B(p, log_lead, tail, opts.max_B);
  ExactCheck check = exact_check(cert.classes, p, k, sys.variables(), A, B);
  while (!check.ok) {
    if (++B > opts.max_B) throw SearchExhausted("the tail cannot be certified below the leading total");
    check = exact_check(cert.classes, p, k, sys.variables(), A, B);
  }
  cert.A = A;
  cert.B = B;
  cert.lead_upper = rational_string(check.lead_upper);
  cert.tail_bound = rational_string(check.tail_bound);
  cert.defect_upper = rational_string(check.defect_upper);

  double signed_sum = lead_scaled;
  for (const ClassRecord& c : cert.classes) {
    if (c.free || c.minimal) continue;
    signed_sum += static_cast<double>(c.multiplicity) * std::pow(c.density_f0 / t0[dom_pos], static_cast<double>(A)) *
                  c.density_f1 * std::pow(static_cast<double>(p), -static_cast<double>(B * (c.exponent - (2 * k - 2))));
  }
  cert.defect_estimate = std::ldexp(signed_sum, 1 - static_cast<int>(sys.variables())) *
                         std::exp(log_unit - static_cast<double>(B * (2 * k - 2)) * std::log(static_cast<double>(p)));

  const auto direct = direct_defect(sys, cert, opts.direct_budget, cert.direct_note);
  if (direct) {
    cert.direct_checked = true;
    cert.direct_defect = *direct;
  }
  return cert;
}

CertificateVerification verify_certificate(const UncommonnessCertificate& cert, const DensityOptions& opts) {
  CertificateVerification v;
  auto fail = [&](std::string msg) {
    v.ok = false;
    v.failures.push_back(std::move(msg));
  };
  const LinearSystem sys = cert.system();
  const LinearSystem sub = cert.subsystem();
  const std::size_t k = cert.k;
  if (sub.equations() != 2 || sub.variables() != k || k % 2 != 0) fail("subsystem is not 2 x k with k even");
  if (shortest_equation_length(sub) + 1 != k) fail("subsystem is not generic");
  if (shortest_equation_length(sys) + 1 != k) fail("s(system) differs from k - 1");
  if (cert.embedding.size() != k || !sub.solutions().contains(sys.solutions().project(cert.embedding).basis())) {
    fail("the stored embedding does not map the system into the subsystem");
  }

  const auto classes = restriction_classes(sys, k);
  if (classes.size() != cert.classes.size()) {
    fail("class count differs");
    return v;
  }
  if (cert.dominant >= classes.size() || !classes[cert.dominant].minimal) fail("dominant class is not minimal");

  if (separation_candidate(cert.p, cert.n0, cert.seed, cert.separation_iteration) != cert.f0) {
    fail("f0 does not regenerate from its seed");
  }
  std::int64_t sum0 = 0;
  for (double x : cert.f0) {
    const double q = x / kQuantum;
    if (q != std::round(q) || std::abs(x) > 1.0) fail("f0 leaves the dyadic grid or the unit ball");
    sum0 += static_cast<std::int64_t>(q);
  }
  if (sum0 != 0) fail("f0 does not have mean exactly zero");

  const WitnessVerification wv = verify_witness(cert.witness, opts);
  for (const auto& f : wv.failures) fail("witness: " + f);
  if (cert.dominant < classes.size() &&
      LinearSystem::from_rows(cert.p, cert.witness.system_rows).solutions() != classes[cert.dominant].solutions) {
    fail("witness system is not the dominant class");
  }
  if (quantize_zero_mean(cert.witness.values, 1.0) != cert.f1) fail("f1 is not the quantized witness");

  for (std::size_t i = 0; i < classes.size(); ++i) {
    const RestrictionClass& c = classes[i];
    const ClassRecord& r = cert.classes[i];
    if (r.columns != c.columns || r.multiplicity != c.multiplicity() || r.size != c.size ||
        r.degrees_of_freedom != c.degrees_of_freedom || r.exponent != c.exponent || r.free != c.free ||
        r.minimal != c.minimal || r.equations != signed_rows(c.solutions.equations())) {
      fail("class " + std::to_string(i) + " differs from the recomputed restriction");
      continue;
    }
    if (c.free) continue;
    const DensityValue d0 = real_direct(c.solutions, cert.f0, cert.p, opts);
    const DensityValue d1 = real_direct(c.solutions, cert.f1, cert.p, opts);
    if (d0.value.real() != r.density_f0 || d0.error_bound != r.error_f0 || d1.value.real() != r.density_f1 ||
        d1.error_bound != r.error_f1) {
      fail("class " + std::to_string(i) + " densities do not reproduce");
    }
  }

  if (cert.A == 0 || cert.A % 2 != 0) fail("A must be a positive even integer");
  const ExactCheck check = exact_check(cert.classes, cert.p, k, sys.variables(), cert.A, cert.B);
  if (!check.ok) fail("the exact interval inequality fails");
  if (rational_string(check.lead_upper) != cert.lead_upper || rational_string(check.tail_bound) != cert.tail_bound ||
      rational_string(check.defect_upper) != cert.defect_upper) {
    fail("stored rational bounds differ from the recomputed ones");
  }
  if (!(check.defect_upper < 0)) fail("defect upper bound is not negative");

  if (cert.direct_checked) {
    std::string note;
    const auto direct = direct_defect(sys, cert, std::numeric_limits<std::uint64_t>::max(), note);
    if (!direct) {
      fail("direct cross-check no longer fits in memory");
    } else if (!(*direct < 0.0)) {
      fail("direct defect is not negative");
    } else if (*direct != cert.direct_defect) {
      fail("direct defect does not reproduce");
    }
  }
  return v;
}

}  // namespace linpat
