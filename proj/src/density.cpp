#include "linpat/density.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "linpat/errors.hpp"
#include "linpat/parallel.hpp"

namespace linpat {

namespace {

constexpr std::uint64_t kBlockTerms = std::uint64_t{1} << 12;
constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

std::uint64_t saturating_power(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (out > std::numeric_limits<std::uint64_t>::max() / base) return std::numeric_limits<std::uint64_t>::max();
    out *= base;
  }
  return out;
}

template <class T>
struct ProductSum {
  T sum{};
  double abs_sum = 0.0;
};

// Sums prod_i table[ sum_j coeffs(j, i) u_j ] over all u in (F_p^n)^r, where r = coeffs.rows()
// and the index of column i is formed coordinate-wise. Terms are cut into fixed blocks, each
// summed sequentially, then combined by a pairwise tree whose shape depends only on the term
// count, so the result does not depend on the number of workers.
template <class T>
DensityValue sum_linear_forms(const FpSpace& space, const FpMatrix& coeffs, std::span<const T> table,
                              const DensityOptions& opts, const char* route) {
  const int p = space.prime();
  const int n = space.dim();
  const std::size_t r = coeffs.rows();
  const std::size_t t = coeffs.cols();
  const std::size_t digits = r * static_cast<std::size_t>(n);
  const std::uint64_t total = saturating_power(static_cast<std::uint64_t>(p), digits);
  if (total > opts.budget) {
    throw CapacityError(std::string(route) + " density needs " + std::to_string(p) + "^" + std::to_string(digits) +
                        " terms, above the budget of " + std::to_string(opts.budget));
  }

  // Digit q = j * n + c is coordinate c of free vector u_j; q = 0 is most significant.
  struct Touch {
    std::size_t column;
    int coeff;
  };
  std::vector<std::vector<Touch>> touches(digits);
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t i = 0; i < t; ++i) {
      const int a = coeffs(j, i);
      if (a == 0) continue;
      for (int c = 0; c < n; ++c) touches[j * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)].push_back({i, a});
    }
  }

  const std::uint64_t blocks = (total + kBlockTerms - 1) / kBlockTerms;
  std::vector<T> block_sum(static_cast<std::size_t>(blocks));
  std::vector<double> block_abs(static_cast<std::size_t>(blocks));

  parallel_for(static_cast<std::size_t>(blocks), opts.workers, [&](std::size_t b) {
    const std::uint64_t first = static_cast<std::uint64_t>(b) * kBlockTerms;
    const std::uint64_t last = std::min(total, first + kBlockTerms);
    std::vector<int> u(digits);
    std::uint64_t rest = first;
    for (std::size_t q = digits; q-- > 0;) {
      u[q] = static_cast<int>(rest % static_cast<std::uint64_t>(p));
      rest /= static_cast<std::uint64_t>(p);
    }
    // x[i * n + c]: coordinate c of column i; idx[i]: its group index.
    std::vector<int> x(t * static_cast<std::size_t>(n), 0);
    std::vector<std::int64_t> idx(t, 0);
    for (std::size_t q = 0; q < digits; ++q) {
      const std::size_t c = q % static_cast<std::size_t>(n);
      for (const Touch& tc : touches[q]) {
        int& xc = x[tc.column * static_cast<std::size_t>(n) + c];
        xc = static_cast<int>((xc + static_cast<std::int64_t>(tc.coeff) * u[q]) % p);
      }
    }
    for (std::size_t i = 0; i < t; ++i) {
      idx[i] = static_cast<std::int64_t>(space.index_of(std::span<const int>(x).subspan(i * static_cast<std::size_t>(n), static_cast<std::size_t>(n))));
    }
    auto bump = [&](std::size_t q) {
      const std::size_t c = q % static_cast<std::size_t>(n);
      const auto w = static_cast<std::int64_t>(space.weight(static_cast<int>(c)));
      for (const Touch& tc : touches[q]) {
        int& xc = x[tc.column * static_cast<std::size_t>(n) + c];
        int nw = xc + tc.coeff;
        if (nw >= p) nw -= p;
        idx[tc.column] += (nw - xc) * w;
        xc = nw;
      }
    };
    T acc{};
    double acc_abs = 0.0;
    for (std::uint64_t k = first; k < last; ++k) {
      T term = table[static_cast<std::size_t>(idx[0])];
      for (std::size_t i = 1; i < t; ++i) term *= table[static_cast<std::size_t>(idx[i])];
      acc += term;
      acc_abs += std::abs(term);
      // Odometer step: every digit change is +1 mod p.
      for (std::size_t q = digits; q-- > 0;) {
        bump(q);
        if (++u[q] < p) break;
        u[q] = 0;
      }
    }
    block_sum[b] = acc;
    block_abs[b] = acc_abs;
  });

  const T sum = pairwise_sum<T>(block_sum);
  const double abs_sum = pairwise_sum<double>(block_abs);
  const double norm = static_cast<double>(total);
  const auto depth = static_cast<double>(std::bit_width(blocks));
  const double k = static_cast<double>(kBlockTerms) + depth + 4.0 * static_cast<double>(t) + 4.0;
  const double gamma = k * kUnitRoundoff / (1.0 - k * kUnitRoundoff);
  DensityValue out;
  out.value = Complex(sum) / norm;
  out.abs_sum = abs_sum / norm;
  out.terms = total;
  out.error_bound = 2.0 * (gamma * out.abs_sum + 2.0 * kUnitRoundoff * std::abs(out.value));
  return out;
}

void check_domain(const SolutionSpace& sol, const FpSpace& space) {
  if (sol.prime() != space.prime()) {
    throw UsageError("system is over F_" + std::to_string(sol.prime()) + " but the function is over F_" +
                     std::to_string(space.prime()));
  }
}

}  // namespace

std::uint64_t direct_term_count(const SolutionSpace& sol, const FpSpace& space) {
  return saturating_power(static_cast<std::uint64_t>(space.prime()),
                          sol.degrees_of_freedom() * static_cast<std::uint64_t>(space.dim()));
}

std::uint64_t fourier_term_count(const SolutionSpace& sol, const FpSpace& space) {
  return saturating_power(static_cast<std::uint64_t>(space.prime()),
                          sol.codimension() * static_cast<std::uint64_t>(space.dim()));
}

DensityValue density_direct(const SolutionSpace& sol, const GroupFunction& f, const DensityOptions& opts) {
  check_domain(sol, f.space());
  if (f.is_exactly_real()) {
    const std::vector<double> table = f.real_values();
    return sum_linear_forms<double>(f.space(), sol.basis(), table, opts, "direct");
  }
  return sum_linear_forms<Complex>(f.space(), sol.basis(), f.values(), opts, "direct");
}

DensityValue density_fourier(const SolutionSpace& sol, const FourierTable& fhat, const DensityOptions& opts) {
  check_domain(sol, fhat.space());
  DensityValue v = sum_linear_forms<Complex>(fhat.space(), sol.equations(), fhat.coefficients(), opts, "Fourier");
  // The dual sum is not normalized.
  const double scale = static_cast<double>(v.terms);
  v.value *= scale;
  v.abs_sum *= scale;
  v.error_bound *= scale;
  return v;
}

DensityValue density_fourier(const SolutionSpace& sol, const GroupFunction& f, const DensityOptions& opts) {
  check_domain(sol, f.space());
  const std::uint64_t terms = fourier_term_count(sol, f.space());
  if (terms > opts.budget) {
    throw CapacityError("Fourier density needs " + std::to_string(f.space().prime()) + "^" +
                        std::to_string(sol.codimension() * static_cast<std::size_t>(f.space().dim())) +
                        " terms, above the budget of " + std::to_string(opts.budget));
  }
  return density_fourier(sol, forward_transform(f), opts);
}

double density(const SolutionSpace& sol, const GroupFunction& f, const DensityOptions& opts) {
  if (direct_term_count(sol, f.space()) <= fourier_term_count(sol, f.space())) {
    return density_direct(sol, f, opts).value.real();
  }
  return density_fourier(sol, f, opts).value.real();
}

Complex density(const SolutionSpace& sol, const TensorPower& power, const DensityOptions& opts) {
  const auto& f = power.base();
  const Complex base = direct_term_count(sol, f.space()) <= fourier_term_count(sol, f.space())
                           ? density_direct(sol, f, opts).value
                           : density_fourier(sol, f, opts).value;
  return std::pow(base, static_cast<int>(power.exponent()));
}

DensityReport density_report(const SolutionSpace& sol, const GroupFunction& f, DensityMethod method,
                             const DensityOptions& opts) {
  DensityReport rep;
  rep.method = method;
  rep.terms_direct = direct_term_count(sol, f.space());
  rep.terms_fourier = fourier_term_count(sol, f.space());
  bool want_direct = method == DensityMethod::direct || method == DensityMethod::both;
  bool want_fourier = method == DensityMethod::fourier || method == DensityMethod::both;
  if (method == DensityMethod::automatic) {
    want_direct = rep.terms_direct <= rep.terms_fourier;
    want_fourier = !want_direct;
  }
  if (want_direct) {
    const auto v = density_direct(sol, f, opts);
    rep.has_direct = true;
    rep.value_direct = v.value.real();
    rep.imag_direct = v.value.imag();
  }
  if (want_fourier) {
    const auto v = density_fourier(sol, f, opts);
    rep.has_fourier = true;
    rep.value_fourier = v.value.real();
    rep.imag_fourier = v.value.imag();
  }
  if (rep.has_direct && rep.has_fourier) {
    rep.discrepancy = std::abs(Complex(rep.value_direct, rep.imag_direct) - Complex(rep.value_fourier, rep.imag_fourier));
  }
  return rep;
}

bool linearly_independent(const FpSpace& space, Index r, Index s) {
  if (r == 0) return false;
  const int p = space.prime();
  std::vector<int> rd(static_cast<std::size_t>(space.dim()));
  std::vector<int> sd(rd.size());
  space.digits(r, rd);
  space.digits(s, sd);
  std::size_t lead = 0;
  while (rd[lead] == 0) ++lead;
  const std::int64_t lambda = static_cast<std::int64_t>(sd[lead]) * inverse_mod(rd[lead], p);
  for (std::size_t c = 0; c < rd.size(); ++c) {
    if (mod_p(lambda * rd[c], p) != sd[c]) return true;
  }
  return false;
}

std::vector<Index> frequency_multiset(const FpMatrix& equations, const FpSpace& space, Index r, Index s) {
  if (equations.rows() != 2) throw UsageError("frequency multisets are defined for 2-row systems");
  if (equations.prime() != space.prime()) throw UsageError("system and group use different primes");
  std::vector<Index> out(equations.cols());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = space.add(space.scale(equations(0, i), r), space.scale(equations(1, i), s));
  }
  return out;
}

DualPairTable::DualPairTable(const FpMatrix& equations, const FpSpace& space)
    : space_(space), width_(equations.cols()), pairs_(0) {
  if (equations.rows() != 2) throw UsageError("dual pair tables are defined for 2-row systems");
  if (equations.prime() != space.prime()) throw UsageError("system and group use different primes");
  const Index N = space.table_size();
  if (N > kMaxPairs / N) {
    throw CapacityError("dual pair table for " + std::to_string(space.prime()) + "^" + std::to_string(space.dim()) +
                        " needs more than " + std::to_string(kMaxPairs) + " pairs");
  }
  pairs_ = N * N;
  independent_.resize(static_cast<std::size_t>(pairs_));
  freqs_.resize(static_cast<std::size_t>(pairs_) * width_);
  // a_i r and b_i s per column, reused across the inner loop.
  std::vector<Index> ar(width_), bs(N * width_);
  for (Index s = 0; s < N; ++s) {
    for (std::size_t i = 0; i < width_; ++i) bs[s * width_ + i] = space.scale(equations(1, i), s);
  }
  for (Index r = 0; r < N; ++r) {
    for (std::size_t i = 0; i < width_; ++i) ar[i] = space.scale(equations(0, i), r);
    for (Index s = 0; s < N; ++s) {
      const Index pair = r * N + s;
      const bool li = linearly_independent(space, r, s);
      independent_[static_cast<std::size_t>(pair)] = li ? 1 : 0;
      independent_count_ += li ? 1 : 0;
      for (std::size_t i = 0; i < width_; ++i) {
        freqs_[static_cast<std::size_t>(pair) * width_ + i] = static_cast<std::uint32_t>(space.add(ar[i], bs[s * width_ + i]));
      }
    }
  }
}

PQSplit pq_split(const DualPairTable& pairs, const FourierTable& fhat) {
  if (!(pairs.space() == fhat.space())) throw UsageError("Fourier table and dual pair table use different groups");
  PQSplit out;
  const auto coeffs = fhat.coefficients();
  // Both halves are accumulated in the pair order; P and Q each get a pairwise tree per r.
  const Index N = pairs.space().size();
  std::vector<Complex> prow(static_cast<std::size_t>(N)), qrow(static_cast<std::size_t>(N));
  for (Index r = 0; r < N; ++r) {
    Complex p_acc = 0.0, q_acc = 0.0;
    for (Index s = 0; s < N; ++s) {
      const Index pair = r * N + s;
      Complex term = 1.0;
      for (std::uint32_t h : pairs.frequencies(pair)) term *= coeffs[h];
      if (pairs.independent(pair)) {
        p_acc += term;
      } else {
        q_acc += term;
      }
    }
    prow[static_cast<std::size_t>(r)] = p_acc;
    qrow[static_cast<std::size_t>(r)] = q_acc;
  }
  out.P = pairwise_sum<Complex>(prow);
  out.Q = pairwise_sum<Complex>(qrow);
  out.independent_pairs = pairs.independent_count();
  out.dependent_pairs = pairs.pairs() - pairs.independent_count();
  return out;
}

PQSplit pq_split(const LinearSystem& sys, const FourierTable& fhat) {
  if (sys.equations() != 2) throw UsageError("the P/Q split needs a 2-row system, got m=" + std::to_string(sys.equations()));
  return pq_split(DualPairTable(sys.matrix(), fhat.space()), fhat);
}

double dependent_pair_bound(const FpSpace& space) {
  const double pn = static_cast<double>(space.size());
  const double p = space.prime();
  return pn * p + pn - p;
}

DefectReport commonness_defect(const LinearSystem& sys, const GroupFunction& f, const DensityOptions& opts) {
  if (sys.prime() != f.space().prime()) throw UsageError("system and function use different primes");
  if (!f.is_real()) throw UsageError("the commonness defect needs a real-valued function");
  const double mean = f.mean().real();
  if (std::abs(mean) > 1e-10) throw UsageError("the commonness defect needs E f = 0, got " + std::to_string(mean));
  if (!f.is_bounded(0.5)) throw UsageError("the commonness defect needs values in [-1/2, 1/2]");

  DefectReport rep;
  const std::size_t t = sys.variables();
  rep.variables = t;
  rep.shortest_equation = shortest_equation_length(sys);
  rep.baseline = std::ldexp(1.0, 1 - static_cast<int>(t));

  const GroupFunction real_f = GroupFunction::from_real(f.space(), f.real_values());
  const double plus = density(sys.solutions(), real_f.affine(1.0, 0.5), opts);
  const double minus = density(sys.solutions(), real_f.affine(-1.0, 0.5), opts);
  rep.defect_direct = plus + minus - rep.baseline;

  // Odd subsets cancel between 1/2 + f and 1/2 - f; even subsets shorter than the shortest
  // equation restrict to free systems and vanish because E f = 0.
  const std::size_t min_size = std::max<std::size_t>(2, rep.shortest_equation);
  std::vector<double> contributions;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << t); ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (size % 2 != 0 || size < min_size) continue;
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < t; ++i) {
      if (mask & (std::uint64_t{1} << i)) cols.push_back(i);
    }
    const SubsystemView view = restrict(sys, cols);
    DefectTerm term;
    term.columns = cols;
    term.degrees_of_freedom = view.degrees_of_freedom();
    term.density = density(view.solutions, real_f, opts);
    term.contribution = std::ldexp(term.density, 1 - static_cast<int>(t) + static_cast<int>(size));
    contributions.push_back(term.contribution);
    rep.terms.push_back(std::move(term));
  }
  rep.defect_expansion = pairwise_sum<double>(contributions);
  rep.discrepancy = std::abs(rep.defect_direct - rep.defect_expansion);
  return rep;
}

}  // namespace linpat
