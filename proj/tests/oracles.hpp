#pragma once

// Brute-force reference implementations used to validate the library. Everything here is
// written from the definitions, by exhaustive enumeration, without calling the routines
// under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "linpat/fp_matrix.hpp"
#include "linpat/functions.hpp"
#include "linpat/random.hpp"
#include "linpat/systems.hpp"

namespace oracle {

using linpat::Complex;
using Vec = std::vector<int>;
using Rows = std::vector<std::vector<std::int64_t>>;

inline std::mt19937_64 stream(std::uint64_t id) { return linpat::make_stream(20240607, linpat::StreamTag::test, id); }

inline int below(std::mt19937_64& g, int n) { return static_cast<int>(g() % static_cast<std::uint64_t>(n)); }

inline double uniform(std::mt19937_64& g, double lo, double hi) { return lo + (hi - lo) * linpat::unit_uniform(g); }

inline std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

inline int md(long long v, int p) { return static_cast<int>(((v % p) + p) % p); }

/// Digits of idx in base p, most significant first.
inline Vec digits(std::uint64_t idx, int p, int n) {
  Vec d(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    d[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::uint64_t>(p));
    idx /= static_cast<std::uint64_t>(p);
  }
  return d;
}

inline std::uint64_t index(const Vec& d, int p) {
  std::uint64_t idx = 0;
  for (int x : d) idx = idx * static_cast<std::uint64_t>(p) + static_cast<std::uint64_t>(x);
  return idx;
}

/// Every vector of F_p^t, in index order.
inline std::vector<Vec> all_vectors(int p, std::size_t t) {
  std::vector<Vec> out;
  const std::uint64_t n = ipow(static_cast<std::uint64_t>(p), t);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(digits(i, p, static_cast<int>(t)));
  return out;
}

inline bool solves(const Rows& eqs, const Vec& x, int p) {
  for (const auto& row : eqs) {
    long long s = 0;
    for (std::size_t j = 0; j < x.size(); ++j) s += row[j] * x[j];
    if (md(s, p) != 0) return false;
  }
  return true;
}

/// Solutions in F_p^t of the equations.
inline std::vector<Vec> solutions(const Rows& eqs, int p, std::size_t t) {
  std::vector<Vec> out;
  for (const Vec& x : all_vectors(p, t)) {
    if (solves(eqs, x, p)) out.push_back(x);
  }
  return out;
}

inline Rows rows_of(const linpat::FpMatrix& m) {
  Rows r(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) r[i].push_back(m(i, j));
  }
  return r;
}

/// T(f) = E over solutions x in (F_p^n)^t of prod_i f(x_i), by listing all p^(n t) tuples.
inline Complex density(const Rows& eqs, std::size_t t, int p, int n, const std::vector<Complex>& f) {
  const std::uint64_t N = ipow(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(n));
  const std::uint64_t total = ipow(N, t);
  Complex sum = 0.0;
  std::uint64_t count = 0;
  std::vector<Vec> xs(t);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (std::size_t i = 0; i < t; ++i) {
      xs[i] = digits(c % N, p, n);
      c /= N;
    }
    bool ok = true;
    for (int coord = 0; coord < n && ok; ++coord) {
      Vec column(t);
      for (std::size_t i = 0; i < t; ++i) column[i] = xs[i][static_cast<std::size_t>(coord)];
      ok = solves(eqs, column, p);
    }
    if (!ok) continue;
    ++count;
    Complex prod = 1.0;
    for (std::size_t i = 0; i < t; ++i) prod *= f[index(xs[i], p)];
    sum += prod;
  }
  return sum / static_cast<double>(count);
}

/// f^(h) = p^-n sum_x f(x) exp(2 pi i (x . h) / p).
inline std::vector<Complex> dft(const std::vector<Complex>& f, int p, int n) {
  const std::size_t N = f.size();
  std::vector<Complex> out(N);
  for (std::size_t h = 0; h < N; ++h) {
    const Vec hd = digits(h, p, n);
    Complex acc = 0.0;
    for (std::size_t x = 0; x < N; ++x) {
      const Vec xd = digits(x, p, n);
      long long dot = 0;
      for (int i = 0; i < n; ++i) dot += static_cast<long long>(xd[static_cast<std::size_t>(i)]) * hd[static_cast<std::size_t>(i)];
      acc += f[x] * std::exp(Complex(0.0, 2.0 * std::numbers::pi * static_cast<double>(md(dot, p)) / p));
    }
    out[h] = acc / static_cast<double>(N);
  }
  return out;
}

/// All vectors of the row space of `eqs`.
inline std::vector<Vec> row_space(const Rows& eqs, int p, std::size_t t) {
  std::set<Vec> out;
  for (const Vec& c : all_vectors(p, eqs.size())) {
    Vec v(t, 0);
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      for (std::size_t j = 0; j < t; ++j) v[j] = md(v[j] + c[i] * eqs[i][j], p);
    }
    out.insert(v);
  }
  return {out.begin(), out.end()};
}

inline std::size_t weight(const Vec& v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](int x) { return x != 0; }));
}

inline std::size_t shortest_equation(const Rows& eqs, int p, std::size_t t) {
  std::size_t best = 0;
  for (const Vec& v : row_space(eqs, p, t)) {
    const std::size_t w = weight(v);
    if (w > 0 && (best == 0 || w < best)) best = w;
  }
  return best;
}

inline bool generic_minors(const Rows& m, int p) {
  for (std::size_t i = 0; i < m[0].size(); ++i) {
    for (std::size_t j = i + 1; j < m[0].size(); ++j) {
      if (md(m[0][i] * m[1][j] - m[0][j] * m[1][i], p) == 0) return false;
    }
  }
  return true;
}

/// Some row-space vector equals c times a vector with t/2 entries +1 and t/2 entries -1.
inline bool additive_tuple(const Rows& eqs, int p, std::size_t t) {
  if (t % 2 != 0) return false;
  for (const Vec& v : row_space(eqs, p, t)) {
    if (weight(v) != t) continue;
    for (int c = 1; c < p; ++c) {
      std::size_t plus = 0, minus = 0;
      for (int x : v) {
        if (x == c) ++plus;
        if (x == md(-c, p)) ++minus;
      }
      if (plus + minus == t && plus == minus) return true;
    }
  }
  return false;
}

/// Projection of the solution set onto `cols`, as a set.
inline std::set<Vec> projection(const Rows& eqs, int p, std::size_t t, const std::vector<std::size_t>& cols) {
  std::set<Vec> out;
  for (const Vec& x : solutions(eqs, p, t)) {
    Vec y;
    for (std::size_t c : cols) y.push_back(x[c]);
    out.insert(y);
  }
  return out;
}

inline std::set<Vec> permute_set(const std::set<Vec>& s, const std::vector<std::size_t>& perm) {
  std::set<Vec> out;
  for (const Vec& v : s) {
    Vec w(v.size());
    for (std::size_t i = 0; i < perm.size(); ++i) w[i] = v[perm[i]];
    out.insert(w);
  }
  return out;
}

/// Equality of two solution sets up to a permutation of coordinates.
inline bool equal_up_to_permutation(const std::set<Vec>& a, const std::set<Vec>& b, std::size_t t) {
  if (a.size() != b.size()) return false;
  std::vector<std::size_t> perm(t);
  for (std::size_t i = 0; i < t; ++i) perm[i] = i;
  do {
    if (permute_set(a, perm) == b) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

/// Whether the multiset splits into pairs summing to zero, by backtracking.
inline bool cancelling(std::vector<Vec> items, int p) {
  if (items.empty()) return true;
  const Vec first = items.back();
  items.pop_back();
  for (std::size_t i = 0; i < items.size(); ++i) {
    bool opposite = true;
    for (std::size_t c = 0; c < first.size(); ++c) opposite = opposite && md(first[c] + items[i][c], p) == 0;
    if (!opposite) continue;
    std::vector<Vec> rest = items;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    if (cancelling(rest, p)) return true;
  }
  return false;
}

/// Dimension of the span of `vs` in F_p^n, by counting all linear combinations.
inline int span_dimension(const std::vector<Vec>& vs, int p) {
  std::set<Vec> span;
  for (const Vec& c : all_vectors(p, vs.size())) {
    Vec v(vs[0].size(), 0);
    for (std::size_t i = 0; i < vs.size(); ++i) {
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = md(v[j] + c[i] * vs[i][j], p);
    }
    span.insert(v);
  }
  int d = 0;
  for (std::size_t s = 1; s < span.size(); s *= static_cast<std::size_t>(p)) ++d;
  return d;
}

/// Signed-lexicographic comparison from the representatives in [-(p-1)/2, (p-1)/2].
inline bool signed_less(const Vec& a, const Vec& b, int p) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int x = a[i] > (p - 1) / 2 ? a[i] - p : a[i];
    const int y = b[i] > (p - 1) / 2 ? b[i] - p : b[i];
    if (x != y) return x < y;
  }
  return false;
}

/// A random full-rank m x t matrix.
inline Rows random_full_rank(std::mt19937_64& g, int p, std::size_t m, std::size_t t) {
  while (true) {
    Rows rows(m, std::vector<std::int64_t>(t));
    for (auto& r : rows) {
      for (auto& x : r) x = below(g, p);
    }
    if (linpat::FpMatrix::from_rows(p, rows, t).rank() == m) return rows;
  }
}

inline std::vector<Complex> random_complex(std::mt19937_64& g, std::size_t N) {
  std::vector<Complex> v(N);
  for (auto& z : v) z = Complex(uniform(g, -1, 1), uniform(g, -1, 1));
  return v;
}

inline std::vector<double> random_real(std::mt19937_64& g, std::size_t N, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(N);
  for (auto& x : v) x = uniform(g, lo, hi);
  return v;
}

inline std::vector<double> zero_mean(std::vector<double> v, double bound) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double sup = 0.0;
  for (double& x : v) {
    x -= mean;
    sup = std::max(sup, std::abs(x));
  }
  if (sup > bound) {
    for (double& x : v) x *= bound / sup;
  }
  return v;
}

}  // namespace oracle
