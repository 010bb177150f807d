#include "linpat/systems.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "linpat/errors.hpp"
#include "linpat/fpspace.hpp"

namespace linpat {

SolutionSpace SolutionSpace::of_equations(const FpMatrix& equations) {
  FpMatrix eq = equations.rref();
  FpMatrix basis = eq.nullspace();
  return SolutionSpace(std::move(basis), std::move(eq));
}

SolutionSpace SolutionSpace::spanned_by(const FpMatrix& generators) {
  FpMatrix basis = generators.rref();
  FpMatrix eq = basis.nullspace();
  return SolutionSpace(std::move(basis), std::move(eq));
}

SolutionSpace SolutionSpace::project(std::span<const std::size_t> columns) const {
  for (std::size_t c : columns) {
    if (c >= variables()) throw UsageError("column " + std::to_string(c) + " out of range");
  }
  FpMatrix gens = basis_.select_columns(columns);
  if (gens.rows() == 0) gens = FpMatrix(prime(), 0, columns.size());
  return spanned_by(gens);
}

LinearSystem::LinearSystem(FpMatrix matrix)
    : matrix_(std::move(matrix)), solutions_(SolutionSpace::of_equations(matrix_)) {
  const std::size_t m = matrix_.rows();
  const std::size_t t = matrix_.cols();
  if (m < 1) throw UsageError("a system needs at least one equation");
  if (t <= m) throw UsageError("a system needs more variables than equations (m=" + std::to_string(m) +
                               ", t=" + std::to_string(t) + ")");
  if (solutions_.codimension() != m) {
    throw UsageError("system is not of full rank (rank " + std::to_string(solutions_.codimension()) + " < m=" +
                     std::to_string(m) + ")");
  }
}

LinearSystem LinearSystem::from_rows(int p, const std::vector<std::vector<std::int64_t>>& rows) {
  if (!is_prime(p) || p < 3) throw UsageError("modulus must be an odd prime, got " + std::to_string(p));
  if (rows.empty()) throw UsageError("a system needs at least one equation");
  return LinearSystem(FpMatrix::from_rows(p, rows, rows.front().size()));
}

namespace {

// Splits a line into integer tokens, dropping anything after '#'.
std::vector<std::int64_t> integer_tokens(const std::string& raw, std::size_t line_no) {
  const std::string line = raw.substr(0, raw.find('#'));
  std::istringstream ss(line);
  std::vector<std::int64_t> out;
  std::string tok;
  while (ss >> tok) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      throw ParseError(line_no, "expected an integer, got '" + tok + "'");
    }
    if (used != tok.size()) throw ParseError(line_no, "expected an integer, got '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

LinearSystem LinearSystem::parse(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::int64_t> header;
  std::size_t header_line = 0;
  while (header.empty() && std::getline(in, raw)) {
    ++line_no;
    header = integer_tokens(raw, line_no);
    header_line = line_no;
  }
  if (header.empty()) throw ParseError(line_no + 1, "missing header 'p m t'");
  if (header.size() != 3) throw ParseError(header_line, "header must be 'p m t'");
  const std::int64_t p = header[0];
  const std::int64_t m = header[1];
  const std::int64_t t = header[2];
  if (p < 3 || p > 46337 || !is_prime(p)) throw ParseError(header_line, "p must be an odd prime");
  if (m < 1 || t < 1 || m > 64 || t > 64) throw ParseError(header_line, "m and t must lie in [1, 64]");
  std::vector<std::vector<std::int64_t>> rows;
  while (rows.size() < static_cast<std::size_t>(m) && std::getline(in, raw)) {
    ++line_no;
    auto toks = integer_tokens(raw, line_no);
    if (toks.empty()) continue;
    if (toks.size() != static_cast<std::size_t>(t)) {
      throw ParseError(line_no, "expected " + std::to_string(t) + " coefficients, got " + std::to_string(toks.size()));
    }
    rows.push_back(std::move(toks));
  }
  if (rows.size() < static_cast<std::size_t>(m)) {
    throw ParseError(line_no + 1, "expected " + std::to_string(m) + " rows, got " + std::to_string(rows.size()));
  }
  while (std::getline(in, raw)) {
    ++line_no;
    if (!integer_tokens(raw, line_no).empty()) throw ParseError(line_no, "unexpected data after the last row");
  }
  try {
    return LinearSystem(FpMatrix::from_rows(static_cast<int>(p), rows, static_cast<std::size_t>(t)));
  } catch (const ParseError&) {
    throw;
  } catch (const UsageError& e) {
    throw ParseError(header_line, e.what());
  }
}

LinearSystem LinearSystem::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open system file '" + path + "'");
  return parse(in);
}

std::string LinearSystem::to_text() const {
  std::ostringstream out;
  out << prime() << ' ' << equations() << ' ' << variables() << '\n';
  for (std::size_t r = 0; r < equations(); ++r) {
    for (std::size_t c = 0; c < variables(); ++c) {
      if (c) out << ' ';
      out << signed_residue(matrix_(r, c), prime());
    }
    out << '\n';
  }
  return out.str();
}

namespace {

// Calls visit(v) for every non-zero vector v of the row space, one per line through the origin.
template <class Visit>
void for_each_projective_combination(const FpMatrix& rows, Visit&& visit) {
  const int p = rows.prime();
  const std::size_t m = rows.rows();
  std::vector<int> coeffs(m, 0);
  // Normalized coefficient vectors: the first non-zero coefficient equals 1.
  for (std::size_t lead = 0; lead < m; ++lead) {
    std::uint64_t tail = 1;
    for (std::size_t i = lead + 1; i < m; ++i) tail *= static_cast<std::uint64_t>(p);
    for (std::uint64_t code = 0; code < tail; ++code) {
      std::fill(coeffs.begin(), coeffs.end(), 0);
      coeffs[lead] = 1;
      std::uint64_t rest = code;
      for (std::size_t i = m; i-- > lead + 1;) {
        coeffs[i] = static_cast<int>(rest % static_cast<std::uint64_t>(p));
        rest /= static_cast<std::uint64_t>(p);
      }
      visit(rows.combine_rows(coeffs));
    }
  }
}

}  // namespace

std::size_t shortest_equation_length(const FpMatrix& rows) {
  std::size_t best = 0;
  for_each_projective_combination(rows, [&](const std::vector<int>& v) {
    const auto w = static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](int x) { return x != 0; }));
    if (w != 0 && (best == 0 || w < best)) best = w;
  });
  return best;
}

bool minors_generic(const FpMatrix& matrix) {
  if (matrix.rows() != 2) throw UsageError("minor genericity is defined for 2-row systems, got m=" + std::to_string(matrix.rows()));
  const int p = matrix.prime();
  for (std::size_t i = 0; i < matrix.cols(); ++i) {
    for (std::size_t j = i + 1; j < matrix.cols(); ++j) {
      const std::int64_t det = static_cast<std::int64_t>(matrix(0, i)) * matrix(1, j) -
                               static_cast<std::int64_t>(matrix(0, j)) * matrix(1, i);
      if (mod_p(det, p) == 0) return false;
    }
  }
  return true;
}

bool contains_additive_tuple(const FpMatrix& matrix) {
  const std::size_t t = matrix.cols();
  if (t % 2 != 0) return false;
  const int p = matrix.prime();
  bool found = false;
  for_each_projective_combination(matrix, [&](const std::vector<int>& v) {
    if (found || v[0] == 0) return;
    const int c = v[0];
    const int neg = mod_p(-c, p);
    std::size_t plus = 0;
    for (int x : v) {
      if (x == c) {
        ++plus;
      } else if (x != neg) {
        return;
      }
    }
    if (plus == t / 2) found = true;
  });
  return found;
}

SubsystemView restrict(const SolutionSpace& space, std::span<const std::size_t> columns) {
  if (columns.empty()) throw UsageError("restriction to an empty column set");
  std::vector<std::size_t> sorted(columns.begin(), columns.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw UsageError("repeated column in restriction");
  return SubsystemView{space.variables(), std::vector<std::size_t>(columns.begin(), columns.end()), space.project(columns)};
}

namespace {

struct ContainSearch {
  const SolutionSpace& big;
  std::vector<SolutionSpace> small_prefixes;  // projection of small onto its first j+1 columns
  std::vector<std::size_t> chosen;
  std::vector<bool> used;

  bool extend() {
    const std::size_t j = chosen.size();
    if (j == small_prefixes.size()) return true;
    for (std::size_t c = 0; c < big.variables(); ++c) {
      if (used[c]) continue;
      chosen.push_back(c);
      const FpMatrix proj = big.basis().select_columns(chosen);
      if (small_prefixes[j].contains(proj)) {
        used[c] = true;
        if (extend()) return true;
        used[c] = false;
      }
      chosen.pop_back();
    }
    return false;
  }
};

}  // namespace

std::optional<std::vector<std::size_t>> contains(const SolutionSpace& big, const SolutionSpace& small) {
  if (big.prime() != small.prime()) throw UsageError("containment between systems over different primes");
  const std::size_t ts = small.variables();
  if (ts > big.variables()) return std::nullopt;
  ContainSearch search{big, {}, {}, std::vector<bool>(big.variables(), false)};
  std::vector<std::size_t> prefix;
  for (std::size_t j = 0; j < ts; ++j) {
    prefix.push_back(j);
    search.small_prefixes.push_back(small.project(prefix));
  }
  if (!search.extend()) return std::nullopt;
  return search.chosen;
}

namespace {

// Row-operation invariant description of each column: how many columns are parallel to it
// in the equation matrix and in the basis matrix.
std::vector<std::pair<std::size_t, std::size_t>> column_signatures(const SolutionSpace& s) {
  auto parallel_counts = [](const FpMatrix& m) {
    const int p = m.prime();
    std::vector<std::vector<int>> normalized(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::vector<int> col(m.rows());
      for (std::size_t r = 0; r < m.rows(); ++r) col[r] = m(r, c);
      const auto lead = std::find_if(col.begin(), col.end(), [](int x) { return x != 0; });
      if (lead != col.end()) {
        const std::int64_t inv = inverse_mod(*lead, p);
        for (int& x : col) x = mod_p(inv * x, p);
      }
      normalized[c] = std::move(col);
    }
    std::map<std::vector<int>, std::size_t> counts;
    for (const auto& col : normalized) ++counts[col];
    std::vector<std::size_t> out(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) out[c] = counts[normalized[c]];
    return out;
  };
  const auto e = parallel_counts(s.equations());
  const auto b = parallel_counts(s.basis());
  std::vector<std::pair<std::size_t, std::size_t>> sig(s.variables());
  for (std::size_t c = 0; c < sig.size(); ++c) {
    sig[c] = {s.equations().rows() == 0 ? 0 : e[c], s.basis().rows() == 0 ? 0 : b[c]};
  }
  return sig;
}

struct PermutationSearch {
  const SolutionSpace& a;
  std::vector<SolutionSpace> b_prefixes;
  std::vector<std::pair<std::size_t, std::size_t>> sig_a;
  std::vector<std::pair<std::size_t, std::size_t>> sig_b;
  std::vector<std::size_t> chosen;
  std::vector<bool> used;

  bool extend() {
    const std::size_t j = chosen.size();
    if (j == b_prefixes.size()) return true;
    for (std::size_t c = 0; c < a.variables(); ++c) {
      if (used[c] || sig_a[c] != sig_b[j]) continue;
      chosen.push_back(c);
      if (a.project(chosen) == b_prefixes[j]) {
        used[c] = true;
        if (extend()) return true;
        used[c] = false;
      }
      chosen.pop_back();
    }
    return false;
  }
};

}  // namespace

OperatorMatch operators_equal(const SolutionSpace& a, const SolutionSpace& b) {
  if (a.prime() != b.prime() || a.variables() != b.variables()) {
    throw UsageError("operator comparison needs the same prime and number of columns");
  }
  OperatorMatch out;
  out.labeled = a == b;
  if (out.labeled) {
    out.permuted = true;
    for (std::size_t i = 0; i < a.variables(); ++i) out.permutation.push_back(i);
    return out;
  }
  if (a.degrees_of_freedom() != b.degrees_of_freedom()) return out;
  PermutationSearch search{a, {}, column_signatures(a), column_signatures(b), {}, std::vector<bool>(a.variables(), false)};
  auto sa = search.sig_a;
  auto sb = search.sig_b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) return out;
  std::vector<std::size_t> prefix;
  for (std::size_t j = 0; j < b.variables(); ++j) {
    prefix.push_back(j);
    search.b_prefixes.push_back(b.project(prefix));
  }
  if (search.extend()) {
    out.permuted = true;
    out.permutation = search.chosen;
  }
  return out;
}

}  // namespace linpat
