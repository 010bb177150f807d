#include "doctest.h"
#include "linpat/density.hpp"
#include "linpat/errors.hpp"
#include "oracles.hpp"

using namespace linpat;

namespace {

LinearSystem four_ap() { return LinearSystem::from_rows(5, {{1, -2, 1, 0}, {0, 1, -2, 1}}); }

}  // namespace

TEST_CASE("both routes agree with enumeration of solutions") {
  auto g = oracle::stream(20);
  for (int trial = 0; trial < 40; ++trial) {
    const int p = trial % 2 == 0 ? 3 : 5;
    const int n = 1 + (trial % 4 == 0 ? 1 : 0);
    const std::size_t m = 1 + static_cast<std::size_t>(oracle::below(g, 2));
    const std::size_t t = m + 1 + static_cast<std::size_t>(oracle::below(g, p == 3 && n == 2 ? 2 : 3));
    const auto rows = oracle::random_full_rank(g, p, m, t);
    const auto sys = LinearSystem::from_rows(p, rows);
    const FpSpace s(p, n);
    const auto v = oracle::random_complex(g, s.size());
    const GroupFunction f(s, v);
    const Complex expect = oracle::density(rows, t, p, n, v);
    const DensityValue d = density_direct(sys.solutions(), f);
    const DensityValue q = density_fourier(sys.solutions(), f);
    CHECK(std::abs(d.value - expect) < 1e-12);
    CHECK(std::abs(q.value - expect) < 1e-12);
    CHECK(std::abs(d.value - expect) <= d.error_bound + 1e-15);
    CHECK(d.terms == direct_term_count(sys.solutions(), s));
    CHECK(q.terms == fourier_term_count(sys.solutions(), s));
  }
}

TEST_CASE("closed forms") {
  const auto ap = four_ap();
  for (int n : {1, 2}) {
    const FpSpace s(5, n);
    CHECK(density(ap.solutions(), GroupFunction::constant(s, 0.3)) == doctest::Approx(0.3 * 0.3 * 0.3 * 0.3));
    const double zero = density(ap.solutions(), GroupFunction::zero_indicator(s));
    CHECK(zero == doctest::Approx(std::pow(5.0, -2.0 * n)));
  }
  const auto free = SolutionSpace::spanned_by(FpMatrix::from_rows(3, {{1, 0}, {0, 1}}, 2));
  auto g = oracle::stream(21);
  const FpSpace s(3, 2);
  const GroupFunction f(s, oracle::random_complex(g, s.size()));
  CHECK(std::abs(density_direct(free, f).value - f.mean() * f.mean()) < 1e-14);
  CHECK(std::abs(density_fourier(free, f).value - f.mean() * f.mean()) < 1e-14);
}

TEST_CASE("budget, domains and worker independence") {
  const auto ap = four_ap();
  const FpSpace s(5, 3);
  auto g = oracle::stream(22);
  const auto f = GroupFunction::from_real(s, oracle::random_real(g, s.size()));
  DensityOptions tight;
  tight.budget = 1000;
  CHECK_THROWS_AS(density_direct(ap.solutions(), f, tight), CapacityError);
  CHECK_THROWS_AS(density_fourier(ap.solutions(), f, tight), CapacityError);
  CHECK_THROWS_AS(density(ap.solutions(), GroupFunction::constant(FpSpace(3, 1), 1.0)), UsageError);
  DensityOptions one, many;
  many.workers = 3;
  const auto a = density_direct(ap.solutions(), f, one);
  const auto b = density_direct(ap.solutions(), f, many);
  CHECK(a.value == b.value);
  CHECK(density_fourier(ap.solutions(), f, one).value == density_fourier(ap.solutions(), f, many).value);

  const auto both = density_report(ap.solutions(), f, DensityMethod::both);
  CHECK(both.has_direct);
  CHECK(both.has_fourier);
  CHECK(both.discrepancy < 1e-12);
  const auto fourier_only = density_report(ap.solutions(), f, DensityMethod::fourier);
  CHECK_FALSE(fourier_only.has_direct);
  CHECK(fourier_only.value() == both.value_fourier);
}

TEST_CASE("tensor powers and zero-indicator scaling") {
  auto g = oracle::stream(23);
  const auto ap = four_ap();
  const FpSpace s(5, 1);
  const auto f = GroupFunction::from_real(s, oracle::random_real(g, s.size()));
  const double t = density(ap.solutions(), f);
  CHECK(density(ap.solutions(), tensor_power(f, 2)) == doctest::Approx(t * t).epsilon(1e-10));
  CHECK(std::abs(density(ap.solutions(), TensorPower(f, 3)) - t * t * t) < 1e-15);
  const double lifted = density(ap.solutions(), tensor(f, GroupFunction::zero_indicator(FpSpace(5, 1))));
  CHECK(lifted == doctest::Approx(t / 25.0).epsilon(1e-10));
}

TEST_CASE("frequency multisets of generic systems") {
  const auto ap = four_ap();
  for (int n : {1, 2}) {
    const FpSpace s(5, n);
    for (Index r = 0; r < s.size(); ++r) {
      for (Index q = 0; q < s.size(); ++q) {
        const bool li = linearly_independent(s, r, q);
        CHECK(li == (oracle::span_dimension({oracle::digits(r, 5, n), oracle::digits(q, 5, n)}, 5) == 2));
        if (!li) continue;
        auto m = frequency_multiset(ap.matrix(), s, r, q);
        std::set<Index> distinct(m.begin(), m.end()), absolute;
        for (Index h : m) {
          CHECK(h != 0);
          absolute.insert(s.abs(h));
        }
        CHECK(distinct.size() == m.size());
        CHECK(absolute.size() == m.size());
      }
    }
  }
}

TEST_CASE("P and Q split the Fourier-side sum") {
  auto g = oracle::stream(24);
  const auto ap = four_ap();
  for (int n : {1, 2}) {
    const FpSpace s(5, n);
    const DualPairTable pairs(ap.matrix(), s);
    CHECK(static_cast<double>(pairs.pairs() - pairs.independent_count()) == dependent_pair_bound(s));
    for (int trial = 0; trial < 5; ++trial) {
      const auto f = GroupFunction::from_real(s, oracle::random_real(g, s.size()));
      const FourierTable fhat = forward_transform(f);
      const PQSplit pq = pq_split(pairs, fhat);
      CHECK(std::abs(pq.P + pq.Q - density_fourier(ap.solutions(), fhat).value) < 1e-12);
      CHECK(std::abs(pq.Q) <= dependent_pair_bound(s));
      CHECK(pq.independent_pairs == pairs.independent_count());
    }
    if (n == 1) CHECK(pairs.independent_count() == 0);
  }
  CHECK_THROWS_AS(pq_split(LinearSystem::from_rows(5, {{1, 1, 1}}), forward_transform(GroupFunction::constant(FpSpace(5, 1), 1.0))),
                  UsageError);
}

TEST_CASE("commonness defect matches its expansion and the definition") {
  auto g = oracle::stream(25);
  const std::vector<oracle::Rows> systems = {
      {{1, -2, 1, 0}, {0, 1, -2, 1}},
      {{1, 1, 1}},
      {{1, 1, 0, 2, 1}, {0, 1, 1, 1, 3}},
  };
  for (const auto& rows : systems) {
    const auto sys = LinearSystem::from_rows(5, rows);
    const FpSpace s(5, 1);
    const auto v = oracle::zero_mean(oracle::random_real(g, s.size()), 0.5);
    const auto f = GroupFunction::from_real(s, v);
    const DefectReport rep = commonness_defect(sys, f);
    std::vector<Complex> plus(v.size()), minus(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      plus[i] = 0.5 + v[i];
      minus[i] = 0.5 - v[i];
    }
    const std::size_t t = sys.variables();
    const double brute = (oracle::density(rows, t, 5, 1, plus) + oracle::density(rows, t, 5, 1, minus)).real() -
                         std::ldexp(1.0, 1 - static_cast<int>(t));
    CHECK(rep.defect_direct == doctest::Approx(brute).epsilon(1e-9));
    CHECK(std::abs(rep.defect_expansion - brute) < 1e-12);
    CHECK(rep.discrepancy < 1e-12);
    for (const auto& term : rep.terms) {
      CHECK(term.columns.size() % 2 == 0);
      CHECK(term.columns.size() >= std::max<std::size_t>(2, rep.shortest_equation));
    }
  }
  const auto ap = LinearSystem::from_rows(5, systems[0]);
  CHECK_THROWS_AS(commonness_defect(ap, GroupFunction::constant(FpSpace(5, 1), 0.1)), UsageError);
  CHECK_THROWS_AS(commonness_defect(ap, GroupFunction::from_real(FpSpace(5, 1), std::vector<double>{0.8, -0.8, 0, 0, 0})),
                  UsageError);
}
