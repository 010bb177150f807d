#include <sstream>

#include "doctest.h"
#include "linpat/errors.hpp"
#include "linpat/functions.hpp"
#include "oracles.hpp"

using namespace linpat;

namespace {

double max_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("forward transform matches the naive character sum") {
  auto g = oracle::stream(10);
  for (auto [p, n] : {std::pair{3, 1}, std::pair{3, 3}, std::pair{5, 2}, std::pair{7, 2}}) {
    const FpSpace s(p, n);
    const auto v = oracle::random_complex(g, s.size());
    const GroupFunction f(s, v);
    const auto expect = oracle::dft(v, p, n);
    for (auto method : {TransformMethod::direct, TransformMethod::separable}) {
      const FourierTable t = forward_transform(f, method);
      CHECK(max_diff(t.coefficients(), expect) < 1e-12);
      CHECK(max_diff(inverse_transform(t, method).values(), v) < 1e-12);
    }
  }
}

TEST_CASE("transform properties") {
  auto g = oracle::stream(11);
  const FpSpace s(5, 2);
  const auto real = GroupFunction::from_real(s, oracle::random_real(g, s.size()));
  const FourierTable t = forward_transform(real);
  CHECK(t.is_conjugate_symmetric());
  double energy = 0.0;
  for (const Complex& z : real.values()) energy += std::norm(z);
  CHECK(t.energy() == doctest::Approx(energy / static_cast<double>(s.size())).epsilon(1e-12));
  CHECK(std::abs(t[0] - real.mean()) < 1e-14);

  const auto delta = forward_transform(GroupFunction::zero_indicator(s));
  for (const Complex& z : delta.coefficients()) CHECK(std::abs(z - 1.0 / 25.0) < 1e-15);
  const auto w = roots_of_unity(5);
  CHECK(std::abs(std::pow(w[1], 5) - 1.0) < 1e-14);
}

TEST_CASE("tensor products") {
  auto g = oracle::stream(12);
  const FpSpace a(3, 1), b(3, 2);
  const GroupFunction f(a, oracle::random_complex(g, a.size()));
  const GroupFunction h(b, oracle::random_complex(g, b.size()));
  const GroupFunction fh = tensor(f, h);
  CHECK(fh.space() == FpSpace(3, 3));
  for (Index i = 0; i < a.size(); ++i) {
    for (Index j = 0; j < b.size(); ++j) CHECK(fh[i * b.size() + j] == f[i] * h[j]);
  }
  CHECK(max_diff(forward_transform(fh).coefficients(),
                 tensor(forward_transform(f), forward_transform(h)).coefficients()) < 1e-13);
  CHECK_THROWS_AS(tensor(f, GroupFunction::constant(FpSpace(5, 1), 1.0)), UsageError);
  CHECK(tensor_power(f, 3).space() == FpSpace(3, 3));
  CHECK_THROWS_AS(tensor_power(f, 0), UsageError);
  CHECK_THROWS_AS(tensor_power(h, 9), CapacityError);
  const TensorPower big(h, 20);
  CHECK_FALSE(big.materializable());
  CHECK(TensorPower(f, 2).materializable());
  CHECK(std::abs(TensorPower(f, 3).mean() - std::pow(f.mean(), 3)) < 1e-15);
}

TEST_CASE("function basics") {
  const FpSpace s(5, 1);
  CHECK_THROWS_AS(GroupFunction(s, std::vector<Complex>(4)), UsageError);
  const auto c = GroupFunction::constant(s, 0.25);
  CHECK(c.mean() == Complex(0.25));
  CHECK(c.is_exactly_real());
  CHECK(c.sup_norm() == 0.25);
  const auto shifted = c.affine(-2.0, 0.5);
  CHECK(shifted[3] == Complex(0.0));
  GroupFunction z(s, {1.0, Complex(0.0, 1e-13), 0.0, 0.0, 0.0});
  CHECK(z.is_real());
  CHECK_FALSE(z.is_exactly_real());
  CHECK_FALSE(z.is_bounded(0.5));
}

TEST_CASE("function files") {
  auto g = oracle::stream(13);
  const FpSpace s(3, 2);
  const auto real = GroupFunction::from_real(s, oracle::random_real(g, s.size()));
  std::stringstream out;
  write_function_file(out, real);
  const FunctionFile back = parse_function_file(out);
  CHECK(back.mode == TableMode::values);
  CHECK(max_diff(back.to_function().values(), real.values()) == 0.0);

  const FourierTable t = forward_transform(real);
  std::stringstream fout;
  write_function_file(fout, t);
  const FunctionFile fback = parse_function_file(fout);
  CHECK(fback.mode == TableMode::fourier);
  CHECK(max_diff(fback.to_function().values(), real.values()) < 1e-12);

  auto line_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_function_file(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("3 1 values\n0 1\n1 1\n1 1\n") == 4);
  CHECK(line_of("3 1 values\n0 1\n1 1\n7 1\n") == 4);
  CHECK(line_of("3 1 table\n") == 1);
  CHECK(line_of("4 1 values\n") == 1);
  CHECK(line_of("3 1 values\n0 1\n1 1\n") == 4);
  CHECK(line_of("3 1 values\n0 1\n1 1\n2 1\n0 1\n") == 5);
  CHECK(line_of("3 1 values\n0 1 2 3\n") == 2);
  CHECK(line_of("3 1 values\n0 1\n1 1\n2 1 # real\n") == 0);
  CHECK_THROWS_AS(load_function_file("/nonexistent"), UsageError);
}
