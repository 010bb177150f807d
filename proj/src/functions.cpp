#include "linpat/functions.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "linpat/errors.hpp"

namespace linpat {

GroupFunction::GroupFunction(const FpSpace& space, std::vector<Complex> values)
    : space_(space), values_(std::move(values)) {
  if (values_.size() != space_.table_size()) {
    throw UsageError("function table has " + std::to_string(values_.size()) + " entries, expected " +
                     std::to_string(space_.size()));
  }
}

GroupFunction GroupFunction::from_real(const FpSpace& space, std::span<const double> values) {
  return GroupFunction(space, std::vector<Complex>(values.begin(), values.end()));
}

GroupFunction GroupFunction::constant(const FpSpace& space, Complex value) {
  return GroupFunction(space, std::vector<Complex>(space.table_size(), value));
}

GroupFunction GroupFunction::zero_indicator(const FpSpace& space) {
  std::vector<Complex> v(space.table_size(), 0.0);
  v[0] = 1.0;
  return GroupFunction(space, std::move(v));
}

bool GroupFunction::is_real(double tol) const noexcept {
  for (const Complex& z : values_) {
    if (std::abs(z.imag()) > tol) return false;
  }
  return true;
}

bool GroupFunction::is_exactly_real() const noexcept {
  for (const Complex& z : values_) {
    if (z.imag() != 0.0) return false;
  }
  return true;
}

double GroupFunction::sup_norm() const noexcept {
  double m = 0.0;
  for (const Complex& z : values_) m = std::max(m, std::abs(z));
  return m;
}

Complex GroupFunction::mean() const noexcept {
  Complex s = 0.0;
  for (const Complex& z : values_) s += z;
  return s / static_cast<double>(values_.size());
}

std::vector<double> GroupFunction::real_values() const {
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i].real();
  return out;
}

GroupFunction GroupFunction::affine(double scale, double shift) const {
  std::vector<Complex> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = scale * values_[i] + shift;
  return GroupFunction(space_, std::move(v));
}

FourierTable::FourierTable(const FpSpace& space, std::vector<Complex> coefficients)
    : space_(space), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != space_.table_size()) throw UsageError("Fourier table has the wrong number of entries");
}

bool FourierTable::is_conjugate_symmetric(double tol) const noexcept {
  for (Index h = 0; h < coeffs_.size(); ++h) {
    if (std::abs(coeffs_[space_.negate(h)] - std::conj(coeffs_[h])) > tol) return false;
  }
  return true;
}

double FourierTable::energy() const noexcept {
  double s = 0.0;
  for (const Complex& z : coeffs_) s += std::norm(z);
  return s;
}

std::vector<Complex> roots_of_unity(int p) {
  std::vector<Complex> w(static_cast<std::size_t>(p));
  for (int k = 0; k < p; ++k) w[static_cast<std::size_t>(k)] = std::polar(1.0, 2.0 * std::numbers::pi * k / p);
  return w;
}

namespace {

// sign = +1 computes sum_x v(x) e_p(x.h), sign = -1 uses e_p(-x.h). No normalization.
std::vector<Complex> character_sum(const FpSpace& space, std::span<const Complex> in, int sign, TransformMethod method) {
  const int p = space.prime();
  const std::size_t N = space.table_size();
  const auto w = roots_of_unity(p);
  if (method == TransformMethod::direct) {
    std::vector<Complex> out(N);
    for (Index h = 0; h < N; ++h) {
      Complex acc = 0.0;
      for (Index x = 0; x < N; ++x) acc += in[x] * w[static_cast<std::size_t>(mod_p(sign * space.dot(x, h), p))];
      out[h] = acc;
    }
    return out;
  }
  std::vector<Complex> cur(in.begin(), in.end());
  std::vector<Complex> line(static_cast<std::size_t>(p));
  for (int axis = 0; axis < space.dim(); ++axis) {
    const Index stride = space.weight(axis);
    const Index block = stride * static_cast<Index>(p);
    for (Index base = 0; base < N; base += block) {
      for (Index off = 0; off < stride; ++off) {
        const Index start = base + off;
        for (int k = 0; k < p; ++k) {
          Complex acc = 0.0;
          for (int j = 0; j < p; ++j) {
            acc += cur[start + static_cast<Index>(j) * stride] *
                   w[static_cast<std::size_t>(mod_p(static_cast<std::int64_t>(sign) * j * k, p))];
          }
          line[static_cast<std::size_t>(k)] = acc;
        }
        for (int k = 0; k < p; ++k) cur[start + static_cast<Index>(k) * stride] = line[static_cast<std::size_t>(k)];
      }
    }
  }
  return cur;
}

}  // namespace

FourierTable forward_transform(const GroupFunction& f, TransformMethod method) {
  auto c = character_sum(f.space(), f.values(), +1, method);
  const double inv = 1.0 / static_cast<double>(c.size());
  for (Complex& z : c) z *= inv;
  return FourierTable(f.space(), std::move(c));
}

GroupFunction inverse_transform(const FourierTable& table, TransformMethod method) {
  return GroupFunction(table.space(), character_sum(table.space(), table.coefficients(), -1, method));
}

namespace {

std::vector<Complex> kron(std::span<const Complex> a, std::span<const Complex> b) {
  std::vector<Complex> out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  }
  return out;
}

FpSpace joined(const FpSpace& a, const FpSpace& b) {
  if (a.prime() != b.prime()) throw UsageError("tensor product of functions over different primes");
  const FpSpace s(a.prime(), a.dim() + b.dim());
  s.table_size();
  return s;
}

}  // namespace

GroupFunction tensor(const GroupFunction& f1, const GroupFunction& f2) {
  const FpSpace s = joined(f1.space(), f2.space());
  return GroupFunction(s, kron(f1.values(), f2.values()));
}

FourierTable tensor(const FourierTable& a, const FourierTable& b) {
  const FpSpace s = joined(a.space(), b.space());
  return FourierTable(s, kron(a.coefficients(), b.coefficients()));
}

GroupFunction tensor_power(const GroupFunction& f, unsigned exponent) {
  if (exponent == 0) throw UsageError("tensor power exponent must be positive");
  const FpSpace target(f.space().prime(), f.space().dim() * static_cast<int>(exponent));
  target.table_size();
  GroupFunction out = f;
  for (unsigned i = 1; i < exponent; ++i) out = tensor(out, f);
  return out;
}

TensorPower::TensorPower(GroupFunction base, unsigned exponent) : base_(std::move(base)), exponent_(exponent) {
  if (exponent_ == 0) throw UsageError("tensor power exponent must be positive");
}

bool TensorPower::materializable() const noexcept {
  const double log_size = static_cast<double>(base_.space().dim()) * exponent_ * std::log2(base_.space().prime());
  return log_size <= std::log2(static_cast<double>(kMaxTableSize));
}

Complex TensorPower::mean() const { return std::pow(base_.mean(), static_cast<int>(exponent_)); }

GroupFunction FunctionFile::to_function() const {
  if (mode == TableMode::values) return GroupFunction(space, data);
  return inverse_transform(FourierTable(space, data));
}

FunctionFile parse_function_file(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, raw)) {
      ++line_no;
      out = raw.substr(0, raw.find('#'));
      if (out.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  std::string line;
  if (!next_line(line)) throw ParseError(line_no + 1, "missing header 'p n mode'");
  std::istringstream hs(line);
  long long p = 0, n = 0;
  std::string mode_name, extra;
  if (!(hs >> p >> n >> mode_name) || (hs >> extra)) throw ParseError(line_no, "header must be 'p n mode'");
  TableMode mode;
  if (mode_name == "values") {
    mode = TableMode::values;
  } else if (mode_name == "fourier") {
    mode = TableMode::fourier;
  } else {
    throw ParseError(line_no, "mode must be 'values' or 'fourier', got '" + mode_name + "'");
  }
  if (p < 3 || p > 46337 || !is_prime(p)) throw ParseError(line_no, "p must be an odd prime");
  if (n < 1 || n > 64) throw ParseError(line_no, "n must be positive");
  FpSpace space(static_cast<int>(p), static_cast<int>(n));
  std::size_t N = 0;
  try {
    N = space.table_size();
  } catch (const CapacityError& e) {
    throw ParseError(line_no, e.what());
  }
  std::vector<Complex> data(N);
  std::vector<bool> seen(N, false);
  for (std::size_t k = 0; k < N; ++k) {
    if (!next_line(line)) throw ParseError(line_no + 1, "expected " + std::to_string(N) + " entries, got " + std::to_string(k));
    std::istringstream ls(line);
    long long idx = -1;
    double re = 0.0, im = 0.0;
    if (!(ls >> idx >> re)) throw ParseError(line_no, "expected 'index re [im]'");
    if (!(ls >> im)) im = 0.0;
    if (ls >> extra) throw ParseError(line_no, "too many fields");
    if (idx < 0 || static_cast<std::size_t>(idx) >= N) throw ParseError(line_no, "index out of range");
    if (seen[static_cast<std::size_t>(idx)]) throw ParseError(line_no, "duplicate index " + std::to_string(idx));
    seen[static_cast<std::size_t>(idx)] = true;
    data[static_cast<std::size_t>(idx)] = Complex(re, im);
  }
  if (next_line(line)) throw ParseError(line_no, "unexpected data after the last entry");
  return FunctionFile{space, mode, std::move(data)};
}

FunctionFile load_function_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open function file '" + path + "'");
  return parse_function_file(in);
}

namespace {

void write_table(std::ostream& out, const FpSpace& space, const char* mode, std::span<const Complex> data) {
  bool real = true;
  for (const Complex& z : data) real = real && z.imag() == 0.0;
  out << space.prime() << ' ' << space.dim() << ' ' << mode << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << i << ' ' << data[i].real();
    if (!real) out << ' ' << data[i].imag();
    out << '\n';
  }
}

}  // namespace

void write_function_file(std::ostream& out, const GroupFunction& f) { write_table(out, f.space(), "values", f.values()); }

void write_function_file(std::ostream& out, const FourierTable& table) {
  write_table(out, table.space(), "fourier", table.coefficients());
}

}  // namespace linpat
