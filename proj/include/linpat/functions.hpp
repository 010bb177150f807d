#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "linpat/fpspace.hpp"

namespace linpat {

using Complex = std::complex<double>;

/// Tolerance below which imaginary parts count as zero.
inline constexpr double kRealTolerance = 1e-12;

/// A value table on F_p^n indexed by the linear group index.
class GroupFunction {
 public:
  GroupFunction(const FpSpace& space, std::vector<Complex> values);
  static GroupFunction from_real(const FpSpace& space, std::span<const double> values);
  static GroupFunction constant(const FpSpace& space, Complex value);
  /// The indicator of {0}.
  static GroupFunction zero_indicator(const FpSpace& space);

  const FpSpace& space() const noexcept { return space_; }
  std::span<const Complex> values() const noexcept { return values_; }
  Complex operator[](Index i) const noexcept { return values_[static_cast<std::size_t>(i)]; }
  std::size_t size() const noexcept { return values_.size(); }

  bool is_real(double tol = kRealTolerance) const noexcept;
  /// All imaginary parts are exactly zero.
  bool is_exactly_real() const noexcept;
  bool is_bounded(double bound = 1.0, double tol = kRealTolerance) const noexcept { return sup_norm() <= bound + tol; }
  double sup_norm() const noexcept;
  Complex mean() const noexcept;
  std::vector<double> real_values() const;

  /// c * f + shift, pointwise.
  GroupFunction affine(double scale, double shift) const;

 private:
  FpSpace space_;
  std::vector<Complex> values_;
};

/// Coefficients h -> f^(h) = E_x f(x) e_p(x . h), indexed like GroupFunction.
class FourierTable {
 public:
  FourierTable(const FpSpace& space, std::vector<Complex> coefficients);

  const FpSpace& space() const noexcept { return space_; }
  std::span<const Complex> coefficients() const noexcept { return coeffs_; }
  Complex operator[](Index h) const noexcept { return coeffs_[static_cast<std::size_t>(h)]; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// f^(-h) = conj f^(h) for all h, within tol.
  bool is_conjugate_symmetric(double tol = 1e-10) const noexcept;
  /// sum_h |f^(h)|^2.
  double energy() const noexcept;

 private:
  FpSpace space_;
  std::vector<Complex> coeffs_;
};

enum class TransformMethod {
  direct,     ///< O(p^(2n)) character sums
  separable,  ///< n passes of length-p transforms, O(n p^(n+1))
};

/// e_p(k) = exp(2 pi i k / p) for k in [0, p).
std::vector<Complex> roots_of_unity(int p);

FourierTable forward_transform(const GroupFunction& f, TransformMethod method = TransformMethod::separable);
/// f(x) = sum_h f^(h) e_p(-x . h); the exact inverse of forward_transform.
GroupFunction inverse_transform(const FourierTable& table, TransformMethod method = TransformMethod::separable);

/// (f1 (x) f2)(x1, x2) = f1(x1) f2(x2) on F_p^(n1+n2); x1 occupies the leading coordinates.
GroupFunction tensor(const GroupFunction& f1, const GroupFunction& f2);
FourierTable tensor(const FourierTable& a, const FourierTable& b);
/// A-fold tensor power; throws CapacityError when p^(nA) exceeds the table limit.
GroupFunction tensor_power(const GroupFunction& f, unsigned exponent);

/// An A-fold tensor power that is never materialized unless it fits. Densities of the power
/// are A-th powers of densities of the base (see density.hpp).
class TensorPower {
 public:
  TensorPower(GroupFunction base, unsigned exponent);
  const GroupFunction& base() const noexcept { return base_; }
  unsigned exponent() const noexcept { return exponent_; }
  bool materializable() const noexcept;
  GroupFunction materialize() const { return tensor_power(base_, exponent_); }
  Complex mean() const;

 private:
  GroupFunction base_;
  unsigned exponent_;
};

/// Text file: "p n mode" (mode values|fourier), then p^n lines "index re [im]".
enum class TableMode { values, fourier };

struct FunctionFile {
  FpSpace space;
  TableMode mode;
  std::vector<Complex> data;

  GroupFunction to_function() const;
};

FunctionFile parse_function_file(std::istream& in);
FunctionFile load_function_file(const std::string& path);
void write_function_file(std::ostream& out, const GroupFunction& f);
void write_function_file(std::ostream& out, const FourierTable& table);

}  // namespace linpat
