#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

#include "slicefn/errors.hpp"

namespace slicefn {

inline constexpr std::size_t kMaxDim = 8;

using Complex = std::complex<double>;

/// Element of a real algebra of dimension at most 8, stored as its
/// coefficient vector over the canonical basis (index 0 is the unit).
class Elem {
 public:
  Elem() = default;
  explicit Elem(std::size_t dim) : dim_(dim) {
    if (dim == 0 || dim > kMaxDim) throw DimensionMismatch("element dimension " + std::to_string(dim));
  }
  Elem(std::initializer_list<double> values) : Elem(values.size()) {
    std::copy(values.begin(), values.end(), c_.begin());
  }
  explicit Elem(std::span<const double> values) : Elem(values.size()) {
    std::copy(values.begin(), values.end(), c_.begin());
  }

  static Elem zero(std::size_t dim) { return Elem(dim); }
  static Elem real(std::size_t dim, double r) {
    Elem e(dim);
    e.c_[0] = r;
    return e;
  }
  static Elem basis(std::size_t dim, std::size_t i) {
    Elem e(dim);
    e.c_.at(i) = 1.0;
    return e;
  }

  std::size_t dim() const noexcept { return dim_; }
  double operator[](std::size_t i) const noexcept { return c_[i]; }
  double& operator[](std::size_t i) noexcept { return c_[i]; }
  std::span<const double> coeffs() const noexcept { return {c_.data(), dim_}; }
  double scalar() const noexcept { return c_[0]; }

  /// Euclidean length of the coefficient vector.
  double euclidean() const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += c_[i] * c_[i];
    return std::sqrt(s);
  }
  double max_abs() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) m = std::max(m, std::abs(c_[i]));
    return m;
  }
  bool is_zero() const noexcept {
    for (std::size_t i = 0; i < dim_; ++i)
      if (c_[i] != 0.0) return false;
    return true;
  }

  Elem& operator+=(const Elem& o) {
    check(o);
    for (std::size_t i = 0; i < dim_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Elem& operator-=(const Elem& o) {
    check(o);
    for (std::size_t i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Elem& operator*=(double s) noexcept {
    for (std::size_t i = 0; i < dim_; ++i) c_[i] *= s;
    return *this;
  }
  Elem& operator/=(double s) noexcept {
    for (std::size_t i = 0; i < dim_; ++i) c_[i] /= s;
    return *this;
  }

  friend Elem operator+(Elem a, const Elem& b) { return a += b; }
  friend Elem operator-(Elem a, const Elem& b) { return a -= b; }
  friend Elem operator-(Elem a) noexcept { return a *= -1.0; }
  friend Elem operator*(Elem a, double s) noexcept { return a *= s; }
  friend Elem operator*(double s, Elem a) noexcept { return a *= s; }
  friend Elem operator/(Elem a, double s) noexcept { return a /= s; }
  friend bool operator==(const Elem& a, const Elem& b) noexcept {
    if (a.dim_ != b.dim_) return false;
    for (std::size_t i = 0; i < a.dim_; ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }

 private:
  void check(const Elem& o) const {
    if (o.dim_ != dim_)
      throw DimensionMismatch(std::to_string(dim_) + " vs " + std::to_string(o.dim_));
  }

  std::array<double, kMaxDim> c_{};
  std::size_t dim_ = 0;
};

/// Element re + ı·im of the complexified algebra.
struct CElem {
  Elem re;
  Elem im;

  CElem() = default;
  CElem(Elem r, Elem i) : re(std::move(r)), im(std::move(i)) {}
  explicit CElem(const Elem& r) : re(r), im(Elem::zero(r.dim())) {}

  std::size_t dim() const noexcept { return re.dim(); }

  CElem& operator+=(const CElem& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  CElem& operator-=(const CElem& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend CElem operator+(CElem a, const CElem& b) { return a += b; }
  friend CElem operator-(CElem a, const CElem& b) { return a -= b; }
  friend CElem operator-(CElem a) { return {-a.re, -a.im}; }

  /// Complex scalars live in the centre of the complexified algebra.
  friend CElem operator*(Complex s, const CElem& a) {
    return {a.re * s.real() - a.im * s.imag(), a.re * s.imag() + a.im * s.real()};
  }
};

/// Maps the complex number p + iq to p + qJ inside the slice C_J.
inline Elem in_slice(Complex z, const Elem& J) {
  Elem e = J * z.imag();
  e[0] += z.real();
  return e;
}

/// Distance between two elements in the max norm, relative to their size.
inline double rel_diff(const Elem& a, const Elem& b) {
  const double scale = std::max({1.0, a.max_abs(), b.max_abs()});
  return (a - b).max_abs() / scale;
}

}  // namespace slicefn
