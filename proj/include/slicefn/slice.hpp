#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "slicefn/algebra.hpp"

namespace slicefn {

class RationalExpr;

/// Identifies the sphere S_y = alpha + beta S_A; beta = 0 is a real point.
struct SphereId {
  double alpha = 0.0;
  double beta = 0.0;

  bool is_real() const noexcept { return beta == 0.0; }
  Complex point() const noexcept { return {alpha, beta}; }
  friend bool operator==(const SphereId&, const SphereId&) = default;
};

inline std::string to_string(const SphereId& s) {
  return "(alpha=" + std::to_string(s.alpha) + ", beta=" + std::to_string(s.beta) + ")";
}

using StemEval = std::function<CElem(Complex)>;
using DomainPred = std::function<bool(Complex)>;

/// A stem F = F1 + ı F2 on a conjugation-symmetric domain D of C.
struct StemFn {
  StemEval eval;
  DomainPred domain;
};

enum class SliceKind { BlackBox, Rational };

/// Slice function f = I(F) over one algebra.
///
/// Values on the slice C_J are F1(z) + J F2(z). Black-box functions may carry
/// a list of known singular spheres, which quadrature uses to pick radii.
class SliceFn {
 public:
  SliceFn(std::shared_ptr<const AlgebraSpec> alg, StemFn stem, SliceKind kind = SliceKind::BlackBox,
          std::vector<SphereId> singular = {}, std::shared_ptr<const RationalExpr> rational = nullptr)
      : alg_(std::move(alg)),
        stem_(std::move(stem)),
        kind_(kind),
        singular_(std::move(singular)),
        rational_(std::move(rational)) {
    if (!stem_.domain) stem_.domain = [](Complex) { return true; };
  }

  const AlgebraSpec& algebra() const noexcept { return *alg_; }
  const std::shared_ptr<const AlgebraSpec>& algebra_ptr() const noexcept { return alg_; }
  SliceKind kind() const noexcept { return kind_; }
  const std::vector<SphereId>& known_singularities() const noexcept { return singular_; }
  const std::shared_ptr<const RationalExpr>& rational() const noexcept { return rational_; }
  const StemFn& stem_fn() const noexcept { return stem_; }

  bool in_domain(Complex z) const { return stem_.domain(z); }

  CElem stem(Complex z) const {
    if (!stem_.domain(z)) throw DomainError("point outside the domain of the stem");
    return stem_.eval(z);
  }

  /// f(p + qJ) for z = p + iq; q may be negative.
  Elem on_slice(Complex z, const Elem& J) const {
    const CElem F = stem(z);
    return F.re + alg_->mul(J, F.im);
  }

  Elem operator()(const Elem& x) const {
    const ConeDecomposition d = cone_decompose(*alg_, x);
    if (!d.in_cone) throw DomainError("point outside the quadratic cone");
    if (d.beta == 0.0) return stem(Complex(d.alpha, 0.0)).re;
    return on_slice(Complex(d.alpha, d.beta), d.J);
  }

 private:
  std::shared_ptr<const AlgebraSpec> alg_;
  StemFn stem_;
  SliceKind kind_;
  std::vector<SphereId> singular_;
  std::shared_ptr<const RationalExpr> rational_;
};

inline Elem evaluate(const SliceFn& f, const Elem& x) { return f(x); }

inline DomainPred intersect(const DomainPred& a, const DomainPred& b) {
  return [a, b](Complex z) { return a(z) && b(z); };
}

namespace detail {
inline std::vector<SphereId> merged_singularities(const SliceFn& f, const SliceFn& g) {
  auto out = f.known_singularities();
  for (const auto& s : g.known_singularities())
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  return out;
}
}  // namespace detail

// Elementary stems.

inline SliceFn constant_fn(std::shared_ptr<const AlgebraSpec> alg, const Elem& a) {
  return SliceFn(alg, {[a](Complex) { return CElem(a); }, nullptr});
}

/// f(x) = x, induced by F(alpha + i beta) = alpha + ı beta.
inline SliceFn identity_fn(std::shared_ptr<const AlgebraSpec> alg) {
  const std::size_t d = alg->dim();
  return SliceFn(alg, {[d](Complex z) { return CElem(Elem::real(d, z.real()), Elem::real(d, z.imag())); }, nullptr});
}

/// f(x) = sum_m x^m a_m.
inline SliceFn power_series_fn(std::shared_ptr<const AlgebraSpec> alg, std::vector<Elem> coeffs) {
  return SliceFn(alg, {[coeffs = std::move(coeffs)](Complex z) {
                         CElem acc(Elem::zero(coeffs.front().dim()));
                         for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
                           acc = z * acc + CElem(*it);
                         return acc;
                       },
                       nullptr});
}

// The *-algebra operations on stems.

inline SliceFn slice_sum(const SliceFn& f, const SliceFn& g) {
  auto F = f.stem_fn().eval, G = g.stem_fn().eval;
  return SliceFn(f.algebra_ptr(), {[F, G](Complex z) { return F(z) + G(z); }, intersect(f.stem_fn().domain, g.stem_fn().domain)},
                 SliceKind::BlackBox, detail::merged_singularities(f, g));
}

inline SliceFn slice_product(const SliceFn& f, const SliceFn& g) {
  auto alg = f.algebra_ptr();
  auto F = f.stem_fn().eval, G = g.stem_fn().eval;
  return SliceFn(alg, {[alg, F, G](Complex z) { return alg->mul(F(z), G(z)); }, intersect(f.stem_fn().domain, g.stem_fn().domain)},
                 SliceKind::BlackBox, detail::merged_singularities(f, g));
}

inline SliceFn conjugate_fn(const SliceFn& f) {
  auto alg = f.algebra_ptr();
  auto F = f.stem_fn().eval;
  return SliceFn(alg, {[alg, F](Complex z) { return alg->conj(F(z)); }, f.stem_fn().domain}, SliceKind::BlackBox,
                 f.known_singularities());
}

inline SliceFn normal_fn(const SliceFn& f) { return slice_product(f, conjugate_fn(f)); }

// Representation formulas.

/// f(alpha + beta I) from f(alpha + beta J) and f(alpha - beta J).
inline Elem represent(const AlgebraSpec& alg, const Elem& value_at_y, const Elem& value_at_yc, const Elem& J,
                      const Elem& I) {
  if (!in_sphere(alg, J) || !in_sphere(alg, I)) throw DomainError("representation formula needs units in S_A");
  const Elem mean = (value_at_y + value_at_yc) * 0.5;
  return mean - alg.mul(I, alg.mul(J, value_at_y - value_at_yc)) * 0.5;
}

/// Two-point variant: values at alpha + beta J and alpha + beta K, J - K invertible.
inline Elem represent(const AlgebraSpec& alg, const Elem& value_at_J, const Elem& value_at_K, const Elem& J,
                      const Elem& K, const Elem& I) {
  if (!in_sphere(alg, J) || !in_sphere(alg, K) || !in_sphere(alg, I))
    throw DomainError("representation formula needs units in S_A");
  const Elem JK = J - K;
  const Elem first = alg.mul(I - K, alg.left_divide(JK, value_at_J));
  const Elem second = alg.mul(I - J, alg.left_divide(JK, value_at_K));
  return first - second;
}

inline Elem spherical_value(const SliceFn& f, const Elem& x) {
  const auto& alg = f.algebra();
  return (f(x) + f(alg.conj(x))) * 0.5;
}

inline Elem spherical_derivative(const SliceFn& f, const Elem& x) {
  const auto& alg = f.algebra();
  const ConeDecomposition d = cone_decompose(alg, x);
  if (!d.in_cone) throw DomainError("point outside the quadratic cone");
  if (d.beta == 0.0) throw DomainError("spherical derivative is undefined at real points");
  const Elem diff = (f(x) - f(alg.conj(x))) * 0.5;
  return alg.left_divide(im_part(alg, x), diff);
}

/// Random points alpha + i beta (beta != 0) of the domain inside a box.
inline std::vector<Complex> sample_domain(const SliceFn& f, std::size_t count, std::uint64_t seed, double box = 2.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-box, box);
  std::vector<Complex> pts;
  for (std::size_t tries = 0; pts.size() < count && tries < 1000 * count; ++tries) {
    const Complex z(u(rng), u(rng));
    if (std::abs(z.imag()) > 1e-3 && f.in_domain(z) && f.in_domain(std::conj(z))) pts.push_back(z);
  }
  if (pts.size() < count) throw NumericError("could not sample the domain");
  return pts;
}

namespace detail {
// Distance of v from the plane C_J = span{1, J}, relative to |v|.
inline double off_slice(const AlgebraSpec& alg, const Elem& v, const Elem& J) {
  const Elem w = v - in_slice(Complex(v[0], 0.0), J);
  Elem rest = w;
  const double q = [&] {
    double dot = 0.0, jj = 0.0;
    for (std::size_t i = 0; i < alg.dim(); ++i) {
      dot += w[i] * J[i];
      jj += J[i] * J[i];
    }
    return dot / jj;
  }();
  rest -= J * q;
  return rest.max_abs() / (1.0 + v.max_abs());
}
}  // namespace detail

/// Samples one slice and checks f(Omega_J) in C_J and f(z^c) = f(z)^c.
inline bool is_slice_preserving(const SliceFn& f, std::size_t sample_count, std::uint64_t seed) {
  const auto& alg = f.algebra();
  std::vector<Elem> units{alg.record_unit()};
  if (alg.name() != AlgebraName::C) units.push_back(sample_sphere(alg, 1, seed + 1).front());
  for (const Elem& J : units)
    for (const Complex z : sample_domain(f, sample_count, seed)) {
      const Elem v = f.on_slice(z, J);
      if (detail::off_slice(alg, v, J) > 1e-10) return false;
      const Elem vc = f.on_slice(std::conj(z), J);
      if (rel_diff(vc, alg.conj(v)) > 1e-10) return false;
    }
  return true;
}

/// Max of |d f_l / d z-bar| over the points, with f|_{C_J} split along a
/// splitting basis and derivatives by central differences of step 1e-5.
inline double check_slice_regular(const SliceFn& f, const Elem& J, const std::vector<Complex>& points) {
  constexpr double h = 1e-5;
  const SliceSplitting split(f.algebra(), J);
  double worst = 0.0;
  for (const Complex z : points) {
    for (const Complex s : {Complex(h, 0), Complex(-h, 0), Complex(0, h), Complex(0, -h)})
      if (!f.in_domain(z + s)) throw DomainError("point too close to the domain boundary");
    const auto fa_p = split.split(f.on_slice(z + Complex(h, 0), J));
    const auto fa_m = split.split(f.on_slice(z - Complex(h, 0), J));
    const auto fb_p = split.split(f.on_slice(z + Complex(0, h), J));
    const auto fb_m = split.split(f.on_slice(z - Complex(0, h), J));
    for (std::size_t l = 0; l < fa_p.size(); ++l) {
      const Complex da = (fa_p[l] - fa_m[l]) / (2 * h);
      const Complex db = (fb_p[l] - fb_m[l]) / (2 * h);
      worst = std::max(worst, std::abs(0.5 * (da + Complex(0, 1) * db)));
    }
  }
  return worst;
}

}  // namespace slicefn
