#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "slicefn/algebra.hpp"
#include "slicefn/geometry.hpp"
#include "slicefn/rational.hpp"
#include "slicefn/slice.hpp"

namespace slicefn {

inline constexpr int kDefaultK = 24;
inline constexpr int kDefaultN = 512;
inline constexpr int kMaxK = 64;
inline constexpr int kMaxN = 8192;
inline constexpr double kRadiusFloor = 1e-3;
/// Coefficients with ‖a_n‖ r^n at or below this times (1 + largest such
/// value) are treated as zero.
inline constexpr double kZeroTol = 1e-9;

struct LaurentData {
  Elem center;
  Elem J;  // slice of the quadrature
  std::map<int, Elem> coeffs;
  double r = 0.0;
  int N = 0;
  int K = 0;
  Radii est;
  bool principal_truncated = false;
};

struct SphericalPair {
  Elem u;
  Elem v;
};

struct SphericalData {
  Elem center;
  Elem J;
  std::map<int, Elem> c;
  std::map<int, SphericalPair> pairs;
  double r = 0.0;
  double rho = 0.0;  // Cassini radius reached by the circles
  int N = 0;
  int K = 0;
  Radii est;
  bool principal_truncated = false;
};

/// Zero test on radius-scaled norms: ‖a_n‖ r^n against the largest one.
/// Spherical numbers are scaled by the Cassini radius of the contour.
inline std::map<int, bool> zero_pattern(const AlgebraSpec& alg, const std::map<int, Elem>& coeffs, double r) {
  std::map<int, double> scaled;
  double biggest = 0.0;
  for (const auto& [n, a] : coeffs) {
    scaled[n] = alg.norm(a) * std::pow(r, n);
    biggest = std::max(biggest, scaled[n]);
  }
  std::map<int, bool> zero;
  for (const auto& [n, s] : scaled) zero[n] = s <= kZeroTol * (1.0 + biggest);
  return zero;
}

namespace detail {

inline void check_sizes(int K, int N) {
  if (K < 0 || K > kMaxK) throw DomainError("K must lie in [0, 64]");
  if (N < 4 || N > kMaxN) throw DomainError("N must lie in [4, 8192]");
  if (N <= 2 * K + 1) throw DomainError("N must exceed 2K + 1");
}

inline Radii nonzero_radii(const AlgebraSpec& alg, const std::map<int, Elem>& coeffs, double r) {
  const auto zero = zero_pattern(alg, coeffs, r);
  std::map<int, Elem> kept;
  for (const auto& [n, a] : coeffs)
    if (!zero.at(n)) kept.emplace(n, a);
  return radii_from_coeffs(alg, kept, 0.0);
}

// Samples f on the circle c + r e^{2 pi i j / N} of the slice C_J and
// returns (zeta_j, f_j, J f_j).
struct CircleSamples {
  std::vector<Complex> zeta;
  std::vector<Complex> unit;  // e^{2 pi i j / N}
  std::vector<Elem> f;
  std::vector<Elem> Jf;
};

inline CircleSamples sample_circle(const SliceFn& f, Complex c, double r, const Elem& J, int N) {
  const auto& alg = f.algebra();
  for (const auto& s : f.known_singularities())
    for (const Complex p : {s.point(), std::conj(s.point())})
      if (std::abs(std::abs(p - c) - r) <= 1e-9 * (1.0 + r))
        throw NumericError("quadrature circle passes through the singular sphere " + to_string(s));
  CircleSamples out;
  for (int j = 0; j < N; ++j) {
    const double th = 2.0 * std::numbers::pi * j / N;
    const Complex e(std::cos(th), std::sin(th));
    const Complex z = c + r * e;
    if (!f.in_domain(z)) throw NumericError("quadrature circle leaves the domain");
    out.zeta.push_back(z);
    out.unit.push_back(e);
    out.f.push_back(f.on_slice(z, J));
    if (!std::isfinite(out.f.back().max_abs())) throw NumericError("non-finite function value on the quadrature circle");
    out.Jf.push_back(alg.mul(J, out.f.back()));
  }
  return out;
}

// (1/N) sum_j w_j f_j with complex weights acting from the left through C_J.
inline Elem weighted_sum(const CircleSamples& s, const std::vector<Complex>& w) {
  Elem acc = Elem::zero(s.f.front().dim());
  for (std::size_t j = 0; j < w.size(); ++j) acc += s.f[j] * w[j].real() + s.Jf[j] * w[j].imag();
  return acc / static_cast<double>(w.size());
}

inline ConeDecomposition center_of(const AlgebraSpec& alg, const Elem& y) {
  ConeDecomposition d = cone_decompose(alg, y);
  if (!d.in_cone) throw DomainError("expansion center outside the quadratic cone");
  return d;
}

}  // namespace detail

/// a_n = r^{-n} ∫_0^1 e^{-2 pi n J s} f(y + r e^{2 pi J s}) ds for |n| <= K,
/// by the N-point trapezoid rule on the slice through y.
inline LaurentData laurent_coeffs(const SliceFn& f, const Elem& y, double r, int K = kDefaultK, int N = kDefaultN) {
  detail::check_sizes(K, N);
  if (!(r > 0.0)) throw DomainError("quadrature radius must be positive");
  const auto& alg = f.algebra();
  const ConeDecomposition d = detail::center_of(alg, y);
  const Complex c(d.alpha, d.beta);
  const auto s = detail::sample_circle(f, c, r, d.J, N);

  LaurentData out{y, d.J, {}, r, N, K, {}, false};
  std::vector<Complex> w(static_cast<std::size_t>(N));
  for (int n = -K; n <= K; ++n) {
    const double rn = std::pow(r, -n);
    for (int j = 0; j < N; ++j) {
      // e^{-2 pi i n j / N}, reduced mod N to keep the angle small.
      const double th = -2.0 * std::numbers::pi * static_cast<double>(((static_cast<long>(n) * j) % N + N) % N) / N;
      w[static_cast<std::size_t>(j)] = rn * Complex(std::cos(th), std::sin(th));
    }
    out.coeffs[n] = detail::weighted_sum(s, w);
  }
  const auto zero = zero_pattern(alg, out.coeffs, r);
  out.principal_truncated = K > 0 && !zero.at(-K);
  out.est = detail::nonzero_radii(alg, out.coeffs, r);
  return out;
}

/// S_{y,n}(z) on a slice: Delta^k for n = 2k, Delta^k (z - y) for n = 2k + 1.
inline Complex spherical_basis(Complex y, int n, Complex z) {
  const Complex delta = (z - y) * (z - std::conj(y));
  const int k = (n >= 0) ? n / 2 : -((-n + 1) / 2);
  Complex v = std::pow(delta, k);
  if (n - 2 * k == 1) v *= (z - y);
  return v;
}

/// Spherical numbers c_n for n in [-2K, 2K+1] and pairs (u_k, v_k) for
/// |k| <= K. The Cassini boundary is replaced by two circles of radius r
/// around y and y^c (one circle when y is real, where c_n = a_n).
inline SphericalData spherical_numbers(const SliceFn& f, const Elem& y, double r, int K = kDefaultK,
                                       int N = kDefaultN) {
  detail::check_sizes(K, N);
  if (!(r > 0.0)) throw DomainError("quadrature radius must be positive");
  const auto& alg = f.algebra();
  const ConeDecomposition d = detail::center_of(alg, y);
  const Complex c(d.alpha, d.beta);
  if (d.beta > 0.0 && r >= d.beta) throw DomainError("spherical quadrature radius must stay below |im(y)|");

  std::vector<detail::CircleSamples> circles{detail::sample_circle(f, c, r, d.J, N)};
  if (d.beta > 0.0) circles.push_back(detail::sample_circle(f, std::conj(c), r, d.J, N));

  const double rho = std::sqrt(r * r + 2.0 * d.beta * r);
  SphericalData out{y, d.J, {}, {}, r, rho, N, K, {}, false};
  std::vector<Complex> w(static_cast<std::size_t>(N));
  auto integrate = [&](auto&& weight) {
    Elem acc = alg.zero();
    for (const auto& s : circles) {
      for (int j = 0; j < N; ++j)
        w[static_cast<std::size_t>(j)] = r * s.unit[static_cast<std::size_t>(j)] * weight(s.zeta[static_cast<std::size_t>(j)]);
      acc += detail::weighted_sum(s, w);
    }
    return acc;
  };
  for (int n = -2 * K; n <= 2 * K + 1; ++n)
    out.c[n] = integrate([&](Complex z) { return 1.0 / spherical_basis(c, n + 1, z); });
  for (int k = -K; k <= K; ++k)
    out.pairs[k] = {out.c.at(2 * k + 1), out.c.at(2 * k) - alg.mul(y, out.c.at(2 * k + 1))};

  const auto zero = zero_pattern(alg, out.c, rho);
  out.principal_truncated = K > 0 && !zero.at(-2 * K);
  out.est = detail::nonzero_radii(alg, out.c, rho);
  return out;
}

/// Direct quadrature of the spherical pairs (u_k, v_k), |k| <= K.
inline std::map<int, SphericalPair> spherical_pairs_direct(const SliceFn& f, const Elem& y, double r, int K = kDefaultK,
                                                           int N = kDefaultN) {
  detail::check_sizes(K, N);
  const auto& alg = f.algebra();
  const ConeDecomposition d = detail::center_of(alg, y);
  const Complex c(d.alpha, d.beta);
  std::vector<detail::CircleSamples> circles{detail::sample_circle(f, c, r, d.J, N)};
  if (d.beta > 0.0) circles.push_back(detail::sample_circle(f, std::conj(c), r, d.J, N));
  std::map<int, SphericalPair> out;
  std::vector<Complex> wu(static_cast<std::size_t>(N)), wv(static_cast<std::size_t>(N));
  for (int k = -K; k <= K; ++k) {
    Elem u = alg.zero(), v = alg.zero();
    for (const auto& s : circles) {
      for (int j = 0; j < N; ++j) {
        const Complex z = s.zeta[static_cast<std::size_t>(j)];
        const Complex base = r * s.unit[static_cast<std::size_t>(j)] * std::pow((z - c) * (z - std::conj(c)), -k - 1);
        wu[static_cast<std::size_t>(j)] = base;
        wv[static_cast<std::size_t>(j)] = base * (z - 2.0 * c.real());
      }
      u += detail::weighted_sum(s, wu);
      v += detail::weighted_sum(s, wv);
    }
    out[k] = {u, v};
  }
  return out;
}

namespace detail {
// Slice position of x: the complex coordinate z and the unit I.
inline std::pair<Complex, Elem> slice_coords(const AlgebraSpec& alg, const Elem& x) {
  const ConeDecomposition d = cone_decompose(alg, x);
  if (!d.in_cone) throw DomainError("point outside the quadratic cone");
  return {Complex(d.alpha, d.beta), d.J};
}
}  // namespace detail

/// Truncated Laurent sum, computed on the slice of the center and carried
/// to the slice of x by the representation formula. Principal coefficients
/// below the zero threshold are dropped: inside the quadrature circle their
/// round-off would be amplified by |x - y|^n.
inline Elem eval_laurent(const AlgebraSpec& alg, const LaurentData& d, const Elem& x) {
  const auto [z, I] = detail::slice_coords(alg, x);
  const Complex c(re_part(alg, d.center), alg.norm(im_part(alg, d.center)));
  const auto zero = zero_pattern(alg, d.coeffs, d.r);
  auto on_slice = [&](Complex w) {
    Elem acc = alg.zero();
    for (const auto& [n, a] : d.coeffs)
      if (n >= 0 || !zero.at(n)) acc += alg.mul(in_slice(std::pow(w - c, n), d.J), a);
    return acc;
  };
  if (z.imag() == 0.0) return on_slice(z);
  return represent(alg, on_slice(z), on_slice(std::conj(z)), d.J, I);
}

/// sum_k Delta_y^k(x) (x u_k + v_k), skipping principal pairs whose
/// spherical numbers are both below the zero threshold.
inline Elem eval_spherical(const AlgebraSpec& alg, const SphericalData& d, const Elem& x) {
  const auto [z, I] = detail::slice_coords(alg, x);
  const Complex c(re_part(alg, d.center), alg.norm(im_part(alg, d.center)));
  const Complex delta = (z - c) * (z - std::conj(c));
  const auto zero = zero_pattern(alg, d.c, d.rho);
  auto is_zero = [&](int n) {
    const auto it = zero.find(n);
    return it == zero.end() || it->second;
  };
  Elem acc = alg.zero();
  for (const auto& [k, p] : d.pairs)
    if (k >= 0 || !is_zero(2 * k) || !is_zero(2 * k + 1))
      acc += alg.mul(in_slice(std::pow(delta, k), I), alg.mul(x, p.u) + p.v);
  return acc;
}

/// Moves the expansion point within its sphere: c'_{2k} = c_{2k} + (y' - y) c_{2k+1}.
inline SphericalData recenter_spherical(const AlgebraSpec& alg, const SphericalData& d, const Elem& y_new) {
  // The tolerance applies to u^2: u itself carries sqrt(eps) round-off.
  if (!cone_decompose(alg, y_new).in_cone || alg.norm(delta_at(alg, y_new, d.center)) > 1e-9)
    throw DomainError("new center does not lie on the sphere of the old one");
  SphericalData out = d;
  out.center = y_new;
  out.J = cone_decompose(alg, y_new).J;
  const Elem shift = y_new - d.center;
  for (auto& [n, c] : out.c) {
    if (n % 2 != 0) continue;
    const auto odd = d.c.find(n + 1);
    if (odd != d.c.end()) c = d.c.at(n) + alg.mul(shift, odd->second);
  }
  return out;
}

/// Default Laurent radius: half the distance on the slice to the nearest
/// other singular point, 1 if there is none, at least 1e-3.
inline double default_laurent_radius(const SliceFn& f, const Elem& y) {
  const auto& alg = f.algebra();
  const ConeDecomposition d = detail::center_of(alg, y);
  const Complex c(d.alpha, d.beta);
  double best = kUnbounded;
  for (const auto& s : f.known_singularities())
    for (const Complex p : {s.point(), std::conj(s.point())}) {
      const double dist = std::abs(p - c);
      if (dist > 1e-9 * (1.0 + std::abs(c))) best = std::min(best, dist);
    }
  return std::isinf(best) ? 1.0 : std::max(kRadiusFloor, 0.5 * best);
}

/// Default spherical radius. The Cassini radius rho is half the Cassini
/// distance to the nearest other singular sphere; circles of radius
/// sqrt(beta^2 + rho^2) - beta stay inside U(y, rho). Capped at beta / 2
/// for non-real y.
inline double default_spherical_radius(const SliceFn& f, const Elem& y) {
  const auto& alg = f.algebra();
  const ConeDecomposition d = detail::center_of(alg, y);
  const Complex c(d.alpha, d.beta);
  double rho = kUnbounded;
  // The sphere of y itself is skipped by comparing sphere parameters: u
  // carries sqrt(eps) round-off and cannot be tested against a small bound.
  for (const auto& s : f.known_singularities())
    if (!same_sphere(s, SphereId{d.alpha, d.beta})) rho = std::min(rho, 0.5 * std::sqrt(cassini_sq(c, s)));
  if (d.beta == 0.0) return std::isinf(rho) ? 1.0 : std::max(kRadiusFloor, rho);
  double r = 0.5 * d.beta;
  if (!std::isinf(rho)) r = std::min(r, std::sqrt(d.beta * d.beta + rho * rho) - d.beta);
  return std::max(std::min(kRadiusFloor, 0.5 * d.beta), r);
}

}  // namespace slicefn
