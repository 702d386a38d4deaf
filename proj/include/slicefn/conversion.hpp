#pragma once

#include <cmath>
#include <cstdint>
#include <map>

#include "slicefn/algebra.hpp"
#include "slicefn/expansions.hpp"

namespace slicefn {

__extension__ typedef __int128 int128;

/// Generalized binomial a(a-1)...(a-k+1)/k!, zero for k < 0. Exact; throws
/// NumericError when the value leaves the 64-bit range.
inline std::int64_t gen_binom(std::int64_t a, std::int64_t k) {
  if (k < 0) return 0;
  int128 v = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    // v * (a - i) / (i + 1) stays integral: it is binom(a, i + 1).
    v = v * (a - i);
    v /= (i + 1);
    if (v > INT64_MAX || v < INT64_MIN) throw NumericError("binomial coefficient overflows 64 bits");
  }
  return static_cast<std::int64_t>(v);
}

/// Same value as a double; exact while it fits in 64 bits.
inline double gen_binom_real(std::int64_t a, std::int64_t k) {
  try {
    return static_cast<double>(gen_binom(a, k));
  } catch (const NumericError&) {
    double v = 1.0;
    for (std::int64_t i = 0; i < k; ++i) v = v * static_cast<double>(a - i) / static_cast<double>(i + 1);
    return v;
  }
}

namespace detail {

// Principal coefficients below the zero threshold become exact zeros, which
// realizes the finite-principal-part precondition of the conversion sums.
// The regular part is kept as computed.
inline std::map<int, Elem> cleaned(const AlgebraSpec& alg, const std::map<int, Elem>& c, double r) {
  const auto zero = zero_pattern(alg, c, r);
  std::map<int, Elem> out;
  for (const auto& [n, v] : c) out.emplace(n, n < 0 && zero.at(n) ? alg.zero() : v);
  return out;
}

inline Elem at(const std::map<int, Elem>& m, int n, const AlgebraSpec& alg) {
  const auto it = m.find(n);
  return it == m.end() ? alg.zero() : it->second;
}

// delta^e b with delta = y - y^c = 2 beta J in C_J acting from the left.
inline Elem left_power(const AlgebraSpec& alg, Complex delta, int e, double scale, const Elem& J, const Elem& b) {
  return alg.mul(in_slice(scale * std::pow(delta, e), J), b);
}

}  // namespace detail

/// Laurent coefficients at y from spherical numbers at y:
/// a_n = sum_{m <= n} d^{2m-n-1} (C(m-1, n-m) c_{2m-1} + C(m, n-m) d c_{2m}),
/// d = y - y^c. For real y the two expansions coincide.
inline LaurentData a_from_c(const AlgebraSpec& alg, const SphericalData& s) {
  const ConeDecomposition d = cone_decompose(alg, s.center);
  LaurentData out{s.center, s.J, {}, s.r, s.N, s.K, {}, false};
  const auto c = detail::cleaned(alg, s.c, s.rho);
  if (d.beta == 0.0) {
    for (int n = -s.K; n <= s.K; ++n) out.coeffs[n] = detail::at(c, n, alg);
  } else {
    const Complex delta(0.0, 2.0 * d.beta);
    const int lowest = c.empty() ? 0 : c.begin()->first;
    const int m_min = (lowest >= 0 ? (lowest + 1) / 2 : -((-lowest) / 2)) - 1;
    for (int n = -s.K; n <= s.K; ++n) {
      Elem acc = alg.zero();
      for (int m = m_min; m <= n; ++m) {
        const Elem odd = detail::at(c, 2 * m - 1, alg), even = detail::at(c, 2 * m, alg);
        if (!odd.is_zero())
          acc += detail::left_power(alg, delta, 2 * m - n - 1, gen_binom_real(m - 1, n - m), s.J, odd);
        if (!even.is_zero())
          acc += detail::left_power(alg, delta, 2 * m - n, gen_binom_real(m, n - m), s.J, even);
      }
      out.coeffs[n] = acc;
    }
  }
  const auto zero = zero_pattern(alg, out.coeffs, s.r);
  out.principal_truncated = s.K > 0 && !zero.at(-s.K);
  out.est = detail::nonzero_radii(alg, out.coeffs, s.r);
  return out;
}

/// Spherical numbers at y from the Laurent coefficients a at y and b at y^c:
///   c_{2m}   = sum_{l <= m} d^{l-2m-1} (C(-m, m-l) d a_l + (-1)^{l-1} C(-m-1, m-l) b_{l-1}),
///   c_{2m+1} = sum_{l <= m} d^{l-2m-1} C(-m-1, m-l) (a_l + (-1)^{l-1} b_l).
/// For real y, a = b = c.
inline SphericalData c_from_ab(const AlgebraSpec& alg, const LaurentData& a, const LaurentData& b) {
  const ConeDecomposition d = cone_decompose(alg, a.center);
  const int K = std::min(a.K, b.K);
  SphericalData out{a.center, a.J, {}, {}, a.r, a.r, a.N, K, {}, false};
  const auto A = detail::cleaned(alg, a.coeffs, a.r);
  const auto B = detail::cleaned(alg, b.coeffs, b.r);
  if (d.beta == 0.0) {
    for (int n = -K; n <= K; ++n) {
      const Elem an = detail::at(A, n, alg), bn = detail::at(B, n, alg);
      if (rel_diff(an, bn) > 1e-8) throw NumericError("Laurent data at a real center must agree on both sides");
      out.c[n] = an;
    }
  } else {
    // The coefficients b_n do not depend on which unit parametrizes y^c.
    const auto& Bs = B;
    const Complex delta(0.0, 2.0 * d.beta);
    const int lowest = std::min(A.empty() ? 0 : A.begin()->first, Bs.empty() ? 0 : Bs.begin()->first);
    for (int m = -K; m <= K; ++m) {
      Elem even = alg.zero(), odd = alg.zero();
      for (int l = lowest; l <= m; ++l) {
        const double sign = ((l - 1) % 2 == 0) ? 1.0 : -1.0;
        const Elem al = detail::at(A, l, alg), bl = detail::at(Bs, l, alg), blm = detail::at(Bs, l - 1, alg);
        if (!al.is_zero())
          even += detail::left_power(alg, delta, l - 2 * m, gen_binom_real(-m, m - l), a.J, al);
        if (!blm.is_zero())
          even += detail::left_power(alg, delta, l - 2 * m - 1, sign * gen_binom_real(-m - 1, m - l), a.J, blm);
        const Elem sum = al + bl * sign;
        if (!sum.is_zero()) odd += detail::left_power(alg, delta, l - 2 * m - 1, gen_binom_real(-m - 1, m - l), a.J, sum);
      }
      out.c[2 * m] = even;
      out.c[2 * m + 1] = odd;
    }
  }
  for (int k = -K; k <= K; ++k)
    if (out.c.count(2 * k) && out.c.count(2 * k + 1))
      out.pairs[k] = {out.c.at(2 * k + 1), out.c.at(2 * k) - alg.mul(a.center, out.c.at(2 * k + 1))};
  out.rho = std::sqrt(a.r * a.r + 2.0 * d.beta * a.r);
  const auto zero = zero_pattern(alg, out.c, out.rho);
  out.principal_truncated = K > 0 && out.c.count(-2 * K) && !zero.at(-2 * K);
  out.est = detail::nonzero_radii(alg, out.c, out.rho);
  return out;
}

}  // namespace slicefn
