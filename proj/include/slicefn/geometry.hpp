#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "slicefn/algebra.hpp"

namespace slicefn {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

namespace detail {

inline ConeDecomposition require_cone(const AlgebraSpec& alg, const Elem& x) {
  ConeDecomposition d = cone_decompose(alg, x);
  if (!d.in_cone) throw DomainError("point outside the quadratic cone");
  return d;
}

// Same slice when one point is real or the imaginary units agree up to sign.
inline bool same_slice(const AlgebraSpec& alg, const ConeDecomposition& a, const ConeDecomposition& b) {
  if (a.beta == 0.0 || b.beta == 0.0) return true;
  const double minus = alg.norm(a.J - b.J), plus = alg.norm(a.J + b.J);
  return std::min(minus, plus) <= 1e-10;
}

}  // namespace detail

/// sigma_A: |x - y| on a common slice, otherwise the distance from x to the
/// reflection of y across the real axis, measured through (re, |im|).
inline double sigma(const AlgebraSpec& alg, const Elem& x, const Elem& y) {
  const auto a = detail::require_cone(alg, x), b = detail::require_cone(alg, y);
  if (detail::same_slice(alg, a, b)) return alg.norm(x - y);
  return std::hypot(a.alpha - b.alpha, a.beta + b.beta);
}

inline double tau(const AlgebraSpec& alg, const Elem& x, const Elem& y) {
  const auto a = detail::require_cone(alg, x), b = detail::require_cone(alg, y);
  if (detail::same_slice(alg, a, b)) return alg.norm(x - y);
  return std::hypot(a.alpha - b.alpha, a.beta - b.beta);
}

/// Delta_y(x) = x^2 - x t(y) + n(y).
inline Elem delta_at(const AlgebraSpec& alg, const Elem& x, const Elem& y) {
  const auto b = detail::require_cone(alg, y);
  const double t = 2.0 * b.alpha, n = b.alpha * b.alpha + b.beta * b.beta;
  Elem out = alg.mul(x, x) - x * t;
  out[0] += n;
  return out;
}

/// Cassini pseudodistance sqrt(‖Delta_y(x)‖_A).
inline double cassini_u(const AlgebraSpec& alg, const Elem& x, const Elem& y) {
  detail::require_cone(alg, x);
  return std::sqrt(alg.norm(delta_at(alg, x, y)));
}

enum class ShellKind { SigmaShell, CassiniShell, SigmaBall, CassiniBall };

inline std::string to_string(ShellKind k) {
  switch (k) {
    case ShellKind::SigmaShell: return "sigma-shell";
    case ShellKind::CassiniShell: return "cassini-shell";
    case ShellKind::SigmaBall: return "sigma-ball";
    case ShellKind::CassiniBall: return "cassini-ball";
  }
  return "?";
}

inline ShellKind parse_shell_kind(const std::string& s) {
  if (s == "sigma-shell") return ShellKind::SigmaShell;
  if (s == "cassini-shell") return ShellKind::CassiniShell;
  if (s == "sigma-ball") return ShellKind::SigmaBall;
  if (s == "cassini-ball") return ShellKind::CassiniBall;
  throw DomainError("unknown shell kind: " + s);
}

/// Sigma-sets Sigma(y, r1, r2) and Cassini sets U(y, r1, r2). Membership
/// uses strict inequalities, so boundaries are excluded.
struct ShellSpec {
  Elem center;
  ShellKind kind = ShellKind::SigmaShell;
  double r1 = 0.0;
  double r2 = kUnbounded;

  void validate(const AlgebraSpec& alg) const {
    if (!(r1 >= 0.0) || !(r1 < r2)) throw DomainError("shell radii must satisfy 0 <= r1 < r2");
    detail::require_cone(alg, center);
  }
};

inline bool contains(const AlgebraSpec& alg, const ShellSpec& s, const Elem& x) {
  if (!cone_decompose(alg, x).in_cone) return false;
  switch (s.kind) {
    case ShellKind::SigmaShell:
      return tau(alg, x, s.center) > s.r1 && sigma(alg, x, s.center) < s.r2;
    case ShellKind::SigmaBall:
      return sigma(alg, x, s.center) < s.r2;
    case ShellKind::CassiniShell: {
      const double u = cassini_u(alg, x, s.center);
      return s.r1 < u && u < s.r2;
    }
    case ShellKind::CassiniBall:
      return cassini_u(alg, x, s.center) < s.r2;
  }
  return false;
}

struct Radii {
  double R1 = 0.0;
  double R2 = kUnbounded;
};

namespace detail {

// Least-squares slope of log ‖a‖ against the index magnitude over the
// nonzero entries; NaN when nothing is usable.
inline double log_slope(const std::vector<std::pair<double, double>>& pts) {
  if (pts.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (pts.size() == 1) return pts[0].second / pts[0].first;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

/// Estimates the radii of the limsup formulas from a truncated table.
///
/// Each limsup is replaced by the fitted decay rate of log ‖a_n‖ over the
/// stored tail half (indices K/2..K on each side); a pure power tail gives
/// the exact radius. Entries at or below `noise` times the largest norm
/// count as zero. An all-zero negative tail gives R1 = 0, an all-zero
/// positive tail gives R2 = unbounded.
inline Radii radii_from_coeffs(const AlgebraSpec& alg, const std::map<int, Elem>& coeffs, double noise = 1e-13) {
  double biggest = 0.0;
  int K_pos = 0, K_neg = 0;
  for (const auto& [n, a] : coeffs) {
    biggest = std::max(biggest, alg.norm(a));
    if (n > 0) K_pos = std::max(K_pos, n);
    if (n < 0) K_neg = std::max(K_neg, -n);
  }
  const double floor = noise * biggest;
  std::vector<std::pair<double, double>> pos, neg;
  for (const auto& [n, a] : coeffs) {
    const double v = alg.norm(a);
    if (v <= floor || v == 0.0) continue;
    if (n > 0 && 2 * n >= K_pos) pos.push_back({static_cast<double>(n), std::log(v)});
    if (n < 0 && -2 * n >= K_neg) neg.push_back({static_cast<double>(-n), std::log(v)});
  }
  Radii r;
  const double sp = detail::log_slope(pos), sn = detail::log_slope(neg);
  r.R2 = std::isnan(sp) ? kUnbounded : std::exp(-sp);
  r.R1 = std::isnan(sn) ? 0.0 : std::exp(sn);
  return r;
}

}  // namespace slicefn
