#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "slicefn/algebra.hpp"
#include "slicefn/slice.hpp"

namespace slicefn {

/// Real-coefficient polynomial sum_m c[m] x^m.
struct RealPoly {
  std::vector<double> c;

  RealPoly() = default;
  explicit RealPoly(std::vector<double> coeffs) : c(std::move(coeffs)) { trim(); }

  static RealPoly one() { return RealPoly({1.0}); }

  void trim() {
    while (!c.empty() && c.back() == 0.0) c.pop_back();
  }
  bool is_zero() const noexcept { return c.empty(); }
  int degree() const noexcept { return static_cast<int>(c.size()) - 1; }
  double leading() const { return c.back(); }

  Complex operator()(Complex z) const {
    Complex acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  RealPoly derivative() const {
    std::vector<double> d;
    for (std::size_t m = 1; m < c.size(); ++m) d.push_back(static_cast<double>(m) * c[m]);
    return RealPoly(std::move(d));
  }

  friend RealPoly operator+(const RealPoly& a, const RealPoly& b) {
    std::vector<double> s(std::max(a.c.size(), b.c.size()), 0.0);
    for (std::size_t m = 0; m < a.c.size(); ++m) s[m] += a.c[m];
    for (std::size_t m = 0; m < b.c.size(); ++m) s[m] += b.c[m];
    return RealPoly(std::move(s));
  }
  friend RealPoly operator*(const RealPoly& a, const RealPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> p(a.c.size() + b.c.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c.size(); ++i)
      for (std::size_t j = 0; j < b.c.size(); ++j) p[i + j] += a.c[i] * b.c[j];
    return RealPoly(std::move(p));
  }
  friend bool operator==(const RealPoly&, const RealPoly&) = default;
};

/// x^2 - 2 alpha x + alpha^2 + beta^2.
inline RealPoly delta_real(const SphereId& s) {
  return RealPoly({s.alpha * s.alpha + s.beta * s.beta, -2.0 * s.alpha, 1.0});
}

/// Factor of a real polynomial attached to a sphere: Delta_y for beta > 0,
/// x - alpha for a real point.
inline RealPoly sphere_factor(const SphereId& s) {
  return s.is_real() ? RealPoly({-s.alpha, 1.0}) : delta_real(s);
}

/// Star polynomial sum_m x^m a_m with coefficients in A.
class StarPoly {
 public:
  StarPoly() = default;
  StarPoly(std::size_t dim, std::vector<Elem> coeffs) : dim_(dim), a_(std::move(coeffs)) {
    for (const auto& e : a_)
      if (e.dim() != dim_) throw DimensionMismatch("polynomial coefficient");
    trim();
  }

  static StarPoly constant(const Elem& a) { return StarPoly(a.dim(), {a}); }
  static StarPoly from_real(std::size_t dim, const RealPoly& p) {
    std::vector<Elem> a;
    for (double v : p.c) a.push_back(Elem::real(dim, v));
    return StarPoly(dim, std::move(a));
  }
  /// x - y.
  static StarPoly linear(const Elem& y) { return StarPoly(y.dim(), {-y, Elem::real(y.dim(), 1.0)}); }

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Elem>& coeffs() const noexcept { return a_; }
  int degree() const noexcept { return static_cast<int>(a_.size()) - 1; }
  bool is_zero() const noexcept { return a_.empty(); }
  const Elem& operator[](std::size_t m) const { return a_[m]; }

  double max_coeff() const {
    double m = 0.0;
    for (const auto& e : a_) m = std::max(m, e.max_abs());
    return m;
  }

  /// Stem value sum_m z^m a_m in A_C.
  CElem stem(Complex z) const {
    CElem acc(Elem::zero(dim_));
    for (auto it = a_.rbegin(); it != a_.rend(); ++it) acc = z * acc + CElem(*it);
    return acc;
  }

  friend StarPoly operator+(const StarPoly& p, const StarPoly& q) {
    const std::size_t d = std::max(p.dim_, q.dim_);
    std::vector<Elem> s(std::max(p.a_.size(), q.a_.size()), Elem::zero(d));
    for (std::size_t m = 0; m < p.a_.size(); ++m) s[m] += p.a_[m];
    for (std::size_t m = 0; m < q.a_.size(); ++m) s[m] += q.a_[m];
    return StarPoly(d, std::move(s));
  }
  friend StarPoly operator-(const StarPoly& p) {
    std::vector<Elem> s;
    for (const auto& e : p.a_) s.push_back(-e);
    return StarPoly(p.dim_, std::move(s));
  }
  friend StarPoly operator*(double s, const StarPoly& p) {
    std::vector<Elem> out;
    for (const auto& e : p.a_) out.push_back(e * s);
    return StarPoly(p.dim_, std::move(out));
  }

 private:
  void trim() {
    while (!a_.empty() && a_.back().is_zero()) a_.pop_back();
  }

  std::size_t dim_ = 1;
  std::vector<Elem> a_;
};

/// Star product: coefficient convolution c_k = sum_{i+j=k} a_i b_j.
inline StarPoly star_mul(const AlgebraSpec& alg, const StarPoly& p, const StarPoly& q) {
  if (p.is_zero() || q.is_zero()) return StarPoly(alg.dim(), {});
  std::vector<Elem> c(p.coeffs().size() + q.coeffs().size() - 1, alg.zero());
  for (std::size_t i = 0; i < p.coeffs().size(); ++i)
    for (std::size_t j = 0; j < q.coeffs().size(); ++j) c[i + j] += alg.mul(p[i], q[j]);
  return StarPoly(alg.dim(), std::move(c));
}

inline StarPoly poly_add(const StarPoly& p, const StarPoly& q) { return p + q; }
inline StarPoly poly_star_mul(const AlgebraSpec& alg, const StarPoly& p, const StarPoly& q) {
  return star_mul(alg, p, q);
}

inline StarPoly conj(const AlgebraSpec& alg, const StarPoly& p) {
  std::vector<Elem> c;
  for (const auto& e : p.coeffs()) c.push_back(alg.conj(e));
  return StarPoly(alg.dim(), std::move(c));
}

/// Real polynomial times star polynomial (the real factor is central).
inline StarPoly scale(const RealPoly& r, const StarPoly& p) {
  if (r.is_zero() || p.is_zero()) return StarPoly(p.dim(), {});
  std::vector<Elem> c(r.c.size() + p.coeffs().size() - 1, Elem::zero(p.dim()));
  for (std::size_t i = 0; i < r.c.size(); ++i)
    for (std::size_t j = 0; j < p.coeffs().size(); ++j) c[i + j] += p[j] * r.c[i];
  return StarPoly(p.dim(), std::move(c));
}

/// Delta_y(x) = x^2 - 2 alpha x + (alpha^2 + beta^2) as a star polynomial.
inline StarPoly delta_poly(std::size_t dim, const SphereId& s) { return StarPoly::from_real(dim, delta_real(s)); }

/// Long division by a monic real polynomial: p = q d + r with deg r < deg d.
inline std::pair<StarPoly, StarPoly> divmod(const StarPoly& p, const RealPoly& d) {
  const int n = p.degree(), k = d.degree();
  if (k < 0) throw DomainError("division by the zero polynomial");
  if (n < k) return {StarPoly(p.dim(), {}), p};
  std::vector<Elem> rem(p.coeffs());
  std::vector<Elem> quot(static_cast<std::size_t>(n - k + 1), Elem::zero(p.dim()));
  const double lead = d.leading();
  for (int m = n; m >= k; --m) {
    const Elem q = rem[static_cast<std::size_t>(m)] / lead;
    quot[static_cast<std::size_t>(m - k)] = q;
    for (int j = 0; j <= k; ++j) rem[static_cast<std::size_t>(m - k + j)] -= q * d.c[static_cast<std::size_t>(j)];
  }
  rem.resize(static_cast<std::size_t>(k));
  return {StarPoly(p.dim(), std::move(quot)), StarPoly(p.dim(), std::move(rem))};
}

/// Largest d with factor^d dividing p, with remainders judged relative to
/// the size of p. Returns -1 for the zero polynomial.
inline int divisibility(const StarPoly& p, const RealPoly& factor, double rel_tol = 1e-9) {
  if (p.is_zero()) return -1;
  int d = 0;
  StarPoly cur = p;
  while (cur.degree() >= factor.degree()) {
    const double scale = std::max(cur.max_coeff(), std::numeric_limits<double>::min());
    auto [q, r] = divmod(cur, factor);
    if (r.max_coeff() > rel_tol * scale) break;
    ++d;
    cur = q;
    if (cur.is_zero()) break;
  }
  return d;
}

/// Taylor coefficients t_j of P restricted to the slice through w:
/// P(z) = sum_j (z - w)^j t_j, with t_j = sum_n C(n, j) w^{n-j} a_n.
inline std::vector<Elem> taylor_at(const AlgebraSpec& alg, const StarPoly& p, Complex w, const Elem& J) {
  const std::size_t n = p.coeffs().size();
  std::vector<Elem> t(n, alg.zero());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t m = j; m < n; ++m) {
      double binom = 1.0;
      for (std::size_t r = 0; r < j; ++r) binom = binom * static_cast<double>(m - r) / static_cast<double>(r + 1);
      const Complex wp = binom * std::pow(w, static_cast<int>(m - j));
      t[j] += alg.mul(in_slice(wp, J), p[m]);
    }
  return t;
}

/// Vanishing order of P at w on its slice; -1 if P is zero.
inline int vanishing_order(const AlgebraSpec& alg, const StarPoly& p, Complex w, const Elem& J, double rel_tol = 1e-9) {
  if (p.is_zero()) return -1;
  const auto t = taylor_at(alg, p, w, J);
  double scale = 0.0;
  for (std::size_t m = 0; m < p.coeffs().size(); ++m)
    scale += alg.norm(p[m]) * std::pow(std::max(1.0, std::abs(w)), static_cast<double>(m));
  for (std::size_t j = 0; j < t.size(); ++j)
    if (alg.norm(t[j]) > rel_tol * scale) return static_cast<int>(j);
  return static_cast<int>(t.size());
}

/// A cluster of numerically coincident roots.
struct RootCluster {
  Complex center;
  int multiplicity = 1;
};

namespace detail {
inline Complex polish_root(const RealPoly& p, Complex z, int mult) {
  RealPoly d = p;
  for (int k = 1; k < mult; ++k) d = d.derivative();
  const RealPoly dd = d.derivative();
  Complex best = z;
  double best_res = std::abs(d(z));
  for (int it = 0; it < 8; ++it) {
    const Complex der = dd(z);
    if (der == 0.0) break;
    z -= d(z) / der;
    const double res = std::abs(d(z));
    if (!std::isfinite(res)) break;
    if (res < best_res) {
      best = z;
      best_res = res;
    }
  }
  return best;
}
}  // namespace detail

/// Complex roots with multiplicity via companion-matrix eigenvalues.
///
/// An m-fold root shows up as m eigenvalues spread over ~eps^{1/m}; a seed
/// eigenvalue takes the largest m whose m nearest neighbours (itself
/// included) fit in (1e-7 + 10 eps^{1/m}) relative radius. Centers are polished by Newton on
/// the (m-1)-th derivative.
inline std::vector<RootCluster> polynomial_roots(const RealPoly& p) {
  if (p.is_zero()) throw DomainError("roots of the zero polynomial");
  const int n = p.degree();
  if (n == 0) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -p.c[static_cast<std::size_t>(i)] / p.leading();
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) throw NumericError("companion eigenvalue solver did not converge");

  std::vector<Complex> pending;
  for (int i = 0; i < n; ++i) pending.push_back(es.eigenvalues()(i));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  auto radius = [&](int m, Complex c) { return (1e-7 + 10.0 * std::pow(eps, 1.0 / m)) * (1.0 + std::abs(c)); };
  std::vector<RootCluster> clusters;
  while (!pending.empty()) {
    // Largest k such that k eigenvalues sit within the k-fold spread of the seed.
    const Complex seed = pending.front();
    std::vector<std::size_t> order(pending.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::abs(pending[a] - seed) < std::abs(pending[b] - seed); });
    int k = 1;
    for (int m = static_cast<int>(pending.size()); m >= 2; --m)
      if (std::abs(pending[order[static_cast<std::size_t>(m - 1)]] - seed) <= radius(m, seed)) {
        k = m;
        break;
      }
    Complex sum = 0.0;
    std::vector<std::size_t> take(order.begin(), order.begin() + k);
    for (std::size_t i : take) sum += pending[i];
    clusters.push_back({sum / static_cast<double>(k), k});
    std::sort(take.rbegin(), take.rend());
    for (std::size_t i : take) pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(i));
  }
  for (auto& c : clusters) c.center = detail::polish_root(p, c.center, c.multiplicity);
  return clusters;
}

/// Groups roots of a real polynomial into spheres: conjugate pairs give
/// (Re, |Im|), roots with |Im| below the clustering tolerance are real.
inline std::vector<std::pair<SphereId, int>> root_spheres(const RealPoly& p) {
  std::vector<std::pair<SphereId, int>> out;
  for (const auto& c : polynomial_roots(p)) {
    const double tol = 1e-7 * (1.0 + std::abs(c.center));
    if (std::abs(c.center.imag()) <= tol) {
      out.push_back({{c.center.real(), 0.0}, c.multiplicity});
    } else if (c.center.imag() > 0) {
      out.push_back({{c.center.real(), c.center.imag()}, c.multiplicity});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.first.alpha != b.first.alpha ? a.first.alpha < b.first.alpha : a.first.beta < b.first.beta;
  });
  return out;
}

}  // namespace slicefn
