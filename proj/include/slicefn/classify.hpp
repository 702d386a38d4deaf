#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "slicefn/algebra.hpp"
#include "slicefn/conversion.hpp"
#include "slicefn/expansions.hpp"
#include "slicefn/poly.hpp"
#include "slicefn/rational.hpp"
#include "slicefn/slice.hpp"

namespace slicefn {

enum class SingularityKind { Removable, Pole, EssentialPresumed };

inline std::string to_string(SingularityKind k) {
  switch (k) {
    case SingularityKind::Removable: return "removable";
    case SingularityKind::Pole: return "pole";
    case SingularityKind::EssentialPresumed: return "essential-presumed";
  }
  return "?";
}

/// An order, or the cap flag when the principal part persists down to -K.
struct OrderValue {
  int value = 0;
  bool capped = false;
  friend bool operator==(const OrderValue&, const OrderValue&) = default;
};

struct Multiplicity {
  int value = 0;
  bool infinite = false;
  bool applicable = true;
};

struct PointOrder {
  Elem point;
  OrderValue order;
};

/// Solution set H = {x : x u + v = 0} = base + span(directions), and its
/// intersection with the sphere.
struct AffineSet {
  bool consistent = true;
  Elem base;
  std::vector<Elem> directions;
  std::vector<Elem> sphere_points;
  bool finite = true;
  /// Local dimension of the intersection (0 when every point is isolated).
  int dimension = 0;
};

inline constexpr std::size_t kMaxExceptionalSample = 16;

struct SingularityReport {
  SphereId sphere;
  SingularityKind kind = SingularityKind::Removable;
  OrderValue spherical_order;
  std::vector<PointOrder> order_at;
  std::optional<SphericalPair> leading_pair;
  std::optional<AffineSet> exceptional;
  Multiplicity spherical_multiplicity;
  Multiplicity classical_multiplicity;
  int cap_K = kDefaultK;
  bool exact = false;
};

struct ClassifyOptions {
  int K = kDefaultK;
  int N = kDefaultN;
  std::size_t sample_points = 10;
  std::uint64_t seed = 1;
  /// Radius used for numeric order detection, capped by the distance to
  /// other singularities.
  double order_radius = 0.1;
};

namespace detail {

inline Elem sphere_point(const SphereId& s, const Elem& I) {
  return in_slice(Complex(s.alpha, s.beta), I);
}

inline int sphere_multiplicity(const RationalExpr& e, const SphereId& s) {
  for (const auto& f : e.singular_spheres())
    if (same_sphere(f.sphere, s)) return f.multiplicity;
  return 0;
}

// Deepest index p < 0 with a nonzero coefficient, as a positive number.
inline int deepest_negative(const std::map<int, bool>& zero) {
  int q = 0;
  for (const auto& [n, z] : zero)
    if (n < 0 && !z) q = std::max(q, -n);
  return q;
}

inline std::optional<int> first_nonzero(const std::map<int, bool>& zero) {
  for (const auto& [n, z] : zero)
    if (!z) return n;
  return std::nullopt;
}

inline double order_radius(const SliceFn& f, const Elem& y, const ClassifyOptions& o) {
  return std::min(o.order_radius, default_laurent_radius(f, y));
}

}  // namespace detail

/// Exceptional set of a pole sphere: solves x u + v = 0 through the right
/// multiplication matrix of u (singular values below 1e-10 of the largest
/// count as zero) and intersects the solution space with the sphere by
/// multi-start Gauss-Newton on t(x) = 2 alpha, n(x) = alpha^2 + beta^2.
inline AffineSet exceptional_set(const AlgebraSpec& alg, const SphereId& s, const Elem& u, const Elem& v,
                                 std::uint64_t seed = 1) {
  const std::size_t d = alg.dim();
  if (u.max_abs() == 0.0 && v.max_abs() == 0.0)
    throw NumericError("leading spherical pair vanishes: inconsistent spherical order");
  AffineSet H;
  const Eigen::MatrixXd R = alg.right_mul_matrix(u);
  const Eigen::VectorXd rhs = -alg.to_vector(v);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * top && top > 0.0) ++rank;
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  for (int i = 0; i < rank; ++i) x0 += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(rhs) / sv(i));
  H.base = alg.from_vector(x0);
  if ((R * x0 - rhs).lpNorm<Eigen::Infinity>() > 1e-9 * (1.0 + rhs.lpNorm<Eigen::Infinity>())) {
    H.consistent = false;
    return H;
  }
  for (int i = rank; i < static_cast<int>(d); ++i) H.directions.push_back(alg.from_vector(svd.matrixV().col(i)));

  const double t_target = 2.0 * s.alpha, n_target = s.alpha * s.alpha + s.beta * s.beta;
  const std::size_t h = H.directions.size();
  auto point = [&](const Eigen::VectorXd& t) {
    Elem x = H.base;
    for (std::size_t i = 0; i < h; ++i) x += H.directions[i] * t(static_cast<Eigen::Index>(i));
    return x;
  };
  auto residual = [&](const Elem& x) {
    Eigen::VectorXd r(2 * d);
    const Elem tr = alg.trace(x);
    Elem nn = alg.norm_n(x);
    for (std::size_t k = 0; k < d; ++k) {
      r(static_cast<Eigen::Index>(k)) = tr[k] - (k == 0 ? t_target : 0.0);
      r(static_cast<Eigen::Index>(d + k)) = nn[k] - (k == 0 ? n_target : 0.0);
    }
    return r;
  };
  auto jacobian = [&](const Elem& x) {
    Eigen::MatrixXd J(2 * d, h);
    const Elem xc = alg.conj(x);
    for (std::size_t i = 0; i < h; ++i) {
      const Elem& e = H.directions[i];
      const Elem dt = alg.trace(e), dn = alg.mul(e, xc) + alg.mul(x, alg.conj(e));
      for (std::size_t k = 0; k < d; ++k) {
        J(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = dt[k];
        J(static_cast<Eigen::Index>(d + k), static_cast<Eigen::Index>(i)) = dn[k];
      }
    }
    return J;
  };
  const double tol = 1e-11 * (1.0 + n_target);

  if (h == 0) {
    if (residual(H.base).lpNorm<Eigen::Infinity>() <= 1e-8 * (1.0 + n_target)) H.sphere_points.push_back(H.base);
    return H;
  }

  // Starts: the signed basis units lying on the sphere, then random sphere
  // points; each is projected onto H. Coordinate starts come first so that
  // a truncated continuum sample keeps them.
  std::vector<Elem> starts;
  for (std::size_t i = 1; i < d; ++i)
    for (const double sign : {1.0, -1.0})
      if (in_sphere(alg, alg.basis(i) * sign)) starts.push_back(alg.basis(i) * sign);
  for (const Elem& I : sample_sphere(alg, 256, seed)) starts.push_back(I);
  for (const Elem& I : starts) {
    const Elem w = detail::sphere_point(s, I) - H.base;
    Eigen::VectorXd t(static_cast<Eigen::Index>(h));
    for (std::size_t i = 0; i < h; ++i) {
      double dot = 0.0;
      for (std::size_t k = 0; k < d; ++k) dot += w[k] * H.directions[i][k];
      t(static_cast<Eigen::Index>(i)) = dot;
    }
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const Elem x = point(t);
      const Eigen::VectorXd r = residual(x);
      if (r.lpNorm<Eigen::Infinity>() <= tol) {
        converged = true;
        break;
      }
      const Eigen::VectorXd step = jacobian(x).completeOrthogonalDecomposition().solve(r);
      t -= step;
      if (!t.allFinite()) break;
    }
    if (!converged) continue;
    Elem x = point(t);
    for (std::size_t k = 0; k < d; ++k)
      if (std::abs(x[k]) < 1e-14) x[k] = 0.0;
    const bool seen = std::any_of(H.sphere_points.begin(), H.sphere_points.end(),
                                  [&](const Elem& p) { return (p - x).max_abs() <= 1e-6; });
    if (seen) continue;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jacobian(x));
    lu.setThreshold(1e-8);
    if (static_cast<std::size_t>(lu.rank()) < h) {
      H.finite = false;
      H.dimension = std::max(H.dimension, static_cast<int>(h) - static_cast<int>(lu.rank()));
    }
    H.sphere_points.push_back(x);
  }
  // A continuum is reported through a bounded sample.
  if (!H.finite && H.sphere_points.size() > kMaxExceptionalSample) H.sphere_points.resize(kMaxExceptionalSample);
  std::sort(H.sphere_points.begin(), H.sphere_points.end(), [](const Elem& a, const Elem& b) {
    return std::lexicographical_compare(a.coeffs().begin(), a.coeffs().end(), b.coeffs().begin(), b.coeffs().end());
  });
  return H;
}

/// Order of the pole at the single point y (0 if y is regular or removable).
inline OrderValue order_at_point(const SliceFn& f, const Elem& y, const ClassifyOptions& o = {}) {
  const auto& alg = f.algebra();
  const ConeDecomposition d = cone_decompose(alg, y);
  if (!d.in_cone) throw DomainError("point outside the quadratic cone");
  if (const auto& e = f.rational()) {
    const SphereId s{d.alpha, d.beta};
    const int m = detail::sphere_multiplicity(*e, s);
    if (m == 0 || e->numerator().is_zero()) return {0, false};
    const int v = vanishing_order(alg, e->numerator(), Complex(d.alpha, d.beta), d.J);
    return {std::max(0, m - v), false};
  }
  const LaurentData L = laurent_coeffs(f, y, detail::order_radius(f, y, o), o.K, o.N);
  const auto zero = zero_pattern(alg, L.coeffs, L.r);
  if (o.K > 0 && !zero.at(-o.K)) return {o.K, true};
  return {detail::deepest_negative(zero), false};
}

namespace detail {

inline SingularityReport classify_rational(const RationalExpr& e, const SphereId& s, const ClassifyOptions& o) {
  const AlgebraSpec& alg = e.algebra();
  SingularityReport rep;
  rep.sphere = s;
  rep.exact = true;
  rep.cap_K = o.K;
  const StarPoly& P = e.numerator();
  const int m = sphere_multiplicity(e, s);
  const Elem J0 = alg.record_unit();

  if (P.is_zero()) {
    rep.kind = SingularityKind::Removable;
    rep.spherical_multiplicity = {0, true, !s.is_real()};
    rep.classical_multiplicity = {0, true, s.is_real()};
    return rep;
  }

  if (s.is_real()) {
    const int ordP = vanishing_order(alg, P, Complex(s.alpha, 0.0), J0);
    const int n = ordP - m;
    rep.spherical_multiplicity.applicable = false;
    if (n >= 0) {
      rep.kind = SingularityKind::Removable;
      rep.classical_multiplicity = {n, false, true};
    } else {
      rep.kind = SingularityKind::Pole;
      rep.spherical_order = {-2 * static_cast<int>(std::floor(n / 2.0)), false};
    }
    rep.order_at.push_back({alg.real(s.alpha), {std::max(0, -n), false}});
    return rep;
  }

  rep.classical_multiplicity.applicable = false;
  const RealPoly delta = delta_real(s);
  const int dv = divisibility(P, delta);
  const int k = m - dv;
  const SliceFn f = e.as_slice_fn();
  auto add_orders = [&](const std::vector<Elem>& extra) {
    std::vector<Elem> units = sample_sphere(alg, o.sample_points, o.seed);
    units.insert(units.begin(), {J0, -J0});
    for (const Elem& I : units) {
      const Elem w = sphere_point(s, I);
      rep.order_at.push_back({w, order_at_point(f, w, o)});
    }
    for (const Elem& w : extra) rep.order_at.push_back({w, order_at_point(f, w, o)});
  };
  if (k <= 0) {
    rep.kind = SingularityKind::Removable;
    rep.spherical_multiplicity = {2 * (dv - m), false, true};
    add_orders({});
    return rep;
  }
  rep.kind = SingularityKind::Pole;
  rep.spherical_order = {2 * k, false};

  // Leading pair of f = Delta^{-k} E^{-1} Q on the sphere, where
  // P = Delta^d Q and D = Delta^m E.
  StarPoly Q = P;
  for (int i = 0; i < dv; ++i) Q = divmod(Q, delta).first;
  const StarPoly rem = divmod(Q, delta).second;
  const Elem uQ = rem.coeffs().size() > 1 ? rem[1] : alg.zero();
  const Elem vQ = rem.coeffs().size() > 0 ? rem[0] : alg.zero();
  RealPoly E = e.denominator();
  for (int i = 0; i < m; ++i) {
    const StarPoly q = divmod(StarPoly::from_real(1, E), delta).first;
    std::vector<double> c;
    for (const auto& x : q.coeffs()) c.push_back(x[0]);
    E = RealPoly(std::move(c));
  }
  const Complex eta = 1.0 / E(s.point());
  const double q = eta.imag() / s.beta;
  const double p = eta.real() - s.alpha * q;
  const double nn = s.alpha * s.alpha + s.beta * s.beta;
  const Elem U = uQ * (p + 2.0 * s.alpha * q) + vQ * q;
  const Elem V = vQ * p - uQ * (q * nn);
  rep.leading_pair = SphericalPair{U, V};
  rep.exceptional = exceptional_set(alg, s, U, V, o.seed);
  add_orders(rep.exceptional->sphere_points);
  return rep;
}

inline SingularityReport classify_numeric(const SliceFn& f, const SphereId& s, const ClassifyOptions& o) {
  const AlgebraSpec& alg = f.algebra();
  SingularityReport rep;
  rep.sphere = s;
  rep.cap_K = o.K;
  const Elem J0 = alg.record_unit();
  const Elem y = sphere_point(s, J0);

  if (s.is_real()) {
    rep.spherical_multiplicity.applicable = false;
    const LaurentData L = laurent_coeffs(f, y, order_radius(f, y, o), o.K, o.N);
    const auto zero = zero_pattern(alg, L.coeffs, L.r);
    if (o.K > 0 && !zero.at(-o.K)) {
      rep.kind = SingularityKind::EssentialPresumed;
      rep.spherical_order = {2 * o.K, true};
      rep.order_at.push_back({y, {o.K, true}});
      return rep;
    }
    const int q = deepest_negative(zero);
    rep.order_at.push_back({y, {q, false}});
    rep.spherical_order = {q + q % 2, false};
    rep.kind = q == 0 ? SingularityKind::Removable : SingularityKind::Pole;
    if (q == 0) {
      const auto first = first_nonzero(zero);
      rep.classical_multiplicity = first ? Multiplicity{*first, false, true} : Multiplicity{0, true, true};
    }
    return rep;
  }

  rep.classical_multiplicity.applicable = false;
  const double r = std::min(default_spherical_radius(f, y), o.order_radius);
  const SphericalData S = spherical_numbers(f, y, r, o.K, o.N);
  const auto zero = zero_pattern(alg, S.c, S.rho);
  if (o.K > 0 && !zero.at(-2 * o.K)) {
    rep.kind = SingularityKind::EssentialPresumed;
    rep.spherical_order = {2 * o.K, true};
    return rep;
  }
  const int q = deepest_negative(zero);
  const int n0 = q + q % 2;
  rep.spherical_order = {n0, false};
  std::vector<Elem> extra;
  if (n0 == 0) {
    rep.kind = SingularityKind::Removable;
    const auto first = first_nonzero(zero);
    rep.spherical_multiplicity = first ? Multiplicity{2 * (*first / 2), false, true} : Multiplicity{0, true, true};
  } else {
    rep.kind = SingularityKind::Pole;
    const SphericalPair lead = S.pairs.at(-n0 / 2);
    rep.leading_pair = lead;
    rep.exceptional = exceptional_set(alg, s, lead.u, lead.v, o.seed);
    extra = rep.exceptional->sphere_points;
  }
  std::vector<Elem> units = sample_sphere(alg, o.sample_points, o.seed);
  units.insert(units.begin(), {J0, -J0});
  for (const Elem& I : units) {
    const Elem w = sphere_point(s, I);
    rep.order_at.push_back({w, order_at_point(f, w, o)});
  }
  for (const Elem& w : extra) rep.order_at.push_back({w, order_at_point(f, w, o)});
  return rep;
}

}  // namespace detail

/// Spherical order at the sphere, exact for rational functions.
inline OrderValue spherical_order(const SliceFn& f, const SphereId& s, const ClassifyOptions& o = {}) {
  if (const auto& e = f.rational()) return detail::classify_rational(*e, s, o).spherical_order;
  return detail::classify_numeric(f, s, o).spherical_order;
}

inline SingularityReport classify(const SliceFn& f, const SphereId& s, const ClassifyOptions& o = {}) {
  if (const auto& e = f.rational()) return detail::classify_rational(*e, s, o);
  return detail::classify_numeric(f, s, o);
}

inline SingularityReport classify(const RationalExpr& e, const SphereId& s, const ClassifyOptions& o = {}) {
  return detail::classify_rational(e, s, o);
}

inline std::vector<SingularityReport> classify_all(const RationalExpr& e, const ClassifyOptions& o = {}) {
  std::vector<SingularityReport> out;
  for (const auto& f : e.singular_spheres()) out.push_back(classify(e, f.sphere, o));
  return out;
}

}  // namespace slicefn
