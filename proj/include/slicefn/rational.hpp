#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "slicefn/algebra.hpp"
#include "slicefn/poly.hpp"
#include "slicefn/slice.hpp"

namespace slicefn {

/// Cassini distance below which a point counts as lying on a singular sphere.
inline constexpr double kSingularTol = 1e-9;

/// Residue allowed when coercing N(P) to real coefficients, relative to the
/// largest coefficient.
inline constexpr double kNormalRealTol = 1e-10;

struct SphereFactor {
  SphereId sphere;
  int multiplicity = 1;
};

/// Evaluation hit a singular sphere.
class SingularPointError : public DomainError {
 public:
  explicit SingularPointError(const SphereId& s)
      : DomainError("point lies on the singular sphere " + to_string(s)), sphere_(s) {}
  const SphereId& sphere() const noexcept { return sphere_; }

 private:
  SphereId sphere_;
};

/// u(z, y)^2 for z and y = alpha + i beta on the same slice.
inline double cassini_sq(Complex z, const SphereId& s) {
  const Complex y = s.point();
  return std::abs(z - y) * std::abs(z - std::conj(y));
}

inline bool same_sphere(const SphereId& a, const SphereId& b, double tol = 1e-6) {
  const double scale = 1.0 + std::abs(a.alpha) + std::abs(a.beta);
  return std::abs(a.alpha - b.alpha) <= tol * scale && std::abs(a.beta - b.beta) <= tol * scale;
}

/// Multiset union of sphere factors.
inline std::vector<SphereFactor> merge_factors(std::vector<SphereFactor> a, const std::vector<SphereFactor>& b) {
  for (const auto& f : b) {
    auto it = std::find_if(a.begin(), a.end(), [&](const SphereFactor& g) { return same_sphere(g.sphere, f.sphere); });
    if (it == a.end())
      a.push_back(f);
    else
      it->multiplicity += f.multiplicity;
  }
  return a;
}

enum class NodeKind { Poly, Add, Mul, Conj, Inv };

/// Star-rational expression tree over one algebra.
///
/// Each node also caches a normal form f = D^{-1} P with D a real
/// polynomial and P a star polynomial, together with the factorization of D
/// into sphere factors. Inverse nodes are admitted only for tame children.
class RationalExpr {
 public:
  static RationalExpr poly(std::shared_ptr<const AlgebraSpec> alg, StarPoly p) {
    if (p.dim() != alg->dim() && !p.is_zero()) throw DimensionMismatch("polynomial over " + to_string(alg->name()));
    auto n = std::make_shared<Node>();
    n->alg = std::move(alg);
    n->kind = NodeKind::Poly;
    n->poly = p;
    n->D = RealPoly::one();
    n->P = std::move(p);
    return RationalExpr(std::move(n));
  }
  static RationalExpr constant(std::shared_ptr<const AlgebraSpec> alg, const Elem& a) {
    return poly(std::move(alg), StarPoly::constant(a));
  }

  friend RationalExpr add(const RationalExpr& f, const RationalExpr& g) {
    auto n = f.binary(NodeKind::Add, g);
    if (f.node_->D == g.node_->D) {
      n->D = f.node_->D;
      n->P = f.node_->P + g.node_->P;
      n->spheres = f.node_->spheres;
    } else {
      n->D = f.node_->D * g.node_->D;
      n->P = scale(g.node_->D, f.node_->P) + scale(f.node_->D, g.node_->P);
      n->spheres = merge_factors(f.node_->spheres, g.node_->spheres);
    }
    return RationalExpr(std::move(n));
  }

  friend RationalExpr mul(const RationalExpr& f, const RationalExpr& g) {
    auto n = f.binary(NodeKind::Mul, g);
    n->D = f.node_->D * g.node_->D;
    n->P = star_mul(*n->alg, f.node_->P, g.node_->P);
    n->spheres = merge_factors(f.node_->spheres, g.node_->spheres);
    return RationalExpr(std::move(n));
  }

  friend RationalExpr conj(const RationalExpr& f) {
    auto n = std::make_shared<Node>();
    n->alg = f.node_->alg;
    n->kind = NodeKind::Conj;
    n->children = {f.node_};
    n->D = f.node_->D;
    n->P = slicefn::conj(*n->alg, f.node_->P);
    n->spheres = f.node_->spheres;
    return RationalExpr(std::move(n));
  }

  /// Star inverse via f^{-•} = N(f)^{-1} f^c. Throws InverseUnavailable when
  /// the child is not tame or its normal function vanishes.
  friend RationalExpr inv(const RationalExpr& f) {
    const AlgebraSpec& alg = *f.node_->alg;
    const StarPoly& P = f.node_->P;
    if (P.is_zero()) throw InverseUnavailable("star inverse of the zero function");
    const StarPoly Pc = slicefn::conj(alg, P);
    const StarPoly N1 = star_mul(alg, P, Pc);
    const StarPoly N2 = star_mul(alg, Pc, P);
    const double mag = std::max(N1.max_coeff(), N2.max_coeff());
    std::vector<double> real_coeffs;
    for (std::size_t m = 0; m < N1.coeffs().size(); ++m) {
      const Elem& c = N1[m];
      for (std::size_t i = 1; i < alg.dim(); ++i)
        if (std::abs(c[i]) > kNormalRealTol * mag)
          throw InverseUnavailable("normal function is not slice preserving: the function is not tame");
      real_coeffs.push_back(c[0]);
    }
    const std::size_t top = std::max(N1.coeffs().size(), N2.coeffs().size());
    for (std::size_t m = 0; m < top; ++m) {
      const Elem a = m < N1.coeffs().size() ? N1[m] : alg.zero();
      const Elem b = m < N2.coeffs().size() ? N2[m] : alg.zero();
      if ((a - b).max_abs() > kNormalRealTol * mag)
        throw InverseUnavailable("N(f) differs from N(f^c): the function is not tame");
    }
    RealPoly N(std::move(real_coeffs));
    // Drop leading terms that are pure round-off.
    while (!N.is_zero() && std::abs(N.leading()) <= kNormalRealTol * mag) {
      N.c.pop_back();
      N.trim();
    }
    if (N.is_zero()) throw InverseUnavailable("normal function vanishes identically");

    auto n = std::make_shared<Node>();
    n->alg = f.node_->alg;
    n->kind = NodeKind::Inv;
    n->children = {f.node_};
    n->normal = N;
    n->D = N;
    n->P = scale(f.node_->D, Pc);
    for (const auto& [s, m] : root_spheres(N)) n->spheres.push_back({s, m});
    return RationalExpr(std::move(n));
  }

  const AlgebraSpec& algebra() const noexcept { return *node_->alg; }
  const std::shared_ptr<const AlgebraSpec>& algebra_ptr() const noexcept { return node_->alg; }
  NodeKind kind() const noexcept { return node_->kind; }
  std::vector<RationalExpr> children() const {
    std::vector<RationalExpr> out;
    for (const auto& c : node_->children) out.push_back(RationalExpr(c));
    return out;
  }
  /// Poly nodes: the polynomial.
  const StarPoly& polynomial() const noexcept { return node_->poly; }
  /// Inv nodes: the real polynomial N(child).
  const RealPoly& normal_poly() const noexcept { return node_->normal; }

  const RealPoly& denominator() const noexcept { return node_->D; }
  const StarPoly& numerator() const noexcept { return node_->P; }
  const std::vector<SphereFactor>& singular_spheres() const noexcept { return node_->spheres; }

  /// The sphere within kSingularTol (Cassini) of z, if any.
  const SphereFactor* near_singular(Complex z) const {
    for (const auto& f : node_->spheres)
      if (cassini_sq(z, f.sphere) <= kSingularTol * kSingularTol) return &f;
    return nullptr;
  }

  /// Stem value by recursive A_C arithmetic; no singularity check.
  CElem stem(Complex z) const { return eval_stem(*node_, z); }

  Elem eval(const Elem& x) const {
    const AlgebraSpec& alg = algebra();
    const ConeDecomposition d = cone_decompose(alg, x);
    if (!d.in_cone) throw DomainError("point outside the quadratic cone");
    const Complex z(d.alpha, d.beta);
    if (const auto* hit = near_singular(z)) throw SingularPointError(hit->sphere);
    const CElem F = stem(z);
    if (d.beta == 0.0) return F.re;
    return F.re + alg.mul(d.J, F.im);
  }

  SliceFn as_slice_fn() const {
    std::vector<SphereId> spheres;
    for (const auto& f : node_->spheres) spheres.push_back(f.sphere);
    auto self = std::make_shared<const RationalExpr>(*this);
    return SliceFn(node_->alg,
                   {[self](Complex z) { return self->stem(z); },
                    [self](Complex z) { return self->near_singular(z) == nullptr; }},
                   SliceKind::Rational, std::move(spheres), self);
  }

 private:
  struct Node {
    std::shared_ptr<const AlgebraSpec> alg;
    NodeKind kind = NodeKind::Poly;
    std::vector<std::shared_ptr<const Node>> children;
    StarPoly poly;
    RealPoly normal;
    RealPoly D;
    StarPoly P;
    std::vector<SphereFactor> spheres;
  };

  explicit RationalExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<Node> binary(NodeKind kind, const RationalExpr& g) const {
    if (node_->alg->name() != g.node_->alg->name()) throw DimensionMismatch("expressions over different algebras");
    auto n = std::make_shared<Node>();
    n->alg = node_->alg;
    n->kind = kind;
    n->children = {node_, g.node_};
    return n;
  }

  static CElem eval_stem(const Node& n, Complex z) {
    const AlgebraSpec& alg = *n.alg;
    switch (n.kind) {
      case NodeKind::Poly:
        return n.poly.is_zero() ? CElem(alg.zero()) : n.poly.stem(z);
      case NodeKind::Add:
        return eval_stem(*n.children[0], z) + eval_stem(*n.children[1], z);
      case NodeKind::Mul:
        return alg.mul(eval_stem(*n.children[0], z), eval_stem(*n.children[1], z));
      case NodeKind::Conj:
        return alg.conj(eval_stem(*n.children[0], z));
      case NodeKind::Inv: {
        const CElem G = eval_stem(*n.children[0], z);
        const CElem Gc = alg.conj(G);
        const CElem nu = alg.mul(G, Gc);
        const Complex scalar(nu.re[0], nu.im[0]);
        if (scalar == 0.0) throw NumericError("normal function vanishes at an evaluation point");
        return (1.0 / scalar) * Gc;
      }
    }
    throw NumericError("unknown expression node");
  }

  std::shared_ptr<const Node> node_;
};

inline RationalExpr operator+(const RationalExpr& f, const RationalExpr& g) { return add(f, g); }
inline RationalExpr operator*(const RationalExpr& f, const RationalExpr& g) { return mul(f, g); }

inline Elem eval_rational(const RationalExpr& e, const Elem& x) { return e.eval(x); }

inline RationalExpr star_inverse(const RationalExpr& e) { return inv(e); }

inline std::vector<SphereFactor> singular_spheres(const RationalExpr& e) { return e.singular_spheres(); }

/// (x - y)^{•n}; negative n uses the inverse (x - y)^{-•} = Delta_y^{-1}(x - y^c).
inline RationalExpr star_power(std::shared_ptr<const AlgebraSpec> alg, const Elem& y, int n) {
  if (!cone_decompose(*alg, y).in_cone) throw DomainError("star power center outside the quadratic cone");
  const StarPoly lin = StarPoly::linear(y);
  if (n >= 0) {
    StarPoly p = StarPoly::constant(alg->one());
    for (int k = 0; k < n; ++k) p = star_mul(*alg, p, lin);
    return RationalExpr::poly(alg, p);
  }
  const RationalExpr base = inv(RationalExpr::poly(alg, lin));
  RationalExpr out = base;
  for (int k = 1; k < -n; ++k) out = mul(out, base);
  return out;
}

/// Sampled tameness test: N(e) slice preserving and N(e) = N(e^c).
inline bool is_tame(const RationalExpr& e, std::size_t samples = 200, std::uint64_t seed = 7) {
  const SliceFn f = e.as_slice_fn();
  const SliceFn N = normal_fn(f);
  if (!is_slice_preserving(N, samples, seed)) return false;
  const SliceFn Nc = normal_fn(conjugate_fn(f));
  const Elem J = e.algebra().record_unit();
  for (const Complex z : sample_domain(f, samples, seed + 17)) {
    const Elem a = N.on_slice(z, J), b = Nc.on_slice(z, J);
    if (rel_diff(a, b) > 1e-9) return false;
  }
  return true;
}

}  // namespace slicefn
