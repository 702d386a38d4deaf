#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slicefn/elem.hpp"
#include "slicefn/errors.hpp"

namespace slicefn {

enum class AlgebraName { C, H, O, CL3, BC };

enum class NormKind { Euclidean, RescaledBicomplex };

inline std::string to_string(AlgebraName n) {
  switch (n) {
    case AlgebraName::C: return "C";
    case AlgebraName::H: return "H";
    case AlgebraName::O: return "O";
    case AlgebraName::CL3: return "CL3";
    case AlgebraName::BC: return "BC";
  }
  return "?";
}

inline AlgebraName parse_algebra_name(std::string_view s) {
  if (s == "C") return AlgebraName::C;
  if (s == "H") return AlgebraName::H;
  if (s == "O") return AlgebraName::O;
  if (s == "CL3") return AlgebraName::CL3;
  if (s == "BC") return AlgebraName::BC;
  throw UnsupportedAlgebra(std::string(s));
}

/// Tolerance for "this element is real": every non-unit component is at
/// most this times (1 + ‖x‖_A).
inline constexpr double kRealTol = 1e-10;

/// Finite-dimensional real alternative *-algebra given by structure
/// constants c[i][j][k] with e_i e_j = sum_k c[i][j][k] e_k.
///
/// Immutable after construction; every member function is const and pure.
class AlgebraSpec {
 public:
  AlgebraSpec(AlgebraName name, std::size_t dim, std::vector<double> constants,
              std::vector<double> conj_signs, NormKind norm_kind)
      : name_(name),
        dim_(dim),
        constants_(std::move(constants)),
        conj_signs_(std::move(conj_signs)),
        norm_kind_(norm_kind) {
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        for (std::size_t k = 0; k < dim_; ++k)
          if (const double c = constant(i, j, k); c != 0.0) terms_.push_back({i, j, k, c});
  }

  AlgebraName name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return dim_; }
  NormKind norm_kind() const noexcept { return norm_kind_; }
  double constant(std::size_t i, std::size_t j, std::size_t k) const {
    return constants_[(i * dim_ + j) * dim_ + k];
  }
  double conj_sign(std::size_t i) const { return conj_signs_[i]; }

  Elem zero() const { return Elem::zero(dim_); }
  Elem one() const { return Elem::real(dim_, 1.0); }
  Elem real(double r) const { return Elem::real(dim_, r); }
  Elem basis(std::size_t i) const { return Elem::basis(dim_, i); }

  /// Imaginary unit spanning the slice used for all single-slice numerics:
  /// i for C, H, O; e1 for CL3; e+ for BC.
  Elem record_unit() const { return basis(1); }

  /// Product through the dense structure-constant tensor.
  Elem mul_tensor(const Elem& a, const Elem& b) const {
    check(a);
    check(b);
    Elem out(dim_);
    for (const auto& t : terms_) out[t.k] += (t.c * a[t.i]) * b[t.j];
    return out;
  }

  Elem mul(const Elem& a, const Elem& b) const {
    check(a);
    check(b);
    if (name_ == AlgebraName::H) return mul_quaternion(a, b);
    if (name_ == AlgebraName::C) return mul_complex(a, b);
    return mul_tensor(a, b);
  }

  CElem mul(const CElem& a, const CElem& b) const {
    return {mul(a.re, b.re) - mul(a.im, b.im), mul(a.re, b.im) + mul(a.im, b.re)};
  }

  Elem conj(const Elem& a) const {
    check(a);
    Elem out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) out[i] = conj_signs_[i] * a[i];
    return out;
  }
  CElem conj(const CElem& a) const { return {conj(a.re), conj(a.im)}; }

  Elem trace(const Elem& a) const { return a + conj(a); }
  Elem norm_n(const Elem& a) const { return mul(a, conj(a)); }

  /// The norm ‖·‖_A; it squares to n(x) on the quadratic cone.
  double norm(const Elem& a) const {
    check(a);
    if (norm_kind_ == NormKind::RescaledBicomplex) {
      const auto [z1, z2] = to_bicomplex_pair(a);
      return std::sqrt((std::norm(z1) + std::norm(z2)) / 2.0);
    }
    return a.euclidean();
  }

  bool is_real(const Elem& a, double tol = kRealTol) const {
    const double bound = tol * (1.0 + norm(a));
    for (std::size_t i = 1; i < dim_; ++i)
      if (std::abs(a[i]) > bound) return false;
    return true;
  }

  /// Matrix of x -> a x in the canonical basis.
  Eigen::MatrixXd left_mul_matrix(const Elem& a) const {
    Eigen::MatrixXd m(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      const Elem col = mul(a, basis(i));
      for (std::size_t k = 0; k < dim_; ++k) m(k, i) = col[k];
    }
    return m;
  }

  /// Matrix of x -> x a in the canonical basis.
  Eigen::MatrixXd right_mul_matrix(const Elem& a) const {
    Eigen::MatrixXd m(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      const Elem col = mul(basis(i), a);
      for (std::size_t k = 0; k < dim_; ++k) m(k, i) = col[k];
    }
    return m;
  }

  /// Solves a z = b. Throws DomainError when left multiplication by a is
  /// singular (a is zero or a zero divisor).
  Elem left_divide(const Elem& a, const Elem& b) const {
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(left_mul_matrix(a));
    if (!lu.isInvertible()) throw DomainError("element is not invertible");
    const Eigen::VectorXd z = lu.solve(to_vector(b));
    return from_vector(z);
  }

  Elem inverse(const Elem& a) const { return left_divide(a, one()); }

  Eigen::VectorXd to_vector(const Elem& a) const {
    check(a);
    Eigen::VectorXd v(dim_);
    for (std::size_t i = 0; i < dim_; ++i) v(i) = a[i];
    return v;
  }
  Elem from_vector(const Eigen::VectorXd& v) const {
    Elem e(dim_);
    for (std::size_t i = 0; i < dim_; ++i) e[i] = v(i);
    return e;
  }

  /// BC only: the pair (z1, z2) of C + C represented by a.
  static std::pair<Complex, Complex> to_bicomplex_pair(const Elem& a) {
    return {Complex(a[0] - a[3], a[1] + a[2]), Complex(a[0] + a[3], a[1] - a[2])};
  }
  static Elem from_bicomplex_pair(Complex z1, Complex z2) {
    return Elem{(z1.real() + z2.real()) / 2.0, (z1.imag() + z2.imag()) / 2.0,
                (z1.imag() - z2.imag()) / 2.0, (z2.real() - z1.real()) / 2.0};
  }

 private:
  struct Term {
    std::size_t i, j, k;
    double c;
  };

  void check(const Elem& a) const {
    if (a.dim() != dim_)
      throw DimensionMismatch("element of dimension " + std::to_string(a.dim()) + " in " +
                              to_string(name_));
  }

  // Closed forms accumulate in the same order as the tensor loop, so both
  // paths produce identical bits.
  static Elem mul_complex(const Elem& a, const Elem& b) {
    double r = 0.0, i = 0.0;
    r += a[0] * b[0];
    i += a[0] * b[1];
    i += a[1] * b[0];
    r -= a[1] * b[1];
    return Elem{r, i};
  }

  static Elem mul_quaternion(const Elem& a, const Elem& b) {
    double w = 0.0, x = 0.0, y = 0.0, z = 0.0;
    w += a[0] * b[0];
    x += a[0] * b[1];
    y += a[0] * b[2];
    z += a[0] * b[3];
    x += a[1] * b[0];
    w -= a[1] * b[1];
    z += a[1] * b[2];
    y -= a[1] * b[3];
    y += a[2] * b[0];
    z -= a[2] * b[1];
    w -= a[2] * b[2];
    x += a[2] * b[3];
    z += a[3] * b[0];
    y += a[3] * b[1];
    x -= a[3] * b[2];
    w -= a[3] * b[3];
    return Elem{w, x, y, z};
  }

  AlgebraName name_;
  std::size_t dim_;
  std::vector<double> constants_;
  std::vector<double> conj_signs_;
  NormKind norm_kind_;
  std::vector<Term> terms_;
};

namespace detail {

using Table = std::vector<double>;

inline void set_product(Table& t, std::size_t dim, std::size_t i, std::size_t j, const Elem& p) {
  for (std::size_t k = 0; k < dim; ++k) t[(i * dim + j) * dim + k] = p[k];
}

// Quaternion product on plain arrays (w, x, y, z).
inline std::array<double, 4> qmul(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}
inline std::array<double, 4> qconj(const std::array<double, 4>& a) {
  return {a[0], -a[1], -a[2], -a[3]};
}

inline Table quaternion_table() {
  Table t(64, 0.0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      std::array<double, 4> a{}, b{};
      a[i] = 1.0;
      b[j] = 1.0;
      const auto p = qmul(a, b);
      set_product(t, 4, i, j, Elem{p[0], p[1], p[2], p[3]});
    }
  return t;
}

// Octonions as pairs (a, b) = a + b l of quaternions with
// (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c)).
// Canonical basis 1, i, j, k, l, li, lj, lk; since l q = conj(q) l,
// the pair of l i is (0, -i), and similarly for lj, lk.
inline Table octonion_table() {
  using Q = std::array<double, 4>;
  using Pair = std::pair<Q, Q>;
  auto basis_pair = [](std::size_t idx) {
    Pair p{};
    if (idx < 4) {
      p.first[idx] = 1.0;
    } else if (idx == 4) {
      p.second[0] = 1.0;
    } else {
      p.second[idx - 4] = -1.0;
    }
    return p;
  };
  auto to_elem = [](const Pair& p) {
    return Elem{p.first[0], p.first[1], p.first[2], p.first[3],
                p.second[0], -p.second[1], -p.second[2], -p.second[3]};
  };
  auto add = [](Q a, const Q& b, double s) {
    for (int r = 0; r < 4; ++r) a[r] += s * b[r];
    return a;
  };
  Table t(512, 0.0);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      const auto [a, b] = basis_pair(i);
      const auto [c, d] = basis_pair(j);
      const Pair prod{add(qmul(a, c), qmul(qconj(d), b), -1.0), add(qmul(d, a), qmul(b, qconj(c)), 1.0)};
      set_product(t, 8, i, j, to_elem(prod));
    }
  return t;
}

// Clifford algebra Cl(0,3); blades indexed by bitmask (bit r <-> e_{r+1}).
inline constexpr std::array<unsigned, 8> kCl3Masks{0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111};

inline int cl3_index(unsigned mask) {
  for (int i = 0; i < 8; ++i)
    if (kCl3Masks[i] == mask) return i;
  return -1;
}

inline double blade_sign(unsigned a, unsigned b) {
  int swaps = 0;
  for (unsigned bit = 0; bit < 3; ++bit)
    if (b & (1u << bit))
      for (unsigned hi = bit + 1; hi < 3; ++hi)
        if (a & (1u << hi)) ++swaps;
  const int squares = __builtin_popcount(a & b);  // each e_r^2 = -1
  return ((swaps + squares) % 2 == 0) ? 1.0 : -1.0;
}

inline Table cl3_table() {
  Table t(512, 0.0);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      const unsigned a = kCl3Masks[i], b = kCl3Masks[j];
      Elem p(8);
      p[static_cast<std::size_t>(cl3_index(a ^ b))] = blade_sign(a, b);
      set_product(t, 8, i, j, p);
    }
  return t;
}

// Bicomplex numbers in the basis 1, e+, e-, e+e- (pairs (1,1), (i,i),
// (i,-i), (-1,1)); the product is componentwise on pairs.
inline Table bicomplex_table() {
  Table t(64, 0.0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const auto [a1, a2] = AlgebraSpec::to_bicomplex_pair(Elem::basis(4, i));
      const auto [b1, b2] = AlgebraSpec::to_bicomplex_pair(Elem::basis(4, j));
      set_product(t, 4, i, j, AlgebraSpec::from_bicomplex_pair(a1 * b1, a2 * b2));
    }
  return t;
}

}  // namespace detail

inline AlgebraSpec make_algebra(AlgebraName name) {
  switch (name) {
    case AlgebraName::C:
      return AlgebraSpec(name, 2, {1, 0, 0, 1, 0, 1, -1, 0}, {1, -1}, NormKind::Euclidean);
    case AlgebraName::H:
      return AlgebraSpec(name, 4, detail::quaternion_table(), {1, -1, -1, -1}, NormKind::Euclidean);
    case AlgebraName::O:
      return AlgebraSpec(name, 8, detail::octonion_table(), {1, -1, -1, -1, -1, -1, -1, -1},
                         NormKind::Euclidean);
    case AlgebraName::CL3: {
      // Clifford conjugation: +id on grades 0 and 3, -id on grades 1 and 2.
      std::vector<double> signs(8);
      for (std::size_t i = 0; i < 8; ++i) {
        const int grade = __builtin_popcount(detail::kCl3Masks[i]);
        signs[i] = (grade % 4 == 0 || grade % 4 == 3) ? 1.0 : -1.0;
      }
      return AlgebraSpec(name, 8, detail::cl3_table(), std::move(signs), NormKind::Euclidean);
    }
    case AlgebraName::BC:
      return AlgebraSpec(name, 4, detail::bicomplex_table(), {1, -1, -1, 1}, NormKind::RescaledBicomplex);
  }
  throw UnsupportedAlgebra("?");
}

inline AlgebraSpec make_algebra(std::string_view name) { return make_algebra(parse_algebra_name(name)); }

inline std::shared_ptr<const AlgebraSpec> shared_algebra(std::string_view name) {
  return std::make_shared<const AlgebraSpec>(make_algebra(name));
}

/// x = alpha + beta J with J in the sphere of imaginary units.
struct ConeDecomposition {
  double alpha = 0.0;
  double beta = 0.0;
  Elem J;
  bool in_cone = false;
};

/// Decomposes a into alpha + beta J when a lies in the quadratic cone.
/// For real a, beta = 0 and J is set to the record unit.
inline ConeDecomposition cone_decompose(const AlgebraSpec& alg, const Elem& a) {
  ConeDecomposition d;
  const Elem t = alg.trace(a);
  d.alpha = t[0] / 2.0;
  d.J = alg.record_unit();
  if (alg.is_real(a)) {
    d.alpha = a[0];
    d.in_cone = true;
    return d;
  }
  const Elem n = alg.norm_n(a);
  if (!alg.is_real(t) || !alg.is_real(n)) return d;
  if (t[0] * t[0] > 4.0 * n[0] + kRealTol * (1.0 + std::abs(n[0]))) return d;
  Elem im = a;
  im[0] -= d.alpha;
  d.beta = alg.norm(im);
  d.J = im / d.beta;
  d.in_cone = true;
  return d;
}

inline bool in_sphere(const AlgebraSpec& alg, const Elem& J, double tol = 1e-9) {
  const Elem t = alg.trace(J);
  Elem n = alg.norm_n(J);
  n[0] -= 1.0;
  return t.max_abs() <= tol && n.max_abs() <= tol;
}

/// Real part t(x)/2 and imaginary part x - re(x).
inline double re_part(const AlgebraSpec& alg, const Elem& x) { return alg.trace(x)[0] / 2.0; }
inline Elem im_part(const AlgebraSpec& alg, const Elem& x) {
  Elem im = x;
  im[0] -= re_part(alg, x);
  return im;
}

/// Basis {1, J, J1, J J1, ..., Jh, J Jh} of A as a real vector space.
inline std::vector<Elem> splitting_basis(const AlgebraSpec& alg, const Elem& J) {
  if (!in_sphere(alg, J)) throw DomainError("splitting basis requires a unit imaginary J");
  const std::size_t d = alg.dim();
  std::vector<Elem> basis{alg.one(), J};
  auto rank_of = [&](const std::vector<Elem>& vs) {
    Eigen::MatrixXd m(d, vs.size());
    for (std::size_t c = 0; c < vs.size(); ++c) m.col(c) = alg.to_vector(vs[c]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-10);
    return static_cast<std::size_t>(lu.rank());
  };
  for (std::size_t i = 1; i < d && basis.size() < d; ++i) {
    auto candidate = basis;
    const Elem e = alg.basis(i);
    candidate.push_back(e);
    candidate.push_back(alg.mul(J, e));
    if (rank_of(candidate) == candidate.size()) basis = std::move(candidate);
  }
  if (basis.size() != d) throw NumericError("could not complete a splitting basis");
  return basis;
}

/// Decomposes values along a splitting basis: v = sum_k v_k J_k with
/// v_k in C_J, returned as complex numbers (p + q i <-> p + q J).
class SliceSplitting {
 public:
  SliceSplitting(const AlgebraSpec& alg, const Elem& J) : alg_(&alg), J_(J), basis_(splitting_basis(alg, J)) {
    const std::size_t d = alg.dim();
    Eigen::MatrixXd m(d, d);
    for (std::size_t c = 0; c < d; ++c) m.col(c) = alg.to_vector(basis_[c]);
    lu_ = Eigen::FullPivLU<Eigen::MatrixXd>(m);
  }

  const std::vector<Elem>& basis() const noexcept { return basis_; }
  const Elem& unit() const noexcept { return J_; }
  std::size_t components() const noexcept { return basis_.size() / 2; }

  std::vector<Complex> split(const Elem& v) const {
    const Eigen::VectorXd coords = lu_.solve(alg_->to_vector(v));
    std::vector<Complex> out(components());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = Complex(coords(2 * k), coords(2 * k + 1));
    return out;
  }

  Elem join(const std::vector<Complex>& parts) const {
    Elem v = alg_->zero();
    for (std::size_t k = 0; k < parts.size(); ++k)
      v += basis_[2 * k] * parts[k].real() + basis_[2 * k + 1] * parts[k].imag();
    return v;
  }

 private:
  const AlgebraSpec* alg_;
  Elem J_;
  std::vector<Elem> basis_;
  Eigen::FullPivLU<Eigen::MatrixXd> lu_;
};

namespace detail {

inline Elem gaussian_elem(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Elem e(dim);
  for (std::size_t i = 0; i < dim; ++i) e[i] = g(rng);
  return e;
}

// Gauss-Newton projection onto {t(x) = 0, n(x) = 1}, minimal-norm steps.
inline Elem project_to_sphere(const AlgebraSpec& alg, Elem x) {
  const std::size_t d = alg.dim();
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::VectorXd r(2 * d);
    const Elem t = alg.trace(x);
    Elem n = alg.norm_n(x);
    n[0] -= 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      r(k) = t[k];
      r(d + k) = n[k];
    }
    if (r.lpNorm<Eigen::Infinity>() <= 1e-14) return x;
    Eigen::MatrixXd jac(2 * d, d);
    const Elem xc = alg.conj(x);
    for (std::size_t i = 0; i < d; ++i) {
      const Elem e = alg.basis(i);
      const Elem dt = alg.trace(e);
      const Elem dn = alg.mul(e, xc) + alg.mul(x, alg.conj(e));
      for (std::size_t k = 0; k < d; ++k) {
        jac(k, i) = dt[k];
        jac(d + k, i) = dn[k];
      }
    }
    const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(r);
    x = x - alg.from_vector(step);
  }
  throw NumericError("projection onto the sphere of imaginary units did not converge");
}

}  // namespace detail

/// Samples of the sphere S_A = {t(x) = 0, n(x) = 1}.
///
/// H and O: uniform on the Euclidean unit sphere of im(A). C: uniform on
/// {i, -i}. BC: uniform on {±e+, ±e-}. CL3: Newton projections of random
/// starting points.
inline std::vector<Elem> sample_sphere(const AlgebraSpec& alg, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw DomainError("sample count must be positive");
  std::mt19937_64 rng(seed);
  std::vector<Elem> out;
  out.reserve(count);
  const std::size_t d = alg.dim();
  switch (alg.name()) {
    case AlgebraName::C:
    case AlgebraName::BC: {
      const std::size_t units = alg.name() == AlgebraName::C ? 1 : 2;
      std::uniform_int_distribution<std::size_t> pick(0, 2 * units - 1);
      for (std::size_t s = 0; s < count; ++s) {
        const std::size_t p = pick(rng);
        out.push_back(alg.basis(1 + p % units) * (p < units ? 1.0 : -1.0));
      }
      break;
    }
    case AlgebraName::H:
    case AlgebraName::O:
      for (std::size_t s = 0; s < count; ++s) {
        Elem v = detail::gaussian_elem(d, rng);
        v[0] = 0.0;
        out.push_back(v / v.euclidean());
      }
      break;
    case AlgebraName::CL3: {
      while (out.size() < count) {
        Elem v = detail::gaussian_elem(d, rng);
        v[0] = 0.0;
        v[7] = 0.0;
        out.push_back(detail::project_to_sphere(alg, v / v.euclidean()));
      }
      break;
    }
  }
  return out;
}

/// One-sided sampled bounds for the multiplicative constants:
/// C_A >= max ‖xy‖ over unit pairs, c_A <= min ‖(xy)z‖ over unit x, z in
/// the cone and unit y.
struct MultiplicativeBounds {
  double C_A_lower = 0.0;
  double c_A_upper = 0.0;
};

inline MultiplicativeBounds estimate_constants(const AlgebraSpec& alg, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw DomainError("sample count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  const auto units = sample_sphere(alg, samples * 2, seed ^ 0x9e3779b97f4a7c15ULL);
  auto unit = [&] {
    Elem v = detail::gaussian_elem(alg.dim(), rng);
    return v / alg.norm(v);
  };
  MultiplicativeBounds b{0.0, std::numeric_limits<double>::infinity()};
  for (std::size_t s = 0; s < samples; ++s) {
    const Elem x = unit(), y = unit();
    b.C_A_lower = std::max(b.C_A_lower, alg.norm(alg.mul(x, y)));
    const double th1 = angle(rng), th2 = angle(rng);
    const Elem xc = alg.real(std::cos(th1)) + units[2 * s] * std::sin(th1);
    const Elem zc = alg.real(std::cos(th2)) + units[2 * s + 1] * std::sin(th2);
    b.c_A_upper = std::min(b.c_A_upper, alg.norm(alg.mul(alg.mul(xc, unit()), zc)));
  }
  return b;
}

}  // namespace slicefn
