#pragma once

// Reference arithmetic written independently of the library's structure
// tensors: Hamilton's formula for H, quaternion pairs for O (doubling) and
// for CL3 (the isomorphism Cl(0,3) = H + H), complex pairs for BC.

#include <array>
#include <cmath>
#include <complex>
#include <ostream>
#include <random>
#include <vector>

#include "slicefn/slicefn.hpp"

namespace oracle {

using slicefn::Elem;
using Cx = std::complex<double>;

struct Quat {
  double w = 0, x = 0, y = 0, z = 0;
};

inline Quat operator*(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z, a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x, a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}
inline Quat operator+(const Quat& a, const Quat& b) { return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Quat operator-(const Quat& a, const Quat& b) { return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Quat bar(const Quat& a) { return {a.w, -a.x, -a.y, -a.z}; }

inline Quat to_quat(const Elem& e, std::size_t off = 0) { return {e[off], e[off + 1], e[off + 2], e[off + 3]}; }

inline Elem quat_mul(const Elem& a, const Elem& b) {
  const Quat p = to_quat(a) * to_quat(b);
  return Elem{p.w, p.x, p.y, p.z};
}

// Octonion basis 1,i,j,k,l,li,lj,lk. With x = (p, q) meaning p + l q-bar
// style doubling, l*e_m = (0, -e_m) for imaginary e_m, so the upper four
// coordinates carry -q for the imaginary part and +q for the real part.
inline std::pair<Quat, Quat> oct_pair(const Elem& e) {
  return {Quat{e[0], e[1], e[2], e[3]}, Quat{e[4], -e[5], -e[6], -e[7]}};
}
inline Elem oct_elem(const Quat& p, const Quat& q) { return Elem{p.w, p.x, p.y, p.z, q.w, -q.x, -q.y, -q.z}; }

inline Elem oct_mul(const Elem& a, const Elem& b) {
  const auto [p, q] = oct_pair(a);
  const auto [r, s] = oct_pair(b);
  return oct_elem(p * r - bar(s) * q, s * p + q * bar(r));
}

// Cl(0,3) -> H + H: e1 -> (i,-i), e2 -> (j,-j), e3 -> (k,-k).
inline std::pair<Quat, Quat> cl3_pair(const Elem& a) {
  const Quat q1{a[0] - a[7], a[1] + a[6], a[2] - a[5], a[3] + a[4]};
  const Quat q2{a[0] + a[7], -a[1] + a[6], -a[2] - a[5], -a[3] + a[4]};
  return {q1, q2};
}
inline Elem cl3_elem(const Quat& q1, const Quat& q2) {
  Elem a(8);
  a[0] = (q1.w + q2.w) / 2;
  a[7] = (q2.w - q1.w) / 2;
  a[1] = (q1.x - q2.x) / 2;
  a[6] = (q1.x + q2.x) / 2;
  a[2] = (q1.y - q2.y) / 2;
  a[5] = -(q1.y + q2.y) / 2;
  a[3] = (q1.z - q2.z) / 2;
  a[4] = (q1.z + q2.z) / 2;
  return a;
}
inline Elem cl3_mul(const Elem& a, const Elem& b) {
  const auto [p1, p2] = cl3_pair(a);
  const auto [q1, q2] = cl3_pair(b);
  return cl3_elem(p1 * q1, p2 * q2);
}

// BC basis 1, e+, e-, e+e- as complex pairs (1,1), (i,i), (i,-i), (-1,1).
inline std::pair<Cx, Cx> bc_pair(const Elem& a) {
  return {Cx(a[0] - a[3], a[1] + a[2]), Cx(a[0] + a[3], a[1] - a[2])};
}
inline Elem bc_elem(Cx z1, Cx z2) {
  return Elem{(z1.real() + z2.real()) / 2, (z1.imag() + z2.imag()) / 2, (z1.imag() - z2.imag()) / 2,
              (z2.real() - z1.real()) / 2};
}
inline Elem bc_mul(const Elem& a, const Elem& b) {
  const auto [a1, a2] = bc_pair(a);
  const auto [b1, b2] = bc_pair(b);
  return bc_elem(a1 * b1, a2 * b2);
}

inline Elem mul(slicefn::AlgebraName n, const Elem& a, const Elem& b) {
  switch (n) {
    case slicefn::AlgebraName::C: {
      const Cx p = Cx(a[0], a[1]) * Cx(b[0], b[1]);
      return Elem{p.real(), p.imag()};
    }
    case slicefn::AlgebraName::H: return quat_mul(a, b);
    case slicefn::AlgebraName::O: return oct_mul(a, b);
    case slicefn::AlgebraName::CL3: return cl3_mul(a, b);
    case slicefn::AlgebraName::BC: return bc_mul(a, b);
  }
  return a;
}

inline Elem random_elem(std::size_t dim, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Elem e(dim);
  for (std::size_t i = 0; i < dim; ++i) e[i] = g(rng);
  return e;
}

/// Random element of the quadratic cone alpha + beta J with J on the sphere.
inline Elem random_cone(const slicefn::AlgebraSpec& alg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0), b(0.2, 2.0);
  const Elem J = slicefn::sample_sphere(alg, 1, rng())[0];
  return alg.real(u(rng)) + J * b(rng);
}

inline double rel_err(const Elem& got, const Elem& want) {
  return (got - want).max_abs() / (1.0 + want.max_abs());
}

/// Sum of x^m a_m on the slice of x, using plain powers of x: valid since
/// x^m is computed in the associative subalgebra generated by x.
inline Elem eval_poly(const slicefn::AlgebraSpec& alg, const std::vector<Elem>& coeffs, const Elem& x) {
  Elem out = alg.zero(), p = alg.one();
  for (const auto& a : coeffs) {
    out += alg.mul(p, a);
    p = alg.mul(p, x);
  }
  return out;
}

}  // namespace oracle

namespace slicefn {

inline void PrintTo(const Elem& e, std::ostream* os) {
  *os << '(';
  for (std::size_t i = 0; i < e.dim(); ++i) *os << (i ? ", " : "") << e[i];
  *os << ')';
}

}  // namespace slicefn
