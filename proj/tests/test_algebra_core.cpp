#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"

using namespace slicefn;

namespace {

const std::vector<std::string> kAll{"C", "H", "O", "CL3", "BC"};

double assoc_rel(const AlgebraSpec& A, const Elem& x, const Elem& y, const Elem& z) {
  const Elem l = A.mul(A.mul(x, y), z), r = A.mul(x, A.mul(y, z));
  return (l - r).max_abs() / (1.0 + l.max_abs());
}

}  // namespace

TEST(AlgebraCore, UnknownNameRejected) {
  EXPECT_THROW(make_algebra("Q"), UnsupportedAlgebra);
  EXPECT_THROW(make_algebra("sedenion"), UnsupportedAlgebra);
}

TEST(AlgebraCore, UnitIsBasisZero) {
  for (const auto& n : kAll) {
    const AlgebraSpec A = make_algebra(n);
    std::mt19937_64 rng(3);
    const Elem x = oracle::random_elem(A.dim(), rng);
    EXPECT_LT((A.mul(A.one(), x) - x).max_abs(), 1e-15) << n;
    EXPECT_LT((A.mul(x, A.one()) - x).max_abs(), 1e-15) << n;
  }
}

TEST(AlgebraCore, ProductsMatchIndependentOracles) {
  for (const auto& n : kAll) {
    const AlgebraSpec A = make_algebra(n);
    std::mt19937_64 rng(11);
    for (int s = 0; s < 200; ++s) {
      const Elem x = oracle::random_elem(A.dim(), rng), y = oracle::random_elem(A.dim(), rng);
      EXPECT_LT(oracle::rel_err(A.mul(x, y), oracle::mul(A.name(), x, y)), 1e-13) << n;
    }
  }
}

TEST(AlgebraCore, FastPathMatchesTensorBitForBit) {
  for (const auto& n : {"C", "H"}) {
    const AlgebraSpec A = make_algebra(n);
    std::mt19937_64 rng(5);
    for (int s = 0; s < 500; ++s) {
      const Elem x = oracle::random_elem(A.dim(), rng), y = oracle::random_elem(A.dim(), rng);
      const Elem a = A.mul(x, y), b = A.mul_tensor(x, y);
      for (std::size_t i = 0; i < A.dim(); ++i) EXPECT_EQ(a[i], b[i]);
    }
  }
}

TEST(AlgebraCore, QuaternionBasicProducts) {
  const AlgebraSpec H = make_algebra("H");
  const Elem k = H.mul(H.basis(1), H.basis(2));
  EXPECT_EQ(k, H.basis(3));
  const Elem p = H.mul(Elem{1, 2, 0, 0}, Elem{1, -2, 0, 0});
  EXPECT_EQ(p, H.real(5));
  EXPECT_EQ(H.trace(H.basis(1)), H.zero());
}

TEST(AlgebraCore, OctonionsAreNotAssociative) {
  const AlgebraSpec O = make_algebra("O");
  const Elem i = O.basis(1), j = O.basis(2), l = O.basis(4);
  const Elem a = O.mul(O.mul(i, j), l), b = O.mul(i, O.mul(j, l));
  EXPECT_EQ(a, -b);
  EXPECT_GT(a.max_abs(), 0.5);
  // l e_m is the basis element after l.
  EXPECT_EQ(O.mul(l, i), O.basis(5));
  EXPECT_EQ(O.mul(i, l), -O.basis(5));
}

TEST(AlgebraCore, CliffordConjugationAndZeroDivisors) {
  const AlgebraSpec C = make_algebra("CL3");
  EXPECT_EQ(C.conj(C.basis(4)), -C.basis(4));
  EXPECT_EQ(C.conj(C.basis(7)), C.basis(7));
  EXPECT_EQ(C.conj(C.basis(1)), -C.basis(1));
  const Elem a = C.one() + C.basis(7), b = C.one() - C.basis(7);
  EXPECT_EQ(C.mul(a, b), C.zero());
  const Elem n = C.norm_n(a);
  EXPECT_NEAR(n[0], 2.0, 1e-15);
  EXPECT_NEAR(n[7], 2.0, 1e-15);
  EXPECT_FALSE(C.is_real(n));
  EXPECT_FALSE(cone_decompose(C, a).in_cone);
  // e_r^2 = -1 and e123 is central with square 1.
  for (std::size_t r = 1; r <= 3; ++r) EXPECT_EQ(C.mul(C.basis(r), C.basis(r)), C.real(-1));
  EXPECT_EQ(C.mul(C.basis(7), C.basis(7)), C.one());
}

TEST(AlgebraCore, BicomplexUnitsAndSphere) {
  const AlgebraSpec B = make_algebra("BC");
  const Elem ep = B.basis(1), em = B.basis(2);
  EXPECT_EQ(B.mul(ep, em), B.basis(3));
  const auto [z1, z2] = AlgebraSpec::to_bicomplex_pair(B.basis(3));
  EXPECT_EQ(z1, Complex(-1, 0));
  EXPECT_EQ(z2, Complex(1, 0));
  EXPECT_EQ(B.norm_n(ep), B.one());
  const auto d = cone_decompose(B, ep);
  EXPECT_TRUE(d.in_cone);
  EXPECT_DOUBLE_EQ(d.alpha, 0.0);
  EXPECT_DOUBLE_EQ(d.beta, 1.0);
  EXPECT_EQ(d.J, ep);
  // Sphere = {±e+, ±e-}: t = 0, n = 1 forces the point onto these four.
  const auto pts = sample_sphere(B, 200, 9);
  for (const auto& p : pts) {
    const bool ok = p == ep || p == -ep || p == em || p == -em;
    EXPECT_TRUE(ok);
  }
}

TEST(AlgebraCore, AlternativityAndInvolution) {
  for (const auto& n : kAll) {
    const AlgebraSpec A = make_algebra(n);
    std::mt19937_64 rng(17);
    for (int s = 0; s < 1000; ++s) {
      const Elem x = oracle::random_elem(A.dim(), rng), y = oracle::random_elem(A.dim(), rng);
      EXPECT_LT(assoc_rel(A, x, x, y), 1e-12) << n;
      EXPECT_LT(assoc_rel(A, y, x, x), 1e-12) << n;
      EXPECT_LT(oracle::rel_err(A.conj(A.mul(x, y)), A.mul(A.conj(y), A.conj(x))), 1e-12) << n;
      EXPECT_EQ(A.conj(A.conj(x)), x);
    }
  }
}

TEST(AlgebraCore, ArtinWordsUpToLengthFour) {
  for (const auto& n : kAll) {
    const AlgebraSpec A = make_algebra(n);
    std::mt19937_64 rng(23);
    for (int s = 0; s < 200; ++s) {
      const Elem x = oracle::random_elem(A.dim(), rng), y = oracle::random_elem(A.dim(), rng);
      for (int w = 0; w < 16; ++w) {
        const Elem a = (w & 1) ? x : y, b = (w & 2) ? x : y, c = (w & 4) ? x : y, d = (w & 8) ? x : y;
        const Elem ref = A.mul(a, A.mul(b, A.mul(c, d)));
        const Elem forms[] = {A.mul(A.mul(A.mul(a, b), c), d), A.mul(A.mul(a, A.mul(b, c)), d),
                              A.mul(A.mul(a, b), A.mul(c, d)), A.mul(a, A.mul(A.mul(b, c), d))};
        for (const auto& f : forms) EXPECT_LT(oracle::rel_err(f, ref), 1e-10) << n;
      }
    }
  }
}

TEST(AlgebraCore, CompositionForDivisionAlgebras) {
  for (const auto& n : {"H", "O"}) {
    const AlgebraSpec A = make_algebra(n);
    std::mt19937_64 rng(29);
    for (int s = 0; s < 1000; ++s) {
      const Elem x = oracle::random_elem(A.dim(), rng), y = oracle::random_elem(A.dim(), rng);
      const double lhs = A.norm(A.mul(x, y)), rhs = A.norm(x) * A.norm(y);
      EXPECT_NEAR(lhs, rhs, 1e-12 * (1.0 + rhs)) << n;
    }
    const auto b = estimate_constants(A, 500, 1);
    EXPECT_NEAR(b.C_A_lower, 1.0, 1e-12);
  }
}

TEST(AlgebraCore, CliffordNormSupportedOnScalarAndPseudoscalar) {
  const AlgebraSpec C = make_algebra("CL3");
  std::mt19937_64 rng(31);
  for (int s = 0; s < 1000; ++s) {
    const Elem x = oracle::random_elem(8, rng);
    Elem d = C.norm_n(x);
    d[0] -= x.euclidean() * x.euclidean();
    for (std::size_t i = 0; i < 7; ++i) EXPECT_LT(std::abs(d[i]), 1e-12 * (1.0 + x.euclidean() * x.euclidean()));
    // The pseudoscalar part is 2<x, e123 x>.
    const Elem ex = C.mul(C.basis(7), x);
    double dot = 0.0;
    for (std::size_t i = 0; i < 8; ++i) dot += x[i] * ex[i];
    EXPECT_NEAR(d[7], dot, 1e-12 * (1.0 + x.euclidean() * x.euclidean()));
  }
  EXPECT_GE(estimate_constants(C, 500, 2).C_A_lower, 1.0);
}

TEST(AlgebraCore, ConeNormEqualsNormFunction) {
  for (const auto& n : kAll) {
    const AlgebraSpec A = make_algebra(n);
    std::mt19937_64 rng(37);
    for (int s = 0; s < 1000; ++s) {
      const Elem x = oracle::random_cone(A, rng);
      const Elem nx = A.norm_n(x);
      EXPECT_TRUE(A.is_real(nx));
      EXPECT_NEAR(A.norm(x) * A.norm(x), nx[0], 1e-12 * (1.0 + nx[0])) << n;
      const auto d = cone_decompose(A, x);
      ASSERT_TRUE(d.in_cone);
      EXPECT_LT(oracle::rel_err(A.real(d.alpha) + d.J * d.beta, x), 1e-12);
      EXPECT_TRUE(in_sphere(A, d.J, 1e-12));
    }
  }
}

TEST(AlgebraCore, ConeDecomposeExamples) {
  const AlgebraSpec H = make_algebra("H");
  const auto d = cone_decompose(H, Elem{3, 4, 0, 0});
  EXPECT_TRUE(d.in_cone);
  EXPECT_DOUBLE_EQ(d.alpha, 3.0);
  EXPECT_DOUBLE_EQ(d.beta, 4.0);
  EXPECT_EQ(d.J, H.basis(1));
  const auto r = cone_decompose(H, H.real(-2));
  EXPECT_TRUE(r.in_cone);
  EXPECT_EQ(r.beta, 0.0);
}

TEST(AlgebraCore, NonsingularNorms) {
  // n(x) = 0 only at x = 0, including on the known zero divisors of CL3.
  for (const auto& n : kAll) {
    const AlgebraSpec A = make_algebra(n);
    std::mt19937_64 rng(41);
    for (int s = 0; s < 1000; ++s) {
      const Elem x = oracle::random_elem(A.dim(), rng);
      EXPECT_GT(A.norm_n(x).max_abs(), 1e-6 * x.max_abs() * x.max_abs()) << n;
    }
  }
  const AlgebraSpec C = make_algebra("CL3");
  for (const Elem& q : {C.one(), C.basis(1), C.basis(4), C.one() + C.basis(2)}) {
    for (double sgn : {1.0, -1.0}) {
      const Elem z = q + C.mul(q, C.basis(7)) * sgn;
      EXPECT_GT(C.norm_n(z).max_abs(), 0.5);
    }
  }
  const AlgebraSpec B = make_algebra("BC");
  std::mt19937_64 rng(43);
  for (int s = 0; s < 1000; ++s) {
    const Elem x = oracle::random_elem(4, rng);
    EXPECT_GT(B.norm(x), 0.0);
  }
}

TEST(AlgebraCore, SphereSamplesSatisfyConstraints) {
  for (const auto& n : kAll) {
    const AlgebraSpec A = make_algebra(n);
    for (const auto& J : sample_sphere(A, 100, 7)) {
      EXPECT_LE(A.trace(J).max_abs(), 1e-10) << n;
      Elem nn = A.norm_n(J);
      nn[0] -= 1.0;
      EXPECT_LE(nn.max_abs(), 1e-10) << n;
    }
  }
  const AlgebraSpec C = make_algebra("CL3");
  EXPECT_TRUE(in_sphere(C, C.basis(1)));
  EXPECT_TRUE(in_sphere(C, C.basis(6)));
  EXPECT_FALSE(in_sphere(C, C.basis(7)));
  EXPECT_EQ(sample_sphere(C, 5, 1), sample_sphere(C, 5, 1));
}

TEST(AlgebraCore, SplittingBasisIsABasis) {
  for (const auto& n : kAll) {
    const AlgebraSpec A = make_algebra(n);
    const Elem J = A.record_unit();
    const auto b = splitting_basis(A, J);
    ASSERT_EQ(b.size(), A.dim()) << n;
    Eigen::MatrixXd M(A.dim(), A.dim());
    for (std::size_t i = 0; i < A.dim(); ++i) M.col(static_cast<Eigen::Index>(i)) = A.to_vector(b[i]);
    EXPECT_GT(std::abs(M.determinant()), 1e-8) << n;
    EXPECT_EQ(b[0], A.one());
    EXPECT_EQ(b[1], J);
    // Pairs (J_k, J J_k).
    for (std::size_t k = 2; k + 1 < b.size(); k += 2) EXPECT_LT((A.mul(J, b[k]) - b[k + 1]).max_abs(), 1e-14) << n;
  }
  const AlgebraSpec H = make_algebra("H");
  const auto b = splitting_basis(H, H.basis(1));
  EXPECT_EQ(b[2], H.basis(2));
  EXPECT_EQ(b[3], H.basis(3));
}

TEST(AlgebraCore, SplittingRoundTrip) {
  for (const auto& n : kAll) {
    const AlgebraSpec A = make_algebra(n);
    const SliceSplitting S(A, A.record_unit());
    std::mt19937_64 rng(47);
    const Elem x = oracle::random_elem(A.dim(), rng);
    EXPECT_LT(oracle::rel_err(S.join(S.split(x)), x), 1e-13) << n;
  }
}

TEST(AlgebraCore, DimensionMismatchDetected) {
  const AlgebraSpec H = make_algebra("H");
  EXPECT_THROW(H.mul(Elem{1, 0}, Elem{1, 0, 0, 0}), DimensionMismatch);
}

TEST(AlgebraCore, LeftDivideSolves) {
  for (const auto& n : {"H", "O"}) {
    const AlgebraSpec A = make_algebra(n);
    std::mt19937_64 rng(53);
    const Elem a = oracle::random_elem(A.dim(), rng), b = oracle::random_elem(A.dim(), rng);
    EXPECT_LT(oracle::rel_err(A.mul(a, A.left_divide(a, b)), b), 1e-12);
  }
  const AlgebraSpec C = make_algebra("CL3");
  EXPECT_THROW(C.left_divide(C.one() + C.basis(7), C.one()), DomainError);
}
