#include <gtest/gtest.h>

#include <random>

#include "support/builders.hpp"

using namespace slicefn;

using build::admissible;
using build::lin;
using build::random_poly;
using build::random_tame;

TEST(RationalCalculus, ConvolutionProductExamples) {
  const auto H = shared_algebra("H");
  const Elem i = H->basis(1), j = H->basis(2), k = H->basis(3);
  const StarPoly p = star_mul(*H, StarPoly::linear(i), StarPoly::linear(j));
  ASSERT_EQ(p.degree(), 2);
  EXPECT_EQ(p[0], k);
  EXPECT_EQ(p[1], -(i + j));
  EXPECT_EQ(p[2], H->one());
  const Elem y{1, 2, -1, 0.5};
  const StarPoly d = star_mul(*H, StarPoly::linear(y), StarPoly::linear(H->conj(y)));
  const StarPoly ref = delta_poly(4, SphereId{1.0, std::sqrt(5.25)});
  for (int m = 0; m <= 2; ++m) EXPECT_LT(rel_diff(d[m], ref[m]), 1e-14);
  const StarPoly one = StarPoly::constant(H->one());
  EXPECT_EQ(star_mul(*H, p, one).coeffs(), p.coeffs());
}

TEST(RationalCalculus, ConvolutionAgreesWithStemProduct) {
  for (const auto& name : {"H", "O", "CL3", "BC"}) {
    const auto A = shared_algebra(name);
    std::mt19937_64 rng(2);
    const StarPoly p = random_poly(*A, rng, 3), q = random_poly(*A, rng, 2);
    const SliceFn pq = RationalExpr::poly(A, star_mul(*A, p, q)).as_slice_fn();
    const SliceFn ref = slice_product(power_series_fn(A, p.coeffs()), power_series_fn(A, q.coeffs()));
    for (int s = 0; s < 100; ++s) {
      const Elem x = oracle::random_cone(*A, rng);
      EXPECT_LT(rel_diff(pq(x), ref(x)), 1e-12) << name;
    }
  }
}

TEST(RationalCalculus, DeltaPolynomials) {
  auto coeffs = [](const SphereId& s) {
    const StarPoly p = delta_poly(1, s);
    return std::vector<double>{p[0][0], p[1][0], p[2][0]};
  };
  EXPECT_EQ(coeffs({0, 1}), (std::vector<double>{1, 0, 1}));
  EXPECT_EQ(coeffs({2, 0}), (std::vector<double>{4, -4, 1}));
  EXPECT_EQ(coeffs({1, 2}), (std::vector<double>{5, -2, 1}));
}

TEST(RationalCalculus, StarPowers) {
  const auto H = shared_algebra("H");
  const Elem i = H->basis(1);
  const StarPoly sq = star_power(H, i, 2).numerator();
  EXPECT_EQ(sq[0], H->real(-1));
  EXPECT_EQ(sq[1], i * -2.0);
  EXPECT_EQ(sq[2], H->one());
  const RationalExpr inv1 = star_power(H, -i, -1);
  EXPECT_LT(rel_diff(inv1.eval(i * 2.0), i * (-1.0 / 3.0)), 1e-15);
  const RationalExpr zero = star_power(H, i, 0);
  EXPECT_EQ(zero.eval(Elem{1, 2, 3, 0}), H->one());
}

TEST(RationalCalculus, EvaluationExamples) {
  const auto H = shared_algebra("H");
  const Elem i = H->basis(1);
  const RationalExpr f = inv(lin(H, -i));
  EXPECT_LT(rel_diff(f.eval(i * 2.0), i * (-1.0 / 3.0)), 1e-15);
  EXPECT_THROW(f.eval(H->basis(3)), SingularPointError);
  try {
    f.eval(H->basis(2));
  } catch (const SingularPointError& e) {
    EXPECT_EQ(e.sphere().alpha, 0.0);
    EXPECT_NEAR(e.sphere().beta, 1.0, 1e-12);
  }
  std::mt19937_64 rng(3);
  const Elem y{0.5, -1, 0.25, 2};
  const RationalExpr one = mul(lin(H, y), inv(lin(H, y)));
  for (const Elem& x : admissible(one, rng, 50)) EXPECT_LT(rel_diff(one.eval(x), H->one()), 1e-12);
}

TEST(RationalCalculus, CliffordExampleAgainstOracle) {
  const auto C = shared_algebra("CL3");
  const Elem e1 = C->basis(1), e23 = C->basis(6);
  const RationalExpr f = mul(inv(lin(C, -e1)), lin(C, e23));
  const Elem x = e1 * 2.0;
  // (x^2 + 1)^{-1} (x^2 - x (e1 + e23) + e1 e23) with products from H + H.
  const Elem g = oracle::cl3_mul(x, x) - oracle::cl3_mul(x, e1 + e23) + oracle::cl3_mul(e1, e23);
  EXPECT_LT(rel_diff(f.eval(x), g * (-1.0 / 3.0)), 1e-14);
  EXPECT_TRUE(is_tame(mul(lin(C, e1), lin(C, e23))));
}

TEST(RationalCalculus, TamenessDecisions) {
  for (const auto& name : {"H", "O", "CL3", "BC"}) {
    const auto A = shared_algebra(name);
    std::mt19937_64 rng(5);
    EXPECT_TRUE(is_tame(lin(A, oracle::random_cone(*A, rng)))) << name;
    std::vector<Elem> real_coeffs{A->real(1.5), A->real(-2), A->real(0.5), A->one()};
    EXPECT_TRUE(is_tame(RationalExpr::poly(A, StarPoly(A->dim(), real_coeffs)))) << name;
  }
  const auto C = shared_algebra("CL3");
  const RationalExpr bad = RationalExpr::constant(C, C->one() + C->basis(7));
  EXPECT_FALSE(is_tame(bad));
  EXPECT_THROW(inv(bad), InverseUnavailable);
  EXPECT_THROW(inv(RationalExpr::constant(C, C->zero())), InverseUnavailable);
}

TEST(RationalCalculus, InverseOfConstant) {
  const auto H = shared_algebra("H");
  const Elem a{1, 2, -1, 3};
  const RationalExpr f = inv(RationalExpr::constant(H, a));
  EXPECT_LT(rel_diff(f.eval(Elem{0.3, 0.1, 0, 0}), H->conj(a) / H->norm_n(a)[0]), 1e-15);
  EXPECT_TRUE(f.singular_spheres().empty());
}

TEST(RationalCalculus, InverseOfQuadraticProduct) {
  const auto H = shared_algebra("H");
  const RationalExpr g = mul(lin(H, H->basis(1)), lin(H, H->basis(2)));
  const RationalExpr one = mul(g, inv(g));
  std::mt19937_64 rng(7);
  for (const Elem& x : admissible(one, rng, 100)) EXPECT_LT(rel_diff(one.eval(x), H->one()), 1e-12);
}

TEST(RationalCalculus, SingularSpheres) {
  const auto H = shared_algebra("H");
  const Elem i = H->basis(1);
  const auto s1 = inv(lin(H, -i)).singular_spheres();
  ASSERT_EQ(s1.size(), 1u);
  EXPECT_NEAR(s1[0].sphere.alpha, 0.0, 1e-12);
  EXPECT_NEAR(s1[0].sphere.beta, 1.0, 1e-12);
  EXPECT_EQ(s1[0].multiplicity, 1);
  EXPECT_TRUE(lin(H, i).singular_spheres().empty());
  const auto s2 = star_power(H, -i, -2).singular_spheres();
  ASSERT_EQ(s2.size(), 1u);
  EXPECT_EQ(s2[0].multiplicity, 2);
  // Distinct spheres and a real point.
  const RationalExpr mix = add(inv(lin(H, Elem{1, 0, 2, 0})), inv(lin(H, H->real(-0.5))));
  const auto s3 = mix.singular_spheres();
  ASSERT_EQ(s3.size(), 2u);
}

TEST(RationalCalculus, RootClustersWithMultiplicity) {
  // (x - 1)^3 (x^2 + 4)^2
  RealPoly p({1.0});
  for (int k = 0; k < 3; ++k) p = p * RealPoly({-1.0, 1.0});
  for (int k = 0; k < 2; ++k) p = p * RealPoly({4.0, 0.0, 1.0});
  const auto s = root_spheres(p);
  ASSERT_EQ(s.size(), 2u);
  int real_mult = 0, sphere_mult = 0;
  for (const auto& [id, m] : s) {
    if (id.is_real()) {
      EXPECT_NEAR(id.alpha, 1.0, 1e-6);
      real_mult = m;
    } else {
      EXPECT_NEAR(id.beta, 2.0, 1e-6);
      sphere_mult = m;
    }
  }
  EXPECT_EQ(real_mult, 3);
  EXPECT_EQ(sphere_mult, 2);
}

TEST(RationalCalculus, DivisionByRealPolynomial) {
  const auto H = shared_algebra("H");
  std::mt19937_64 rng(11);
  const StarPoly q = random_poly(*H, rng, 2);
  const RealPoly d = delta_real(SphereId{0.5, 1.5});
  const StarPoly p = scale(d * d, q);
  EXPECT_EQ(divisibility(p, d), 2);
  const auto [quot, rem] = divmod(p + StarPoly::constant(H->basis(2)), d);
  ASSERT_LE(rem.degree(), 1);
  EXPECT_LT(rel_diff(rem[0], H->basis(2)), 1e-12);
  if (rem.degree() == 1) {
    EXPECT_LT(rem[1].max_abs(), 1e-12 * p.max_coeff());
  }
}

TEST(RationalCalculus, NormalFunctionIsMultiplicative) {
  for (const auto& name : {"H", "O", "CL3", "BC"}) {
    const auto A = shared_algebra(name);
    std::mt19937_64 rng(13);
    const RationalExpr f = random_tame(A, rng, 2), g = random_tame(A, rng, 1);
    const SliceFn Nfg = normal_fn(mul(f, g).as_slice_fn());
    const SliceFn Nf = normal_fn(f.as_slice_fn()), Ng = normal_fn(g.as_slice_fn());
    for (int s = 0; s < 100; ++s) {
      const Elem x = oracle::random_cone(*A, rng);
      EXPECT_LT(rel_diff(Nfg(x), A->mul(Nf(x), Ng(x))), 1e-9 * (1.0 + Nfg(x).max_abs())) << name;
    }
  }
}

TEST(RationalCalculus, InverseCommutesWithConjugation) {
  for (const auto& name : {"C", "H", "O", "CL3", "BC"}) {
    const auto A = shared_algebra(name);
    std::mt19937_64 rng(17);
    for (int t = 0; t < 5; ++t) {
      const RationalExpr f = random_tame(A, rng, 2);
      const RationalExpr a = inv(conj(f)), b = conj(inv(f));
      for (const Elem& x : admissible(a, rng, 20)) EXPECT_LT(rel_diff(a.eval(x), b.eval(x)), 1e-9) << name;
    }
  }
}

TEST(RationalCalculus, ClosureMatchesStemArithmetic) {
  for (const auto& name : {"H", "O", "CL3"}) {
    const auto A = shared_algebra(name);
    std::mt19937_64 rng(19);
    const RationalExpr f = inv(random_tame(A, rng, 1)), g = RationalExpr::poly(A, random_poly(*A, rng, 2));
    const SliceFn F = f.as_slice_fn(), G = g.as_slice_fn();
    const std::pair<RationalExpr, SliceFn> cases[] = {{add(f, g), slice_sum(F, G)},
                                                      {mul(f, g), slice_product(F, G)},
                                                      {mul(g, f), slice_product(G, F)},
                                                      {conj(f), conjugate_fn(F)}};
    for (const auto& [e, s] : cases)
      for (const Elem& x : admissible(e, rng, 30)) EXPECT_LT(rel_diff(e.eval(x), s(x)), 1e-10) << name;
  }
}

TEST(RationalCalculus, MoufangIdentitiesOnTameElements) {
  for (const auto& name : {"O", "CL3", "H"}) {
    const auto A = shared_algebra(name);
    std::mt19937_64 rng(23);
    const RationalExpr f = inv(random_tame(A, rng, 1)), g = random_tame(A, rng, 2), h = mul(random_tame(A, rng, 1), inv(random_tame(A, rng, 1)));
    const RationalExpr m1 = mul(mul(mul(f, g), f), h), m2 = mul(f, mul(g, mul(f, h)));
    const RationalExpr l1 = mul(mul(f, f), g), l2 = mul(f, mul(f, g));
    for (const Elem& x : admissible(m1, rng, 50)) {
      EXPECT_LT(rel_diff(m1.eval(x), m2.eval(x)), 1e-8) << name;
      EXPECT_LT(rel_diff(l1.eval(x), l2.eval(x)), 1e-8) << name;
    }
  }
}

TEST(RationalCalculus, TameFunctionsAreNotZeroDivisors) {
  // f^{-•}·(f·g) = g: a vanishing f·g forces g to vanish.
  for (const auto& name : {"O", "CL3", "BC"}) {
    const auto A = shared_algebra(name);
    std::mt19937_64 rng(29);
    const RationalExpr f = random_tame(A, rng, 2);
    const RationalExpr g = RationalExpr::poly(A, random_poly(*A, rng, 2));
    const RationalExpr back = mul(inv(f), mul(f, g));
    for (const Elem& x : admissible(back, rng, 200)) EXPECT_LT(rel_diff(back.eval(x), g.eval(x)), 1e-8) << name;
  }
  // Without tameness the conclusion fails: (1 + e123)(1 - e123) = 0.
  const auto C = shared_algebra("CL3");
  const RationalExpr z = mul(RationalExpr::constant(C, C->one() + C->basis(7)), RationalExpr::constant(C, C->one() - C->basis(7)));
  EXPECT_TRUE(z.eval(C->basis(1) * 0.5).is_zero());
}

TEST(RationalCalculus, MixedAlgebrasRejected) {
  const auto H = shared_algebra("H");
  const auto O = shared_algebra("O");
  EXPECT_THROW(add(lin(H, H->basis(1)), lin(O, O->basis(1))), DimensionMismatch);
}
