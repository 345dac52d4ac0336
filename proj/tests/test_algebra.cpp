#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "isostrata/errors.hpp"
#include "support.hpp"

using namespace isostrata;
using testing_support::builtin;

namespace {

Mat unit(int n, int i, int j) {
  Mat m = Mat::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

}  // namespace

TEST(Algebra, BuiltinsValidate) {
  for (const std::string& name : builtin_names()) {
    const CompatibleGroup g = builtin(name);
    EXPECT_LE(g.structure_residual(), 1e-12) << name;
  }
  EXPECT_THROW(builtin_description("sl3"), Error);
}

TEST(Algebra, BuiltinDimensions) {
  const CompatibleGroup so22 = builtin("so22");
  EXPECT_EQ(so22.dim_v(), 4);
  EXPECT_EQ(so22.dim_k(), 2);
  EXPECT_EQ(so22.dim_p(), 4);
  const CompatibleGroup sl2c = builtin("sl2c-adjoint");
  EXPECT_EQ(sl2c.dim_v(), 6);
  EXPECT_EQ(sl2c.dim_k(), 3);
  EXPECT_EQ(sl2c.dim_p(), 3);
}

TEST(Algebra, BasisIsOrthonormalAndSplit) {
  for (const std::string& name : builtin_names()) {
    const CompatibleGroup g = builtin(name);
    for (int i = 0; i < g.dim_g(); ++i) {
      const Mat& a = g.basis()[static_cast<size_t>(i)];
      if (i < g.dim_k()) EXPECT_LT((a + a.transpose()).norm(), 1e-14);
      else EXPECT_LT((a - a.transpose()).norm(), 1e-14);
      for (int j = 0; j < g.dim_g(); ++j)
        EXPECT_NEAR(linalg::trace_inner(a, g.basis()[static_cast<size_t>(j)]), i == j ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(Algebra, So11ExponentialIsHyperbolicRotation) {
  const CompatibleGroup g = builtin("so11");
  // xi = [[0,1],[1,0]] has norm sqrt(2) in the trace inner product.
  const AlgebraElement xi{Vec(0), Vec::Constant(1, std::sqrt(2.0))};
  Vec v(2);
  v << 0.3, -1.2;
  for (double t : {-1.5, 0.0, 0.4, 2.0}) {
    Vec expected(2);
    expected << std::cosh(t) * v(0) + std::sinh(t) * v(1), std::sinh(t) * v(0) + std::cosh(t) * v(1);
    EXPECT_LT((exp_action(g, xi, t, v) - expected).norm(), 1e-12) << t;
  }
}

TEST(Algebra, Sl2BracketEF) {
  Mat e(2, 2), f(2, 2), h(2, 2);
  e << 0, 1, 0, 0;
  f << 0, 0, 1, 0;
  h << 1, 0, 0, -1;
  EXPECT_LT((linalg::commutator(e, f) - h).norm(), 1e-15);
  EXPECT_LT((sl2_matrix(sl2_coords(e)) - e).norm(), 1e-15);

  // Same bracket through the adjoint group: ad[e,f] = [ad e, ad f].
  const CompatibleGroup g = builtin("sl2r-adjoint");
  auto ad = [](const Mat& x) {
    Mat a(3, 3);
    for (int j = 0; j < 3; ++j) a.col(j) = sl2_coords(linalg::commutator(x, sl2_matrix(Vec::Unit(3, j))));
    return a;
  };
  const AlgebraElement ae = g.split(g.coordinates(ad(e)));
  const AlgebraElement af = g.split(g.coordinates(ad(f)));
  EXPECT_LT((bracket(g, ae, af) - ad(h)).norm(), 1e-12);
}

TEST(Algebra, AdjointCoordinatesMatchCommutator) {
  const CompatibleGroup g = builtin("sl2c-adjoint");
  std::mt19937_64 rng(3);
  const Vec a = testing_support::gaussian(g.dim_g(), rng);
  const Vec b = testing_support::gaussian(g.dim_g(), rng);
  const Vec lhs = g.ad_coords(a) * b;
  const Vec rhs = g.coordinates(linalg::commutator(g.realize(a), g.realize(b)));
  EXPECT_LT((lhs - rhs).norm(), 1e-12);
}

TEST(Algebra, RejectsNonSkewK) {
  GroupDescription d;
  d.dim_v = 2;
  d.k_basis = {unit(2, 0, 1)};
  try {
    build_group(d);
    FAIL() << "expected StructureViolation";
  } catch (const StructureViolation& e) {
    EXPECT_GT(e.residual(), 0.1);
  }
}

TEST(Algebra, RejectsNonClosedBracket) {
  // Two symmetric generators whose commutator is missing from k.
  GroupDescription d;
  d.dim_v = 3;
  d.p_basis = {unit(3, 0, 1) + unit(3, 1, 0), unit(3, 1, 2) + unit(3, 2, 1)};
  EXPECT_THROW(build_group(d), StructureViolation);
}

TEST(Algebra, RejectsWrongShape) {
  GroupDescription d;
  d.dim_v = 2;
  d.k_basis = {Mat::Zero(3, 3)};
  EXPECT_THROW(build_group(d), DimensionMismatch);
}

TEST(Algebra, RejectsNonOrthogonalComponentRep) {
  GroupDescription d = builtin_description("so11");
  d.component_reps = {2.0 * Mat::Identity(2, 2)};
  EXPECT_THROW(build_group(d), StructureViolation);
}

TEST(Algebra, TrivialGroup) {
  GroupDescription d;
  d.dim_v = 2;
  const CompatibleGroup g = build_group(d);
  EXPECT_EQ(g.dim_g(), 0);
  EXPECT_EQ(g.action_matrix(Vec::Ones(2)).cols(), 0);
}

TEST(Algebra, KExpIsOrthogonal) {
  std::mt19937_64 rng(5);
  for (const std::string& name : builtin_names()) {
    const CompatibleGroup g = builtin(name);
    const Mat k = testing_support::random_k(g, rng);
    EXPECT_LT((k * k.transpose() - Mat::Identity(g.dim_v(), g.dim_v())).norm(), 1e-12) << name;
  }
}
