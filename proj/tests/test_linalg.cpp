#include <gtest/gtest.h>

#include <cmath>

#include "isostrata/linalg.hpp"

using namespace isostrata;

TEST(Linalg, NullSpaceOfRankOneMatrix) {
  Mat a(2, 3);
  a << 1, 2, 3, 2, 4, 6;
  const Mat n = linalg::null_space(a, 1e-12);
  ASSERT_EQ(n.cols(), 2);
  EXPECT_LT((a * n).norm(), 1e-12);
  EXPECT_LT((n.transpose() * n - Mat::Identity(2, 2)).norm(), 1e-12);
}

TEST(Linalg, NullSpaceWithoutRows) {
  const Mat n = linalg::null_space(Mat(0, 3), 1e-12);
  EXPECT_EQ(n.cols(), 3);
}

TEST(Linalg, SubspaceDistanceOfLines) {
  Mat e1(2, 1), e2(2, 1), d(2, 1);
  e1 << 1, 0;
  e2 << 0, 1;
  d << std::sqrt(0.5), std::sqrt(0.5);
  EXPECT_NEAR(linalg::subspace_distance(e1, e1), 0.0, 1e-15);
  EXPECT_NEAR(linalg::subspace_distance(e1, e2), 1.0, 1e-15);
  // sin of the 45 degree angle
  EXPECT_NEAR(linalg::subspace_distance(e1, d), std::sqrt(0.5), 1e-12);
}

TEST(Linalg, ExpOfRotationGenerator) {
  Mat j(2, 2);
  j << 0, -1, 1, 0;
  const double t = 0.83;
  Mat r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  EXPECT_LT((linalg::expm(t * j) - r).norm(), 1e-14);
}

TEST(Linalg, ColumnSpaceRank) {
  Mat a(3, 3);
  a << 1, 0, 1, 0, 1, 1, 0, 0, 0;
  EXPECT_EQ(linalg::rank(a, 1e-12), 2);
  EXPECT_EQ(linalg::column_space(a, 1e-12).cols(), 2);
}
