#include <gtest/gtest.h>

#include <vector>

#include "aqa/geometry.hpp"
#include "support.hpp"

using namespace aqa;
using aqa::testing::kPi;

TEST(Geometry, LimbCenterIsVertexMean) {
  const Vec3 c = limb_center({1, 2, 3}, {3, 2, 1}, {0, 0, 0}, {4, 4, 4});
  EXPECT_EQ(c, (Vec3{2, 2, 2}));
  const Vec3 square = limb_center({0, 0, 0}, {2, 0, 0}, {2, 2, 0}, {0, 2, 0});
  EXPECT_EQ(square, (Vec3{1, 1, 0}));
}

TEST(Geometry, AngleBetweenCardinalCases) {
  EXPECT_DOUBLE_EQ(*angle_between({1, 0, 0}, {3, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(*angle_between({1, 0, 0}, {0, 2, 0}), kPi / 2);
  EXPECT_DOUBLE_EQ(*angle_between({1, 0, 0}, {-1, 0, 0}), kPi);
  EXPECT_NEAR(*angle_between({1, 0, 0}, {1, 1, 0}), kPi / 4, 1e-15);
}

TEST(Geometry, AngleBetweenDegenerateIsNullopt) {
  EXPECT_FALSE(angle_between({0, 0, 0}, {1, 0, 0}).has_value());
  EXPECT_FALSE(angle_between({1, 0, 0}, {1e-12, 0, 0}).has_value());
}

TEST(Geometry, AngleBetweenIsScaleFree) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  for (int k = 0; k < 100; ++k) {
    const Vec3 u{n(rng), n(rng), n(rng)}, v{n(rng), n(rng), n(rng)};
    const double a = *angle_between(u, v);
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, kPi);
    EXPECT_NEAR(*angle_between(7.5 * u, 0.01 * v), a, 1e-12);
    EXPECT_NEAR(*angle_between(v, u), a, 1e-15);
  }
}

TEST(Geometry, BarycenterPointMassAndMidpoint) {
  LandmarkArray lm{};
  lm[0] = {1, 2, 3, 1};
  lm[5] = {3, 4, 5, 1};
  const std::vector<std::pair<int, double>> point{{0, 1.0}};
  EXPECT_EQ(barycenter(lm, point), (Vec3{1, 2, 3}));
  const std::vector<std::pair<int, double>> half{{0, 0.5}, {5, 0.5}};
  EXPECT_EQ(barycenter(lm, half), (Vec3{2, 3, 4}));
}

TEST(Geometry, DefaultBarycenterOfSymmetricPoseIsOnMidline) {
  const auto frame = aqa::testing::t_pose();
  const BarycenterTable table;
  double total = 0.0;
  for (const auto& [i, w] : table.entries()) total += w;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(barycenter(frame.lm3d, table.entries()).x, 0.0, 1e-9);
  EXPECT_NEAR(barycenter(frame.lm2d, table.entries()).x, 0.5, 1e-9);
}
