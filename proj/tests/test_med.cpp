#include <gtest/gtest.h>

#include <random>

#include "aqa/med.hpp"
#include "support.hpp"

using namespace aqa;

namespace {

FeatureVector vec(std::vector<double> values, std::vector<bool> valid = {}) {
  if (valid.empty()) valid.assign(values.size(), true);
  return {std::move(values), std::move(valid)};
}

}  // namespace

TEST(Med, RelativeDeviation) {
  EXPECT_DOUBLE_EQ(feature_q(1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(feature_q(1.0, 1.5), 0.5);
  EXPECT_DOUBLE_EQ(feature_q(2.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(feature_q(0.0, 0.3), 2.0);
  EXPECT_DOUBLE_EQ(feature_q(0.0, 0.0), 0.0);
}

TEST(Med, PiecewiseFeatureScore) {
  EXPECT_DOUBLE_EQ(feature_score(50.0, 0.05, 0.1), 50.0);
  EXPECT_DOUBLE_EQ(feature_score(50.0, 0.1, 0.1), 50.0);
  EXPECT_NEAR(feature_score(50.0, 0.4, 0.1), 35.0, 1e-12);
  EXPECT_NEAR(feature_score(50.0, 1.0, 0.1), 5.0, 1e-12);
  EXPECT_DOUBLE_EQ(feature_score(50.0, 1.2, 0.1), 0.0);
}

TEST(Med, PiecewiseLawIsContinuousAndMonotone) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ut(0.0, 0.99), us(0.1, 100.0);
  for (int k = 0; k < 200; ++k) {
    const double t = ut(rng), s = us(rng);
    EXPECT_LT(std::abs(feature_score(s, std::nextafter(t, 2.0), t) - feature_score(s, t, t)), 1e-12);
    EXPECT_NEAR(feature_score(s, 1.0, t), s * t, 1e-12);
    double prev = s;
    for (double q = 0.0; q <= 1.5; q += 0.01) {
      const double v = feature_score(s, q, t);
      EXPECT_LE(v, prev + 1e-12);
      EXPECT_GE(v, 0.0);
      prev = v;
    }
  }
}

TEST(Med, FrameScoreWorkedExample) {
  const auto templ = vec({1.0, 1.0});
  const auto test = vec({1.05, 1.4});
  const auto s = frame_score(templ, test, {});
  EXPECT_NEAR(s.score, 85.0, 1e-12);
  EXPECT_EQ(s.n_valid, 2u);
  ASSERT_EQ(s.per_feature.size(), 2u);
  EXPECT_DOUBLE_EQ(s.per_feature[0].allocated, 50.0);
  EXPECT_NEAR(s.per_feature[1].achieved, 35.0, 1e-12);
  EXPECT_NEAR(s.per_feature[1].q, 0.4, 1e-12);
}

TEST(Med, OnlyJointlyValidFeaturesCount) {
  const auto templ = vec({1.0, 2.0, 3.0}, {true, false, true});
  const auto test = vec({1.0, 99.0, 10.0}, {true, true, true});
  EXPECT_NEAR(frame_score_value(templ, test, {}), 50.0, 1e-12);
  EXPECT_EQ(frame_score(templ, test, {}).per_feature.size(), 2u);
}

TEST(Med, TemplateNormalisesSoScoreIsAsymmetric) {
  const auto a = vec({1.0}), b = vec({1.5});
  EXPECT_NEAR(frame_score_value(a, b, {}), 60.0, 1e-12);  // q = 0.5
  EXPECT_NEAR(frame_score_value(b, a, {}), 100.0 * (1.0 - 1.0 / 3.0 + 0.1), 1e-12);
}

TEST(Med, DistanceFromScore) {
  const MedParams p;
  EXPECT_DOUBLE_EQ(med_from_score(100.0, p), 0.0);
  EXPECT_DOUBLE_EQ(med_from_score(50.0, p), 1.0);
  EXPECT_DOUBLE_EQ(med_from_score(0.0, p), 99.0);
  EXPECT_DOUBLE_EQ(med_from_score(0.5, p), 99.0);
  MedParams q;
  q.score_floor = 10.0;
  EXPECT_DOUBLE_EQ(med_from_score(0.0, q), 9.0);
}

TEST(Med, NoJointlyValidFeatureRaises) {
  const auto a = vec({1.0, 2.0}, {true, false});
  const auto b = vec({1.0, 2.0}, {false, true});
  EXPECT_THROW(med(a, b, {}), NoValidFeatures);
  EXPECT_THROW(frame_score(a, b, {}), NoValidFeatures);
}

TEST(Med, LengthMismatchRaises) { EXPECT_THROW(med(vec({1.0}), vec({1.0, 2.0}), {}), std::invalid_argument); }

TEST(Med, ParamsValidation) {
  MedParams p;
  EXPECT_NO_THROW(p.validate());
  p.t = 1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.t = -0.01;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.score_floor = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.score_floor = 100.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Med, IdentityRangeAndOracleAgreement) {
  std::mt19937_64 rng(8);
  const auto reg = FeatureRegistry::defaults(FeatureMode::d2d3);
  const auto a = aqa::testing::random_features(rng, 40, reg);
  const auto b = aqa::testing::random_features(rng, 40, reg);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(med(a[k], a[k], {}), 0.0);
    EXPECT_EQ(frame_score_value(a[k], a[k], {}), 100.0);
    const double d = med(a[k], b[k], {});
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 99.0);
    EXPECT_NEAR(frame_score_value(a[k], b[k], {}), aqa::testing::oracle_frame_score(a[k], b[k], 0.1), 1e-9);
  }
}

TEST(Med, BreakdownCarriesRegistryNames) {
  const auto reg = FeatureRegistry::defaults(FeatureMode::d2);
  const auto f = extract_feature_vector(aqa::testing::t_pose(), reg);
  const auto s = frame_score(f, f, {}, &reg);
  ASSERT_EQ(s.per_feature.size(), reg.size());
  EXPECT_EQ(s.per_feature[0].name, reg[0].name);
  EXPECT_EQ(s.score, 100.0);
}
