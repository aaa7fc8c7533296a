#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqa/features.hpp"

namespace aqa {

/// Parameters of the multi-dimensional exercise distance (MED).
struct MedParams {
  double t = 0.1;             // tolerated relative error per feature
  double score_floor = 1.0;   // frame scores below this are clamped before 100/score
  double zero_ref_eps = 1e-9; // |template value| at or below this counts as zero

  /// Throws std::invalid_argument unless 0 <= t < 1 and 0 < score_floor <= 100.
  void validate() const;
};

class NoValidFeatures : public std::runtime_error {
 public:
  NoValidFeatures() : std::runtime_error("no feature is valid in both frames") {}
};

struct FeatureScore {
  std::size_t index = 0;
  std::string name;  // empty unless a registry was supplied
  double allocated = 0.0;
  double achieved = 0.0;
  double q = 0.0;
};

struct FrameScore {
  double score = 0.0;
  std::vector<FeatureScore> per_feature;
  std::size_t n_valid = 0;
};

/// Relative deviation of the test value from the template value.
double feature_q(double template_value, double test_value, double eps = 1e-9);

/// Piecewise scoring law: full points within tolerance t, linear decay up to
/// q = 1, nothing beyond.
double feature_score(double allocated, double q, double t);

/// Template comes first: q is normalised by the template's value, so the
/// result is not symmetric in general.
FrameScore frame_score(const FeatureVector& templ, const FeatureVector& test, const MedParams& params,
                       const FeatureRegistry* registry = nullptr);

/// Score only, without the per-feature breakdown. Throws NoValidFeatures.
double frame_score_value(const FeatureVector& templ, const FeatureVector& test, const MedParams& params);

/// 100 / max(score, floor) - 1.
double med_from_score(double score, const MedParams& params);

double med(const FeatureVector& templ, const FeatureVector& test, const MedParams& params);

}  // namespace aqa
