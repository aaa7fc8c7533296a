#include "aqa/med.hpp"

#include <algorithm>
#include <cmath>

namespace aqa {

namespace {

void check_same_size(const FeatureVector& a, const FeatureVector& b) {
  if (a.size() != b.size() || a.valid.size() != a.size() || b.valid.size() != b.size()) {
    throw std::invalid_argument("feature vectors come from different registries (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + " features)");
  }
}

// Fraction of the allocated points kept for q under tolerance t.
double score_fraction(double q, double t) {
  if (q <= t) return 1.0;
  if (q <= 1.0) return 1.0 - q + t;
  return 0.0;
}

}  // namespace

void MedParams::validate() const {
  if (!(t >= 0.0 && t < 1.0)) throw std::invalid_argument("t must satisfy 0 <= t < 1");
  if (!(score_floor > 0.0 && score_floor <= 100.0)) {
    throw std::invalid_argument("score_floor must satisfy 0 < score_floor <= 100");
  }
  if (!(zero_ref_eps >= 0.0) || !std::isfinite(zero_ref_eps)) {
    throw std::invalid_argument("zero_ref_eps must be finite and non-negative");
  }
}

double feature_q(double template_value, double test_value, double eps) {
  if (std::abs(template_value) <= eps) {
    // A zero template value cannot normalise; any non-zero test value is a full miss.
    return std::abs(test_value) <= eps ? 0.0 : 2.0;
  }
  return std::abs(template_value - test_value) / std::abs(template_value);
}

double feature_score(double allocated, double q, double t) {
  if (q <= t) return allocated;
  if (q <= 1.0) return allocated * (1.0 - q + t);
  return 0.0;
}

FrameScore frame_score(const FeatureVector& templ, const FeatureVector& test, const MedParams& params,
                       const FeatureRegistry* registry) {
  check_same_size(templ, test);
  FrameScore out;
  for (std::size_t k = 0; k < templ.size(); ++k) {
    if (templ.valid[k] && test.valid[k]) ++out.n_valid;
  }
  if (out.n_valid == 0) throw NoValidFeatures();

  const double allocated = 100.0 / static_cast<double>(out.n_valid);
  double fraction_sum = 0.0;
  out.per_feature.reserve(out.n_valid);
  for (std::size_t k = 0; k < templ.size(); ++k) {
    if (!(templ.valid[k] && test.valid[k])) continue;
    const double q = feature_q(templ.values[k], test.values[k], params.zero_ref_eps);
    const double fraction = score_fraction(q, params.t);
    fraction_sum += fraction;
    FeatureScore fs{k, {}, allocated, allocated * fraction, q};
    if (registry != nullptr && k < registry->size()) fs.name = (*registry)[k].name;
    out.per_feature.push_back(std::move(fs));
  }
  // Summing fractions keeps a perfect match at exactly 100.
  out.score = std::clamp(100.0 * fraction_sum / static_cast<double>(out.n_valid), 0.0, 100.0);
  return out;
}

double frame_score_value(const FeatureVector& templ, const FeatureVector& test, const MedParams& params) {
  check_same_size(templ, test);
  std::size_t n = 0;
  double fraction_sum = 0.0;
  for (std::size_t k = 0; k < templ.size(); ++k) {
    if (!(templ.valid[k] && test.valid[k])) continue;
    ++n;
    fraction_sum += score_fraction(feature_q(templ.values[k], test.values[k], params.zero_ref_eps), params.t);
  }
  if (n == 0) throw NoValidFeatures();
  return std::clamp(100.0 * fraction_sum / static_cast<double>(n), 0.0, 100.0);
}

double med_from_score(double score, const MedParams& params) {
  return 100.0 / std::max(score, params.score_floor) - 1.0;
}

double med(const FeatureVector& templ, const FeatureVector& test, const MedParams& params) {
  return med_from_score(frame_score_value(templ, test, params), params);
}

}  // namespace aqa
