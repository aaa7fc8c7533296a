#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aqa {

class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TemplateScore {
  std::size_t template_index = 0;
  std::string category;
  std::string source;
  double fs = 0.0;
};

struct TestMatch {
  std::string source;
  std::string true_category;
  std::optional<double> expert_score;
  std::vector<TemplateScore> ranked;  // descending fs, manifest order on ties
  std::string predicted;
  bool correct = false;
};

struct PairRecord {
  std::size_t test_index = 0;
  std::size_t template_index = 0;
  bool same_class = false;
  double fs = 0.0;
};

struct MatchReport {
  std::vector<TestMatch> tests;
  std::vector<PairRecord> pairs;
};

inline constexpr double kRateThreshold = 80.0;

/// Percentage of tests whose top-ranked template has the true category.
double accuracy(const MatchReport& report);

/// Percentage of scored pairs that land on the right side of 80: same-class
/// above, different-class below. A pair at exactly 80 counts as a miss.
double rate80(const MatchReport& report);

/// Ranks starting at 1; tied values share their average rank.
std::vector<double> average_ranks(std::span<const double> values);

/// Spearman's rho = 1 - 6 sum d^2 / (n (n^2 - 1)) over average ranks.
double spearman(std::span<const double> predicted, std::span<const double> truth);

}  // namespace aqa
