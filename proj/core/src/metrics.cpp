#include "aqa/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace aqa {

double accuracy(const MatchReport& report) {
  if (report.tests.empty()) throw MetricError("accuracy of an empty report");
  const auto correct = std::count_if(report.tests.begin(), report.tests.end(), [](const auto& t) { return t.correct; });
  return 100.0 * static_cast<double>(correct) / static_cast<double>(report.tests.size());
}

double rate80(const MatchReport& report) {
  if (report.pairs.empty()) throw MetricError("rate80 of an empty report");
  std::size_t hits = 0;
  for (const auto& p : report.pairs) {
    if (p.same_class ? p.fs > kRateThreshold : p.fs < kRateThreshold) ++hits;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(report.pairs.size());
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t k = 0;
  while (k < order.size()) {
    std::size_t end = k + 1;
    while (end < order.size() && values[order[end]] == values[order[k]]) ++end;
    // positions k..end-1 hold ranks k+1..end
    const double rank = 0.5 * static_cast<double>(k + 1 + end);
    for (std::size_t r = k; r < end; ++r) ranks[order[r]] = rank;
    k = end;
  }
  return ranks;
}

double spearman(std::span<const double> predicted, std::span<const double> truth) {
  if (predicted.size() != truth.size()) {
    throw MetricError("spearman: length mismatch (" + std::to_string(predicted.size()) + " vs " +
                      std::to_string(truth.size()) + ")");
  }
  if (predicted.size() < 2) throw MetricError("spearman needs at least 2 samples");
  const auto rp = average_ranks(predicted);
  const auto rt = average_ranks(truth);
  double sum_d2 = 0.0;
  for (std::size_t i = 0; i < rp.size(); ++i) {
    const double d = rp[i] - rt[i];
    sum_d2 += d * d;
  }
  const double n = static_cast<double>(rp.size());
  return 1.0 - 6.0 * sum_d2 / (n * (n * n - 1.0));
}

}  // namespace aqa
