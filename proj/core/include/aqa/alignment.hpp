#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aqa/features.hpp"
#include "aqa/matrix.hpp"
#include "aqa/med.hpp"

namespace aqa {

enum class AlignMethod { dtw, greedy, acdtw };

std::string_view to_string(AlignMethod m);
AlignMethod parse_align_method(std::string_view s);

/// Predecessor of a DP cell. Rows index the template, columns the test.
enum class Step : std::uint8_t {
  none,      // not reached
  start,     // (0, 0)
  diagonal,  // from (i-1, j-1)
  up,        // from (i-1, j): test frame j is reused
  left,      // from (i, j-1): template frame i is reused
};

struct PathPoint {
  std::size_t i = 0;
  std::size_t j = 0;
  friend bool operator==(const PathPoint&, const PathPoint&) = default;
};

using WarpingPath = std::vector<PathPoint>;

/// score(i, j) = frame score of template frame i vs test frame j; med is the
/// matching distance.
struct DistanceMatrices {
  Matrix<double> score;
  Matrix<double> med;
};

struct PenaltyConfig {
  bool enabled = true;
  // Replaces 2 max(a,b) / (a+b); 0 turns ACDTW into classic DTW.
  std::optional<double> length_ratio_override;

  void validate() const;
};

/// Full alignment output; indices in `path` are 0-based.
struct AlignmentResult {
  AlignMethod method = AlignMethod::acdtw;
  Matrix<double> cost;
  Matrix<double> score;
  Matrix<double> med;
  Matrix<int> P;  // template-frame participation counts
  Matrix<int> Q;  // test-frame participation counts
  Matrix<Step> steps;
  WarpingPath path;
  double fs = 0.0;
  double penalty_coefficient = 0.0;

  double total_cost() const { return cost(cost.rows() - 1, cost.cols() - 1); }
};

/// The first argument is the template: it normalises the per-feature error.
/// Cells whose frames share no valid feature get score 0.
DistanceMatrices distance_matrix(std::span<const FeatureVector> templ, std::span<const FeatureVector> test,
                                 const MedParams& params);

struct DtwResult {
  Matrix<double> cost;
  Matrix<Step> steps;
  WarpingPath path;
};

/// Unconstrained DTW over a precomputed distance matrix. Ties prefer the
/// diagonal, then up, then left.
DtwResult dtw_classic(const Matrix<double>& med);

/// Length-imbalance factor 2 max(a,b) / (a+b), in [1, 2).
double penalty_coef(std::size_t a, std::size_t b);

/// Adaptive constrained DTW. Horizontal and vertical moves pay
/// C = coef * (P + Q) of the predecessor cell times the local distance.
AlignmentResult acdtw(const DistanceMatrices& dm, const PenaltyConfig& penalty = {});
AlignmentResult acdtw(std::span<const FeatureVector> templ, std::span<const FeatureVector> test,
                      const MedParams& params, const PenaltyConfig& penalty = {});

AlignmentResult dtw_align(const DistanceMatrices& dm);

/// Walks from (0,0) to the corner, always taking the best-scoring neighbour.
AlignmentResult greedy_align(const DistanceMatrices& dm);
AlignmentResult greedy_align(std::span<const FeatureVector> templ, std::span<const FeatureVector> test,
                             const MedParams& params);

AlignmentResult align(const DistanceMatrices& dm, AlignMethod method, const PenaltyConfig& penalty = {});
AlignmentResult align(std::span<const FeatureVector> templ, std::span<const FeatureVector> test,
                      const MedParams& params, AlignMethod method, const PenaltyConfig& penalty = {});

/// Mean frame score along the path. Throws std::invalid_argument on an empty path.
double final_score(const Matrix<double>& score, std::span<const PathPoint> path);

/// Follows recorded predecessors back from the bottom-right cell.
WarpingPath backtrack(const Matrix<Step>& steps);

}  // namespace aqa
