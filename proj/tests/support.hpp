#pragma once

// Test-only fixtures and oracles. Oracles are written against the published
// recurrences directly and share no code with the library paths they check.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "aqa/alignment.hpp"
#include "aqa/features.hpp"
#include "aqa/matrix.hpp"
#include "aqa/skeleton.hpp"
#include "aqa/synthetic.hpp"

namespace aqa::testing {

inline constexpr double kPi = std::numbers::pi;

/// Symmetric T-pose: arms straight out, legs slightly apart, facing the camera.
inline SkeletonFrame t_pose() {
  synthetic::PoseParams p;
  p.shoulder_abduction[0] = p.shoulder_abduction[1] = 90.0;
  p.elbow_flexion[0] = p.elbow_flexion[1] = 0.0;
  p.hip_abduction[0] = p.hip_abduction[1] = 8.0;
  p.knee_flexion[0] = p.knee_flexion[1] = 10.0;
  p.hip_flexion[0] = p.hip_flexion[1] = 5.0;
  return synthetic::build_frame(p);
}

/// A frame whose 2D and 3D landmarks all sit at the given points (z = 0 in 2D).
inline SkeletonFrame frame_from_points(const std::vector<std::pair<int, Vec3>>& points) {
  SkeletonFrame f;
  for (const auto& [i, p] : points) {
    f.lm3d[static_cast<std::size_t>(i)] = {p.x, p.y, p.z, 1.0};
    f.lm2d[static_cast<std::size_t>(i)] = {p.x, p.y, 0.0, 1.0};
  }
  return f;
}

inline std::vector<FeatureVector> random_features(std::mt19937_64& rng, std::size_t length,
                                                  const FeatureRegistry& reg) {
  auto seq = synthetic::random_sequence(rng, length);
  return extract_sequence(seq, reg);
}

inline Matrix<double> random_matrix(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  Matrix<double> out(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = u(rng);
  }
  return out;
}

/// Minimum accumulated cost over every monotone path from (0,0) to the
/// corner with steps right, down or diagonal. Sums run in path order.
inline double brute_force_dtw(const Matrix<double>& d) {
  const auto m = d.rows(), n = d.cols();
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j, double acc) {
    acc = acc + d(i, j);
    if (i == m - 1 && j == n - 1) {
      best = std::min(best, acc);
      return;
    }
    if (i + 1 < m && j + 1 < n) walk(i + 1, j + 1, acc);
    if (i + 1 < m) walk(i + 1, j, acc);
    if (j + 1 < n) walk(i, j + 1, acc);
  };
  walk(0, 0, 0.0);
  return best;
}

/// Re-accumulates local distances plus the reuse penalty implied by each
/// recorded predecessor along the result's path.
inline double replay_acdtw_cost(const AlignmentResult& r) {
  const auto& path = r.path;
  double total = r.med(path[0].i, path[0].j);
  for (std::size_t k = 1; k < path.size(); ++k) {
    const auto [i, j] = path[k];
    const auto [pi, pj] = path[k - 1];
    const double d = r.med(i, j);
    const bool diagonal = (i == pi + 1 && j == pj + 1);
    const double c = diagonal ? 0.0 : r.penalty_coefficient * static_cast<double>(r.P(pi, pj) + r.Q(pi, pj));
    total = (d + c * d) + total;
  }
  return total;
}

/// Cost of a fixed path under a given length-ratio coefficient, with reuse
/// counters following the path itself.
inline double fixed_path_cost(const Matrix<double>& med, const WarpingPath& path, double coef) {
  int P = 1, Q = 1;
  double total = med(path[0].i, path[0].j);
  for (std::size_t k = 1; k < path.size(); ++k) {
    const auto [i, j] = path[k];
    const auto [pi, pj] = path[k - 1];
    const double d = med(i, j);
    if (i == pi + 1 && j == pj + 1) {
      total += d;
      P = Q = 1;
    } else if (i == pi + 1) {
      total += d + coef * (P + Q) * d;
      Q += 1;
      P = 1;
    } else {
      total += d + coef * (P + Q) * d;
      P += 1;
      Q = 1;
    }
  }
  return total;
}

/// Frame score straight from the per-feature allocation: S = 100/n over
/// jointly valid features, piecewise decay on q = |x - y| / x.
inline double oracle_frame_score(const FeatureVector& x, const FeatureVector& y, double t) {
  std::size_t n = 0;
  for (std::size_t k = 0; k < x.size(); ++k) n += (x.valid[k] && y.valid[k]) ? 1 : 0;
  const double s = 100.0 / static_cast<double>(n);
  double total = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x.valid[k] && y.valid[k])) continue;
    double q;
    if (std::abs(x.values[k]) <= 1e-9) {
      q = std::abs(y.values[k]) <= 1e-9 ? 0.0 : 2.0;
    } else {
      q = std::abs(x.values[k] - y.values[k]) / x.values[k];
    }
    if (q <= t) {
      total += s;
    } else if (q <= 1.0) {
      total += s * (1.0 - q + t);
    }
  }
  return total;
}

inline bool is_valid_path(const WarpingPath& path, std::size_t m, std::size_t n) {
  if (path.empty() || path.front() != PathPoint{0, 0} || path.back() != PathPoint{m - 1, n - 1}) return false;
  for (std::size_t k = 1; k < path.size(); ++k) {
    const auto di = path[k].i - path[k - 1].i;
    const auto dj = path[k].j - path[k - 1].j;
    if (path[k].i < path[k - 1].i || path[k].j < path[k - 1].j) return false;
    if (di > 1 || dj > 1 || (di == 0 && dj == 0)) return false;
  }
  return true;
}

inline DistanceMatrices matrices_from_scores(const Matrix<double>& score) {
  DistanceMatrices dm{score, Matrix<double>(score.rows(), score.cols())};
  for (std::size_t i = 0; i < score.rows(); ++i) {
    for (std::size_t j = 0; j < score.cols(); ++j) dm.med(i, j) = 100.0 / std::max(score(i, j), 1.0) - 1.0;
  }
  return dm;
}

/// 4x4 score matrix with a perfect diagonal except (1,1), and a tempting
/// first row that leads a greedy walker into a low-scoring last column.
inline Matrix<double> greedy_decoy_scores() {
  const double rows[4][4] = {
      {100, 95, 94, 93},
      {5, 90, 5, 10},
      {5, 5, 100, 10},
      {5, 5, 5, 100},
  };
  Matrix<double> s(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) s(i, j) = rows[i][j];
  }
  return s;
}

/// Permutation of registry indices that maps each feature to its left/right
/// counterpart by name; unpaired features map to themselves.
inline std::vector<std::size_t> mirror_permutation(const FeatureRegistry& reg) {
  std::vector<std::size_t> perm(reg.size());
  for (std::size_t k = 0; k < reg.size(); ++k) {
    std::string name = reg[k].name;
    if (auto p = name.find("left_"); p != std::string::npos) {
      name.replace(p, 5, "right_");
    } else if (auto q = name.find("right_"); q != std::string::npos) {
      name.replace(q, 6, "left_");
    }
    perm[k] = reg.index_of(name).value();
  }
  return perm;
}

inline SkeletonFrame transform_frame(const SkeletonFrame& f, double scale, Vec3 offset) {
  SkeletonFrame out = f;
  for (auto* arr : {&out.lm2d, &out.lm3d}) {
    for (auto& lm : *arr) {
      lm.x = scale * lm.x + offset.x;
      lm.y = scale * lm.y + offset.y;
      if (arr == &out.lm3d) lm.z = scale * lm.z + offset.z;
    }
  }
  return out;
}

}  // namespace aqa::testing
