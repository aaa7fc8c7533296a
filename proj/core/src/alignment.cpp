#include "aqa/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace aqa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonempty(std::span<const FeatureVector> a, std::span<const FeatureVector> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("cannot align an empty feature sequence");
}

// Participation counters implied by the predecessor choice at (i, j).
void update_counters(Matrix<int>& P, Matrix<int>& Q, std::size_t i, std::size_t j, Step step) {
  switch (step) {
    case Step::start:
    case Step::diagonal:
      P(i, j) = 1;
      Q(i, j) = 1;
      break;
    case Step::up:
      P(i, j) = 1;
      Q(i, j) = 1 + Q(i - 1, j);
      break;
    case Step::left:
      P(i, j) = 1 + P(i, j - 1);
      Q(i, j) = 1;
      break;
    case Step::none:
      break;
  }
}

AlignmentResult make_result(const DistanceMatrices& dm, AlignMethod method) {
  const auto m = dm.med.rows();
  const auto n = dm.med.cols();
  if (m == 0 || n == 0) throw std::invalid_argument("distance matrix is empty");
  AlignmentResult r;
  r.method = method;
  r.score = dm.score;
  r.med = dm.med;
  r.P = Matrix<int>(m, n, 0);
  r.Q = Matrix<int>(m, n, 0);
  return r;
}

}  // namespace

std::string_view to_string(AlignMethod m) {
  switch (m) {
    case AlignMethod::dtw: return "dtw";
    case AlignMethod::greedy: return "greedy";
    case AlignMethod::acdtw: return "acdtw";
  }
  return "?";
}

AlignMethod parse_align_method(std::string_view s) {
  if (s == "dtw") return AlignMethod::dtw;
  if (s == "greedy") return AlignMethod::greedy;
  if (s == "acdtw") return AlignMethod::acdtw;
  throw std::invalid_argument("unknown alignment method '" + std::string(s) + "'");
}

void PenaltyConfig::validate() const {
  if (length_ratio_override && !(*length_ratio_override >= 0.0 && std::isfinite(*length_ratio_override))) {
    throw std::invalid_argument("penalty override must be finite and >= 0");
  }
}

DistanceMatrices distance_matrix(std::span<const FeatureVector> templ, std::span<const FeatureVector> test,
                                 const MedParams& params) {
  require_nonempty(templ, test);
  const auto width = templ.front().size();
  for (const auto& v : templ) {
    if (v.size() != width) throw std::invalid_argument("template frames disagree on feature count");
  }
  for (const auto& v : test) {
    if (v.size() != width) {
      throw std::invalid_argument("registry mismatch: template has " + std::to_string(width) +
                                  " features, test has " + std::to_string(v.size()));
    }
  }

  DistanceMatrices dm{Matrix<double>(templ.size(), test.size()), Matrix<double>(templ.size(), test.size())};
  for (std::size_t i = 0; i < templ.size(); ++i) {
    for (std::size_t j = 0; j < test.size(); ++j) {
      double s = 0.0;
      try {
        s = frame_score_value(templ[i], test[j], params);
      } catch (const NoValidFeatures&) {
        s = 0.0;
      }
      dm.score(i, j) = s;
      dm.med(i, j) = med_from_score(s, params);
    }
  }
  return dm;
}

DtwResult dtw_classic(const Matrix<double>& med) {
  const auto m = med.rows();
  const auto n = med.cols();
  if (m == 0 || n == 0) throw std::invalid_argument("distance matrix is empty");
  DtwResult r{Matrix<double>(m, n, kInf), Matrix<Step>(m, n, Step::none), {}};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == 0 && j == 0) {
        r.cost(0, 0) = med(0, 0);
        r.steps(0, 0) = Step::start;
        continue;
      }
      // Candidates are compared after adding the local distance so rounding
      // ties resolve exactly as in the penalised recurrence.
      const double d = med(i, j);
      double best = kInf;
      Step step = Step::none;
      if (i > 0 && j > 0 && d + r.cost(i - 1, j - 1) < best) {
        best = d + r.cost(i - 1, j - 1);
        step = Step::diagonal;
      }
      if (i > 0 && d + r.cost(i - 1, j) < best) {
        best = d + r.cost(i - 1, j);
        step = Step::up;
      }
      if (j > 0 && d + r.cost(i, j - 1) < best) {
        best = d + r.cost(i, j - 1);
        step = Step::left;
      }
      r.cost(i, j) = best;
      r.steps(i, j) = step;
    }
  }
  r.path = backtrack(r.steps);
  return r;
}

double penalty_coef(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) throw std::invalid_argument("sequence lengths must be >= 1");
  return 2.0 * static_cast<double>(std::max(a, b)) / static_cast<double>(a + b);
}

AlignmentResult acdtw(const DistanceMatrices& dm, const PenaltyConfig& penalty) {
  penalty.validate();
  auto r = make_result(dm, AlignMethod::acdtw);
  const auto m = dm.med.rows();
  const auto n = dm.med.cols();
  const double coef = !penalty.enabled ? 0.0 : penalty.length_ratio_override.value_or(penalty_coef(m, n));
  r.penalty_coefficient = coef;
  r.cost = Matrix<double>(m, n, kInf);
  r.steps = Matrix<Step>(m, n, Step::none);

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = dm.med(i, j);
      if (i == 0 && j == 0) {
        r.cost(0, 0) = d;
        r.steps(0, 0) = Step::start;
        update_counters(r.P, r.Q, 0, 0, Step::start);
        continue;
      }
      double best = kInf;
      Step step = Step::none;
      if (i > 0 && j > 0) {
        const double d1 = d + r.cost(i - 1, j - 1);
        if (d1 < best) {
          best = d1;
          step = Step::diagonal;
        }
      }
      if (i > 0) {
        const double c = coef * static_cast<double>(r.P(i - 1, j) + r.Q(i - 1, j));
        const double d2 = d + c * d + r.cost(i - 1, j);
        if (d2 < best) {
          best = d2;
          step = Step::up;
        }
      }
      if (j > 0) {
        const double c = coef * static_cast<double>(r.P(i, j - 1) + r.Q(i, j - 1));
        const double d3 = d + c * d + r.cost(i, j - 1);
        if (d3 < best) {
          best = d3;
          step = Step::left;
        }
      }
      r.cost(i, j) = best;
      r.steps(i, j) = step;
      update_counters(r.P, r.Q, i, j, step);
    }
  }
  r.path = backtrack(r.steps);
  r.fs = final_score(r.score, r.path);
  return r;
}

AlignmentResult acdtw(std::span<const FeatureVector> templ, std::span<const FeatureVector> test,
                      const MedParams& params, const PenaltyConfig& penalty) {
  return acdtw(distance_matrix(templ, test, params), penalty);
}

AlignmentResult dtw_align(const DistanceMatrices& dm) {
  auto r = make_result(dm, AlignMethod::dtw);
  auto dtw = dtw_classic(dm.med);
  for (std::size_t i = 0; i < dm.med.rows(); ++i) {
    for (std::size_t j = 0; j < dm.med.cols(); ++j) update_counters(r.P, r.Q, i, j, dtw.steps(i, j));
  }
  r.cost = std::move(dtw.cost);
  r.steps = std::move(dtw.steps);
  r.path = std::move(dtw.path);
  r.fs = final_score(r.score, r.path);
  return r;
}

AlignmentResult greedy_align(const DistanceMatrices& dm) {
  auto r = make_result(dm, AlignMethod::greedy);
  const auto m = dm.med.rows();
  const auto n = dm.med.cols();
  r.cost = Matrix<double>(m, n, kInf);
  r.steps = Matrix<Step>(m, n, Step::none);

  std::size_t i = 0, j = 0;
  r.cost(0, 0) = dm.med(0, 0);
  r.steps(0, 0) = Step::start;
  update_counters(r.P, r.Q, 0, 0, Step::start);
  r.path.push_back({0, 0});
  while (i + 1 < m || j + 1 < n) {
    // Candidates in tie-break order: diagonal, down, right.
    Step step = Step::none;
    double best = -kInf;
    if (i + 1 < m && j + 1 < n && dm.score(i + 1, j + 1) > best) {
      best = dm.score(i + 1, j + 1);
      step = Step::diagonal;
    }
    if (i + 1 < m && dm.score(i + 1, j) > best) {
      best = dm.score(i + 1, j);
      step = Step::up;
    }
    if (j + 1 < n && dm.score(i, j + 1) > best) {
      best = dm.score(i, j + 1);
      step = Step::left;
    }
    const double prev = r.cost(i, j);
    if (step == Step::diagonal || step == Step::up) ++i;
    if (step == Step::diagonal || step == Step::left) ++j;
    r.cost(i, j) = prev + dm.med(i, j);
    r.steps(i, j) = step;
    update_counters(r.P, r.Q, i, j, step);
    r.path.push_back({i, j});
  }
  r.fs = final_score(r.score, r.path);
  return r;
}

AlignmentResult greedy_align(std::span<const FeatureVector> templ, std::span<const FeatureVector> test,
                             const MedParams& params) {
  return greedy_align(distance_matrix(templ, test, params));
}

AlignmentResult align(const DistanceMatrices& dm, AlignMethod method, const PenaltyConfig& penalty) {
  switch (method) {
    case AlignMethod::dtw: return dtw_align(dm);
    case AlignMethod::greedy: return greedy_align(dm);
    case AlignMethod::acdtw: return acdtw(dm, penalty);
  }
  throw std::invalid_argument("unknown alignment method");
}

AlignmentResult align(std::span<const FeatureVector> templ, std::span<const FeatureVector> test,
                      const MedParams& params, AlignMethod method, const PenaltyConfig& penalty) {
  return align(distance_matrix(templ, test, params), method, penalty);
}

double final_score(const Matrix<double>& score, std::span<const PathPoint> path) {
  if (path.empty()) throw std::invalid_argument("final score of an empty path");
  double sum = 0.0;
  for (const auto& p : path) sum += score(p.i, p.j);
  return sum / static_cast<double>(path.size());
}

WarpingPath backtrack(const Matrix<Step>& steps) {
  if (steps.empty()) throw std::invalid_argument("cannot backtrack an empty step matrix");
  WarpingPath path;
  std::size_t i = steps.rows() - 1;
  std::size_t j = steps.cols() - 1;
  while (true) {
    path.push_back({i, j});
    const Step s = steps(i, j);
    if (s == Step::start) break;
    switch (s) {
      case Step::diagonal: --i; --j; break;
      case Step::up: --i; break;
      case Step::left: --j; break;
      default: throw std::logic_error("broken predecessor chain while backtracking");
    }
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace aqa
