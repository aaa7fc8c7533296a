#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "aqa/alignment.hpp"
#include "aqa/export.hpp"
#include "json.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace aqa;
namespace at = aqa::testing;

namespace {

DistanceMatrices from_med(const Matrix<double>& med) {
  Matrix<double> score(med.rows(), med.cols());
  for (std::size_t i = 0; i < med.rows(); ++i) {
    for (std::size_t j = 0; j < med.cols(); ++j) score(i, j) = 100.0 / (1.0 + med(i, j));
  }
  return {score, med};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Alignment, SingleCell) {
  Matrix<double> med(1, 1, 0.25);
  const auto r = acdtw(from_med(med));
  EXPECT_EQ(r.path, (WarpingPath{{0, 0}}));
  EXPECT_DOUBLE_EQ(r.total_cost(), 0.25);
  EXPECT_EQ(r.P(0, 0), 1);
  EXPECT_EQ(r.Q(0, 0), 1);
}

TEST(Alignment, SingleRowWalksRight) {
  Matrix<double> med(1, 4, 0.5);
  const auto r = acdtw(from_med(med));
  EXPECT_EQ(r.path, (WarpingPath{{0, 0}, {0, 1}, {0, 2}, {0, 3}}));
  EXPECT_EQ(r.P(0, 3), 4);
  EXPECT_EQ(r.Q(0, 3), 1);
  // coef = 2*4/5; penalties 2, 3, 4 times coef on the reused template frame.
  const double coef = 1.6;
  EXPECT_NEAR(r.total_cost(), 0.5 + 3 * 0.5 + coef * (2 + 3 + 4) * 0.5, 1e-12);
}

TEST(Alignment, IdenticalSequencesGiveDiagonal) {
  std::mt19937_64 rng(1);
  const auto reg = FeatureRegistry::defaults(FeatureMode::d2d3);
  const auto f = at::random_features(rng, 15, reg);
  const auto r = acdtw(f, f, {});
  ASSERT_EQ(r.path.size(), 15u);
  for (std::size_t k = 0; k < 15; ++k) EXPECT_EQ(r.path[k], (PathPoint{k, k}));
  EXPECT_EQ(r.total_cost(), 0.0);
  EXPECT_EQ(r.fs, 100.0);
}

TEST(Alignment, PenaltyCoefficient) {
  EXPECT_DOUBLE_EQ(penalty_coef(10, 10), 1.0);
  EXPECT_DOUBLE_EQ(penalty_coef(10, 6), 1.25);
  EXPECT_DOUBLE_EQ(penalty_coef(6, 10), 1.25);
  EXPECT_DOUBLE_EQ(penalty_coef(100, 1), 200.0 / 101.0);
  EXPECT_THROW(penalty_coef(0, 3), std::invalid_argument);
}

TEST(Alignment, ClassicDtwMatchesBruteForce) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> len(1, 6);
  for (int trial = 0; trial < 60; ++trial) {
    const auto med = at::random_matrix(rng, len(rng), len(rng));
    const auto r = dtw_classic(med);
    EXPECT_EQ(r.cost(med.rows() - 1, med.cols() - 1), at::brute_force_dtw(med));
    EXPECT_TRUE(at::is_valid_path(r.path, med.rows(), med.cols()));
  }
}

TEST(Alignment, ZeroPenaltyReducesToClassicDtw) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> len(1, 20);
  PenaltyConfig zero;
  zero.length_ratio_override = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto dm = from_med(at::random_matrix(rng, len(rng), len(rng)));
    const auto a = acdtw(dm, zero);
    const auto d = dtw_classic(dm.med);
    EXPECT_EQ(a.cost, d.cost);
    EXPECT_EQ(a.path, d.path);
  }
}

TEST(Alignment, DisabledPenaltyEqualsZeroOverride) {
  std::mt19937_64 rng(4);
  const auto dm = from_med(at::random_matrix(rng, 7, 11));
  PenaltyConfig off;
  off.enabled = false;
  PenaltyConfig zero;
  zero.length_ratio_override = 0.0;
  EXPECT_EQ(acdtw(dm, off).cost, acdtw(dm, zero).cost);
}

TEST(Alignment, PathReplayReproducesCost) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> len(1, 25);
  for (int trial = 0; trial < 40; ++trial) {
    const auto r = acdtw(from_med(at::random_matrix(rng, len(rng), len(rng))));
    EXPECT_TRUE(at::is_valid_path(r.path, r.cost.rows(), r.cost.cols()));
    EXPECT_NEAR(at::replay_acdtw_cost(r), r.total_cost(), 1e-9);
    EXPECT_NEAR(at::fixed_path_cost(r.med, r.path, r.penalty_coefficient), r.total_cost(), 1e-9);
  }
}

TEST(Alignment, CountersFollowRecurrence) {
  std::mt19937_64 rng(6);
  const auto r = acdtw(from_med(at::random_matrix(rng, 9, 13)));
  for (std::size_t i = 0; i < 9; ++i) {
    for (std::size_t j = 0; j < 13; ++j) {
      switch (r.steps(i, j)) {
        case Step::start:
        case Step::diagonal:
          EXPECT_EQ(r.P(i, j), 1);
          EXPECT_EQ(r.Q(i, j), 1);
          break;
        case Step::up:
          EXPECT_EQ(r.P(i, j), 1);
          EXPECT_EQ(r.Q(i, j), 1 + r.Q(i - 1, j));
          break;
        case Step::left:
          EXPECT_EQ(r.P(i, j), 1 + r.P(i, j - 1));
          EXPECT_EQ(r.Q(i, j), 1);
          break;
        case Step::none:
          ADD_FAILURE() << "unreached cell " << i << "," << j;
      }
    }
  }
}

TEST(Alignment, LargerCoefficientNeverLowersCost) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto dm = from_med(at::random_matrix(rng, 8, 12));
    double prev = -1.0;
    for (double c : {0.0, 0.5, 1.0, 1.5, 2.0, 4.0}) {
      PenaltyConfig p;
      p.length_ratio_override = c;
      const double cost = acdtw(dm, p).total_cost();
      EXPECT_GE(cost, prev);
      prev = cost;
    }
    // Same holds path by path.
    const auto path = acdtw(dm).path;
    EXPECT_LE(at::fixed_path_cost(dm.med, path, 1.0), at::fixed_path_cost(dm.med, path, 1.5));
  }
}

TEST(Alignment, GreedyFallsForDecoy) {
  const auto dm = at::matrices_from_scores(at::greedy_decoy_scores());
  const auto g = greedy_align(dm);
  const auto a = acdtw(dm);
  EXPECT_EQ(g.path, (WarpingPath{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}, {3, 3}}));
  EXPECT_EQ(a.path, (WarpingPath{{0, 0}, {1, 1}, {2, 2}, {3, 3}}));
  EXPECT_LE(g.fs, a.fs);
  EXPECT_NEAR(a.fs, 97.5, 1e-12);
}

TEST(Alignment, GreedyPathIsValid) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto dm = from_med(at::random_matrix(rng, 1 + trial % 7, 1 + trial % 5));
    EXPECT_TRUE(at::is_valid_path(greedy_align(dm).path, dm.med.rows(), dm.med.cols()));
  }
}

TEST(Alignment, FinalScoreIsPathMean) {
  Matrix<double> s(2, 2);
  s(0, 0) = 80;
  s(0, 1) = 10;
  s(1, 0) = 10;
  s(1, 1) = 60;
  EXPECT_DOUBLE_EQ(final_score(s, WarpingPath{{0, 0}, {1, 1}}), 70.0);
  EXPECT_THROW(final_score(s, WarpingPath{}), std::invalid_argument);
}

TEST(Alignment, DistanceMatrixAgreesWithPerCellMed) {
  std::mt19937_64 rng(9);
  const auto reg = FeatureRegistry::defaults(FeatureMode::d2d3);
  const auto a = at::random_features(rng, 6, reg);
  const auto b = at::random_features(rng, 9, reg);
  const auto dm = distance_matrix(a, b, {});
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      EXPECT_EQ(dm.med(i, j), med(a[i], b[j], {}));
      EXPECT_NEAR(dm.score(i, j), at::oracle_frame_score(a[i], b[j], 0.1), 1e-9);
    }
  }
}

TEST(Alignment, RegistryMismatchRejected) {
  std::mt19937_64 rng(10);
  const auto a = at::random_features(rng, 3, FeatureRegistry::defaults(FeatureMode::d2));
  const auto b = at::random_features(rng, 3, FeatureRegistry::defaults(FeatureMode::d3));
  EXPECT_THROW(distance_matrix(a, b, {}), std::invalid_argument);
  EXPECT_THROW(distance_matrix({}, b, {}), std::invalid_argument);
}

TEST(Alignment, MethodNames) {
  for (auto m : {AlignMethod::dtw, AlignMethod::greedy, AlignMethod::acdtw}) {
    EXPECT_EQ(parse_align_method(to_string(m)), m);
  }
  EXPECT_THROW(parse_align_method("fastdtw"), std::invalid_argument);
}

TEST(Export, WritesAllArtifacts) {
  std::mt19937_64 rng(11);
  const auto r = acdtw(from_med(at::random_matrix(rng, 3, 5)));
  const auto dir = fs::temp_directory_path() / "aqa_export_test";
  fs::remove_all(dir);
  export_alignment(r, dir);
  for (const char* f : {"cost.csv", "score.csv", "P.csv", "Q.csv", "path.json"}) EXPECT_TRUE(fs::exists(dir / f)) << f;

  std::istringstream cost(slurp(dir / "cost.csv"));
  std::string line;
  std::getline(cost, line);
  EXPECT_EQ(line, "i,j,value");
  std::size_t rows = 0;
  while (std::getline(cost, line)) {
    std::size_t i = 0, j = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ls(line);
    ls >> i >> c1 >> j >> c2;
    std::string value;
    ls >> value;
    EXPECT_EQ(std::stod(value), r.cost(i, j));
    ++rows;
  }
  EXPECT_EQ(rows, 15u);

  const auto path = nlohmann::json::parse(slurp(dir / "path.json"));
  ASSERT_EQ(path.size(), r.path.size());
  for (std::size_t k = 0; k < r.path.size(); ++k) {
    EXPECT_EQ(path[k][0].get<std::size_t>(), r.path[k].i);
    EXPECT_EQ(path[k][1].get<std::size_t>(), r.path[k].j);
  }
  fs::remove_all(dir);
}

TEST(Export, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 200; ++k) {
    const double v = u(rng);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}
