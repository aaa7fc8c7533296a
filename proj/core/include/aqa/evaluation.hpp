#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqa/alignment.hpp"
#include "aqa/features.hpp"
#include "aqa/med.hpp"
#include "aqa/metrics.hpp"
#include "aqa/registry.hpp"
#include "aqa/skeleton.hpp"

namespace aqa {

/// Everything needed to turn two keypoint sequences into a final score.
struct ScoringConfig {
  MedParams med;
  AlignMethod method = AlignMethod::acdtw;
  PenaltyConfig penalty;
  FeatureRegistry registry = FeatureRegistry::defaults(FeatureMode::d2d3);
  ExtractionConfig extraction;
  // Worker threads for run_manifest; 0 picks hardware concurrency.
  unsigned threads = 0;

  void validate() const;
};

struct Template {
  std::string category;
  std::string source;
  FeatureSequence features;
};

Template make_template(const KeypointSequence& seq, std::string category, const ScoringConfig& config);

/// Category convention for loose files: the sequence label, else the file stem.
std::string category_of(const KeypointSequence& seq, const std::filesystem::path& path);

/// Aligns template against test; the template normalises feature errors.
AlignmentResult score_pair(const KeypointSequence& templ, const KeypointSequence& test, const ScoringConfig& config);

struct MatchResult {
  std::vector<TemplateScore> ranked;
  std::string predicted;
};

/// Scores the test against every template. A template whose alignment throws
/// is left out of the ranking; if every template fails the last error is rethrown.
MatchResult match_action(const FeatureSequence& test, std::span<const Template> templates,
                         const ScoringConfig& config);
MatchResult match_action(const KeypointSequence& test, std::span<const Template> templates,
                         const ScoringConfig& config);

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DatasetManifest {
  struct TemplateEntry {
    std::filesystem::path path;
    std::string category;
  };
  struct TestEntry {
    std::filesystem::path path;
    std::string category;
    std::optional<double> expert_score;
  };

  std::vector<TemplateEntry> templates;
  std::vector<TestEntry> tests;
  MedParams params;
  FeatureMode mode = FeatureMode::d2d3;
  AlignMethod method = AlignMethod::acdtw;

  /// Relative paths resolve against `base_dir`.
  static DatasetManifest from_json(std::string_view text, const std::filesystem::path& base_dir);
  static DatasetManifest load(const std::filesystem::path& path);
  /// Paths are written relative to `base_dir` when possible.
  std::string to_json(const std::filesystem::path& base_dir = {}) const;

  void validate() const;
};

struct EvaluationReport {
  double accuracy = 0.0;
  double rate80 = 0.0;
  std::optional<double> spearman;
  MatchReport matches;
  AlignMethod method = AlignMethod::acdtw;
  std::string mode;
  MedParams params;

  std::string to_json() const;
  /// Fixed-width summary and per-test table.
  std::string to_table() const;
};

/// Deterministic for a given manifest and config; tests may be scored in
/// parallel but results are kept in manifest order.
EvaluationReport run_manifest(const DatasetManifest& manifest, const ScoringConfig& config);

/// Config implied by a manifest's own params, mode and method.
ScoringConfig config_from_manifest(const DatasetManifest& manifest);

}  // namespace aqa
