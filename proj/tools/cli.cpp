#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aqa/alignment.hpp"
#include "aqa/evaluation.hpp"
#include "aqa/export.hpp"
#include "aqa/synthetic.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace aqa::cli {

namespace {

struct Options {
  std::string method = "acdtw";
  std::string mode = "2d3d";
  double t = 0.1;
  double score_floor = 1.0;
  std::string registry;
  bool json = false;
  std::string out;
  std::uint64_t seed = 42;

  std::string template_path;
  std::string test_path;
  std::string template_dir;
  std::string manifest_path;
};

// Which tuning flags were given explicitly; evaluate lets them override the manifest.
struct Given {
  CLI::Option* method = nullptr;
  CLI::Option* mode = nullptr;
  CLI::Option* t = nullptr;
  CLI::Option* score_floor = nullptr;
};

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void add_scoring_flags(CLI::App* cmd, Options& o, Given& g) {
  g.method = cmd->add_option("--method", o.method, "Alignment method")
                 ->check(CLI::IsMember({"dtw", "greedy", "acdtw"}))
                 ->capture_default_str();
  g.mode = cmd->add_option("--mode", o.mode, "Feature set")
               ->check(CLI::IsMember({"2d", "3d", "2d3d", "2d+3d"}))
               ->capture_default_str();
  g.t = cmd->add_option("--t", o.t, "Per-feature tolerance, 0 <= t < 1")
            ->check(CLI::Validator(
                [](std::string& s) -> std::string {
                  double v = 0;
                  try {
                    v = std::stod(s);
                  } catch (const std::exception&) {
                    return "not a number: " + s;
                  }
                  return (v >= 0.0 && v < 1.0) ? "" : "t must satisfy 0 <= t < 1";
                },
                "[0,1)"))
            ->capture_default_str();
  g.score_floor = cmd->add_option("--score-floor", o.score_floor, "Frame score clamp, 0 < floor <= 100")
                      ->check(CLI::Validator(
                          [](std::string& s) -> std::string {
                            double v = 0;
                            try {
                              v = std::stod(s);
                            } catch (const std::exception&) {
                              return "not a number: " + s;
                            }
                            return (v > 0.0 && v <= 100.0) ? "" : "score floor must satisfy 0 < floor <= 100";
                          },
                          "(0,100]"))
                      ->capture_default_str();
  cmd->add_option("--registry", o.registry, "Feature registry JSON (overrides --mode)");
}

ScoringConfig make_config(const Options& o) {
  ScoringConfig c;
  c.med.t = o.t;
  c.med.score_floor = o.score_floor;
  c.method = parse_align_method(o.method);
  c.registry = o.registry.empty() ? FeatureRegistry::defaults(parse_feature_mode(o.mode))
                                  : FeatureRegistry::load(o.registry);
  c.validate();
  return c;
}

int cmd_score(const Options& o, std::ostream& out) {
  const auto config = make_config(o);
  const auto templ = load_sequence(o.template_path);
  const auto test = load_sequence(o.test_path);
  const auto r = score_pair(templ, test, config);
  out << "FS=" << fixed2(r.fs) << "\n";
  if (o.json) {
    nlohmann::ordered_json doc;
    doc["template"] = o.template_path;
    doc["test"] = o.test_path;
    doc["method"] = to_string(r.method);
    doc["fs"] = r.fs;
    doc["cost"] = r.total_cost();
    doc["path"] = nlohmann::ordered_json::array();
    doc["frame_scores"] = nlohmann::ordered_json::array();
    for (const auto& p : r.path) {
      doc["path"].push_back({p.i, p.j});
      doc["frame_scores"].push_back(r.score(p.i, p.j));
    }
    out << doc.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_match(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = make_config(o);
  if (!fs::is_directory(o.template_dir)) throw std::runtime_error("not a directory: " + o.template_dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(o.template_dir)) {
    const auto ext = e.path().extension().string();
    if (e.is_regular_file() && (ext == ".json" || ext == ".csv")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<Template> templates;
  for (const auto& f : files) {
    try {
      auto seq = load_sequence(f);
      auto tpl = make_template(seq, category_of(seq, f), config);
      tpl.source = f.filename().string();
      templates.push_back(std::move(tpl));
    } catch (const std::exception& e) {
      err << "skipping " << f.string() << ": " << e.what() << "\n";
    }
  }
  if (templates.empty()) throw std::runtime_error("no parsable template sequences in " + o.template_dir);

  const auto result = match_action(load_sequence(o.test_path), templates, config);
  std::size_t width = 10;
  for (const auto& s : result.ranked) width = std::max(width, s.category.size() + 2);
  out << "rank  " << std::string("category").append(width - 8, ' ') << "FS       source\n";
  for (std::size_t k = 0; k < result.ranked.size(); ++k) {
    const auto& s = result.ranked[k];
    auto rank = std::to_string(k + 1);
    rank.resize(6, ' ');
    auto cat = s.category;
    cat.resize(width, ' ');
    auto score = fixed2(s.fs);
    score.resize(9, ' ');
    out << rank << cat << score << s.source << "\n";
  }
  return kExitOk;
}

int cmd_evaluate(const Options& o, const Given& g, std::ostream& out) {
  const auto manifest = DatasetManifest::load(o.manifest_path);
  auto config = config_from_manifest(manifest);
  if (g.method->count()) config.method = parse_align_method(o.method);
  if (g.t->count()) config.med.t = o.t;
  if (g.score_floor->count()) config.med.score_floor = o.score_floor;
  if (!o.registry.empty()) {
    config.registry = FeatureRegistry::load(o.registry);
  } else if (g.mode->count()) {
    config.registry = FeatureRegistry::defaults(parse_feature_mode(o.mode));
  }

  const auto report = run_manifest(manifest, config);
  const fs::path dir = o.out.empty() ? fs::path(o.manifest_path).parent_path() : fs::path(o.out);
  std::error_code ec;
  if (!dir.empty()) fs::create_directories(dir, ec);
  const auto json_path = dir / "report.json";
  const auto text_path = dir / "report.txt";
  for (const auto& [path, content] : {std::pair{json_path, report.to_json()}, std::pair{text_path, report.to_table()}}) {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << content)) throw std::runtime_error("cannot write " + path.string());
  }

  out << "Acc=" << fixed2(report.accuracy) << "\n";
  out << "Rate80=" << fixed2(report.rate80) << "\n";
  if (report.spearman) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", *report.spearman);
    out << "Spearman=" << buf << "\n";
  }
  out << "report: " << json_path.string() << "\n";
  return kExitOk;
}

int cmd_export(const Options& o, std::ostream& out) {
  const auto config = make_config(o);
  const auto r = score_pair(load_sequence(o.template_path), load_sequence(o.test_path), config);
  export_alignment(r, o.out);
  out << "wrote " << r.cost.rows() << "x" << r.cost.cols() << " matrices to " << o.out << "\n";
  return kExitOk;
}

int cmd_gen_synthetic(const Options& o, std::ostream& out) {
  const auto data = synthetic::generate(o.seed);
  synthetic::write_dataset(data, o.out);
  out << "wrote " << data.templates.size() << " templates, " << data.tests.size() << " tests and manifest.json to "
      << o.out << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Skeleton-based action quality scoring (MED distance + adaptive constrained DTW)", "aqa"};
  app.require_subcommand(1);
  Options o;

  Given g_score, g_match, g_eval, g_export;

  auto* score = app.add_subcommand("score", "Score a test sequence against one template");
  score->add_option("template", o.template_path, "Template keypoint file")->required();
  score->add_option("test", o.test_path, "Test keypoint file")->required();
  add_scoring_flags(score, o, g_score);
  score->add_flag("--json", o.json, "Also print path and per-frame scores as JSON");

  auto* match = app.add_subcommand("match", "Rank all templates in a directory against a test sequence");
  match->add_option("test", o.test_path, "Test keypoint file")->required();
  match->add_option("template_dir", o.template_dir, "Directory of template keypoint files")->required();
  add_scoring_flags(match, o, g_match);

  auto* evaluate = app.add_subcommand("evaluate", "Run a dataset manifest and report Acc / Rate80 / Spearman");
  evaluate->add_option("manifest", o.manifest_path, "Manifest JSON")->required();
  add_scoring_flags(evaluate, o, g_eval);
  evaluate->add_option("--out", o.out, "Report directory (default: next to the manifest)");

  auto* exporter = app.add_subcommand("export-matrices", "Write cost/score/P/Q matrices and the warping path");
  exporter->add_option("template", o.template_path, "Template keypoint file")->required();
  exporter->add_option("test", o.test_path, "Test keypoint file")->required();
  add_scoring_flags(exporter, o, g_export);
  exporter->add_option("--out", o.out, "Output directory")->required();

  auto* gen = app.add_subcommand("gen-synthetic", "Write a seeded synthetic 3-category dataset");
  gen->add_option("--out", o.out, "Output directory")->required();
  gen->add_option("--seed", o.seed, "RNG seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (score->parsed()) return cmd_score(o, out);
    if (match->parsed()) return cmd_match(o, out, err);
    if (evaluate->parsed()) return cmd_evaluate(o, g_eval, out);
    if (exporter->parsed()) return cmd_export(o, out);
    if (gen->parsed()) return cmd_gen_synthetic(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace aqa::cli
