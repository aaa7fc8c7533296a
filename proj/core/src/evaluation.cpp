#include "aqa/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

using nlohmann::ordered_json;

namespace aqa {

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string method_label(AlignMethod m) {
  switch (m) {
    case AlignMethod::dtw: return "MED-DTW";
    case AlignMethod::greedy: return "MED-Greedy";
    case AlignMethod::acdtw: return "MED-ACDTW";
  }
  return "?";
}

std::string mode_label(const FeatureRegistry& reg) {
  for (auto m : {FeatureMode::d2, FeatureMode::d3, FeatureMode::d2d3}) {
    if (reg == FeatureRegistry::defaults(m)) return std::string(to_string(m));
  }
  return "custom";
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < count; k = next++) {
          try {
            fn(k);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

void ScoringConfig::validate() const {
  med.validate();
  penalty.validate();
  if (registry.size() == 0) throw std::invalid_argument("feature registry is empty");
  if (!(extraction.min_visibility >= 0.0 && extraction.min_visibility <= 1.0)) {
    throw std::invalid_argument("min_visibility must lie in [0, 1]");
  }
}

Template make_template(const KeypointSequence& seq, std::string category, const ScoringConfig& config) {
  return {std::move(category), seq.source_id, extract_sequence(seq, config.registry, config.extraction)};
}

std::string category_of(const KeypointSequence& seq, const std::filesystem::path& path) {
  if (seq.label && !seq.label->empty()) return *seq.label;
  return path.stem().string();
}

AlignmentResult score_pair(const KeypointSequence& templ, const KeypointSequence& test, const ScoringConfig& config) {
  config.validate();
  const auto a = extract_sequence(templ, config.registry, config.extraction);
  const auto b = extract_sequence(test, config.registry, config.extraction);
  return align(a, b, config.med, config.method, config.penalty);
}

MatchResult match_action(const FeatureSequence& test, std::span<const Template> templates,
                         const ScoringConfig& config) {
  if (templates.empty()) throw std::invalid_argument("no templates to match against");
  MatchResult out;
  std::exception_ptr last_error;
  for (std::size_t k = 0; k < templates.size(); ++k) {
    try {
      const auto r = align(templates[k].features, test, config.med, config.method, config.penalty);
      out.ranked.push_back({k, templates[k].category, templates[k].source, r.fs});
    } catch (...) {
      last_error = std::current_exception();
    }
  }
  if (out.ranked.empty()) std::rethrow_exception(last_error);
  std::stable_sort(out.ranked.begin(), out.ranked.end(),
                   [](const TemplateScore& a, const TemplateScore& b) { return a.fs > b.fs; });
  out.predicted = out.ranked.front().category;
  return out;
}

MatchResult match_action(const KeypointSequence& test, std::span<const Template> templates,
                         const ScoringConfig& config) {
  return match_action(extract_sequence(test, config.registry, config.extraction), templates, config);
}

DatasetManifest DatasetManifest::from_json(std::string_view text, const std::filesystem::path& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ManifestError(std::string("malformed manifest JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ManifestError("manifest must be a JSON object");
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };

  DatasetManifest m;
  try {
    for (const auto& t : doc.at("templates")) {
      m.templates.push_back({resolve(t.at("path").get<std::string>()), t.at("category").get<std::string>()});
    }
    for (const auto& t : doc.value("tests", nlohmann::json::array())) {
      TestEntry e{resolve(t.at("path").get<std::string>()), t.at("category").get<std::string>(), std::nullopt};
      if (t.contains("expert_score") && !t["expert_score"].is_null()) {
        e.expert_score = t["expert_score"].get<double>();
      }
      m.tests.push_back(std::move(e));
    }
    if (doc.contains("params")) {
      const auto& p = doc["params"];
      m.params.t = p.value("t", m.params.t);
      m.params.score_floor = p.value("score_floor", m.params.score_floor);
      m.params.zero_ref_eps = p.value("zero_ref_eps", m.params.zero_ref_eps);
    }
    if (doc.contains("mode")) m.mode = parse_feature_mode(doc["mode"].get<std::string>());
    if (doc.contains("method")) m.method = parse_align_method(doc["method"].get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(std::string("invalid manifest: ") + e.what());
  } catch (const std::exception& e) {
    throw ManifestError(std::string("invalid manifest: ") + e.what());
  }
  m.validate();
  return m;
}

DatasetManifest DatasetManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open manifest " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str(), path.parent_path());
}

std::string DatasetManifest::to_json(const std::filesystem::path& base_dir) const {
  auto rel = [&](const std::filesystem::path& p) {
    return base_dir.empty() ? p.generic_string() : p.lexically_relative(base_dir).generic_string();
  };
  ordered_json doc;
  doc["templates"] = ordered_json::array();
  for (const auto& t : templates) doc["templates"].push_back({{"path", rel(t.path)}, {"category", t.category}});
  doc["tests"] = ordered_json::array();
  for (const auto& t : tests) {
    ordered_json e{{"path", rel(t.path)}, {"category", t.category}};
    if (t.expert_score) e["expert_score"] = *t.expert_score;
    doc["tests"].push_back(std::move(e));
  }
  doc["params"] = {{"t", params.t}, {"score_floor", params.score_floor}, {"zero_ref_eps", params.zero_ref_eps}};
  doc["mode"] = to_string(mode);
  doc["method"] = to_string(method);
  return doc.dump(2) + "\n";
}

void DatasetManifest::validate() const {
  if (templates.empty()) throw ManifestError("manifest declares no templates");
  std::set<std::string> categories;
  for (const auto& t : templates) categories.insert(t.category);
  for (const auto& t : tests) {
    if (!categories.count(t.category)) {
      throw ManifestError("test " + t.path.string() + " has category '" + t.category +
                          "' which no template provides");
    }
    if (t.expert_score && !(*t.expert_score >= 0.0 && *t.expert_score <= 100.0)) {
      throw ManifestError("expert score for " + t.path.string() + " outside [0, 100]");
    }
  }
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ManifestError(std::string("invalid params: ") + e.what());
  }
}

ScoringConfig config_from_manifest(const DatasetManifest& manifest) {
  ScoringConfig c;
  c.med = manifest.params;
  c.method = manifest.method;
  c.registry = FeatureRegistry::defaults(manifest.mode);
  return c;
}

EvaluationReport run_manifest(const DatasetManifest& manifest, const ScoringConfig& config) {
  manifest.validate();
  config.validate();

  auto load = [](const std::filesystem::path& p) {
    try {
      return load_sequence(p);
    } catch (const std::exception& e) {
      throw ManifestError(std::string("failed to load ") + p.string() + ": " + e.what());
    }
  };

  std::vector<Template> templates;
  for (const auto& t : manifest.templates) {
    auto tpl = make_template(load(t.path), t.category, config);
    tpl.source = t.path.filename().string();
    templates.push_back(std::move(tpl));
  }

  EvaluationReport report;
  report.method = config.method;
  report.mode = mode_label(config.registry);
  report.params = config.med;
  report.matches.tests.resize(manifest.tests.size());

  parallel_for(manifest.tests.size(), config.threads, [&](std::size_t k) {
    const auto& entry = manifest.tests[k];
    auto match = match_action(load(entry.path), templates, config);
    auto& out = report.matches.tests[k];
    out.source = entry.path.filename().string();
    out.true_category = entry.category;
    out.expert_score = entry.expert_score;
    out.correct = match.predicted == entry.category;
    out.predicted = std::move(match.predicted);
    out.ranked = std::move(match.ranked);
  });

  for (std::size_t k = 0; k < report.matches.tests.size(); ++k) {
    const auto& t = report.matches.tests[k];
    std::vector<const TemplateScore*> by_template(templates.size(), nullptr);
    for (const auto& s : t.ranked) by_template[s.template_index] = &s;
    for (std::size_t ti = 0; ti < templates.size(); ++ti) {
      if (by_template[ti] == nullptr) continue;
      report.matches.pairs.push_back({k, ti, templates[ti].category == t.true_category, by_template[ti]->fs});
    }
  }

  if (!report.matches.tests.empty()) {
    report.accuracy = accuracy(report.matches);
    report.rate80 = rate80(report.matches);
  }

  const bool labelled = report.matches.tests.size() >= 2 &&
                        std::all_of(report.matches.tests.begin(), report.matches.tests.end(),
                                    [](const TestMatch& t) { return t.expert_score.has_value(); });
  if (labelled) {
    std::vector<double> predicted, truth;
    for (const auto& t : report.matches.tests) {
      double best = 0.0;
      for (const auto& s : t.ranked) {
        if (s.category == t.true_category) best = std::max(best, s.fs);
      }
      predicted.push_back(best);
      truth.push_back(*t.expert_score);
    }
    report.spearman = spearman(predicted, truth);
  }
  return report;
}

std::string EvaluationReport::to_json() const {
  ordered_json doc;
  doc["method"] = to_string(method);
  doc["mode"] = mode;
  doc["params"] = {{"t", params.t}, {"score_floor", params.score_floor}, {"zero_ref_eps", params.zero_ref_eps}};
  doc["accuracy"] = accuracy;
  doc["rate80"] = rate80;
  doc["spearman"] = spearman ? ordered_json(*spearman) : ordered_json(nullptr);
  doc["tests"] = ordered_json::array();
  for (const auto& t : matches.tests) {
    ordered_json e;
    e["source"] = t.source;
    e["category"] = t.true_category;
    e["expert_score"] = t.expert_score ? ordered_json(*t.expert_score) : ordered_json(nullptr);
    e["predicted"] = t.predicted;
    e["correct"] = t.correct;
    e["ranked"] = ordered_json::array();
    for (const auto& s : t.ranked) {
      e["ranked"].push_back({{"template", s.template_index}, {"category", s.category}, {"source", s.source}, {"fs", s.fs}});
    }
    doc["tests"].push_back(std::move(e));
  }
  doc["pairs"] = ordered_json::array();
  for (const auto& p : matches.pairs) {
    doc["pairs"].push_back({{"test", p.test_index}, {"template", p.template_index}, {"same_class", p.same_class}, {"fs", p.fs}});
  }
  return doc.dump(2) + "\n";
}

std::string EvaluationReport::to_table() const {
  std::ostringstream out;
  out << pad("Method", 12) << pad("Mode", 8) << pad("t", 7) << pad("Acc", 9) << pad("Rate80", 9) << "Spearman\n";
  out << pad(method_label(method), 12) << pad(mode, 8) << pad(fixed2(params.t), 7) << pad(fixed2(accuracy), 9)
      << pad(fixed2(rate80), 9);
  if (spearman) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", *spearman);
    out << buf;
  } else {
    out << "-";
  }
  out << "\n\n";

  std::size_t width = 6;
  for (const auto& t : matches.tests) width = std::max(width, t.source.size() + 2);
  out << pad("Test", width) << pad("True", 16) << pad("Predicted", 16) << pad("FS", 9) << "OK\n";
  for (const auto& t : matches.tests) {
    out << pad(t.source, width) << pad(t.true_category, 16) << pad(t.predicted, 16)
        << pad(t.ranked.empty() ? "-" : fixed2(t.ranked.front().fs), 9) << (t.correct ? "yes" : "no") << "\n";
  }
  return out.str();
}

}  // namespace aqa
