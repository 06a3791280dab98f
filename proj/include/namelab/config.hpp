// Pipeline configuration: one JSON file drives every command; the hash of
// the effective configuration is stamped into every output for provenance.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "namelab/corpus.hpp"
#include "namelab/io.hpp"
#include "namelab/matching.hpp"
#include "namelab/models.hpp"
#include "namelab/synth.hpp"

namespace namelab {

struct PipelineConfig {
  // inputs
  std::string corpus_path;
  CorpusFormat corpus_format = CorpusFormat::tsv;
  std::string supplemental_citations;  // TSV citing_key <TAB> cited_key
  std::string authority_profiles;      // JSON array of profiles
  std::string truth_labels;            // TSV instance_id <TAB> authority_id
  std::string labels_path;             // auto-labels; default <out>/labels.tsv
  std::string model_path;              // default <out>/model.json
  std::string tag_map;                 // TSV instance_id <TAB> category
  std::string stopwords;               // one word per line

  // outputs
  std::string out_dir = "out";
  std::string report_format = "csv";  // csv | tsv | json

  // clustering rules, applied in order
  std::vector<MatchRule> rules = {
      {Feature::self_citation, Scheme::full_string, 1},
      {Feature::coauthor, Scheme::full_string, 1},
      {Feature::email, Scheme::full_string, 1},
  };
  bool email_within_block = false;

  // supervised stage
  ModelKind classifier = ModelKind::logistic_regression;
  double split_ratio = 0.5;
  std::uint64_t seed = 0;
  double grid_start = 0.0, grid_stop = 1.0, grid_step = 0.01;
  std::string grid_mode = "uniform";  // uniform | observed_means
  TrainConfig train;

  // diagnostics
  std::size_t fit_lo = 1, fit_hi = 60;  // power-law fit range

  // synthetic generation
  SynthConfig synth;

  nlohmann::json to_json() const {
    nlohmann::json rules_json = nlohmann::json::array();
    for (const auto& r : rules)
      rules_json.push_back({{"feature", to_string(r.feature)},
                            {"scheme", to_string(r.scheme)},
                            {"min_shared", r.min_shared}});
    return nlohmann::json{
        {"corpus", corpus_path},
        {"corpus_format", corpus_format == CorpusFormat::tsv ? "tsv" : "json"},
        {"supplemental_citations", supplemental_citations},
        {"authority_profiles", authority_profiles},
        {"truth_labels", truth_labels},
        {"labels_path", labels_path},
        {"model_path", model_path},
        {"tag_map", tag_map},
        {"stopwords", stopwords},
        {"out_dir", out_dir},
        {"report_format", report_format},
        {"rules", rules_json},
        {"email_within_block", email_within_block},
        {"classifier", to_string(classifier)},
        {"split_ratio", split_ratio},
        {"seed", seed},
        {"grid", {{"start", grid_start}, {"stop", grid_stop},
                  {"step", grid_step}, {"mode", grid_mode}}},
        {"train",
         {{"l2", train.l2},
          {"tol", train.tol},
          {"max_iters", train.max_iters},
          {"trees", train.trees},
          {"max_depth", train.max_depth},
          {"min_leaf", train.min_leaf},
          {"mtry", train.mtry},
          {"variance_floor", train.variance_floor}}},
        {"fit_range", {fit_lo, fit_hi}},
        {"synth",
         {{"n_authors", synth.n_authors},
          {"papers_per_author_mean", synth.papers_per_author_mean},
          {"homonym_rate", synth.homonym_rate},
          {"synonym_rate", synth.synonym_rate},
          {"email_coverage", synth.email_coverage},
          {"self_cite_prob", synth.self_cite_prob},
          {"background_cite_prob", synth.background_cite_prob},
          {"team_size_mean", synth.team_size_mean},
          {"seed", synth.seed},
          {"name_pool", synth.name_pool}}},
    };
  }

  static PipelineConfig from_json(const nlohmann::json& doc) {
    PipelineConfig c;
    c.corpus_path = doc.value("corpus", c.corpus_path);
    if (doc.value("corpus_format", "tsv") == "json")
      c.corpus_format = CorpusFormat::json;
    c.supplemental_citations =
        doc.value("supplemental_citations", c.supplemental_citations);
    c.authority_profiles = doc.value("authority_profiles", c.authority_profiles);
    c.truth_labels = doc.value("truth_labels", c.truth_labels);
    c.labels_path = doc.value("labels_path", c.labels_path);
    c.model_path = doc.value("model_path", c.model_path);
    c.tag_map = doc.value("tag_map", c.tag_map);
    c.stopwords = doc.value("stopwords", c.stopwords);
    c.out_dir = doc.value("out_dir", c.out_dir);
    c.report_format = doc.value("report_format", c.report_format);
    if (doc.contains("rules")) {
      c.rules.clear();
      for (const auto& r : doc["rules"]) {
        MatchRule rule;
        rule.feature = feature_from_string(r.at("feature").get<std::string>());
        rule.scheme = scheme_from_string(r.at("scheme").get<std::string>());
        rule.min_shared = r.value("min_shared", 1);
        rule.validate();
        c.rules.push_back(rule);
      }
    }
    c.email_within_block = doc.value("email_within_block", c.email_within_block);
    if (doc.contains("classifier"))
      c.classifier = model_kind_from_string(doc["classifier"].get<std::string>());
    c.split_ratio = doc.value("split_ratio", c.split_ratio);
    c.seed = doc.value("seed", c.seed);
    if (doc.contains("grid")) {
      const auto& g = doc["grid"];
      c.grid_start = g.value("start", c.grid_start);
      c.grid_stop = g.value("stop", c.grid_stop);
      c.grid_step = g.value("step", c.grid_step);
      c.grid_mode = g.value("mode", c.grid_mode);
    }
    if (doc.contains("train")) {
      const auto& t = doc["train"];
      c.train.l2 = t.value("l2", c.train.l2);
      c.train.tol = t.value("tol", c.train.tol);
      c.train.max_iters = t.value("max_iters", c.train.max_iters);
      c.train.trees = t.value("trees", c.train.trees);
      c.train.max_depth = t.value("max_depth", c.train.max_depth);
      c.train.min_leaf = t.value("min_leaf", c.train.min_leaf);
      c.train.mtry = t.value("mtry", c.train.mtry);
      c.train.variance_floor =
          t.value("variance_floor", c.train.variance_floor);
    }
    if (doc.contains("fit_range") && doc["fit_range"].is_array() &&
        doc["fit_range"].size() == 2) {
      c.fit_lo = doc["fit_range"][0].get<std::size_t>();
      c.fit_hi = doc["fit_range"][1].get<std::size_t>();
    }
    if (doc.contains("synth")) c.synth = SynthConfig::from_json(doc["synth"]);
    c.train.seed = c.seed;
    c.synth.seed = doc.contains("synth") && doc["synth"].contains("seed")
                       ? doc["synth"]["seed"].get<std::uint64_t>()
                       : c.seed;
    return c;
  }

  static PipelineConfig load(const std::string& path) {
    return from_json(nlohmann::json::parse(read_file(path)));
  }
};

// FNV-1a over the canonical serialized configuration.
inline std::string config_hash(const PipelineConfig& config) {
  const std::string text = config.to_json().dump();
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (const unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace namelab
