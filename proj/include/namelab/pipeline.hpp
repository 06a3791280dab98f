// Command implementations behind the CLI: ingest, validate-rules, label,
// train, disambiguate, evaluate, synth, report. All outputs are
// deterministic for a fixed config + seed and carry the config hash.
#pragma once

#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "namelab/clustering.hpp"
#include "namelab/config.hpp"
#include "namelab/corpus.hpp"
#include "namelab/evaluation.hpp"
#include "namelab/hac.hpp"
#include "namelab/matching.hpp"
#include "namelab/models.hpp"
#include "namelab/pairs.hpp"
#include "namelab/synth.hpp"

namespace namelab {

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string out_path(const PipelineConfig& config,
                            const std::string& name) {
  std::filesystem::create_directories(config.out_dir);
  return (std::filesystem::path(config.out_dir) / name).string();
}

inline char sep_for(const std::string& format) {
  return format == "tsv" ? '\t' : ',';
}

}  // namespace detail

inline std::set<std::string> load_stopwords(const PipelineConfig& config) {
  if (config.stopwords.empty()) return default_stopwords();
  std::set<std::string> words;
  for (const auto& line : read_lines(config.stopwords)) {
    const auto w = trim(line);
    if (!w.empty() && w.front() != '#') words.insert(to_ascii_lower(w));
  }
  return words;
}

inline std::vector<std::pair<std::string, std::string>> load_supplemental(
    const std::string& path) {
  std::vector<std::pair<std::string, std::string>> edges;
  if (path.empty()) return edges;
  for (const auto& row : read_tsv(path))
    if (row.size() >= 2) edges.emplace_back(row[0], row[1]);
  return edges;
}

inline Corpus load_corpus(const PipelineConfig& config,
                          ParseStats* stats = nullptr) {
  if (config.corpus_path.empty())
    throw std::runtime_error("config has no corpus path");
  auto records = parse_corpus(config.corpus_path, config.corpus_format, stats);
  return build_corpus(std::move(records),
                      load_supplemental(config.supplemental_citations));
}

inline TruthLabels load_truth(const PipelineConfig& config) {
  if (config.truth_labels.empty())
    throw std::runtime_error("config has no truth_labels path");
  TruthLabels truth;
  for (auto& [k, v] : read_pair_tsv(config.truth_labels)) truth[k] = v;
  return truth;
}

inline std::string labels_path(const PipelineConfig& config) {
  return config.labels_path.empty() ? detail::out_path(config, "labels.tsv")
                                    : config.labels_path;
}

inline std::string model_path(const PipelineConfig& config) {
  return config.model_path.empty() ? detail::out_path(config, "model.json")
                                   : config.model_path;
}

// ---------------------------------------------------------------------------
// ingest

struct IngestResult {
  ParseStats parse_stats;
  std::size_t instances = 0;
  std::size_t assigned_emails = 0;
  std::size_t edges = 0;
  std::size_t candidates = 0;
  std::size_t truth_linked = 0;
};

inline IngestResult cmd_ingest(const PipelineConfig& config) {
  IngestResult result;
  Corpus corpus = load_corpus(config, &result.parse_stats);
  const std::string hash = config_hash(config);

  std::ostringstream instances;
  instances << "# config_hash=" << hash << "\n";
  instances << "# instance_id\tpaper_id\tposition\traw_name\tsurname\t"
               "forename\temail\tblock_key\tcoauthors\n";
  for (const auto& inst : corpus.instances) {
    std::vector<std::string> coauthors;
    for (const auto& co : inst.coauthors) coauthors.push_back(co.full());
    instances << inst.instance_id << '\t' << inst.paper_id << '\t'
              << inst.position << '\t' << inst.raw_name << '\t'
              << inst.surname << '\t' << inst.forename << '\t' << inst.email
              << '\t' << inst.block_key << '\t' << join(coauthors, "|")
              << '\n';
    if (!inst.email.empty()) ++result.assigned_emails;
  }
  write_file(detail::out_path(config, "instances.tsv"), instances.str());

  std::ostringstream citations;
  citations << "# config_hash=" << hash << "\n";
  for (const auto& edge : corpus.edges)
    citations << edge.citing_paper << '\t' << edge.cited_paper << '\n';
  write_file(detail::out_path(config, "citations.tsv"), citations.str());

  std::ostringstream candidates;
  candidates << "# config_hash=" << hash << "\n";
  for (const auto& cand : corpus.candidates)
    candidates << corpus.instances[cand.citing_instance].instance_id << '\t'
               << corpus.instances[cand.cited_instance].instance_id << '\n';
  write_file(detail::out_path(config, "candidates.tsv"), candidates.str());

  result.instances = corpus.instances.size();
  result.edges = corpus.edges.size();
  result.candidates = corpus.candidates.size();

  if (!config.authority_profiles.empty()) {
    const auto truth = link_authority(
        corpus, read_authority_profiles(config.authority_profiles));
    std::ostringstream out;
    out << "# config_hash=" << hash << "\n";
    for (const auto& [id, authority] : truth)
      out << id << '\t' << authority << '\n';
    write_file(detail::out_path(config, "truth.tsv"), out.str());
    result.truth_linked = truth.size();
  }

  nlohmann::json stats = {
      {"config_hash", hash},
      {"records", result.parse_stats.parsed},
      {"skipped", result.parse_stats.skipped},
      {"instances", result.instances},
      {"assigned_emails", result.assigned_emails},
      {"citation_edges", result.edges},
      {"self_citation_candidates", result.candidates},
      {"truth_linked", result.truth_linked},
  };
  write_file(detail::out_path(config, "ingest_stats.json"),
             stats.dump(2) + "\n");
  return result;
}

// ---------------------------------------------------------------------------
// validate-rules

// The scheme table of Tables 4-6: every admissible scheme per feature, with
// coauthor thresholds 1..3.
inline std::vector<MatchRule> standard_rule_table() {
  return {
      {Feature::email, Scheme::full_string, 1},
      {Feature::email, Scheme::pre_at, 1},
      {Feature::email, Scheme::alnum_only, 1},
      {Feature::self_citation, Scheme::first_initial, 1},
      {Feature::self_citation, Scheme::full_string, 1},
      {Feature::coauthor, Scheme::first_initial, 1},
      {Feature::coauthor, Scheme::first_initial, 2},
      {Feature::coauthor, Scheme::first_initial, 3},
      {Feature::coauthor, Scheme::full_string, 1},
      {Feature::coauthor, Scheme::full_string, 2},
      {Feature::coauthor, Scheme::full_string, 3},
  };
}

inline std::vector<RuleAccuracyReport> cmd_validate_rules(
    const PipelineConfig& config) {
  Corpus corpus = load_corpus(config);
  const TruthLabels truth = load_truth(config);
  PairGenOptions options;
  options.email_within_block = config.email_within_block;

  std::vector<RuleAccuracyReport> reports;
  for (const auto& rule : standard_rule_table())
    reports.push_back(
        evaluate_rule(rule, matched_pairs(corpus, rule, options), truth));

  const char sep = detail::sep_for(config.report_format);
  std::ostringstream out;
  out << "# config_hash=" << config_hash(config) << "\n";
  out << "feature" << sep << "scheme" << sep << "min_shared" << sep
      << "match_pairs" << sep << "evaluable_pairs" << sep << "true_match"
      << sep << "accuracy\n";
  for (const auto& r : reports) {
    out << to_string(r.rule.feature) << sep << to_string(r.rule.scheme) << sep
        << r.rule.min_shared << sep << r.match_pairs << sep
        << r.evaluable_pairs << sep << r.true_match << sep
        << (r.accuracy_defined ? detail::fmt_double(r.accuracy) : "undefined")
        << "\n";
  }
  const std::string ext = config.report_format == "json"
                              ? "json"
                              : config.report_format;
  if (config.report_format == "json") {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& r : reports) {
      doc.push_back({{"feature", to_string(r.rule.feature)},
                     {"scheme", to_string(r.rule.scheme)},
                     {"min_shared", r.rule.min_shared},
                     {"match_pairs", r.match_pairs},
                     {"evaluable_pairs", r.evaluable_pairs},
                     {"true_match", r.true_match},
                     {"accuracy_defined", r.accuracy_defined},
                     {"accuracy", r.accuracy}});
    }
    write_file(detail::out_path(config, "rule_accuracy.json"),
               nlohmann::json{{"config_hash", config_hash(config)},
                              {"rules", doc}}
                       .dump(2) +
                   "\n");
  } else {
    write_file(detail::out_path(config, "rule_accuracy." + ext), out.str());
  }
  return reports;
}

// ---------------------------------------------------------------------------
// label

inline ClusteringState cmd_label(const PipelineConfig& config) {
  Corpus corpus = load_corpus(config);
  ClusterOptions options;
  options.email_within_block = config.email_within_block;
  TruthLabels truth;
  if (!config.truth_labels.empty()) {
    truth = load_truth(config);
    options.stage_truth = &truth;
  }
  ClusteringState state = iterative_cluster(corpus, config.rules, options);
  const std::string hash = config_hash(config);

  const auto labels = emit_labels(state, corpus);
  std::ostringstream out;
  out << "# config_hash=" << hash << "\n";
  for (const auto& [instance_id, cluster_id] : labels)
    out << instance_id << '\t' << cluster_id << '\n';
  write_file(labels_path(config), out.str());

  std::ostringstream log;
  log << "# config_hash=" << hash << "\n";
  log << "stage,pass,feature,scheme,min_shared,clusters,merges,pP,pR,pF1\n";
  int stage = 0;
  for (const auto& record : state.stage_log) {
    log << ++stage << ',' << record.pass << ','
        << to_string(record.rule.feature) << ','
        << to_string(record.rule.scheme) << ',' << record.rule.min_shared
        << ',' << record.clusters << ',' << record.merges;
    if (record.eval) {
      log << ','
          << (record.eval->pP_defined ? detail::fmt_double(record.eval->pP)
                                      : "undefined")
          << ','
          << (record.eval->pR_defined ? detail::fmt_double(record.eval->pR)
                                      : "undefined")
          << ','
          << (record.eval->pF1_defined ? detail::fmt_double(record.eval->pF1)
                                       : "undefined");
    } else {
      log << ",,,";
    }
    log << '\n';
  }
  write_file(detail::out_path(config, "stage_log.csv"), log.str());
  return state;
}

// ---------------------------------------------------------------------------
// train

struct TrainResult {
  std::size_t train_positive = 0, train_negative = 0;
  std::size_t dev_positive = 0, dev_negative = 0;
  ThresholdChoice threshold;
  ClassifierModel model;
};

namespace detail {

inline void write_pair_file(const std::string& path, const std::string& hash,
                            const std::vector<TrainingPair>& pairs) {
  std::ostringstream out;
  out << "# config_hash=" << hash << "\n";
  out << "# instance_a\tinstance_b\tsim_name\tsim_coauthor\tsim_title\t"
         "label\n";
  for (const auto& p : pairs)
    out << p.a << '\t' << p.b << '\t' << fmt_double(p.x.sim_name) << '\t'
        << fmt_double(p.x.sim_coauthor) << '\t' << fmt_double(p.x.sim_title)
        << '\t' << (p.positive ? 1 : 0) << '\n';
  write_file(path, out.str());
}

// Blocks over a subset of instances, keyed by block_key, members sorted.
inline std::map<std::string, std::vector<std::string>> blocks_of(
    const Corpus& corpus, const std::set<std::string>& subset) {
  std::map<std::string, std::vector<std::string>> blocks;
  for (const auto& inst : corpus.instances)
    if (subset.count(inst.instance_id))
      blocks[inst.block_key].push_back(inst.instance_id);
  for (auto& [key, members] : blocks)
    std::sort(members.begin(), members.end());
  return blocks;
}

inline PairScores score_pairs(const Corpus& corpus,
                              const std::vector<InstanceProfile>& profiles,
                              const std::map<std::string,
                                             std::vector<std::string>>& blocks,
                              const ClassifierModel& model) {
  PairScores scores;
  for (const auto& [block, members] : blocks) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const auto a = corpus.instance_by_id.at(members[i]);
        const auto b = corpus.instance_by_id.at(members[j]);
        scores[{std::min(members[i], members[j]),
                std::max(members[i], members[j])}] =
            model.predict(feature_vector(profiles, a, b));
      }
    }
  }
  return scores;
}

}  // namespace detail

inline TrainResult cmd_train(const PipelineConfig& config) {
  Corpus corpus = load_corpus(config);
  LabelMap labels;
  for (auto& [k, v] : read_pair_tsv(labels_path(config))) labels[k] = v;
  if (labels.empty())
    throw std::runtime_error("no labels found at " + labels_path(config) +
                             "; run `label` first");
  const auto stopwords = load_stopwords(config);
  const auto profiles = build_profiles(corpus, stopwords);

  SplitConfig split;
  split.train_ratio = config.split_ratio;
  split.seed = config.seed;
  const PairSets sets = build_pairs(labels, corpus, profiles, split);
  const std::string hash = config_hash(config);
  detail::write_pair_file(detail::out_path(config, "pairs_train.tsv"), hash,
                          sets.train);
  detail::write_pair_file(detail::out_path(config, "pairs_dev.tsv"), hash,
                          sets.dev);

  // paper-style instance records for the labeled data
  std::ostringstream ml;
  ml << "# config_hash=" << hash << "\n";
  for (const auto& [instance_id, cluster_id] : labels) {
    const auto it = corpus.instance_by_id.find(instance_id);
    if (it == corpus.instance_by_id.end()) continue;
    const auto& inst = corpus.instances[it->second];
    std::vector<std::string> coauthors;
    for (const auto& co : inst.coauthors)
      coauthors.push_back(preprocess(co.full(), TextKind::name));
    const auto& record = corpus.records[corpus.record_by_id.at(inst.paper_id)];
    ml << cluster_id << '\t' << instance_id << '\t'
       << preprocess(inst.name_key().full(), TextKind::name) << '\t'
       << join(coauthors, "|") << '\t'
       << preprocess(record.title, TextKind::title, stopwords) << '\n';
  }
  write_file(detail::out_path(config, "instances_ml.tsv"), ml.str());

  TrainResult result;
  for (const auto& p : sets.train)
    (p.positive ? result.train_positive : result.train_negative) += 1;
  for (const auto& p : sets.dev)
    (p.positive ? result.dev_positive : result.dev_negative) += 1;

  result.model = ClassifierModel::train(config.classifier, sets.train,
                                        config.train);

  // threshold selection on the development half
  const auto dev_blocks = detail::blocks_of(corpus, sets.dev_instances);
  PairScores dev_scores;
  for (const auto& p : sets.dev)
    dev_scores[{p.a, p.b}] = result.model.predict(p.x);
  TruthLabels dev_truth;
  for (const auto& id : sets.dev_instances) dev_truth[id] = labels.at(id);
  const auto grid =
      config.grid_mode == "observed_means"
          ? observed_mean_grid(dev_blocks, dev_scores)
          : uniform_grid(config.grid_start, config.grid_stop,
                         config.grid_step);
  result.threshold = select_threshold(dev_blocks, dev_scores, dev_truth, grid);
  result.model.hac_threshold = result.threshold.threshold;

  nlohmann::json doc = result.model.to_json();
  doc["config_hash"] = hash;
  doc["dev_f1"] = result.threshold.dev_f1;
  write_file(model_path(config), doc.dump(2) + "\n");
  return result;
}

// ---------------------------------------------------------------------------
// disambiguate

inline LabelMap cmd_disambiguate(const PipelineConfig& config) {
  Corpus corpus = load_corpus(config);
  const auto model = ClassifierModel::from_json(
      nlohmann::json::parse(read_file(model_path(config))));
  const auto profiles = build_profiles(corpus, load_stopwords(config));

  std::set<std::string> all;
  for (const auto& inst : corpus.instances) all.insert(inst.instance_id);
  const auto blocks = detail::blocks_of(corpus, all);
  const auto scores = detail::score_pairs(corpus, profiles, blocks, model);
  const auto labels = hac_label_blocks(blocks, scores, model.hac_threshold);

  std::ostringstream out;
  out << "# config_hash=" << config_hash(config) << "\n";
  for (const auto& [instance_id, cluster_id] : labels)
    out << instance_id << '\t' << cluster_id << '\n';
  write_file(detail::out_path(config, "disambiguation.tsv"), out.str());
  return labels;
}

// ---------------------------------------------------------------------------
// evaluate

inline EvaluationReport cmd_evaluate(const PipelineConfig& config,
                                     const std::string& labels_file) {
  LabelMap predicted;
  for (auto& [k, v] : read_pair_tsv(labels_file)) predicted[k] = v;
  const TruthLabels truth = load_truth(config);
  const auto report = pairwise_metrics(predicted, truth);

  const char sep = detail::sep_for(config.report_format);
  auto cell = [&](bool defined, double v) {
    return defined ? detail::fmt_double(v) : std::string("undefined");
  };
  if (config.report_format == "json") {
    nlohmann::json doc = {
        {"config_hash", config_hash(config)},
        {"labels", labels_file},
        {"pP", report.pP}, {"pP_defined", report.pP_defined},
        {"pR", report.pR}, {"pR_defined", report.pR_defined},
        {"pF1", report.pF1}, {"pF1_defined", report.pF1_defined},
        {"predicted_clusters", report.predicted_clusters},
        {"truth_clusters", report.truth_clusters},
        {"evaluable_instances", report.evaluable_instances},
        {"predicted_pairs", report.predicted_pairs},
        {"truth_pairs", report.truth_pairs},
        {"common_pairs", report.common_pairs},
    };
    write_file(detail::out_path(config, "evaluation.json"),
               doc.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << "# config_hash=" << config_hash(config) << "\n";
    out << "metric" << sep << "value\n";
    out << "pP" << sep << cell(report.pP_defined, report.pP) << "\n";
    out << "pR" << sep << cell(report.pR_defined, report.pR) << "\n";
    out << "pF1" << sep << cell(report.pF1_defined, report.pF1) << "\n";
    out << "predicted_clusters" << sep << report.predicted_clusters << "\n";
    out << "truth_clusters" << sep << report.truth_clusters << "\n";
    out << "evaluable_instances" << sep << report.evaluable_instances << "\n";
    out << "predicted_pairs" << sep << report.predicted_pairs << "\n";
    out << "truth_pairs" << sep << report.truth_pairs << "\n";
    out << "common_pairs" << sep << report.common_pairs << "\n";
    write_file(
        detail::out_path(config, "evaluation." + config.report_format),
        out.str());
  }
  return report;
}

// ---------------------------------------------------------------------------
// synth

inline SynthReport cmd_synth(const PipelineConfig& config) {
  const SynthOutput output = generate(config.synth);
  const std::string hash = config_hash(config);
  write_file(detail::out_path(config, "synth_corpus.tsv"),
             corpus_to_tsv(output.records));
  std::ostringstream truth;
  truth << "# config_hash=" << hash << "\n";
  for (const auto& [id, author] : output.truth)
    truth << id << '\t' << author << '\n';
  write_file(detail::out_path(config, "synth_truth.tsv"), truth.str());

  const SynthReport report = summarize(output.records, output.truth);
  nlohmann::json doc = {
      {"config_hash", hash},
      {"papers", report.papers},
      {"instances", report.instances},
      {"authors", report.authors},
      {"assigned_emails", report.assigned_emails},
      {"realized_email_coverage", report.realized_email_coverage},
      {"citation_edges", report.citation_edges},
      {"blocks", report.blocks},
      {"homonym_blocks", report.homonym_blocks},
      {"synonym_authors", report.synonym_authors},
  };
  write_file(detail::out_path(config, "synth_report.json"),
             doc.dump(2) + "\n");
  return report;
}

// ---------------------------------------------------------------------------
// report (representativeness diagnostics)

struct ReportResult {
  BlockStats whole;
  BlockStats labeled;
  bool tag_report_written = false;
};

inline ReportResult cmd_report(const PipelineConfig& config) {
  Corpus corpus = load_corpus(config);
  LabelMap labels;
  for (auto& [k, v] : read_pair_tsv(labels_path(config))) labels[k] = v;

  std::vector<std::string> whole_keys, labeled_keys;
  std::set<std::string> whole_ids, labeled_ids;
  for (const auto& inst : corpus.instances) {
    whole_keys.push_back(inst.block_key);
    whole_ids.insert(inst.instance_id);
    if (labels.count(inst.instance_id)) {
      labeled_keys.push_back(inst.block_key);
      labeled_ids.insert(inst.instance_id);
    }
  }
  ReportResult result;
  result.whole = block_stats(whole_keys, config.fit_lo, config.fit_hi);
  result.labeled = block_stats(labeled_keys, config.fit_lo, config.fit_hi);

  const std::string hash = config_hash(config);
  auto write_stats = [&](const BlockStats& stats, const std::string& name) {
    std::ostringstream out;
    out << "# config_hash=" << hash << "\n";
    out << "# blocks=" << stats.blocks << " instances=" << stats.instances;
    if (stats.fit.fitted)
      out << " slope=" << detail::fmt_double(stats.fit.slope)
          << " r2=" << detail::fmt_double(stats.fit.r2);
    out << "\n";
    out << "n,cumulative_ratio\n";
    for (const auto& [n, r] : stats.cumulative)
      out << n << ',' << detail::fmt_double(r) << '\n';
    write_file(detail::out_path(config, name), out.str());
  };
  write_stats(result.whole, "block_stats_whole.csv");
  write_stats(result.labeled, "block_stats_labeled.csv");

  if (!config.tag_map.empty()) {
    const auto tags = read_pair_tsv(config.tag_map);
    const auto report = tag_ratios(labeled_ids, whole_ids, tags);
    std::ostringstream out;
    out << "# config_hash=" << hash << "\n";
    out << "category,subset_ratio,population_ratio,abs_diff\n";
    for (const auto& row : report.rows)
      out << row.category << ',' << detail::fmt_double(row.subset_ratio)
          << ',' << detail::fmt_double(row.population_ratio) << ','
          << detail::fmt_double(row.abs_diff) << '\n';
    write_file(detail::out_path(config, "tag_ratios.csv"), out.str());
    result.tag_report_written = true;
  }

  nlohmann::json summary = {
      {"config_hash", hash},
      {"whole",
       {{"blocks", result.whole.blocks},
        {"instances", result.whole.instances},
        {"fitted", result.whole.fit.fitted},
        {"slope", result.whole.fit.slope},
        {"r2", result.whole.fit.r2}}},
      {"labeled",
       {{"blocks", result.labeled.blocks},
        {"instances", result.labeled.instances},
        {"fitted", result.labeled.fit.fitted},
        {"slope", result.labeled.fit.slope},
        {"r2", result.labeled.fit.r2}}},
  };
  write_file(detail::out_path(config, "report_summary.json"),
             summary.dump(2) + "\n");
  return result;
}

}  // namespace namelab
