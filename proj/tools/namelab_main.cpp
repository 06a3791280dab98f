// namelab command-line front end: config-driven, reproducible pipeline runs.
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "namelab/pipeline.hpp"

namespace {

struct GlobalArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  std::string labels_file;  // evaluate only
};

namelab::PipelineConfig effective_config(const GlobalArgs& args) {
  namelab::PipelineConfig config =
      args.config_path.empty() ? namelab::PipelineConfig()
                               : namelab::PipelineConfig::load(args.config_path);
  if (args.seed) {
    config.seed = *args.seed;
    config.train.seed = *args.seed;
    config.synth.seed = *args.seed;
  }
  if (args.out_dir) config.out_dir = *args.out_dir;
  if (args.format) {
    if (*args.format != "csv" && *args.format != "tsv" &&
        *args.format != "json")
      throw CLI::ValidationError("--format must be csv, tsv, or json");
    config.report_format = *args.format;
  }
  return config;
}

void add_common(CLI::App* cmd, GlobalArgs& args, bool config_required = true) {
  auto* opt = cmd->add_option("--config", args.config_path,
                              "pipeline configuration (JSON)");
  if (config_required) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "override the run seed");
  cmd->add_option("--out", args.out_dir, "override the output directory");
  cmd->add_option("--format", args.format, "report format: csv, tsv, json");
}

std::string metric(const namelab::EvaluationReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "pP=%s pR=%s pF1=%s",
                r.pP_defined ? namelab::detail::fmt_double(r.pP).c_str()
                             : "undefined",
                r.pR_defined ? namelab::detail::fmt_double(r.pR).c_str()
                             : "undefined",
                r.pF1_defined ? namelab::detail::fmt_double(r.pF1).c_str()
                              : "undefined");
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"namelab: automatic labeling and supervised disambiguation "
               "of author name instances"};
  app.require_subcommand(1);
  GlobalArgs args;

  auto* ingest = app.add_subcommand(
      "ingest", "parse a corpus and extract identity features");
  add_common(ingest, args);

  auto* validate = app.add_subcommand(
      "validate-rules",
      "score every matching scheme against truth labels (Step 1)");
  add_common(validate, args);

  auto* label = app.add_subcommand(
      "label", "iterative clustering; writes labels and the stage log");
  add_common(label, args);

  auto* train = app.add_subcommand(
      "train", "build pairs from labels, train a classifier, tune the "
               "clustering threshold");
  add_common(train, args);

  auto* disambiguate = app.add_subcommand(
      "disambiguate", "cluster every block with a trained model");
  add_common(disambiguate, args);

  auto* evaluate = app.add_subcommand(
      "evaluate", "pairwise metrics of a label file against truth");
  add_common(evaluate, args);
  evaluate->add_option("--labels", args.labels_file,
                       "label file to score (default: <out>/disambiguation.tsv)");

  auto* synth = app.add_subcommand(
      "synth", "generate a synthetic corpus with ground truth");
  add_common(synth, args);

  auto* report = app.add_subcommand(
      "report", "block-size and tag-ratio representativeness diagnostics");
  add_common(report, args);

  CLI11_PARSE(app, argc, argv);

  try {
    const namelab::PipelineConfig config = effective_config(args);
    if (ingest->parsed()) {
      const auto result = namelab::cmd_ingest(config);
      std::cout << "ingest: " << result.parse_stats.parsed << " records ("
                << result.parse_stats.skipped << " skipped), "
                << result.instances << " instances, "
                << result.assigned_emails << " emails assigned, "
                << result.edges << " citation edges, " << result.candidates
                << " self-citation candidates";
      if (result.truth_linked > 0)
        std::cout << ", " << result.truth_linked << " truth-linked";
      std::cout << "\n";
    } else if (validate->parsed()) {
      const auto reports = namelab::cmd_validate_rules(config);
      std::printf("%-14s %-14s %3s %12s %12s %12s %10s\n", "feature",
                  "scheme", "k", "match_pairs", "evaluable", "true_match",
                  "accuracy");
      for (const auto& r : reports) {
        std::printf("%-14s %-14s %3d %12zu %12zu %12zu %10s\n",
                    namelab::to_string(r.rule.feature),
                    namelab::to_string(r.rule.scheme), r.rule.min_shared,
                    r.match_pairs, r.evaluable_pairs, r.true_match,
                    r.accuracy_defined
                        ? (namelab::detail::fmt_double(r.accuracy * 100.0) +
                           "%").c_str()
                        : "undefined");
      }
    } else if (label->parsed()) {
      const auto state = namelab::cmd_label(config);
      std::cout << "label: " << state.in_scope.size()
                << " in-scope instances -> " << state.clusters.size()
                << " clusters in " << state.stage_log.size() << " stages\n";
    } else if (train->parsed()) {
      const auto result = namelab::cmd_train(config);
      std::cout << "train: P:" << result.train_positive
                << " N:" << result.train_negative << " (dev P:"
                << result.dev_positive << " N:" << result.dev_negative
                << "), threshold=" << result.threshold.threshold
                << " dev_f1=" << result.threshold.dev_f1 << "\n";
    } else if (disambiguate->parsed()) {
      const auto labels = namelab::cmd_disambiguate(config);
      std::set<std::string> clusters;
      for (const auto& [id, c] : labels) clusters.insert(c);
      std::cout << "disambiguate: " << labels.size() << " instances -> "
                << clusters.size() << " clusters\n";
    } else if (evaluate->parsed()) {
      const std::string labels_file =
          args.labels_file.empty()
              ? namelab::detail::out_path(config, "disambiguation.tsv")
              : args.labels_file;
      const auto result = namelab::cmd_evaluate(config, labels_file);
      std::cout << "evaluate: " << metric(result) << " ("
                << result.evaluable_instances << " evaluable instances)\n";
    } else if (synth->parsed()) {
      const auto result = namelab::cmd_synth(config);
      std::cout << "synth: " << result.papers << " papers, "
                << result.instances << " instances, " << result.authors
                << " authors, email coverage "
                << namelab::detail::fmt_double(result.realized_email_coverage)
                << "\n";
    } else if (report->parsed()) {
      const auto result = namelab::cmd_report(config);
      std::cout << "report: whole " << result.whole.blocks << " blocks";
      if (result.whole.fit.fitted)
        std::cout << " (slope "
                  << namelab::detail::fmt_double(result.whole.fit.slope)
                  << ", r2 "
                  << namelab::detail::fmt_double(result.whole.fit.r2) << ")";
      std::cout << "; labeled " << result.labeled.blocks << " blocks";
      if (result.labeled.fit.fitted)
        std::cout << " (slope "
                  << namelab::detail::fmt_double(result.labeled.fit.slope)
                  << ", r2 "
                  << namelab::detail::fmt_double(result.labeled.fit.r2)
                  << ")";
      std::cout << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
