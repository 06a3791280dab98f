// Per-feature clustering with transitivity closure and iterative clustering
// across features with feature aggregation -- the automatic labeling core.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "namelab/corpus.hpp"
#include "namelab/evaluation.hpp"
#include "namelab/matching.hpp"
#include "namelab/record.hpp"
#include "namelab/union_find.hpp"

namespace namelab {

// A set of instances treated as one author, carrying the union of its
// members' feature values for cluster-level matching.
struct Cluster {
  std::vector<std::uint32_t> members;  // instance indices, sorted
  std::set<std::string> emails;
  std::set<std::string> coauthor_full;     // "surname, forename"
  std::set<std::string> coauthor_initial;  // "<initial> <surname>"
  std::set<std::string> blocks;            // member block keys
};

struct StageRecord {
  int pass = 0;
  MatchRule rule;
  std::size_t clusters = 0;
  std::size_t merges = 0;
  std::optional<EvaluationReport> eval;
};

struct ClusteringState {
  std::vector<std::uint32_t> in_scope;  // instance indices, sorted
  std::vector<Cluster> clusters;
  // instance index -> cluster index; -1 = out of scope
  std::vector<std::int32_t> cluster_of;
  std::vector<StageRecord> stage_log;
};

struct ClusterOptions {
  bool email_within_block = false;
  const TruthLabels* stage_truth = nullptr;  // per-stage evaluation when set
};

// Instances carrying at least one of the requested features: an assigned
// email, self-citation candidacy (either side), or a non-empty coauthor
// list.
inline std::vector<std::uint32_t> select_in_scope(
    const Corpus& corpus, const std::set<Feature>& features) {
  std::vector<bool> cited_related(corpus.instances.size(), false);
  if (features.count(Feature::self_citation)) {
    for (const auto& cand : corpus.candidates) {
      cited_related[cand.citing_instance] = true;
      cited_related[cand.cited_instance] = true;
    }
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < corpus.instances.size(); ++i) {
    const auto& inst = corpus.instances[i];
    const bool has_email =
        features.count(Feature::email) && !inst.email.empty();
    const bool has_coauthor =
        features.count(Feature::coauthor) && !inst.coauthors.empty();
    if (has_email || has_coauthor || cited_related[i]) out.push_back(i);
  }
  return out;
}

inline std::set<Feature> rule_features(const std::vector<MatchRule>& rules) {
  std::set<Feature> features;
  for (const auto& r : rules) features.insert(r.feature);
  return features;
}

// Singleton partition over the in-scope instances.
inline ClusteringState make_singletons(const Corpus& corpus,
                                       std::vector<std::uint32_t> in_scope) {
  ClusteringState state;
  state.in_scope = std::move(in_scope);
  std::sort(state.in_scope.begin(), state.in_scope.end());
  state.cluster_of.assign(corpus.instances.size(), -1);
  state.clusters.reserve(state.in_scope.size());
  for (const auto idx : state.in_scope) {
    const auto& inst = corpus.instances[idx];
    Cluster c;
    c.members = {idx};
    if (!inst.email.empty()) c.emails.insert(inst.email);
    for (const auto& co : inst.coauthors) {
      c.coauthor_full.insert(co.full());
      c.coauthor_initial.insert(co.initial());
    }
    c.blocks.insert(inst.block_key);
    state.cluster_of[idx] = static_cast<std::int32_t>(state.clusters.size());
    state.clusters.push_back(std::move(c));
  }
  return state;
}

using UnitPair = std::pair<std::uint32_t, std::uint32_t>;

// Unit pairs satisfying the rule over the current partition, generated via
// inverted indexes on feature values. Within an email bucket only
// first-to-rest pairs are emitted; the transitive closure over them equals
// the closure over all bucket pairs.
inline std::vector<UnitPair> stage_pairs(const ClusteringState& state,
                                         const MatchRule& rule,
                                         const Corpus& corpus,
                                         const ClusterOptions& opt = {}) {
  rule.validate();
  std::set<UnitPair> pairs;
  const auto n = static_cast<std::uint32_t>(state.clusters.size());
  switch (rule.feature) {
    case Feature::email: {
      std::map<std::string, std::vector<std::uint32_t>> buckets;
      for (std::uint32_t c = 0; c < n; ++c) {
        std::set<std::string> keys;
        for (const auto& email : state.clusters[c].emails)
          keys.insert(email_scheme_key(email, rule.scheme));
        for (const auto& key : keys) {
          if (opt.email_within_block) {
            for (const auto& block : state.clusters[c].blocks)
              buckets[block + "\x1f" + key].push_back(c);
          } else {
            buckets[key].push_back(c);
          }
        }
      }
      for (const auto& [key, members] : buckets)
        for (std::size_t i = 1; i < members.size(); ++i)
          if (members[0] != members[i])
            pairs.insert({std::min(members[0], members[i]),
                          std::max(members[0], members[i])});
      break;
    }
    case Feature::self_citation: {
      for (const auto& cand : corpus.candidates) {
        const auto a = state.cluster_of[cand.citing_instance];
        const auto b = state.cluster_of[cand.cited_instance];
        if (a < 0 || b < 0 || a == b) continue;
        if (match_self_citation(corpus.instances[cand.citing_instance],
                                corpus.instances[cand.cited_instance],
                                rule.scheme))
          pairs.insert({static_cast<std::uint32_t>(std::min(a, b)),
                        static_cast<std::uint32_t>(std::max(a, b))});
      }
      break;
    }
    case Feature::coauthor: {
      std::map<std::string, std::vector<std::uint32_t>> buckets;
      for (std::uint32_t c = 0; c < n; ++c) {
        const auto& keys = rule.scheme == Scheme::full_string
                               ? state.clusters[c].coauthor_full
                               : state.clusters[c].coauthor_initial;
        for (const auto& block : state.clusters[c].blocks)
          for (const auto& key : keys)
            buckets[block + "\x1f" + key].push_back(c);
      }
      std::set<UnitPair> candidates;
      for (const auto& [key, members] : buckets)
        for (std::size_t i = 0; i < members.size(); ++i)
          for (std::size_t j = i + 1; j < members.size(); ++j)
            if (members[i] != members[j])
              candidates.insert({std::min(members[i], members[j]),
                                 std::max(members[i], members[j])});
      for (const auto& [a, b] : candidates) {
        const auto& ca = state.clusters[a];
        const auto& cb = state.clusters[b];
        const auto& sa = rule.scheme == Scheme::full_string
                             ? ca.coauthor_full : ca.coauthor_initial;
        const auto& sb = rule.scheme == Scheme::full_string
                             ? cb.coauthor_full : cb.coauthor_initial;
        if (match_coauthor(sa, sb, rule.min_shared)) pairs.insert({a, b});
      }
      break;
    }
  }
  return {pairs.begin(), pairs.end()};
}

// Connected components of (universe, pairs); the pseudo-code's repeated
// overlap-merging reaches the same fixpoint. Groups are ordered by their
// smallest member.
inline std::vector<std::vector<std::uint32_t>> transitive_closure(
    const std::vector<UnitPair>& pairs, std::size_t universe) {
  UnionFind uf(universe);
  for (const auto& [a, b] : pairs) uf.unite(a, b);
  return uf.components();
}

// One clustering stage: match under the rule, merge, aggregate features.
// Returns the number of merges (cluster-count reduction).
inline std::size_t per_feature_cluster(ClusteringState& state,
                                       const MatchRule& rule,
                                       const Corpus& corpus,
                                       const ClusterOptions& opt = {}) {
  const auto pairs = stage_pairs(state, rule, corpus, opt);
  if (pairs.empty()) return 0;
  const auto groups = transitive_closure(pairs, state.clusters.size());
  const std::size_t before = state.clusters.size();

  std::vector<Cluster> merged;
  merged.reserve(groups.size());
  for (const auto& group : groups) {
    Cluster c;
    for (const auto old_idx : group) {
      auto& old_cluster = state.clusters[old_idx];
      c.members.insert(c.members.end(), old_cluster.members.begin(),
                       old_cluster.members.end());
      c.emails.merge(old_cluster.emails);
      c.coauthor_full.merge(old_cluster.coauthor_full);
      c.coauthor_initial.merge(old_cluster.coauthor_initial);
      c.blocks.merge(old_cluster.blocks);
    }
    std::sort(c.members.begin(), c.members.end());
    merged.push_back(std::move(c));
  }
  state.clusters = std::move(merged);
  for (std::uint32_t c = 0; c < state.clusters.size(); ++c)
    for (const auto idx : state.clusters[c].members)
      state.cluster_of[idx] = static_cast<std::int32_t>(c);
  return before - state.clusters.size();
}

// One label per in-scope instance; cluster ids are the smallest member
// instance_id, so identical input reproduces identical labels.
inline LabelMap emit_labels(const ClusteringState& state,
                            const Corpus& corpus) {
  LabelMap labels;
  for (const auto& cluster : state.clusters) {
    std::string cluster_id;
    for (const auto idx : cluster.members) {
      const auto& id = corpus.instances[idx].instance_id;
      if (cluster_id.empty() || id < cluster_id) cluster_id = id;
    }
    for (const auto idx : cluster.members)
      labels[corpus.instances[idx].instance_id] = cluster_id;
  }
  return labels;
}

// Applies each rule in order, re-running the whole list until a full pass
// merges nothing; feature sets aggregate onto merged clusters between
// stages. The stage log records cluster count and merges per stage.
inline ClusteringState iterative_cluster(const Corpus& corpus,
                                         const std::vector<MatchRule>& rules,
                                         const ClusterOptions& opt = {}) {
  for (const auto& rule : rules) rule.validate();
  ClusteringState state =
      make_singletons(corpus, select_in_scope(corpus, rule_features(rules)));

  auto log_stage = [&](int pass, const MatchRule& rule, std::size_t merges) {
    StageRecord record;
    record.pass = pass;
    record.rule = rule;
    record.clusters = state.clusters.size();
    record.merges = merges;
    if (opt.stage_truth)
      record.eval = pairwise_metrics(emit_labels(state, corpus),
                                     *opt.stage_truth);
    state.stage_log.push_back(std::move(record));
  };

  for (int pass = 1;; ++pass) {
    std::size_t pass_merges = 0;
    for (const auto& rule : rules) {
      const std::size_t merges = per_feature_cluster(state, rule, corpus, opt);
      pass_merges += merges;
      if (pass == 1 || merges > 0) log_stage(pass, rule, merges);
    }
    if (pass_merges == 0) break;
  }
  return state;
}

}  // namespace namelab
