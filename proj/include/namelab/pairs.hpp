// Pairwise feature vectors and training/development pair construction from
// labeled data.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "namelab/corpus.hpp"
#include "namelab/record.hpp"
#include "namelab/textsim.hpp"

namespace namelab {

struct FeatureVector {
  double sim_name = 0.0;
  double sim_coauthor = 0.0;
  double sim_title = 0.0;

  double operator[](std::size_t i) const {
    return i == 0 ? sim_name : i == 1 ? sim_coauthor : sim_title;
  }
  static constexpr std::size_t dims = 3;
};

struct TrainingPair {
  std::string a, b;  // instance ids, a < b
  FeatureVector x;
  bool positive = false;
};

// Precomputed n-gram profiles for one instance's three feature texts.
struct InstanceProfile {
  NgramProfile name;
  NgramProfile coauthor;
  NgramProfile title;
};

// Per-instance profiles over the whole corpus. Name text is the normalized
// "surname, forename"; coauthor text joins all coauthor names; title text
// is stopword-filtered and stemmed.
inline std::vector<InstanceProfile> build_profiles(
    const Corpus& corpus,
    const std::set<std::string>& stopwords = default_stopwords()) {
  std::vector<InstanceProfile> profiles(corpus.instances.size());
  // titles repeat per byline; preprocess each once
  std::map<std::string, NgramProfile> title_cache;
  for (std::size_t i = 0; i < corpus.instances.size(); ++i) {
    const auto& inst = corpus.instances[i];
    profiles[i].name =
        ngram_profile(preprocess(inst.name_key().full(), TextKind::name));
    std::string coauthor_text;
    for (const auto& co : inst.coauthors) {
      if (!coauthor_text.empty()) coauthor_text.push_back(' ');
      coauthor_text += preprocess(co.full(), TextKind::name);
    }
    profiles[i].coauthor = ngram_profile(coauthor_text);
    const auto& record = corpus.records[corpus.record_by_id.at(inst.paper_id)];
    auto it = title_cache.find(record.paper_id);
    if (it == title_cache.end()) {
      it = title_cache
               .emplace(record.paper_id,
                        ngram_profile(preprocess(record.title, TextKind::title,
                                                 stopwords)))
               .first;
    }
    profiles[i].title = it->second;
  }
  return profiles;
}

inline FeatureVector feature_vector(const std::vector<InstanceProfile>& p,
                                    std::uint32_t i, std::uint32_t j) {
  FeatureVector x;
  x.sim_name = cosine(p[i].name, p[j].name);
  x.sim_coauthor = cosine(p[i].coauthor, p[j].coauthor);
  x.sim_title = cosine(p[i].title, p[j].title);
  return x;
}

struct PairSets {
  std::vector<TrainingPair> train;
  std::vector<TrainingPair> dev;
  std::set<std::string> train_instances;
  std::set<std::string> dev_instances;
};

struct SplitConfig {
  double train_ratio = 0.5;
  std::uint64_t seed = 0;
};

// Enumerates all same-block pairs of labeled instances, positive iff the
// two share a cluster id, and splits them into train/dev by cluster so no
// cluster straddles the split. Blocks with fewer than two labeled
// instances contribute nothing.
inline PairSets build_pairs(const LabelMap& labels, const Corpus& corpus,
                            const std::vector<InstanceProfile>& profiles,
                            const SplitConfig& split_config = {}) {
  // cluster -> instance indices, deterministic order
  std::map<std::string, std::vector<std::uint32_t>> clusters;
  std::size_t labeled = 0;
  for (const auto& [instance_id, cluster_id] : labels) {
    const auto it = corpus.instance_by_id.find(instance_id);
    if (it == corpus.instance_by_id.end()) continue;
    clusters[cluster_id].push_back(it->second);
    ++labeled;
  }

  std::vector<std::string> cluster_ids;
  cluster_ids.reserve(clusters.size());
  for (const auto& [cid, members] : clusters) cluster_ids.push_back(cid);
  std::mt19937_64 rng(split_config.seed);
  std::shuffle(cluster_ids.begin(), cluster_ids.end(), rng);

  PairSets sets;
  const auto target =
      static_cast<std::size_t>(split_config.train_ratio *
                               static_cast<double>(labeled));
  std::size_t in_train = 0;
  std::set<std::string> train_clusters;
  for (const auto& cid : cluster_ids) {
    if (in_train < target) {
      train_clusters.insert(cid);
      in_train += clusters[cid].size();
    }
  }

  struct Side {
    std::vector<TrainingPair>* pairs;
    std::set<std::string>* instances;
    std::map<std::string, std::vector<std::uint32_t>> blocks;
  };
  Side train{&sets.train, &sets.train_instances, {}};
  Side dev{&sets.dev, &sets.dev_instances, {}};
  for (const auto& [cid, members] : clusters) {
    Side& side = train_clusters.count(cid) ? train : dev;
    for (const auto idx : members) {
      side.blocks[corpus.instances[idx].block_key].push_back(idx);
      side.instances->insert(corpus.instances[idx].instance_id);
    }
  }
  for (Side* side : {&train, &dev}) {
    for (auto& [block, members] : side->blocks) {
      std::sort(members.begin(), members.end());
      for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
          const auto& a = corpus.instances[members[i]];
          const auto& b = corpus.instances[members[j]];
          TrainingPair pair;
          pair.a = std::min(a.instance_id, b.instance_id);
          pair.b = std::max(a.instance_id, b.instance_id);
          pair.x = feature_vector(profiles, members[i], members[j]);
          pair.positive =
              labels.at(a.instance_id) == labels.at(b.instance_id);
          side->pairs->push_back(std::move(pair));
        }
      }
    }
  }
  return sets;
}

}  // namespace namelab
