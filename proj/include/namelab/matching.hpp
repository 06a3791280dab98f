// Identity-matching rules over email, self-citation, and coauthor features,
// plus accuracy evaluation against authority labels.
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "namelab/corpus.hpp"
#include "namelab/record.hpp"
#include "namelab/text.hpp"

namespace namelab {

enum class Feature { email, self_citation, coauthor };
enum class Scheme { full_string, pre_at, alnum_only, first_initial };

inline const char* to_string(Feature f) {
  switch (f) {
    case Feature::email: return "email";
    case Feature::self_citation: return "self_citation";
    case Feature::coauthor: return "coauthor";
  }
  return "?";
}

inline const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::full_string: return "full_string";
    case Scheme::pre_at: return "pre_at";
    case Scheme::alnum_only: return "alnum_only";
    case Scheme::first_initial: return "first_initial";
  }
  return "?";
}

inline Feature feature_from_string(const std::string& s) {
  if (s == "email") return Feature::email;
  if (s == "self_citation") return Feature::self_citation;
  if (s == "coauthor") return Feature::coauthor;
  throw std::invalid_argument("unknown feature: " + s);
}

inline Scheme scheme_from_string(const std::string& s) {
  if (s == "full_string") return Scheme::full_string;
  if (s == "pre_at") return Scheme::pre_at;
  if (s == "alnum_only") return Scheme::alnum_only;
  if (s == "first_initial") return Scheme::first_initial;
  throw std::invalid_argument("unknown scheme: " + s);
}

// A (feature, scheme, threshold) predicate. min_shared is the coauthor
// count threshold k and is ignored by the other features.
struct MatchRule {
  Feature feature = Feature::email;
  Scheme scheme = Scheme::full_string;
  int min_shared = 1;

  void validate() const {
    const bool ok = [&] {
      switch (feature) {
        case Feature::email:
          return scheme == Scheme::full_string || scheme == Scheme::pre_at ||
                 scheme == Scheme::alnum_only;
        case Feature::self_citation:
        case Feature::coauthor:
          return scheme == Scheme::full_string ||
                 scheme == Scheme::first_initial;
      }
      return false;
    }();
    if (!ok)
      throw std::invalid_argument(std::string("scheme ") + to_string(scheme) +
                                  " not admissible for feature " +
                                  to_string(feature));
    if (min_shared < 1)
      throw std::invalid_argument("min_shared must be >= 1");
  }
};

// The comparison key an email address reduces to under a scheme.
inline std::string email_scheme_key(const std::string& address, Scheme scheme) {
  switch (scheme) {
    case Scheme::full_string: return address;
    case Scheme::pre_at: return email_local(address);
    case Scheme::alnum_only: return alnum_only(email_local(address));
    default:
      throw std::invalid_argument("email scheme must be full_string, pre_at, "
                                  "or alnum_only");
  }
}

// The comparison key a normalized name reduces to under a scheme.
inline std::string name_scheme_key(const NameKey& name, Scheme scheme) {
  switch (scheme) {
    case Scheme::full_string: return name.full();
    case Scheme::first_initial: return name.initial();
    default:
      throw std::invalid_argument("name scheme must be full_string or "
                                  "first_initial");
  }
}

// True iff some email of a equals some email of b under the scheme.
// Units without emails never match.
inline bool match_email(const std::set<std::string>& a,
                        const std::set<std::string>& b, Scheme scheme) {
  std::set<std::string> keys;
  for (const auto& e : a) keys.insert(email_scheme_key(e, scheme));
  return std::any_of(b.begin(), b.end(), [&](const std::string& e) {
    return keys.count(email_scheme_key(e, scheme)) > 0;
  });
}

// Name compatibility of a citing/cited instance pair.
inline bool match_self_citation(const NameInstance& citing,
                                const NameInstance& cited, Scheme scheme) {
  return name_scheme_key(citing.name_key(), scheme) ==
         name_scheme_key(cited.name_key(), scheme);
}

inline std::size_t shared_count(const std::set<std::string>& a,
                                const std::set<std::string>& b) {
  std::size_t n = 0;
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  for (const auto& x : small) n += large.count(x);
  return n;
}

// Shared-coauthor test between two same-block units. Sets hold coauthor
// keys already reduced to the scheme's form (distinct names, not counts).
inline bool match_coauthor(const std::set<std::string>& a,
                           const std::set<std::string>& b, int min_shared) {
  return shared_count(a, b) >= static_cast<std::size_t>(min_shared);
}

// ---------------------------------------------------------------------------
// Instance-level matched-pair generation (Step 1 rule validation)

struct InstancePair {
  std::string a, b;  // instance ids, a < b

  bool operator==(const InstancePair&) const = default;
  auto operator<=>(const InstancePair&) const = default;
};

inline InstancePair make_pair_sorted(const std::string& x,
                                     const std::string& y) {
  return x < y ? InstancePair{x, y} : InstancePair{y, x};
}

struct PairGenOptions {
  // Restrict email matching to same-block instances. The iterative
  // clustering algorithm compares all pairs, so this defaults off.
  bool email_within_block = false;
};

// All instance pairs matched by the rule over the corpus. Emails use the
// instance's assigned address; coauthor pairs are generated within blocks
// via an inverted index on coauthor keys; self-citation pairs come from the
// precomputed candidates.
inline std::vector<InstancePair> matched_pairs(const Corpus& corpus,
                                               const MatchRule& rule,
                                               const PairGenOptions& opt = {}) {
  rule.validate();
  std::set<InstancePair> pairs;
  switch (rule.feature) {
    case Feature::email: {
      std::map<std::string, std::vector<const NameInstance*>> buckets;
      for (const auto& inst : corpus.instances) {
        if (inst.email.empty()) continue;
        std::string key = email_scheme_key(inst.email, rule.scheme);
        if (opt.email_within_block) key = inst.block_key + "\x1f" + key;
        buckets[std::move(key)].push_back(&inst);
      }
      for (const auto& [key, members] : buckets)
        for (std::size_t i = 0; i < members.size(); ++i)
          for (std::size_t j = i + 1; j < members.size(); ++j)
            pairs.insert(make_pair_sorted(members[i]->instance_id,
                                          members[j]->instance_id));
      break;
    }
    case Feature::self_citation: {
      for (const auto& cand : corpus.candidates) {
        const auto& citing = corpus.instances[cand.citing_instance];
        const auto& cited = corpus.instances[cand.cited_instance];
        if (citing.instance_id == cited.instance_id) continue;
        if (match_self_citation(citing, cited, rule.scheme))
          pairs.insert(
              make_pair_sorted(citing.instance_id, cited.instance_id));
      }
      break;
    }
    case Feature::coauthor: {
      // (block, coauthor key) -> instances; candidates then verified
      // against the k threshold.
      std::map<std::string, std::vector<std::uint32_t>> buckets;
      std::vector<std::set<std::string>> keysets(corpus.instances.size());
      for (std::uint32_t i = 0; i < corpus.instances.size(); ++i) {
        const auto& inst = corpus.instances[i];
        for (const auto& co : inst.coauthors)
          keysets[i].insert(name_scheme_key(co, rule.scheme));
        for (const auto& key : keysets[i])
          buckets[inst.block_key + "\x1f" + key].push_back(i);
      }
      std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
      for (const auto& [key, members] : buckets) {
        for (std::size_t i = 0; i < members.size(); ++i) {
          for (std::size_t j = i + 1; j < members.size(); ++j) {
            auto idx = std::minmax(members[i], members[j]);
            if (!seen.insert(idx).second) continue;
            if (match_coauthor(keysets[idx.first], keysets[idx.second],
                               rule.min_shared))
              pairs.insert(make_pair_sorted(
                  corpus.instances[idx.first].instance_id,
                  corpus.instances[idx.second].instance_id));
          }
        }
      }
      break;
    }
  }
  return {pairs.begin(), pairs.end()};
}

// ---------------------------------------------------------------------------
// Rule accuracy against truth labels (Step 1)

struct RuleAccuracyReport {
  MatchRule rule;
  std::size_t match_pairs = 0;      // all pairs produced by the rule
  std::size_t evaluable_pairs = 0;  // both sides truth-labeled
  std::size_t true_match = 0;       // equal authority ids
  double accuracy = 0.0;
  bool accuracy_defined = false;
};

inline RuleAccuracyReport evaluate_rule(const MatchRule& rule,
                                        const std::vector<InstancePair>& pairs,
                                        const TruthLabels& truth) {
  RuleAccuracyReport report;
  report.rule = rule;
  report.match_pairs = pairs.size();
  for (const auto& pair : pairs) {
    const auto a = truth.find(pair.a);
    const auto b = truth.find(pair.b);
    if (a == truth.end() || b == truth.end()) continue;
    ++report.evaluable_pairs;
    if (a->second == b->second) ++report.true_match;
  }
  if (report.evaluable_pairs > 0) {
    report.accuracy = static_cast<double>(report.true_match) /
                      static_cast<double>(report.evaluable_pairs);
    report.accuracy_defined = true;
  }
  return report;
}

}  // namespace namelab
