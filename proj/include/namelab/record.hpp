// Domain types shared across the pipeline.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "namelab/text.hpp"

namespace namelab {

// One publication as ingested. Emails are paper-level (unassigned to
// authors), cited keys are normalized DOIs or supplemental ids.
struct PublicationRecord {
  std::string paper_id;
  std::string doi;  // empty = missing; lowercase, trimmed
  int year = 0;
  std::string title;
  std::vector<std::string> authors;  // raw byline, in order
  std::vector<std::string> emails;
  std::vector<std::string> cited_keys;
};

// One author-name occurrence on one paper.
struct NameInstance {
  std::string instance_id;  // "<paper_id>:<position>"
  std::string paper_id;
  std::size_t position = 0;  // 0-based byline index
  std::string raw_name;
  std::string surname;
  std::string forename;
  std::string email;  // normalized; empty unless assignment succeeded uniquely
  std::vector<NameKey> coauthors;  // the rest of the byline, normalized
  std::string block_key;

  NameKey name_key() const { return NameKey{surname, forename}; }
};

struct CitationEdge {
  std::string citing_paper;
  std::string cited_paper;

  bool operator==(const CitationEdge&) const = default;
  auto operator<=>(const CitationEdge&) const = default;
};

// An instance pair joined by a paper-level citation edge. Directionality
// follows the edge; name compatibility is checked later by the match rules.
struct SelfCitationCandidate {
  std::uint32_t citing_instance = 0;  // index into Corpus::instances
  std::uint32_t cited_instance = 0;
};

// Partial map instance_id -> authority id (e.g. an ORCID id).
using TruthLabels = std::map<std::string, std::string>;

// Partition of instance ids: instance_id -> cluster id.
using LabelMap = std::map<std::string, std::string>;

inline std::string make_instance_id(const std::string& paper_id,
                                    std::size_t position) {
  return paper_id + ":" + std::to_string(position);
}

}  // namespace namelab
