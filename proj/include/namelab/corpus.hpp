// Corpus ingestion and feature extraction: byline parsing, email-to-author
// assignment, citation edges, self-citation candidates, authority linkage.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "namelab/io.hpp"
#include "namelab/record.hpp"
#include "namelab/text.hpp"

namespace namelab {

enum class CorpusFormat { tsv, json };

struct ParseStats {
  std::size_t parsed = 0;
  std::size_t skipped = 0;  // empty or anonymous bylines, malformed rows
  std::vector<std::string> diagnostics;
};

namespace detail {

inline bool anonymous_author(const std::string& raw) {
  std::string t = to_ascii_lower(trim(raw));
  if (t == "anonymous" || t == "[anonymous]") return true;
  return alnum_only(t).empty();  // nothing left to normalize
}

// A byline is usable if it is non-empty and carries no null/anonymous entry.
inline bool usable_byline(const std::vector<std::string>& authors) {
  if (authors.empty()) return false;
  for (const auto& a : authors)
    if (anonymous_author(a)) return false;
  return true;
}

inline std::vector<std::string> split_list(const std::string& field) {
  std::vector<std::string> out;
  if (trim(field).empty()) return out;
  for (auto& part : split(field, '|')) {
    auto t = trim(part);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace detail

// Interchange TSV columns: paper_id, doi, year, title, byline ("|"-joined),
// emails ("|"-joined), cited_keys ("|"-joined). Empty column = missing.
inline std::vector<PublicationRecord> parse_corpus(const std::string& path,
                                                   CorpusFormat format,
                                                   ParseStats* stats = nullptr) {
  ParseStats local;
  ParseStats& st = stats ? *stats : local;
  std::vector<PublicationRecord> records;
  std::set<std::string> seen_ids;

  auto add_record = [&](PublicationRecord rec, const std::string& where) {
    if (rec.paper_id.empty()) {
      ++st.skipped;
      st.diagnostics.push_back(where + ": missing paper_id");
      return;
    }
    if (!seen_ids.insert(rec.paper_id).second) {
      ++st.skipped;
      st.diagnostics.push_back(where + ": duplicate paper_id " + rec.paper_id);
      return;
    }
    if (!detail::usable_byline(rec.authors)) {
      ++st.skipped;
      st.diagnostics.push_back(where + ": empty or anonymous byline (" +
                               rec.paper_id + ")");
      return;
    }
    rec.doi = normalize_doi(rec.doi);
    for (auto& key : rec.cited_keys) key = normalize_doi(key);
    ++st.parsed;
    records.push_back(std::move(rec));
  };

  if (format == CorpusFormat::tsv) {
    const auto rows = read_tsv(path);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      const std::string where = path + ":" + std::to_string(i + 1);
      if (row.size() < 5) {
        ++st.skipped;
        st.diagnostics.push_back(where + ": expected >=5 columns, got " +
                                 std::to_string(row.size()));
        continue;
      }
      PublicationRecord rec;
      rec.paper_id = trim(row[0]);
      rec.doi = row[1];
      try {
        rec.year = trim(row[2]).empty() ? 0 : std::stoi(row[2]);
      } catch (const std::exception&) {
        ++st.skipped;
        st.diagnostics.push_back(where + ": bad year '" + row[2] + "'");
        continue;
      }
      rec.title = trim(row[3]);
      rec.authors = detail::split_list(row[4]);
      if (row.size() > 5) rec.emails = detail::split_list(row[5]);
      if (row.size() > 6) rec.cited_keys = detail::split_list(row[6]);
      add_record(std::move(rec), where);
    }
  } else {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error("cannot parse JSON corpus " + path + ": " +
                               e.what());
    }
    if (!doc.is_array())
      throw std::runtime_error("JSON corpus must be an array: " + path);
    std::size_t i = 0;
    for (const auto& item : doc) {
      const std::string where = path + "[" + std::to_string(i++) + "]";
      if (!item.is_object()) {
        ++st.skipped;
        st.diagnostics.push_back(where + ": not an object");
        continue;
      }
      PublicationRecord rec;
      rec.paper_id = item.value("paper_id", std::string());
      rec.doi = item.value("doi", std::string());
      rec.year = item.value("year", 0);
      rec.title = item.value("title", std::string());
      for (const auto* field : {"authors", "emails", "cited_keys"}) {
        if (!item.contains(field)) continue;
        if (!item[field].is_array()) {
          st.diagnostics.push_back(where + ": field " + field +
                                   " is not an array");
          continue;
        }
        for (const auto& v : item[field]) {
          if (!v.is_string()) continue;
          auto s = trim(v.get<std::string>());
          if (s.empty()) continue;
          if (std::string(field) == "authors") rec.authors.push_back(s);
          else if (std::string(field) == "emails") rec.emails.push_back(s);
          else rec.cited_keys.push_back(s);
        }
      }
      add_record(std::move(rec), where);
    }
  }
  for (const auto& d : st.diagnostics) log_msg(LogLevel::warn, d);
  return records;
}

// ---------------------------------------------------------------------------
// Email assignment

// Candidate local-part strings for one author, alpha-only. The paper lists
// examples ("mejnewman, mnewman, markn, mejn" for Mark E. J. Newman); the
// exact set is a configuration point. `full_string` marks candidates that
// spell out at least one name component, which outrank all-initial forms.
struct EmailCandidate {
  std::string text;
  bool full_string = false;
};

inline std::vector<EmailCandidate> email_candidates(const NameKey& name) {
  const std::string surname = alpha_only(name.surname);
  const auto tokens = split(name.forename, ' ');
  std::vector<std::string> fore;
  for (const auto& t : tokens) {
    auto a = alpha_only(t);
    if (!a.empty()) fore.push_back(a);
  }
  std::string fore_concat, fore_initials;
  for (const auto& f : fore) {
    fore_concat += f;
    fore_initials.push_back(f.front());
  }
  const std::string first = fore.empty() ? std::string() : fore.front();
  const std::string first_initial =
      first.empty() ? std::string() : first.substr(0, 1);
  const std::string surname_initial =
      surname.empty() ? std::string() : surname.substr(0, 1);

  std::vector<EmailCandidate> out;
  auto add = [&](std::string text, bool full) {
    if (text.empty()) return;
    for (const auto& c : out)
      if (c.text == text) return;
    out.push_back({std::move(text), full});
  };
  add(fore_concat + surname, true);          // markejnewman
  add(first + surname, true);                // marknewman
  add(fore_initials + surname, true);        // mejnewman
  add(first_initial + surname, true);        // mnewman
  add(first + surname_initial, true);        // markn
  if (first.size() >= 4) add(first, true);   // mark
  add(fore_initials + surname_initial, false);  // mejn
  return out;
}

// Resolves record-level emails to byline positions. Per email, instances
// matching on a full-string candidate outrank initial-only matches; an email
// with tied best candidates stays unassigned, and an instance winning two or
// more emails is excluded entirely.
inline std::vector<std::pair<std::size_t, std::string>> assign_emails(
    const PublicationRecord& record) {
  struct Match {
    std::size_t position;
    bool full_string;
  };
  std::vector<std::vector<EmailCandidate>> candidates;
  candidates.reserve(record.authors.size());
  for (const auto& raw : record.authors)
    candidates.push_back(email_candidates(normalize_name(raw)));

  std::vector<std::pair<std::size_t, std::string>> provisional;
  for (const auto& raw_email : record.emails) {
    const std::string email = normalize_email(raw_email);
    const std::string local = alpha_only(email_local(email));
    if (local.empty()) continue;
    std::vector<Match> matches;
    for (std::size_t pos = 0; pos < candidates.size(); ++pos) {
      bool any = false, full = false;
      for (const auto& c : candidates[pos]) {
        if (c.text == local) {
          any = true;
          full = full || c.full_string;
        }
      }
      if (any) matches.push_back({pos, full});
    }
    if (matches.empty()) continue;
    const bool has_full =
        std::any_of(matches.begin(), matches.end(),
                    [](const Match& m) { return m.full_string; });
    std::vector<std::size_t> best;
    for (const auto& m : matches)
      if (m.full_string == has_full) best.push_back(m.position);
    if (best.size() != 1) continue;  // tie at the top rank: leave unassigned
    provisional.emplace_back(best.front(), email);
  }

  std::vector<std::size_t> wins(record.authors.size(), 0);
  for (const auto& [pos, email] : provisional) ++wins[pos];
  std::vector<std::pair<std::size_t, std::string>> assignments;
  for (auto& [pos, email] : provisional)
    if (wins[pos] == 1) assignments.emplace_back(pos, std::move(email));
  return assignments;
}

// ---------------------------------------------------------------------------
// Corpus assembly

struct Corpus {
  std::vector<PublicationRecord> records;
  std::vector<NameInstance> instances;
  std::vector<CitationEdge> edges;
  std::vector<SelfCitationCandidate> candidates;

  std::map<std::string, std::size_t> record_by_id;
  std::map<std::string, std::uint32_t> instance_by_id;
  // instance indices per paper, in byline order
  std::map<std::string, std::vector<std::uint32_t>> instances_by_paper;

  const NameInstance& instance(const std::string& id) const {
    return instances.at(instance_by_id.at(id));
  }
};

// Edges resolve cited keys against corpus DOIs and paper ids; supplemental
// rows are (citing_key, cited_key) resolved the same way. Self-loops and
// duplicates are removed, output sorted.
inline std::vector<CitationEdge> extract_citations(
    const std::vector<PublicationRecord>& records,
    const std::vector<std::pair<std::string, std::string>>& supplemental = {}) {
  std::map<std::string, std::string> paper_by_key;  // doi or id -> paper_id
  for (const auto& rec : records) {
    paper_by_key[rec.paper_id] = rec.paper_id;
    if (!rec.doi.empty()) paper_by_key.emplace(rec.doi, rec.paper_id);
  }
  auto resolve = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = paper_by_key.find(normalize_doi(key));
    if (it == paper_by_key.end()) return std::nullopt;
    return it->second;
  };

  std::set<CitationEdge> edges;
  for (const auto& rec : records) {
    for (const auto& key : rec.cited_keys) {
      if (const auto cited = resolve(key); cited && *cited != rec.paper_id)
        edges.insert({rec.paper_id, *cited});
    }
  }
  for (const auto& [citing_key, cited_key] : supplemental) {
    const auto citing = resolve(citing_key);
    const auto cited = resolve(cited_key);
    if (citing && cited && *citing != *cited) edges.insert({*citing, *cited});
  }
  return {edges.begin(), edges.end()};
}

// Every other byline name, normalized. Instance i's list keeps byline order.
inline std::vector<std::vector<NameKey>> build_coauthor_lists(
    const PublicationRecord& record) {
  std::vector<NameKey> names;
  names.reserve(record.authors.size());
  for (const auto& raw : record.authors) names.push_back(normalize_name(raw));
  std::vector<std::vector<NameKey>> lists(names.size());
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = 0; j < names.size(); ++j)
      if (i != j) lists[i].push_back(names[j]);
  return lists;
}

// All cross pairs of instances on citing/cited papers, one per edge-author
// combination. Name compatibility is left to the match rules.
inline std::vector<SelfCitationCandidate> build_self_citation_candidates(
    const std::vector<CitationEdge>& edges, const Corpus& corpus) {
  std::vector<SelfCitationCandidate> out;
  for (const auto& edge : edges) {
    const auto citing = corpus.instances_by_paper.find(edge.citing_paper);
    const auto cited = corpus.instances_by_paper.find(edge.cited_paper);
    if (citing == corpus.instances_by_paper.end() ||
        cited == corpus.instances_by_paper.end())
      continue;
    for (const auto i2 : citing->second)
      for (const auto i1 : cited->second) out.push_back({i2, i1});
  }
  return out;
}

// Parses records into a corpus with all three features extracted.
inline Corpus build_corpus(
    std::vector<PublicationRecord> records,
    const std::vector<std::pair<std::string, std::string>>& supplemental = {}) {
  Corpus corpus;
  corpus.records = std::move(records);
  std::sort(corpus.records.begin(), corpus.records.end(),
            [](const auto& a, const auto& b) { return a.paper_id < b.paper_id; });

  for (std::size_t r = 0; r < corpus.records.size(); ++r) {
    const auto& rec = corpus.records[r];
    corpus.record_by_id[rec.paper_id] = r;
    const auto coauthors = build_coauthor_lists(rec);
    const auto assignments = assign_emails(rec);
    for (std::size_t pos = 0; pos < rec.authors.size(); ++pos) {
      NameInstance inst;
      inst.instance_id = make_instance_id(rec.paper_id, pos);
      inst.paper_id = rec.paper_id;
      inst.position = pos;
      inst.raw_name = rec.authors[pos];
      const NameKey key = normalize_name(rec.authors[pos]);
      inst.surname = key.surname;
      inst.forename = key.forename;
      inst.block_key = key.initial();
      inst.coauthors = coauthors[pos];
      for (const auto& [apos, email] : assignments)
        if (apos == pos) inst.email = email;
      const auto idx = static_cast<std::uint32_t>(corpus.instances.size());
      corpus.instance_by_id[inst.instance_id] = idx;
      corpus.instances_by_paper[rec.paper_id].push_back(idx);
      corpus.instances.push_back(std::move(inst));
    }
  }
  corpus.edges = extract_citations(corpus.records, supplemental);
  corpus.candidates = build_self_citation_candidates(corpus.edges, corpus);
  return corpus;
}

// Interchange TSV, one record per line (see parse_corpus for columns).
inline std::string corpus_to_tsv(const std::vector<PublicationRecord>& records) {
  std::string out;
  for (const auto& rec : records) {
    out += rec.paper_id;
    out += '\t';
    out += rec.doi;
    out += '\t';
    out += rec.year > 0 ? std::to_string(rec.year) : std::string();
    out += '\t';
    out += rec.title;
    out += '\t';
    out += join(rec.authors, "|");
    out += '\t';
    out += join(rec.emails, "|");
    out += '\t';
    out += join(rec.cited_keys, "|");
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Authority linkage

struct AuthorityProfile {
  std::string authority_id;
  std::string surname;   // raw owner name, normalized on use
  std::string forename;
  std::vector<std::string> dois;
};

inline std::vector<AuthorityProfile> read_authority_profiles(
    const std::string& path) {
  nlohmann::json doc = nlohmann::json::parse(read_file(path));
  if (!doc.is_array())
    throw std::runtime_error("authority profiles must be a JSON array: " + path);
  std::vector<AuthorityProfile> out;
  for (const auto& item : doc) {
    AuthorityProfile p;
    p.authority_id = item.at("authority_id").get<std::string>();
    p.surname = item.value("surname", std::string());
    p.forename = item.value("forename", std::string());
    if (item.contains("dois"))
      for (const auto& d : item["dois"]) p.dois.push_back(d.get<std::string>());
    out.push_back(std::move(p));
  }
  return out;
}

// Links profiles to instances via DOI + block-key match. A paper with two
// block-matching candidates for one profile links neither; an instance
// claimed by two distinct authority ids stays unlabeled.
inline TruthLabels link_authority(const Corpus& corpus,
                                  const std::vector<AuthorityProfile>& profiles) {
  std::map<std::string, std::size_t> record_by_doi;
  for (std::size_t r = 0; r < corpus.records.size(); ++r)
    if (!corpus.records[r].doi.empty())
      record_by_doi.emplace(corpus.records[r].doi, r);

  std::map<std::string, std::set<std::string>> claims;  // instance -> ids
  for (const auto& profile : profiles) {
    const std::string owner_block =
        NameKey{normalize_name_part(profile.surname),
                normalize_name_part(profile.forename)}
            .initial();
    for (const auto& raw_doi : profile.dois) {
      const auto rit = record_by_doi.find(normalize_doi(raw_doi));
      if (rit == record_by_doi.end()) continue;
      const auto& paper_id = corpus.records[rit->second].paper_id;
      std::vector<const NameInstance*> matched;
      for (const auto idx : corpus.instances_by_paper.at(paper_id))
        if (corpus.instances[idx].block_key == owner_block)
          matched.push_back(&corpus.instances[idx]);
      if (matched.size() == 1)
        claims[matched.front()->instance_id].insert(profile.authority_id);
    }
  }
  TruthLabels labels;
  for (const auto& [instance_id, ids] : claims)
    if (ids.size() == 1) labels[instance_id] = *ids.begin();
  return labels;
}

}  // namespace namelab
