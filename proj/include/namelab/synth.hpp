// Synthetic bibliographic corpora with ground truth: controllable ambiguity
// (homonyms, synonyms) and feature availability (email coverage,
// self-citation density, team size).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "namelab/corpus.hpp"
#include "namelab/record.hpp"

namespace namelab {

struct SynthConfig {
  std::size_t n_authors = 100;
  double papers_per_author_mean = 4.0;
  double homonym_rate = 0.1;    // prob. a new author shares a block
  double synonym_rate = 0.2;    // prob. an author has variant name forms
  double email_coverage = 0.8;  // prob. a byline member's email appears
  double self_cite_prob = 0.3;  // per later paper of the same author
  double background_cite_prob = 0.05;  // unrelated-paper citations
  double team_size_mean = 3.0;
  std::uint64_t seed = 0;
  std::string name_pool;  // optional pool TSV; empty = built-in pool

  void validate() const {
    for (const double rate : {homonym_rate, synonym_rate, email_coverage,
                              self_cite_prob, background_cite_prob})
      if (rate < 0.0 || rate > 1.0)
        throw std::invalid_argument("synth rates must lie in [0,1]");
    if (n_authors == 0)
      throw std::invalid_argument("synth requires n_authors >= 1");
    if (papers_per_author_mean < 1.0)
      throw std::invalid_argument("papers_per_author_mean must be >= 1");
    if (team_size_mean < 1.0)
      throw std::invalid_argument("team_size_mean must be >= 1");
  }

  static SynthConfig from_json(const nlohmann::json& doc) {
    SynthConfig c;
    c.n_authors = doc.value("n_authors", c.n_authors);
    c.papers_per_author_mean =
        doc.value("papers_per_author_mean", c.papers_per_author_mean);
    c.homonym_rate = doc.value("homonym_rate", c.homonym_rate);
    c.synonym_rate = doc.value("synonym_rate", c.synonym_rate);
    c.email_coverage = doc.value("email_coverage", c.email_coverage);
    c.self_cite_prob = doc.value("self_cite_prob", c.self_cite_prob);
    c.background_cite_prob =
        doc.value("background_cite_prob", c.background_cite_prob);
    c.team_size_mean = doc.value("team_size_mean", c.team_size_mean);
    c.seed = doc.value("seed", c.seed);
    c.name_pool = doc.value("name_pool", c.name_pool);
    return c;
  }
};

struct SynthOutput {
  std::vector<PublicationRecord> records;
  TruthLabels truth;  // instance_id -> author id
};

namespace detail {

// Platform-independent draws on top of the seeded engine, so fixtures stay
// stable across standard libraries.
struct SynthRng {
  std::uint64_t state;

  explicit SynthRng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state = splitmix_step(state);
    return mix(state);
  }
  double uniform() {  // [0,1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  std::size_t index(std::size_t n) { return n == 0 ? 0 : next() % n; }
  bool chance(double p) { return uniform() < p; }
  // Knuth inversion; means here are small.
  std::size_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    double product = 1.0;
    std::size_t count = 0;
    while (true) {
      product *= uniform();
      if (product <= limit) return count;
      ++count;
    }
  }

 private:
  static std::uint64_t splitmix_step(std::uint64_t x) {
    return x + 0x9E3779B97F4A7C15ULL;
  }
  static std::uint64_t mix(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }
};

struct NamePool {
  std::vector<std::pair<std::string, double>> surnames;   // name, weight
  std::vector<std::pair<std::string, double>> forenames;  // possibly 2 tokens
};

inline NamePool builtin_name_pool() {
  NamePool pool;
  static const char* surnames[] = {
      "smith",  "johnson", "lee",    "brown",   "garcia", "miller",  "davis",
      "chen",   "wilson",  "moore",  "taylor",  "thomas", "white",   "harris",
      "martin", "clark",   "lewis",  "walker",  "hall",   "allen",   "young",
      "king",   "wright",  "scott",  "green",   "baker",  "adams",   "nelson",
      "hill",   "campbell", "gomez", "carter",  "rivera", "mitchell", "perez",
      "roberts", "turner", "kim",    "nguyen",  "murphy", "rossi",   "weber",
      "fischer", "novak",  "silva",  "kumar",   "tanaka", "dubois",
  };
  static const char* forenames[] = {
      "james",   "mary",     "robert",  "patricia", "john",    "jennifer",
      "michael", "linda",    "david",   "elizabeth", "william", "barbara",
      "richard", "susan",    "joseph",  "jessica",  "thomas",  "sarah",
      "charles", "karen",    "maria",   "daniel",   "nancy",   "matthew",
      "anthony", "lisa",     "wei",     "jun",      "ana",     "luis",
      "hans",    "franz",    "yuki",    "akira",    "priya",   "arun",
      "elena",   "ivan",     "claire",  "pierre",
  };
  const std::size_t ns = std::size(surnames);
  for (std::size_t i = 0; i < ns; ++i)
    pool.surnames.emplace_back(surnames[i],
                               1.0 / static_cast<double>(i + 1));  // Zipf
  const std::size_t nf = std::size(forenames);
  for (std::size_t i = 0; i < nf; ++i)
    pool.forenames.emplace_back(forenames[i],
                                1.0 / std::sqrt(static_cast<double>(i + 1)));
  return pool;
}

// Pool TSV rows: surname|forename <TAB> name <TAB> weight.
inline NamePool load_name_pool(const std::string& path) {
  NamePool pool;
  for (const auto& row : read_tsv(path)) {
    if (row.size() < 2) continue;
    const double weight = row.size() > 2 ? std::stod(row[2]) : 1.0;
    if (row[0] == "surname") pool.surnames.emplace_back(row[1], weight);
    else if (row[0] == "forename") pool.forenames.emplace_back(row[1], weight);
  }
  if (pool.surnames.empty() || pool.forenames.empty())
    throw std::runtime_error("name pool has no usable entries: " + path);
  return pool;
}

inline const std::string& weighted_pick(
    const std::vector<std::pair<std::string, double>>& pool, SynthRng& rng) {
  double total = 0.0;
  for (const auto& [name, w] : pool) total += w;
  double target = rng.uniform() * total;
  for (const auto& [name, w] : pool) {
    target -= w;
    if (target <= 0.0) return name;
  }
  return pool.back().first;
}

inline std::string title_case(const std::string& word) {
  std::string out = word;
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(out[0]));
  return out;
}

struct SynthAuthor {
  std::string author_id;
  std::string surname;
  std::string forename;  // 1-2 lowercase tokens
  std::vector<std::string> name_forms;  // rendered byline strings
  std::string email;
  std::string block;
  std::vector<std::size_t> circle;  // preferred collaborators
  std::vector<std::string> topics;
};

inline std::string render_full(const SynthAuthor& a) {
  std::string fore;
  for (const auto& tok : split(a.forename, ' ')) {
    if (!fore.empty()) fore.push_back(' ');
    fore += title_case(tok);
  }
  return fore + " " + title_case(a.surname);
}

inline std::string render_initials(const SynthAuthor& a) {
  std::string fore;
  for (const auto& tok : split(a.forename, ' ')) {
    fore += static_cast<char>(std::toupper(tok.front()));
    fore += ". ";
  }
  return fore + title_case(a.surname);
}

}  // namespace detail

inline SynthOutput generate(const SynthConfig& config) {
  config.validate();
  detail::SynthRng rng(config.seed * 0x51ED27F5ULL + 0xA5A5A5A5ULL);
  const detail::NamePool pool = config.name_pool.empty()
                                    ? detail::builtin_name_pool()
                                    : detail::load_name_pool(config.name_pool);
  static const char* topic_words[] = {
      "network", "learning", "graph",   "query",    "parallel", "secure",
      "quantum", "neural",   "search",  "database", "protocol", "kernel",
      "cache",   "routing",  "wireless", "energy",  "cloud",    "privacy",
      "vision",  "language", "compiler", "storage", "sensor",   "software",
      "model",   "inference", "coding",  "channel", "scheduling", "robust",
      "adaptive", "dynamic", "optimal",  "sparse",  "deep",     "hybrid",
      "fast",    "scalable", "efficient", "distributed",
  };

  // authors
  std::vector<detail::SynthAuthor> authors;
  authors.reserve(config.n_authors);
  for (std::size_t i = 0; i < config.n_authors; ++i) {
    detail::SynthAuthor a;
    a.author_id = "A" + std::to_string(i + 1);
    if (!authors.empty() && rng.chance(config.homonym_rate)) {
      // share an existing author's block
      const auto& other = authors[rng.index(authors.size())];
      a.surname = other.surname;
      const char initial = other.forename.front();
      std::vector<const std::string*> same_initial;
      for (const auto& [name, w] : pool.forenames)
        if (name.front() == initial) same_initial.push_back(&name);
      a.forename = same_initial.empty()
                       ? other.forename
                       : *same_initial[rng.index(same_initial.size())];
    } else {
      a.surname = detail::weighted_pick(pool.surnames, rng);
      a.forename = detail::weighted_pick(pool.forenames, rng);
      if (rng.chance(0.3))
        a.forename += " " + detail::weighted_pick(pool.forenames, rng);
    }
    a.block = std::string(1, a.forename.front()) + " " + a.surname;
    a.name_forms.push_back(detail::render_full(a));
    if (rng.chance(config.synonym_rate))
      a.name_forms.push_back(detail::render_initials(a));
    const std::string first = split(a.forename, ' ').front();
    a.email = first + a.surname + "@u" + std::to_string(i + 1) + ".edu";
    for (int t = 0; t < 8; ++t)
      a.topics.push_back(topic_words[rng.index(std::size(topic_words))]);
    authors.push_back(std::move(a));
  }
  for (auto& a : authors) {
    for (int c = 0; c < 5; ++c) a.circle.push_back(rng.index(authors.size()));
  }

  // papers
  SynthOutput out;
  std::vector<std::vector<std::size_t>> papers_of(authors.size());
  std::size_t paper_counter = 0;
  for (std::size_t ai = 0; ai < authors.size(); ++ai) {
    const std::size_t n_papers =
        1 + rng.poisson(config.papers_per_author_mean - 1.0);
    for (std::size_t p = 0; p < n_papers; ++p) {
      PublicationRecord rec;
      const std::size_t index = ++paper_counter;
      rec.paper_id = "P" + std::to_string(index);
      rec.doi = "10.5555/p" + std::to_string(index);
      rec.year = 2012 + static_cast<int>(index % 5);

      // team: the owner plus circle members with distinct blocks
      std::vector<std::size_t> team = {ai};
      std::set<std::string> blocks = {authors[ai].block};
      const std::size_t wanted =
          1 + rng.poisson(config.team_size_mean - 1.0);
      for (int tries = 0; team.size() < wanted && tries < 12; ++tries) {
        const auto& circle = authors[ai].circle;
        const std::size_t member = circle[rng.index(circle.size())];
        if (member == ai) continue;
        if (!blocks.insert(authors[member].block).second) continue;
        team.push_back(member);
      }
      // owner position varies
      if (team.size() > 1) std::swap(team[0], team[rng.index(team.size())]);

      for (const auto member : team) {
        const auto& a = authors[member];
        const auto& form = a.name_forms[rng.index(a.name_forms.size())];
        out.truth[make_instance_id(rec.paper_id, rec.authors.size())] =
            a.author_id;
        rec.authors.push_back(form);
        if (rng.chance(config.email_coverage)) rec.emails.push_back(a.email);
      }

      // title: owner topics plus filler
      std::vector<std::string> words;
      const std::size_t n_topic = 3 + rng.index(3);
      for (std::size_t w = 0; w < n_topic; ++w)
        words.push_back(
            authors[ai].topics[rng.index(authors[ai].topics.size())]);
      words.push_back(topic_words[rng.index(std::size(topic_words))]);
      rec.title = detail::title_case(join(words, " "));

      // citations
      if (!papers_of[ai].empty() && rng.chance(config.self_cite_prob)) {
        const auto prior = papers_of[ai][rng.index(papers_of[ai].size())];
        rec.cited_keys.push_back("10.5555/p" + std::to_string(prior));
      }
      if (paper_counter > 1 && rng.chance(config.background_cite_prob)) {
        const auto other = 1 + rng.index(paper_counter - 1);
        rec.cited_keys.push_back("10.5555/p" + std::to_string(other));
      }

      papers_of[ai].push_back(index);
      out.records.push_back(std::move(rec));
    }
  }
  std::sort(out.records.begin(), out.records.end(),
            [](const auto& a, const auto& b) { return a.paper_id < b.paper_id; });
  return out;
}

// Realized statistics for comparison against the requested configuration.
struct SynthReport {
  std::size_t papers = 0;
  std::size_t instances = 0;
  std::size_t authors = 0;
  std::size_t assigned_emails = 0;   // via assign_emails over the output
  double realized_email_coverage = 0.0;
  std::size_t citation_edges = 0;
  std::size_t blocks = 0;
  std::size_t homonym_blocks = 0;    // blocks containing >= 2 truth authors
  std::size_t synonym_authors = 0;   // authors rendered with >= 2 names
};

inline SynthReport summarize(const std::vector<PublicationRecord>& records,
                             const TruthLabels& truth) {
  SynthReport report;
  report.papers = records.size();
  Corpus corpus = build_corpus(records);
  report.instances = corpus.instances.size();
  report.citation_edges = corpus.edges.size();
  std::map<std::string, std::set<std::string>> block_authors;
  std::map<std::string, std::set<std::string>> author_names;
  std::set<std::string> authors;
  for (const auto& inst : corpus.instances) {
    if (!inst.email.empty()) ++report.assigned_emails;
    const auto t = truth.find(inst.instance_id);
    if (t != truth.end()) {
      authors.insert(t->second);
      block_authors[inst.block_key].insert(t->second);
      author_names[t->second].insert(inst.name_key().full());
    }
  }
  report.authors = authors.size();
  report.blocks = block_authors.size();
  for (const auto& [block, ids] : block_authors)
    if (ids.size() >= 2) ++report.homonym_blocks;
  for (const auto& [author, names] : author_names)
    if (names.size() >= 2) ++report.synonym_authors;
  if (report.instances > 0)
    report.realized_email_coverage =
        static_cast<double>(report.assigned_emails) /
        static_cast<double>(report.instances);
  return report;
}

}  // namespace namelab
