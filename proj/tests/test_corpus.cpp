#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <random>

#include "namelab/corpus.hpp"

using namespace namelab;

namespace {

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path =
      (std::filesystem::temp_directory_path() / ("namelab_" + name)).string();
  write_file(path, content);
  return path;
}

PublicationRecord make_record(std::string id,
                              std::vector<std::string> authors,
                              std::vector<std::string> emails = {},
                              std::vector<std::string> cited = {},
                              std::string doi = {}) {
  PublicationRecord rec;
  rec.paper_id = std::move(id);
  rec.doi = std::move(doi);
  rec.year = 2015;
  rec.title = "A title";
  rec.authors = std::move(authors);
  rec.emails = std::move(emails);
  rec.cited_keys = std::move(cited);
  return rec;
}

}  // namespace

TEST_CASE("parse_corpus on TSV") {
  SECTION("empty file gives empty list") {
    const auto path = temp_file("empty.tsv", "");
    ParseStats stats;
    CHECK(parse_corpus(path, CorpusFormat::tsv, &stats).empty());
    CHECK(stats.parsed == 0);
  }
  SECTION("one row with three authors") {
    const auto path = temp_file(
        "three.tsv",
        "P1\t10.1/a\t2015\tSome title\tA One|B Two|C Three\t\t\n");
    const auto records = parse_corpus(path, CorpusFormat::tsv);
    REQUIRE(records.size() == 1);
    CHECK(records[0].authors.size() == 3);
    CHECK(records[0].doi == "10.1/a");
  }
  SECTION("anonymous byline is skipped and counted") {
    const auto path = temp_file(
        "anon.tsv",
        "P1\t\t2015\tT\tANONYMOUS\t\t\nP2\t\t2015\tT\tReal Author\t\t\n");
    ParseStats stats;
    const auto records = parse_corpus(path, CorpusFormat::tsv, &stats);
    REQUIRE(records.size() == 1);
    CHECK(records[0].paper_id == "P2");
    CHECK(stats.skipped == 1);
  }
  SECTION("malformed row is skipped with a diagnostic, not silent") {
    const auto path =
        temp_file("malformed.tsv", "P1\tonly-two-columns\nP2\t\t2015\tT\tA B\t\t\n");
    ParseStats stats;
    const auto records = parse_corpus(path, CorpusFormat::tsv, &stats);
    CHECK(records.size() == 1);
    CHECK(stats.skipped == 1);
    REQUIRE_FALSE(stats.diagnostics.empty());
  }
  SECTION("unreadable file is fatal") {
    CHECK_THROWS_AS(parse_corpus("/no/such/file.tsv", CorpusFormat::tsv),
                    std::runtime_error);
  }
}

TEST_CASE("parse_corpus on JSON") {
  const auto path = temp_file(
      "corpus.json",
      R"([{"paper_id":"P1","doi":"10.1/A","year":2014,"title":"T",
           "authors":["Kim, Jinseok","Owen-Smith, Jason"],
           "emails":["jk@x.edu"],"cited_keys":["10.9/z"]},
          {"paper_id":"P2","title":"U","authors":[]}])");
  ParseStats stats;
  const auto records = parse_corpus(path, CorpusFormat::json, &stats);
  REQUIRE(records.size() == 1);
  CHECK(records[0].doi == "10.1/a");
  CHECK(records[0].authors.size() == 2);
  CHECK(stats.skipped == 1);  // P2 has an empty byline
}

TEST_CASE("assign_emails follows candidate ranking") {
  SECTION("initials candidate matches the paper's example") {
    const auto rec = make_record("P1", {"Mark E. J. Newman"},
                                 {"mejn@umich.edu"});
    const auto assigned = assign_emails(rec);
    REQUIRE(assigned.size() == 1);
    CHECK(assigned[0].first == 0);
    CHECK(assigned[0].second == "mejn@umich.edu");
  }
  SECTION("no emails, no assignments") {
    CHECK(assign_emails(make_record("P1", {"Mark Newman"})).empty());
  }
  SECTION("instance matched to two emails is excluded") {
    const auto rec = make_record("P1", {"Mark E. J. Newman"},
                                 {"mejn@umich.edu", "marknewman@gmail.com"});
    CHECK(assign_emails(rec).empty());
  }
  SECTION("full-string match outranks initial-based match") {
    // "mejn" is all-initials for Mark E. J. Newman but a full forename
    // for Mejn Smith; the full-string candidate takes the email.
    const auto rec = make_record("P1", {"Mark E. J. Newman", "Mejn Smith"},
                                 {"mejn@x.edu"});
    const auto assigned = assign_emails(rec);
    REQUIRE(assigned.size() == 1);
    CHECK(assigned[0].first == 1);  // full-forename candidate wins
  }
  SECTION("tie at the full-string level leaves the email unassigned") {
    const auto rec = make_record("P1", {"Mark Newman", "Mary Newman"},
                                 {"mnewman@x.edu"});
    CHECK(assign_emails(rec).empty());
  }
}

TEST_CASE("email assignment is a partial injection per paper") {
  std::mt19937 rng(11);
  const char* names[] = {"Mark E. J. Newman", "Jinseok Kim", "Wei Li",
                         "Ana Garcia", "Jun Chen", "Maria Rossi"};
  const char* domains[] = {"@a.edu", "@b.org", "@c.com"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> authors, emails;
    const std::size_t n_authors = 1 + rng() % 5;
    for (std::size_t i = 0; i < n_authors; ++i)
      authors.push_back(names[rng() % std::size(names)]);
    const std::size_t n_emails = rng() % 5;
    for (std::size_t i = 0; i < n_emails; ++i) {
      const auto key = normalize_name(names[rng() % std::size(names)]);
      std::string local = rng() % 2 == 0
                              ? alpha_only(split(key.forename, ' ').front() +
                                           key.surname)
                              : alpha_only(key.surname);
      emails.push_back(local + domains[rng() % 3]);
    }
    const auto assigned =
        assign_emails(make_record("P", std::move(authors), std::move(emails)));
    std::set<std::size_t> positions;
    std::set<std::string> used;
    for (const auto& [pos, email] : assigned) {
      CHECK(positions.insert(pos).second);  // no instance holds two emails
      CHECK(used.insert(email).second);     // no email held twice
    }
  }
}

TEST_CASE("extract_citations resolves DOIs and supplemental keys") {
  std::vector<PublicationRecord> records;
  records.push_back(make_record("A", {"X Y"}, {}, {"10.1/b"}, "10.1/a"));
  records.push_back(make_record("B", {"X Y"}, {}, {}, "10.1/b"));
  records.push_back(make_record("C", {"X Y"}, {}, {"10.9/outside"}, ""));

  SECTION("edge on DOI match, none for outside keys") {
    const auto edges = extract_citations(records);
    REQUIRE(edges.size() == 1);
    CHECK(edges[0] == CitationEdge{"A", "B"});
  }
  SECTION("duplicate cited keys give one edge") {
    records[0].cited_keys = {"10.1/b", "10.1/b", "https://doi.org/10.1/B"};
    const auto edges = extract_citations(records);
    CHECK(edges.size() == 1);
  }
  SECTION("supplemental edges merge in; self-loops dropped") {
    const auto edges = extract_citations(
        records, {{"C", "10.1/a"}, {"10.1/a", "A"}, {"nowhere", "B"}});
    REQUIRE(edges.size() == 2);  // A->B and C->A; A->A dropped
    CHECK(edges[0] == CitationEdge{"A", "B"});
    CHECK(edges[1] == CitationEdge{"C", "A"});
  }
}

TEST_CASE("coauthor lists cover the rest of the byline") {
  const auto lists = build_coauthor_lists(
      make_record("P", {"A One", "B Two", "C Three"}));
  REQUIRE(lists.size() == 3);
  CHECK(lists[0].size() == 2);
  CHECK(lists[0][0].full() == "two, b");
  CHECK(lists[0][1].full() == "three, c");
  CHECK(lists[1][0].full() == "one, a");

  CHECK(build_coauthor_lists(make_record("P", {"Solo Author"}))[0].empty());
  const auto duo = build_coauthor_lists(make_record("P", {"A One", "B Two"}));
  CHECK(duo[0].size() == 1);
  CHECK(duo[1].size() == 1);
}

TEST_CASE("every instance's coauthor count equals byline size minus one") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<PublicationRecord> records;
    const std::size_t n = 1 + rng() % 4;
    for (std::size_t p = 0; p < n; ++p) {
      std::vector<std::string> authors;
      const std::size_t k = 1 + rng() % 5;
      for (std::size_t a = 0; a < k; ++a)
        authors.push_back("Name" + std::to_string(rng() % 9) + " Surname" +
                          std::to_string(rng() % 9));
      records.push_back(make_record("P" + std::to_string(p), authors));
    }
    const auto corpus = build_corpus(records);
    for (const auto& inst : corpus.instances) {
      const auto& rec =
          corpus.records[corpus.record_by_id.at(inst.paper_id)];
      CHECK(inst.coauthors.size() == rec.authors.size() - 1);
    }
  }
}

TEST_CASE("self-citation candidates are the cross product per edge") {
  std::vector<PublicationRecord> records;
  records.push_back(make_record("P1", {"A A", "B B"}, {}, {}, "10.1/p1"));
  records.push_back(make_record("P2", {"C C", "D D"}, {}, {"10.1/p1"}));
  auto corpus = build_corpus(records);
  CHECK(corpus.candidates.size() == 4);  // 2 citing x 2 cited

  SECTION("no edges, no candidates") {
    const auto quiet = build_corpus({make_record("P1", {"A A"})});
    CHECK(quiet.candidates.empty());
  }
  SECTION("one author each side gives one pair") {
    std::vector<PublicationRecord> two;
    two.push_back(make_record("Q1", {"A A"}, {}, {}, "10.1/q1"));
    two.push_back(make_record("Q2", {"A A"}, {}, {"10.1/q1"}));
    const auto c = build_corpus(two);
    REQUIRE(c.candidates.size() == 1);
    CHECK(c.instances[c.candidates[0].citing_instance].paper_id == "Q2");
    CHECK(c.instances[c.candidates[0].cited_instance].paper_id == "Q1");
  }
  SECTION("count equals the sum over edges of byline products") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<PublicationRecord> rs;
      const std::size_t n = 2 + rng() % 5;
      for (std::size_t p = 0; p < n; ++p) {
        std::vector<std::string> authors;
        for (std::size_t a = 0; a < 1 + rng() % 4; ++a)
          authors.push_back("A" + std::to_string(a) + " S" +
                            std::to_string(a));
        std::vector<std::string> cited;
        for (std::size_t c = 0; c < rng() % 3; ++c)
          cited.push_back("10.1/r" + std::to_string(rng() % n));
        rs.push_back(make_record("R" + std::to_string(p), authors, {}, cited,
                                 "10.1/r" + std::to_string(p)));
      }
      const auto corpus = build_corpus(rs);
      std::size_t expected = 0;
      for (const auto& edge : corpus.edges)
        expected +=
            corpus.instances_by_paper.at(edge.citing_paper).size() *
            corpus.instances_by_paper.at(edge.cited_paper).size();
      CHECK(corpus.candidates.size() == expected);
    }
  }
}

TEST_CASE("link_authority matches DOI plus block key") {
  std::vector<PublicationRecord> records;
  records.push_back(
      make_record("P1", {"Mark Newman", "Jin Kim"}, {}, {}, "10.1/p1"));
  records.push_back(
      make_record("P2", {"M. Newman", "Mike Newman"}, {}, {}, "10.1/p2"));
  const auto corpus = build_corpus(records);

  SECTION("unique block-matching instance is linked") {
    const auto truth = link_authority(
        corpus, {{"0000-1", "Newman", "Mark", {"10.1/p1"}}});
    REQUIRE(truth.size() == 1);
    CHECK(truth.at("P1:0") == "0000-1");
  }
  SECTION("two same-block instances on one paper link neither") {
    const auto truth = link_authority(
        corpus, {{"0000-1", "Newman", "Mark", {"10.1/p2"}}});
    CHECK(truth.empty());
  }
  SECTION("profile DOI outside the corpus links nothing") {
    const auto truth = link_authority(
        corpus, {{"0000-1", "Newman", "Mark", {"10.77/elsewhere"}}});
    CHECK(truth.empty());
  }
  SECTION("one profile never labels two instances on one paper") {
    const auto truth = link_authority(
        corpus, {{"0000-1", "Newman", "Mark", {"10.1/p1", "10.1/p2"}}});
    std::map<std::pair<std::string, std::string>, int> per_paper;
    for (const auto& [id, authority] : truth) {
      const auto paper = corpus.instance(id).paper_id;
      CHECK(++per_paper[{paper, authority}] == 1);
    }
  }
}

TEST_CASE("interchange TSV round trips through parse_corpus") {
  std::vector<PublicationRecord> records;
  records.push_back(make_record("P1", {"Kim, Jinseok", "Jason Owen-Smith"},
                                {"jk@umich.edu"}, {"10.1/x"}, "10.1/p1"));
  records.push_back(make_record("P2", {"Wei Li"}, {}, {}, ""));
  const auto path = temp_file("roundtrip.tsv", corpus_to_tsv(records));
  const auto parsed = parse_corpus(path, CorpusFormat::tsv);
  REQUIRE(parsed.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(parsed[i].paper_id == records[i].paper_id);
    CHECK(parsed[i].doi == records[i].doi);
    CHECK(parsed[i].authors == records[i].authors);
    CHECK(parsed[i].emails == records[i].emails);
    CHECK(parsed[i].cited_keys == records[i].cited_keys);
  }
}
