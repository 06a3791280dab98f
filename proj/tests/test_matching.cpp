#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "namelab/matching.hpp"

using namespace namelab;

namespace {

NameInstance make_instance(const std::string& id, const std::string& raw) {
  NameInstance inst;
  inst.instance_id = id;
  inst.raw_name = raw;
  const auto key = normalize_name(raw);
  inst.surname = key.surname;
  inst.forename = key.forename;
  inst.block_key = key.initial();
  return inst;
}

std::string random_email(std::mt19937& rng) {
  static const char* locals[] = {"mejn", "m.e.j.n", "mejn77", "jkim",
                                 "j.kim", "jk1m", "wei", "w.ei"};
  static const char* domains[] = {"@umich.edu", "@gmail.com", "@x.org"};
  return std::string(locals[rng() % std::size(locals)]) +
         domains[rng() % std::size(domains)];
}

}  // namespace

TEST_CASE("rule validation rejects inadmissible schemes") {
  CHECK_NOTHROW(MatchRule{Feature::email, Scheme::pre_at, 1}.validate());
  CHECK_THROWS_AS(
      MatchRule{Feature::email, Scheme::first_initial, 1}.validate(),
      std::invalid_argument);
  CHECK_THROWS_AS(MatchRule{Feature::coauthor, Scheme::pre_at, 1}.validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(MatchRule{Feature::coauthor, Scheme::full_string, 0}.validate(),
                  std::invalid_argument);
}

TEST_CASE("email matching schemes") {
  const std::set<std::string> a = {"mejn@umich.edu"};
  SECTION("identical full addresses match everywhere") {
    CHECK(match_email(a, {"mejn@umich.edu"}, Scheme::full_string));
    CHECK(match_email(a, {"mejn@umich.edu"}, Scheme::pre_at));
    CHECK(match_email(a, {"mejn@umich.edu"}, Scheme::alnum_only));
  }
  SECTION("same local part, different domain") {
    CHECK_FALSE(match_email(a, {"mejn@gmail.com"}, Scheme::full_string));
    CHECK(match_email(a, {"mejn@gmail.com"}, Scheme::pre_at));
  }
  SECTION("mechanics deleted under alnum_only") {
    CHECK(match_email({"m.e.j.n@x.edu"}, {"mejn@y.edu"}, Scheme::alnum_only));
    CHECK_FALSE(match_email({"m.e.j.n@x.edu"}, {"mejn@y.edu"}, Scheme::pre_at));
  }
  SECTION("unit without email never matches") {
    CHECK_FALSE(match_email({}, a, Scheme::full_string));
    CHECK_FALSE(match_email(a, {}, Scheme::alnum_only));
  }
}

TEST_CASE("email scheme relaxation chain: full => pre_at => alnum") {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 300; ++trial) {
    const std::set<std::string> a = {random_email(rng)};
    const std::set<std::string> b = {random_email(rng)};
    if (match_email(a, b, Scheme::full_string))
      CHECK(match_email(a, b, Scheme::pre_at));
    if (match_email(a, b, Scheme::pre_at))
      CHECK(match_email(a, b, Scheme::alnum_only));
  }
}

TEST_CASE("self-citation name compatibility") {
  const auto mark = make_instance("1", "Mark Newman");
  const auto mike = make_instance("2", "Mike Newman");
  SECTION("Mark vs Mike Newman: initial matches, full string does not") {
    CHECK(match_self_citation(mark, mike, Scheme::first_initial));
    CHECK_FALSE(match_self_citation(mark, mike, Scheme::full_string));
  }
  SECTION("identical normalized names match under both") {
    const auto other = make_instance("3", "  MARK   NEWMAN ");
    CHECK(match_self_citation(mark, other, Scheme::full_string));
    CHECK(match_self_citation(mark, other, Scheme::first_initial));
  }
}

TEST_CASE("coauthor matching thresholds and schemes") {
  const auto full = [](std::initializer_list<const char*> names) {
    std::set<std::string> out;
    for (const auto* n : names) out.insert(normalize_name(n).full());
    return out;
  };
  SECTION("threshold definition") {
    const auto a = full({"Carol One", "Dave Two"});
    const auto b = full({"Carol One", "Erin Three"});
    CHECK(match_coauthor(a, b, 1));
    CHECK_FALSE(match_coauthor(a, b, 2));
  }
  SECTION("initial vs full scheme on J. Smith vs Jane Smith") {
    const auto j = normalize_name("J. Smith");
    const auto jane = normalize_name("Jane Smith");
    CHECK(name_scheme_key(j, Scheme::first_initial) ==
          name_scheme_key(jane, Scheme::first_initial));
    CHECK(name_scheme_key(j, Scheme::full_string) !=
          name_scheme_key(jane, Scheme::full_string));
  }
  SECTION("disjoint sets never match") {
    const auto a = full({"Carol One"});
    const auto b = full({"Erin Three"});
    for (int k = 1; k <= 3; ++k) CHECK_FALSE(match_coauthor(a, b, k));
  }
}

TEST_CASE("match predicates are symmetric") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    std::set<std::string> ea, eb;
    for (std::size_t i = 0; i < 1 + rng() % 2; ++i) ea.insert(random_email(rng));
    for (std::size_t i = 0; i < 1 + rng() % 2; ++i) eb.insert(random_email(rng));
    for (const auto scheme :
         {Scheme::full_string, Scheme::pre_at, Scheme::alnum_only})
      CHECK(match_email(ea, eb, scheme) == match_email(eb, ea, scheme));
  }
  const auto a = make_instance("1", "Mark Newman");
  const auto b = make_instance("2", "M. Newman");
  for (const auto scheme : {Scheme::full_string, Scheme::first_initial})
    CHECK(match_self_citation(a, b, scheme) ==
          match_self_citation(b, a, scheme));
}

TEST_CASE("coauthor threshold monotonicity") {
  std::mt19937 rng(29);
  static const char* pool[] = {"A One", "B Two", "C Three", "D Four",
                               "E Five"};
  for (int trial = 0; trial < 100; ++trial) {
    std::set<std::string> a, b;
    for (std::size_t i = 0; i < 1 + rng() % 4; ++i)
      a.insert(normalize_name(pool[rng() % std::size(pool)]).full());
    for (std::size_t i = 0; i < 1 + rng() % 4; ++i)
      b.insert(normalize_name(pool[rng() % std::size(pool)]).full());
    for (int k = 2; k <= 4; ++k)
      if (match_coauthor(a, b, k)) CHECK(match_coauthor(a, b, k - 1));
  }
}

TEST_CASE("full-string name equality implies first-initial equality") {
  std::mt19937 rng(31);
  static const char* pool[] = {"Mark Newman", "M. Newman", "Mike Newman",
                               "Kim, Jinseok", "Kim, Jinmo", "Wei Li"};
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = normalize_name(pool[rng() % std::size(pool)]);
    const auto b = normalize_name(pool[rng() % std::size(pool)]);
    if (a.full() == b.full()) CHECK(a.initial() == b.initial());
  }
}

TEST_CASE("evaluate_rule counts truth-labeled pairs") {
  const MatchRule rule{Feature::email, Scheme::full_string, 1};
  std::vector<InstancePair> pairs = {{"a", "b"}, {"b", "c"}, {"c", "d"}};
  TruthLabels truth = {{"a", "X"}, {"b", "X"}, {"c", "Y"}};
  const auto report = evaluate_rule(rule, pairs, truth);
  CHECK(report.match_pairs == 3);
  CHECK(report.evaluable_pairs == 2);  // (a,b) and (b,c); d unlabeled
  CHECK(report.true_match == 1);       // only (a,b)
  CHECK(report.accuracy_defined);
  CHECK(report.accuracy == Catch::Approx(0.5));
}

TEST_CASE("evaluate_rule flags an empty evaluable set") {
  const auto report = evaluate_rule({Feature::email, Scheme::pre_at, 1},
                                    {{"a", "b"}}, TruthLabels{});
  CHECK_FALSE(report.accuracy_defined);
  CHECK(report.evaluable_pairs == 0);
}

TEST_CASE("evaluate_rule accuracy equals a brute-force recount") {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<InstancePair> pairs;
    TruthLabels truth;
    const std::size_t n = 2 + rng() % 20;
    for (std::size_t i = 0; i < n; ++i)
      if (rng() % 4 != 0)
        truth["i" + std::to_string(i)] = "A" + std::to_string(rng() % 4);
    for (std::size_t p = 0; p < 2 * n; ++p) {
      const auto a = "i" + std::to_string(rng() % n);
      const auto b = "i" + std::to_string(rng() % n);
      if (a != b) pairs.push_back(make_pair_sorted(a, b));
    }
    const auto report =
        evaluate_rule({Feature::coauthor, Scheme::full_string, 1}, pairs,
                      truth);
    std::size_t evaluable = 0, correct = 0;
    for (const auto& pr : pairs) {
      if (!truth.count(pr.a) || !truth.count(pr.b)) continue;
      ++evaluable;
      if (truth.at(pr.a) == truth.at(pr.b)) ++correct;
    }
    CHECK(report.evaluable_pairs == evaluable);
    CHECK(report.true_match == correct);
    if (evaluable > 0)
      CHECK(report.accuracy ==
            Catch::Approx(static_cast<double>(correct) / evaluable));
  }
}

TEST_CASE("paper count arithmetic reproduces the reported accuracies") {
  auto accuracy_of = [](std::size_t matched, std::size_t correct) {
    std::vector<InstancePair> pairs;
    TruthLabels truth;
    for (std::size_t i = 0; i < matched; ++i) {
      const auto a = "p" + std::to_string(i) + "a";
      const auto b = "p" + std::to_string(i) + "b";
      pairs.push_back(make_pair_sorted(a, b));
      truth[a] = "A" + std::to_string(i);
      truth[b] = (i < correct ? "A" : "B") + std::to_string(i);
    }
    return evaluate_rule({Feature::email, Scheme::full_string, 1}, pairs,
                         truth);
  };
  const auto email = accuracy_of(26942, 26870);
  CHECK(email.accuracy * 100 == Catch::Approx(99.73).margin(0.01));
  const auto selfcite = accuracy_of(5513, 5508);
  CHECK(selfcite.accuracy * 100 == Catch::Approx(99.91).margin(0.01));
  const auto coauthor = accuracy_of(19446, 19412);
  CHECK(coauthor.accuracy * 100 == Catch::Approx(99.83).margin(0.01));
}

TEST_CASE("matched_pairs generates rule-consistent instance pairs") {
  std::vector<PublicationRecord> records;
  PublicationRecord p1;
  p1.paper_id = "P1";
  p1.doi = "10.1/p1";
  p1.title = "T";
  p1.authors = {"Mark Newman", "Carol One"};
  p1.emails = {"marknewman@x.edu"};
  records.push_back(p1);
  PublicationRecord p2;
  p2.paper_id = "P2";
  p2.title = "U";
  p2.authors = {"Mark Newman", "Dave Two"};
  p2.emails = {"marknewman@x.edu"};
  p2.cited_keys = {"10.1/p1"};
  records.push_back(p2);
  const auto corpus = build_corpus(records);

  const auto email_pairs =
      matched_pairs(corpus, {Feature::email, Scheme::full_string, 1});
  REQUIRE(email_pairs.size() == 1);
  CHECK(email_pairs[0] == InstancePair{"P1:0", "P2:0"});

  const auto sc_pairs = matched_pairs(
      corpus, {Feature::self_citation, Scheme::full_string, 1});
  REQUIRE(sc_pairs.size() == 1);
  CHECK(sc_pairs[0] == InstancePair{"P1:0", "P2:0"});

  // no shared coauthor names between the two Newmans
  CHECK(matched_pairs(corpus, {Feature::coauthor, Scheme::full_string, 1})
            .empty());
}
