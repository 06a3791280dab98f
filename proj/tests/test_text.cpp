#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "namelab/text.hpp"

using namespace namelab;

TEST_CASE("normalize_name handles comma and last-token forms") {
  auto key = normalize_name("Newman, M.E.J.");
  CHECK(key.surname == "newman");
  CHECK(key.forename == "m e j");

  key = normalize_name("Mark Newman");
  CHECK(key.surname == "newman");
  CHECK(key.forename == "mark");

  key = normalize_name("Kim, Jinseok");
  CHECK(key.surname == "kim");
  CHECK(key.forename == "jinseok");

  key = normalize_name("Newman M.");
  CHECK(key.surname == "m");
  CHECK(key.forename == "newman");

  key = normalize_name("Newman");
  CHECK(key.surname == "newman");
  CHECK(key.forename.empty());
}

TEST_CASE("normalize_name transliterates diacritics and strips punctuation") {
  auto key = normalize_name("Gonçalves, Marcos André");
  CHECK(key.surname == "goncalves");
  CHECK(key.forename == "marcos andre");

  key = normalize_name("Müller, Jörg");
  CHECK(key.surname == "muller");
  CHECK(key.forename == "jorg");

  key = normalize_name("Owen-Smith, Jason");
  CHECK(key.surname == "owen smith");
  CHECK(key.forename == "jason");
}

TEST_CASE("normalize_name rejects blank input") {
  CHECK_THROWS_AS(normalize_name("   "), std::invalid_argument);
  CHECK_THROWS_AS(normalize_name("..."), std::invalid_argument);
}

TEST_CASE("block key is first initial plus surname") {
  CHECK(normalize_name("Mark Newman").initial() == "m newman");
  CHECK(normalize_name("M.E.J. Newman").initial() == "m newman");
  CHECK(normalize_name("Kim, Jinseok").initial() == "j kim");
}

TEST_CASE("name normalization is idempotent") {
  std::mt19937 rng(7);
  const char* samples[] = {"Mark E. J. Newman", "Gonçalves, M.",
                           "van der Berg, Jan", "LI, WEI", "O'Brien, Pat"};
  for (const auto* raw : samples) {
    const auto once = normalize_name(raw);
    const auto twice = normalize_name(once.full());
    CHECK(once == twice);
    CHECK(once.initial() == twice.initial());
  }
}

TEST_CASE("email helpers") {
  CHECK(normalize_email("  MEJN@Umich.EDU ") == "mejn@umich.edu");
  CHECK(email_local("mejn@umich.edu") == "mejn");
  CHECK(email_local("no-at-sign") == "no-at-sign");
  CHECK(alpha_only("m.e.j.n77") == "mejn");
  CHECK(alnum_only("m.e.j.n77") == "mejn77");
}

TEST_CASE("doi normalization strips resolver prefixes") {
  CHECK(normalize_doi("https://doi.org/10.1234/ABC") == "10.1234/abc");
  CHECK(normalize_doi("DOI:10.1/x") == "10.1/x");
  CHECK(normalize_doi(" 10.99/Y ") == "10.99/y");
}

TEST_CASE("split and join round trip") {
  const auto parts = split("a|b||c", '|');
  REQUIRE(parts.size() == 4);
  CHECK(parts[2].empty());
  CHECK(join(parts, "|") == "a|b||c");
}
