#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bscan/barker.hpp"
#include "doctest.h"

using namespace bscan;

namespace {

BinarySequence seq(const std::string& text) { return parse_sequence(text); }

BinarySequence random_sequence(std::mt19937_64& rng, std::size_t n) {
  BinarySequence s;
  s.terms.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    s.terms.push_back(rng() & 1 ? -1 : 1);
  return s;
}

// the full count of Barker sequences per length, before orbit reduction
constexpr std::array<std::size_t, 17> full_counts{
    0, 2, 4, 4, 8, 4, 0, 4, 0, 0, 0, 4, 0, 4, 0, 0, 0};

const std::map<unsigned, std::string>& known_representatives() {
  static const std::map<unsigned, std::string> reps{
      {1, "+"},
      {2, "++"},
      {3, "++-"},
      {4, "+++-"},
      {5, "+++-+"},
      {7, "+++--+-"},
      {11, "+++---+--+-"},
      {13, "+++++--++-+-+"},
  };
  return reps;
}

}  // namespace

TEST_CASE("autocorrelation profile of the length 7 sequence") {
  auto profile = autocorrelations(seq("+++--+-"));
  CHECK(profile.aperiodic == std::vector<i64>{7, 0, -1, 0, -1, 0, -1});
  CHECK(profile.periodic == std::vector<i64>{7, -1, -1, -1, -1, -1, -1});
}

TEST_CASE("autocorrelation profiles of tiny sequences") {
  auto one = autocorrelations(seq("+"));
  CHECK(one.aperiodic == std::vector<i64>{1});
  CHECK(one.periodic == std::vector<i64>{1});

  auto two = autocorrelations(seq("++"));
  CHECK(two.aperiodic == std::vector<i64>{2, 1});
  CHECK(two.periodic == std::vector<i64>{2, 2});
}

TEST_CASE("autocorrelations reject malformed sequences") {
  CHECK_THROWS_AS(autocorrelations(BinarySequence{}), std::invalid_argument);
  CHECK_THROWS_AS(autocorrelations(BinarySequence{{1, 0, 1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(autocorrelations(BinarySequence{{1, 2}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(is_barker(BinarySequence{}), std::invalid_argument);
  CHECK_THROWS_AS(symmetry_orbit(BinarySequence{{3}}), std::invalid_argument);
}

TEST_CASE("periodic equals folded aperiodic on random sequences") {
  std::mt19937_64 rng(0x9e3779b9);
  for (int trial = 0; trial < 10'000; ++trial) {
    std::size_t n = 1 + rng() % 64;
    auto profile = autocorrelations(random_sequence(rng, n));
    REQUIRE(profile.aperiodic.size() == n);
    REQUIRE(profile.periodic.size() == n);
    CHECK(profile.aperiodic[0] == static_cast<i64>(n));
    CHECK(profile.periodic[0] == static_cast<i64>(n));
    bool folds = true;
    for (std::size_t k = 1; k < n; ++k)
      if (profile.periodic[k] !=
          profile.aperiodic[k] + profile.aperiodic[n - k])
        folds = false;
    CHECK(folds);
  }
}

TEST_CASE("is_barker examples") {
  CHECK(is_barker(seq("+++--+-")));
  CHECK_FALSE(is_barker(seq("++++++")));
  CHECK(is_barker(seq("+")));
  CHECK(is_barker(seq("++")));
  CHECK(is_barker(seq("+-")));
}

TEST_CASE("orbit of a single term") {
  auto orbit = symmetry_orbit(seq("+"));
  REQUIRE(orbit.size() == 2);
  CHECK(to_string(orbit[0]) == "+");
  CHECK(to_string(orbit[1]) == "-");
  CHECK(orbit_representative(seq("-")) == seq("+"));
}

TEST_CASE("orbit structure on random sequences") {
  std::mt19937_64 rng(0x0b17a9);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 12;
    auto s = random_sequence(rng, n);
    auto orbit = symmetry_orbit(s);

    CHECK(16 % orbit.size() == 0);
    CHECK(std::is_sorted(orbit.begin(), orbit.end(), sequence_less));
    CHECK(std::adjacent_find(orbit.begin(), orbit.end()) == orbit.end());
    CHECK(std::find(orbit.begin(), orbit.end(), s) != orbit.end());

    // the generators stay inside the orbit, including both phases of the
    // alternating negation
    BinarySequence rev{std::vector<int>(s.terms.rbegin(), s.terms.rend())};
    BinarySequence neg = s;
    for (int& t : neg.terms) t = -t;
    BinarySequence alt_odd = s;
    for (std::size_t i = 1; i < n; i += 2) alt_odd.terms[i] = -alt_odd.terms[i];
    BinarySequence alt_even = s;
    for (std::size_t i = 0; i < n; i += 2)
      alt_even.terms[i] = -alt_even.terms[i];
    for (const auto& image : {rev, neg, alt_odd, alt_even})
      CHECK(std::find(orbit.begin(), orbit.end(), image) != orbit.end());

    // every member generates the same orbit and the same representative
    auto rep = orbit_representative(s);
    CHECK(rep == orbit.front());
    for (const auto& member : orbit) {
      CHECK(symmetry_orbit(member) == orbit);
      CHECK(orbit_representative(member) == rep);
    }
  }
}

TEST_CASE("orbit of a barker sequence contains only barker sequences") {
  for (const auto& [n, rep] : known_representatives()) {
    auto orbit = symmetry_orbit(seq(rep));
    CHECK(orbit.size() == full_counts[n]);
    for (const auto& member : orbit) CHECK(is_barker(member));
  }
}

TEST_CASE("search counts and representatives for all lengths to sixteen") {
  for (unsigned n = 1; n <= 16; ++n) {
    CAPTURE(n);
    auto result = exhaustive_search(n);
    CHECK(result.sequences.size() == full_counts[n]);
    CHECK(std::is_sorted(result.sequences.begin(), result.sequences.end(),
                         sequence_less));

    auto rep = known_representatives().find(n);
    if (rep == known_representatives().end()) {
      CHECK(result.sequences.empty());
      CHECK(result.representatives.empty());
    } else {
      REQUIRE(result.representatives.size() == 1);
      CHECK(to_string(result.representatives[0]) == rep->second);
      for (const auto& s : result.sequences) {
        CHECK(s.length() == n);
        CHECK(is_barker(s));
        CHECK(orbit_representative(s) == result.representatives[0]);
      }
      // representatives are themselves found sequences
      CHECK(std::find(result.sequences.begin(), result.sequences.end(),
                      result.representatives[0]) != result.sequences.end());
    }
  }
}

TEST_CASE("pruned search agrees with the raw sweep") {
  for (unsigned n = 1; n <= 16; ++n) {
    CAPTURE(n);
    CHECK(exhaustive_search(n) == exhaustive_search_raw(n));
  }
}

TEST_CASE("gamma is constant with the residue-determined value") {
  for (unsigned n = 3; n <= 16; ++n) {
    i64 expected = n % 2 == 0 ? 0 : (n % 4 == 1 ? 1 : -1);
    for (const auto& s : exhaustive_search(n).sequences) {
      auto profile = autocorrelations(s);
      for (unsigned k = 1; k < n; ++k) CHECK(profile.periodic[k] == expected);
    }
  }
}

TEST_CASE("search rejects out-of-range lengths") {
  CHECK_THROWS_AS(exhaustive_search(0), std::invalid_argument);
  CHECK_THROWS_AS(exhaustive_search(max_search_length + 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(exhaustive_search_raw(0), std::invalid_argument);
  CHECK_THROWS_AS(exhaustive_search_raw(17), std::invalid_argument);
}

TEST_CASE("worker split leaves the result unchanged") {
  CHECK(exhaustive_search(13, 4) == exhaustive_search(13, 1));
  CHECK(exhaustive_search(11, 7) == exhaustive_search(11, 1));
  CHECK(exhaustive_search(16, 3) == exhaustive_search(16, 1));
  CHECK(exhaustive_search(5, 4) == exhaustive_search(5, 1));
}

TEST_CASE("longer even lengths stay empty") {
  for (unsigned n = 17; n <= max_search_length; ++n) {
    CAPTURE(n);
    auto result = exhaustive_search(n, 2);
    CHECK(result.sequences.empty());
    CHECK(result.representatives.empty());
  }
}

TEST_CASE("sequence ordering puts plus before minus") {
  CHECK(sequence_less(seq("+"), seq("-")));
  CHECK_FALSE(sequence_less(seq("-"), seq("+")));
  CHECK(sequence_less(seq("++"), seq("+-")));
  CHECK(sequence_less(seq("+"), seq("++")));  // prefix first
  CHECK_FALSE(sequence_less(seq("+"), seq("+")));

  std::vector<BinarySequence> all{seq("--"), seq("+-"), seq("++"), seq("-+")};
  std::sort(all.begin(), all.end(), sequence_less);
  CHECK(to_string(all[0]) == "++");
  CHECK(to_string(all[1]) == "+-");
  CHECK(to_string(all[2]) == "-+");
  CHECK(to_string(all[3]) == "--");
}

TEST_CASE("string round trips") {
  std::mt19937_64 rng(0x7ab3d);
  for (int trial = 0; trial < 100; ++trial) {
    auto s = random_sequence(rng, 1 + rng() % 40);
    CHECK(parse_sequence(to_string(s)) == s);
  }
  CHECK(to_string(seq("+++---+--+-")) == "+++---+--+-");
  CHECK_THROWS_AS(parse_sequence(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_sequence("+0-"), std::invalid_argument);
  CHECK_THROWS_AS(parse_sequence("x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_sequence("+ -"), std::invalid_argument);
  CHECK_THROWS_AS(to_string(BinarySequence{}), std::invalid_argument);
}
