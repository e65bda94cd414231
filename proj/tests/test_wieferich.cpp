#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "bscan/wieferich.hpp"
#include "doctest.h"

using namespace bscan;
namespace fs = std::filesystem;

namespace {

bool trial_is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// fully independent: trial-division primes + direct double loop
std::vector<WieferichPair> oracle_pairs(const SearchTask& t) {
  std::vector<WieferichPair> out;
  for (u64 p = std::max<u64>(t.p_lo, 3); p <= t.p_hi; ++p) {
    if (!t.p_filter.matches(p) || !trial_is_prime(p)) continue;
    for (u64 q = std::max<u64>(t.q_lo, 3); q <= t.q_hi; ++q) {
      if (q == p || !t.q_filter.matches(q) || !trial_is_prime(q)) continue;
      const BigInt p2 = BigInt(p) * p;
      if (powmod(BigInt(q), BigInt(p - 1), p2) == 1) out.push_back({q, p});
    }
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("bscan_wtest_" + std::to_string(++counter));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("pair predicate spot checks") {
  CHECK(is_wieferich(5, 53471161));
  CHECK(is_wieferich(41, 138200401));
  CHECK(is_wieferich(53, 97));
  CHECK(is_wieferich(30109, 1128713));
  CHECK(is_wieferich(5, 188748146801));   // p^2 ~ 3.6e22, above 64 bits
  CHECK(is_wieferich(188748146801, 5));
  CHECK_FALSE(is_wieferich(3, 5));        // 3^4 = 81 = 6 mod 25
  CHECK(is_wieferich(3, 11));             // 3^10 = 59049 = 488*121 + 1
  CHECK_FALSE(is_wieferich(5, 53471159)); // neighbour of a genuine partner
}

TEST_CASE("pair predicate agrees with direct big-integer evaluation") {
  std::mt19937_64 rng(0x31f3);
  int done = 0;
  while (done < 400) {
    const u64 q = 3 + rng() % 100000;
    const u64 p = 3 + rng() % 100000;
    if (p == q || !trial_is_prime(p) || !trial_is_prime(q)) continue;
    ++done;
    const bool expect = powmod(BigInt(q), BigInt(p - 1), BigInt(p) * p) == 1;
    CAPTURE(q);
    CAPTURE(p);
    REQUIRE(is_wieferich(q, p) == expect);
  }
}

TEST_CASE("search matches the double-loop oracle") {
  SearchTask t;
  t.q_lo = 3;
  t.q_hi = 10000;
  t.p_lo = 3;
  t.p_hi = 10000;
  t.segment_size = 1000;
  const auto got = search_pairs(t);
  const auto expect = oracle_pairs(t);
  REQUIRE(got.size() == expect.size());
  CHECK(got == expect);
  // (3, 11) is the classic small pair
  CHECK(std::find(got.begin(), got.end(), WieferichPair{3, 11}) != got.end());
  CHECK(std::is_sorted(got.begin(), got.end(), pair_less));
}

TEST_CASE("search honors congruence filters") {
  SearchTask t;
  t.q_lo = 3;
  t.q_hi = 5000;
  t.p_lo = 3;
  t.p_hi = 5000;
  t.q_filter = {1, 4};
  t.p_filter = {1, 4};
  t.segment_size = 700;  // deliberately not dividing the range
  const auto got = search_pairs(t);
  CHECK(got == oracle_pairs(t));
  for (const auto& w : got) {
    CHECK(w.q % 4 == 1);
    CHECK(w.p % 4 == 1);
  }
}

TEST_CASE("empty ranges give empty results") {
  SearchTask t;
  t.q_lo = 100;
  t.q_hi = 3;
  t.p_lo = 3;
  t.p_hi = 1000;
  CHECK(search_pairs(t).empty());
  t.q_lo = 3;
  t.q_hi = 100;
  t.p_lo = 1000;
  t.p_hi = 3;
  CHECK(search_pairs(t).empty());
}

TEST_CASE("task hash distinguishes every parameter") {
  SearchTask base;
  base.q_lo = 3;
  base.q_hi = 100;
  base.p_lo = 3;
  base.p_hi = 1000;
  const std::string h = task_hash(base);
  CHECK(h.size() == 16);
  CHECK(task_hash(base) == h);

  auto differs = [&](SearchTask t) { return task_hash(t) != h; };
  SearchTask t = base;
  t.q_hi = 101;
  CHECK(differs(t));
  t = base;
  t.p_hi = 1001;
  CHECK(differs(t));
  t = base;
  t.q_filter = {1, 4};
  CHECK(differs(t));
  t = base;
  t.p_filter = {3, 4};
  CHECK(differs(t));
  t = base;
  t.segment_size = 12345;
  CHECK(differs(t));
}

TEST_CASE("file search equals in-memory search and resumes byte-identically") {
  TempDir tmp;
  SearchTask t;
  t.q_lo = 3;
  t.q_hi = 4000;
  t.p_lo = 3;
  t.p_hi = 6000;
  t.segment_size = 500;

  const fs::path full_pairs = tmp.path / "full.txt";
  const fs::path full_ck = tmp.path / "full.ck";
  REQUIRE(search_pairs_to_file(t, full_pairs, full_ck));
  const std::string full_bytes = slurp(full_pairs);

  // the file reproduces the in-memory result
  const auto mem = search_pairs(t);
  const auto loaded = load_pairs(full_pairs);
  CHECK(loaded == mem);

  // cancel after every segment, resuming each time: same final bytes
  const fs::path part_pairs = tmp.path / "part.txt";
  const fs::path part_ck = tmp.path / "part.ck";
  int rounds = 0;
  bool finished = false;
  while (!finished) {
    int budget = 1;
    finished = search_pairs_to_file(t, part_pairs, part_ck, 1,
                                    [&budget]() { return budget-- <= 0; });
    REQUIRE(++rounds < 100);
  }
  CHECK(rounds == 12);  // one cancelled call per segment; the last one finishes
  CHECK(slurp(part_pairs) == full_bytes);

  // re-running a finished task changes nothing
  REQUIRE(search_pairs_to_file(t, full_pairs, full_ck));
  CHECK(slurp(full_pairs) == full_bytes);
}

TEST_CASE("resume self-heals a segment that missed its checkpoint") {
  TempDir tmp;
  SearchTask t;
  t.q_lo = 3;
  t.q_hi = 2000;
  t.p_lo = 3;
  t.p_hi = 3000;
  t.segment_size = 1000;

  const fs::path pairs = tmp.path / "pairs.txt";
  const fs::path ck = tmp.path / "ck.txt";
  int budget = 1;
  CHECK_FALSE(search_pairs_to_file(t, pairs, ck, 1, [&budget]() { return budget-- <= 0; }));

  // simulate a crash that appended pairs but never advanced the checkpoint
  {
    std::ofstream os(pairs, std::ios::app);
    os << "3 1500\n";  // bogus pair inside the unfinished segment
  }
  REQUIRE(search_pairs_to_file(t, pairs, ck));

  const fs::path ref_pairs = tmp.path / "ref.txt";
  const fs::path ref_ck = tmp.path / "ref.ck";
  REQUIRE(search_pairs_to_file(t, ref_pairs, ref_ck));
  CHECK(slurp(pairs) == slurp(ref_pairs));
}

TEST_CASE("worker count does not change the output bytes") {
  TempDir tmp;
  SearchTask t;
  t.q_lo = 3;
  t.q_hi = 3000;
  t.p_lo = 3;
  t.p_hi = 9000;
  t.segment_size = 750;

  const fs::path one = tmp.path / "one.txt";
  const fs::path four = tmp.path / "four.txt";
  REQUIRE(search_pairs_to_file(t, one, tmp.path / "one.ck", 1));
  REQUIRE(search_pairs_to_file(t, four, tmp.path / "four.ck", 4));
  CHECK(slurp(one) == slurp(four));
}

TEST_CASE("checkpoint mismatch is refused") {
  TempDir tmp;
  SearchTask t;
  t.q_lo = 3;
  t.q_hi = 500;
  t.p_lo = 3;
  t.p_hi = 2000;
  t.segment_size = 500;

  const fs::path pairs = tmp.path / "pairs.txt";
  const fs::path ck = tmp.path / "ck.txt";
  int budget = 2;
  CHECK_FALSE(search_pairs_to_file(t, pairs, ck, 1, [&budget]() { return budget-- <= 0; }));

  SearchTask other = t;
  other.p_hi = 3000;
  CHECK_THROWS_AS(search_pairs_to_file(other, pairs, ck), CheckpointMismatchError);

  {
    std::ofstream os(ck, std::ios::trunc);
    os << "not a checkpoint\n";
  }
  CHECK_THROWS_AS(search_pairs_to_file(t, pairs, ck), std::runtime_error);
}

TEST_CASE("pairs file loader validates") {
  TempDir tmp;
  const fs::path good = tmp.path / "good.txt";
  {
    std::ofstream os(good);
    os << "3 11\n71 331\n5 20771\n";
  }
  const auto pairs = load_pairs(good);
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[1] == WieferichPair{71, 331});

  const fs::path unsorted = tmp.path / "unsorted.txt";
  {
    std::ofstream os(unsorted);
    os << "5 20771\n3 11\n";
  }
  CHECK_THROWS_AS(load_pairs(unsorted), std::runtime_error);

  const fs::path garbage = tmp.path / "garbage.txt";
  {
    std::ofstream os(garbage);
    os << "3 eleven\n";
  }
  CHECK_THROWS_AS(load_pairs(garbage), std::runtime_error);

  const fs::path empty = tmp.path / "empty.txt";
  std::ofstream(empty).close();
  CHECK(load_pairs(empty).empty());

  CHECK_THROWS_AS(load_pairs(tmp.path / "missing.txt"), std::runtime_error);
}

TEST_CASE("descending search agrees with a per-prime oracle") {
  const auto got = search_descending(138200401, 10000, {1, 4});
  std::vector<WieferichPair> expect;
  for (u64 p = 3; p < 10000; ++p) {
    if (p % 4 != 1 || !trial_is_prime(p)) continue;
    if (powmod(BigInt(138200401), BigInt(p - 1), BigInt(p) * p) == 1) {
      expect.push_back({138200401, p});
    }
  }
  CHECK(got.complete);
  CHECK(got.pairs == expect);

  const auto small = search_descending(71, 71);
  CHECK(small.complete);
  CHECK(std::find(small.pairs.begin(), small.pairs.end(), WieferichPair{71, 3}) !=
        small.pairs.end());

  CHECK(search_descending(71, 3).pairs.empty());
  CHECK(search_descending(3, 100).pairs.empty());  // p < min(q, bound) = 3: nothing
}

TEST_CASE("descending search budget truncates deterministically") {
  const auto full = search_descending(1128713, 1128713, {1, 4});
  CHECK(full.complete);

  const auto cut = search_descending(1128713, 1128713, {1, 4}, 100);
  CHECK_FALSE(cut.complete);
  // the truncated run is a prefix of the full run
  REQUIRE(cut.pairs.size() <= full.pairs.size());
  CHECK(std::equal(cut.pairs.begin(), cut.pairs.end(), full.pairs.begin()));

  const auto expanded = search_descending(1128713, 1128713, {1, 4}, 5000000);
  CHECK(expanded.complete);
  CHECK(expanded.pairs == full.pairs);
}
