// Sequence-level machinery: aperiodic and periodic autocorrelations, the
// Barker property, the reverse/negate/alternate-negate symmetry orbit, and
// exhaustive search over short lengths.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bscan/arith.hpp"

namespace bscan {

// Entries are +1 or -1; operations reject anything else.
struct BinarySequence {
  std::vector<int> terms;

  std::size_t length() const { return terms.size(); }
  bool operator==(const BinarySequence& other) const = default;
};

// Lexicographic with +1 ordered before -1, prefixes first.
bool sequence_less(const BinarySequence& a, const BinarySequence& b);

struct AutocorrelationProfile {
  std::vector<i64> aperiodic;  // c_0 .. c_{n-1}
  std::vector<i64> periodic;   // gamma_0 .. gamma_{n-1}

  bool operator==(const AutocorrelationProfile& other) const = default;
};

// Both profiles by direct summation; the periodic sum wraps indices mod n.
AutocorrelationProfile autocorrelations(const BinarySequence& s);

// |c_k| <= 1 for every k >= 1.
bool is_barker(const BinarySequence& s);

// Closure of {s} under reversal, negation, and negation of every other
// term, sorted by sequence_less. The group has order 16, so the orbit size
// divides 16.
std::vector<BinarySequence> symmetry_orbit(const BinarySequence& s);

// The sequence_less-smallest member of the orbit.
BinarySequence orbit_representative(const BinarySequence& s);

struct SearchResult {
  std::vector<BinarySequence> sequences;        // every Barker sequence, sorted
  std::vector<BinarySequence> representatives;  // one per orbit, sorted

  bool operator==(const SearchResult& other) const = default;
};

inline constexpr unsigned max_search_length = 28;

// Fills the sequence from both ends inward so that lag n-j completes once j
// positions are fixed on each side, and prunes any branch whose completed
// lags already break |c_k| <= 1. Finds the full set (no symmetry reduction).
// workers > 1 splits the top of the search tree across threads with
// identical output. Throws std::invalid_argument for n = 0 or n > 28.
SearchResult exhaustive_search(unsigned n, unsigned workers = 1);

// Plain 2^n sweep, the oracle for the pruned search. n <= 16.
SearchResult exhaustive_search_raw(unsigned n);

std::string to_string(const BinarySequence& s);        // '+' / '-'
BinarySequence parse_sequence(std::string_view text);  // throws std::invalid_argument

}  // namespace bscan
