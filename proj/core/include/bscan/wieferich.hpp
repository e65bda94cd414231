// Wieferich-pair machinery: the pair predicate q^(p-1) == 1 (mod p^2), a
// checkpointed segment-by-segment range search, and the descending search
// used when the prime graph acquires a new vertex.
#pragma once

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bscan/arith.hpp"

namespace bscan {

struct WieferichPair {
  u64 q = 0;
  u64 p = 0;
  friend bool operator==(const WieferichPair&, const WieferichPair&) = default;
};

// Pairs files and search output order by (p, q).
inline bool pair_less(const WieferichPair& a, const WieferichPair& b) {
  return a.p != b.p ? a.p < b.p : a.q < b.q;
}

// True iff q^(p-1) == 1 (mod p^2). q and p must be distinct odd primes; the
// fast tier handles p up to ~1.9e11, larger p fall back to big integers.
bool is_wieferich(u64 q, u64 p);

// A rectangular search: q over a fixed (filtered) prime list, p over sieved
// segments. Ranges are inclusive. A {0,1} filter accepts every prime.
struct SearchTask {
  u64 q_lo = 3;
  u64 q_hi = 0;
  u64 p_lo = 3;
  u64 p_hi = 0;
  Residue q_filter{0, 1};
  Residue p_filter{0, 1};
  u64 segment_size = default_segment_size;
};

// Stable hex digest of the task parameters; checkpoints carry it so a resume
// against a different task definition is refused.
std::string task_hash(const SearchTask& task);

// Every pair over the filtered ranges, sorted by (p, q).
std::vector<WieferichPair> search_pairs(const SearchTask& task);

class CheckpointMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File-backed resumable run of the same search. Each completed p-segment is
// appended to pairs_path ("q p" lines, (p,q)-ascending, no header) before the
// checkpoint file advances ("task_hash next_segment_start" on one line), so
// an interrupted run resumes to a byte-identical final file. An existing
// checkpoint must carry this task's hash (else CheckpointMismatchError).
// cancel, when given, is polled between segments; a cancelled run leaves the
// files consistent and returns false. Returns true when the range finished.
bool search_pairs_to_file(const SearchTask& task,
                          const std::filesystem::path& pairs_path,
                          const std::filesystem::path& checkpoint_path,
                          unsigned threads = 1,
                          const std::function<bool()>& cancel = nullptr);

// Parse a pairs file, validating the format and the (p,q) sort order.
std::vector<WieferichPair> load_pairs(const std::filesystem::path& pairs_path);

// Descending search below a new prime q: all (q, p) with p < min(q, p_bound)
// and p matching the filter. max_scanned bounds how many sieved primes are
// tested (0 = unlimited); `complete` reports whether the range was exhausted.
struct DescendingResult {
  std::vector<WieferichPair> pairs;
  bool complete = true;
};
DescendingResult search_descending(u64 q, u64 p_bound, Residue p_filter = {0, 1},
                                   u64 max_scanned = 0);

}  // namespace bscan
