// Cycle augmentation: expands each small-product cycle into every connected,
// cycle-reachable subgraph under a product bound, turns subgraphs into
// candidate integers u (squarefree products plus their non-squarefree
// multiples), and screens candidates through the theorem battery.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bscan/criteria.hpp"
#include "bscan/cycles.hpp"
#include "bscan/graph.hpp"

namespace bscan {

// A vertex set containing a base cycle in which every member can be reached
// from some cycle vertex by forward edges without leaving the set.
struct AugmentedSubgraph {
  Cycle base_cycle;
  std::vector<u64> vertices;  // sorted, superset of the cycle's vertices
  BigInt product = 1;

  bool operator==(const AugmentedSubgraph& other) const = default;
};

// Every subgraph S with cycle(c) as a subset, prod(S) <= bound, and all of S
// forward-reachable from the cycle inside S, ascending by product. Growth
// picks the smallest eligible frontier prime and branches include/exclude,
// so no subgraph is produced twice. Returns nothing when the cycle itself
// is over the bound.
std::vector<AugmentedSubgraph> augment_cycle(const PrimeGraph& g, const Cycle& c,
                                             const BigInt& bound);

enum class CandidateStatus { admissible, excluded, inconclusive };

std::string_view status_name(CandidateStatus s);   // "Admissible", ...
CandidateStatus parse_status(std::string_view name);  // throws std::invalid_argument

// One candidate u with its screening ledger. n is always 4u^2. A candidate
// is admissible only when every applicable test has run and passed; a fresh
// ledger therefore starts out inconclusive.
struct CandidateU {
  BigInt u;
  Factorization factorization;
  unsigned omega = 0;  // Omega(u), with multiplicity
  BigInt n;
  std::vector<Verdict> verdicts;
  CandidateStatus status = CandidateStatus::inconclusive;

  // First excluding verdict in ledger order, or nullptr.
  const Verdict* excluding_verdict() const;

  bool operator==(const CandidateU& other) const = default;
};

// Fills u, omega, and n from the factorization; the ledger starts empty.
CandidateU make_candidate(Factorization fact);

// All u = prod p^e_p over the subgraph's primes with every e_p >= 1 and
// u <= bound: the squarefree product and its non-squarefree multiples. Only
// candidates passing test_field_descent are kept (that test is the flimsy
// link condition evaluated on the concrete u). Ascending by u; ledgers are
// left empty for the screen.
std::vector<CandidateU> candidates_from_subgraph(const AugmentedSubgraph& s,
                                                 const BigInt& bound);

struct ScreenOptions {
  CriteriaCaps caps;
  bool full_ledger = false;  // keep testing past the first exclusion
  unsigned workers = 1;
};

// The battery order for a mode: EKS (barker mode only), LargePrimeCor,
// FieldDescent, Turyn, LS5, LS1, and LS10 (chm mode only).
std::vector<Theorem> screen_battery(Mode mode);

// Runs the battery in its fixed order, recording every verdict computed and
// stopping at the first exclusion unless full_ledger is set. Candidates are
// independent, so workers > 1 splits them across threads with identical
// results.
std::vector<CandidateU> screen(std::vector<CandidateU> candidates, Mode mode,
                               const ScreenOptions& options = {});

// Sorts by u and drops duplicates (the same u arises from overlapping
// subgraphs). Duplicate entries must agree; mismatched ledgers for one u
// throw std::invalid_argument.
std::vector<CandidateU> merge_candidates(std::vector<CandidateU> candidates);

// "p^e*p^e*..." with primes ascending, and its inverse.
std::string format_factorization(const Factorization& f);
Factorization parse_factorization(std::string_view text);  // throws std::invalid_argument

// Candidates file (CSV): header "u,factorization,omega,status,excluded_by,
// witness", one row per candidate sorted by u ascending, witness values
// joined with ';'. Only the excluding verdict survives a round trip; pass
// rows are not recorded. Annotation lines ("# bscan ...") may precede the
// CSV header; the pipeline uses them to stamp its config hash.
void save_candidates(const std::vector<CandidateU>& candidates,
                     const std::filesystem::path& path,
                     const std::vector<std::string>& annotations = {});
std::vector<CandidateU> load_candidates(const std::filesystem::path& path);

}  // namespace bscan
