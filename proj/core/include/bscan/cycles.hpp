// Elementary circuit enumeration over the prime graph and selection of
// cycles whose vertex product stays below a bound.
#pragma once

#include <filesystem>
#include <vector>

#include "bscan/graph.hpp"

namespace bscan {

inline constexpr u64 default_cycle_cap = 1'000'000;

struct Cycle {
  std::vector<u64> vertices;    // canonical rotation: smallest vertex first
  std::vector<EdgeKind> kinds;  // kinds[i] labels the hop vertices[i] -> vertices[(i+1) % n]
  BigInt product = 1;           // product of the vertices
  friend bool operator==(const Cycle&, const Cycle&) = default;
};

// (length, vertex list, hop kinds); a solid and a flimsy hop over the same
// vertices are distinct cycles, solid ordering first
bool cycle_less(const Cycle& a, const Cycle& b);

// Every elementary circuit exactly once, sorted by cycle_less. Johnson-style
// blocked search with strongly-connected-component preprocessing; parallel
// solid/flimsy hops expand into separate cycles. More than max_cycles results
// throws std::runtime_error("cycle budget exceeded ...").
std::vector<Cycle> enumerate_cycles(const PrimeGraph& g, u64 max_cycles = default_cycle_cap);

// Exactly the elementary circuits with product <= product_bound, same order
// and cap behavior. A plain ordered depth-first search pruned on the running
// product (Johnson's blocking is unsound under that pruning), so it stays
// cheap on graphs whose full circuit census would blow the cap.
std::vector<Cycle> enumerate_cycles_bounded(const PrimeGraph& g, const BigInt& product_bound,
                                            u64 max_cycles = default_cycle_cap);

// Subset with product <= bound, ascending by product (ties by cycle_less).
std::vector<Cycle> small_product_cycles(const std::vector<Cycle>& cycles, const BigInt& bound);

// One cycle per line, vertices space-separated in canonical order, sorted by
// (length, lexicographic). Hop kinds are not stored: kind-variant parallel
// cycles collapse to one line. Annotation lines ("# bscan ...") may precede
// the data; the pipeline uses them to stamp its config hash.
void save_cycles(const std::vector<Cycle>& cycles, const std::filesystem::path& path,
                 const std::vector<std::string>& annotations = {});

// Parse and validate against the graph: known vertices, an edge behind every
// hop, no repeats, canonical rotation, strict file order. Hops that carry
// both kinds reload as solid; products are recomputed.
std::vector<Cycle> load_cycles(const std::filesystem::path& path, const PrimeGraph& g);

}  // namespace bscan
