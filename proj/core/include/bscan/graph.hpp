// The directed prime graph: solid edges are Wieferich pairs, flimsy edges
// record p | (r-1). Built to closure from seed pairs by factoring v-1 and
// running descending pair searches from every new vertex.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bscan/arith.hpp"
#include "bscan/criteria.hpp"
#include "bscan/wieferich.hpp"

namespace bscan {

// Congruence class a vertex prime must satisfy: 1 mod 4 for Barker graphs,
// odd for circulant Hadamard graphs.
Residue mode_class(Mode mode);

enum class EdgeKind { solid, flimsy };

struct GraphEdge {
  u64 from = 0;
  u64 to = 0;
  EdgeKind kind = EdgeKind::solid;
  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

// File and in-memory order: all solid edges, then all flimsy, each block by
// (from, to). A solid and a flimsy edge may join the same pair of vertices.
inline bool edge_less(const GraphEdge& a, const GraphEdge& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.from != b.from) return a.from < b.from;
  return a.to < b.to;
}

struct PrimeGraph {
  Mode mode = Mode::barker;
  u64 prime_bound = 0;  // P: new vertices admitted only up to this bound
  bool complete = true; // false once any descending search was truncated
  std::vector<u64> vertices;     // ascending; always the union of edge endpoints
  std::vector<GraphEdge> edges;  // sorted by edge_less

  bool has_vertex(u64 v) const;
  // Outgoing edges of v, both kinds, in edge_less order.
  std::vector<GraphEdge> out_edges(u64 v) const;
  std::size_t solid_count() const;
  std::size_t flimsy_count() const;
  friend bool operator==(const PrimeGraph&, const PrimeGraph&) = default;
};

struct ClosureOptions {
  // Class primes tested per descending search before giving up (0 = no cap).
  // A truncated search clears graph.complete but is not an error.
  u64 descending_budget = 200000;
};

// Grow the closure of the seed pairs: every new vertex v contributes flimsy
// edges to the class primes dividing v-1 (up to prime_bound) and solid edges
// from search_descending(v, min(v, prime_bound)). Seeds must be distinct odd
// primes in the mode's class and genuine Wieferich pairs; seed vertices above
// prime_bound are admitted with a warning. Deterministic: the worklist is
// processed smallest vertex first, and the result is independent of seed
// order.
PrimeGraph build_closure(const std::vector<WieferichPair>& seeds, Mode mode, u64 prime_bound,
                         const ClosureOptions& options = {},
                         std::vector<std::string>* warnings = nullptr);

// Vertices exceeding the graph's prime bound (published seed pairs may carry
// one; they are kept but worth flagging).
std::vector<u64> over_bound_vertices(const PrimeGraph& g);

// "65 vertices, 77 solid edges, 58 flimsy edges"
std::string graph_stats_line(const PrimeGraph& g);

// Text format, written atomically:
//   # mode=barker P=125992104989 complete=0
//   # vertices=65 solid=77 flimsy=58
//   S 5 53471161
//   ...
//   F 188748146801 1974353
// Annotation lines ("# bscan ...") may precede the header; the pipeline uses
// them to stamp its config hash.
void save_graph(const PrimeGraph& g, const std::filesystem::path& path,
                const std::vector<std::string>& annotations = {});

// Parse and re-validate everything: header fields, edge ordering, endpoint
// primality and congruence class, the pair predicate behind every solid edge,
// divisibility behind every flimsy edge, no self-loops, and the stats line
// when present. Format problems throw std::runtime_error naming the line;
// over-bound vertices only warn.
PrimeGraph load_fixture(const std::filesystem::path& path,
                        std::vector<std::string>* warnings = nullptr);

}  // namespace bscan
