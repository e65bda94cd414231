#include "bscan/cycles.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bscan {

namespace {

// adjacency over vertex indices with a kind mask per arc (bit 0 solid, bit 1 flimsy)
struct IndexedGraph {
  std::vector<u64> value;                // index -> prime
  std::vector<std::vector<int>> next;    // ascending, deduped
  std::map<std::pair<int, int>, unsigned> kind_mask;

  explicit IndexedGraph(const PrimeGraph& g) : value(g.vertices) {
    next.resize(value.size());
    for (const GraphEdge& e : g.edges) {
      const int u = index_of(e.from);
      const int v = index_of(e.to);
      unsigned& mask = kind_mask[{u, v}];
      if (mask == 0) next[(std::size_t)u].push_back(v);
      mask |= e.kind == EdgeKind::solid ? 1u : 2u;
    }
    for (auto& row : next) std::sort(row.begin(), row.end());
  }

  int index_of(u64 v) const {
    const auto it = std::lower_bound(value.begin(), value.end(), v);
    return (int)(it - value.begin());
  }
};

class Emitter {
 public:
  Emitter(const IndexedGraph& ig, u64 cap) : ig_(ig), cap_(cap) {}

  // expand one vertex circuit over the kind choices of each hop
  void emit(const std::vector<int>& circuit) {
    kinds_.assign(circuit.size(), EdgeKind::solid);
    expand(circuit, 0);
  }

  std::vector<Cycle> take() {
    std::sort(out_.begin(), out_.end(), cycle_less);
    return std::move(out_);
  }

 private:
  void expand(const std::vector<int>& circuit, std::size_t hop) {
    if (hop == circuit.size()) {
      if (out_.size() == cap_) {
        throw std::runtime_error("cycle budget exceeded: more than " + std::to_string(cap_) +
                                 " elementary cycles");
      }
      Cycle c;
      c.vertices.reserve(circuit.size());
      for (int i : circuit) c.vertices.push_back(ig_.value[(std::size_t)i]);
      c.kinds = kinds_;
      c.product = 1;
      for (u64 v : c.vertices) c.product *= v;
      out_.push_back(std::move(c));
      return;
    }
    const int from = circuit[hop];
    const int to = circuit[(hop + 1) % circuit.size()];
    const unsigned mask = ig_.kind_mask.at({from, to});
    if (mask & 1u) {
      kinds_[hop] = EdgeKind::solid;
      expand(circuit, hop + 1);
    }
    if (mask & 2u) {
      kinds_[hop] = EdgeKind::flimsy;
      expand(circuit, hop + 1);
    }
  }

  const IndexedGraph& ig_;
  u64 cap_;
  std::vector<EdgeKind> kinds_;
  std::vector<Cycle> out_;
};

// Tarjan SCC over the subgraph induced on indices >= floor
std::vector<int> scc_of(const IndexedGraph& ig, int floor) {
  const int n = (int)ig.value.size();
  std::vector<int> comp(n, -1), low(n), num(n, -1), stack;
  std::vector<char> on_stack(n, 0);
  int counter = 0, comps = 0;

  // iterative Tarjan to keep deep graphs off the call stack
  struct Frame {
    int v;
    std::size_t edge;
  };
  for (int root = floor; root < n; ++root) {
    if (num[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    num[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto& row = ig.next[(std::size_t)f.v];
      bool descended = false;
      while (f.edge < row.size()) {
        const int w = row[f.edge++];
        if (w < floor) continue;
        if (num[w] == -1) {
          num[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[f.v] = std::min(low[f.v], num[w]);
      }
      if (descended) continue;
      if (low[f.v] == num[f.v]) {
        while (true) {
          const int w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = comps;
          if (w == f.v) break;
        }
        ++comps;
      }
      const int v = f.v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
    }
  }
  return comp;
}

// Johnson's blocked circuit search rooted at s, restricted to s's SCC within
// the subgraph on indices >= s.
class JohnsonSearch {
 public:
  JohnsonSearch(const IndexedGraph& ig, Emitter& emitter) : ig_(ig), emitter_(emitter) {}

  void run() {
    const int n = (int)ig_.value.size();
    blocked_.assign((std::size_t)n, 0);
    b_lists_.assign((std::size_t)n, {});
    for (s_ = 0; s_ < n; ++s_) {
      const std::vector<int> comp = scc_of(ig_, s_);
      allowed_.assign((std::size_t)n, 0);
      bool nontrivial = false;
      for (int v = s_; v < n; ++v) {
        if (comp[v] == comp[s_]) {
          allowed_[(std::size_t)v] = 1;
          if (v != s_) nontrivial = true;
        }
      }
      if (!nontrivial) continue;  // no self-loops, so a lone vertex has no circuit
      for (int v = s_; v < n; ++v) {
        blocked_[(std::size_t)v] = 0;
        b_lists_[(std::size_t)v].clear();
      }
      circuit(s_);
    }
  }

 private:
  bool circuit(int v) {
    bool found = false;
    path_.push_back(v);
    blocked_[(std::size_t)v] = 1;
    for (int w : ig_.next[(std::size_t)v]) {
      if (w < s_ || !allowed_[(std::size_t)w]) continue;
      if (w == s_) {
        emitter_.emit(path_);
        found = true;
      } else if (!blocked_[(std::size_t)w]) {
        if (circuit(w)) found = true;
      }
    }
    if (found) {
      unblock(v);
    } else {
      for (int w : ig_.next[(std::size_t)v]) {
        if (w < s_ || !allowed_[(std::size_t)w]) continue;
        auto& lst = b_lists_[(std::size_t)w];
        if (std::find(lst.begin(), lst.end(), v) == lst.end()) lst.push_back(v);
      }
    }
    path_.pop_back();
    return found;
  }

  void unblock(int v) {
    blocked_[(std::size_t)v] = 0;
    std::vector<int> pending;
    pending.swap(b_lists_[(std::size_t)v]);
    for (int w : pending) {
      if (blocked_[(std::size_t)w]) unblock(w);
    }
  }

  const IndexedGraph& ig_;
  Emitter& emitter_;
  int s_ = 0;
  std::vector<char> blocked_, allowed_;
  std::vector<std::vector<int>> b_lists_;
  std::vector<int> path_;
};

void validate_cycle_line(const std::vector<u64>& vs, const IndexedGraph& ig, const PrimeGraph& g,
                         const std::string& where) {
  if (vs.size() < 2) throw std::runtime_error(where + ": a cycle needs at least two vertices");
  if (*std::min_element(vs.begin(), vs.end()) != vs.front()) {
    throw std::runtime_error(where + ": not in canonical rotation");
  }
  std::set<u64> seen;
  for (u64 v : vs) {
    if (!g.has_vertex(v)) {
      throw std::runtime_error(where + ": unknown vertex " + std::to_string(v));
    }
    if (!seen.insert(v).second) {
      throw std::runtime_error(where + ": repeated vertex " + std::to_string(v));
    }
  }
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const int u = ig.index_of(vs[i]);
    const int w = ig.index_of(vs[(i + 1) % vs.size()]);
    if (ig.kind_mask.find({u, w}) == ig.kind_mask.end()) {
      throw std::runtime_error(where + ": no edge " + std::to_string(vs[i]) + " -> " +
                               std::to_string(vs[(i + 1) % vs.size()]));
    }
  }
}

}  // namespace

bool cycle_less(const Cycle& a, const Cycle& b) {
  if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
  if (a.vertices != b.vertices) return a.vertices < b.vertices;
  return a.kinds < b.kinds;
}

std::vector<Cycle> enumerate_cycles(const PrimeGraph& g, u64 max_cycles) {
  const IndexedGraph ig(g);
  Emitter emitter(ig, max_cycles);
  JohnsonSearch(ig, emitter).run();
  return emitter.take();
}

std::vector<Cycle> enumerate_cycles_bounded(const PrimeGraph& g, const BigInt& product_bound,
                                            u64 max_cycles) {
  const IndexedGraph ig(g);
  Emitter emitter(ig, max_cycles);
  const int n = (int)ig.value.size();
  std::vector<char> on_path((std::size_t)n, 0);
  std::vector<int> path;

  // ordered DFS from each start s over vertices > s; the running product
  // only grows, so a branch past the bound is dead
  struct Dfs {
    const IndexedGraph& ig;
    Emitter& emitter;
    const BigInt& bound;
    std::vector<char>& on_path;
    std::vector<int>& path;
    int s = 0;

    void walk(int v, const BigInt& product) {
      path.push_back(v);
      on_path[(std::size_t)v] = 1;
      for (int w : ig.next[(std::size_t)v]) {
        if (w == s && path.size() >= 2) {
          emitter.emit(path);
        } else if (w > s && !on_path[(std::size_t)w]) {
          const BigInt extended = product * ig.value[(std::size_t)w];
          if (extended <= bound) walk(w, extended);
        }
      }
      path.pop_back();
      on_path[(std::size_t)v] = 0;
    }
  } dfs{ig, emitter, product_bound, on_path, path};

  for (int s = 0; s < n; ++s) {
    const BigInt start = ig.value[(std::size_t)s];
    if (start > product_bound) break;  // values ascend
    dfs.s = s;
    dfs.walk(s, start);
  }
  return emitter.take();
}

std::vector<Cycle> small_product_cycles(const std::vector<Cycle>& cycles, const BigInt& bound) {
  std::vector<Cycle> out;
  for (const Cycle& c : cycles) {
    if (c.product <= bound) out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const Cycle& a, const Cycle& b) {
    if (a.product != b.product) return a.product < b.product;
    return cycle_less(a, b);
  });
  return out;
}

void save_cycles(const std::vector<Cycle>& cycles, const std::filesystem::path& path,
                 const std::vector<std::string>& annotations) {
  std::set<std::pair<std::size_t, std::vector<u64>>> lines;
  for (const Cycle& c : cycles) lines.insert({c.vertices.size(), c.vertices});

  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    for (const std::string& note : annotations) os << "# bscan " << note << '\n';
    for (const auto& [len, vs] : lines) {
      for (std::size_t i = 0; i < vs.size(); ++i) os << (i ? " " : "") << vs[i];
      os << '\n';
    }
    os.flush();
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<Cycle> load_cycles(const std::filesystem::path& path, const PrimeGraph& g) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open cycles file " + path.string());
  const IndexedGraph ig(g);

  std::vector<Cycle> out;
  std::pair<std::size_t, std::vector<u64>> previous{0, {}};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string where = "cycles file " + path.string() + ": line " + std::to_string(line_no);
    if (line.rfind("# bscan", 0) == 0) {
      if (!out.empty()) throw std::runtime_error(where + ": unexpected comment");
      continue;
    }
    std::istringstream ls(line);
    std::vector<u64> vs;
    u64 v = 0;
    while (ls >> v) vs.push_back(v);
    if (!ls.eof()) throw std::runtime_error(where + ": bad token");
    validate_cycle_line(vs, ig, g, where);
    const std::pair<std::size_t, std::vector<u64>> key{vs.size(), vs};
    if (!out.empty() && !(previous < key)) {
      throw std::runtime_error(where + ": out of order or duplicate");
    }
    previous = key;

    Cycle c;
    c.vertices = vs;
    c.product = 1;
    for (u64 p : vs) c.product *= p;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const int a = ig.index_of(vs[i]);
      const int b = ig.index_of(vs[(i + 1) % vs.size()]);
      const unsigned mask = ig.kind_mask.at({a, b});
      c.kinds.push_back((mask & 1u) != 0 ? EdgeKind::solid : EdgeKind::flimsy);
    }
    out.push_back(std::move(c));
  }
  if (is.bad()) throw std::runtime_error("read failed for " + path.string());
  return out;
}

}  // namespace bscan
