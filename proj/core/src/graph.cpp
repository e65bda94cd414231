#include "bscan/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bscan {

namespace {

void warn(std::vector<std::string>* sink, std::string message) {
  if (sink != nullptr) sink->push_back(std::move(message));
}

void check_vertex_prime(u64 v, Mode mode, const char* role) {
  const Residue cls = mode_class(mode);
  if (v < 3 || !is_prime(v)) {
    throw std::invalid_argument(std::string(role) + " " + std::to_string(v) +
                                " is not an odd prime");
  }
  if (!cls.matches(v)) {
    throw std::invalid_argument(std::string(role) + " " + std::to_string(v) + " is not " +
                                std::to_string(cls.remainder) + " mod " +
                                std::to_string(cls.modulus));
  }
}

std::string render_header(const PrimeGraph& g) {
  std::ostringstream os;
  os << "# mode=" << mode_name(g.mode) << " P=" << g.prime_bound
     << " complete=" << (g.complete ? 1 : 0);
  return os.str();
}

std::string render_stats(const PrimeGraph& g) {
  std::ostringstream os;
  os << "# vertices=" << g.vertices.size() << " solid=" << g.solid_count()
     << " flimsy=" << g.flimsy_count();
  return os.str();
}

// "key=value" -> value, or throw.
std::string_view field(std::string_view token, std::string_view key, const char* where) {
  if (token.substr(0, key.size()) != key || token.size() == key.size() ||
      token[key.size()] != '=') {
    throw std::runtime_error(std::string("graph file ") + where + ": expected " +
                             std::string(key) + "=...");
  }
  return token.substr(key.size() + 1);
}

u64 parse_u64(std::string_view s, const char* where) {
  if (s.empty() || s.size() > 20 || s.find_first_not_of("0123456789") != std::string_view::npos) {
    throw std::runtime_error(std::string("graph file ") + where + ": bad integer '" +
                             std::string(s) + "'");
  }
  u64 v = 0;
  for (char c : s) {
    if (v > (~u64{0} - (u64)(c - '0')) / 10) {
      throw std::runtime_error(std::string("graph file ") + where + ": integer overflow");
    }
    v = v * 10 + (u64)(c - '0');
  }
  return v;
}

}  // namespace

Residue mode_class(Mode mode) {
  return mode == Mode::barker ? Residue{1, 4} : Residue{1, 2};
}

bool PrimeGraph::has_vertex(u64 v) const {
  return std::binary_search(vertices.begin(), vertices.end(), v);
}

std::vector<GraphEdge> PrimeGraph::out_edges(u64 v) const {
  std::vector<GraphEdge> out;
  for (EdgeKind kind : {EdgeKind::solid, EdgeKind::flimsy}) {
    const GraphEdge lo{v, 0, kind};
    auto it = std::lower_bound(edges.begin(), edges.end(), lo, edge_less);
    for (; it != edges.end() && it->kind == kind && it->from == v; ++it) out.push_back(*it);
  }
  return out;
}

std::size_t PrimeGraph::solid_count() const {
  return (std::size_t)std::count_if(edges.begin(), edges.end(),
                                    [](const GraphEdge& e) { return e.kind == EdgeKind::solid; });
}

std::size_t PrimeGraph::flimsy_count() const { return edges.size() - solid_count(); }

PrimeGraph build_closure(const std::vector<WieferichPair>& seeds, Mode mode, u64 prime_bound,
                         const ClosureOptions& options, std::vector<std::string>* warnings) {
  const Residue cls = mode_class(mode);
  std::set<u64> vertices;
  std::set<u64> pending;
  std::set<std::pair<u64, u64>> solid;
  std::set<std::pair<u64, u64>> flimsy;

  const auto admit = [&](u64 v) {
    if (vertices.insert(v).second) pending.insert(v);
  };

  for (const WieferichPair& seed : seeds) {
    check_vertex_prime(seed.q, mode, "seed prime");
    check_vertex_prime(seed.p, mode, "seed prime");
    if (seed.q == seed.p) {
      throw std::invalid_argument("seed pair (" + std::to_string(seed.q) + ", " +
                                  std::to_string(seed.p) + ") is a self-loop");
    }
    if (!is_wieferich(seed.q, seed.p)) {
      throw std::invalid_argument("seed pair (" + std::to_string(seed.q) + ", " +
                                  std::to_string(seed.p) + ") fails the pair predicate");
    }
    solid.insert({seed.q, seed.p});
    admit(seed.q);
    admit(seed.p);
  }
  for (u64 v : vertices) {
    if (v > prime_bound) {
      warn(warnings, "seed vertex " + std::to_string(v) + " exceeds bound P=" +
                         std::to_string(prime_bound) + "; kept");
    }
  }

  bool complete = true;
  while (!pending.empty()) {
    const u64 v = *pending.begin();
    pending.erase(pending.begin());

    const Factorization fac = factorize(v - 1);
    for (std::size_t i = 0; i < fac.factors.size(); ++i) {
      const u64 p = fac.prime64(i);
      if (p >= 3 && p <= prime_bound && cls.matches(p)) {
        flimsy.insert({v, p});
        admit(p);
      }
    }

    const u64 bound = std::min<u64>(v, prime_bound);
    if (bound <= 3) continue;  // no class prime below it
    const DescendingResult found =
        search_descending(v, bound, cls, options.descending_budget);
    if (!found.complete) complete = false;
    for (const WieferichPair& w : found.pairs) {
      solid.insert({w.q, w.p});
      admit(w.p);
    }
  }

  PrimeGraph g;
  g.mode = mode;
  g.prime_bound = prime_bound;
  g.complete = complete;
  g.vertices.assign(vertices.begin(), vertices.end());
  g.edges.reserve(solid.size() + flimsy.size());
  for (const auto& [from, to] : solid) g.edges.push_back({from, to, EdgeKind::solid});
  for (const auto& [from, to] : flimsy) g.edges.push_back({from, to, EdgeKind::flimsy});
  return g;
}

std::vector<u64> over_bound_vertices(const PrimeGraph& g) {
  std::vector<u64> out;
  for (u64 v : g.vertices) {
    if (v > g.prime_bound) out.push_back(v);
  }
  return out;
}

std::string graph_stats_line(const PrimeGraph& g) {
  std::ostringstream os;
  os << g.vertices.size() << " vertices, " << g.solid_count() << " solid edges, "
     << g.flimsy_count() << " flimsy edges";
  return os.str();
}

void save_graph(const PrimeGraph& g, const std::filesystem::path& path,
                const std::vector<std::string>& annotations) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    for (const std::string& note : annotations) os << "# bscan " << note << '\n';
    os << render_header(g) << '\n' << render_stats(g) << '\n';
    for (const GraphEdge& e : g.edges) {
      os << (e.kind == EdgeKind::solid ? 'S' : 'F') << ' ' << e.from << ' ' << e.to << '\n';
    }
    os.flush();
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

PrimeGraph load_fixture(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open graph file " + path.string());

  std::string line;
  std::size_t header_no = 0;
  do {  // "# bscan ..." annotation lines may precede the header
    if (!std::getline(is, line)) {
      throw std::runtime_error("graph file " + path.string() + ": empty");
    }
    ++header_no;
  } while (line.rfind("# bscan", 0) == 0);
  const std::string at_header = "line " + std::to_string(header_no);
  PrimeGraph g;
  {
    std::istringstream hs(line);
    std::string hash, mode_tok, p_tok, complete_tok, extra;
    hs >> hash >> mode_tok >> p_tok >> complete_tok;
    if (hash != "#" || !hs || (hs >> extra)) {
      throw std::runtime_error("graph file " + path.string() + ": " + at_header +
                               ": bad header '" + line + "'");
    }
    g.mode = parse_mode(std::string(field(mode_tok, "mode", at_header.c_str())));
    g.prime_bound = parse_u64(field(p_tok, "P", at_header.c_str()), at_header.c_str());
    const u64 c = parse_u64(field(complete_tok, "complete", at_header.c_str()), at_header.c_str());
    if (c > 1) throw std::runtime_error("graph file " + path.string() + ": " + at_header +
                                        ": complete=" + std::to_string(c));
    g.complete = c == 1;
  }

  const Residue cls = mode_class(g.mode);
  bool have_stats = false;
  u64 stat_vertices = 0, stat_solid = 0, stat_flimsy = 0;
  std::set<u64> vertex_set;
  std::size_t line_no = header_no;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string where = path.string() + ": line " + std::to_string(line_no);
    if (line.empty()) throw std::runtime_error("graph file " + where + ": blank line");
    if (line[0] == '#') {
      if (have_stats || !g.edges.empty()) {
        throw std::runtime_error("graph file " + where + ": unexpected comment");
      }
      std::istringstream ss(line);
      std::string hash, v_tok, s_tok, f_tok, extra;
      ss >> hash >> v_tok >> s_tok >> f_tok;
      if (!ss || (ss >> extra)) throw std::runtime_error("graph file " + where + ": bad stats");
      stat_vertices = parse_u64(field(v_tok, "vertices", where.c_str()), where.c_str());
      stat_solid = parse_u64(field(s_tok, "solid", where.c_str()), where.c_str());
      stat_flimsy = parse_u64(field(f_tok, "flimsy", where.c_str()), where.c_str());
      have_stats = true;
      continue;
    }

    std::istringstream ls(line);
    std::string kind_tok, from_tok, to_tok, extra;
    ls >> kind_tok >> from_tok >> to_tok;
    if (!ls || (ls >> extra)) {
      throw std::runtime_error("graph file " + where + ": expected 'S|F from to'");
    }
    GraphEdge e;
    if (kind_tok == "S") {
      e.kind = EdgeKind::solid;
    } else if (kind_tok == "F") {
      e.kind = EdgeKind::flimsy;
    } else {
      throw std::runtime_error("graph file " + where + ": bad edge kind '" + kind_tok + "'");
    }
    e.from = parse_u64(from_tok, where.c_str());
    e.to = parse_u64(to_tok, where.c_str());

    const std::string name = kind_tok + " " + from_tok + " " + to_tok;
    if (e.from == e.to) throw std::runtime_error("graph file " + where + ": self-loop " + name);
    for (u64 v : {e.from, e.to}) {
      if (v < 3 || !is_prime(v)) {
        throw std::runtime_error("graph file " + where + ": endpoint " + std::to_string(v) +
                                 " of " + name + " is not an odd prime");
      }
      if (!cls.matches(v)) {
        throw std::runtime_error("graph file " + where + ": endpoint " + std::to_string(v) +
                                 " of " + name + " is not " + std::to_string(cls.remainder) +
                                 " mod " + std::to_string(cls.modulus));
      }
    }
    if (e.kind == EdgeKind::solid) {
      if (!is_wieferich(e.from, e.to)) {
        throw std::runtime_error("graph file " + where + ": solid edge " + name +
                                 " fails the pair predicate");
      }
    } else if ((e.from - 1) % e.to != 0) {
      throw std::runtime_error("graph file " + where + ": flimsy edge " + name +
                               ": to does not divide from-1");
    }
    if (!g.edges.empty() && !edge_less(g.edges.back(), e)) {
      throw std::runtime_error("graph file " + where + ": edge " + name +
                               " out of order or duplicate");
    }
    g.edges.push_back(e);
    vertex_set.insert(e.from);
    vertex_set.insert(e.to);
  }
  if (is.bad()) throw std::runtime_error("read failed for " + path.string());

  g.vertices.assign(vertex_set.begin(), vertex_set.end());
  if (have_stats) {
    if (stat_vertices != g.vertices.size() || stat_solid != g.solid_count() ||
        stat_flimsy != g.flimsy_count()) {
      throw std::runtime_error("graph file " + path.string() + ": stats line disagrees (" +
                               render_stats(g).substr(2) + " actual)");
    }
  }
  for (u64 v : over_bound_vertices(g)) {
    warn(warnings, "vertex " + std::to_string(v) + " exceeds bound P=" +
                       std::to_string(g.prime_bound) + "; kept");
  }
  return g;
}

}  // namespace bscan
