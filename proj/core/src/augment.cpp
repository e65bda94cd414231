// Subgraph growth around small-product cycles, candidate generation, the
// screening battery, and the candidates CSV.
#include "bscan/augment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <set>
#include <thread>

namespace bscan {

namespace {

constexpr const char* candidates_header = "u,factorization,omega,status,excluded_by,witness";

BigInt parse_bigint(std::string_view text, const std::string& what) {
  if (text.empty()) throw std::invalid_argument(what + ": empty integer");
  for (char ch : text) {
    if (ch < '0' || ch > '9') {
      throw std::invalid_argument(what + ": bad integer '" + std::string(text) + "'");
    }
  }
  if (text.size() > 1 && text.front() == '0') {
    throw std::invalid_argument(what + ": leading zero in '" + std::string(text) + "'");
  }
  return BigInt(std::string(text));
}

std::vector<std::string> split_on(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    if (next == std::string::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
}

}  // namespace

std::vector<AugmentedSubgraph> augment_cycle(const PrimeGraph& g, const Cycle& c,
                                             const BigInt& bound) {
  std::vector<AugmentedSubgraph> out;
  BigInt base = 1;
  for (u64 v : c.vertices) base *= v;
  if (base > bound) return out;

  std::set<u64> in(c.vertices.begin(), c.vertices.end());
  std::set<u64> shut;  // frontier primes already decided against

  // Smallest undecided successor of the included set that still fits.
  const auto next_choice = [&](const BigInt& product) -> u64 {
    u64 best = 0;
    for (u64 v : in) {
      for (const GraphEdge& e : g.out_edges(v)) {
        if (best != 0 && e.to >= best) continue;
        if (in.count(e.to) != 0 || shut.count(e.to) != 0) continue;
        if (product * e.to > bound) continue;
        best = e.to;
      }
    }
    return best;
  };

  std::function<void(const BigInt&)> grow = [&](const BigInt& product) {
    const u64 w = next_choice(product);
    if (w == 0) {
      out.push_back({c, std::vector<u64>(in.begin(), in.end()), product});
      return;
    }
    in.insert(w);
    grow(product * w);
    in.erase(w);
    shut.insert(w);
    grow(product);
    shut.erase(w);
  };
  grow(base);

  // distinct prime sets have distinct products, so this order is total
  std::sort(out.begin(), out.end(),
            [](const AugmentedSubgraph& a, const AugmentedSubgraph& b) {
              return a.product < b.product;
            });
  return out;
}

std::string_view status_name(CandidateStatus s) {
  switch (s) {
    case CandidateStatus::admissible: return "Admissible";
    case CandidateStatus::excluded: return "Excluded";
    case CandidateStatus::inconclusive: return "Inconclusive";
  }
  throw std::logic_error("status_name: bad status");
}

CandidateStatus parse_status(std::string_view name) {
  if (name == "Admissible") return CandidateStatus::admissible;
  if (name == "Excluded") return CandidateStatus::excluded;
  if (name == "Inconclusive") return CandidateStatus::inconclusive;
  throw std::invalid_argument("unknown status '" + std::string(name) + "'");
}

const Verdict* CandidateU::excluding_verdict() const {
  for (const Verdict& v : verdicts) {
    if (v.excluded()) return &v;
  }
  return nullptr;
}

CandidateU make_candidate(Factorization fact) {
  CandidateU c;
  c.u = fact.value;
  c.omega = fact.big_omega();
  c.n = 4 * fact.value * fact.value;
  c.factorization = std::move(fact);
  return c;
}

std::vector<CandidateU> candidates_from_subgraph(const AugmentedSubgraph& s,
                                                 const BigInt& bound) {
  std::vector<CandidateU> out;
  const std::vector<u64>& primes = s.vertices;
  if (primes.empty()) return out;

  std::vector<unsigned> exps(primes.size(), 1);
  std::function<void(std::size_t, const BigInt&)> walk = [&](std::size_t i,
                                                             const BigInt& acc) {
    if (i == primes.size()) {
      std::vector<std::pair<BigInt, unsigned>> parts;
      parts.reserve(primes.size());
      for (std::size_t j = 0; j < primes.size(); ++j) parts.emplace_back(primes[j], exps[j]);
      Factorization fact = make_factorization(parts);
      if (test_field_descent(fact).passed()) out.push_back(make_candidate(std::move(fact)));
      return;
    }
    BigInt next = acc * primes[i];
    for (unsigned e = 1; next <= bound; ++e, next *= primes[i]) {
      exps[i] = e;
      walk(i + 1, next);
    }
    exps[i] = 1;
  };
  walk(0, 1);

  std::sort(out.begin(), out.end(),
            [](const CandidateU& a, const CandidateU& b) { return a.u < b.u; });
  return out;
}

std::vector<Theorem> screen_battery(Mode mode) {
  std::vector<Theorem> order;
  if (mode == Mode::barker) order.push_back(Theorem::eks);
  order.push_back(Theorem::large_prime_cor);
  order.push_back(Theorem::field_descent);
  order.push_back(Theorem::turyn);
  order.push_back(Theorem::ls5);
  order.push_back(Theorem::ls1);
  if (mode == Mode::chm) order.push_back(Theorem::ls10);
  return order;
}

namespace {

Verdict run_theorem(Theorem t, const Factorization& u, Mode mode, const CriteriaCaps& caps) {
  switch (t) {
    case Theorem::eks: return test_eks(u);
    case Theorem::large_prime_cor: return test_large_prime_cor(u);
    case Theorem::field_descent: return test_field_descent(u);
    case Theorem::turyn: return test_turyn(u, mode, caps);
    case Theorem::ls5: return test_ls5(u, caps);
    case Theorem::ls1: return test_ls1(u, caps);
    case Theorem::ls10: return test_ls10(u, caps);
  }
  throw std::logic_error("screen: unhandled theorem");
}

void screen_one(CandidateU& c, Mode mode, const std::vector<Theorem>& order,
                const ScreenOptions& options) {
  c.verdicts.clear();
  bool excluded = false;
  bool unsettled = false;
  for (Theorem t : order) {
    Verdict v = run_theorem(t, c.factorization, mode, options.caps);
    if (v.outcome == Outcome::excluded) excluded = true;
    if (v.outcome == Outcome::inconclusive) unsettled = true;
    c.verdicts.push_back(std::move(v));
    if (excluded && !options.full_ledger) break;
  }
  c.status = excluded      ? CandidateStatus::excluded
             : unsettled   ? CandidateStatus::inconclusive
                           : CandidateStatus::admissible;
}

}  // namespace

std::vector<CandidateU> screen(std::vector<CandidateU> candidates, Mode mode,
                               const ScreenOptions& options) {
  const std::vector<Theorem> order = screen_battery(mode);
  const unsigned workers = std::max(1u, options.workers);
  if (workers == 1 || candidates.size() <= 1) {
    for (CandidateU& c : candidates) screen_one(c, mode, order, options);
    return candidates;
  }
  std::atomic<std::size_t> cursor{0};
  const auto drain = [&]() {
    for (std::size_t i; (i = cursor.fetch_add(1)) < candidates.size();) {
      screen_one(candidates[i], mode, order, options);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(drain);
  drain();
  for (std::thread& t : pool) t.join();
  return candidates;
}

std::vector<CandidateU> merge_candidates(std::vector<CandidateU> candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const CandidateU& a, const CandidateU& b) { return a.u < b.u; });
  std::vector<CandidateU> out;
  for (CandidateU& c : candidates) {
    if (!out.empty() && out.back().u == c.u) {
      if (!(out.back() == c)) {
        throw std::invalid_argument("merge_candidates: conflicting entries for u = " +
                                    c.u.str());
      }
      continue;
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::string format_factorization(const Factorization& f) {
  std::string out;
  for (std::size_t i = 0; i < f.factors.size(); ++i) {
    if (i != 0) out += '*';
    out += f.factors[i].prime.str();
    out += '^';
    out += std::to_string(f.factors[i].exponent);
  }
  return out;
}

Factorization parse_factorization(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("factorization: empty");
  std::vector<std::pair<BigInt, unsigned>> parts;
  BigInt last = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t star = text.find('*', pos);
    const std::string_view part =
        text.substr(pos, star == std::string_view::npos ? std::string_view::npos : star - pos);
    const std::size_t caret = part.find('^');
    if (caret == std::string_view::npos) {
      throw std::invalid_argument("factorization: missing '^' in '" + std::string(part) + "'");
    }
    const BigInt p = parse_bigint(part.substr(0, caret), "factorization");
    const BigInt e = parse_bigint(part.substr(caret + 1), "factorization");
    if (e < 1 || e > 1'000'000) throw std::invalid_argument("factorization: exponent out of range");
    if (p <= last) throw std::invalid_argument("factorization: primes not ascending");
    last = p;
    parts.emplace_back(p, static_cast<unsigned>(e));
    if (star == std::string_view::npos) break;
    pos = star + 1;
  }
  try {
    return make_factorization(parts);
  } catch (const std::domain_error& err) {
    throw std::invalid_argument(std::string("factorization: ") + err.what());
  }
}

void save_candidates(const std::vector<CandidateU>& candidates,
                     const std::filesystem::path& path,
                     const std::vector<std::string>& annotations) {
  std::vector<const CandidateU*> rows;
  rows.reserve(candidates.size());
  for (const CandidateU& c : candidates) rows.push_back(&c);
  std::sort(rows.begin(), rows.end(),
            [](const CandidateU* a, const CandidateU* b) { return a->u < b->u; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i - 1]->u == rows[i]->u) {
      throw std::invalid_argument("save_candidates: duplicate u = " + rows[i]->u.str());
    }
  }

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    for (const std::string& note : annotations) os << "# bscan " << note << '\n';
    os << candidates_header << '\n';
    for (const CandidateU* c : rows) {
      const Verdict* v = c->excluding_verdict();
      if ((v != nullptr) != (c->status == CandidateStatus::excluded)) {
        throw std::invalid_argument("save_candidates: status of u = " + c->u.str() +
                                    " disagrees with its ledger");
      }
      os << c->u.str() << ',' << format_factorization(c->factorization) << ',' << c->omega
         << ',' << status_name(c->status) << ',';
      if (v != nullptr) {
        os << theorem_name(v->theorem);
        os << ',';
        for (std::size_t i = 0; i < v->witness.size(); ++i) {
          if (i != 0) os << ';';
          os << v->witness[i].str();
        }
      } else {
        os << ',';
      }
      os << '\n';
    }
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<CandidateU> load_candidates(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open candidates file " + path.string());

  std::string line;
  std::size_t lineno = 0;
  do {  // "# bscan ..." annotation lines may precede the CSV header
    if (!std::getline(is, line)) {
      throw std::runtime_error("candidates file " + path.string() + ": empty");
    }
    ++lineno;
  } while (line.rfind("# bscan", 0) == 0);
  if (line != candidates_header) {
    throw std::runtime_error("candidates file " + path.string() + ": line " +
                             std::to_string(lineno) + ": bad header '" + line + "'");
  }

  std::vector<CandidateU> out;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string where = path.string() + ": line " + std::to_string(lineno);
    const std::vector<std::string> fields = split_on(line, ',');
    if (fields.size() != 6) {
      throw std::runtime_error("candidates file " + where + ": expected 6 fields, got " +
                               std::to_string(fields.size()));
    }

    Factorization fact;
    CandidateStatus status = CandidateStatus::inconclusive;
    std::vector<Verdict> ledger;
    try {
      fact = parse_factorization(fields[1]);
      if (parse_bigint(fields[0], "u") != fact.value) {
        throw std::invalid_argument("u column disagrees with the factorization");
      }
      if (parse_bigint(fields[2], "omega") != fact.big_omega()) {
        throw std::invalid_argument("omega column disagrees with the factorization");
      }
      status = parse_status(fields[3]);
      if (fields[4].empty()) {
        if (status == CandidateStatus::excluded) {
          throw std::invalid_argument("excluded row without excluded_by");
        }
        if (!fields[5].empty()) throw std::invalid_argument("witness without excluded_by");
      } else {
        if (status != CandidateStatus::excluded) {
          throw std::invalid_argument("excluded_by on a row that is not excluded");
        }
        Verdict v;
        v.theorem = parse_theorem(fields[4]);
        v.outcome = Outcome::excluded;
        if (!fields[5].empty()) {
          for (const std::string& tok : split_on(fields[5], ';')) {
            v.witness.push_back(parse_bigint(tok, "witness"));
          }
        }
        if (!revalidate(fact, v)) throw std::invalid_argument("witness does not revalidate");
        ledger.push_back(std::move(v));
      }
    } catch (const std::invalid_argument& err) {
      throw std::runtime_error("candidates file " + where + ": " + err.what());
    }

    CandidateU c = make_candidate(std::move(fact));
    c.status = status;
    c.verdicts = std::move(ledger);
    if (!out.empty() && !(out.back().u < c.u)) {
      throw std::runtime_error("candidates file " + where + ": rows out of order");
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace bscan
