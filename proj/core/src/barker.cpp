#include "bscan/barker.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

namespace bscan {

namespace {

void check_sequence(const BinarySequence& s, const char* what) {
  if (s.terms.empty())
    throw std::invalid_argument(std::string(what) + ": empty sequence");
  for (int t : s.terms)
    if (t != 1 && t != -1)
      throw std::invalid_argument(std::string(what) +
                                  ": entries must be +1 or -1");
}

// c_k for a lag whose every term is already placed.
int lag_sum(const std::vector<int>& a, unsigned n, unsigned k) {
  int c = 0;
  for (unsigned i = 0; i + k < n; ++i) c += a[i] * a[i + k];
  return c;
}

// Fills positions j and n-1-j together, one j per level. With j positions
// fixed at each end, every lag k >= n-j is complete, so placing a pair
// finishes exactly one new lag and the branch dies as soon as that lag
// breaks |c_k| <= 1.
class two_ended_search {
 public:
  two_ended_search(unsigned n, std::vector<BinarySequence>& out)
      : n_(n), a_(n), out_(&out) {}

  void run() { descend(0); }

  void run_from(const std::vector<int>& root, unsigned depth) {
    a_ = root;
    descend(depth);
  }

  // Surviving partial assignments at the given depth, for splitting the
  // tree across threads. Callers keep 2 * depth + 1 < n.
  static std::vector<std::vector<int>> roots(unsigned n, unsigned depth) {
    std::vector<std::vector<int>> out;
    std::vector<int> a(n);
    collect(n, 0, depth, a, out);
    return out;
  }

 private:
  void descend(unsigned j) {
    if (2 * j == n_) {
      close(j);
      return;
    }
    if (2 * j + 1 == n_) {
      for (int mid : {1, -1}) {
        a_[j] = mid;
        close(j);
      }
      return;
    }
    for (int left : {1, -1}) {
      a_[j] = left;
      for (int right : {1, -1}) {
        a_[n_ - 1 - j] = right;
        int c = lag_sum(a_, n_, n_ - j - 1);
        if (c >= -1 && c <= 1) descend(j + 1);
      }
    }
  }

  // The pair levels checked lags n-j..n-1; the rest get checked here once
  // the two ends meet.
  void close(unsigned j) {
    for (unsigned k = 1; k + j + 1 <= n_; ++k) {
      int c = lag_sum(a_, n_, k);
      if (c < -1 || c > 1) return;
    }
    out_->push_back(BinarySequence{a_});
  }

  static void collect(unsigned n, unsigned j, unsigned stop,
                      std::vector<int>& a,
                      std::vector<std::vector<int>>& out) {
    if (j == stop) {
      out.push_back(a);
      return;
    }
    for (int left : {1, -1}) {
      a[j] = left;
      for (int right : {1, -1}) {
        a[n - 1 - j] = right;
        int c = lag_sum(a, n, n - j - 1);
        if (c >= -1 && c <= 1) collect(n, j + 1, stop, a, out);
      }
    }
  }

  unsigned n_;
  std::vector<int> a_;
  std::vector<BinarySequence>* out_;
};

SearchResult package(std::vector<BinarySequence> found) {
  std::sort(found.begin(), found.end(), sequence_less);
  SearchResult result;
  result.sequences = std::move(found);
  std::vector<BinarySequence> reps;
  reps.reserve(result.sequences.size());
  for (const auto& s : result.sequences)
    reps.push_back(orbit_representative(s));
  std::sort(reps.begin(), reps.end(), sequence_less);
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
  result.representatives = std::move(reps);
  return result;
}

}  // namespace

bool sequence_less(const BinarySequence& a, const BinarySequence& b) {
  return std::lexicographical_compare(
      a.terms.begin(), a.terms.end(), b.terms.begin(), b.terms.end(),
      [](int x, int y) { return (x == -1) < (y == -1); });
}

AutocorrelationProfile autocorrelations(const BinarySequence& s) {
  check_sequence(s, "autocorrelations");
  const auto& a = s.terms;
  const std::size_t n = a.size();
  AutocorrelationProfile profile;
  profile.aperiodic.resize(n);
  profile.periodic.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    i64 c = 0;
    for (std::size_t i = 0; i + k < n; ++i) c += a[i] * a[i + k];
    i64 g = 0;
    for (std::size_t i = 0; i < n; ++i) g += a[i] * a[(i + k) % n];
    profile.aperiodic[k] = c;
    profile.periodic[k] = g;
  }
  return profile;
}

bool is_barker(const BinarySequence& s) {
  check_sequence(s, "is_barker");
  const auto& a = s.terms;
  const unsigned n = static_cast<unsigned>(a.size());
  for (unsigned k = 1; k < n; ++k) {
    int c = lag_sum(a, n, k);
    if (c < -1 || c > 1) return false;
  }
  return true;
}

std::vector<BinarySequence> symmetry_orbit(const BinarySequence& s) {
  check_sequence(s, "symmetry_orbit");
  const std::size_t n = s.terms.size();
  auto reversed = [](const std::vector<int>& a) {
    return std::vector<int>(a.rbegin(), a.rend());
  };
  auto negated = [n](const std::vector<int>& a) {
    std::vector<int> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = -a[i];
    return b;
  };
  auto alternate_negated = [n](const std::vector<int>& a) {
    std::vector<int> b(a);
    for (std::size_t i = 1; i < n; i += 2) b[i] = -b[i];
    return b;
  };

  std::set<std::vector<int>> seen{s.terms};
  std::vector<std::vector<int>> frontier{s.terms};
  while (!frontier.empty()) {
    std::vector<int> cur = std::move(frontier.back());
    frontier.pop_back();
    for (auto&& next :
         {reversed(cur), negated(cur), alternate_negated(cur)}) {
      if (seen.insert(next).second) frontier.push_back(next);
    }
  }

  std::vector<BinarySequence> orbit;
  orbit.reserve(seen.size());
  for (const auto& terms : seen) orbit.push_back(BinarySequence{terms});
  std::sort(orbit.begin(), orbit.end(), sequence_less);
  return orbit;
}

BinarySequence orbit_representative(const BinarySequence& s) {
  return symmetry_orbit(s).front();
}

SearchResult exhaustive_search(unsigned n, unsigned workers) {
  if (n == 0 || n > max_search_length)
    throw std::invalid_argument("exhaustive_search: length must be in [1, " +
                                std::to_string(max_search_length) +
                                "], got " + std::to_string(n));
  std::vector<BinarySequence> found;
  if (workers <= 1 || n < 6) {
    two_ended_search search(n, found);
    search.run();
    return package(std::move(found));
  }

  const unsigned depth = n >= 8 ? 3 : 2;
  auto roots = two_ended_search::roots(n, depth);
  std::atomic<std::size_t> cursor{0};
  std::mutex sink;
  auto work = [&] {
    std::vector<BinarySequence> mine;
    two_ended_search search(n, mine);
    for (;;) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= roots.size()) break;
      search.run_from(roots[i], depth);
    }
    std::scoped_lock hold(sink);
    found.insert(found.end(), mine.begin(), mine.end());
  };
  std::vector<std::thread> crew;
  unsigned spawn = std::min<std::size_t>(workers, roots.size());
  crew.reserve(spawn);
  for (unsigned t = 0; t < spawn; ++t) crew.emplace_back(work);
  for (auto& t : crew) t.join();
  return package(std::move(found));
}

SearchResult exhaustive_search_raw(unsigned n) {
  if (n == 0 || n > 16)
    throw std::invalid_argument(
        "exhaustive_search_raw: length must be in [1, 16], got " +
        std::to_string(n));
  std::vector<BinarySequence> found;
  BinarySequence s;
  s.terms.assign(n, 1);
  const u64 total = u64{1} << n;
  for (u64 mask = 0; mask < total; ++mask) {
    for (unsigned i = 0; i < n; ++i)
      s.terms[i] = (mask >> i) & 1 ? -1 : 1;
    if (is_barker(s)) found.push_back(s);
  }
  return package(std::move(found));
}

std::string to_string(const BinarySequence& s) {
  check_sequence(s, "to_string");
  std::string text;
  text.reserve(s.terms.size());
  for (int t : s.terms) text.push_back(t == 1 ? '+' : '-');
  return text;
}

BinarySequence parse_sequence(std::string_view text) {
  if (text.empty())
    throw std::invalid_argument("parse_sequence: empty string");
  BinarySequence s;
  s.terms.reserve(text.size());
  for (char c : text) {
    if (c == '+')
      s.terms.push_back(1);
    else if (c == '-')
      s.terms.push_back(-1);
    else
      throw std::invalid_argument(
          std::string("parse_sequence: bad character '") + c + "'");
  }
  return s;
}

}  // namespace bscan
