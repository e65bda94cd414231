#include "bscan/wieferich.hpp"

#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

namespace bscan {

namespace {

constexpr u128 one128 = 1;

// FNV-1a over the rendered task parameters: stable across runs and platforms.
u64 fnv1a(const std::string& s) {
  u64 h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(u64 v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// The p-segments partition [p_lo, p_hi] into [start, start + seg) slices.
// Returns all pairs of one slice, (p,q)-ascending.
std::vector<WieferichPair> scan_segment(u64 seg_lo, u64 seg_hi,
                                        const std::vector<u64>& qs, Residue p_filter) {
  std::vector<WieferichPair> out;
  if (qs.empty() || seg_lo > seg_hi) return out;
  for (u64 p : sieve_primes(std::max<u64>(seg_lo, 3), seg_hi, p_filter)) {
    for (u64 q : qs) {
      if (q == p) continue;
      if (is_wieferich(q, p)) out.push_back({q, p});
    }
  }
  return out;
}

void append_pairs(std::ofstream& os, const std::vector<WieferichPair>& pairs) {
  for (const WieferichPair& w : pairs) os << w.q << ' ' << w.p << '\n';
}

// Atomic checkpoint replacement: write aside, then rename over.
void write_checkpoint(const std::filesystem::path& path, const std::string& hash,
                      u64 next_start) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write checkpoint: " + tmp.string());
    os << hash << ' ' << next_start << '\n';
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

bool is_wieferich(u64 q, u64 p) {
  const u128 p2 = static_cast<u128>(p) * p;
  if (p2 < (one128 << fast_modulus_bits)) {
    return powmod(static_cast<u128>(q), static_cast<u128>(p - 1), p2) == 1;
  }
  const BigInt big_p2 = BigInt(p) * p;
  return powmod(BigInt(q), BigInt(p - 1), big_p2) == 1;
}

std::string task_hash(const SearchTask& t) {
  std::ostringstream os;
  os << t.q_lo << ' ' << t.q_hi << ' ' << t.p_lo << ' ' << t.p_hi << ' '
     << t.q_filter.remainder << ' ' << t.q_filter.modulus << ' '
     << t.p_filter.remainder << ' ' << t.p_filter.modulus << ' ' << t.segment_size;
  return hex64(fnv1a(os.str()));
}

std::vector<WieferichPair> search_pairs(const SearchTask& task) {
  if (task.segment_size == 0) throw std::invalid_argument("search_pairs: zero segment size");
  std::vector<WieferichPair> out;
  if (task.q_hi < task.q_lo || task.p_hi < task.p_lo) return out;
  const std::vector<u64> qs = sieve_primes(std::max<u64>(task.q_lo, 3), task.q_hi, task.q_filter);
  for (u64 start = task.p_lo; start <= task.p_hi; start += task.segment_size) {
    const u64 stop = std::min(task.p_hi, start + task.segment_size - 1);
    std::vector<WieferichPair> seg = scan_segment(start, stop, qs, task.p_filter);
    out.insert(out.end(), seg.begin(), seg.end());
  }
  return out;
}

bool search_pairs_to_file(const SearchTask& task, const std::filesystem::path& pairs_path,
                          const std::filesystem::path& checkpoint_path, unsigned threads,
                          const std::function<bool()>& cancel) {
  if (task.segment_size == 0) throw std::invalid_argument("search_pairs_to_file: zero segment size");
  if (threads == 0) threads = 1;
  const std::string hash = task_hash(task);

  u64 next_start = task.p_lo;
  if (std::filesystem::exists(checkpoint_path)) {
    std::ifstream is(checkpoint_path);
    std::string stored_hash;
    u64 stored_next = 0;
    if (!(is >> stored_hash >> stored_next)) {
      throw std::runtime_error("malformed checkpoint: " + checkpoint_path.string());
    }
    if (stored_hash != hash) {
      throw CheckpointMismatchError("checkpoint belongs to a different task: " +
                                    checkpoint_path.string());
    }
    if (stored_next < task.p_lo || (stored_next - task.p_lo) % task.segment_size != 0) {
      throw CheckpointMismatchError("checkpoint offset is not a segment boundary: " +
                                    checkpoint_path.string());
    }
    next_start = stored_next;

    // Self-heal: drop any pairs from a segment whose checkpoint never landed
    // (append happens first, so a crash between the two leaves extras).
    std::vector<WieferichPair> kept;
    bool trimmed = false;
    for (const WieferichPair& w : load_pairs(pairs_path)) {
      if (w.p < next_start) kept.push_back(w);
      else trimmed = true;
    }
    if (trimmed) {
      std::ofstream os(pairs_path, std::ios::trunc);
      append_pairs(os, kept);
    }
  } else {
    std::ofstream(pairs_path, std::ios::trunc);  // fresh run: empty the output
    write_checkpoint(checkpoint_path, hash, next_start);
  }

  const std::vector<u64> qs =
      task.q_hi < task.q_lo
          ? std::vector<u64>{}
          : sieve_primes(std::max<u64>(task.q_lo, 3), task.q_hi, task.q_filter);

  while (next_start <= task.p_hi) {
    if (cancel && cancel()) return false;
    // One batch of `threads` segments, computed concurrently, appended in order.
    std::vector<std::pair<u64, u64>> bounds;
    for (u64 start = next_start; start <= task.p_hi && bounds.size() < threads;
         start += task.segment_size) {
      bounds.emplace_back(start, std::min(task.p_hi, start + task.segment_size - 1));
    }
    std::vector<std::future<std::vector<WieferichPair>>> batch;
    for (auto [lo, hi] : bounds) {
      batch.push_back(std::async(bounds.size() == 1 ? std::launch::deferred : std::launch::async,
                                 scan_segment, lo, hi, std::cref(qs), task.p_filter));
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const std::vector<WieferichPair> seg = batch[i].get();
      {
        std::ofstream os(pairs_path, std::ios::app);
        if (!os) throw std::runtime_error("cannot append to " + pairs_path.string());
        append_pairs(os, seg);
        os.flush();
      }
      next_start = bounds[i].first + task.segment_size;
      write_checkpoint(checkpoint_path, hash, next_start);
    }
  }
  return true;
}

std::vector<WieferichPair> load_pairs(const std::filesystem::path& pairs_path) {
  std::ifstream is(pairs_path);
  if (!is) throw std::runtime_error("cannot open pairs file: " + pairs_path.string());
  std::vector<WieferichPair> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    WieferichPair w;
    char extra;
    if (!(ls >> w.q >> w.p) || (ls >> extra)) {
      throw std::runtime_error("pairs file " + pairs_path.string() + ": bad line " +
                               std::to_string(lineno));
    }
    if (!out.empty() && !pair_less(out.back(), w)) {
      throw std::runtime_error("pairs file " + pairs_path.string() +
                               ": order violation at line " + std::to_string(lineno));
    }
    out.push_back(w);
  }
  return out;
}

DescendingResult search_descending(u64 q, u64 p_bound, Residue p_filter, u64 max_scanned) {
  DescendingResult result;
  const u64 limit = std::min(q, p_bound);  // exclusive
  if (limit <= 3) return result;
  u64 scanned = 0;
  for (u64 start = 3; start < limit; start += default_segment_size) {
    const u64 stop = std::min(limit - 1, start + default_segment_size - 1);
    for (u64 p : sieve_primes(start, stop, p_filter)) {
      if (max_scanned != 0 && scanned == max_scanned) {
        result.complete = false;
        return result;
      }
      ++scanned;
      if (is_wieferich(q, p)) result.pairs.push_back({q, p});
    }
  }
  return result;
}

}  // namespace bscan
