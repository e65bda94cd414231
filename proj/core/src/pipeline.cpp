#include "bscan/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "bscan/cycles.hpp"
#include "bscan/digest.hpp"
#include "bscan/graph.hpp"
#include "bscan/wieferich.hpp"

namespace bscan {

namespace {

constexpr Stage all_stages[] = {Stage::sieve,  Stage::wieferich, Stage::graph,
                                Stage::cycles, Stage::augment,   Stage::screen};

const char* stage_basename(Stage s) {
  switch (s) {
    case Stage::sieve: return "primes.txt";
    case Stage::wieferich: return "pairs.txt";
    case Stage::graph: return "graph.txt";
    case Stage::cycles: return "cycles.txt";
    case Stage::augment: return "candidates.csv";
    case Stage::screen: return "screened.csv";
  }
  throw std::logic_error("stage_basename: unhandled stage");
}

// Manifest keys name the artifact, not the stage that wrote it.
const char* stage_key(Stage s) {
  switch (s) {
    case Stage::sieve: return "primes";
    case Stage::wieferich: return "pairs";
    case Stage::graph: return "graph";
    case Stage::cycles: return "cycles";
    case Stage::augment: return "candidates";
    case Stage::screen: return "screened";
  }
  throw std::logic_error("stage_key: unhandled stage");
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc | std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << content;
    os.flush();
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// First line of the file, or nothing when it cannot be opened.
std::optional<std::string> first_line(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) return std::nullopt;
  std::string line;
  std::getline(is, line);
  return line;
}

struct CheckpointState {
  std::string hash;
  u64 next = 0;
};

std::optional<CheckpointState> read_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) return std::nullopt;
  CheckpointState st;
  if (!(is >> st.hash >> st.next)) {
    throw std::runtime_error("malformed checkpoint: " + path.string());
  }
  return st;
}

SearchTask pair_task(const PipelineConfig& cfg) {
  SearchTask task;
  task.q_lo = 3;
  task.q_hi = cfg.prime_bound;
  task.p_lo = 3;
  task.p_hi = cfg.prime_bound;
  task.q_filter = mode_class(cfg.mode);
  task.p_filter = mode_class(cfg.mode);
  task.segment_size = cfg.segment_size;
  return task;
}

std::string join_warnings(const std::vector<std::string>& warnings) {
  std::string out;
  for (const std::string& w : warnings) out += "; warning: " + w;
  return out;
}

// Lazily loads earlier stage files as later stages ask for them, so a run
// that skips every stage still feeds the report from disk.
class PipelineRun {
 public:
  explicit PipelineRun(PipelineConfig config)
      : cfg_(resolve_config(std::move(config))), hash_(config_hash(cfg_)) {}

  const PipelineConfig& config() const { return cfg_; }

  std::string run(Stage stage) {
    std::filesystem::create_directories(cfg_.checkpoint_dir);
    std::string note;
    switch (stage) {
      case Stage::sieve: note = sieve_stage(); break;
      case Stage::wieferich: note = wieferich_stage(); break;
      case Stage::graph: note = graph_stage(); break;
      case Stage::cycles: note = cycles_stage(); break;
      case Stage::augment: note = augment_stage(); break;
      case Stage::screen: note = screen_stage(); break;
    }
    return std::string(stage_name(stage)) + ": " + note;
  }

  const std::vector<CandidateU>& screened() {
    if (!screened_) screened_ = load_candidates(stage_file(cfg_, Stage::screen));
    return *screened_;
  }

  void write_manifest() {
    std::ostringstream os;
    os << "mode=" << mode_name(cfg_.mode) << '\n';
    os << "U=" << cfg_.max_u.str() << '\n';
    os << "P=" << cfg_.prime_bound << '\n';
    os << "W=" << cfg_.bound_w.str() << '\n';
    os << "omega_cap_turyn=" << cfg_.omega_cap_turyn << '\n';
    os << "omega_cap_ls1=" << cfg_.omega_cap_ls1 << '\n';
    os << "config=" << hash_ << '\n';
    os << "fixture="
       << (cfg_.fixture.empty() ? std::string("none") : git_blob_sha1_file(cfg_.fixture)) << '\n';
    for (Stage s : all_stages) {
      const std::filesystem::path file = stage_file(cfg_, s);
      if (std::filesystem::exists(file)) {
        os << stage_key(s) << '=' << git_blob_sha1_file(file) << '\n';
      }
    }
    write_atomic(manifest_file(cfg_), os.str());
  }

 private:
  std::string note_line(Stage s) const { return "# bscan " + stage_annotation(cfg_, s); }

  // True: the stage file exists and carries this run's annotation. False:
  // no file. A file written under any other configuration throws.
  bool finished(Stage s) const {
    const std::filesystem::path file = stage_file(cfg_, s);
    const std::optional<std::string> line = first_line(file);
    if (!line) return false;
    if (*line == note_line(s)) return true;
    throw ConfigMismatchError("stage file " + file.string() +
                              " was written under a different configuration; "
                              "remove it or use a fresh --checkpoint-dir");
  }

  std::string sieve_stage() {
    if (!cfg_.fixture.empty()) return "replaced by fixture";
    if (finished(Stage::sieve)) return "skipped";
    u64 count = 0;
    std::ostringstream os;
    os << note_line(Stage::sieve) << '\n';
    for_primes(
        3, cfg_.prime_bound,
        [&](u64 p) {
          if (mode_class(cfg_.mode).matches(p)) {
            os << p << '\n';
            ++count;
          }
        },
        cfg_.segment_size);
    write_atomic(stage_file(cfg_, Stage::sieve), os.str());
    return std::to_string(count) + " primes (fresh)";
  }

  std::string wieferich_stage() {
    if (!cfg_.fixture.empty()) return "replaced by fixture";
    const std::filesystem::path pairs_path = stage_file(cfg_, Stage::wieferich);
    const std::filesystem::path ckpt_path = cfg_.checkpoint_dir / "pairs.checkpoint";
    const SearchTask task = pair_task(cfg_);
    const std::string want = task_hash(task);

    const std::optional<CheckpointState> st = read_checkpoint(ckpt_path);
    if (st) {
      if (st->hash != want) {
        throw CheckpointMismatchError("pairs checkpoint " + ckpt_path.string() +
                                      " belongs to a different configuration");
      }
      if (st->next > task.p_hi) return "skipped";  // range finished earlier
      if (!cfg_.resume) {
        throw ConfigMismatchError("partial pair search in " + pairs_path.string() +
                                  "; pass --resume to continue it");
      }
      search_pairs_to_file(task, pairs_path, ckpt_path, cfg_.workers);
      return std::to_string(load_pairs(pairs_path).size()) + " pairs (resumed)";
    }
    if (std::filesystem::exists(pairs_path)) {
      throw ConfigMismatchError("pairs file " + pairs_path.string() +
                                " has no checkpoint; refusing to overwrite it");
    }
    search_pairs_to_file(task, pairs_path, ckpt_path, cfg_.workers);
    return std::to_string(load_pairs(pairs_path).size()) + " pairs (fresh)";
  }

  std::string graph_stage() {
    if (finished(Stage::graph)) return "skipped";
    std::vector<WieferichPair> seeds;
    std::vector<std::string> warnings;
    if (!cfg_.fixture.empty()) {
      const PrimeGraph fixture = load_fixture(cfg_.fixture, &warnings);
      if (fixture.mode != cfg_.mode) {
        throw ConfigMismatchError("fixture " + cfg_.fixture.string() + " is a " +
                                  std::string(mode_name(fixture.mode)) + " graph, run wants " +
                                  std::string(mode_name(cfg_.mode)));
      }
      for (const GraphEdge& e : fixture.edges) {
        if (e.kind == EdgeKind::solid) seeds.push_back({e.from, e.to});
      }
    } else {
      seeds = load_pairs(stage_file(cfg_, Stage::wieferich));
    }
    const PrimeGraph g = build_closure(seeds, cfg_.mode, cfg_.prime_bound, {}, &warnings);
    save_graph(g, stage_file(cfg_, Stage::graph), {stage_annotation(cfg_, Stage::graph)});
    return graph_stats_line(g) + " (fresh)" + join_warnings(warnings);
  }

  std::string cycles_stage() {
    if (finished(Stage::cycles)) return "skipped";
    const std::vector<Cycle> found = enumerate_cycles_bounded(graph(), cfg_.bound_w);
    save_cycles(found, stage_file(cfg_, Stage::cycles), {stage_annotation(cfg_, Stage::cycles)});
    return std::to_string(cycles().size()) + " cycles (fresh)";
  }

  std::string augment_stage() {
    if (finished(Stage::augment)) return "skipped";
    std::vector<CandidateU> all;
    std::size_t subgraphs = 0;
    for (const Cycle& c : cycles()) {
      for (const AugmentedSubgraph& s : augment_cycle(graph(), c, cfg_.bound_w)) {
        ++subgraphs;
        for (CandidateU& cand : candidates_from_subgraph(s, cfg_.bound_w)) {
          all.push_back(std::move(cand));
        }
      }
    }
    const std::vector<CandidateU> merged = merge_candidates(std::move(all));
    save_candidates(merged, stage_file(cfg_, Stage::augment),
                    {stage_annotation(cfg_, Stage::augment)});
    return std::to_string(merged.size()) + " candidates from " + std::to_string(subgraphs) +
           " subgraphs (fresh)";
  }

  std::string screen_stage() {
    if (finished(Stage::screen)) return "skipped";
    ScreenOptions options;
    options.caps.turyn_max_omega = cfg_.omega_cap_turyn;
    options.caps.ls1_max_omega = cfg_.omega_cap_ls1;
    options.full_ledger = cfg_.full_ledger;
    options.workers = cfg_.workers;
    const std::vector<CandidateU> screened_list =
        screen(load_candidates(stage_file(cfg_, Stage::augment)), cfg_.mode, options);
    save_candidates(screened_list, stage_file(cfg_, Stage::screen),
                    {stage_annotation(cfg_, Stage::screen)});
    std::size_t admissible = 0, excluded = 0, inconclusive = 0;
    for (const CandidateU& c : screened_list) {
      switch (c.status) {
        case CandidateStatus::admissible: ++admissible; break;
        case CandidateStatus::excluded: ++excluded; break;
        case CandidateStatus::inconclusive: ++inconclusive; break;
      }
    }
    return std::to_string(admissible) + " admissible, " + std::to_string(excluded) +
           " excluded, " + std::to_string(inconclusive) + " inconclusive (fresh)";
  }

  const PrimeGraph& graph() {
    if (!graph_) graph_ = load_fixture(stage_file(cfg_, Stage::graph));
    return *graph_;
  }

  const std::vector<Cycle>& cycles() {
    if (!cycles_) cycles_ = load_cycles(stage_file(cfg_, Stage::cycles), graph());
    return *cycles_;
  }

  PipelineConfig cfg_;
  std::string hash_;
  std::optional<PrimeGraph> graph_;
  std::optional<std::vector<Cycle>> cycles_;
  std::optional<std::vector<CandidateU>> screened_;
};

std::vector<std::string> row_cells(const std::string& label, const ReportRow& row) {
  std::vector<std::string> cells{label, std::to_string(row.initial)};
  for (std::size_t count : row.excluded) cells.push_back(std::to_string(count));
  cells.push_back(std::to_string(row.admissible));
  cells.push_back(std::to_string(row.inconclusive));
  return cells;
}

}  // namespace

PipelineConfig resolve_config(PipelineConfig config) {
  if (config.max_u < 1) throw std::invalid_argument("max-u must be at least 1");
  if (config.bound_w == 0) config.bound_w = config.max_u;
  if (config.bound_w < config.max_u) throw std::invalid_argument("bound-w must be >= max-u");
  if (config.prime_bound == 0) {
    const BigInt p = iroot(2 * config.max_u * config.max_u, 3);
    if (p > std::numeric_limits<u64>::max()) {
      throw std::invalid_argument("derived prime bound exceeds 64 bits; pass --max-prime");
    }
    config.prime_bound = p.convert_to<u64>();
  }
  if (config.prime_bound < 3) throw std::invalid_argument("prime bound must be at least 3");
  if (config.segment_size == 0) throw std::invalid_argument("segment size must be positive");
  if (config.workers == 0) config.workers = 1;
  if (config.checkpoint_dir.empty()) config.checkpoint_dir = ".";
  if (!config.fixture.empty() && !std::filesystem::exists(config.fixture)) {
    throw std::invalid_argument("fixture file not found: " + config.fixture.string());
  }
  return config;
}

std::string config_hash(const PipelineConfig& config) {
  std::ostringstream os;
  os << "mode=" << mode_name(config.mode) << '\n';
  os << "U=" << config.max_u.str() << '\n';
  os << "P=" << config.prime_bound << '\n';
  os << "W=" << config.bound_w.str() << '\n';
  os << "omega_cap_turyn=" << config.omega_cap_turyn << '\n';
  os << "omega_cap_ls1=" << config.omega_cap_ls1 << '\n';
  os << "fixture="
     << (config.fixture.empty() ? std::string("none") : git_blob_sha1_file(config.fixture))
     << '\n';
  return git_blob_sha1(os.str());
}

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::sieve: return "sieve";
    case Stage::wieferich: return "wieferich";
    case Stage::graph: return "graph";
    case Stage::cycles: return "cycles";
    case Stage::augment: return "augment";
    case Stage::screen: return "screen";
  }
  throw std::logic_error("stage_name: unhandled stage");
}

std::filesystem::path stage_file(const PipelineConfig& config, Stage stage) {
  return config.checkpoint_dir / stage_basename(stage);
}

std::filesystem::path manifest_file(const PipelineConfig& config) {
  return config.checkpoint_dir / "manifest.txt";
}

std::string stage_annotation(const PipelineConfig& config, Stage stage) {
  return "stage=" + std::string(stage_name(stage)) + " config=" + config_hash(config);
}

std::string run_stage(const PipelineConfig& config, Stage stage) {
  PipelineRun run(config);
  return run.run(stage);
}

RunReport build_report(const std::vector<CandidateU>& candidates, Mode mode) {
  RunReport report;
  report.mode = mode;
  report.theorems = screen_battery(mode);
  report.totals.excluded.assign(report.theorems.size(), 0);

  std::map<unsigned, ReportRow> classes;
  for (const CandidateU& c : candidates) {
    ReportRow& row = classes.try_emplace(c.omega).first->second;
    if (row.excluded.empty()) {
      row.omega = c.omega;
      row.excluded.assign(report.theorems.size(), 0);
    }
    ++row.initial;
    ++report.totals.initial;
    switch (c.status) {
      case CandidateStatus::admissible:
        ++row.admissible;
        ++report.totals.admissible;
        break;
      case CandidateStatus::inconclusive:
        ++row.inconclusive;
        ++report.totals.inconclusive;
        break;
      case CandidateStatus::excluded: {
        const Verdict* v = c.excluding_verdict();
        if (v == nullptr) {
          throw std::runtime_error("report: excluded candidate without a verdict: u = " +
                                   c.u.str());
        }
        const auto it = std::find(report.theorems.begin(), report.theorems.end(), v->theorem);
        if (it == report.theorems.end()) {
          throw std::runtime_error("report: u = " + c.u.str() + " excluded by " +
                                   std::string(theorem_name(v->theorem)) + ", which the " +
                                   std::string(mode_name(mode)) + " battery never runs");
        }
        const std::size_t slot = static_cast<std::size_t>(it - report.theorems.begin());
        ++row.excluded[slot];
        ++report.totals.excluded[slot];
        break;
      }
    }
  }
  report.rows.reserve(classes.size());
  for (auto& [omega, row] : classes) report.rows.push_back(std::move(row));
  return report;
}

std::string render_report(const RunReport& report) {
  std::vector<std::string> headers{"Omega", "Initial"};
  for (Theorem t : report.theorems) headers.emplace_back(theorem_name(t));
  headers.emplace_back("Admissible");
  headers.emplace_back("Inconclusive");

  std::vector<std::vector<std::string>> lines;
  for (const ReportRow& row : report.rows) {
    lines.push_back(row_cells(std::to_string(row.omega), row));
  }
  lines.push_back(row_cells("total", report.totals));

  std::vector<std::size_t> widths;
  widths.reserve(headers.size());
  for (const std::string& h : headers) widths.push_back(h.size());
  for (const auto& cells : lines) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      widths[i] = std::max(widths[i], cells[i].size());
    }
  }

  std::ostringstream os;
  const auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i != 0) os << "  ";
      os << std::string(widths[i] - cells[i].size(), ' ') << cells[i];
    }
    os << '\n';
  };
  emit(headers);
  for (const auto& cells : lines) emit(cells);
  return os.str();
}

RunReport run_pipeline(const PipelineConfig& config, std::ostream* heartbeat) {
  PipelineRun run(config);
  for (Stage stage : all_stages) {
    const std::string line = run.run(stage);
    if (heartbeat != nullptr) *heartbeat << line << '\n' << std::flush;
  }
  const RunReport report = build_report(run.screened(), run.config().mode);
  run.write_manifest();
  if (heartbeat != nullptr) {
    *heartbeat << "manifest: " << manifest_file(run.config()).string() << '\n' << std::flush;
  }
  return report;
}

}  // namespace bscan
