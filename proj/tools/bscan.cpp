// bscan: staged driver for the candidate search. Each stage subcommand
// runs one step against a checkpoint directory; `pipeline` runs them all
// and prints the exclusion report.
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bscan/barker.hpp"
#include "bscan/pipeline.hpp"

namespace {

using namespace bscan;

struct CliOptions {
  std::string mode = "barker";
  std::string max_u;
  u64 max_prime = 0;
  std::string bound_w;
  unsigned threads = 1;
  u64 segment_size = default_segment_size;
  std::string checkpoint_dir = ".";
  std::string fixture;
  bool full_ledger = false;
  bool resume = false;
};

BigInt parse_big(const std::string& text, const char* flag) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument(std::string(flag) + " wants a base-10 integer, got '" + text +
                                "'");
  }
  return BigInt(text);
}

PipelineConfig to_config(const CliOptions& o) {
  PipelineConfig cfg;
  cfg.mode = parse_mode(o.mode);
  cfg.max_u = parse_big(o.max_u, "--max-u");
  cfg.prime_bound = o.max_prime;
  if (!o.bound_w.empty()) cfg.bound_w = parse_big(o.bound_w, "--bound-w");
  cfg.workers = o.threads;
  cfg.segment_size = o.segment_size;
  cfg.checkpoint_dir = o.checkpoint_dir;
  cfg.fixture = o.fixture;
  cfg.full_ledger = o.full_ledger;
  cfg.resume = o.resume;
  return cfg;
}

void add_stage_flags(CLI::App* sub, CliOptions& o) {
  sub->add_option("--mode", o.mode, "search mode: barker or chm")->capture_default_str();
  sub->add_option("--max-u", o.max_u, "completeness bound U on u (base-10)")->required();
  sub->add_option("--max-prime", o.max_prime,
                  "vertex prime bound P; 0 derives floor(cbrt(2*U^2))")
      ->capture_default_str();
  sub->add_option("--bound-w", o.bound_w, "augmentation threshold W; defaults to U");
  sub->add_option("--threads", o.threads, "worker threads")->capture_default_str();
  sub->add_option("--segment-size", o.segment_size, "sieve segment length")
      ->capture_default_str();
  sub->add_option("--checkpoint-dir", o.checkpoint_dir, "directory for stage files")
      ->capture_default_str();
  sub->add_option("--fixture", o.fixture,
                  "graph file whose solid edges replace the sieve and pair stages");
  sub->add_flag("--full-ledger", o.full_ledger, "keep screening past the first exclusion");
  sub->add_flag("--resume", o.resume, "continue an interrupted pair search");
}

int run_barker_verify(unsigned max_length, unsigned threads) {
  bool ok = true;
  for (unsigned n = 1; n <= max_length; ++n) {
    const SearchResult found = exhaustive_search(n, threads);
    std::cout << "n=" << n << " sequences=" << found.sequences.size()
              << " orbits=" << found.representatives.size();
    if (!found.representatives.empty()) {
      std::cout << " reps=";
      for (std::size_t i = 0; i < found.representatives.size(); ++i) {
        if (i != 0) std::cout << ',';
        std::cout << to_string(found.representatives[i]);
      }
    }
    std::cout << '\n';
    const bool nonempty =
        n == 1 || n == 2 || n == 3 || n == 4 || n == 5 || n == 7 || n == 11 || n == 13;
    if (nonempty ? found.representatives.size() != 1 : !found.sequences.empty()) ok = false;
  }
  if (!ok) {
    std::cerr << "barker-verify: search disagrees with the known lengths\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"candidate search for Barker sequences and circulant Hadamard orders"};
  app.require_subcommand(1);

  CliOptions opts;
  const std::pair<const char*, Stage> stage_cmds[] = {
      {"sieve", Stage::sieve},       {"wieferich", Stage::wieferich},
      {"graph", Stage::graph},       {"cycles", Stage::cycles},
      {"augment", Stage::augment},   {"screen", Stage::screen},
  };
  const char* stage_help[] = {
      "write the class primes up to P",
      "search for pairs with q, p <= P (checkpointed)",
      "build the closed prime digraph",
      "enumerate cycles with vertex product at most W",
      "augment cycles into candidate integers u",
      "run the exclusion battery over the candidates",
  };
  for (std::size_t i = 0; i < std::size(stage_cmds); ++i) {
    add_stage_flags(app.add_subcommand(stage_cmds[i].first, stage_help[i]), opts);
  }
  add_stage_flags(app.add_subcommand("pipeline", "run every stage, then print the report"),
                  opts);

  unsigned verify_length = 16;
  unsigned verify_threads = 1;
  CLI::App* verify =
      app.add_subcommand("barker-verify", "exhaustive search per length against the known list");
  verify->add_option("--max-length", verify_length, "longest length to search (up to 28)")
      ->capture_default_str()
      ->check(CLI::Range(1u, max_search_length));
  verify->add_option("--threads", verify_threads, "worker threads")->capture_default_str();

  std::string report_path;
  std::string report_mode = "barker";
  CLI::App* report = app.add_subcommand("report", "tabulate a screened candidate file");
  report->add_option("file", report_path, "screened candidate CSV")->required();
  report->add_option("--mode", report_mode, "battery the file was screened under")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (verify->parsed()) return run_barker_verify(verify_length, verify_threads);
    if (report->parsed()) {
      std::cout << render_report(build_report(load_candidates(report_path),
                                              parse_mode(report_mode)));
      return 0;
    }
    if (app.got_subcommand("pipeline")) {
      const RunReport run = run_pipeline(to_config(opts), &std::cout);
      std::cout << render_report(run);
      return 0;
    }
    for (const auto& [name, stage] : stage_cmds) {
      if (app.got_subcommand(name)) {
        std::cout << run_stage(to_config(opts), stage) << '\n';
        return 0;
      }
    }
    std::cerr << "no subcommand selected\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ConfigMismatchError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const CheckpointMismatchError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
