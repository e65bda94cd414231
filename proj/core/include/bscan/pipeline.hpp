// Staged pipeline orchestration: configuration with derived defaults, the
// sieve -> pairs -> graph -> cycles -> augment -> screen sequence with
// per-stage files, skip-on-matching-config resume, the run manifest, and
// report tables of exclusions per theorem indexed by Omega(u).
#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bscan/augment.hpp"

namespace bscan {

struct PipelineConfig {
  Mode mode = Mode::barker;
  BigInt max_u;                  // U: completeness bound on u
  u64 prime_bound = 0;           // P: vertex prime bound; 0 derives floor(cbrt(2U^2))
  BigInt bound_w;                // W: augmentation threshold; 0 derives U
  unsigned omega_cap_turyn = 8;
  unsigned omega_cap_ls1 = 6;
  unsigned workers = 1;
  u64 segment_size = default_segment_size;
  std::filesystem::path checkpoint_dir = ".";
  std::filesystem::path fixture;  // optional graph file replacing the sieve and pair stages
  bool full_ledger = false;
  bool resume = false;  // continue an interrupted pair search
};

// Copy with P and W filled in and the invariants checked: U >= 1, U <= W,
// P >= 3, positive segment size, fixture readable when given. Throws
// std::invalid_argument. Idempotent.
PipelineConfig resolve_config(PipelineConfig config);

// Digest of the output-determining parameters (mode, U, P, W, caps, fixture
// content). Worker count, segment size, ledger verbosity, and paths stay
// out: they cannot change what the stage files contain.
std::string config_hash(const PipelineConfig& config);

enum class Stage { sieve, wieferich, graph, cycles, augment, screen };

std::string_view stage_name(Stage stage);

// checkpoint_dir/{primes.txt, pairs.txt, graph.txt, cycles.txt,
// candidates.csv, screened.csv}
std::filesystem::path stage_file(const PipelineConfig& config, Stage stage);
std::filesystem::path manifest_file(const PipelineConfig& config);

// The annotation stamped as the first line of a stage file (without the
// leading "# bscan "): "stage=<name> config=<hash>".
std::string stage_annotation(const PipelineConfig& config, Stage stage);

// A stage file exists but was written under a different configuration, or
// checkpoint state does not line up with the request (exit code 3 surface).
class ConfigMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs one stage: loads its inputs from earlier stage files (or the
// fixture), writes its own file stamped with the config hash, and returns a
// one-line description. A stage whose file already carries the current
// config hash is skipped; one carrying a different hash throws
// ConfigMismatchError. The sieve and pair stages report "replaced by
// fixture" when one is configured.
std::string run_stage(const PipelineConfig& config, Stage stage);

// One row of exclusion counts for a single Omega(u) class.
struct ReportRow {
  unsigned omega = 0;
  std::size_t initial = 0;
  std::vector<std::size_t> excluded;  // parallel to RunReport::theorems
  std::size_t admissible = 0;
  std::size_t inconclusive = 0;

  bool operator==(const ReportRow& other) const = default;
};

// Exclusions per theorem indexed by Omega(u). Every excluded candidate is
// attributed to its first excluding theorem, so each row satisfies
// initial = sum(excluded) + admissible + inconclusive.
struct RunReport {
  Mode mode = Mode::barker;
  std::vector<Theorem> theorems;  // screen_battery(mode)
  std::vector<ReportRow> rows;    // ascending by omega; only classes present
  ReportRow totals;

  bool operator==(const RunReport& other) const = default;
};

// Tallies a screened candidate list. An excluded candidate whose verdict
// names a theorem outside the mode's battery throws std::runtime_error.
RunReport build_report(const std::vector<CandidateU>& candidates, Mode mode);

// Aligned text table, one line per row plus a totals line.
std::string render_report(const RunReport& report);

// All stages in order, a heartbeat line per stage to `heartbeat` when given,
// then the manifest (key=value lines: parameters, config hash, and the git
// blob digest of every stage file present). Returns the report of the
// screened candidates.
RunReport run_pipeline(const PipelineConfig& config, std::ostream* heartbeat = nullptr);

}  // namespace bscan
