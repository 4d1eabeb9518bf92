#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ssslab/drivers.hpp"
#include "ssslab/search_ab.hpp"
#include "ssslab/tree_model.hpp"
#include "ssslab/ttable.hpp"

namespace ssslab {

// One CSV record. tt_bits is "lossless" for the exact-map table.
struct CsvRow {
  std::string algorithm;
  std::uint64_t seed = 0;
  int w = 0;
  int d = 0;
  std::string tt_bits;
  double ordering_quality = 0.0;
  int id_step = 0;  // 0: fixed depth
  int value = 0;
  int passes = 0;
  std::uint64_t leaf_evals = 0;
  std::uint64_t interior_visits = 0;
  std::uint64_t tt_probes = 0;
  std::uint64_t tt_hits = 0;
  std::uint64_t tt_cutoffs = 0;
  std::uint64_t peak_open_list = 0;
  std::uint64_t elapsed_ns = 0;
};

std::string csv_header();
std::string to_csv(const CsvRow& row);
void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);

std::string table_label(const TableConfig& config);

struct RunConfig {
  Algorithm algorithm = Algorithm::AbSss;
  TreeSpec spec;
  int depth = 0;
  int id_step = 0;  // 0: one fixed-depth search
  TableConfig table = TableConfig::lossless();
  Ordering ordering = Ordering::Static;
  bool store_leaves = true;
};

// Runs one search on a fresh table. With id_step > 0 the row carries the
// cumulative counters of every iteration and the passes of all of them.
CsvRow run_single(const RunConfig& config);
// Same, on an already generated tree.
CsvRow run_single(const RunConfig& config, const GameTree& tree);

struct SeedRange {
  std::uint64_t first = 1;
  std::uint64_t last = 1;
  static SeedRange parse(const std::string& text);  // "a..b" or "a"
  std::uint64_t count() const { return last - first + 1; }
};

// Batch total of one algorithm at one sweep point, relative to wide AB.
struct SummaryPoint {
  std::string algorithm;
  std::string x;  // tt_bits label or depth
  std::uint64_t total_leaf_evals = 0;
  double rel_pct = 0.0;
};

struct SweepResult {
  std::vector<CsvRow> rows;
  std::vector<SummaryPoint> summary;
};

struct TtSweepConfig {
  TreeSpec base;  // seed is replaced per run
  SeedRange seeds;
  int depth = 0;
  int id_step = 1;
  int bits_min = 6;
  int bits_max = 20;
  bool include_lossless = true;
  Ordering ordering = Ordering::TtFirst;
  std::vector<Algorithm> algorithms{Algorithm::WideAb, Algorithm::AbSss, Algorithm::AbDual};
};

SweepResult sweep_ttbits(const TtSweepConfig& config);

struct DepthSweepConfig {
  TreeSpec base;
  SeedRange seeds;
  int depth_min = 2;
  int depth_max = 6;
  int id_step = 1;  // 0: fixed depth
  TableConfig table = TableConfig::lossless();
  Ordering ordering = Ordering::TtFirst;
  std::vector<Algorithm> algorithms{Algorithm::WideAb, Algorithm::AbSss, Algorithm::AbDual};
};

SweepResult sweep_depth(const DepthSweepConfig& config);

struct WitnessConfig {
  TreeSpec base;  // w=3 by default scan order
  SeedRange seeds{1, 10000};
  int depth = 0;
  int id_step = 1;  // 0: fixed depth (negative control)
  Ordering ordering = Ordering::History;
  TableConfig table = TableConfig::lossless();
};

struct WitnessResult {
  bool found = false;
  TreeSpec spec;
  std::uint64_t ab_leaf_evals = 0;
  std::uint64_t sss_leaf_evals = 0;
  std::uint64_t seeds_scanned = 0;
  std::vector<CsvRow> rows;  // the two rows of the witness
};

// First seed where wide AB evaluates strictly fewer leaves than AB-SSS*.
WitnessResult find_witness(const WitnessConfig& config);

struct EquivalenceConfig {
  TreeSpec base;  // width and depth are replaced per seed
  SeedRange seeds{1, 1000};
  std::vector<int> widths{2, 3};
  std::vector<int> depths{2, 3, 4, 5, 6};
  TableConfig table = TableConfig::lossless();
  bool allow_lossy = false;
  bool assert_appendix = false;
};

struct EquivalenceReport {
  std::uint64_t trees = 0;
  std::uint64_t instrumented_runs = 0;
  std::optional<std::string> failure;  // first divergence or violation
  std::optional<TreeSpec> failing_spec;
  bool passed() const { return !failure.has_value(); }
};

// Tree for a seed: width and depth cycle through the configured lists.
TreeSpec equivalence_spec(const EquivalenceConfig& config, std::uint64_t seed);

// Throws std::invalid_argument for a bounded table without allow_lossy.
EquivalenceReport run_equivalence(const EquivalenceConfig& config);

}  // namespace ssslab
