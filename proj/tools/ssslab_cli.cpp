// ssslab: command-line harness for single searches, sweeps, the witness scan
// and the equivalence batch. Exit codes: 0 pass, 1 usage, 2 property violation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssslab/bench.hpp"
#include "ssslab/drivers.hpp"
#include "ssslab/equivalence.hpp"
#include "ssslab/tree_model.hpp"

using namespace ssslab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string tree = "w=2,d=2,seed=1";
  std::string depth;  // empty: the tree's depth
  int id_step = 0;
  std::string tt_bits = "20";
  std::string tt_mode = "lossless";
  std::string ordering;
  std::string seeds;
  std::string csv;
};

TreeSpec parse_tree(const std::string& text) {
  try {
    return TreeSpec::parse(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--tree: ") + e.what());
  }
}

Ordering parse_ordering_flag(const std::string& text, Ordering fallback) {
  if (text.empty()) return fallback;
  if (auto o = parse_ordering(text)) return *o;
  throw UsageError("--ordering must be static, tt-first or history");
}

SeedRange parse_range(const std::string& flag, const std::string& text) {
  try {
    return SeedRange::parse(text);
  } catch (const std::exception& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

int parse_int(const std::string& flag, const std::string& text) {
  const SeedRange r = parse_range(flag, text);
  if (r.first != r.last) throw UsageError(flag + " expects a single value");
  return static_cast<int>(r.first);
}

TableConfig parse_table(const Common& c) {
  if (c.tt_mode == "lossless") return TableConfig::lossless();
  if (c.tt_mode == "bounded") {
    const int bits = parse_int("--tt-bits", c.tt_bits);
    if (bits > 30) throw UsageError("--tt-bits must be in [0, 30]");
    return TableConfig::bounded(bits);
  }
  throw UsageError("--tt-mode must be lossless or bounded");
}

void emit_csv(const Common& c, const std::vector<CsvRow>& rows) {
  if (c.csv.empty()) return;
  std::ofstream out(c.csv);
  if (!out) throw UsageError("cannot write " + c.csv);
  write_csv(out, rows);
}

void print_summary(const std::vector<SummaryPoint>& summary, const std::string& x_name) {
  std::printf("%-10s %-12s %16s %10s\n", x_name.c_str(), "algorithm", "leaf_evals", "rel_pct");
  for (const SummaryPoint& p : summary) {
    std::printf("%-10s %-12s %16llu %9.2f%%\n", p.x.c_str(), p.algorithm.c_str(),
                static_cast<unsigned long long>(p.total_leaf_evals), p.rel_pct);
  }
}

void add_common(CLI::App* cmd, Common& c, bool seeds) {
  cmd->add_option("--tree", c.tree, "tree spec, e.g. w=3,d=6,seed=1,vmax=100,oq=0.5,corr=0,tx=none");
  cmd->add_option("--depth", c.depth, "search depth (a..b for ranges where accepted)");
  cmd->add_option("--id-step", c.id_step, "iterative deepening step (0: fixed depth)");
  cmd->add_option("--tt-bits", c.tt_bits, "table size in bits (a..b for sweeps)");
  cmd->add_option("--tt-mode", c.tt_mode, "lossless or bounded");
  cmd->add_option("--ordering", c.ordering, "static, tt-first or history");
  cmd->add_option("--csv", c.csv, "write CSV rows to this path");
  if (seeds) cmd->add_option("--seeds", c.seeds, "seed range a..b");
}

// --------------------------------------------------------------------------

int cmd_search(const Common& c, const std::string& algo_name, bool verify_oracle, bool assert_appendix,
               bool no_leaf_store) {
  const auto algo = parse_algorithm(algo_name);
  if (!algo) throw UsageError("--algo must be ab, ab-sss, ab-dual or sss-classic");
  const TreeSpec spec = parse_tree(c.tree);
  RunConfig run;
  run.algorithm = *algo;
  run.spec = spec;
  run.depth = c.depth.empty() ? spec.depth : parse_int("--depth", c.depth);
  if (run.depth > spec.depth) throw UsageError("--depth exceeds the tree depth");
  run.id_step = c.id_step;
  run.table = parse_table(c);
  run.ordering = parse_ordering_flag(c.ordering, Ordering::Static);
  run.store_leaves = !no_leaf_store;

  const GameTree tree(spec);
  const CsvRow row = run_single(run, tree);
  std::printf("%s %s depth=%d value=%d passes=%d leaf_evals=%llu interior_visits=%llu\n",
              row.algorithm.c_str(), spec.to_string().c_str(), run.depth, row.value, row.passes,
              static_cast<unsigned long long>(row.leaf_evals),
              static_cast<unsigned long long>(row.interior_visits));
  emit_csv(c, {row});

  int status = kExitPass;
  if (verify_oracle) {
    int expected = 0;
    try {
      expected = minimax_oracle(tree, tree.root(), run.depth);
    } catch (const OracleBudgetExceeded& e) {
      throw UsageError(e.what());
    }
    const bool ok = expected == row.value;
    std::printf("oracle: %d %s\n", expected, ok ? "MATCH" : "MISMATCH");
    if (!ok) status = kExitViolation;
  }
  if (assert_appendix) {
    try {
      const InstrumentedResult inst = instrumented_ab_sss(tree, run.depth);
      const ClassicResult classic = sss_star(tree, run.depth, {true, true});
      const auto step = compare_case_sequences(inst.list_ops, classic.cases);
      std::printf("instrumented: %zu list-ops, %zu checks, lockstep %s\n", inst.list_ops.size(), inst.checks,
                  step ? "DIVERGED" : "OK");
      if (step || inst.value != row.value) status = kExitViolation;
    } catch (const InvariantViolation& e) {
      std::printf("instrumented: VIOLATION %s\n", e.what());
      status = kExitViolation;
    }
  }
  return status;
}

int cmd_sweep_ttbits(const Common& c) {
  TtSweepConfig cfg;
  cfg.base = parse_tree(c.tree);
  cfg.seeds = parse_range("--seeds", c.seeds.empty() ? "1..20" : c.seeds);
  cfg.depth = c.depth.empty() ? cfg.base.depth : parse_int("--depth", c.depth);
  cfg.id_step = c.id_step > 0 ? c.id_step : 1;
  const SeedRange bits = parse_range("--tt-bits", c.tt_bits == "20" ? "6..20" : c.tt_bits);
  if (bits.last > 30) throw UsageError("--tt-bits must be in [0, 30]");
  cfg.bits_min = static_cast<int>(bits.first);
  cfg.bits_max = static_cast<int>(bits.last);
  cfg.ordering = parse_ordering_flag(c.ordering, Ordering::TtFirst);
  const SweepResult r = sweep_ttbits(cfg);
  print_summary(r.summary, "tt_bits");
  emit_csv(c, r.rows);
  return kExitPass;
}

int cmd_sweep_depth(const Common& c) {
  DepthSweepConfig cfg;
  cfg.base = parse_tree(c.tree);
  cfg.seeds = parse_range("--seeds", c.seeds.empty() ? "1..20" : c.seeds);
  const SeedRange depths =
      parse_range("--depth", c.depth.empty() ? "1.." + std::to_string(cfg.base.depth) : c.depth);
  if (static_cast<int>(depths.last) > cfg.base.depth) throw UsageError("--depth exceeds the tree depth");
  cfg.depth_min = static_cast<int>(depths.first);
  cfg.depth_max = static_cast<int>(depths.last);
  cfg.id_step = c.id_step;
  cfg.table = parse_table(c);
  cfg.ordering = parse_ordering_flag(c.ordering, Ordering::TtFirst);
  const SweepResult r = sweep_depth(cfg);
  print_summary(r.summary, "depth");
  emit_csv(c, r.rows);
  return kExitPass;
}

int cmd_find_witness(const Common& c) {
  WitnessConfig cfg;
  cfg.base = parse_tree(c.tree);
  cfg.seeds = parse_range("--seeds", c.seeds.empty() ? "1..10000" : c.seeds);
  cfg.depth = c.depth.empty() ? cfg.base.depth : parse_int("--depth", c.depth);
  cfg.id_step = c.id_step;
  cfg.ordering = parse_ordering_flag(c.ordering, Ordering::History);
  cfg.table = parse_table(c);
  const WitnessResult w = find_witness(cfg);
  if (w.found) {
    std::printf("WITNESS %s depth=%d ab=%llu ab-sss=%llu scanned=%llu\n", w.spec.to_string().c_str(), cfg.depth,
                static_cast<unsigned long long>(w.ab_leaf_evals), static_cast<unsigned long long>(w.sss_leaf_evals),
                static_cast<unsigned long long>(w.seeds_scanned));
  } else {
    std::printf("NOT_FOUND scanned=%llu\n", static_cast<unsigned long long>(w.seeds_scanned));
  }
  emit_csv(c, w.rows);
  return kExitPass;
}

int cmd_equivalence(const Common& c, bool assert_appendix, bool allow_lossy) {
  EquivalenceConfig cfg;
  cfg.base = parse_tree(c.tree);
  cfg.seeds = parse_range("--seeds", c.seeds.empty() ? "1..1000" : c.seeds);
  cfg.table = parse_table(c);
  cfg.allow_lossy = allow_lossy;
  cfg.assert_appendix = assert_appendix;
  if (cfg.table.mode == TableMode::Bounded && !allow_lossy) {
    throw UsageError("equivalence requires --tt-mode lossless (or --allow-lossy)");
  }
  const EquivalenceReport report = run_equivalence(cfg);

  if (!c.csv.empty()) {
    std::vector<CsvRow> rows;
    for (std::uint64_t s = cfg.seeds.first; s <= cfg.seeds.last; ++s) {
      const TreeSpec spec = equivalence_spec(cfg, s);
      const GameTree tree(spec);
      for (Algorithm a : {Algorithm::AbSss, Algorithm::SssClassic}) {
        rows.push_back(run_single({a, spec, spec.depth, 0, cfg.table, Ordering::Static, true}, tree));
      }
    }
    emit_csv(c, rows);
  }

  if (report.passed()) {
    std::printf("PASS trees=%llu instrumented_runs=%llu\n", static_cast<unsigned long long>(report.trees),
                static_cast<unsigned long long>(report.instrumented_runs));
    return kExitPass;
  }
  std::printf("FAIL %s\n  %s\n", report.failing_spec->to_string().c_str(), report.failure->c_str());
  return kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ssslab: SSS* / Alpha-Beta search laboratory"};
  app.require_subcommand(1);

  Common common;
  std::string algo = "ab-sss";
  bool verify_oracle = false;
  bool assert_appendix = false;
  bool allow_lossy = false;
  bool no_leaf_store = false;

  auto* search = app.add_subcommand("search", "run one search");
  add_common(search, common, false);
  search->add_option("--algo", algo, "ab, ab-sss, ab-dual or sss-classic");
  search->add_flag("--verify-oracle", verify_oracle, "compare with the brute-force value");
  search->add_flag("--assert-appendix", assert_appendix, "run the instrumented LIST checks");
  search->add_flag("--no-leaf-store", no_leaf_store, "do not store leaf results in the table");

  auto* ttbits = app.add_subcommand("sweep-ttbits", "leaf counts against table size");
  add_common(ttbits, common, true);
  auto* depth = app.add_subcommand("sweep-depth", "leaf counts against search depth");
  add_common(depth, common, true);
  auto* witness = app.add_subcommand("find-witness", "scan seeds for AB beating AB-SSS*");
  add_common(witness, common, true);
  auto* equiv = app.add_subcommand("equivalence", "trace equivalence of AB-SSS* and SSS*");
  add_common(equiv, common, true);
  equiv->add_flag("--assert-appendix", assert_appendix, "also run the instrumented LIST lockstep");
  equiv->add_flag("--allow-lossy", allow_lossy, "permit a bounded table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*search) return cmd_search(common, algo, verify_oracle, assert_appendix, no_leaf_store);
    if (*ttbits) return cmd_sweep_ttbits(common);
    if (*depth) return cmd_sweep_depth(common);
    if (*witness) return cmd_find_witness(common);
    if (*equiv) return cmd_equivalence(common, assert_appendix, allow_lossy);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::logic_error& e) {
    std::fprintf(stderr, "violation: %s\n", e.what());
    return kExitViolation;
  }
  return kExitUsage;
}
