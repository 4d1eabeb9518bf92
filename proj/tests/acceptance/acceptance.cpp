// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "ssslab/bench.hpp"
#include "ssslab/equivalence.hpp"

using namespace ssslab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Options {
  std::string cli;
  std::string golden;
  std::set<int> only;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::set<std::vector<std::uint8_t>> leaf_set(const Trace& t) {
  std::set<std::vector<std::uint8_t>> s;
  for (const auto& e : t) s.emplace(e.node.path().begin(), e.node.path().end());
  return s;
}

// Trees with w^d <= 4096 drawn from a seeded stream, with a mix of value
// ranges, ordering strengths, correlations and transposition modes.
std::vector<TreeSpec> small_trees(std::size_t count, std::uint64_t stream, bool allow_transpositions) {
  std::mt19937_64 rng(stream);
  std::vector<TreeSpec> out;
  while (out.size() < count) {
    TreeSpec s;
    s.width = 2 + static_cast<int>(rng() % 5);
    s.depth = static_cast<int>(rng() % 9);
    if (saturating_power(s.width, s.depth) > 4096) continue;
    s.seed = rng() % 1000000;
    s.value_max = std::array{3, 10, 100, 1000}[rng() % 4];
    s.ordering_quality = std::array{0.0, 0.5, 0.9, 1.0}[rng() % 4];
    s.correlation = std::array{0.0, 0.5, 0.9}[rng() % 3];
    if (allow_transpositions && rng() % 4 == 0) s.transpositions = TranspositionModel::Commutative;
    out.push_back(s);
  }
  return out;
}

Outcome oracle_correctness() {
  const auto start = Clock::now();
  const auto trees = small_trees(1000, 1, true);
  std::size_t mismatches = 0;
  std::string first;
  for (const TreeSpec& s : trees) {
    const GameTree tree(s);
    const int f = oracle::root_value(tree, s.depth);
    for (Algorithm a : {Algorithm::WideAb, Algorithm::AbSss, Algorithm::AbDual, Algorithm::SssClassic}) {
      TranspositionTable table(TableConfig::lossless());
      const int v = run_fixed_depth(a, tree, s.depth, table).value;
      if (v != f) {
        if (mismatches++ == 0) first = fmt(" first: %s %s", std::string(to_string(a)).c_str(), s.to_string().c_str());
      }
    }
  }
  const double t = seconds_since(start);
  return {mismatches == 0 && t < 60.0,
          fmt("%zu trees x 4 algorithms, %zu mismatches, %.1f s (limit 60 s)%s", trees.size(), mismatches, t,
              first.c_str())};
}

Outcome trace_equivalence() {
  const auto start = Clock::now();
  EquivalenceConfig cfg;
  cfg.seeds = {1, 1000};
  const EquivalenceReport r = run_equivalence(cfg);
  const double t = seconds_since(start);
  return {r.passed() && r.trees >= 1000 && t < 120.0,
          fmt("%llu trees (w 2..3, d 2..6), %s, %.1f s (limit 120 s)", static_cast<unsigned long long>(r.trees),
              r.passed() ? "0 divergences" : r.failure->c_str(), t)};
}

Outcome instrumented_lockstep() {
  const auto start = Clock::now();
  std::size_t trees = 0, failures = 0;
  std::uint64_t checks = 0, ops = 0;
  std::string first;
  EquivalenceConfig shape;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    TreeSpec s = equivalence_spec(shape, seed);
    s.seed = seed;
    s.value_max = seed % 3 == 0 ? 5 : 100;
    const GameTree tree(s);
    ++trees;
    try {
      const InstrumentedResult r = instrumented_ab_sss(tree, s.depth);
      ClassicOptions o;
      o.record_cases = true;
      const ClassicResult c = sss_star(tree, s.depth, o);
      checks += r.checks;
      ops += r.list_ops.size();
      if (compare_case_sequences(r.list_ops, c.cases) || compare_traces(r.trace, c.trace) || r.value != c.value) {
        if (failures++ == 0) first = " first mismatch: " + s.to_string();
      }
    } catch (const InvariantViolation& e) {
      if (failures++ == 0) first = std::string(" first violation: ") + e.what();
    }
  }
  return {failures == 0 && trees >= 200,
          fmt("%zu trees, %llu list operations, %llu runtime checks, %zu failures, %.1f s%s", trees,
              static_cast<unsigned long long>(ops), static_cast<unsigned long long>(checks), failures,
              seconds_since(start), first.c_str())};
}

Outcome static_dominance() {
  const auto trees = small_trees(1000, 4, false);
  std::size_t violations = 0;
  for (const TreeSpec& s : trees) {
    const GameTree tree(s);
    TranspositionTable t1(TableConfig::lossless());
    TranspositionTable t2(TableConfig::lossless());
    if (run_ab_sss(tree, s.depth, t1).counters.leaf_evals > run_wide_ab(tree, s.depth, t2).counters.leaf_evals)
      ++violations;
  }
  return {violations == 0, fmt("%zu instances, %zu violations", trees.size(), violations)};
}

Outcome witness() {
  const auto start = Clock::now();
  WitnessConfig cfg;
  cfg.base = TreeSpec::parse("w=3,d=6");
  cfg.depth = 6;
  cfg.seeds = {1, 10000};
  const WitnessResult w = find_witness(cfg);
  const WitnessResult again = find_witness(cfg);
  const bool repeat = again.found == w.found && again.spec == w.spec && again.ab_leaf_evals == w.ab_leaf_evals &&
                      again.sss_leaf_evals == w.sss_leaf_evals;

  WitnessConfig control = cfg;
  control.id_step = 0;
  control.ordering = Ordering::Static;
  const WitnessResult none = find_witness(control);

  std::string found = w.found ? fmt("witness %s ab=%llu ab-sss=%llu", w.spec.to_string().c_str(),
                                    static_cast<unsigned long long>(w.ab_leaf_evals),
                                    static_cast<unsigned long long>(w.sss_leaf_evals))
                              : std::string("no witness");
  return {w.found && repeat && !none.found,
          fmt("%s after %llu seeds, rerun %s; static control %s over %llu seeds, %.1f s", found.c_str(),
              static_cast<unsigned long long>(w.seeds_scanned), repeat ? "identical" : "DIFFERS",
              none.found ? "FOUND ONE" : "found none", static_cast<unsigned long long>(none.seeds_scanned),
              seconds_since(start))};
}

Outcome solution_tree_sizes() {
  std::size_t cells = 0, bad = 0;
  std::string first;
  for (int w = 2; w <= 4; ++w) {
    for (int d = 2; d <= 6; ++d) {
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        TreeSpec s;
        s.width = w;
        s.depth = d;
        s.seed = seed * 131 + static_cast<std::uint64_t>(w * 10 + d);
        const GameTree tree(s);
        TranspositionTable t1(TableConfig::lossless());
        AlphaBeta up(tree, t1);
        (void)up.search(tree.root(), {kInf - 1, kInf}, d);
        TranspositionTable t2(TableConfig::lossless());
        AlphaBeta down(tree, t2);
        (void)down.search(tree.root(), {-kInf, -kInf + 1}, d);
        ++cells;
        const auto max_tree = oracle::solution_tree_leaves(w, d, true);
        const auto min_tree = oracle::solution_tree_leaves(w, d, false);
        if (up.counters().leaf_evals != max_tree || down.counters().leaf_evals != min_tree) {
          if (bad++ == 0) first = fmt(" first: w=%d d=%d", w, d);
        }
      }
    }
  }
  return {bad == 0, fmt("%zu trees over w 2..4 x d 2..6, %zu size mismatches%s", cells, bad, first.c_str())};
}

Outcome perfect_ordering() {
  std::size_t n = 0, bad = 0;
  for (std::uint64_t seed = 1; n < 150; ++seed) {
    TreeSpec s;
    s.width = 2 + static_cast<int>(seed % 4);
    s.depth = 1 + static_cast<int>(seed % 6);
    if (saturating_power(s.width, s.depth) > 4096) continue;
    s.seed = seed;
    s.ordering_quality = 1.0;
    const GameTree tree(s);
    ++n;
    if (leaf_set(record_trace(Algorithm::WideAb, tree, s.depth)) !=
        leaf_set(record_trace(Algorithm::AbSss, tree, s.depth)))
      ++bad;
  }
  return {bad == 0, fmt("%zu instances with oq=1, %zu leaf-set differences", n, bad)};
}

Outcome table_size_shape() {
  const auto start = Clock::now();
  TtSweepConfig cfg;
  cfg.base = TreeSpec::parse("w=8,d=8,oq=0.9,corr=0.8");
  cfg.seeds = {1, 20};
  cfg.depth = 8;
  cfg.id_step = 1;
  const SweepResult r = sweep_ttbits(cfg);
  const double t = seconds_since(start);

  std::map<std::string, std::map<std::string, SummaryPoint>> at;  // x -> algorithm -> point
  for (const SummaryPoint& p : r.summary) at[p.x][p.algorithm] = p;

  const double smallest = at[std::to_string(cfg.bits_min)]["ab-sss"].rel_pct;
  std::vector<double> top;
  const int mid = (cfg.bits_min + cfg.bits_max + 1) / 2;
  for (int b = mid; b <= cfg.bits_max; ++b) top.push_back(at[std::to_string(b)]["ab-sss"].rel_pct);
  double mean = 0, var = 0;
  for (double v : top) mean += v;
  mean /= static_cast<double>(top.size());
  for (double v : top) var += (v - mean) * (v - mean);
  const double cv = std::sqrt(var / static_cast<double>(top.size())) / mean;

  std::size_t below_floor = 0;
  for (int b = cfg.bits_min; b <= cfg.bits_max; ++b) {
    for (const auto& [name, p] : at[std::to_string(b)]) {
      if (p.total_leaf_evals < at["lossless"][name].total_leaf_evals) ++below_floor;
    }
  }
  const bool a = smallest > 100.0, b = cv < 0.20, c = below_floor == 0;
  return {a && b && c && t < 600.0,
          fmt("(a) %.0f%% at %d bits [%s] (b) stddev/mean %.3f over bits %d..%d [%s] (c) %zu points below "
              "lossless [%s]; lossless %.1f%%; %.1f s (limit 600 s)",
              smallest, cfg.bits_min, a ? "ok" : "FAIL", cv, mid, cfg.bits_max, b ? "ok" : "FAIL", below_floor,
              c ? "ok" : "FAIL", at["lossless"]["ab-sss"].rel_pct, t)};
}

Outcome knuth_moore() {
  std::mt19937_64 rng(2024);
  std::size_t probes = 0, violations = 0;
  const auto trees = small_trees(2000, 9, true);
  for (const TreeSpec& s : trees) {
    const GameTree tree(s);
    const int f = oracle::root_value(tree, s.depth);
    // Several windows against one table, so later probes meet stored bounds.
    TranspositionTable table(rng() % 3 == 0 ? TableConfig::bounded(4) : TableConfig::lossless());
    SearchOptions o;
    o.ordering = static_cast<Ordering>(rng() % 3);
    HistoryTable history;
    o.history = &history;
    AlphaBeta ab(tree, table, o);
    for (int k = 0; k < 5; ++k) {
      const int span = s.value_max + 2;
      int a = static_cast<int>(rng() % static_cast<std::uint64_t>(2 * span)) - span;
      int b = a + 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(span));
      if (rng() % 10 == 0) a = -kInf;
      if (rng() % 10 == 0) b = kInf;
      const int g = ab.search(tree.root(), {a, b}, s.depth);
      ++probes;
      const bool ok = g <= a ? f <= g : g >= b ? f >= g : f == g;
      if (!ok) ++violations;
    }
  }
  return {violations == 0 && probes >= 10000, fmt("%zu probes, %zu violations", probes, violations)};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string mask_elapsed(const std::string& csv) {
  static const std::regex last_field(",[0-9]+$", std::regex::multiline);
  return std::regex_replace(csv, last_field, ",0");
}

Outcome determinism(const Options& opts) {
  // Library level: sweeps rerun to identical rows.
  TtSweepConfig tt;
  tt.base = TreeSpec::parse("w=4,d=5");
  tt.seeds = {1, 4};
  tt.depth = 5;
  tt.bits_min = 4;
  tt.bits_max = 7;
  auto rows_text = [](std::vector<CsvRow> rows) {
    for (CsvRow& r : rows) r.elapsed_ns = 0;
    std::ostringstream os;
    write_csv(os, rows);
    return os.str();
  };
  const bool lib_ok = rows_text(sweep_ttbits(tt).rows) == rows_text(sweep_ttbits(tt).rows);

  if (opts.cli.empty() || opts.golden.empty()) return {false, "CLI or golden directory not given"};
  const fs::path work = fs::temp_directory_path() / "ssslab_acceptance";
  fs::create_directories(work);
  std::ifstream list(fs::path(opts.golden) / "commands.txt");
  std::string line;
  std::size_t commands = 0;
  std::vector<std::string> bad;
  while (std::getline(list, line)) {
    const auto colon = line.find(':');
    if (line.empty() || line[0] == '#' || colon == std::string::npos) continue;
    const std::string name = line.substr(0, colon);
    const std::string args = line.substr(colon + 1);
    ++commands;
    std::string outs[2], csvs[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path csv = work / (name + ".csv");
      const fs::path out = work / (name + ".out");
      const std::string cmd =
          "\"" + opts.cli + "\"" + args + " --csv \"" + csv.string() + "\" > \"" + out.string() + "\"";
      if (std::system(cmd.c_str()) != 0) bad.push_back(name + " (exit)");
      outs[run] = read_file(out);
      csvs[run] = mask_elapsed(read_file(csv));
    }
    if (outs[0] != outs[1] || csvs[0] != csvs[1]) bad.push_back(name + " (rerun)");
    if (outs[0] != read_file(fs::path(opts.golden) / (name + ".out")) ||
        csvs[0] != read_file(fs::path(opts.golden) / (name + ".csv")))
      bad.push_back(name + " (golden)");
  }
  std::string which;
  for (const auto& b : bad) which += " " + b;
  return {lib_ok && bad.empty() && commands >= 5,
          fmt("library rerun %s; %zu CLI commands rerun and compared to golden CSV/stdout, %zu mismatches%s",
              lib_ok ? "identical" : "DIFFERS", commands, bad.size(), which.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  Options opts;
  CLI::App app{"acceptance criteria"};
  app.add_option("--cli", opts.cli, "path to the ssslab binary");
  app.add_option("--golden", opts.golden, "directory holding commands.txt and golden outputs");
  app.add_option("--only", opts.only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"correctness vs oracle", oracle_correctness},
      {"AB-SSS* / SSS* trace equivalence", trace_equivalence},
      {"instrumented list-operation lockstep", instrumented_lockstep},
      {"static dominance", static_dominance},
      {"non-dominance witness under ID + history", witness},
      {"first-pass solution tree sizes", solution_tree_sizes},
      {"perfect ordering leaf sets", perfect_ordering},
      {"table-size sweep shape (w=8, d=8)", table_size_shape},
      {"Knuth-Moore return contract fuzz", knuth_moore},
      {"determinism and golden CSVs", [&] { return determinism(opts); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!opts.only.empty() && !opts.only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
