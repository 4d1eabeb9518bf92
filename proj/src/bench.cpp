#include "ssslab/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <thread>

#include "ssslab/equivalence.hpp"

namespace ssslab {

std::string csv_header() {
  return "algorithm,seed,w,d,tt_bits,ordering_quality,id_step,value,passes,leaf_evals,interior_visits,"
         "tt_probes,tt_hits,tt_cutoffs,peak_open_list,elapsed_ns";
}

std::string to_csv(const CsvRow& r) {
  char oq[32];
  std::snprintf(oq, sizeof oq, "%g", r.ordering_quality);
  std::string s;
  s += r.algorithm;
  for (const std::string& field :
       {std::to_string(r.seed), std::to_string(r.w), std::to_string(r.d), r.tt_bits, std::string(oq),
        std::to_string(r.id_step), std::to_string(r.value), std::to_string(r.passes),
        std::to_string(r.leaf_evals), std::to_string(r.interior_visits), std::to_string(r.tt_probes),
        std::to_string(r.tt_hits), std::to_string(r.tt_cutoffs), std::to_string(r.peak_open_list),
        std::to_string(r.elapsed_ns)}) {
    s += ',';
    s += field;
  }
  return s;
}

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
  out << csv_header() << '\n';
  for (const CsvRow& r : rows) out << to_csv(r) << '\n';
}

std::string table_label(const TableConfig& config) {
  return config.mode == TableMode::Lossless ? "lossless" : std::to_string(config.bits);
}

SeedRange SeedRange::parse(const std::string& text) {
  auto number = [&](std::string_view part) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size() || part.empty()) {
      throw std::invalid_argument("bad seed range '" + text + "' (expected a..b)");
    }
    return v;
  };
  const std::string_view view(text);
  const auto dots = view.find("..");
  SeedRange r;
  if (dots == std::string_view::npos) {
    r.first = r.last = number(view);
  } else {
    r.first = number(view.substr(0, dots));
    r.last = number(view.substr(dots + 2));
  }
  if (r.last < r.first) throw std::invalid_argument("bad seed range '" + text + "' (empty)");
  return r;
}

CsvRow run_single(const RunConfig& config, const GameTree& tree) {
  TranspositionTable table(config.table);
  HistoryTable history;
  SearchOptions options;
  options.ordering = config.ordering;
  options.store_leaves = config.store_leaves;
  options.history = &history;

  CsvRow row;
  row.algorithm = std::string(to_string(config.algorithm));
  row.seed = tree.spec().seed;
  row.w = tree.spec().width;
  row.d = config.depth;
  row.tt_bits = table_label(config.table);
  row.ordering_quality = tree.spec().ordering_quality;
  row.id_step = config.id_step;

  SearchCounters counters;
  if (config.id_step > 0) {
    const auto iterations =
        run_iterative_deepening(config.algorithm, tree, config.depth, config.id_step, table, options);
    for (const IterationResult& it : iterations) {
      row.passes += it.iteration.passes;
      row.peak_open_list = std::max<std::uint64_t>(row.peak_open_list, it.iteration.peak_open_list);
    }
    row.value = iterations.back().iteration.value;
    counters = iterations.back().cumulative;
  } else {
    const DriverResult r = run_fixed_depth(config.algorithm, tree, config.depth, table, options);
    row.value = r.value;
    row.passes = r.passes;
    row.peak_open_list = r.peak_open_list;
    counters = r.counters;
  }
  row.leaf_evals = counters.leaf_evals;
  row.interior_visits = counters.interior_visits;
  row.tt_probes = counters.tt_probes;
  row.tt_hits = counters.tt_hits;
  row.tt_cutoffs = counters.tt_cutoffs;
  row.elapsed_ns = counters.elapsed_ns;
  return row;
}

CsvRow run_single(const RunConfig& config) {
  const GameTree tree(config.spec);
  return run_single(config, tree);
}

namespace {

// Runs job(i) for i in [0, n) on a few threads; results land by index so the
// output order never depends on scheduling.
template <typename Job>
void parallel_for(std::size_t n, Job job) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), n));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      if (failed) return;
      try {
        job(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<SummaryPoint> summarize(const std::vector<CsvRow>& rows, const std::vector<std::string>& xs,
                                    const std::vector<Algorithm>& algorithms,
                                    std::string (*x_of)(const CsvRow&)) {
  std::map<std::pair<std::string, std::string>, std::uint64_t> totals;
  for (const CsvRow& r : rows) totals[{x_of(r), r.algorithm}] += r.leaf_evals;
  std::vector<SummaryPoint> out;
  for (const std::string& x : xs) {
    const std::uint64_t base = totals[{x, std::string(to_string(Algorithm::WideAb))}];
    for (Algorithm a : algorithms) {
      SummaryPoint p;
      p.algorithm = std::string(to_string(a));
      p.x = x;
      p.total_leaf_evals = totals[{x, p.algorithm}];
      p.rel_pct = base == 0 ? 0.0 : 100.0 * static_cast<double>(p.total_leaf_evals) / static_cast<double>(base);
      out.push_back(p);
    }
  }
  return out;
}

std::string bits_of(const CsvRow& r) { return r.tt_bits; }
std::string depth_of(const CsvRow& r) { return std::to_string(r.d); }

}  // namespace

SweepResult sweep_ttbits(const TtSweepConfig& config) {
  if (config.bits_min > config.bits_max) throw std::invalid_argument("empty tt_bits range");
  std::vector<TableConfig> tables;
  for (int b = config.bits_min; b <= config.bits_max; ++b) tables.push_back(TableConfig::bounded(b));
  if (config.include_lossless) tables.push_back(TableConfig::lossless());

  const std::size_t per_seed = tables.size() * config.algorithms.size();
  const std::size_t n_seeds = static_cast<std::size_t>(config.seeds.count());
  std::vector<CsvRow> rows(n_seeds * per_seed);
  parallel_for(n_seeds, [&](std::size_t s) {
    TreeSpec spec = config.base;
    spec.seed = config.seeds.first + s;
    const GameTree tree(spec);
    std::size_t k = 0;
    for (const TableConfig& table : tables) {
      for (Algorithm a : config.algorithms) {
        RunConfig run{a, spec, config.depth, config.id_step, table, config.ordering, true};
        rows[s * per_seed + k++] = run_single(run, tree);
      }
    }
  });
  // Emit grouped by table size, then seed.
  std::vector<CsvRow> ordered;
  ordered.reserve(rows.size());
  std::vector<std::string> xs;
  for (std::size_t t = 0; t < tables.size(); ++t) {
    xs.push_back(table_label(tables[t]));
    for (std::size_t s = 0; s < n_seeds; ++s) {
      for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
        ordered.push_back(rows[s * per_seed + t * config.algorithms.size() + a]);
      }
    }
  }
  SweepResult result;
  result.summary = summarize(ordered, xs, config.algorithms, bits_of);
  result.rows = std::move(ordered);
  return result;
}

SweepResult sweep_depth(const DepthSweepConfig& config) {
  if (config.depth_min > config.depth_max) throw std::invalid_argument("empty depth range");
  const std::size_t n_depths = static_cast<std::size_t>(config.depth_max - config.depth_min + 1);
  const std::size_t per_seed = n_depths * config.algorithms.size();
  const std::size_t n_seeds = static_cast<std::size_t>(config.seeds.count());
  std::vector<CsvRow> rows(n_seeds * per_seed);
  parallel_for(n_seeds, [&](std::size_t s) {
    std::size_t k = 0;
    for (int d = config.depth_min; d <= config.depth_max; ++d) {
      // One tree per depth so the ordering model is calibrated at the horizon.
      TreeSpec spec = config.base;
      spec.seed = config.seeds.first + s;
      spec.depth = d;
      const GameTree tree(spec);
      for (Algorithm a : config.algorithms) {
        RunConfig run{a, spec, d, config.id_step, config.table, config.ordering, true};
        rows[s * per_seed + k++] = run_single(run, tree);
      }
    }
  });
  std::vector<CsvRow> ordered;
  std::vector<std::string> xs;
  for (std::size_t di = 0; di < n_depths; ++di) {
    xs.push_back(std::to_string(config.depth_min + static_cast<int>(di)));
    for (std::size_t s = 0; s < n_seeds; ++s) {
      for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
        ordered.push_back(rows[s * per_seed + di * config.algorithms.size() + a]);
      }
    }
  }
  SweepResult result;
  result.summary = summarize(ordered, xs, config.algorithms, depth_of);
  result.rows = std::move(ordered);
  return result;
}

WitnessResult find_witness(const WitnessConfig& config) {
  WitnessResult out;
  for (std::uint64_t seed = config.seeds.first; seed <= config.seeds.last; ++seed) {
    TreeSpec spec = config.base;
    spec.seed = seed;
    const GameTree tree(spec);
    const RunConfig ab{Algorithm::WideAb, spec, config.depth, config.id_step, config.table, config.ordering, true};
    RunConfig sss = ab;
    sss.algorithm = Algorithm::AbSss;
    const CsvRow ab_row = run_single(ab, tree);
    const CsvRow sss_row = run_single(sss, tree);
    ++out.seeds_scanned;
    if (ab_row.leaf_evals < sss_row.leaf_evals) {
      out.found = true;
      out.spec = spec;
      out.ab_leaf_evals = ab_row.leaf_evals;
      out.sss_leaf_evals = sss_row.leaf_evals;
      out.rows = {ab_row, sss_row};
      return out;
    }
  }
  return out;
}

TreeSpec equivalence_spec(const EquivalenceConfig& config, std::uint64_t seed) {
  if (config.widths.empty() || config.depths.empty()) throw std::invalid_argument("empty width/depth list");
  TreeSpec spec = config.base;
  spec.seed = seed;
  spec.width = config.widths[seed % config.widths.size()];
  spec.depth = config.depths[(seed / config.widths.size()) % config.depths.size()];
  return spec;
}

EquivalenceReport run_equivalence(const EquivalenceConfig& config) {
  if (config.table.mode == TableMode::Bounded && !config.allow_lossy) {
    throw std::invalid_argument("equivalence requires a lossless table (pass --allow-lossy to override)");
  }
  EquivalenceReport report;
  for (std::uint64_t seed = config.seeds.first; seed <= config.seeds.last; ++seed) {
    const TreeSpec spec = equivalence_spec(config, seed);
    const GameTree tree(spec);
    ++report.trees;

    Trace ab_trace;
    TranspositionTable table(config.table);
    SearchOptions options;
    options.trace = &ab_trace;
    const DriverResult ab = run_ab_sss(tree, spec.depth, table, options);
    ClassicOptions classic_options;
    classic_options.record_cases = config.assert_appendix;
    const ClassicResult classic = sss_star(tree, spec.depth, classic_options);

    auto fail = [&](std::string message) {
      report.failure = std::move(message);
      report.failing_spec = spec;
      return report;
    };
    if (auto d = compare_traces(ab_trace, classic.trace)) return fail(describe(*d));
    if (ab.value != classic.value) {
      return fail("values differ: ab-sss " + std::to_string(ab.value) + " vs sss-classic " +
                  std::to_string(classic.value));
    }
    if (!config.assert_appendix) continue;

    try {
      const InstrumentedResult inst = instrumented_ab_sss(tree, spec.depth);
      ++report.instrumented_runs;
      if (auto step = compare_case_sequences(inst.list_ops, classic.cases)) {
        auto show = [](const auto& seq, std::size_t i) -> std::string {
          if (i >= seq.size()) return "<end>";
          return to_string(seq[i].gamma_case) + " on " + seq[i].node.path_string();
        };
        return fail("List-op sequence diverges from SSS* cases at step " + std::to_string(*step) + ": " +
                    show(inst.list_ops, *step) + " vs " + show(classic.cases, *step));
      }
      if (auto d = compare_traces(inst.trace, classic.trace)) return fail("instrumented run: " + describe(*d));
      if (inst.value != ab.value) return fail("instrumented value differs from ab-sss value");
    } catch (const InvariantViolation& e) {
      return fail(e.what());
    }
  }
  return report;
}

}  // namespace ssslab
