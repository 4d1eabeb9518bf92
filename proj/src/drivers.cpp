#include "ssslab/drivers.hpp"

#include <stdexcept>

#include "ssslab/sss_classic.hpp"

namespace ssslab {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::WideAb: return "ab";
    case Algorithm::AbSss: return "ab-sss";
    case Algorithm::AbDual: return "ab-dual";
    case Algorithm::SssClassic: return "sss-classic";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view s) {
  if (s == "ab") return Algorithm::WideAb;
  if (s == "ab-sss") return Algorithm::AbSss;
  if (s == "ab-dual") return Algorithm::AbDual;
  if (s == "sss-classic") return Algorithm::SssClassic;
  return std::nullopt;
}

DriverResult run_ab_sss(AlphaBeta& session, int depth) {
  const SearchCounters before = session.counters();
  const NodeRef root = session.tree().root();
  DriverResult r;
  int g = kInf;
  int gamma;
  do {
    gamma = g;
    r.bound_sequence.push_back(gamma);
    g = session.search(root, {gamma - 1, gamma}, depth);
    ++r.passes;
  } while (g != gamma);
  r.value = g;
  r.counters = session.counters() - before;
  return r;
}

DriverResult run_ab_dual(AlphaBeta& session, int depth) {
  const SearchCounters before = session.counters();
  const NodeRef root = session.tree().root();
  DriverResult r;
  int g = -kInf;
  int gamma;
  do {
    gamma = g;
    r.bound_sequence.push_back(gamma);
    g = session.search(root, {gamma, gamma + 1}, depth);
    ++r.passes;
  } while (g != gamma);
  r.value = g;
  r.counters = session.counters() - before;
  return r;
}

DriverResult run_wide_ab(AlphaBeta& session, int depth) {
  const SearchCounters before = session.counters();
  DriverResult r;
  r.value = session.search(session.tree().root(), {-kInf, kInf}, depth);
  r.passes = 1;
  r.counters = session.counters() - before;
  return r;
}

DriverResult run_ab_sss(const GameTree& tree, int depth, TranspositionTable& table,
                        const SearchOptions& options) {
  AlphaBeta session(tree, table, options);
  return run_ab_sss(session, depth);
}

DriverResult run_ab_dual(const GameTree& tree, int depth, TranspositionTable& table,
                         const SearchOptions& options) {
  AlphaBeta session(tree, table, options);
  return run_ab_dual(session, depth);
}

DriverResult run_wide_ab(const GameTree& tree, int depth, TranspositionTable& table,
                         const SearchOptions& options) {
  AlphaBeta session(tree, table, options);
  return run_wide_ab(session, depth);
}

namespace {

DriverResult run_classic(const GameTree& tree, int depth, Trace* trace) {
  ClassicOptions opts;
  const ClassicResult c = sss_star(tree, depth, opts);
  if (trace != nullptr) trace->insert(trace->end(), c.trace.begin(), c.trace.end());
  DriverResult r;
  r.value = c.value;
  r.passes = 1;
  r.counters = c.counters;
  r.peak_open_list = c.peak_open_list;
  return r;
}

DriverResult run_in_session(Algorithm algo, AlphaBeta& session, int depth) {
  switch (algo) {
    case Algorithm::WideAb: return run_wide_ab(session, depth);
    case Algorithm::AbSss: return run_ab_sss(session, depth);
    case Algorithm::AbDual: return run_ab_dual(session, depth);
    case Algorithm::SssClassic:
      return run_classic(session.tree(), depth, session.options().trace);
  }
  throw std::logic_error("unknown algorithm");
}

}  // namespace

DriverResult run_fixed_depth(Algorithm algo, const GameTree& tree, int depth, TranspositionTable& table,
                             const SearchOptions& options) {
  HistoryTable owned_history;
  SearchOptions opts = options;
  if (opts.history == nullptr) opts.history = &owned_history;
  AlphaBeta session(tree, table, opts);
  return run_in_session(algo, session, depth);
}

std::vector<IterationResult> run_iterative_deepening(Algorithm algo, const GameTree& tree, int max_depth,
                                                     int step, TranspositionTable& table,
                                                     SearchOptions options) {
  if (step < 1) throw std::invalid_argument("iterative deepening step must be >= 1");
  if (max_depth < 0 || max_depth > tree.spec().depth) {
    throw std::invalid_argument("iterative deepening depth outside the tree");
  }
  HistoryTable owned_history;
  if (options.history == nullptr) options.history = &owned_history;

  std::vector<int> depths;
  for (int d = step; d < max_depth; d += step) depths.push_back(d);
  depths.push_back(max_depth);

  AlphaBeta session(tree, table, options);
  std::vector<IterationResult> out;
  SearchCounters cumulative;
  for (int d : depths) {
    IterationResult it;
    it.depth = d;
    it.iteration = run_in_session(algo, session, d);
    cumulative += it.iteration.counters;
    it.cumulative = cumulative;
    out.push_back(std::move(it));
  }
  return out;
}

}  // namespace ssslab
