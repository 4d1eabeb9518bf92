#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ssslab/tree_model.hpp"
#include "ssslab/ttable.hpp"

namespace ssslab {

struct SearchCounters {
  std::uint64_t leaf_evals = 0;
  std::uint64_t interior_visits = 0;
  std::uint64_t tt_probes = 0;
  std::uint64_t tt_hits = 0;
  std::uint64_t tt_cutoffs = 0;
  std::uint64_t re_expansions = 0;
  std::uint64_t elapsed_ns = 0;

  SearchCounters& operator+=(const SearchCounters& o);
  friend SearchCounters operator-(SearchCounters a, const SearchCounters& b);
  friend bool operator==(const SearchCounters&, const SearchCounters&) = default;
};

struct Window {
  int alpha;
  int beta;
};

enum class Ordering { Static, TtFirst, History };

std::string_view to_string(Ordering o);
std::optional<Ordering> parse_ordering(std::string_view s);

// Cutoff counts per move index. Persists across iterative-deepening
// iterations; reset between positions.
class HistoryTable {
 public:
  // score[move] += 2^depth_remaining
  void update(std::uint8_t move, int depth_remaining);
  std::uint64_t score(std::uint8_t move) const { return scores_[move]; }
  void reset() { scores_.fill(0); }

 private:
  std::array<std::uint64_t, kMaxWidth> scores_{};
};

// One leaf-evaluation event.
struct TraceEvent {
  NodeRef node;
  int value = 0;
  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};
using Trace = std::vector<TraceEvent>;

// STATIC: canonical order. TT_FIRST: the hint moves to the front, the rest keep
// canonical order. HISTORY: stable sort by descending history score.
MoveList order_children(const MoveList& canonical, std::optional<std::uint8_t> hint, Ordering policy,
                        const HistoryTable* history);

struct SearchOptions {
  Ordering ordering = Ordering::Static;
  // Store leaf results in the table (both bounds), as the plain algorithm does.
  bool store_leaves = true;
  Trace* trace = nullptr;
  HistoryTable* history = nullptr;
};

// Negamax Alpha-Beta with transposition table, instrumented. A session binds a
// tree, a table and options; counters accumulate until reset_counters().
class AlphaBeta {
 public:
  AlphaBeta(const GameTree& tree, TranspositionTable& table, SearchOptions options = {});

  // Fail-soft search of `n` to `depth` remaining plies with window
  // (alpha, beta). Throws std::invalid_argument when alpha >= beta or the
  // horizon runs past the tree.
  int search(const NodeRef& n, Window window, int depth);

  const GameTree& tree() const { return tree_; }
  TranspositionTable& table() { return table_; }
  const SearchOptions& options() const { return options_; }

  const SearchCounters& counters() const { return counters_; }
  void reset_counters();

 private:
  int search_node(const NodeRef& n, int alpha, int beta, int depth);
  int eval_leaf(const NodeRef& n);

  const GameTree& tree_;
  TranspositionTable& table_;
  SearchOptions options_;
  SearchCounters counters_;
  std::unordered_set<std::uint64_t> evaluated_;
};

}  // namespace ssslab
