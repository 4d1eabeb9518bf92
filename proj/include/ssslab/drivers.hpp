#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "ssslab/search_ab.hpp"
#include "ssslab/tree_model.hpp"
#include "ssslab/ttable.hpp"

namespace ssslab {

enum class Algorithm { WideAb, AbSss, AbDual, SssClassic };

std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view s);

struct DriverResult {
  int value = 0;
  int passes = 0;
  // The gamma of every pass, in order (first element is +/-kInf for the
  // null-window drivers).
  std::vector<int> bound_sequence;
  SearchCounters counters;
  // Only set by the OPEN-list algorithm.
  std::size_t peak_open_list = 0;
};

// Drivers over an existing session. The session's table and history persist
// across passes; the returned counters cover this run only.
DriverResult run_ab_sss(AlphaBeta& session, int depth);
DriverResult run_ab_dual(AlphaBeta& session, int depth);
DriverResult run_wide_ab(AlphaBeta& session, int depth);

// Convenience forms that open a fresh session on `table`.
DriverResult run_ab_sss(const GameTree& tree, int depth, TranspositionTable& table,
                        const SearchOptions& options = {});
DriverResult run_ab_dual(const GameTree& tree, int depth, TranspositionTable& table,
                         const SearchOptions& options = {});
DriverResult run_wide_ab(const GameTree& tree, int depth, TranspositionTable& table,
                         const SearchOptions& options = {});

// Any algorithm at fixed depth. SssClassic ignores the table and options
// other than the trace.
DriverResult run_fixed_depth(Algorithm algo, const GameTree& tree, int depth, TranspositionTable& table,
                             const SearchOptions& options = {});

struct IterationResult {
  int depth = 0;
  DriverResult iteration;
  SearchCounters cumulative;
};

// Depths step, 2*step, ..., always ending at max_depth. One table and one
// history table are shared by every iteration; the history table is owned
// by the call unless options.history is set.
std::vector<IterationResult> run_iterative_deepening(Algorithm algo, const GameTree& tree, int max_depth,
                                                     int step, TranspositionTable& table,
                                                     SearchOptions options = {});

}  // namespace ssslab
