#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ssslab/drivers.hpp"
#include "ssslab/search_ab.hpp"
#include "ssslab/sss_classic.hpp"
#include "ssslab/tree_model.hpp"
#include "ssslab/ttable.hpp"

namespace ssslab {

// First position where two traces differ. A missing event means that trace
// ended early.
struct Divergence {
  std::size_t index = 0;
  std::optional<TraceEvent> a;
  std::optional<TraceEvent> b;
};

std::optional<Divergence> compare_traces(const Trace& a, const Trace& b);
std::string describe(const Divergence& d);

// Leaf trace of one fixed-depth run on a fresh LOSSLESS table with STATIC
// ordering.
Trace record_trace(Algorithm algo, const GameTree& tree, int depth, SearchCounters* counters = nullptr);

// One List-op executed by the instrumented run.
struct ListOp {
  GammaCase gamma_case;
  NodeRef node;
  friend bool operator==(const ListOp&, const ListOp&) = default;
};

class LockstepViolation : public InvariantViolation {
 public:
  LockstepViolation(std::size_t step, std::string what, std::string list_snapshot);
  std::size_t step() const { return step_; }
  const std::string& list_snapshot() const { return list_; }

 private:
  std::size_t step_;
  std::string list_;
};

struct InstrumentedResult {
  int value = 0;
  int passes = 0;
  std::vector<ListOp> list_ops;
  Trace trace;
  std::vector<Triple> final_list;
  // Number of runtime checks that were evaluated (all passed).
  std::size_t checks = 0;
};

// AB-SSS* written as the two procedures `alphabeta` (unsearched subtree) and
// `T-alphabeta` (re-walk of the stored max solution tree) over an explicit
// per-node store, driving a LIST through the same case operators as SSS*.
// Every List-op is preceded by the head/case checks and followed by the LIST
// shape check; every pass is followed by a solution-tree check. Any failure
// throws LockstepViolation.
InstrumentedResult instrumented_ab_sss(const GameTree& tree, int depth);

// Index of the first step where the instrumented List-ops and the classic
// applied cases differ, or nothing when they agree step for step.
std::optional<std::size_t> compare_case_sequences(const std::vector<ListOp>& ops,
                                                  const std::vector<CaseStep>& cases);

enum class SolutionKind { Max, Min };

// Stored negamax bounds for a node, if any.
using BoundLookup = std::function<std::optional<TTEntry>(const NodeRef&)>;

struct SolutionTreeReport {
  bool ok = false;
  int value = 0;            // backed-up value of the reconstructed tree (root's side)
  std::size_t leaves = 0;   // leaves of the reconstructed tree
  std::string violation;    // offending node and clause when !ok
};

// Max: rebuilds the max solution tree under the root from stored bounds
// after a fail-low pass returning g and checks its shape, the left/right
// brother conditions at min nodes and that its value equals g.
// Min: after the final fail-high pass, rebuilds the best min solution tree
// and checks that its value equals g.
SolutionTreeReport verify_solution_tree(const GameTree& tree, const BoundLookup& lookup, int depth, int g,
                                        SolutionKind kind);
SolutionTreeReport verify_solution_tree(const GameTree& tree, const TranspositionTable& table, int depth,
                                        int g, SolutionKind kind);

}  // namespace ssslab
