#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssslab/search_ab.hpp"
#include "ssslab/tree_model.hpp"

namespace ssslab {

enum class Status { Live, Solved };

// (n, s, h): node, status and merit (an upper bound on the root value, kInf
// for "unbounded").
struct Triple {
  NodeRef node;
  Status status = Status::Live;
  int merit = kInf;
  friend bool operator==(const Triple&, const Triple&) = default;
};

enum class GammaCase { Terminate = 0, Case1 = 1, Case2, Case3, Case4, Case5, Case6 };

int case_number(GammaCase c);
std::string to_string(GammaCase c);

struct CaseStep {
  GammaCase gamma_case;
  NodeRef node;
  friend bool operator==(const CaseStep&, const CaseStep&) = default;
};

// Left-to-right position of a node: the index of each move within its
// parent's canonical order. Lexicographic order is tree order.
struct TreePosition {
  std::array<std::uint8_t, kMaxDepth> index{};
  std::uint8_t depth = 0;

  TreePosition parent() const;
  TreePosition child(std::uint8_t i) const;
  std::uint8_t last() const { return index[depth - 1u]; }
  friend bool operator<(const TreePosition& a, const TreePosition& b);
  friend bool operator==(const TreePosition& a, const TreePosition& b);
};

class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The OPEN list: head first, ordered by non-increasing merit with ties broken
// left-first.
class OpenList {
 public:
  struct Item {
    Triple triple;
    TreePosition position;
  };

  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  const Item& head() const { return items_.front(); }
  Item pop_head();

  // "Stack on top": literal front insertion.
  void push_top(Item item);
  // Case 4: in front of all states of lesser merit, ties resolved left-first.
  void insert_by_merit(Item item);
  // Removes every triple whose node has `ancestor` as a proper ancestor.
  std::size_t purge_descendants(const NodeRef& ancestor);

  // True when the head is the leftmost triple of maximal merit.
  bool head_is_leftmost_max() const;
  std::vector<Triple> triples() const;
  const std::deque<Item>& items() const { return items_; }
  std::string to_string() const;

 private:
  std::deque<Item> items_;
};

// Stockman's state-space operator over an OPEN list, shared by the classic
// algorithm and the instrumented Alpha-Beta run.
class StockmanMachine {
 public:
  StockmanMachine(const GameTree& tree, int depth);

  const OpenList& open() const { return open_; }
  const GameTree& tree() const { return tree_; }
  int depth() const { return depth_; }

  // Which case applies to `item` (assumed to be the head).
  GammaCase select_case(const OpenList::Item& item) const;

  // Removes the head and applies `c` to it.
  void pop_and_apply(GammaCase c);

  const Trace& trace() const { return trace_; }
  const SearchCounters& counters() const { return counters_; }
  std::size_t peak_open_list() const { return peak_; }

 private:
  bool is_leaf(const NodeRef& n) const { return n.depth() == depth_; }
  bool has_next(const OpenList::Item& item) const;

  const GameTree& tree_;
  int depth_;
  OpenList open_;
  Trace trace_;
  SearchCounters counters_;
  std::size_t peak_ = 1;
};

// Public form of the case table for a bare triple.
GammaCase select_case(const Triple& triple, const GameTree& tree, int depth);

// Frontier shape check: the triples' nodes are exactly the leaves of an
// internal max solution tree rooted at the root. Returns a description of
// the first defect, or nothing.
std::optional<std::string> check_max_solution_frontier(const GameTree& tree, const std::vector<Triple>& list);

struct ClassicOptions {
  // Assert head maximality, merit monotonicity and the solution-tree shape
  // before/after every step (quadratic; meant for tests).
  bool check_invariants = false;
  bool record_cases = false;
};

struct ClassicResult {
  int value = 0;
  Trace trace;
  std::vector<CaseStep> cases;  // applied cases, Terminate excluded
  SearchCounters counters;
  std::size_t peak_open_list = 0;
  std::size_t steps = 0;
};

// Stockman's SSS* with an explicit OPEN list, static child order.
ClassicResult sss_star(const GameTree& tree, int depth, const ClassicOptions& options = {});

}  // namespace ssslab
