#include "ssslab/sss_classic.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <sstream>

namespace ssslab {

int case_number(GammaCase c) { return static_cast<int>(c); }

std::string to_string(GammaCase c) {
  return c == GammaCase::Terminate ? "terminate" : "case" + std::to_string(case_number(c));
}

// ---------------------------------------------------------------------------
// TreePosition
// ---------------------------------------------------------------------------

TreePosition TreePosition::parent() const {
  TreePosition p = *this;
  p.index[p.depth - 1u] = 0;
  --p.depth;
  return p;
}

TreePosition TreePosition::child(std::uint8_t i) const {
  TreePosition c = *this;
  c.index[c.depth] = i;
  ++c.depth;
  return c;
}

bool operator<(const TreePosition& a, const TreePosition& b) {
  return std::lexicographical_compare(a.index.begin(), a.index.begin() + a.depth, b.index.begin(),
                                      b.index.begin() + b.depth);
}

bool operator==(const TreePosition& a, const TreePosition& b) {
  return a.depth == b.depth && std::equal(a.index.begin(), a.index.begin() + a.depth, b.index.begin());
}

// ---------------------------------------------------------------------------
// OpenList
// ---------------------------------------------------------------------------

namespace {

bool precedes(const OpenList::Item& a, const OpenList::Item& b) {
  if (a.triple.merit != b.triple.merit) return a.triple.merit > b.triple.merit;
  return a.position < b.position;
}

std::string format_merit(int m) {
  if (m >= kInf) return "+inf";
  if (m <= -kInf) return "-inf";
  return std::to_string(m);
}

}  // namespace

OpenList::Item OpenList::pop_head() {
  Item head = items_.front();
  items_.pop_front();
  return head;
}

void OpenList::push_top(Item item) { items_.push_front(std::move(item)); }

void OpenList::insert_by_merit(Item item) {
  auto it = std::find_if(items_.begin(), items_.end(), [&](const Item& e) { return precedes(item, e); });
  items_.insert(it, std::move(item));
}

std::size_t OpenList::purge_descendants(const NodeRef& ancestor) {
  const auto before = items_.size();
  std::erase_if(items_, [&](const Item& e) { return ancestor.is_proper_ancestor_of(e.triple.node); });
  return before - items_.size();
}

bool OpenList::head_is_leftmost_max() const {
  if (items_.empty()) return false;
  const Item& h = items_.front();
  return std::none_of(items_.begin() + 1, items_.end(), [&](const Item& e) { return precedes(e, h); });
}

std::vector<Triple> OpenList::triples() const {
  std::vector<Triple> out;
  out.reserve(items_.size());
  for (const Item& e : items_) out.push_back(e.triple);
  return out;
}

std::string OpenList::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const Item& e : items_) {
    if (!first) os << ", ";
    first = false;
    os << '(' << e.triple.node.path_string() << ',' << (e.triple.status == Status::Live ? "LIVE" : "SOLVED")
       << ',' << format_merit(e.triple.merit) << ')';
  }
  os << '}';
  return os.str();
}

// ---------------------------------------------------------------------------
// StockmanMachine
// ---------------------------------------------------------------------------

StockmanMachine::StockmanMachine(const GameTree& tree, int depth) : tree_(tree), depth_(depth) {
  if (depth < 0 || depth > tree.spec().depth) {
    throw std::invalid_argument("sss*: depth outside the tree");
  }
  open_.push_top({Triple{tree.root(), Status::Live, kInf}, TreePosition{}});
}

bool StockmanMachine::has_next(const OpenList::Item& item) const {
  return item.position.last() + 1 < tree_.spec().width;
}

GammaCase StockmanMachine::select_case(const OpenList::Item& item) const {
  const Triple& t = item.triple;
  const bool max_node = GameTree::is_max_ply(t.node.depth());
  if (t.status == Status::Solved) {
    if (t.node.is_root()) return GammaCase::Terminate;
    if (!max_node) return GammaCase::Case1;
    return has_next(item) ? GammaCase::Case2 : GammaCase::Case3;
  }
  if (is_leaf(t.node)) return GammaCase::Case4;
  // first(n) is MAX exactly when n is MIN
  return max_node ? GammaCase::Case6 : GammaCase::Case5;
}

void StockmanMachine::pop_and_apply(GammaCase c) {
  const OpenList::Item p = open_.pop_head();
  const NodeRef& n = p.triple.node;
  const int h = p.triple.merit;

  switch (c) {
    case GammaCase::Terminate:
      throw InvariantViolation("terminate is not an operator");
    case GammaCase::Case1: {
      const NodeRef m = tree_.parent(n);
      open_.push_top({Triple{m, p.triple.status, h}, p.position.parent()});
      open_.purge_descendants(m);
      break;
    }
    case GammaCase::Case2: {
      const NodeRef parent = tree_.parent(n);
      const MoveList order = tree_.canonical_order(parent);
      const std::uint8_t next_index = static_cast<std::uint8_t>(p.position.last() + 1);
      open_.push_top({Triple{tree_.child(parent, order[next_index]), Status::Live, h},
                      p.position.parent().child(next_index)});
      break;
    }
    case GammaCase::Case3:
      open_.push_top({Triple{tree_.parent(n), p.triple.status, h}, p.position.parent()});
      break;
    case GammaCase::Case4: {
      ++counters_.leaf_evals;
      const int v = tree_.evaluate(n);
      trace_.push_back({n, v});
      const int f = GameTree::is_max_ply(n.depth()) ? v : -v;
      open_.insert_by_merit({Triple{n, Status::Solved, std::min(h, f)}, p.position});
      break;
    }
    case GammaCase::Case5: {
      ++counters_.interior_visits;
      const MoveList order = tree_.canonical_order(n);
      open_.push_top({Triple{tree_.child(n, order[0]), p.triple.status, h}, p.position.child(0)});
      break;
    }
    case GammaCase::Case6: {
      ++counters_.interior_visits;
      const MoveList order = tree_.canonical_order(n);
      for (std::size_t i = order.size(); i-- > 0;) {
        open_.push_top({Triple{tree_.child(n, order[i]), p.triple.status, h},
                        p.position.child(static_cast<std::uint8_t>(i))});
      }
      break;
    }
  }
  peak_ = std::max(peak_, open_.size());
}

GammaCase select_case(const Triple& triple, const GameTree& tree, int depth) {
  OpenList::Item item{triple, TreePosition{}};
  // Rebuild the position so next(n) can be resolved.
  NodeRef cursor = tree.root();
  for (int ply = 0; ply < triple.node.depth(); ++ply) {
    const MoveList order = tree.canonical_order(cursor);
    const std::uint8_t move = triple.node.move_at(ply);
    const auto* it = std::find(order.begin(), order.end(), move);
    item.position = item.position.child(static_cast<std::uint8_t>(it - order.begin()));
    cursor = tree.child(cursor, move);
  }
  return StockmanMachine(tree, depth).select_case(item);
}

// ---------------------------------------------------------------------------
// Solution-tree frontier check
// ---------------------------------------------------------------------------

std::optional<std::string> check_max_solution_frontier(const GameTree& tree, const std::vector<Triple>& list) {
  if (list.empty()) return "list is empty";

  using Path = std::vector<std::uint8_t>;
  std::set<Path> leaves;
  std::map<Path, std::set<std::uint8_t>> internal;  // internal node -> children present in L
  for (const Triple& t : list) {
    const auto path = t.node.path();
    if (!leaves.emplace(path.begin(), path.end()).second) {
      return "node " + t.node.path_string() + " appears twice";
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      internal[Path(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(k))].insert(path[k]);
    }
  }
  for (const auto& [path, kids] : internal) {
    if (leaves.count(path) != 0) {
      return "list node at depth " + std::to_string(path.size()) + " has a listed descendant";
    }
    const bool max_node = GameTree::is_max_ply(static_cast<int>(path.size()));
    if (max_node && kids.size() != static_cast<std::size_t>(tree.spec().width)) {
      return "max node at depth " + std::to_string(path.size()) + " has " + std::to_string(kids.size()) +
             " of " + std::to_string(tree.spec().width) + " children in the solution tree";
    }
    if (!max_node && kids.size() != 1) {
      return "min node at depth " + std::to_string(path.size()) + " has " + std::to_string(kids.size()) +
             " children in the solution tree";
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// SSS*
// ---------------------------------------------------------------------------

ClassicResult sss_star(const GameTree& tree, int depth, const ClassicOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  StockmanMachine machine(tree, depth);
  ClassicResult result;
  int last_merit = kInf;

  for (;;) {
    const OpenList& open = machine.open();
    if (open.empty()) throw InvariantViolation("sss*: OPEN list ran empty");
    const OpenList::Item& head = open.head();

    if (options.check_invariants) {
      if (!open.head_is_leftmost_max()) {
        throw InvariantViolation("sss*: step " + std::to_string(result.steps) +
                                 ": head is not the leftmost maximal triple; OPEN=" + open.to_string());
      }
      if (head.triple.merit > last_merit) {
        throw InvariantViolation("sss*: step " + std::to_string(result.steps) + ": head merit increased");
      }
      last_merit = head.triple.merit;
    }

    const GammaCase c = machine.select_case(head);
    if (c == GammaCase::Terminate) {
      result.value = head.triple.merit;
      break;
    }
    const NodeRef node = head.triple.node;
    machine.pop_and_apply(c);
    ++result.steps;
    if (options.record_cases) result.cases.push_back({c, node});

    if (options.check_invariants) {
      if (auto defect = check_max_solution_frontier(tree, machine.open().triples())) {
        throw InvariantViolation("sss*: step " + std::to_string(result.steps) + " (" + to_string(c) +
                                 "): " + *defect + "; OPEN=" + machine.open().to_string());
      }
    }
  }

  result.trace = machine.trace();
  result.counters = machine.counters();
  result.peak_open_list = machine.peak_open_list();
  result.counters.elapsed_ns = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count());
  return result;
}

}  // namespace ssslab
