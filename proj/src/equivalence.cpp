#include "ssslab/equivalence.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ssslab {

namespace {

std::string format_event(const std::optional<TraceEvent>& e) {
  if (!e) return "<end>";
  return "(" + e->node.path_string() + ", " + std::to_string(e->value) + ")";
}

// Negamax entry at ply `ply` viewed from MAX: {lower, upper}.
std::pair<int, int> max_view(const TTEntry& e, int ply) {
  if (GameTree::is_max_ply(ply)) return {e.f_minus, e.f_plus};
  return {-e.f_plus, -e.f_minus};
}

}  // namespace

std::optional<Divergence> compare_traces(const Trace& a, const Trace& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!(a[i] == b[i])) return Divergence{i, a[i], b[i]};
  }
  if (a.size() == b.size()) return std::nullopt;
  Divergence d{n, std::nullopt, std::nullopt};
  if (n < a.size()) d.a = a[n];
  if (n < b.size()) d.b = b[n];
  return d;
}

std::string describe(const Divergence& d) {
  return "traces diverge at index " + std::to_string(d.index) + ": " + format_event(d.a) + " vs " +
         format_event(d.b);
}

Trace record_trace(Algorithm algo, const GameTree& tree, int depth, SearchCounters* counters) {
  Trace trace;
  TranspositionTable table(TableConfig::lossless());
  SearchOptions options;
  options.trace = &trace;
  const DriverResult r = run_fixed_depth(algo, tree, depth, table, options);
  if (counters != nullptr) *counters = r.counters;
  return trace;
}

LockstepViolation::LockstepViolation(std::size_t step, std::string what, std::string list_snapshot)
    : InvariantViolation("lockstep check failed at step " + std::to_string(step) + ": " + what +
                         "; LIST=" + list_snapshot),
      step_(step),
      list_(std::move(list_snapshot)) {}

std::optional<std::size_t> compare_case_sequences(const std::vector<ListOp>& ops,
                                                  const std::vector<CaseStep>& cases) {
  const std::size_t n = std::min(ops.size(), cases.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (ops[i].gamma_case != cases[i].gamma_case || !(ops[i].node == cases[i].node)) return i;
  }
  if (ops.size() != cases.size()) return n;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Solution-tree reconstruction
// ---------------------------------------------------------------------------

namespace {

struct Rebuilt {
  bool ok = true;
  int value = 0;
  std::size_t leaves = 0;
  std::string violation;
};

Rebuilt fail(const NodeRef& n, const std::string& clause) {
  return {false, 0, 0, "node " + n.path_string() + ": " + clause};
}

class MaxTreeChecker {
 public:
  MaxTreeChecker(const GameTree& tree, const BoundLookup& lookup, int depth, int g)
      : tree_(tree), lookup_(lookup), depth_(depth), g_(g) {}

  Rebuilt walk(const NodeRef& n) const {
    const auto entry = lookup_(n);
    if (!entry) return fail(n, "no stored bounds on the solution tree");
    if (n.depth() == depth_) {
      if (!entry->exact()) return fail(n, "leaf bound is not exact");
      return {true, max_view(*entry, n.depth()).second, 1, {}};
    }
    const MoveList order = tree_.canonical_order(n);
    if (GameTree::is_max_ply(n.depth())) {
      Rebuilt out{true, -kInf, 0, {}};
      for (std::uint8_t m : order) {
        Rebuilt sub = walk(tree_.child(n, m));
        if (!sub.ok) return sub;
        out.value = std::max(out.value, sub.value);
        out.leaves += sub.leaves;
      }
      return out;
    }
    // Min node: skip the left brothers (lower bound above g), descend into
    // the first remaining child, require the rest to be unexpanded.
    std::size_t i = 0;
    for (; i < order.size(); ++i) {
      const auto e = lookup_(tree_.child(n, order[i]));
      if (!e) break;
      const int lower = max_view(*e, n.depth() + 1).first;
      if (lower <= g_) break;
    }
    if (i == order.size()) return fail(n, "every child has a lower bound above g (no single child)");
    Rebuilt sub = walk(tree_.child(n, order[i]));
    if (!sub.ok) return sub;
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (lookup_(tree_.child(n, order[j]))) {
        return fail(tree_.child(n, order[j]), "right brother of the single child is expanded");
      }
    }
    return sub;
  }

 private:
  const GameTree& tree_;
  const BoundLookup& lookup_;
  int depth_;
  int g_;
};

// Best stored min solution tree under n (highest backed-up value), or
// nothing if the stored bounds do not contain one.
std::optional<std::pair<int, std::size_t>> best_min_tree(const GameTree& tree, const BoundLookup& lookup,
                                                         int depth, const NodeRef& n) {
  const auto entry = lookup(n);
  if (!entry) return std::nullopt;
  if (n.depth() == depth) {
    if (!entry->exact()) return std::nullopt;
    return std::pair{max_view(*entry, n.depth()).first, std::size_t{1}};
  }
  const MoveList order = tree.canonical_order(n);
  if (GameTree::is_max_ply(n.depth())) {
    std::optional<std::pair<int, std::size_t>> best;
    for (std::uint8_t m : order) {
      auto sub = best_min_tree(tree, lookup, depth, tree.child(n, m));
      if (sub && (!best || sub->first > best->first)) best = sub;
    }
    return best;
  }
  std::pair<int, std::size_t> out{kInf, 0};
  for (std::uint8_t m : order) {
    auto sub = best_min_tree(tree, lookup, depth, tree.child(n, m));
    if (!sub) return std::nullopt;
    out.first = std::min(out.first, sub->first);
    out.second += sub->second;
  }
  return out;
}

}  // namespace

SolutionTreeReport verify_solution_tree(const GameTree& tree, const BoundLookup& lookup, int depth, int g,
                                        SolutionKind kind) {
  const NodeRef root = tree.root();
  SolutionTreeReport report;
  if (kind == SolutionKind::Max) {
    const Rebuilt r = MaxTreeChecker(tree, lookup, depth, g).walk(root);
    if (!r.ok) {
      report.violation = r.violation;
      return report;
    }
    report.value = r.value;
    report.leaves = r.leaves;
    if (r.value != g) {
      report.violation = "max solution tree value " + std::to_string(r.value) + " differs from g " +
                         std::to_string(g);
      return report;
    }
    report.ok = true;
    return report;
  }
  const auto best = best_min_tree(tree, lookup, depth, root);
  if (!best) {
    report.violation = "node " + root.path_string() + ": stored bounds contain no min solution tree";
    return report;
  }
  report.value = best->first;
  report.leaves = best->second;
  if (best->first != g) {
    report.violation = "min solution tree value " + std::to_string(best->first) + " differs from g " +
                       std::to_string(g);
    return report;
  }
  report.ok = true;
  return report;
}

SolutionTreeReport verify_solution_tree(const GameTree& tree, const TranspositionTable& table, int depth,
                                        int g, SolutionKind kind) {
  const BoundLookup lookup = [&table](const NodeRef& n) { return table.peek(n.key()); };
  return verify_solution_tree(tree, lookup, depth, g, kind);
}

// ---------------------------------------------------------------------------
// Instrumented AB-SSS*
// ---------------------------------------------------------------------------

namespace {

using Path = std::vector<std::uint8_t>;

// Values here are from MAX's point of view throughout.
struct Record {
  int upper = kInf;
  int lower = -kInf;
  std::size_t expanded = 0;  // children searched so far, in canonical order
};

class Instrumented {
 public:
  Instrumented(const GameTree& tree, int depth) : tree_(tree), depth_(depth), machine_(tree, depth) {}

  InstrumentedResult run() {
    const NodeRef root = tree_.root();
    gamma_ = kInf;
    int v = alphabeta(root);
    ++result_.passes;
    check_pass(v);
    do {
      gamma_ = v;
      v = t_alphabeta(root);
      ++result_.passes;
      check_pass(v);
    } while (v != gamma_);

    const OpenList& open = machine_.open();
    require(!open.empty(), "LIST is empty at termination");
    require(machine_.select_case(open.head()) == GammaCase::Terminate && open.head().triple.merit == v,
            "LIST head is not (root, SOLVED, " + std::to_string(v) + ") at termination");
    result_.value = v;
    result_.final_list = open.triples();
    return std::move(result_);
  }

 private:
  bool is_terminal(const NodeRef& n) const { return n.depth() == depth_; }
  static bool is_max(const NodeRef& n) { return GameTree::is_max_ply(n.depth()); }

  static Path key_of(const NodeRef& n) {
    const auto p = n.path();
    return {p.begin(), p.end()};
  }

  const Record* find(const NodeRef& n) const {
    auto it = store_.find(key_of(n));
    return it == store_.end() ? nullptr : &it->second;
  }

  void require(bool condition, const std::string& what) {
    ++result_.checks;
    if (!condition) throw LockstepViolation(result_.list_ops.size(), what, machine_.open().to_string());
  }

  // Before: n heads LIST as the leftmost maximal triple, carries merit gamma,
  // and Case i is the one that applies. After: LIST is still the frontier of
  // an internal max solution tree.
  void list_op(GammaCase c, const NodeRef& n) {
    const OpenList& open = machine_.open();
    require(!open.empty(), "List-op(" + std::to_string(case_number(c)) + ", " + n.path_string() +
                               ") on an empty LIST");
    const OpenList::Item& head = open.head();
    const std::string op = "List-op(" + std::to_string(case_number(c)) + ", " + n.path_string() + ")";
    require(head.triple.node == n, op + ": head is " + head.triple.node.path_string());
    require(open.head_is_leftmost_max(), op + ": head is not the leftmost triple of maximal merit");
    require(head.triple.merit == gamma_, op + ": head merit differs from gamma " + std::to_string(gamma_));
    const GammaCase applicable = machine_.select_case(head);
    require(applicable == c, op + ": restrictions hold for " + to_string(applicable) + " instead");

    machine_.pop_and_apply(c);
    result_.list_ops.push_back({c, n});

    auto defect = check_max_solution_frontier(tree_, machine_.open().triples());
    require(!defect, op + ": " + defect.value_or(""));
  }

  void store(const NodeRef& n, int v) {
    Record& r = store_[key_of(n)];
    if (v < gamma_) {
      r.upper = v;
    } else {
      r.lower = v;
    }
  }

  int alphabeta(const NodeRef& n) {
    require(find(n) == nullptr, "alphabeta(" + n.path_string() + ") on a node that is not open");
    const OpenList::Item& head = machine_.open().head();
    require(head.triple.node == n && head.triple.status == Status::Live && head.triple.merit == gamma_ &&
                machine_.open().head_is_leftmost_max(),
            "alphabeta(" + n.path_string() + "): (n, LIVE, gamma) is not the leftmost maximal triple");

    if (is_terminal(n)) {
      const int negamax = tree_.evaluate(n);
      result_.trace.push_back({n, negamax});
      const int f = is_max(n) ? negamax : -negamax;
      list_op(GammaCase::Case4, n);
      Record& r = store_[key_of(n)];
      r.upper = r.lower = f;
      return f;
    }

    const MoveList order = tree_.canonical_order(n);
    int v;
    NodeRef c;
    if (is_max(n)) {
      list_op(GammaCase::Case6, n);
      v = -kInf;
      for (std::size_t i = 0; i < order.size() && v < gamma_; ++i) {
        c = tree_.child(n, order[i]);
        store_[key_of(n)].expanded = i + 1;
        v = std::max(v, alphabeta(c));
      }
      if (v >= gamma_) list_op(GammaCase::Case1, c);
    } else {
      v = kInf;
      for (std::size_t i = 0; i < order.size() && v >= gamma_; ++i) {
        if (i == 0) {
          list_op(GammaCase::Case5, n);
        } else {
          list_op(GammaCase::Case2, c);
        }
        c = tree_.child(n, order[i]);
        store_[key_of(n)].expanded = i + 1;
        v = std::min(v, alphabeta(c));
      }
      if (v >= gamma_) list_op(GammaCase::Case3, c);
    }
    store(n, v);
    return v;
  }

  int t_alphabeta(const NodeRef& n) {
    const Record* rec = find(n);
    require(rec != nullptr && rec->upper == gamma_,
            "T-alphabeta(" + n.path_string() + "): stored upper bound differs from gamma");
    const NodeRef& head = machine_.open().head().triple.node;
    require(head == n || n.is_proper_ancestor_of(head),
            "T-alphabeta(" + n.path_string() + "): LIST head " + head.path_string() + " lies outside L(n)");

    if (is_terminal(n)) return gamma_;

    const MoveList order = tree_.canonical_order(n);
    int v;
    NodeRef c;
    if (is_max(n)) {
      require(rec->expanded == order.size(), "T-alphabeta(" + n.path_string() + "): max node not fully expanded");
      v = -kInf;
      for (std::size_t i = 0; i < order.size() && v < gamma_; ++i) {
        c = tree_.child(n, order[i]);
        const Record* child = find(c);
        require(child != nullptr, "T-alphabeta(" + c.path_string() + "): child of a max node has no record");
        const int w = child->upper == gamma_ ? t_alphabeta(c) : child->upper;
        v = std::max(v, w);
      }
      if (v >= gamma_) list_op(GammaCase::Case1, c);
    } else {
      std::size_t i = rec->expanded - 1;
      c = tree_.child(n, order[i]);
      v = t_alphabeta(c);
      while (v >= gamma_ && i + 1 < order.size()) {
        list_op(GammaCase::Case2, c);
        ++i;
        c = tree_.child(n, order[i]);
        store_[key_of(n)].expanded = i + 1;
        v = std::min(v, alphabeta(c));
      }
      if (v >= gamma_) list_op(GammaCase::Case3, c);
    }
    store(n, v);
    return v;
  }

  void check_pass(int v) {
    const BoundLookup lookup = [this](const NodeRef& n) -> std::optional<TTEntry> {
      const Record* r = find(n);
      if (r == nullptr) return std::nullopt;
      TTEntry e{n.key(), depth_ - n.depth(), kInf, -kInf, std::nullopt};
      if (is_max(n)) {
        e.f_plus = r->upper;
        e.f_minus = r->lower;
      } else {
        e.f_plus = r->lower == -kInf ? kInf : -r->lower;
        e.f_minus = r->upper == kInf ? -kInf : -r->upper;
      }
      return e;
    };
    const SolutionKind kind = v < gamma_ ? SolutionKind::Max : SolutionKind::Min;
    const SolutionTreeReport report = verify_solution_tree(tree_, lookup, depth_, v, kind);
    require(report.ok, std::string(kind == SolutionKind::Max ? "max" : "min") +
                           " solution tree after pass " + std::to_string(result_.passes) + ": " + report.violation);
    if (kind == SolutionKind::Max) {
      require(v < last_upper_, "pass values are not strictly decreasing");
      last_upper_ = v;
    }
  }

  const GameTree& tree_;
  int depth_;
  StockmanMachine machine_;
  std::map<Path, Record> store_;
  int gamma_ = kInf;
  int last_upper_ = kInf + 1;
  InstrumentedResult result_;
};

}  // namespace

InstrumentedResult instrumented_ab_sss(const GameTree& tree, int depth) {
  if (depth < 0 || depth > tree.spec().depth) throw std::invalid_argument("instrumented run: depth outside the tree");
  return Instrumented(tree, depth).run();
}

}  // namespace ssslab
