#include "ssslab/search_ab.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <string>

namespace ssslab {

SearchCounters& SearchCounters::operator+=(const SearchCounters& o) {
  leaf_evals += o.leaf_evals;
  interior_visits += o.interior_visits;
  tt_probes += o.tt_probes;
  tt_hits += o.tt_hits;
  tt_cutoffs += o.tt_cutoffs;
  re_expansions += o.re_expansions;
  elapsed_ns += o.elapsed_ns;
  return *this;
}

SearchCounters operator-(SearchCounters a, const SearchCounters& b) {
  a.leaf_evals -= b.leaf_evals;
  a.interior_visits -= b.interior_visits;
  a.tt_probes -= b.tt_probes;
  a.tt_hits -= b.tt_hits;
  a.tt_cutoffs -= b.tt_cutoffs;
  a.re_expansions -= b.re_expansions;
  a.elapsed_ns -= b.elapsed_ns;
  return a;
}

std::string_view to_string(Ordering o) {
  switch (o) {
    case Ordering::Static: return "static";
    case Ordering::TtFirst: return "tt-first";
    case Ordering::History: return "history";
  }
  return "?";
}

std::optional<Ordering> parse_ordering(std::string_view s) {
  if (s == "static") return Ordering::Static;
  if (s == "tt-first") return Ordering::TtFirst;
  if (s == "history") return Ordering::History;
  return std::nullopt;
}

void HistoryTable::update(std::uint8_t move, int depth_remaining) {
  const int shift = std::clamp(depth_remaining, 0, 62);
  scores_[move] += std::uint64_t{1} << shift;
}

MoveList order_children(const MoveList& canonical, std::optional<std::uint8_t> hint, Ordering policy,
                        const HistoryTable* history) {
  MoveList out = canonical;
  switch (policy) {
    case Ordering::Static:
      break;
    case Ordering::TtFirst:
      if (hint) {
        auto* it = std::find(out.begin(), out.end(), *hint);
        if (it != out.end()) std::rotate(out.begin(), it, it + 1);
      }
      break;
    case Ordering::History:
      if (history != nullptr) {
        std::stable_sort(out.begin(), out.end(), [history](std::uint8_t a, std::uint8_t b) {
          return history->score(a) > history->score(b);
        });
      }
      break;
  }
  return out;
}

AlphaBeta::AlphaBeta(const GameTree& tree, TranspositionTable& table, SearchOptions options)
    : tree_(tree), table_(table), options_(options) {}

void AlphaBeta::reset_counters() {
  counters_ = {};
  evaluated_.clear();
}

int AlphaBeta::search(const NodeRef& n, Window window, int depth) {
  if (window.alpha >= window.beta) {
    throw std::invalid_argument("alpha_beta: window requires alpha < beta (got " +
                                std::to_string(window.alpha) + ", " + std::to_string(window.beta) + ")");
  }
  if (depth < 0 || n.depth() + depth > tree_.spec().depth) {
    throw std::invalid_argument("alpha_beta: search horizon outside the tree");
  }
  const auto start = std::chrono::steady_clock::now();
  const int g = search_node(n, window.alpha, window.beta, depth);
  const auto stop = std::chrono::steady_clock::now();
  counters_.elapsed_ns += static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
  return g;
}

int AlphaBeta::eval_leaf(const NodeRef& n) {
  ++counters_.leaf_evals;
  if (!evaluated_.insert(n.key().value).second) ++counters_.re_expansions;
  const int v = tree_.evaluate(n);
  if (options_.trace != nullptr) options_.trace->push_back({n, v});
  return v;
}

int AlphaBeta::search_node(const NodeRef& n, int alpha, int beta, int depth) {
  const StateKey key = n.key();
  TTEntry entry{key, depth, kInf, -kInf, std::nullopt};

  ++counters_.tt_probes;
  if (auto found = table_.retrieve(key, depth)) {
    ++counters_.tt_hits;
    if (found->f_plus <= alpha || found->f_plus == found->f_minus) {
      ++counters_.tt_cutoffs;
      return found->f_plus;
    }
    if (found->f_minus >= beta) {
      ++counters_.tt_cutoffs;
      return found->f_minus;
    }
    // Bounds from a deeper search are not merged into this depth's entry.
    if (found->depth == depth) entry = *found;
  }

  int g;
  if (depth == 0) {
    g = eval_leaf(n);
    entry.f_plus = entry.f_minus = g;
    if (!options_.store_leaves) return g;
  } else {
    ++counters_.interior_visits;
    std::optional<std::uint8_t> hint;
    if (options_.ordering == Ordering::TtFirst) hint = table_.move_hint(key);
    const MoveList moves =
        order_children(tree_.canonical_order(n), hint, options_.ordering, options_.history);

    g = -kInf;
    int a = alpha;
    std::uint8_t best = moves[0];
    for (std::size_t i = 0; i < moves.size() && g < beta; ++i) {
      const std::uint8_t m = moves[i];
      const int v = -search_node(tree_.child(n, m), -beta, -a, depth - 1);
      if (v > g) {
        g = v;
        best = m;
      }
      a = std::max(a, g);
      if (g >= beta && options_.history != nullptr) options_.history->update(m, depth);
    }
    if (g < beta) entry.f_plus = g;
    if (g > alpha) entry.f_minus = g;
    entry.best_move = best;
  }
  table_.store(entry);
  return g;
}

}  // namespace ssslab
