#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ssslab {

// Search sentinel. Every accepted value_max is far below it, so (kInf - 1, kInf)
// is a legal null window that no leaf can reach.
inline constexpr int kInf = 1 << 30;
inline constexpr int kMaxValue = 1 << 24;
inline constexpr int kMaxDepth = 40;
inline constexpr int kMaxWidth = 64;

// Largest subtree (in leaves) the brute-force oracle and the calibrated
// generator will enumerate.
inline constexpr std::uint64_t kOracleLeafBudget = std::uint64_t{1} << 20;

enum class TranspositionModel { None, Commutative };

struct TreeSpec {
  int width = 2;
  int depth = 0;
  std::uint64_t seed = 0;
  int value_max = 100;
  double ordering_quality = 0.5;
  double correlation = 0.0;
  TranspositionModel transpositions = TranspositionModel::None;

  // Throws std::invalid_argument on out-of-range fields.
  void validate() const;

  // Flat text form: w=<int>,d=<int>,seed=<u64>,vmax=<int>,oq=<float>,corr=<float>,tx=<none|comm>
  std::string to_string() const;
  // Fields may appear in any order; omitted fields keep their defaults.
  static TreeSpec parse(std::string_view text);

  // Number of leaves at full depth, saturating at UINT64_MAX.
  std::uint64_t leaf_count() const;

  friend bool operator==(const TreeSpec&, const TreeSpec&) = default;
};

struct StateKey {
  std::uint64_t value = 0;
  friend auto operator<=>(const StateKey&, const StateKey&) = default;
};

// Fixed-capacity list of move indices (child indices in [0, width)).
class MoveList {
 public:
  MoveList() = default;
  explicit MoveList(std::size_t n);

  void push_back(std::uint8_t m) { moves_[size_++] = m; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  std::uint8_t operator[](std::size_t i) const { return moves_[i]; }
  std::uint8_t& operator[](std::size_t i) { return moves_[i]; }
  const std::uint8_t* begin() const { return moves_.data(); }
  const std::uint8_t* end() const { return moves_.data() + size_; }
  std::uint8_t* begin() { return moves_.data(); }
  std::uint8_t* end() { return moves_.data() + size_; }
  std::vector<int> to_vector() const { return {begin(), end()}; }

  friend bool operator==(const MoveList& a, const MoveList& b) {
    return a.size_ == b.size_ && std::equal(a.begin(), a.end(), b.begin());
  }

 private:
  std::array<std::uint8_t, kMaxWidth> moves_{};
  std::size_t size_ = 0;
};

// A node is identified by the sequence of move indices leading to it from the
// root. The remaining members are caches derived from the path by the
// GameTree that produced the reference; equality only looks at the path.
class NodeRef {
 public:
  int depth() const { return depth_; }
  bool is_root() const { return depth_ == 0; }
  std::span<const std::uint8_t> path() const { return {path_.data(), depth_}; }
  std::uint8_t move_at(int ply) const { return path_[static_cast<std::size_t>(ply)]; }
  StateKey key() const { return StateKey{key_}; }

  // True when this node lies strictly above `other` on its path.
  bool is_proper_ancestor_of(const NodeRef& other) const;

  std::string path_string() const;

  friend bool operator==(const NodeRef& a, const NodeRef& b) {
    return a.depth_ == b.depth_ &&
           std::equal(a.path_.begin(), a.path_.begin() + a.depth_, b.path_.begin());
  }

 private:
  friend class GameTree;

  std::array<std::uint8_t, kMaxDepth> path_{};
  std::uint8_t depth_ = 0;
  std::uint64_t key_ = 0;
  std::uint64_t acc_ = 0;   // transposition accumulator
  std::uint64_t index_ = 0; // level-local index (calibrated NONE trees)
  double tendency_ = 0.0;
};

// Deterministic synthetic game tree. Construction materializes the move
// ordering of calibrated trees (leaf_count() <= kOracleLeafBudget); larger
// trees order children by the cheaper tendency proxy. All queries are const and
// safe to call concurrently.
class GameTree {
 public:
  explicit GameTree(TreeSpec spec);

  const TreeSpec& spec() const { return spec_; }
  bool calibrated() const { return calibrated_; }

  NodeRef root() const;
  // Walks from the root; every element must be < width.
  NodeRef node(std::span<const std::uint8_t> path) const;
  NodeRef parent(const NodeRef& n) const;
  NodeRef child(const NodeRef& n, std::uint8_t move) const;

  // Children in canonical (generator) order. Precondition: depth(n) < spec.depth.
  std::vector<NodeRef> children(const NodeRef& n) const;
  MoveList canonical_order(const NodeRef& n) const;

  // Real-valued heuristic tendency of a node, in the root player's frame.
  double tendency(const NodeRef& n) const { return n.tendency_; }
  // Static evaluation from the side to move: the rounded tendency, negated at
  // odd plies. Defined for every node so that shallower horizons can be searched.
  int evaluate(const NodeRef& n) const;
  // Same as evaluate() but only for nodes at full depth.
  int leaf_value(const NodeRef& n) const;
  StateKey state_key(const NodeRef& n) const { return n.key(); }

  static bool is_max_ply(int ply) { return ply % 2 == 0; }

 private:
  void init_child(const NodeRef& parent, std::uint8_t move, NodeRef& out) const;
  double commutative_tendency(const NodeRef& n) const;
  std::uint64_t node_hash(std::uint64_t key, std::uint64_t salt, std::uint64_t i) const;
  MoveList draw_order(const NodeRef& n, std::uint8_t best) const;
  std::uint8_t proxy_best(const NodeRef& n) const;
  int materialize(const NodeRef& n, std::unordered_map<std::uint64_t, int>& memo);

  TreeSpec spec_;
  bool calibrated_ = false;
  // Calibrated NONE trees: per level, `width` bytes per interior node.
  std::vector<std::vector<std::uint8_t>> level_orders_;
  // Calibrated COMMUTATIVE trees: state key -> offset into state_orders_.
  std::unordered_map<std::uint64_t, std::uint32_t> state_offsets_;
  std::vector<std::uint8_t> state_orders_;
};

class OracleBudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Brute-force negamax value of `n` searched `horizon` plies deep (-1: to full
// depth), with no pruning and no storage. Refuses subtrees with more than
// `leaf_budget` leaves.
int minimax_oracle(const GameTree& tree, const NodeRef& n, int horizon = -1,
                   std::uint64_t leaf_budget = kOracleLeafBudget);

// w^d saturating at UINT64_MAX.
std::uint64_t saturating_power(int base, int exponent);

}  // namespace ssslab
