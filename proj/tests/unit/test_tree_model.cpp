#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "doctest.h"
#include "oracles.hpp"
#include "ssslab/tree_model.hpp"

using namespace ssslab;

namespace {

TreeSpec make(int w, int d, std::uint64_t seed, double oq = 0.5, double corr = 0.0, int vmax = 100) {
  TreeSpec s;
  s.width = w;
  s.depth = d;
  s.seed = seed;
  s.ordering_quality = oq;
  s.correlation = corr;
  s.value_max = vmax;
  return s;
}

NodeRef at(const GameTree& t, std::vector<std::uint8_t> path) { return t.node(path); }

}  // namespace

TEST_CASE("tree spec text form round-trips and validates") {
  TreeSpec s = make(3, 5, 42, 0.9, 0.25, 50);
  s.transpositions = TranspositionModel::Commutative;
  CHECK(s.to_string() == "w=3,d=5,seed=42,vmax=50,oq=0.9,corr=0.25,tx=comm");
  CHECK(TreeSpec::parse(s.to_string()) == s);
  CHECK(TreeSpec::parse("d=4,w=2").depth == 4);
  CHECK_THROWS_AS(TreeSpec::parse("w=0,d=2"), std::invalid_argument);
  CHECK_THROWS_AS(TreeSpec::parse("w=2,d=-1"), std::invalid_argument);
  CHECK_THROWS_AS(TreeSpec::parse("w=2,vmax=0"), std::invalid_argument);
  CHECK_THROWS_AS(TreeSpec::parse("w=2,oq=1.5"), std::invalid_argument);
  CHECK_THROWS_AS(TreeSpec::parse("w=2,bogus=1"), std::invalid_argument);
  CHECK_THROWS_AS(TreeSpec::parse("w=two"), std::invalid_argument);
}

TEST_CASE("children: uniform width and depth, deterministic") {
  const GameTree t1(make(2, 1, 7));
  const auto kids = t1.children(t1.root());
  REQUIRE(kids.size() == 2);
  CHECK(kids[0].depth() == 1);
  CHECK(kids[0].path()[0] != kids[1].path()[0]);

  const GameTree t2(make(3, 2, 7));
  const NodeRef c0 = t2.children(t2.root())[0];
  const auto grand = t2.children(c0);
  CHECK(grand.size() == 3);
  for (const NodeRef& g : grand) CHECK(g.depth() == 2);

  const GameTree t2b(make(3, 2, 7));
  CHECK(t2b.children(t2b.root()) == t2.children(t2.root()));
  CHECK(t2b.canonical_order(c0) == t2.canonical_order(c0));
}

TEST_CASE("contract violations on leaves and interior nodes") {
  const GameTree t(make(2, 2, 3));
  const NodeRef leaf = at(t, {0, 1});
  CHECK_THROWS_AS(t.children(leaf), std::logic_error);
  CHECK_THROWS_AS(t.canonical_order(leaf), std::logic_error);
  CHECK_THROWS_AS(t.leaf_value(t.root()), std::logic_error);
  CHECK_NOTHROW(t.leaf_value(leaf));
}

TEST_CASE("depth-0 tree: the root is the leaf") {
  const GameTree t(make(2, 0, 11));
  const int v = t.leaf_value(t.root());
  CHECK(v >= -100);
  CHECK(v <= 100);
  CHECK(minimax_oracle(t, t.root()) == v);
}

TEST_CASE("leaf values stay in range and are pure") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GameTree t(make(3, 4, seed, 0.5, seed % 2 ? 0.7 : 0.0, 9));
    const GameTree again(make(3, 4, seed, 0.5, seed % 2 ? 0.7 : 0.0, 9));
    std::vector<std::uint8_t> p(4);
    for (int i = 0; i < 81; ++i) {
      int x = i;
      for (int k = 3; k >= 0; --k) {
        p[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(x % 3);
        x /= 3;
      }
      const int v = t.leaf_value(at(t, p));
      CHECK(v >= -9);
      CHECK(v <= 9);
      CHECK(again.leaf_value(at(again, p)) == v);
    }
  }
}

TEST_CASE("hand-evaluated w=2,d=2 tree") {
  // Seed found by scanning for leaves (3,-1),(4,2) in move-id order.
  const GameTree t(make(2, 2, 1555, 0.5, 0.0, 4));
  CHECK(t.leaf_value(at(t, {0, 0})) == 3);
  CHECK(t.leaf_value(at(t, {0, 1})) == -1);
  CHECK(t.leaf_value(at(t, {1, 0})) == 4);
  CHECK(t.leaf_value(at(t, {1, 1})) == 2);
  CHECK(minimax_oracle(t, t.root()) == 2);
}

TEST_CASE("oracle agrees with explicit max/min recursion") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const int w = 2 + static_cast<int>(seed % 3);
    const int d = 1 + static_cast<int>(seed % 5);
    const GameTree t(make(w, d, seed, 0.3, 0.4));
    CHECK(minimax_oracle(t, t.root()) == oracle::root_value(t, d));
    // Shallower horizons read interior evaluations.
    CHECK(minimax_oracle(t, t.root(), d - 1) == oracle::root_value(t, d - 1));
  }
}

TEST_CASE("oracle refuses trees beyond its budget") {
  const GameTree t(make(8, 8, 1));
  CHECK_THROWS_AS(minimax_oracle(t, t.root()), OracleBudgetExceeded);
  CHECK_THROWS_AS(minimax_oracle(t, t.root(), 3, 100), OracleBudgetExceeded);
  CHECK(minimax_oracle(t, t.root(), 3) == oracle::root_value(t, 3));
}

TEST_CASE("correlation 0: sibling leaves are uncorrelated") {
  std::vector<double> a, b;
  for (std::uint64_t seed = 1; a.size() < 10000; ++seed) {
    const GameTree t(make(2, 3, seed, 0.5, 0.0));
    for (std::uint8_t i = 0; i < 2; ++i) {
      for (std::uint8_t j = 0; j < 2; ++j) {
        a.push_back(t.leaf_value(at(t, {i, j, 0})));
        b.push_back(t.leaf_value(at(t, {i, j, 1})));
      }
    }
  }
  CHECK(std::abs(oracle::pearson(a, b)) < 0.05);
}

TEST_CASE("correlation 0.9: leaves track their parent's tendency") {
  std::vector<double> parent, leaf;
  for (std::uint64_t seed = 1; leaf.size() < 10000; ++seed) {
    const GameTree t(make(2, 2, seed, 0.5, 0.9));
    for (std::uint8_t i = 0; i < 2; ++i) {
      const NodeRef p = at(t, {i});
      for (std::uint8_t k = 0; k < 2; ++k) {
        parent.push_back(t.tendency(p));
        leaf.push_back(t.leaf_value(t.child(p, k)));  // even ply: MAX's view
      }
    }
  }
  CHECK(oracle::pearson(parent, leaf) > 0.5);
}

TEST_CASE("ordering quality 1: the first child attains the optimum") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const int w = 2 + static_cast<int>(seed % 3);
    const int d = 2 + static_cast<int>(seed % 4);
    const GameTree t(make(w, d, seed, 1.0, 0.0));
    // Every interior node down to depth d-1.
    std::vector<NodeRef> frontier{t.root()};
    while (!frontier.empty()) {
      const NodeRef n = frontier.back();
      frontier.pop_back();
      if (n.depth() == d) continue;
      const auto kids = t.children(n);
      int best = -kInf;
      for (const NodeRef& c : kids) best = std::max(best, -oracle::node_value(t, c, d));
      CHECK(-oracle::node_value(t, kids[0], d) == best);
      for (const NodeRef& c : kids) frontier.push_back(c);
    }
  }
}

TEST_CASE("ordering quality: best-first frequency matches the generator model") {
  // Each node puts its best move first with probability oq and otherwise
  // shuffles uniformly, so the expected first-move-best rate is
  // oq + (1 - oq) * ties / w, with ties the number of optimal children.
  for (double oq : {0.0, 0.5, 0.9}) {
    std::uint64_t nodes = 0;
    double expected = 0;
    std::uint64_t hits = 0;
    for (std::uint64_t seed = 1; nodes < 12000; ++seed) {
      const GameTree t(make(4, 3, seed, oq, 0.0, 1000));
      std::vector<NodeRef> stack{t.root()};
      while (!stack.empty()) {
        const NodeRef n = stack.back();
        stack.pop_back();
        if (n.depth() == 3) continue;
        const auto kids = t.children(n);
        std::vector<int> vals;
        for (const NodeRef& c : kids) vals.push_back(-oracle::node_value(t, c, 3));
        const int best = *std::max_element(vals.begin(), vals.end());
        const auto ties = std::count(vals.begin(), vals.end(), best);
        expected += oq + (1.0 - oq) * static_cast<double>(ties) / 4.0;
        hits += vals[0] == best ? 1 : 0;
        ++nodes;
        for (const NodeRef& c : kids) stack.push_back(c);
      }
    }
    const double rate = static_cast<double>(hits) / static_cast<double>(nodes);
    CHECK(std::abs(rate - expected / static_cast<double>(nodes)) < 0.02);
  }
}

TEST_CASE("ordering quality 0: best child position is uniform (chi-square, alpha=0.01)") {
  const int w = 4;
  std::vector<std::uint64_t> position(w, 0);
  std::uint64_t nodes = 0;
  for (std::uint64_t seed = 1; nodes < 10000; ++seed) {
    const GameTree t(make(w, 2, seed, 0.0, 0.0, 100000));
    for (const NodeRef& n : t.children(t.root())) {
      // Min-to-move node: its best child has the lowest leaf value.
      const auto kids = t.children(n);
      std::size_t arg = 0;
      for (std::size_t i = 1; i < kids.size(); ++i) {
        if (t.leaf_value(kids[i]) < t.leaf_value(kids[arg])) arg = i;
      }
      ++position[arg];
      ++nodes;
    }
  }
  CHECK(oracle::chi_square(position) < oracle::chi_square_critical_001(w - 1));
}

TEST_CASE("w=1: the single child is first") {
  const GameTree t(make(1, 3, 9, 0.0));
  CHECK(t.canonical_order(t.root()).size() == 1);
  CHECK(t.canonical_order(t.root())[0] == 0);
}

TEST_CASE("state keys: root key is mode independent") {
  TreeSpec a = make(3, 3, 1);
  TreeSpec b = make(3, 3, 999);
  b.transpositions = TranspositionModel::Commutative;
  CHECK(GameTree(a).root().key() == GameTree(b).root().key());
}

TEST_CASE("state keys: NONE mode is injective on sampled path pairs") {
  const GameTree t(make(8, 12, 5));
  std::mt19937_64 rng(12345);
  std::unordered_map<std::uint64_t, std::uint64_t> path_of_key;
  std::uint64_t collisions = 0;
  for (int i = 0; i < 1000000; ++i) {
    const int depth = 1 + static_cast<int>(rng() % 12);
    std::vector<std::uint8_t> p(static_cast<std::size_t>(depth));
    std::uint64_t code = static_cast<std::uint64_t>(depth);
    for (auto& m : p) {
      m = static_cast<std::uint8_t>(rng() % 8);
      code = code * 8 + m;
    }
    const std::uint64_t k = t.state_key(t.node(p)).value;
    const auto [it, inserted] = path_of_key.emplace(k, code);
    if (!inserted && it->second != code) ++collisions;
  }
  CHECK(collisions == 0);
}

TEST_CASE("state keys: COMMUTATIVE mode merges permuted paths") {
  TreeSpec s = make(4, 6, 3);
  s.transpositions = TranspositionModel::Commutative;
  const GameTree t(s);
  CHECK(t.state_key(at(t, {0, 1})) == t.state_key(at(t, {1, 0})));
  CHECK(t.state_key(at(t, {2, 0, 3})) == t.state_key(at(t, {3, 2, 0})));
  CHECK(t.state_key(at(t, {0, 1})) != t.state_key(at(t, {0, 2})));
  CHECK(t.leaf_value(at(t, {0, 1, 2, 3, 0, 1})) == t.leaf_value(at(t, {1, 0, 3, 2, 1, 0})));
}

TEST_CASE("COMMUTATIVE w=4,d=6: fewer states than paths") {
  TreeSpec s = make(4, 6, 3);
  s.transpositions = TranspositionModel::Commutative;
  const GameTree t(s);
  std::unordered_set<std::uint64_t> keys;
  std::uint64_t paths = 0;
  std::vector<NodeRef> stack{t.root()};
  while (!stack.empty()) {
    const NodeRef n = stack.back();
    stack.pop_back();
    keys.insert(n.key().value);
    ++paths;
    if (n.depth() < 6) {
      for (const NodeRef& c : t.children(n)) stack.push_back(c);
    }
  }
  CHECK(paths == 5461);
  CHECK(keys.size() < paths);
  // Multisets of size <= 6 over 4 symbols: sum over k of C(k+3, 3).
  CHECK(keys.size() == 210);
}

TEST_CASE("large trees use the proxy ordering and stay deterministic") {
  const GameTree t(make(8, 8, 2, 0.9));
  CHECK_FALSE(t.calibrated());
  const GameTree u(make(8, 8, 2, 0.9));
  const NodeRef n = at(t, {3, 1, 4});
  CHECK(t.canonical_order(n) == u.canonical_order(u.node(n.path())));
  CHECK(GameTree(make(4, 5, 2)).calibrated());
}
