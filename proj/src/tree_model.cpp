#include "ssslab/tree_model.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <system_error>

namespace ssslab {

namespace {

constexpr std::uint64_t kRootKey = 0x6a09e667f3bcc908ULL;
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t kSaltValue = 1;
constexpr std::uint64_t kSaltOrder = 2;
constexpr std::uint64_t kSaltShuffle = 3;

constexpr std::uint64_t mix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_interval(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Uniform in [0, n) for n <= 2^32.
std::uint32_t below(std::uint64_t h, std::uint32_t n) {
  return static_cast<std::uint32_t>(((h >> 32) * n) >> 32);
}

std::uint64_t commutative_key(std::uint64_t acc, int depth) {
  if (depth == 0) return kRootKey;
  return mix64(acc ^ (static_cast<std::uint64_t>(depth) * 0xd6e8feb86659fd93ULL));
}

std::uint64_t move_token(std::uint8_t move) {
  return mix64(0x3c6ef372fe94f82bULL + move);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw std::invalid_argument("bad value for '" + std::string(key) + "': '" +
                                std::string(text) + "'");
  }
  return value;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::uint64_t saturating_power(int base, int exponent) {
  std::uint64_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(base)) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result *= static_cast<std::uint64_t>(base);
  }
  return result;
}

// ---------------------------------------------------------------------------
// TreeSpec
// ---------------------------------------------------------------------------

void TreeSpec::validate() const {
  if (width < 1 || width > kMaxWidth) {
    throw std::invalid_argument("width must be in [1, " + std::to_string(kMaxWidth) + "]");
  }
  if (depth < 0 || depth > kMaxDepth) {
    throw std::invalid_argument("depth must be in [0, " + std::to_string(kMaxDepth) + "]");
  }
  if (value_max < 1 || value_max > kMaxValue) {
    throw std::invalid_argument("value_max must be in [1, " + std::to_string(kMaxValue) + "]");
  }
  if (!(ordering_quality >= 0.0 && ordering_quality <= 1.0)) {
    throw std::invalid_argument("ordering_quality must be in [0, 1]");
  }
  if (!(correlation >= 0.0 && correlation <= 1.0)) {
    throw std::invalid_argument("correlation must be in [0, 1]");
  }
}

std::string TreeSpec::to_string() const {
  std::string out;
  out += "w=" + std::to_string(width);
  out += ",d=" + std::to_string(depth);
  out += ",seed=" + std::to_string(seed);
  out += ",vmax=" + std::to_string(value_max);
  out += ",oq=" + format_double(ordering_quality);
  out += ",corr=" + format_double(correlation);
  out += transpositions == TranspositionModel::None ? ",tx=none" : ",tx=comm";
  return out;
}

TreeSpec TreeSpec::parse(std::string_view text) {
  TreeSpec spec;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto field = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (field.empty()) continue;

    const auto eq = field.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("expected key=value, got '" + std::string(field) + "'");
    }
    const auto key = field.substr(0, eq);
    const auto value = field.substr(eq + 1);
    if (key == "w") {
      spec.width = parse_number<int>(key, value);
    } else if (key == "d") {
      spec.depth = parse_number<int>(key, value);
    } else if (key == "seed") {
      spec.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "vmax") {
      spec.value_max = parse_number<int>(key, value);
    } else if (key == "oq") {
      spec.ordering_quality = parse_number<double>(key, value);
    } else if (key == "corr") {
      spec.correlation = parse_number<double>(key, value);
    } else if (key == "tx") {
      if (value == "none") {
        spec.transpositions = TranspositionModel::None;
      } else if (value == "comm") {
        spec.transpositions = TranspositionModel::Commutative;
      } else {
        throw std::invalid_argument("tx must be none or comm");
      }
    } else {
      throw std::invalid_argument("unknown tree field '" + std::string(key) + "'");
    }
  }
  spec.validate();
  return spec;
}

std::uint64_t TreeSpec::leaf_count() const { return saturating_power(width, depth); }

// ---------------------------------------------------------------------------
// MoveList / NodeRef
// ---------------------------------------------------------------------------

MoveList::MoveList(std::size_t n) : size_(n) {
  for (std::size_t i = 0; i < n; ++i) moves_[i] = static_cast<std::uint8_t>(i);
}

bool NodeRef::is_proper_ancestor_of(const NodeRef& other) const {
  return depth_ < other.depth_ &&
         std::equal(path_.begin(), path_.begin() + depth_, other.path_.begin());
}

std::string NodeRef::path_string() const {
  std::string out = "[";
  for (int i = 0; i < depth_; ++i) {
    if (i > 0) out += ',';
    out += std::to_string(path_[static_cast<std::size_t>(i)]);
  }
  out += ']';
  return out;
}

// ---------------------------------------------------------------------------
// GameTree
// ---------------------------------------------------------------------------

GameTree::GameTree(TreeSpec spec) : spec_(spec) {
  spec_.validate();
  calibrated_ = spec_.leaf_count() <= kOracleLeafBudget;
  if (!calibrated_) return;

  if (spec_.transpositions == TranspositionModel::None) {
    level_orders_.resize(static_cast<std::size_t>(spec_.depth));
    for (int level = 0; level < spec_.depth; ++level) {
      level_orders_[static_cast<std::size_t>(level)].resize(
          static_cast<std::size_t>(saturating_power(spec_.width, level + 1)));
    }
  }
  std::unordered_map<std::uint64_t, int> memo;
  materialize(root(), memo);
}

std::uint64_t GameTree::node_hash(std::uint64_t key, std::uint64_t salt, std::uint64_t i) const {
  const std::uint64_t base = mix64(key ^ mix64(spec_.seed ^ 0xa54ff53a5f1d36f1ULL));
  return mix64(base + salt * 0x510e527fade682d1ULL + i * kGolden);
}

NodeRef GameTree::root() const {
  NodeRef n;
  n.key_ = kRootKey;
  const double u = unit_interval(node_hash(kRootKey, kSaltValue, 0));
  n.tendency_ = (2.0 * u - 1.0) * spec_.value_max;
  return n;
}

void GameTree::init_child(const NodeRef& parent, std::uint8_t move, NodeRef& out) const {
  out.path_ = parent.path_;
  out.path_[parent.depth_] = move;
  out.depth_ = static_cast<std::uint8_t>(parent.depth_ + 1);
  out.index_ = parent.index_ * static_cast<std::uint64_t>(spec_.width) + move;

  if (spec_.transpositions == TranspositionModel::None) {
    out.key_ = mix64(parent.key_ ^ ((move + std::uint64_t{1}) * kGolden));
    out.acc_ = 0;
    const double u = unit_interval(node_hash(out.key_, kSaltValue, 0));
    const double noise = (2.0 * u - 1.0) * spec_.value_max;
    out.tendency_ = spec_.correlation * parent.tendency_ + (1.0 - spec_.correlation) * noise;
  } else {
    out.acc_ = parent.acc_ + move_token(move);
    out.key_ = commutative_key(out.acc_, out.depth_);
    out.tendency_ = commutative_tendency(out);
  }
}

// The state is the move multiset, so the tendency recursion runs along the
// sorted path: each state inherits from the state without its largest move.
double GameTree::commutative_tendency(const NodeRef& n) const {
  std::array<std::uint8_t, kMaxDepth> sorted{};
  std::copy(n.path_.begin(), n.path_.begin() + n.depth_, sorted.begin());
  std::sort(sorted.begin(), sorted.begin() + n.depth_);

  double t = root().tendency_;
  std::uint64_t acc = 0;
  for (int i = 0; i < n.depth_; ++i) {
    acc += move_token(sorted[static_cast<std::size_t>(i)]);
    const std::uint64_t key = commutative_key(acc, i + 1);
    const double u = unit_interval(node_hash(key, kSaltValue, 0));
    const double noise = (2.0 * u - 1.0) * spec_.value_max;
    t = spec_.correlation * t + (1.0 - spec_.correlation) * noise;
  }
  return t;
}

NodeRef GameTree::node(std::span<const std::uint8_t> path) const {
  if (path.size() > static_cast<std::size_t>(spec_.depth)) {
    throw std::invalid_argument("path longer than tree depth");
  }
  NodeRef n = root();
  for (std::uint8_t m : path) {
    if (m >= spec_.width) throw std::invalid_argument("move index out of range");
    NodeRef next;
    init_child(n, m, next);
    n = next;
  }
  return n;
}

NodeRef GameTree::parent(const NodeRef& n) const {
  if (n.is_root()) throw std::logic_error("root has no parent");
  return node(n.path().first(static_cast<std::size_t>(n.depth() - 1)));
}

NodeRef GameTree::child(const NodeRef& n, std::uint8_t move) const {
  if (n.depth() >= spec_.depth) throw std::logic_error("child() called on a leaf");
  if (move >= spec_.width) throw std::invalid_argument("move index out of range");
  NodeRef c;
  init_child(n, move, c);
  return c;
}

std::vector<NodeRef> GameTree::children(const NodeRef& n) const {
  const MoveList order = canonical_order(n);
  std::vector<NodeRef> out;
  out.reserve(order.size());
  for (std::uint8_t m : order) out.push_back(child(n, m));
  return out;
}

MoveList GameTree::canonical_order(const NodeRef& n) const {
  if (n.depth() >= spec_.depth) throw std::logic_error("canonical_order() called on a leaf");
  if (!calibrated_) return draw_order(n, proxy_best(n));

  const auto w = static_cast<std::size_t>(spec_.width);
  const std::uint8_t* src = nullptr;
  if (spec_.transpositions == TranspositionModel::None) {
    src = level_orders_[static_cast<std::size_t>(n.depth())].data() + n.index_ * w;
  } else {
    src = state_orders_.data() + state_offsets_.at(n.key_);
  }
  MoveList out;
  for (std::size_t i = 0; i < w; ++i) out.push_back(src[i]);
  return out;
}

// With probability ordering_quality the best move leads; otherwise the whole
// list is a uniform shuffle (so the best move still lands first 1/w of the time).
MoveList GameTree::draw_order(const NodeRef& n, std::uint8_t best) const {
  const auto w = static_cast<std::uint32_t>(spec_.width);
  MoveList order(w);
  std::uint32_t fixed = 0;
  if (unit_interval(node_hash(n.key_, kSaltOrder, 0)) < spec_.ordering_quality) {
    std::swap(order[0], order[best]);
    // keep the others in id order before shuffling
    std::sort(order.begin() + 1, order.end());
    fixed = 1;
  }
  for (std::uint32_t i = w; i > fixed + 1; --i) {
    const std::uint32_t j = fixed + below(node_hash(n.key_, kSaltShuffle, i), i - fixed);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

std::uint8_t GameTree::proxy_best(const NodeRef& n) const {
  const bool maximize = is_max_ply(n.depth());
  std::uint8_t best = 0;
  double best_t = 0.0;
  for (int m = 0; m < spec_.width; ++m) {
    NodeRef c;
    init_child(n, static_cast<std::uint8_t>(m), c);
    const double t = c.tendency_;
    if (m == 0 || (maximize ? t > best_t : t < best_t)) {
      best = static_cast<std::uint8_t>(m);
      best_t = t;
    }
  }
  return best;
}

int GameTree::materialize(const NodeRef& n, std::unordered_map<std::uint64_t, int>& memo) {
  if (n.depth() == spec_.depth) return evaluate(n);

  const bool commutative = spec_.transpositions == TranspositionModel::Commutative;
  if (commutative) {
    if (auto it = memo.find(n.key_); it != memo.end()) return it->second;
  }

  int best_value = -kInf;
  std::uint8_t best = 0;
  for (int m = 0; m < spec_.width; ++m) {
    NodeRef c;
    init_child(n, static_cast<std::uint8_t>(m), c);
    const int v = -materialize(c, memo);
    if (v > best_value) {
      best_value = v;
      best = static_cast<std::uint8_t>(m);
    }
  }

  const MoveList order = draw_order(n, best);
  if (commutative) {
    memo.emplace(n.key_, best_value);
    state_offsets_.emplace(n.key_, static_cast<std::uint32_t>(state_orders_.size()));
    state_orders_.insert(state_orders_.end(), order.begin(), order.end());
  } else {
    auto& level = level_orders_[static_cast<std::size_t>(n.depth())];
    std::copy(order.begin(), order.end(),
              level.begin() + static_cast<std::ptrdiff_t>(n.index_ * static_cast<std::uint64_t>(spec_.width)));
  }
  return best_value;
}

int GameTree::evaluate(const NodeRef& n) const {
  auto v = static_cast<int>(std::lround(n.tendency_));
  v = std::clamp(v, -spec_.value_max, spec_.value_max);
  return is_max_ply(n.depth()) ? v : -v;
}

int GameTree::leaf_value(const NodeRef& n) const {
  if (n.depth() != spec_.depth) throw std::logic_error("leaf_value() called on an interior node");
  return evaluate(n);
}

// ---------------------------------------------------------------------------
// Oracle
// ---------------------------------------------------------------------------

namespace {

int negamax(const GameTree& tree, const NodeRef& n, int horizon) {
  if (horizon == 0) return tree.evaluate(n);
  int best = -kInf;
  for (int m = 0; m < tree.spec().width; ++m) {
    best = std::max(best, -negamax(tree, tree.child(n, static_cast<std::uint8_t>(m)), horizon - 1));
  }
  return best;
}

}  // namespace

int minimax_oracle(const GameTree& tree, const NodeRef& n, int horizon, std::uint64_t leaf_budget) {
  if (horizon < 0) horizon = tree.spec().depth - n.depth();
  if (n.depth() + horizon > tree.spec().depth) {
    throw std::invalid_argument("oracle horizon runs past the tree depth");
  }
  const std::uint64_t leaves = saturating_power(tree.spec().width, horizon);
  if (leaves > leaf_budget) {
    throw OracleBudgetExceeded("oracle refused: " + std::to_string(leaves) +
                               " leaves exceeds budget of " + std::to_string(leaf_budget));
  }
  return negamax(tree, n, horizon);
}

}  // namespace ssslab
