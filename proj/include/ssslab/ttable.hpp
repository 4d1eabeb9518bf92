#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ssslab/tree_model.hpp"

namespace ssslab {

// Bounds are from the side to move (negamax). f_plus = kInf / f_minus = -kInf
// mean "no bound".
struct TTEntry {
  StateKey key;
  int depth = 0;
  int f_plus = kInf;
  int f_minus = -kInf;
  std::optional<std::uint8_t> best_move;

  bool exact() const { return f_plus == f_minus; }
  friend bool operator==(const TTEntry&, const TTEntry&) = default;
};

enum class TableMode { Bounded, Lossless };
enum class Replacement { AlwaysReplace };

struct TableConfig {
  TableMode mode = TableMode::Lossless;
  int bits = 20;
  Replacement replacement = Replacement::AlwaysReplace;

  static TableConfig bounded(int bits) { return {TableMode::Bounded, bits, Replacement::AlwaysReplace}; }
  static TableConfig lossless() { return {TableMode::Lossless, 0, Replacement::AlwaysReplace}; }
};

struct TableStats {
  std::uint64_t probes = 0;
  std::uint64_t hits = 0;
  std::uint64_t stores = 0;
  // A probe found its slot occupied by a different key.
  std::uint64_t slot_collisions = 0;
  // A store evicted an entry with a different key.
  std::uint64_t overwrites = 0;
};

// Transposition table with constant-time store/retrieve. BOUNDED mode is a
// direct-mapped array of 2^bits slots with always-replace; LOSSLESS mode is an
// exact key map that never evicts. Single writer.
class TranspositionTable {
 public:
  explicit TranspositionTable(TableConfig config = {});

  const TableConfig& config() const { return config_; }

  // Returns the entry only if the full key matches and it was stored for at
  // least `depth` remaining plies. Only the statistics change.
  std::optional<TTEntry> retrieve(StateKey key, int depth);

  // Best-move hint regardless of stored depth (used for move ordering between
  // iterations). Does not count as a probe.
  std::optional<std::uint8_t> move_hint(StateKey key) const;

  // The stored entry for `key` at any depth, without touching statistics.
  std::optional<TTEntry> peek(StateKey key) const;

  // Throws std::logic_error if entry.f_minus > entry.f_plus.
  void store(const TTEntry& entry);

  void reset();

  const TableStats& stats() const { return stats_; }
  std::size_t occupied() const;
  std::size_t capacity() const;

 private:
  struct Slot {
    TTEntry entry;
    bool used = false;
  };

  std::size_t slot_of(StateKey key) const {
    return static_cast<std::size_t>(key.value & (slots_.size() - 1));
  }

  TableConfig config_;
  std::vector<Slot> slots_;
  std::unordered_map<std::uint64_t, TTEntry> exact_;
  std::size_t used_slots_ = 0;
  TableStats stats_;
};

}  // namespace ssslab
