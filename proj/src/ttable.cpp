#include "ssslab/ttable.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ssslab {

TranspositionTable::TranspositionTable(TableConfig config) : config_(config) {
  if (config_.mode == TableMode::Bounded) {
    if (config_.bits < 0 || config_.bits > 30) {
      throw std::invalid_argument("tt bits must be in [0, 30]");
    }
    slots_.resize(std::size_t{1} << config_.bits);
  }
}

std::optional<TTEntry> TranspositionTable::retrieve(StateKey key, int depth) {
  ++stats_.probes;
  if (config_.mode == TableMode::Lossless) {
    auto it = exact_.find(key.value);
    if (it == exact_.end() || it->second.depth < depth) return std::nullopt;
    ++stats_.hits;
    return it->second;
  }
  const Slot& slot = slots_[slot_of(key)];
  if (!slot.used) return std::nullopt;
  if (slot.entry.key != key) {
    ++stats_.slot_collisions;
    return std::nullopt;
  }
  if (slot.entry.depth < depth) return std::nullopt;
  ++stats_.hits;
  return slot.entry;
}

std::optional<TTEntry> TranspositionTable::peek(StateKey key) const {
  if (config_.mode == TableMode::Lossless) {
    auto it = exact_.find(key.value);
    if (it == exact_.end()) return std::nullopt;
    return it->second;
  }
  const Slot& slot = slots_[slot_of(key)];
  if (!slot.used || slot.entry.key != key) return std::nullopt;
  return slot.entry;
}

std::optional<std::uint8_t> TranspositionTable::move_hint(StateKey key) const {
  if (auto e = peek(key)) return e->best_move;
  return std::nullopt;
}

void TranspositionTable::store(const TTEntry& entry) {
  if (entry.f_minus > entry.f_plus) {
    throw std::logic_error("TT store with f- > f+ (" + std::to_string(entry.f_minus) + " > " +
                           std::to_string(entry.f_plus) + ")");
  }
  ++stats_.stores;
  if (config_.mode == TableMode::Lossless) {
    auto [it, inserted] = exact_.try_emplace(entry.key.value, entry);
    if (inserted) return;
    TTEntry& old = it->second;
    if (entry.depth == old.depth) {
      const int f_plus = std::min(old.f_plus, entry.f_plus);
      const int f_minus = std::max(old.f_minus, entry.f_minus);
      if (f_minus > f_plus) throw std::logic_error("TT merge would produce f- > f+");
      old.f_plus = f_plus;
      old.f_minus = f_minus;
      if (entry.best_move) old.best_move = entry.best_move;
    } else if (entry.depth > old.depth) {
      old = entry;
    }
    return;
  }
  Slot& slot = slots_[slot_of(entry.key)];
  if (!slot.used) {
    ++used_slots_;
  } else if (slot.entry.key != entry.key) {
    ++stats_.overwrites;
  }
  slot.entry = entry;
  slot.used = true;
}

void TranspositionTable::reset() {
  exact_.clear();
  for (Slot& s : slots_) s.used = false;
  used_slots_ = 0;
  stats_ = {};
}

std::size_t TranspositionTable::occupied() const {
  return config_.mode == TableMode::Lossless ? exact_.size() : used_slots_;
}

std::size_t TranspositionTable::capacity() const {
  return config_.mode == TableMode::Lossless ? exact_.size() : slots_.size();
}

}  // namespace ssslab
