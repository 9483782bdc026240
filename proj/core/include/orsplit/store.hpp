#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace orsplit {

// Flat integer store standing in for the bindings a worker accumulates
// along its branch. All mutation goes through trailed_write so that any
// earlier point of the computation can be reconstructed by unwinding.
struct Store {
  std::vector<int64_t> cells;
  size_t top_mark = 0;  // one past the highest cell written on this branch

  friend bool operator==(const Store&, const Store&) = default;
};

struct TrailEntry {
  int32_t slot = 0;
  int64_t previous = 0;

  friend bool operator==(const TrailEntry&, const TrailEntry&) = default;
};

using Trail = std::vector<TrailEntry>;

// Writes are always trailed, even when the value does not change.
inline void trailed_write(Store& store, Trail& trail, size_t slot, int64_t value) {
  if (slot >= store.cells.size())
    throw std::out_of_range("trailed_write: slot " + std::to_string(slot) +
                            " outside store of " + std::to_string(store.cells.size()) +
                            " cells");
  trail.push_back({(int32_t)slot, store.cells[slot]});
  store.cells[slot] = value;
  if (slot + 1 > store.top_mark) store.top_mark = slot + 1;
}

// Undoes every write at or after `mark`, youngest first. Restores the
// touched cells exactly to their values when the trail had length `mark`.
inline void unwind_trail(Store& store, Trail& trail, size_t mark) {
  while (trail.size() > mark) {
    const TrailEntry& e = trail.back();
    store.cells[(size_t)e.slot] = e.previous;
    trail.pop_back();
  }
}

}  // namespace orsplit
