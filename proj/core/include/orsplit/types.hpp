#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>

namespace orsplit {

using WorkerId = int32_t;
using FrameIndex = uint32_t;

inline constexpr int32_t kExhausted = -1;  // alternative cursor sentinel
inline constexpr int32_t kNoParent = -1;

inline constexpr FrameIndex kNoFrame = 0xffffffffu;
inline constexpr FrameIndex kDeadEnd = 0xfffffffeu;    // end of a live-node chain
inline constexpr FrameIndex kUnsetLink = 0xfffffffdu;  // chain link never initialized

inline constexpr int kMaxWorkers = 32;  // membership sets are fixed-capacity bitmasks

inline bool is_real_frame(FrameIndex f) { return f < kUnsetLink; }

// A branch alternative. The code is an opaque token interpreted by the
// search program; within one node all codes are pairwise distinct and the
// same (node, position) always denotes the same alternative.
struct Alternative {
  int64_t code = 0;
  friend bool operator==(Alternative a, Alternative b) = default;
};

// (node, alternative position) pair identifying one explored edge of the
// search tree. Node ids are derived from the path from the root, so they
// are stable across workers and runs.
struct LeafTuple {
  uint64_t node_id = 0;
  int32_t position = 0;
  friend auto operator<=>(const LeafTuple&, const LeafTuple&) = default;
};

inline constexpr uint64_t kRootNodeId = 0x9e3779b97f4a7c15ull;
inline constexpr int32_t kNoPosition = -1;  // leaf produced by the initial expansion

// Identity of the node reached by taking the alternative at `position` from
// node `parent` (splitmix64 finalizer over the path step).
inline uint64_t derive_node_id(uint64_t parent, int32_t position) {
  uint64_t z = parent + 0x9e3779b97f4a7c15ull * (uint64_t)(position + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

enum class Strategy {
  kOriginal,    // shared or-frame dispatch
  kVertical,    // alternate whole choice points between the pair
  kHalf,        // contiguous halves of the choice point chain
  kHorizontal,  // alternate alternatives within each choice point
  kDiagonal     // alternate alternatives across all choice points
};

inline const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kOriginal: return "os";
    case Strategy::kVertical: return "vs";
    case Strategy::kHalf: return "half";
    case Strategy::kHorizontal: return "hs";
    case Strategy::kDiagonal: return "ds";
  }
  return "?";
}

// Whether alternatives at shared nodes are pre-partitioned at sharing time
// (all strategies except the original frame-dispatch one).
inline bool is_stack_splitting(Strategy s) { return s != Strategy::kOriginal; }

}  // namespace orsplit
