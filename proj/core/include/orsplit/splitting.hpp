#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "orsplit/or_frame.hpp"
#include "orsplit/worker.hpp"

namespace orsplit {

struct OwnedAlternative {
  uint64_t node_id = 0;
  int32_t position = 0;
  int64_t code = 0;

  friend auto operator<=>(const OwnedAlternative&, const OwnedAlternative&) = default;
};

// The complementary partition produced by a sharing operation. Under the
// original strategy nothing is pre-assigned: the shared alternatives stay
// communal behind the frame cursors.
struct SplitOutcome {
  std::vector<OwnedAlternative> to_sharer;
  std::vector<OwnedAlternative> to_requester;
  std::vector<OwnedAlternative> communal;
};

// Alternatives a worker owns exclusively right now: the stride view of
// every choice point, skipping frame-dispensed nodes.
std::vector<OwnedAlternative> enumerate_owned(const WorkerState& w, Strategy strategy);

// What remains behind the dispensing cursors of frames on the worker's
// branch (the root frame always dispenses; under the original strategy
// every shared frame does).
std::vector<OwnedAlternative> enumerate_communal(FrameArena& arena, const WorkerState& w,
                                                 Strategy strategy, FrameIndex root_frame);

// Environment of a split: both workers quiescent inside the rendezvous,
// the sharer's registers captured before any stage ran.
struct SplitEnv {
  FrameArena& arena;
  FrameIndex root_frame;
  WorkerState& sharer;
  WorkerState& requester;
  FrameIndex sharer_old_top;   // sharer's top_or_frame before this rendezvous
  int32_t sharer_old_top_cp;   // its index in the sharer's stack
};

// Stack index (in the sharer) of the node the requester is positioned at
// after sharing, per strategy. nullopt means the requester receives no
// position (degenerate split, it keeps its place). Pure: mutates nothing,
// so the copy segments can be bounded before the stages run.
std::optional<int32_t> compute_new_top_cp(const FrameArena& arena, const WorkerState& sharer,
                                          Strategy strategy, FrameIndex sharer_old_top,
                                          int32_t sharer_old_top_cp);

// Vertical splitting. Allocates frames for the sharer's private nodes with
// its own membership rule (youngest frame gets the sharer only), chains
// them alternately into two live-node chains, links to the older frames
// and re-splits the old chain by skipping alternate frames.
// Returns the head of the requester's chain (kDeadEnd when it gets none).
FrameIndex split_vertical(SplitEnv& env);

struct HalfSplitResult {
  int32_t middle_index = kNoParent;  // sharer keeps the middle and younger
  int32_t split_number = 0;          // requester receives this many nodes
  bool middle_was_shared = false;
};

// Half splitting. Renumbers the split counters of the retained half while
// locating the middle node. If the middle is already shared, the chain is
// cut at its frame and the requester is removed from the younger frames;
// otherwise the older private nodes get frames assigned to the requester.
HalfSplitResult split_half(SplitEnv& env);

// Horizontal splitting adjustment, run over one worker's own copy of the
// stack from the youngest shared node to the root node (exclusive). The
// sharing worker seeds adjust = true; the flag toggles at every node,
// exhausted or not.
void adjust_horizontal(EngineState& engine, bool sharing_worker);

// Diagonal splitting adjustment: like horizontal, but the flag toggles
// only after a node whose remaining alternatives under the old stride
// count odd, balancing the global division to within one alternative.
void adjust_diagonal(EngineState& engine, bool sharing_worker);

}  // namespace orsplit
