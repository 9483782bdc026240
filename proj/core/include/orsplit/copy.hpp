#pragma once

#include <cstdint>

#include "orsplit/or_frame.hpp"
#include "orsplit/worker.hpp"

namespace orsplit {

// Segments of the sharer's structures to transfer, in the sharer's
// coordinates. Half-open ranges; cp indices, store cells, trail entries.
struct CopySegments {
  size_t cp_begin = 0, cp_end = 0;
  size_t store_begin = 0, store_end = 0;
  size_t trail_begin = 0, trail_end = 0;
  uint64_t bytes = 0;
};

// Bounds the transfer. A full copy takes everything in the sharer's
// stacks. An incremental copy takes only what lies between the common
// node and the requester's new position; the trail is still copied from
// the common node to the top because the installation phase needs it.
CopySegments compute_copy_segments(const WorkerState& sharer, int32_t common_cp,
                                   int32_t new_top_cp, bool incremental);

// Byte-copies the segments into the requester, which keeps everything
// below them. Records the transferred bytes in the requester's counters.
void perform_copy(const WorkerState& sharer, WorkerState& requester,
                  const CopySegments& seg);

// Installation phase: for every copied trail entry recording a write below
// the copied store range, the requester's cell is set to the sharer's
// current value. After this the requester's view of the common region
// matches the sharer's at sharing time.
void install_bindings(const WorkerState& sharer, WorkerState& requester,
                      const CopySegments& seg);

// Synchronizes the split-relevant fields (cursor, stride, split counter)
// of the requester's non-copied choice points from the sharer's, which are
// authoritative for the nodes being divided. Indices [0, upto] inclusive.
void sync_uncopied_choice_points(const WorkerState& sharer, WorkerState& requester,
                                 int32_t upto);

// Relocation without copying: the requester's new position is an ancestor
// of its current one. Walks the frames from the sharer's old top down to
// the new top removing the requester from memberships, truncates the
// requester's stack, and unwinds its bindings.
void backtrack_only_relocation(FrameArena& arena, WorkerState& requester,
                               int32_t new_top, FrameIndex walk_from,
                               FrameIndex root_frame);

// Checking phase after a relocation: revalidates cursor, stride and split
// counter of every remaining choice point against the sharer's.
void checking_phase(const WorkerState& sharer, WorkerState& requester);

}  // namespace orsplit
