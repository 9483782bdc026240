#pragma once

#include <cstdint>
#include <optional>

#include "orsplit/copy.hpp"
#include "orsplit/or_frame.hpp"
#include "orsplit/splitting.hpp"
#include "orsplit/worker.hpp"

namespace orsplit {

struct SharingContext {
  FrameArena& arena;
  FrameIndex root_frame;
  Strategy strategy = Strategy::kOriginal;
  bool incremental = true;
  int64_t threshold = 1;
};

struct RendezvousReport {
  SplitOutcome outcome;
  std::vector<OwnedAlternative> pre_unexplored;  // sharer-owned plus communal, before
  uint64_t bytes_copied = 0;
  bool relocated = false;       // requester moved up without copying
  bool requester_got_work = false;
};

// The work-sharing rendezvous, executed by the sharer's thread while the
// requester is quiescent. Stages run in order: copy, sharing loop,
// membership update, strategy split, compute top or-frames. Returns
// nullopt when the request is denied (load below threshold, or the
// requester's position is no longer on the sharer's branch).
std::optional<RendezvousReport> share_work(const SharingContext& ctx, WorkerState& sharer,
                                           WorkerState& requester);

// Stage: allocate a frame for every private node of the sharer, both
// workers in every membership, frames chained through next and, for the
// original strategy, through nearest_livenode as well. Used by the
// original, horizontal and diagonal strategies; vertical and half
// splitting allocate inside their split procedures.
void sharing_loop(const SharingContext& ctx, WorkerState& sharer, WorkerState& requester,
                  FrameIndex sharer_old_top, int32_t sharer_old_top_cp);

// Stage: add the requester to the old frames between the sharer's
// pre-sharing top and the requester's position.
void membership_update(const SharingContext& ctx, WorkerState& sharer,
                       WorkerState& requester, FrameIndex sharer_old_top,
                       FrameIndex requester_top);

// Stage: set both workers' top_cp/top_or_frame registers after the split.
void compute_top_or_frames(const SharingContext& ctx, WorkerState& sharer,
                           WorkerState& requester, int32_t sharer_new_top,
                           int32_t requester_new_top);

}  // namespace orsplit
