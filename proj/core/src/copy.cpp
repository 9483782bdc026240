#include "orsplit/copy.hpp"

#include <algorithm>
#include <cassert>
#include <mutex>

namespace orsplit {

namespace {

uint64_t segment_bytes(const WorkerState& sharer, const CopySegments& seg) {
  uint64_t bytes = 0;
  for (size_t i = seg.cp_begin; i < seg.cp_end; ++i) {
    const ChoicePoint& cp = sharer.engine.cp_stack[i];
    bytes += sizeof(ChoicePoint) + cp.alt_list.size() * sizeof(Alternative);
  }
  bytes += (seg.store_end - seg.store_begin) * sizeof(int64_t);
  bytes += (seg.trail_end - seg.trail_begin) * sizeof(TrailEntry);
  return bytes;
}

}  // namespace

CopySegments compute_copy_segments(const WorkerState& sharer, int32_t common_cp,
                                   int32_t new_top_cp, bool incremental) {
  const EngineState& e = sharer.engine;
  assert(common_cp >= 0 && new_top_cp >= common_cp);
  CopySegments seg;
  if (incremental) {
    const ChoicePoint& common = e.cp_stack[(size_t)common_cp];
    const ChoicePoint& fresh = e.cp_stack[(size_t)new_top_cp];
    seg.cp_begin = (size_t)common_cp + 1;
    seg.cp_end = (size_t)new_top_cp + 1;
    seg.store_begin = common.store_mark;
    seg.store_end = std::max(fresh.store_mark, common.store_mark);
    seg.trail_begin = common.trail_mark;
    seg.trail_end = e.trail.size();
  } else {
    seg.cp_begin = 0;
    seg.cp_end = (size_t)e.b() + 1;
    seg.store_begin = 0;
    seg.store_end = e.store.top_mark;
    seg.trail_begin = 0;
    seg.trail_end = e.trail.size();
  }
  seg.bytes = segment_bytes(sharer, seg);
  return seg;
}

void perform_copy(const WorkerState& sharer, WorkerState& requester,
                  const CopySegments& seg) {
  const EngineState& src = sharer.engine;
  EngineState& dst = requester.engine;

  assert(dst.cp_stack.size() >= seg.cp_begin);
  dst.cp_stack.resize(seg.cp_end);
  for (size_t i = seg.cp_begin; i < seg.cp_end; ++i) dst.cp_stack[i] = src.cp_stack[i];

  for (size_t c = seg.store_begin; c < seg.store_end; ++c)
    dst.store.cells[c] = src.store.cells[c];
  dst.store.top_mark = std::max(dst.store.top_mark, seg.store_end);

  assert(dst.trail.size() >= seg.trail_begin);
  dst.trail.resize(seg.trail_end);
  for (size_t t = seg.trail_begin; t < seg.trail_end; ++t) dst.trail[t] = src.trail[t];

  requester.counters.bytes_copied += seg.bytes;
}

void install_bindings(const WorkerState& sharer, WorkerState& requester,
                      const CopySegments& seg) {
  const EngineState& src = sharer.engine;
  EngineState& dst = requester.engine;
  for (size_t t = seg.trail_begin; t < seg.trail_end; ++t) {
    size_t slot = (size_t)src.trail[t].slot;
    if (slot < seg.store_begin) dst.store.cells[slot] = src.store.cells[slot];
  }
}

void sync_uncopied_choice_points(const WorkerState& sharer, WorkerState& requester,
                                 int32_t upto) {
  for (int32_t i = 0; i <= upto; ++i) {
    const ChoicePoint& src = sharer.engine.cp_stack[(size_t)i];
    ChoicePoint& dst = requester.engine.cp_stack[(size_t)i];
    assert(src.node_id == dst.node_id && "workers disagree on the common branch");
    dst.alt_cursor = src.alt_cursor;
    dst.offset = src.offset;
    dst.split_counter = src.split_counter;
  }
}

void backtrack_only_relocation(FrameArena& arena, WorkerState& requester,
                               int32_t new_top, FrameIndex walk_from,
                               FrameIndex root_frame) {
  EngineState& e = requester.engine;
  assert(new_top >= 0 && new_top <= e.b());
  FrameIndex stop = e.cp_stack[(size_t)new_top].or_frame;
  assert(stop != kNoFrame);

  // Strip memberships over the bypassed frames, including any the
  // membership update added below the requester's old position.
  FrameIndex cur = walk_from;
  while (cur != stop && cur != kNoFrame && cur != root_frame) {
    OrFrame& f = arena.at(cur);
    FrameIndex next;
    {
      std::lock_guard lk(f.guard);
      remove_member(f, requester.id);
      next = f.next;
    }
    cur = next;
  }

  e.cp_stack.resize((size_t)new_top + 1);
  unwind_to_choice_point(e, e.cp_stack.back());
}

void checking_phase(const WorkerState& sharer, WorkerState& requester) {
  sync_uncopied_choice_points(sharer, requester, requester.engine.b());
}

}  // namespace orsplit
