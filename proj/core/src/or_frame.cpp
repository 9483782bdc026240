#include "orsplit/or_frame.hpp"

#include <cassert>
#include <stdexcept>

namespace orsplit {

FrameIndex FrameArena::alloc(uint64_t node_id, int32_t cursor) {
  std::lock_guard lk(mu_);
  ++allocated_total_;
  FrameIndex idx;
  if (!free_.empty()) {
    idx = free_.back();
    free_.pop_back();
  } else {
    idx = (FrameIndex)slots_.size();
    slots_.push_back(std::make_unique<OrFrame>());
  }
  OrFrame& f = *slots_[idx];
  f.node_id = node_id;
  f.shared_cursor = cursor;
  f.next = kNoFrame;
  f.nearest_livenode = kUnsetLink;
  f.members = 0;
  f.retired = false;
  return idx;
}

OrFrame& FrameArena::at(FrameIndex f) {
  assert(is_real_frame(f));
  std::lock_guard lk(mu_);
  OrFrame& frame = *slots_[f];
  assert(!frame.retired && "frame accessed after retirement");
  return frame;
}

const OrFrame& FrameArena::at(FrameIndex f) const {
  assert(is_real_frame(f));
  std::lock_guard lk(mu_);
  return *slots_[f];
}

void FrameArena::retire(FrameIndex f) {
  std::lock_guard lk(mu_);
  assert(!slots_[f]->retired);
  slots_[f]->retired = true;
  free_.push_back(f);
}

uint64_t FrameArena::allocated_total() const {
  std::lock_guard lk(mu_);
  return allocated_total_;
}

size_t FrameArena::live_count() const {
  std::lock_guard lk(mu_);
  return slots_.size() - free_.size();
}

FrameIndex alloc_or_frame(FrameArena& arena, ChoicePoint& cp, WorkerId owner) {
  if (cp.or_frame != kNoFrame)
    throw std::logic_error("alloc_or_frame: node already has a frame");
  FrameIndex idx = arena.alloc(cp.node_id, cp.alt_cursor);
  OrFrame& f = arena.at(idx);
  {
    std::lock_guard lk(f.guard);
    add_member(f, owner);
  }
  cp.or_frame = idx;
  return idx;
}

std::optional<int32_t> shared_take_alternative(FrameArena& arena, FrameIndex fi,
                                               const ChoicePoint& cp) {
  OrFrame& f = arena.at(fi);
  std::lock_guard lk(f.guard);
  assert(f.node_id == cp.node_id);
  if (f.shared_cursor == kExhausted || f.shared_cursor >= (int32_t)cp.alt_list.size()) {
    f.shared_cursor = kExhausted;
    return std::nullopt;
  }
  return f.shared_cursor++;
}

void leave_node(FrameArena& arena, FrameIndex fi, WorkerId w, FrameIndex& top_or_frame) {
  OrFrame& f = arena.at(fi);
  bool last;
  FrameIndex next;
  {
    std::lock_guard lk(f.guard);
    remove_member(f, w);
    last = f.members == 0;
    next = f.next;
  }
  top_or_frame = next;
  if (last) arena.retire(fi);
}

std::vector<FrameIndex> nearest_live_walk(const FrameArena& arena, FrameIndex start) {
  if (start == kUnsetLink)
    throw std::logic_error("nearest_live_walk: chain not initialized");
  std::vector<FrameIndex> out;
  FrameIndex cur = start;
  while (cur != kDeadEnd) {
    if (cur == kUnsetLink || cur == kNoFrame)
      throw std::logic_error("nearest_live_walk: broken chain link");
    out.push_back(cur);
    cur = arena.at(cur).nearest_livenode;
  }
  return out;
}

}  // namespace orsplit
