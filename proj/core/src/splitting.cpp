#include "orsplit/splitting.hpp"

#include <cassert>
#include <mutex>

namespace orsplit {

std::vector<OwnedAlternative> enumerate_owned(const WorkerState& w, Strategy strategy) {
  std::vector<OwnedAlternative> out;
  for (const ChoicePoint& cp : w.engine.cp_stack) {
    if (cp.shared() && !is_stack_splitting(strategy)) continue;
    if (cp.alt_cursor == kExhausted) continue;
    for (int32_t pos = cp.alt_cursor; pos < (int32_t)cp.alt_list.size(); pos += cp.offset)
      out.push_back({cp.node_id, pos, cp.alt_list[(size_t)pos].code});
  }
  return out;
}

std::vector<OwnedAlternative> enumerate_communal(FrameArena& arena, const WorkerState& w,
                                                 Strategy strategy, FrameIndex root_frame) {
  std::vector<OwnedAlternative> out;
  for (const ChoicePoint& cp : w.engine.cp_stack) {
    if (!cp.shared()) continue;
    if (cp.or_frame != root_frame && is_stack_splitting(strategy)) continue;
    OrFrame& f = arena.at(cp.or_frame);
    std::lock_guard lk(f.guard);
    if (f.shared_cursor == kExhausted) continue;
    for (int32_t pos = f.shared_cursor; pos < (int32_t)cp.alt_list.size(); ++pos)
      out.push_back({cp.node_id, pos, cp.alt_list[(size_t)pos].code});
  }
  return out;
}

std::optional<int32_t> compute_new_top_cp(const FrameArena& arena, const WorkerState& sharer,
                                          Strategy strategy, FrameIndex sharer_old_top,
                                          int32_t sharer_old_top_cp) {
  const EngineState& e = sharer.engine;
  switch (strategy) {
    case Strategy::kOriginal:
    case Strategy::kHorizontal:
    case Strategy::kDiagonal:
      return e.b();
    case Strategy::kVertical: {
      if (e.b() > sharer_old_top_cp)  // private work: the second choice point
        return e.cp_stack[(size_t)e.b()].parent;
      FrameIndex head = arena.at(sharer_old_top).nearest_livenode;
      if (!is_real_frame(head)) return std::nullopt;
      for (int32_t i = sharer_old_top_cp; i >= 0; --i)
        if (e.cp_stack[(size_t)i].or_frame == head) return i;
      assert(false && "live-node chain left the sharer's branch");
      return std::nullopt;
    }
    case Strategy::kHalf: {
      int32_t cur = e.b();
      int32_t split_number = e.cp_stack[(size_t)cur].split_counter / 2;
      if (split_number == 0) return std::nullopt;
      while (e.cp_stack[(size_t)cur].split_counter != split_number + 1)
        cur = e.cp_stack[(size_t)cur].parent;
      int32_t below = e.cp_stack[(size_t)cur].parent;
      return below >= 0 ? std::optional<int32_t>(below) : std::nullopt;
    }
  }
  return std::nullopt;
}

FrameIndex split_vertical(SplitEnv& env) {
  FrameArena& arena = env.arena;
  EngineState& e = env.sharer.engine;

  FrameIndex next_fr = kNoFrame;
  FrameIndex nearest_fr = kNoFrame;
  FrameIndex current_fr = kNoFrame;
  FrameIndex requester_head = kDeadEnd;

  // Sharing loop over the private choice points, youngest first. The
  // youngest frame keeps only the sharer in its membership.
  int32_t current_cp = e.b();
  while (current_cp != env.sharer_old_top_cp) {
    ChoicePoint& cp = e.cp_stack[(size_t)current_cp];
    current_fr = alloc_or_frame(arena, cp, env.sharer.id);
    if (next_fr != kNoFrame) {
      {
        OrFrame& nf = arena.at(next_fr);
        std::lock_guard lk(nf.guard);
        nf.next = current_fr;
      }
      OrFrame& fr = arena.at(current_fr);
      std::lock_guard lk(fr.guard);
      add_member(fr, env.requester.id);
      if (requester_head == kDeadEnd) requester_head = current_fr;
    }
    if (nearest_fr != kNoFrame) {
      OrFrame& nr = arena.at(nearest_fr);
      std::lock_guard lk(nr.guard);
      nr.nearest_livenode = current_fr;
    }
    nearest_fr = next_fr;
    next_fr = current_fr;
    current_cp = cp.parent;
  }

  // Connecting with the older frames.
  if (next_fr != kNoFrame) {
    FrameIndex link =
        env.sharer_old_top == env.root_frame ? kDeadEnd : env.sharer_old_top;
    {
      OrFrame& nf = arena.at(next_fr);
      std::lock_guard lk(nf.guard);
      nf.nearest_livenode = link;
      nf.next = env.sharer_old_top;
    }
    if (nearest_fr != kNoFrame) {
      OrFrame& nr = arena.at(nearest_fr);
      std::lock_guard lk(nr.guard);
      nr.nearest_livenode = link;
    }
  }

  // Continuing the split over the old shared chain: each frame skips the
  // next live one, which lands on the requester's chain.
  if (next_fr == kNoFrame) current_fr = env.sharer_old_top;
  FrameIndex nearest = arena.at(current_fr).nearest_livenode;
  if (next_fr == kNoFrame) requester_head = nearest;
  while (nearest != kDeadEnd) {
    assert(is_real_frame(nearest));
    FrameIndex skip = arena.at(nearest).nearest_livenode;
    {
      OrFrame& cf = arena.at(current_fr);
      std::lock_guard lk(cf.guard);
      cf.nearest_livenode = skip;
    }
    current_fr = nearest;
    nearest = arena.at(current_fr).nearest_livenode;
  }
  return requester_head;
}

HalfSplitResult split_half(SplitEnv& env) {
  FrameArena& arena = env.arena;
  EngineState& e = env.sharer.engine;

  // Update the split counters: walk from the youngest choice point until
  // the node whose counter equals split_number + 1, the middle.
  int32_t current_cp = e.b();
  int32_t split_number = e.cp_stack[(size_t)current_cp].split_counter / 2;
  while (e.cp_stack[(size_t)current_cp].split_counter != split_number + 1) {
    e.cp_stack[(size_t)current_cp].split_counter -= split_number;
    current_cp = e.cp_stack[(size_t)current_cp].parent;
  }
  e.cp_stack[(size_t)current_cp].split_counter = 1;
  int32_t middle = current_cp;

  FrameIndex middle_fr = e.cp_stack[(size_t)middle].or_frame;
  if (middle_fr != kNoFrame) {
    // Middle already shared: end the sharer's chain there and take the
    // requester out of the younger frames.
    {
      OrFrame& mf = arena.at(middle_fr);
      std::lock_guard lk(mf.guard);
      mf.nearest_livenode = kDeadEnd;
    }
    FrameIndex current_fr = env.sharer_old_top;
    while (current_fr != middle_fr) {
      OrFrame& f = arena.at(current_fr);
      FrameIndex next;
      {
        std::lock_guard lk(f.guard);
        remove_member(f, env.requester.id);
        next = f.next;
      }
      current_fr = next;
    }
    return {middle, split_number, true};
  }

  // Middle private: the older private choice points belong to the
  // requester now, so they get frames, chained consecutively and hooked
  // onto the old chain.
  FrameIndex prev = kNoFrame;
  for (int32_t idx = middle - 1; idx > env.sharer_old_top_cp && idx >= middle - split_number;
       --idx) {
    ChoicePoint& cp = e.cp_stack[(size_t)idx];
    FrameIndex fi = alloc_or_frame(arena, cp, env.sharer.id);
    OrFrame& f = arena.at(fi);
    {
      std::lock_guard lk(f.guard);
      add_member(f, env.requester.id);
    }
    if (prev != kNoFrame) {
      OrFrame& pf = arena.at(prev);
      std::lock_guard lk(pf.guard);
      pf.next = fi;
      pf.nearest_livenode = fi;
    }
    prev = fi;
  }
  if (prev != kNoFrame) {
    FrameIndex link =
        env.sharer_old_top == env.root_frame ? kDeadEnd : env.sharer_old_top;
    OrFrame& pf = arena.at(prev);
    std::lock_guard lk(pf.guard);
    pf.next = env.sharer_old_top;
    pf.nearest_livenode = link;
  }
  return {middle, split_number, false};
}

namespace {

void advance_cursor(ChoicePoint& cp, int32_t step) {
  int32_t next = cp.alt_cursor + step;
  cp.alt_cursor = next < (int32_t)cp.alt_list.size() ? next : kExhausted;
}

}  // namespace

void adjust_horizontal(EngineState& engine, bool sharing_worker) {
  bool adjust = sharing_worker;
  int32_t current_cp = engine.b();
  while (current_cp > 0) {  // loop until the root choice point
    ChoicePoint& cp = engine.cp_stack[(size_t)current_cp];
    if (cp.alt_cursor != kExhausted) {
      int32_t offset = cp.offset;
      cp.offset = offset * 2;
      if (adjust) advance_cursor(cp, offset);
    }
    current_cp = cp.parent;
    adjust = !adjust;  // toggles at every node, exhausted or not
  }
}

void adjust_diagonal(EngineState& engine, bool sharing_worker) {
  bool adjust = sharing_worker;
  int32_t current_cp = engine.b();
  while (current_cp > 0) {
    ChoicePoint& cp = engine.cp_stack[(size_t)current_cp];
    if (cp.alt_cursor != kExhausted) {
      int32_t offset = cp.offset;
      // Remaining alternatives under the old stride, before any advance.
      int32_t n_alts = cp.remaining();
      cp.offset = offset * 2;
      if (adjust) advance_cursor(cp, offset);
      if (n_alts % 2 != 0) adjust = !adjust;  // workers alternate
    }
    current_cp = cp.parent;
  }
}

}  // namespace orsplit
