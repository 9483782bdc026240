#include "orsplit/sharing.hpp"

#include <algorithm>
#include <cassert>
#include <mutex>
#include <unordered_set>

namespace orsplit {

namespace {

// Index in the sharer's stack of the node carrying the given frame, or -1.
int32_t frame_to_index(const WorkerState& w, FrameIndex frame, int32_t from) {
  for (int32_t i = from; i >= 0; --i)
    if (w.engine.cp_stack[(size_t)i].or_frame == frame) return i;
  return -1;
}

std::unordered_set<uint64_t> chain_nodes(FrameArena& arena, FrameIndex head) {
  std::unordered_set<uint64_t> nodes;
  FrameIndex cur = head;
  while (is_real_frame(cur)) {
    nodes.insert(arena.at(cur).node_id);
    cur = arena.at(cur).nearest_livenode;
  }
  return nodes;
}

void deaden_outside(EngineState& e, const std::unordered_set<uint64_t>& keep) {
  for (ChoicePoint& cp : e.cp_stack)
    if (!keep.contains(cp.node_id)) cp.alt_cursor = kExhausted;
}

void deaden_range(EngineState& e, int32_t begin, int32_t end) {  // [begin, end)
  for (int32_t i = begin; i < end; ++i)
    e.cp_stack[(size_t)i].alt_cursor = kExhausted;
}

// Pop the requester's copies above its new position, dropping memberships
// on the way. Frames here always keep the sharer, so none retires.
void position_requester(FrameArena& arena, WorkerState& q, int32_t new_top) {
  EngineState& e = q.engine;
  while (e.b() > new_top) {
    ChoicePoint& cp = e.cp_stack.back();
    if (cp.shared()) {
      OrFrame& f = arena.at(cp.or_frame);
      std::lock_guard lk(f.guard);
      remove_member(f, q.id);
      assert(f.members != 0);
    }
    e.cp_stack.pop_back();
  }
  unwind_to_choice_point(e, e.cp_stack.back());
}

}  // namespace

void sharing_loop(const SharingContext& ctx, WorkerState& sharer, WorkerState& requester,
                  FrameIndex sharer_old_top, int32_t sharer_old_top_cp) {
  bool chain = ctx.strategy == Strategy::kOriginal;
  FrameIndex prev = kNoFrame;
  int32_t cur = sharer.engine.b();
  while (cur != sharer_old_top_cp) {
    ChoicePoint& cp = sharer.engine.cp_stack[(size_t)cur];
    FrameIndex fi = alloc_or_frame(ctx.arena, cp, sharer.id);
    {
      OrFrame& f = ctx.arena.at(fi);
      std::lock_guard lk(f.guard);
      add_member(f, requester.id);
    }
    if (prev != kNoFrame) {
      OrFrame& pf = ctx.arena.at(prev);
      std::lock_guard lk(pf.guard);
      pf.next = fi;
      if (chain) pf.nearest_livenode = fi;
    }
    prev = fi;
    cur = cp.parent;
  }
  if (prev != kNoFrame) {
    OrFrame& pf = ctx.arena.at(prev);
    std::lock_guard lk(pf.guard);
    pf.next = sharer_old_top;
    if (chain)
      pf.nearest_livenode =
          sharer_old_top == ctx.root_frame ? kDeadEnd : sharer_old_top;
  }
}

void membership_update(const SharingContext& ctx, WorkerState&, WorkerState& requester,
                       FrameIndex sharer_old_top, FrameIndex requester_top) {
  FrameIndex cur = sharer_old_top;
  while (cur != requester_top && cur != kNoFrame) {
    OrFrame& f = ctx.arena.at(cur);
    FrameIndex next;
    {
      std::lock_guard lk(f.guard);
      add_member(f, requester.id);
      next = f.next;
    }
    cur = next;
  }
}

void compute_top_or_frames(const SharingContext& ctx, WorkerState& sharer,
                           WorkerState& requester, int32_t sharer_new_top,
                           int32_t requester_new_top) {
  sharer.top_cp = sharer_new_top;
  sharer.top_or_frame = sharer.engine.cp_stack[(size_t)sharer_new_top].or_frame;
  if (requester_new_top >= 0) {
    requester.top_cp = requester_new_top;
    requester.top_or_frame =
        requester.engine.cp_stack[(size_t)requester_new_top].or_frame;
  }
  update_load(sharer, ctx.strategy);
  update_load(requester, ctx.strategy);
}

std::optional<RendezvousReport> share_work(const SharingContext& ctx, WorkerState& p,
                                           WorkerState& q) {
  // Accept-side recheck: the advertised load may be stale.
  if (update_load(p, ctx.strategy) < ctx.threshold) return std::nullopt;

  FrameIndex p_old_top = p.top_or_frame;
  int32_t p_old_top_cp = p.top_cp;
  assert(p_old_top_cp >= 0 &&
         p.engine.cp_stack[(size_t)p_old_top_cp].or_frame == p_old_top);

  // The requester must still sit on the sharer's branch.
  int32_t g = frame_to_index(p, q.top_or_frame, p_old_top_cp);
  if (g < 0) return std::nullopt;
  assert(q.engine.b() == g && "requester not positioned at its top frame");

  std::optional<int32_t> h_opt =
      compute_new_top_cp(ctx.arena, p, ctx.strategy, p_old_top, p_old_top_cp);

  RendezvousReport rep;
  rep.pre_unexplored = enumerate_owned(p, ctx.strategy);
  {
    auto communal = enumerate_communal(ctx.arena, p, ctx.strategy, ctx.root_frame);
    rep.pre_unexplored.insert(rep.pre_unexplored.end(), communal.begin(), communal.end());
  }

  bool relocation = h_opt.has_value() && *h_opt < g;

  // Copy stage. On relocation nothing is copied; the checking phase
  // revalidates the kept choice points against the sharer instead.
  if (h_opt && !relocation) {
    CopySegments seg = compute_copy_segments(p, g, *h_opt, ctx.incremental);
    perform_copy(p, q, seg);
    if (ctx.incremental) {
      install_bindings(p, q, seg);
      sync_uncopied_choice_points(p, q, g);
    }
    rep.bytes_copied = seg.bytes;
  } else if (relocation) {
    sync_uncopied_choice_points(p, q, *h_opt);
  }

  SplitEnv env{ctx.arena, ctx.root_frame, p, q, p_old_top, p_old_top_cp};

  // Frame stages and the strategy split, on the sharer's structures.
  HalfSplitResult half;
  switch (ctx.strategy) {
    case Strategy::kOriginal:
    case Strategy::kHorizontal:
    case Strategy::kDiagonal:
      sharing_loop(ctx, p, q, p_old_top, p_old_top_cp);
      membership_update(ctx, p, q, p_old_top, q.top_or_frame);
      break;
    case Strategy::kVertical:
      split_vertical(env);
      if (h_opt) membership_update(ctx, p, q, p_old_top, q.top_or_frame);
      break;
    case Strategy::kHalf:
      if (h_opt) membership_update(ctx, p, q, p_old_top, q.top_or_frame);
      half = split_half(env);
      break;
  }

  // The copy ran before the frames existed; mirror the frame references.
  for (int32_t i = 0; i <= q.engine.b() && i <= p.engine.b(); ++i)
    q.engine.cp_stack[(size_t)i].or_frame = p.engine.cp_stack[(size_t)i].or_frame;

  // Strategy adjustments over each worker's own copy.
  int32_t p_new_top = p.engine.b();
  switch (ctx.strategy) {
    case Strategy::kOriginal:
      break;
    case Strategy::kHorizontal:
      adjust_horizontal(p.engine, true);
      if (h_opt) adjust_horizontal(q.engine, false);
      break;
    case Strategy::kDiagonal:
      adjust_diagonal(p.engine, true);
      if (h_opt) adjust_diagonal(q.engine, false);
      break;
    case Strategy::kVertical:
      break;  // cursor ownership settled below, per the two chains
    case Strategy::kHalf:
      // The requester's half: every node older than the middle within the
      // sharer's partition goes dead on the sharer.
      deaden_range(p.engine, half.middle_index - half.split_number, half.middle_index);
      break;
  }

  // Position the requester and settle per-node ownership on its side.
  if (h_opt) {
    int32_t h = *h_opt;
    if (relocation) {
      backtrack_only_relocation(ctx.arena, q, h, p_old_top, ctx.root_frame);
    } else {
      position_requester(ctx.arena, q, h);
    }
    if (ctx.strategy == Strategy::kVertical) {
      FrameIndex q_head = q.engine.cp_stack[(size_t)h].or_frame;
      deaden_outside(q.engine, chain_nodes(ctx.arena, q_head));
    }
  }
  if (ctx.strategy == Strategy::kVertical) {
    // The sharer keeps its own chain; nodes on the requester's chain die.
    FrameIndex p_head = p.engine.cp_stack[(size_t)p_new_top].or_frame;
    std::unordered_set<uint64_t> keep = chain_nodes(ctx.arena, p_head);
    for (ChoicePoint& cp : p.engine.cp_stack)
      if (cp.shared() && cp.or_frame != ctx.root_frame && !keep.contains(cp.node_id))
        cp.alt_cursor = kExhausted;
  }

  // Compute the new top or-frames: the sharer's is its youngest frame.
  while (p_new_top > 0 && !p.engine.cp_stack[(size_t)p_new_top].shared()) --p_new_top;
  compute_top_or_frames(ctx, p, q, p_new_top, h_opt ? *h_opt : -1);

  rep.relocated = relocation;
  rep.outcome.to_sharer = enumerate_owned(p, ctx.strategy);
  rep.outcome.to_requester = enumerate_owned(q, ctx.strategy);
  rep.outcome.communal = enumerate_communal(ctx.arena, p, ctx.strategy, ctx.root_frame);
  rep.requester_got_work = !rep.outcome.to_requester.empty();
  return rep;
}

}  // namespace orsplit
