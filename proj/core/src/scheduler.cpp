#include "orsplit/scheduler.hpp"

#include <cassert>
#include <thread>

namespace orsplit {

namespace {

uint64_t now_ns(const SharedContext& ctx) {
  return (uint64_t)std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now() - ctx.start_time)
      .count();
}

bool stop_requested(const SharedContext& ctx) {
  return ctx.aborted.load(std::memory_order_relaxed) ||
         ctx.terminated.load(std::memory_order_relaxed);
}

bool at_root(const SharedContext& ctx, const WorkerState& w) {
  return w.top_or_frame == ctx.root_frame;
}

bool busy(const WorkerState& w) {
  return w.status.load(std::memory_order_acquire) == WorkerStatus::kEngine;
}

uint32_t top_frame_members(SharedContext& ctx, const WorkerState& w) {
  OrFrame& f = ctx.arena.at(w.top_or_frame);
  std::lock_guard lk(f.guard);
  return f.members;
}

bool root_exhausted(SharedContext& ctx) {
  OrFrame& f = ctx.arena.at(ctx.root_frame);
  std::lock_guard lk(f.guard);
  return f.shared_cursor == kExhausted ||
         f.shared_cursor >= (int32_t)ctx.root_alternatives.size();
}

// Strategy-aware take at one choice point. Frame-dispensed nodes (the root
// frame always, every shared frame under the original strategy) go through
// the guarded cursor; split-assigned nodes use the private cursor without
// synchronization.
std::optional<int32_t> strategy_take(SharedContext& ctx, WorkerState& w, ChoicePoint& cp) {
  if (cp.shared() &&
      (cp.or_frame == ctx.root_frame || ctx.config.strategy == Strategy::kOriginal)) {
    auto pos = shared_take_alternative(ctx.arena, cp.or_frame, cp);
    if (pos) ctx.activity.fetch_add(1, std::memory_order_release);
    return pos;
  }
  auto pos = take_next_owned_alternative(cp);
  if (pos) w.load.fetch_sub(1, std::memory_order_release);
  return pos;
}

void deny(WorkerState& requester) {
  requester.reply.store(kReplyDenied, std::memory_order_release);
}

void drain_and_deny(SharedContext& ctx, WorkerState& self) {
  int32_t from = self.request_from.exchange(-1, std::memory_order_acq_rel);
  if (from >= 0) deny(*ctx.workers[(size_t)from]);
}

void record_trace(SharedContext& ctx, WorkerState& p, WorkerState& q,
                  const RendezvousReport& rep) {
  std::lock_guard lk(ctx.trace_mu);
  ctx.trace.push_back({ctx.run_index, now_ns(ctx), q.id, p.id, ctx.config.strategy,
                       rep.outcome.to_sharer.size(), rep.outcome.to_requester.size(),
                       rep.bytes_copied});
}

// Whether the dispensing cursor at the worker's current node still holds
// alternatives. Leaving such a node could strand them, so every ascent
// checks it first.
bool position_dispenser_live(SharedContext& ctx, WorkerState& w) {
  const ChoicePoint& top = w.engine.cp_stack.back();
  if (!top.shared()) return false;
  if (top.or_frame != ctx.root_frame && ctx.config.strategy != Strategy::kOriginal)
    return false;
  OrFrame& f = ctx.arena.at(top.or_frame);
  std::lock_guard lk(f.guard);
  return f.shared_cursor != kExhausted && f.shared_cursor < (int32_t)top.alt_list.size();
}

// One ascent step: pop the current shared node, leave its frame, position
// at the parent.
void ascend_one(SharedContext& ctx, WorkerState& w) {
  EngineState& e = w.engine;
  assert(e.b() > 0 && e.cp_stack.back().shared());
  FrameIndex f = e.cp_stack.back().or_frame;
  e.cp_stack.pop_back();
  leave_node(ctx.arena, f, w.id, w.top_or_frame);
  w.top_cp = e.b();
  unwind_to_choice_point(e, e.cp_stack.back());
  assert(w.top_or_frame == e.cp_stack.back().or_frame);
}

// Ascends toward a node common with the target so the sharing operation
// can bound the copy by our position. Stops early if a live dispenser
// would be left behind.
void ascend_to_common(SharedContext& ctx, WorkerState& idle, WorkerId target) {
  while (!at_root(ctx, idle)) {
    if (top_frame_members(ctx, idle) & member_bit(target)) return;
    if (position_dispenser_live(ctx, idle)) return;
    ascend_one(ctx, idle);
  }
}

// True when the reposition policy is satisfied at the idle worker's node.
bool reposition_satisfied(SharedContext& ctx, WorkerState& idle) {
  uint32_t members = top_frame_members(ctx, idle);
  if (ctx.config.reposition == RepositionPolicy::kNearestBusy) {
    for (auto& wp : ctx.workers)
      if (wp->id != idle.id && busy(*wp) && (members & member_bit(wp->id))) return true;
    return false;
  }
  for (auto& wp : ctx.workers)  // kAllBusyBelow
    if (wp->id != idle.id && busy(*wp) && !(members & member_bit(wp->id))) return false;
  return true;
}

enum class EngineExit { kNoOwnedWork, kStopped };

// Depth-first search over the worker's owned work. Sharing requests are
// polled at choice point creation and at every backtrack step. On exit the
// worker is positioned (trail unwound) at its youngest shared node.
EngineExit engine_run(SharedContext& ctx, WorkerState& w) {
  EngineState& e = w.engine;
  const SearchProgram& program = *ctx.program;
  w.status.store(WorkerStatus::kEngine, std::memory_order_release);

  bool forward = false;
  uint64_t next_node = 0;
  while (true) {
    if (stop_requested(ctx)) return EngineExit::kStopped;
    if (forward) {
      Expansion x = program.expand(e.store);
      switch (x.kind) {
        case Expansion::Kind::kSolution:
          e.record_solution(e.explored.back());
          forward = false;
          break;
        case Expansion::Kind::kFail:
          forward = false;
          break;
        case Expansion::Kind::kChoice: {
          int32_t idx = push_choice_point(e, next_node, std::move(x.alternatives));
          ChoicePoint& cp = e.cp_stack[(size_t)idx];
          w.load.fetch_add((int64_t)cp.alt_list.size(), std::memory_order_release);
          poll_and_serve_requests(ctx, w);
          // A rendezvous here may have shared this node; a frame-dispensed
          // node can even be drained by the requester before we return.
          if (auto pos = strategy_take(ctx, w, cp)) {
            e.explored.push_back({cp.node_id, *pos});
            if (program.apply(e.store, e.trail, cp.alt_list[(size_t)*pos]))
              next_node = derive_node_id(cp.node_id, *pos);
            else
              forward = false;
          } else {
            forward = false;
          }
          break;
        }
      }
    } else {
      if (e.cp_stack.empty()) return EngineExit::kNoOwnedWork;
      ChoicePoint& cp = e.cp_stack.back();
      poll_and_serve_requests(ctx, w);
      if (auto pos = strategy_take(ctx, w, cp)) {
        unwind_to_choice_point(e, cp);
        e.explored.push_back({cp.node_id, *pos});
        if (program.apply(e.store, e.trail, cp.alt_list[(size_t)*pos])) {
          next_node = derive_node_id(cp.node_id, *pos);
          forward = true;
        }
        continue;
      }
      if (!cp.shared()) {
        unwind_to_choice_point(e, cp);
        e.cp_stack.pop_back();
        continue;
      }
      // Shared node with nothing owned here. If owned work remains above,
      // keep ascending; otherwise stop and hold this position.
      if (e.b() > 0 && w.load.load(std::memory_order_acquire) > 0) {
        unwind_to_choice_point(e, cp);
        FrameIndex f = cp.or_frame;
        e.cp_stack.pop_back();
        w.top_cp = e.b();
        leave_node(ctx.arena, f, w.id, w.top_or_frame);
        assert(w.top_or_frame == e.cp_stack.back().or_frame);
        continue;
      }
      unwind_to_choice_point(e, cp);
      w.top_cp = e.b();
      w.top_or_frame = cp.or_frame;
      return EngineExit::kNoOwnedWork;
    }
  }
}

}  // namespace

bool init_context(SharedContext& ctx, const SearchProgram& program) {
  ctx.program = &program;
  ctx.start_time = std::chrono::steady_clock::now();

  Expansion x = program.expand(program.initial_store);
  bool has_choice = x.kind == Expansion::Kind::kChoice && !x.alternatives.empty();
  ctx.root_alternatives = std::move(x.alternatives);
  ctx.root_frame = ctx.arena.alloc(kRootNodeId, has_choice ? 0 : kExhausted);
  {
    OrFrame& root = ctx.arena.at(ctx.root_frame);
    std::lock_guard lk(root.guard);
    root.nearest_livenode = kDeadEnd;
    for (int i = 0; i < ctx.config.workers; ++i) add_member(root, (WorkerId)i);
  }

  for (int i = 0; i < ctx.config.workers; ++i) {
    auto w = std::make_unique<WorkerState>();
    w->id = (WorkerId)i;
    w->engine.store = program.initial_store;
    ChoicePoint root;
    root.node_id = kRootNodeId;
    root.alt_list = ctx.root_alternatives;
    root.alt_cursor = kExhausted;  // dispensed through the root frame
    root.split_counter = 1;
    root.or_frame = ctx.root_frame;
    root.store_mark = program.initial_store.top_mark;
    w->engine.cp_stack.push_back(std::move(root));
    w->top_cp = 0;
    w->top_or_frame = ctx.root_frame;
    w->status.store(WorkerStatus::kScheduling, std::memory_order_relaxed);
    ctx.workers.push_back(std::move(w));
  }

  if (!has_choice && x.kind == Expansion::Kind::kSolution)
    ctx.workers[0]->engine.record_solution({kRootNodeId, kNoPosition});
  return has_choice;
}

WorkerId find_busy_worker(SharedContext& ctx, WorkerState& idle) {
  uint32_t below = top_frame_members(ctx, idle);
  WorkerId best = kNoWorker;
  int64_t best_load = ctx.config.threshold;  // candidates need load > threshold
  bool best_below = false;
  for (auto& wp : ctx.workers) {
    WorkerState& w = *wp;
    if (w.id == idle.id || !busy(w)) continue;
    int64_t load = w.load.load(std::memory_order_acquire);
    if (load <= ctx.config.threshold) continue;
    bool is_below = (below & member_bit(w.id)) != 0;
    if (best == kNoWorker || (is_below && !best_below) ||
        (is_below == best_below && load > best_load)) {
      best = w.id;
      best_load = load;
      best_below = is_below;
    }
  }
  return best;
}

void reposition_idle(SharedContext& ctx, WorkerState& idle) {
  while (!at_root(ctx, idle)) {
    if (position_dispenser_live(ctx, idle)) return;  // take it before moving up
    if (reposition_satisfied(ctx, idle)) return;
    ascend_one(ctx, idle);
  }
}

bool post_request(WorkerState& idle, WorkerState& target) {
  idle.reply.store(kReplyPending, std::memory_order_relaxed);
  int32_t expected = -1;
  return target.request_from.compare_exchange_strong(expected, idle.id,
                                                     std::memory_order_acq_rel);
}

void poll_and_serve_requests(SharedContext& ctx, WorkerState& self) {
  int32_t from = self.request_from.load(std::memory_order_acquire);
  if (from < 0) return;
  self.request_from.store(-1, std::memory_order_relaxed);
  WorkerState& q = *ctx.workers[(size_t)from];
  auto rep = share_work(ctx.sharing(), self, q);
  if (!rep) {
    deny(q);
    return;
  }
  self.counters.sharings_as_source++;
  q.counters.sharings_as_requester++;
  record_trace(ctx, self, q, *rep);
  ctx.activity.fetch_add(1, std::memory_order_release);
  q.reply.store(kReplyGranted, std::memory_order_release);
}

RequestOutcome await_reply(SharedContext& ctx, WorkerState& idle) {
  idle.status.store(WorkerStatus::kRequesting, std::memory_order_release);
  while (true) {
    int32_t r = idle.reply.load(std::memory_order_acquire);
    if (r == kReplyGranted || r == kReplyDenied) {
      idle.status.store(WorkerStatus::kScheduling, std::memory_order_release);
      return r == kReplyGranted ? RequestOutcome::kGranted : RequestOutcome::kDenied;
    }
    drain_and_deny(ctx, idle);  // two idle workers must not wait on each other
    if (ctx.aborted.load(std::memory_order_relaxed)) return RequestOutcome::kDenied;
    std::this_thread::yield();
  }
}

RequestOutcome request_accept_cycle(SharedContext& ctx, WorkerState& idle, WorkerId target) {
  if (!post_request(idle, *ctx.workers[(size_t)target])) return RequestOutcome::kDenied;
  return await_reply(ctx, idle);
}

bool detect_termination(SharedContext& ctx) {
  auto quiet = [&ctx] {
    if (!root_exhausted(ctx)) return false;
    for (auto& wp : ctx.workers) {
      WorkerStatus s = wp->status.load(std::memory_order_acquire);
      if (s != WorkerStatus::kIdleAtRoot && s != WorkerStatus::kDone) return false;
      if (wp->load.load(std::memory_order_acquire) != 0) return false;
      if (wp->request_from.load(std::memory_order_acquire) >= 0) return false;
    }
    return true;
  };
  uint64_t gen = ctx.activity.load(std::memory_order_acquire);
  if (!quiet()) return false;
  if (ctx.activity.load(std::memory_order_acquire) != gen) return false;
  return quiet();
}

void worker_loop(SharedContext& ctx, WorkerState& w) {
  while (!stop_requested(ctx)) {
    if (engine_run(ctx, w) == EngineExit::kStopped) break;

    // Owned chain exhausted; scheduling mode from the current position.
    w.status.store(at_root(ctx, w) ? WorkerStatus::kIdleAtRoot : WorkerStatus::kScheduling,
                   std::memory_order_release);
    drain_and_deny(ctx, w);

    // A still-live dispensing cursor at this node means immediate work.
    if (position_dispenser_live(ctx, w)) continue;  // engine_run takes it

    WorkerId target = find_busy_worker(ctx, w);
    if (target != kNoWorker) {
      ascend_to_common(ctx, w, target);
      if (position_dispenser_live(ctx, w)) continue;
      if (top_frame_members(ctx, w) & member_bit(target)) {
        if (request_accept_cycle(ctx, w, target) == RequestOutcome::kGranted) continue;
      }
      std::this_thread::yield();
      continue;
    }

    if (at_root(ctx, w)) {
      if (detect_termination(ctx)) {
        ctx.terminated.store(true, std::memory_order_release);
        break;
      }
      std::this_thread::yield();
    } else {
      reposition_idle(ctx, w);
      std::this_thread::yield();
    }
  }
  drain_and_deny(ctx, w);
  w.status.store(WorkerStatus::kDone, std::memory_order_release);
}

RunResult OrRuntime::run(const SearchProgram& program, int run_index) {
  SharedContext ctx;
  ctx.config = config_;
  ctx.run_index = run_index;
  assert(config_.workers >= 1 && config_.workers <= kMaxWorkers);

  RunResult result;
  auto t0 = std::chrono::steady_clock::now();
  bool has_choice = init_context(ctx, program);

  if (has_choice) {
    std::atomic<int> running{ctx.config.workers};
    std::vector<std::thread> threads;
    threads.reserve((size_t)ctx.config.workers);
    for (auto& wp : ctx.workers)
      threads.emplace_back([&ctx, &running, w = wp.get()] {
        worker_loop(ctx, *w);
        running.fetch_sub(1, std::memory_order_release);
      });

    while (running.load(std::memory_order_acquire) > 0) {
      if (config_.watchdog_ns > 0) {
        auto elapsed = (uint64_t)std::chrono::duration_cast<std::chrono::nanoseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
        if (elapsed > config_.watchdog_ns) ctx.aborted.store(true, std::memory_order_release);
      }
      std::this_thread::yield();
    }
    for (auto& t : threads) t.join();
  }
  auto t1 = std::chrono::steady_clock::now();

  result.seconds = std::chrono::duration<double>(t1 - t0).count();
  result.completed = !ctx.aborted.load(std::memory_order_relaxed);
  for (auto& wp : ctx.workers) {
    auto& sols = wp->engine.solutions;
    result.solutions.insert(result.solutions.end(), sols.begin(), sols.end());
    result.worker_explored.push_back(wp->engine.explored);
    result.stats.sharings += wp->counters.sharings_as_source;
    result.stats.bytes_copied += wp->counters.bytes_copied;
  }
  result.stats.frames_allocated = ctx.arena.allocated_total();
  result.trace = std::move(ctx.trace);
  return result;
}

}  // namespace orsplit
