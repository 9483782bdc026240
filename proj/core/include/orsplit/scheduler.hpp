#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "orsplit/program.hpp"
#include "orsplit/sharing.hpp"
#include "orsplit/worker.hpp"

namespace orsplit {

enum class RepositionPolicy {
  kNearestBusy,   // move up until some busy worker is below
  kAllBusyBelow,  // move up until every busy worker is below
};

struct SchedulerConfig {
  int workers = 1;
  int64_t threshold = 1;  // minimum load at which a request is accepted
  Strategy strategy = Strategy::kOriginal;
  bool incremental = true;
  RepositionPolicy reposition = RepositionPolicy::kNearestBusy;
  uint64_t watchdog_ns = 0;  // 0 disables the watchdog
};

struct TraceEvent {
  int run_index = 0;
  uint64_t time_ns = 0;
  WorkerId from = 0;  // requester
  WorkerId to = 0;    // sharer
  Strategy strategy = Strategy::kOriginal;
  uint64_t alts_to_sharer = 0;
  uint64_t alts_to_requester = 0;
  uint64_t bytes_copied = 0;
};

struct RunStats {
  uint64_t sharings = 0;
  uint64_t bytes_copied = 0;
  uint64_t frames_allocated = 0;
};

struct RunResult {
  std::vector<SolutionRecord> solutions;
  std::vector<std::vector<LeafTuple>> worker_explored;
  RunStats stats;
  double seconds = 0.0;
  bool completed = true;  // false when the watchdog fired
  std::vector<TraceEvent> trace;
};

// Everything the workers of one run share.
struct SharedContext {
  SchedulerConfig config;
  const SearchProgram* program = nullptr;
  FrameArena arena;
  FrameIndex root_frame = kNoFrame;
  std::vector<Alternative> root_alternatives;
  std::vector<std::unique_ptr<WorkerState>> workers;

  std::atomic<uint64_t> activity{0};  // bumped on every work acquisition
  std::atomic<bool> terminated{false};
  std::atomic<bool> aborted{false};

  std::mutex trace_mu;
  std::vector<TraceEvent> trace;
  std::chrono::steady_clock::time_point start_time;
  int run_index = 0;

  SharingContext sharing() {
    return {arena, root_frame, config.strategy, config.incremental, config.threshold};
  }
};

// Builds the root frame and bootstraps every worker at the root node. The
// root node's alternatives are dispensed through the root frame's cursor
// under every strategy. Returns false for programs whose initial expansion
// yields no choice (the trivial answer is recorded on worker 0).
bool init_context(SharedContext& ctx, const SearchProgram& program);

// Picks a busy worker whose advertised load exceeds the threshold,
// preferring workers positioned below the idle worker's node. kNoWorker
// when none qualifies.
inline constexpr WorkerId kNoWorker = -1;
WorkerId find_busy_worker(SharedContext& ctx, WorkerState& idle);

// Moves the idle worker up the tree according to the reposition policy,
// undoing bindings as it goes.
void reposition_idle(SharedContext& ctx, WorkerState& idle);

// Posts a request into the target's mailbox. Fails when the slot is taken.
bool post_request(WorkerState& idle, WorkerState& target);

// Target side: drains the mailbox at a safe point, runs the rendezvous or
// denies, and publishes the reply.
void poll_and_serve_requests(SharedContext& ctx, WorkerState& self);

enum class RequestOutcome { kGranted, kDenied };

// Requester side: waits for the reply while denying any request that lands
// in its own mailbox meanwhile.
RequestOutcome await_reply(SharedContext& ctx, WorkerState& idle);

// post + await. kDenied when the slot was busy or the target refused.
RequestOutcome request_accept_cycle(SharedContext& ctx, WorkerState& idle, WorkerId target);

// True exactly when every worker is idle at the root with zero load, no
// request is pending anywhere, the root dispenser is exhausted and no work
// was acquired while checking (generation double-scan).
bool detect_termination(SharedContext& ctx);

// Engine mode until the owned chain is exhausted, then scheduling mode
// until work is granted or the run terminates.
void worker_loop(SharedContext& ctx, WorkerState& w);

// Spawns the configured workers over a program and joins them.
class OrRuntime {
 public:
  explicit OrRuntime(SchedulerConfig config) : config_(config) {}

  RunResult run(const SearchProgram& program, int run_index = 0);

 private:
  SchedulerConfig config_;
};

}  // namespace orsplit
