#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "orsplit/engine.hpp"
#include "orsplit/or_frame.hpp"
#include "orsplit/types.hpp"

namespace orsplit {

enum class WorkerStatus : uint8_t {
  kEngine,      // running the search engine
  kScheduling,  // looking for work somewhere in the tree
  kIdleAtRoot,  // looking for work, positioned at the root frame
  kRequesting,  // waiting for a sharing reply
  kDone
};

// Reply slot states for the sharing handshake.
inline constexpr int32_t kReplyPending = 0;
inline constexpr int32_t kReplyGranted = 1;
inline constexpr int32_t kReplyDenied = 2;

struct WorkerCounters {
  uint64_t sharings_as_source = 0;
  uint64_t sharings_as_requester = 0;
  uint64_t bytes_copied = 0;
};

// One worker: a private engine plus the registers that delimit the shared
// region of its branch and the scheduler-visible state.
//
// The engine is owned by the worker's thread. During a sharing rendezvous
// the requester is quiescent (spinning on its reply slot) and the source
// worker reads and writes both states; the GRANTED release-store publishes
// everything to the requester.
struct WorkerState {
  WorkerId id = 0;
  EngineState engine;
  int32_t top_cp = kNoParent;          // youngest shared choice point index
  FrameIndex top_or_frame = kNoFrame;  // its frame

  std::atomic<int64_t> load{0};
  std::atomic<WorkerStatus> status{WorkerStatus::kScheduling};
  std::atomic<int32_t> request_from{-1};  // single-slot mailbox, CAS by requesters
  std::atomic<int32_t> reply{kReplyDenied};

  WorkerCounters counters;

  WorkerState() = default;
  WorkerState(const WorkerState&) = delete;
  WorkerState& operator=(const WorkerState&) = delete;
};

// Owned unexplored alternatives: private nodes always count; under stack
// splitting the split-assigned alternatives in shared nodes count too (the
// worker holds them exclusively). Frame-dispensed alternatives, including
// the root frame's, belong to nobody until taken.
int64_t recount_load(const WorkerState& w, Strategy strategy);

// Recounts and publishes the load register.
int64_t update_load(WorkerState& w, Strategy strategy);

}  // namespace orsplit
