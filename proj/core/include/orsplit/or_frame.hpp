#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "orsplit/choice_point.hpp"
#include "orsplit/types.hpp"

namespace orsplit {

// Shared per-node frame through which workers coordinate.
//
// members, shared_cursor and the chain links are mutated only inside guard.
// A worker may read next/nearest_livenode of frames on its own branch
// without the guard after a completed sharing rendezvous: links are frozen
// between rendezvous and the rendezvous handshake publishes them.
struct OrFrame {
  uint64_t node_id = 0;
  int32_t shared_cursor = kExhausted;  // dispensing cursor; consulted under the
                                       // original strategy and on the root frame
  FrameIndex next = kNoFrame;          // next older frame on the branch
  FrameIndex nearest_livenode = kUnsetLink;
  uint32_t members = 0;  // bitmask over worker ids
  bool retired = false;
  std::mutex guard;
};

inline uint32_t member_bit(WorkerId w) { return 1u << (uint32_t)w; }
inline bool is_member(const OrFrame& f, WorkerId w) { return (f.members & member_bit(w)) != 0; }
inline void add_member(OrFrame& f, WorkerId w) { f.members |= member_bit(w); }
inline void remove_member(OrFrame& f, WorkerId w) { f.members &= ~member_bit(w); }

// Arena owning every frame of a run. Frames are referenced by index so
// copied worker states stay valid; retired slots are reused.
class FrameArena {
 public:
  FrameIndex alloc(uint64_t node_id, int32_t cursor);
  OrFrame& at(FrameIndex f);
  const OrFrame& at(FrameIndex f) const;
  void retire(FrameIndex f);

  uint64_t allocated_total() const;  // monotone, for run statistics
  size_t live_count() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::unique_ptr<OrFrame>> slots_;
  std::vector<FrameIndex> free_;
  uint64_t allocated_total_ = 0;
};

// Creates the frame shadowing a private choice point and links it into the
// choice point. Allocating twice for one node is a contract violation.
FrameIndex alloc_or_frame(FrameArena& arena, ChoicePoint& cp, WorkerId owner);

// Takes the next alternative from the frame's dispensing cursor, under the
// guard. Exactly one caller obtains each position.
std::optional<int32_t> shared_take_alternative(FrameArena& arena, FrameIndex f,
                                               const ChoicePoint& cp);

// Removes the worker from the frame's membership; the last leaver retires
// the frame. top_or_frame is moved to the next older frame on the branch.
void leave_node(FrameArena& arena, FrameIndex f, WorkerId w, FrameIndex& top_or_frame);

// Frames reachable from `start` along nearest_livenode, in order, until
// DEAD_END. Hitting an uninitialized link is a contract violation.
std::vector<FrameIndex> nearest_live_walk(const FrameArena& arena, FrameIndex start);

}  // namespace orsplit
