#pragma once

#include <cstdint>
#include <vector>

#include "orsplit/types.hpp"

namespace orsplit {

// One node of a worker's stack. alt_cursor and offset together describe the
// stride-visible set of alternatives this worker still owns at the node:
// positions alt_cursor, alt_cursor+offset, ... below alt_list.size().
// Private choice points always have offset 1; splitting doubles it.
struct ChoicePoint {
  uint64_t node_id = 0;
  std::vector<Alternative> alt_list;
  int32_t alt_cursor = 0;      // kExhausted when nothing owned remains
  int32_t offset = 1;          // stride between consecutive owned alternatives
  int32_t split_counter = 1;   // relative depth within the owner's partition
  int32_t parent = kNoParent;  // index of the next older choice point
  FrameIndex or_frame = kNoFrame;
  size_t trail_mark = 0;  // trail length at creation
  size_t store_mark = 0;  // store top_mark at creation

  bool shared() const { return or_frame != kNoFrame; }

  // Stride-visible count of owned alternatives still unexplored here.
  int32_t remaining() const {
    if (alt_cursor == kExhausted) return 0;
    return ((int32_t)alt_list.size() - alt_cursor + offset - 1) / offset;
  }
};

}  // namespace orsplit
