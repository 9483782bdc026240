#include "orsplit/engine.hpp"

#include <cassert>
#include <utility>

namespace orsplit {

int32_t push_choice_point(EngineState& engine, uint64_t node_id,
                          std::vector<Alternative> alts) {
  assert(!alts.empty() && "choice points hold at least one alternative");
  ChoicePoint cp;
  cp.node_id = node_id;
  cp.alt_list = std::move(alts);
  cp.alt_cursor = 0;
  cp.offset = 1;
  cp.parent = engine.b();
  cp.split_counter =
      engine.cp_stack.empty() ? 1 : engine.cp_stack.back().split_counter + 1;
  cp.trail_mark = engine.trail.size();
  cp.store_mark = engine.store.top_mark;
  engine.cp_stack.push_back(std::move(cp));
  return engine.b();
}

std::optional<int32_t> take_next_owned_alternative(ChoicePoint& cp) {
  if (cp.alt_cursor == kExhausted) return std::nullopt;
  int32_t pos = cp.alt_cursor;
  if (pos >= (int32_t)cp.alt_list.size()) {  // stale cursor from an old stride
    cp.alt_cursor = kExhausted;
    return std::nullopt;
  }
  int32_t next = pos + cp.offset;
  cp.alt_cursor = next < (int32_t)cp.alt_list.size() ? next : kExhausted;
  return pos;
}

void unwind_to_choice_point(EngineState& engine, const ChoicePoint& cp) {
  unwind_trail(engine.store, engine.trail, cp.trail_mark);
  engine.store.top_mark = cp.store_mark;
}

BacktrackOutcome backtrack_private(EngineState& engine, const SearchProgram& program) {
  while (!engine.cp_stack.empty()) {
    ChoicePoint& cp = engine.cp_stack.back();
    if (auto pos = take_next_owned_alternative(cp)) {
      unwind_to_choice_point(engine, cp);
      engine.explored.push_back({cp.node_id, *pos});
      if (program.apply(engine.store, engine.trail, cp.alt_list[(size_t)*pos]))
        return BacktrackOutcome::kContinue;
      continue;  // failed application, keep backtracking here
    }
    unwind_to_choice_point(engine, cp);
    engine.cp_stack.pop_back();
  }
  return BacktrackOutcome::kTreeExhausted;
}

SequentialResult run_sequential(const SearchProgram& program) {
  EngineState engine;
  engine.store = program.initial_store;

  uint64_t next_node = kRootNodeId;
  bool forward = true;
  while (true) {
    if (forward) {
      Expansion x = program.expand(engine.store);
      switch (x.kind) {
        case Expansion::Kind::kSolution:
          engine.record_solution(engine.explored.empty()
                                     ? LeafTuple{kRootNodeId, kNoPosition}
                                     : engine.explored.back());
          forward = false;
          break;
        case Expansion::Kind::kFail:
          forward = false;
          break;
        case Expansion::Kind::kChoice: {
          int32_t idx = push_choice_point(engine, next_node, std::move(x.alternatives));
          ChoicePoint& cp = engine.cp_stack[(size_t)idx];
          int32_t pos = *take_next_owned_alternative(cp);
          engine.explored.push_back({cp.node_id, pos});
          if (program.apply(engine.store, engine.trail, cp.alt_list[(size_t)pos]))
            next_node = derive_node_id(cp.node_id, pos);
          else
            forward = false;
          break;
        }
      }
    } else {
      if (backtrack_private(engine, program) == BacktrackOutcome::kTreeExhausted)
        break;
      const LeafTuple& edge = engine.explored.back();
      next_node = derive_node_id(edge.node_id, edge.position);
      forward = true;
    }
  }
  return {std::move(engine.solutions), std::move(engine.explored)};
}

}  // namespace orsplit
