#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "orsplit/choice_point.hpp"
#include "orsplit/program.hpp"
#include "orsplit/store.hpp"
#include "orsplit/types.hpp"

namespace orsplit {

// One solution: the edge that produced it plus a snapshot of the
// initialized store cells at the moment it was found.
struct SolutionRecord {
  LeafTuple leaf;
  std::vector<int64_t> cells;

  friend auto operator<=>(const SolutionRecord&, const SolutionRecord&) = default;
};

// A worker's private execution state. Index 0 of cp_stack is the root
// choice point; the youngest live choice point is the register B.
struct EngineState {
  std::vector<ChoicePoint> cp_stack;
  Trail trail;
  Store store;
  std::vector<SolutionRecord> solutions;
  std::vector<LeafTuple> explored;  // one entry per alternative applied

  int32_t b() const { return (int32_t)cp_stack.size() - 1; }

  void record_solution(LeafTuple leaf) {
    solutions.push_back(
        {leaf, std::vector<int64_t>(store.cells.begin(),
                                    store.cells.begin() + (ptrdiff_t)store.top_mark)});
  }
};

// Pushes a fresh private choice point over the given alternatives and
// returns its stack index. Split counters chain from the parent so they
// keep measuring relative depth within the owner's partition.
int32_t push_choice_point(EngineState& engine, uint64_t node_id,
                          std::vector<Alternative> alts);

// Returns the position of the next owned alternative and advances the
// cursor by the stride, or nullopt once the stride leaves the list.
std::optional<int32_t> take_next_owned_alternative(ChoicePoint& cp);

// Restores trail, store and watermark to the choice point's creation state.
void unwind_to_choice_point(EngineState& engine, const ChoicePoint& cp);

enum class BacktrackOutcome { kContinue, kTreeExhausted };

// Sequential backtracking: unwinds to the youngest live choice point, takes
// its next alternative and applies it. Exhausted choice points are popped.
// kContinue means an alternative was applied and the caller should expand;
// kTreeExhausted means no live choice point remains.
BacktrackOutcome backtrack_private(EngineState& engine, const SearchProgram& program);

struct SequentialResult {
  std::vector<SolutionRecord> solutions;
  std::vector<LeafTuple> explored;
};

// Depth-first left-to-right exploration of the whole tree. Solutions are
// recorded and then treated as failures so every branch is visited.
SequentialResult run_sequential(const SearchProgram& program);

}  // namespace orsplit
