#include "orsplit/worker.hpp"

namespace orsplit {

int64_t recount_load(const WorkerState& w, Strategy strategy) {
  int64_t sum = 0;
  for (const ChoicePoint& cp : w.engine.cp_stack) {
    if (cp.shared() && !is_stack_splitting(strategy)) continue;
    sum += cp.remaining();
  }
  return sum;
}

int64_t update_load(WorkerState& w, Strategy strategy) {
  int64_t value = recount_load(w, strategy);
  w.load.store(value, std::memory_order_release);
  return value;
}

}  // namespace orsplit
