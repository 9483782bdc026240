#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "orsplit/store.hpp"
#include "orsplit/types.hpp"

namespace orsplit {

struct Expansion {
  enum class Kind { kSolution, kFail, kChoice };

  Kind kind = Kind::kFail;
  std::vector<Alternative> alternatives;

  static Expansion solution() { return {Kind::kSolution, {}}; }
  static Expansion fail() { return {Kind::kFail, {}}; }
  static Expansion choice(std::vector<Alternative> alts) {
    return {Kind::kChoice, std::move(alts)};
  }
};

// A pluggable nondeterministic program driving the engine.
//
// expand must be deterministic in the store contents: equal stores yield
// equal expansions, same alternatives in the same order. apply mutates the
// store only through trailed_write and returns false on failure. Both are
// called concurrently on different stores and must be re-entrant.
struct SearchProgram {
  std::string name;
  Store initial_store;
  std::function<Expansion(const Store&)> expand;
  std::function<bool(Store&, Trail&, Alternative)> apply;
};

}  // namespace orsplit
