#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "orsplit/engine.hpp"
#include "orsplit/programs.hpp"

using namespace orsplit;

TEST_CASE("trailed writes record the previous value and restore exactly") {
  Store s;
  s.cells.assign(8, 0);
  Trail trail;

  trailed_write(s, trail, 3, 5);
  CHECK(trail.size() == 1);
  CHECK(trail[0].slot == 3);
  CHECK(trail[0].previous == 0);
  CHECK(s.cells[3] == 5);
  CHECK(s.top_mark == 4);

  unwind_trail(s, trail, 0);
  CHECK(s.cells[3] == 0);
  CHECK(trail.empty());
}

TEST_CASE("identical-value writes are still trailed") {
  Store s;
  s.cells.assign(4, 7);
  Trail trail;
  trailed_write(s, trail, 2, 7);
  CHECK(trail.size() == 1);
}

TEST_CASE("write outside the store aborts the run") {
  Store s;
  s.cells.assign(4, 0);
  Trail trail;
  CHECK_THROWS_AS(trailed_write(s, trail, 4, 1), std::out_of_range);
}

TEST_CASE("random write storm unwinds back to the initial snapshot") {
  std::mt19937_64 rng(42);
  Store s;
  s.cells.assign(32, 0);
  for (auto& c : s.cells) c = (int64_t)(rng() % 100);
  Store snapshot = s;
  Trail trail;
  for (int i = 0; i < 100; ++i)
    trailed_write(s, trail, rng() % 32, (int64_t)(rng() % 1000));
  unwind_trail(s, trail, 0);
  CHECK(s.cells == snapshot.cells);
}

TEST_CASE("unwinding to an intermediate mark restores that point exactly") {
  std::mt19937_64 rng(7);
  Store s;
  s.cells.assign(16, 0);
  Trail trail;
  for (int i = 0; i < 40; ++i) trailed_write(s, trail, rng() % 16, (int64_t)rng() % 50);
  size_t mark = trail.size();
  Store at_mark = s;
  for (int i = 0; i < 60; ++i) trailed_write(s, trail, rng() % 16, (int64_t)rng() % 50);
  unwind_trail(s, trail, mark);
  CHECK(s.cells == at_mark.cells);
}

TEST_CASE("push_choice_point numbers split counters consecutively") {
  EngineState e;
  e.store.cells.assign(4, 0);
  int32_t i0 = push_choice_point(e, kRootNodeId, {{1}, {2}});
  CHECK(e.cp_stack[(size_t)i0].split_counter == 1);
  CHECK(e.cp_stack[(size_t)i0].parent == kNoParent);
  CHECK(e.cp_stack[(size_t)i0].offset == 1);

  push_choice_point(e, 11, {{1}});
  push_choice_point(e, 12, {{1}});
  int32_t i3 = push_choice_point(e, 13, {{1}, {2}});
  CHECK(e.cp_stack[(size_t)i3].split_counter == 4);

  // Along the private chain, counters decrease by exactly one toward root.
  for (int32_t i = e.b(); i > 0; --i)
    CHECK(e.cp_stack[(size_t)i].split_counter ==
          e.cp_stack[(size_t)i - 1].split_counter + 1);
}

TEST_CASE("take_next_owned_alternative walks the stride") {
  SUBCASE("offset 2 over four alternatives") {
    ChoicePoint cp;
    cp.alt_list = {{10}, {11}, {12}, {13}};
    cp.alt_cursor = 0;
    cp.offset = 2;
    CHECK(*take_next_owned_alternative(cp) == 0);
    CHECK(cp.alt_cursor == 2);
    CHECK(*take_next_owned_alternative(cp) == 2);
    CHECK(!take_next_owned_alternative(cp).has_value());
    CHECK(cp.alt_cursor == kExhausted);
  }
  SUBCASE("single alternative") {
    ChoicePoint cp;
    cp.alt_list = {{1}};
    CHECK(*take_next_owned_alternative(cp) == 0);
    CHECK(!take_next_owned_alternative(cp).has_value());
  }
  SUBCASE("cursor 1 offset 2 over three") {
    ChoicePoint cp;
    cp.alt_list = {{1}, {2}, {3}};
    cp.alt_cursor = 1;
    cp.offset = 2;
    CHECK(*take_next_owned_alternative(cp) == 1);
    CHECK(!take_next_owned_alternative(cp).has_value());
  }
  SUBCASE("agrees with the stride enumeration oracle") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 500; ++trial) {
      int32_t size = 1 + (int32_t)(rng() % 8);
      int32_t cursor = (int32_t)(rng() % (uint64_t)size);
      int32_t offset = 1 << (rng() % 3);
      ChoicePoint cp;
      for (int32_t i = 0; i < size; ++i) cp.alt_list.push_back({i});
      cp.alt_cursor = cursor;
      cp.offset = offset;
      std::vector<int32_t> got;
      while (auto pos = take_next_owned_alternative(cp)) got.push_back(*pos);
      CHECK(got == test::stride_positions(size, cursor, offset));
    }
  }
}

TEST_CASE("backtrack_private applies the next alternative after restoring") {
  SearchProgram prog;
  prog.name = "two-leaf";
  prog.initial_store.cells.assign(2, 0);
  prog.expand = [](const Store& s) {
    if (s.cells[0] != 0) return Expansion::fail();
    return Expansion::choice({{1}, {2}});
  };
  prog.apply = [](Store& s, Trail& t, Alternative a) {
    trailed_write(s, t, 0, a.code);
    return true;
  };

  EngineState e;
  e.store = prog.initial_store;
  push_choice_point(e, kRootNodeId, {{1}, {2}});
  ChoicePoint& cp = e.cp_stack.back();
  take_next_owned_alternative(cp);
  prog.apply(e.store, e.trail, {1});
  CHECK(e.store.cells[0] == 1);

  CHECK(backtrack_private(e, prog) == BacktrackOutcome::kContinue);
  CHECK(e.store.cells[0] == 2);  // restored to creation state, then b applied
  CHECK(e.explored.back() == LeafTuple{kRootNodeId, 1});

  CHECK(backtrack_private(e, prog) == BacktrackOutcome::kTreeExhausted);
  CHECK(e.cp_stack.empty());
}

TEST_CASE("full exhaustion restores the initial store") {
  SearchProgram prog = test::gen_random_tree(99, 5, 3);
  Store initial = prog.initial_store;

  EngineState e;
  e.store = prog.initial_store;
  Expansion x = prog.expand(e.store);
  REQUIRE(x.kind == Expansion::Kind::kChoice);
  push_choice_point(e, kRootNodeId, std::move(x.alternatives));
  while (true) {
    if (backtrack_private(e, prog) == BacktrackOutcome::kTreeExhausted) break;
    while (true) {
      Expansion y = prog.expand(e.store);
      if (y.kind != Expansion::Kind::kChoice) break;
      int32_t idx = push_choice_point(
          e, derive_node_id(e.explored.back().node_id, e.explored.back().position),
          std::move(y.alternatives));
      ChoicePoint& cp = e.cp_stack[(size_t)idx];
      auto pos = take_next_owned_alternative(cp);
      e.explored.push_back({cp.node_id, *pos});
      if (!prog.apply(e.store, e.trail, cp.alt_list[(size_t)*pos])) break;
    }
  }
  CHECK(e.store.cells == initial.cells);
  CHECK(e.trail.empty());
}

TEST_CASE("run_sequential finds all queens solutions") {
  SequentialResult q4 = run_sequential(gen_queens(4));
  CHECK(q4.solutions.size() == test::queens_brute_force(4));
  CHECK(q4.solutions.size() == 2);

  SequentialResult q8 = run_sequential(gen_queens(8));
  CHECK(q8.solutions.size() == test::queens_brute_force(8));
  CHECK(q8.solutions.size() == 92);
}

TEST_CASE("run_sequential is deterministic edge for edge") {
  SearchProgram prog = gen_queens(6);
  SequentialResult a = run_sequential(prog);
  SequentialResult b = run_sequential(prog);
  CHECK(a.explored == b.explored);
  CHECK(a.solutions == b.solutions);
}

TEST_CASE("solutions are a sub-multiset of explored leaves") {
  SequentialResult r = run_sequential(test::gen_random_tree(5, 6, 3));
  auto edges = test::sorted(r.explored);
  for (const SolutionRecord& s : r.solutions)
    CHECK(std::binary_search(edges.begin(), edges.end(), s.leaf));
}

TEST_CASE("nsort on the inverted list has exactly one solution") {
  SequentialResult r = run_sequential(gen_nsort(3));
  REQUIRE(r.solutions.size() == 1);
  // The sorted output is 1..3 in cells [1, 3].
  CHECK(r.solutions[0].cells[1] == 1);
  CHECK(r.solutions[0].cells[2] == 2);
  CHECK(r.solutions[0].cells[3] == 3);
  CHECK(r.explored.size() > 1);  // the naive algorithm backtracks
}
