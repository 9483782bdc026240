#include <doctest.h>

#include "oracles.hpp"
#include "orsplit/sharing.hpp"

using namespace orsplit;
using namespace orsplit::test;

TEST_CASE("frame dispatch shares all private nodes behind new frames") {
  Rig rig(Strategy::kOriginal);
  WorkerState& p = rig.add_worker();
  WorkerState& q = rig.add_worker();
  push_synthetic(p, {1, 2});
  push_synthetic(p, {3});
  push_synthetic(p, {4, 5});

  uint64_t frames_before = rig.arena.allocated_total();
  auto rep = share_work(rig.sharing(), p, q);
  REQUIRE(rep.has_value());
  CHECK(rig.arena.allocated_total() - frames_before == 3);  // one per private node

  // Everything moves behind the dispensing cursors; neither worker owns
  // anything exclusively.
  CHECK(rep->outcome.to_sharer.empty());
  CHECK(rep->outcome.to_requester.empty());
  CHECK(codes_of(rep->outcome.communal) == std::vector<int64_t>{1, 2, 3, 4, 5});
  CHECK(codes_of(rep->pre_unexplored) == std::vector<int64_t>{1, 2, 3, 4, 5});

  // Both workers get the same top frame and are members everywhere.
  CHECK(p.top_or_frame == q.top_or_frame);
  CHECK(p.top_cp == 3);
  CHECK(q.top_cp == 3);
  for (size_t i = 1; i <= 3; ++i) {
    OrFrame& f = rig.arena.at(p.engine.cp_stack[i].or_frame);
    CHECK(is_member(f, p.id));
    CHECK(is_member(f, q.id));
  }
}

TEST_CASE("the original strategy chains new frames for the work search") {
  Rig rig(Strategy::kOriginal);
  WorkerState& p = rig.add_worker();
  WorkerState& q = rig.add_worker();
  push_synthetic(p, {1, 2});
  push_synthetic(p, {3, 4});
  REQUIRE(share_work(rig.sharing(), p, q).has_value());

  FrameIndex young = p.engine.cp_stack[2].or_frame;
  FrameIndex old = p.engine.cp_stack[1].or_frame;
  CHECK(rig.arena.at(young).nearest_livenode == old);
  CHECK(rig.arena.at(young).next == old);
  CHECK(rig.arena.at(old).nearest_livenode == kDeadEnd);  // root above
  CHECK(rig.arena.at(old).next == rig.root);
}

TEST_CASE("a request is denied below the load threshold") {
  Rig rig(Strategy::kOriginal);
  WorkerState& p = rig.add_worker();
  WorkerState& q = rig.add_worker();
  CHECK(!share_work(rig.sharing(), p, q).has_value());  // load 0

  push_synthetic(p, {1, 2, 3});
  rig.threshold = 4;
  CHECK(!share_work(rig.sharing(), p, q).has_value());  // load 3 below 4
  rig.threshold = 3;
  CHECK(share_work(rig.sharing(), p, q).has_value());  // load 3 meets 3
}

TEST_CASE("frame dispatch denies once everything sits behind frames") {
  // Under the original strategy the load register counts private nodes
  // only, so a worker whose work is all communal refuses requests.
  Rig rig(Strategy::kOriginal);
  WorkerState& p = rig.add_worker();
  WorkerState& q = rig.add_worker();
  WorkerState& r = rig.add_worker();
  push_synthetic(p, {1, 2, 3, 4});
  REQUIRE(share_work(rig.sharing(), p, q).has_value());
  CHECK(p.load.load() == 0);
  CHECK(!share_work(rig.sharing(), p, r).has_value());
}

TEST_CASE("vertical sharing with no private nodes allocates no frames") {
  Rig rig(Strategy::kVertical);
  WorkerState& p = rig.add_worker();
  WorkerState& q = rig.add_worker();
  WorkerState& r = rig.add_worker();
  build_reference_instance(p);
  REQUIRE(share_work(rig.sharing(), p, q).has_value());

  uint64_t frames_before = rig.arena.allocated_total();
  auto rep = share_work(rig.sharing(), p, r);  // everything already shared
  REQUIRE(rep.has_value());
  CHECK(rig.arena.allocated_total() == frames_before);
}

TEST_CASE("membership update covers the old frames down to the requester") {
  Rig rig(Strategy::kOriginal);
  WorkerState& p = rig.add_worker();
  WorkerState& q = rig.add_worker();
  WorkerState& r = rig.add_worker();
  push_synthetic(p, {1, 2});
  push_synthetic(p, {3, 4});
  push_synthetic(p, {5, 6});
  push_synthetic(p, {7, 8});
  REQUIRE(share_work(rig.sharing(), p, q).has_value());  // four old frames now

  // New private work plus a third worker at the root: it joins every old
  // frame on the branch along with the new one.
  push_synthetic(p, {9, 10});
  auto rep = share_work(rig.sharing(), p, r);
  REQUIRE(rep.has_value());
  for (size_t i = 1; i <= 5; ++i)
    CHECK(is_member(rig.arena.at(p.engine.cp_stack[i].or_frame), r.id));
}

TEST_CASE("a requester already at the sharer's top sees no membership change") {
  Rig rig(Strategy::kOriginal);
  WorkerState& p = rig.add_worker();
  WorkerState& q = rig.add_worker();
  push_synthetic(p, {1, 2, 3, 4});
  REQUIRE(share_work(rig.sharing(), p, q).has_value());
  // q now sits at p's top; sharing again from there adds nothing below it.
  push_synthetic(p, {5, 6});
  uint64_t frames_before = rig.arena.allocated_total();
  auto rep = share_work(rig.sharing(), p, q);
  REQUIRE(rep.has_value());
  CHECK(rig.arena.allocated_total() - frames_before == 1);  // only the new node
}

TEST_CASE("rendezvous loads end complementary and published") {
  Rig rig(Strategy::kDiagonal);
  WorkerState& p = rig.add_worker();
  WorkerState& q = rig.add_worker();
  build_reference_instance(p);
  update_load(p, rig.strategy);
  CHECK(p.load.load() == 7);

  auto rep = share_work(rig.sharing(), p, q);
  REQUIRE(rep.has_value());
  CHECK(p.load.load() == (int64_t)rep->outcome.to_sharer.size());
  CHECK(q.load.load() == (int64_t)rep->outcome.to_requester.size());
  CHECK(p.load.load() + q.load.load() == 7);
}

TEST_CASE("the vertical fixture splits the load four to three") {
  Rig rig(Strategy::kVertical);
  WorkerState& p = rig.add_worker();
  WorkerState& q = rig.add_worker();
  build_reference_instance(p);
  auto rep = share_work(rig.sharing(), p, q);
  REQUIRE(rep.has_value());
  CHECK(p.load.load() == 4);
  CHECK(q.load.load() == 3);
  CHECK(recount_load(p, rig.strategy) == 4);
  CHECK(recount_load(q, rig.strategy) == 3);
}

TEST_CASE("update_load sums stride-visible remainders") {
  Rig rig(Strategy::kVertical);
  WorkerState& w = rig.add_worker();
  push_synthetic(w, {1, 2});                  // 2 remaining
  push_synthetic(w, {3, 4, 5}, kExhausted);   // 0 remaining
  push_synthetic(w, {6, 7, 8});               // 3 remaining
  CHECK(update_load(w, rig.strategy) == 5);
  CHECK(w.load.load() == 5);
}

TEST_CASE("a fresh worker at the root has zero load") {
  Rig rig(Strategy::kOriginal);
  WorkerState& w = rig.add_worker();
  CHECK(update_load(w, rig.strategy) == 0);
}

TEST_CASE("a requester that left the sharer's branch is denied") {
  Rig rig(Strategy::kOriginal);
  WorkerState& p = rig.add_worker();
  WorkerState& q = rig.add_worker();
  push_synthetic(p, {1, 2});

  // Fake a position on a foreign branch: a frame the sharer never chains.
  ChoicePoint foreign;
  foreign.node_id = 999;
  foreign.alt_list = {{9}};
  FrameIndex ff = alloc_or_frame(rig.arena, foreign, q.id);
  q.engine.cp_stack.push_back(foreign);
  q.top_cp = 1;
  q.top_or_frame = ff;

  CHECK(!share_work(rig.sharing(), p, q).has_value());
}
