#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orsplit/engine.hpp"
#include "orsplit/scheduler.hpp"

namespace orsplit {

struct BenchmarkSpec {
  std::string name;  // queens | nsort | ham | maze
  int size = 0;
  std::optional<uint64_t> expected_solutions;
};

SearchProgram make_program(const BenchmarkSpec& spec);

struct RunRecord {
  std::string benchmark;
  std::string strategy;  // "seq" for the sequential baseline
  int workers = 0;
  bool incremental = false;
  int run_index = 0;
  double seconds = 0.0;
  uint64_t solutions = 0;
  uint64_t sharings = 0;
  uint64_t bytes_copied = 0;
  uint64_t frames_allocated = 0;
  bool verified = false;
};

// The sequential fixture every parallel run is checked against:
// normalized solution multiset and explored-edge multiset.
struct SequentialFixture {
  std::vector<SolutionRecord> solutions;  // sorted
  std::vector<LeafTuple> explored;        // sorted
  double avg_seconds = 0.0;
};

struct BenchReport {
  std::vector<RunRecord> records;
  SequentialFixture fixture;
  bool all_verified = true;
};

// Runs the sequential baseline and then `runs` repetitions of the given
// parallel configuration, verifying each run's solution multiset and
// explored-edge conservation against the fixture. Each parallel run is
// bounded by a watchdog of ten times the sequential time (with a floor
// for sub-millisecond baselines). Trace events are appended per sharing.
BenchReport run_benchmark(const BenchmarkSpec& spec, SchedulerConfig config, int runs,
                          std::vector<TraceEvent>* trace = nullptr);

// CSV with one row per configuration: benchmark,strategy,workers,
// incremental,avg_seconds,ratio_vs_sequential,speedup,sharings,
// bytes_copied. Requires a sequential baseline among the records.
std::string emit_report(const std::vector<RunRecord>& records);

// One line per sharing event, JSON object per line.
std::string trace_to_jsonl(const std::vector<TraceEvent>& trace);

}  // namespace orsplit
