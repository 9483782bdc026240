#include "orsplit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>
#include <stdexcept>

#include "orsplit/programs.hpp"

namespace orsplit {

namespace {

constexpr uint64_t kWatchdogFloorNs = 250'000'000;  // timer noise floor for tiny runs

std::vector<LeafTuple> merged_explored(const RunResult& r) {
  std::vector<LeafTuple> all;
  for (const auto& log : r.worker_explored) all.insert(all.end(), log.begin(), log.end());
  std::sort(all.begin(), all.end());
  return all;
}

bool verify_run(const RunResult& r, const SequentialFixture& fixture) {
  if (!r.completed) return false;
  std::vector<SolutionRecord> sols = r.solutions;
  std::sort(sols.begin(), sols.end());
  if (sols != fixture.solutions) return false;
  return merged_explored(r) == fixture.explored;
}

}  // namespace

SearchProgram make_program(const BenchmarkSpec& spec) {
  if (spec.name == "queens") return gen_queens(spec.size);
  if (spec.name == "nsort") return gen_nsort(spec.size);
  if (spec.name == "ham") return gen_ham(spec.size);
  if (spec.name == "maze") return gen_maze(spec.size);
  throw std::invalid_argument("unknown benchmark: " + spec.name);
}

BenchReport run_benchmark(const BenchmarkSpec& spec, SchedulerConfig config, int runs,
                          std::vector<TraceEvent>* trace) {
  if (runs < 1) throw std::invalid_argument("run_benchmark: runs must be >= 1");
  SearchProgram program = make_program(spec);
  BenchReport report;

  // Sequential baseline: fixture plus timing, averaged over the same
  // number of repetitions.
  double seq_total = 0.0;
  for (int i = 0; i < runs; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    SequentialResult seq = run_sequential(program);
    auto t1 = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(t1 - t0).count();
    seq_total += secs;
    if (i == 0) {
      report.fixture.solutions = std::move(seq.solutions);
      std::sort(report.fixture.solutions.begin(), report.fixture.solutions.end());
      report.fixture.explored = std::move(seq.explored);
      std::sort(report.fixture.explored.begin(), report.fixture.explored.end());
    }
    RunRecord rec;
    rec.benchmark = program.name;
    rec.strategy = "seq";
    rec.workers = 1;
    rec.incremental = false;
    rec.run_index = i;
    rec.seconds = secs;
    rec.solutions = report.fixture.solutions.size();
    rec.verified = !spec.expected_solutions ||
                   *spec.expected_solutions == report.fixture.solutions.size();
    if (!rec.verified) report.all_verified = false;
    report.records.push_back(std::move(rec));
  }
  report.fixture.avg_seconds = seq_total / runs;

  uint64_t watchdog =
      std::max((uint64_t)(report.fixture.avg_seconds * 1e9 * 10.0), kWatchdogFloorNs);
  config.watchdog_ns = watchdog;

  OrRuntime runtime(config);
  for (int i = 0; i < runs; ++i) {
    RunResult r = runtime.run(program, i);
    RunRecord rec;
    rec.benchmark = program.name;
    rec.strategy = strategy_name(config.strategy);
    rec.workers = config.workers;
    rec.incremental = config.incremental;
    rec.run_index = i;
    rec.seconds = r.seconds;
    rec.solutions = r.solutions.size();
    rec.sharings = r.stats.sharings;
    rec.bytes_copied = r.stats.bytes_copied;
    rec.frames_allocated = r.stats.frames_allocated;
    rec.verified = verify_run(r, report.fixture);
    if (!rec.verified) report.all_verified = false;
    if (trace) trace->insert(trace->end(), r.trace.begin(), r.trace.end());
    report.records.push_back(std::move(rec));
  }
  return report;
}

std::string emit_report(const std::vector<RunRecord>& records) {
  if (records.empty()) throw std::invalid_argument("emit_report: no records");

  struct Agg {
    std::string benchmark;
    int workers = 0;
    bool incremental = false;
    double total_seconds = 0.0;
    double total_sharings = 0.0;
    double total_bytes = 0.0;
    int count = 0;
  };
  std::map<std::string, Agg> groups;  // key: strategy|workers|incremental
  double seq_avg = -1.0;
  {
    double seq_total = 0.0;
    int seq_count = 0;
    for (const auto& r : records)
      if (r.strategy == "seq") {
        seq_total += r.seconds;
        ++seq_count;
      }
    if (seq_count == 0)
      throw std::invalid_argument("emit_report: missing sequential baseline");
    seq_avg = seq_total / seq_count;
  }

  std::vector<std::string> order;
  for (const auto& r : records) {
    std::string key = r.strategy + "|" + std::to_string(r.workers) + "|" +
                      (r.incremental ? "1" : "0");
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) {
      it->second.benchmark = r.benchmark;
      it->second.workers = r.workers;
      it->second.incremental = r.incremental;
      order.push_back(key);
    }
    it->second.total_seconds += r.seconds;
    it->second.total_sharings += (double)r.sharings;
    it->second.total_bytes += (double)r.bytes_copied;
    it->second.count++;
  }

  std::ostringstream out;
  out << "benchmark,strategy,workers,incremental,avg_seconds,ratio_vs_sequential,"
         "speedup,sharings,bytes_copied\n";
  out.setf(std::ios::fixed);
  for (const auto& key : order) {
    const Agg& a = groups.at(key);
    std::string strategy = key.substr(0, key.find('|'));
    double avg = a.total_seconds / a.count;
    out.precision(6);
    out << a.benchmark << ',' << strategy << ',' << a.workers << ','
        << (a.incremental ? "on" : "off") << ',' << avg << ',';
    out.precision(4);
    out << (avg / seq_avg) << ',' << (seq_avg / avg) << ',';
    out.precision(1);
    out << (a.total_sharings / a.count) << ',' << (a.total_bytes / a.count) << '\n';
  }
  return out.str();
}

std::string trace_to_jsonl(const std::vector<TraceEvent>& trace) {
  std::ostringstream out;
  for (const TraceEvent& e : trace) {
    out << "{\"run\":" << e.run_index << ",\"time_ns\":" << e.time_ns
        << ",\"from\":" << e.from << ",\"to\":" << e.to << ",\"strategy\":\""
        << strategy_name(e.strategy) << "\",\"alts_to_p\":" << e.alts_to_sharer
        << ",\"alts_to_q\":" << e.alts_to_requester
        << ",\"bytes_copied\":" << e.bytes_copied << "}\n";
  }
  return out.str();
}

}  // namespace orsplit
