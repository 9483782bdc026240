// Benchmark harness: runs one benchmark under one scheduling configuration,
// verifies every run against the sequential fixture and reports CSV.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "orsplit/bench.hpp"

namespace {

orsplit::Strategy parse_strategy(const std::string& s) {
  if (s == "os") return orsplit::Strategy::kOriginal;
  if (s == "vs") return orsplit::Strategy::kVertical;
  if (s == "half") return orsplit::Strategy::kHalf;
  if (s == "hs") return orsplit::Strategy::kHorizontal;
  if (s == "ds") return orsplit::Strategy::kDiagonal;
  throw CLI::ValidationError("--strategy", "expected one of os|vs|half|hs|ds");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"or-parallel search runtime benchmark harness"};

  std::string bench;
  int size = 0;
  std::string strategy_name = "os";
  int workers = 1;
  int runs = 10;
  bool no_incremental = false;
  int64_t threshold = 1;
  std::string csv_path;
  std::string trace_path;

  app.add_option("--bench", bench, "benchmark: queens|nsort|ham|maze")->required();
  app.add_option("--size", size, "problem size N")->required();
  app.add_option("--strategy", strategy_name, "splitting strategy: os|vs|half|hs|ds")
      ->default_val("os");
  app.add_option("--workers", workers, "worker count")->default_val(1)
      ->check(CLI::Range(1, orsplit::kMaxWorkers));
  app.add_option("--runs", runs, "repetitions per configuration")->default_val(10)
      ->check(CLI::PositiveNumber);
  app.add_flag("--no-incremental", no_incremental, "disable incremental copying");
  app.add_option("--threshold", threshold, "minimum load to accept a sharing request")
      ->default_val(1)->check(CLI::PositiveNumber);
  app.add_option("--csv", csv_path, "write the CSV report to this path");
  app.add_option("--trace", trace_path, "write sharing events (JSON lines) to this path");

  CLI11_PARSE(app, argc, argv);

  try {
    orsplit::BenchmarkSpec spec{bench, size, std::nullopt};
    orsplit::SchedulerConfig config;
    config.strategy = parse_strategy(strategy_name);
    config.workers = workers;
    config.incremental = !no_incremental;
    config.threshold = threshold;

    std::vector<orsplit::TraceEvent> trace;
    orsplit::BenchReport report =
        orsplit::run_benchmark(spec, config, runs, trace_path.empty() ? nullptr : &trace);

    std::string csv = orsplit::emit_report(report.records);
    if (csv_path.empty()) {
      std::cout << csv;
    } else {
      std::ofstream out(csv_path);
      if (!out) {
        std::cerr << "cannot write " << csv_path << "\n";
        return 2;
      }
      out << csv;
    }
    if (!trace_path.empty()) {
      std::ofstream out(trace_path);
      if (!out) {
        std::cerr << "cannot write " << trace_path << "\n";
        return 2;
      }
      out << orsplit::trace_to_jsonl(trace);
    }

    if (!report.all_verified) {
      std::cerr << "FAILED: at least one run did not match the sequential fixture\n";
      return 1;
    }
    std::cerr << "verified: " << report.fixture.solutions.size() << " solutions, "
              << runs << " runs\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
