#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "cyclerw/prover.hpp"
#include "cyclerw/tpdb.hpp"

namespace cyclerw {

struct BenchOptions {
  Strategy strategy;
  std::chrono::milliseconds timeout{60000};
  unsigned parallelism = 1;
  // When set, JSON proofs of YES/NO results are written here.
  std::string proof_dir;
};

struct BenchResult {
  std::string problem;  // path relative to the benchmark directory
  Verdict verdict = Verdict::Maybe;
  std::chrono::milliseconds time{0};
  std::string technique;
  std::string proof_path;
  std::optional<Verdict> expected;
  std::string error;  // non-empty for files that could not be read or parsed
};

struct BenchSummary {
  std::size_t yes = 0, no = 0, maybe = 0, errors = 0;
  std::size_t total() const { return yes + no + maybe + errors; }
};

struct BenchReport {
  std::vector<BenchResult> results;  // sorted by problem
  BenchSummary summary() const;
  // problem,verdict,time_ms,technique
  std::string csv() const;
  std::string table() const;
};

// "expected: YES" (or NO, MAYBE) in any COMMENT section.
std::optional<Verdict> expected_verdict(const ProblemFile& f);

// Every *.srs file below `dir`.
BenchReport run_bench(const std::string& dir, const BenchOptions& opts);

}  // namespace cyclerw
