#include "cyclerw/bench.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include "cyclerw/proof_io.hpp"

namespace cyclerw {

namespace fs = std::filesystem;

std::optional<Verdict> expected_verdict(const ProblemFile& f) {
  static const std::regex re(R"(expected:\s*(YES|NO|MAYBE))");
  for (const auto& c : f.comments) {
    std::smatch m;
    if (std::regex_search(c, m, re)) return parse_verdict(m[1].str());
  }
  return std::nullopt;
}

BenchSummary BenchReport::summary() const {
  BenchSummary s;
  for (const auto& r : results) {
    if (!r.error.empty()) ++s.errors;
    else if (r.verdict == Verdict::Yes) ++s.yes;
    else if (r.verdict == Verdict::No) ++s.no;
    else ++s.maybe;
  }
  return s;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

BenchResult run_one(const fs::path& root, const fs::path& file, const BenchOptions& opts) {
  BenchResult r;
  r.problem = fs::relative(file, root).generic_string();
  const auto t0 = Clock::now();
  try {
    const ProblemFile pf = read_tpdb_file(file.string());
    r.expected = expected_verdict(pf);
    ProveResult pr = prove(pf.srs, opts.strategy, opts.timeout);
    r.verdict = pr.verdict;
    r.technique = pr.technique;
    if (pr.proof && !opts.proof_dir.empty()) {
      fs::path out = fs::path(opts.proof_dir) / r.problem;
      out.replace_extension(".proof.json");
      fs::create_directories(out.parent_path());
      std::ofstream(out) << print_proof(pf.srs, *pr.proof, ProofFormat::Json);
      r.proof_path = out.string();
    }
  } catch (const std::exception& e) {
    r.verdict = Verdict::Maybe;
    r.technique = "error";
    r.error = e.what();
  }
  const auto elapsed = Clock::now() - t0;
  r.time = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed);
  // Answers that arrive after the limit do not count.
  if (r.error.empty() && elapsed > opts.timeout && r.verdict != Verdict::Maybe) {
    r.verdict = Verdict::Maybe;
    r.technique = "timeout";
    if (!r.proof_path.empty()) fs::remove(r.proof_path);
    r.proof_path.clear();
  }
  return r;
}

}  // namespace

std::string BenchReport::csv() const {
  std::string out = "problem,verdict,time_ms,technique\n";
  for (const auto& r : results)
    out += csv_field(r.problem) + "," + std::string(to_string(r.verdict)) + "," + std::to_string(r.time.count()) +
           "," + csv_field(r.technique) + "\n";
  return out;
}

std::string BenchReport::table() const {
  const auto s = summary();
  std::ostringstream out;
  out << "YES " << s.yes << "  NO " << s.no << "  MAYBE " << s.maybe << "  errors " << s.errors << "  total "
      << s.total() << "\n";
  return out.str();
}

BenchReport run_bench(const std::string& dir, const BenchOptions& opts) {
  const fs::path root(dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file() && e.path().extension() == ".srs") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  BenchReport report;
  report.results.resize(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < files.size();) report.results[i] = run_one(root, files[i], opts);
  };
  const unsigned n = std::max(1u, std::min<unsigned>(opts.parallelism, static_cast<unsigned>(files.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::sort(report.results.begin(), report.results.end(),
            [](const BenchResult& a, const BenchResult& b) { return a.problem < b.problem; });
  return report;
}

}  // namespace cyclerw
