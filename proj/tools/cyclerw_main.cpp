#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cyclerw/bench.hpp"
#include "cyclerw/proof_io.hpp"
#include "cyclerw/prover.hpp"
#include "cyclerw/tpdb.hpp"
#include "cyclerw/transform.hpp"

using namespace cyclerw;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StrategyFlags {
  std::string phases;
  std::vector<std::string> semirings{"tropical", "natural", "arctic"};
  std::size_t max_dim = 3;
  long long max_bound = 3;
  long long slice_ms = 1000;
  long long counting_bound = 3;
  std::string prover;
  std::string smt;
  std::string transform = "split";
  std::size_t max_start_len = NontermConfig{}.max_start_len;
  std::size_t max_word_len = NontermConfig{}.max_word_len;
  std::size_t max_depth = NontermConfig{}.max_depth;
  bool sequential = true;

  void add(CLI::App* app) {
    app->add_option("--phases", phases, "Phase order and shares, e.g. nonterm:0.1,matrix:0.39,direct:0.09,split:0.42");
    app->add_option("--semirings", semirings, "Semirings tried by the matrix search")->delimiter(',');
    app->add_option("--max-dim", max_dim, "Largest matrix dimension")->check(CLI::Range(1, 3));
    app->add_option("--max-bound", max_bound, "Largest entry bound")->check(CLI::Range(1, 3));
    app->add_option("--slice", slice_ms, "First-round budget per search configuration in ms")->check(CLI::PositiveNumber);
    app->add_option("--counting-bound", counting_bound, "Largest symbol weight for counting removal");
    app->add_option("--prover", prover, "External string prover command; {file} and {timeout} are substituted");
    app->add_option("--smt", smt, "Use an SMT-LIB 2 solver command for the matrix search; {file} is substituted");
    app->add_option("--transform", transform, "Transformation used with the external prover")
        ->check(CLI::IsMember({"split", "shift", "rotate"}));
    app->add_option("--max-start-len", max_start_len, "Loop search: longest start word");
    app->add_option("--max-word-len", max_word_len, "Loop search: longest intermediate word");
    app->add_option("--max-depth", max_depth, "Loop search: longest loop");
    app->add_flag("--sequential,!--parallel", sequential, "Run phases one after another (the only supported mode)");
  }

  Strategy build() const {
    if (!sequential) throw UsageError("parallel racing of phases is not supported");
    Strategy s;
    if (!phases.empty()) {
      s.phases.clear();
      std::stringstream in(phases);
      for (std::string item; std::getline(in, item, ',');) {
        const auto colon = item.find(':');
        const auto p = parse_phase(item.substr(0, colon));
        if (!p || colon == std::string::npos) throw UsageError("bad phase '" + item + "'");
        s.phases.push_back({*p, std::stod(item.substr(colon + 1))});
      }
      if (!s.valid()) throw UsageError("phase shares must be positive and sum to 1");
    }
    std::vector<SemiringKind> kinds;
    for (const auto& name : semirings) {
      auto k = parse_semiring(name);
      if (!k) throw UsageError("unknown semiring '" + name + "'");
      kinds.push_back(*k);
    }
    s.schedule.clear();
    for (auto cfg : default_schedule(std::chrono::milliseconds(slice_ms))) {
      if (std::find(kinds.begin(), kinds.end(), cfg.kind) == kinds.end()) continue;
      if (cfg.dim > max_dim || cfg.coeff_bound > max_bound) continue;
      if (!smt.empty()) {
        cfg.backend = Backend::ExternalSolver;
        cfg.solver_command = smt;
      }
      s.schedule.push_back(cfg);
    }
    s.counting_bound = counting_bound;
    s.nonterm.max_start_len = max_start_len;
    s.nonterm.max_word_len = max_word_len;
    s.nonterm.max_depth = max_depth;
    if (!prover.empty()) s.client = ExternalProverClient{prover};
    s.transform = *parse_transform_kind(transform);
    return s;
  }
};

ProblemFile load(const std::string& path) {
  try {
    return read_tpdb_file(path);
  } catch (const TpdbError& e) {
    throw UsageError(path + ":" + e.what());
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Termination prover and disprover for cycle rewriting"};
  app.require_subcommand(1);

  std::string file, proof_file, format = "human", proof_out, kind, dir, csv_out, proof_dir;
  double timeout_s = 60;
  unsigned jobs = 1;
  bool relative = false;

  StrategyFlags prove_flags;
  auto* prove_cmd = app.add_subcommand("prove", "Prove or disprove cycle termination");
  prove_cmd->add_option("file", file, "TPDB problem")->required();
  prove_cmd->add_option("-t,--timeout", timeout_s, "Time limit in seconds")->check(CLI::NonNegativeNumber);
  prove_cmd->add_option("-f,--format", format, "Proof output")->check(CLI::IsMember({"human", "json", "none"}));
  prove_cmd->add_option("-o,--proof-out", proof_out, "Also write the JSON proof to this file");
  prove_flags.add(prove_cmd);

  StrategyFlags dis_flags;
  auto* dis_cmd = app.add_subcommand("disprove-only", "Search for loops only");
  dis_cmd->add_option("file", file, "TPDB problem")->required();
  dis_cmd->add_option("-t,--timeout", timeout_s, "Time limit in seconds")->check(CLI::NonNegativeNumber);
  dis_cmd->add_option("-f,--format", format, "Proof output")->check(CLI::IsMember({"human", "json", "none"}));
  dis_cmd->add_option("-o,--proof-out", proof_out, "Also write the JSON proof to this file");
  dis_flags.add(dis_cmd);

  auto* tr_cmd = app.add_subcommand("transform", "Print a transformed system in TPDB format");
  tr_cmd->add_option("kind", kind, "split, shift or rotate")->required()->check(CLI::IsMember({"split", "shift", "rotate"}));
  tr_cmd->add_option("file", file, "TPDB problem")->required();
  tr_cmd->add_flag("-r,--relative", relative, "Use the relative variant");

  auto* ver_cmd = app.add_subcommand("verify", "Check a JSON proof against a problem");
  ver_cmd->add_option("file", file, "TPDB problem")->required();
  ver_cmd->add_option("proof", proof_file, "JSON proof")->required();

  StrategyFlags bench_flags;
  auto* bench_cmd = app.add_subcommand("bench", "Run the prover on every .srs file below a directory");
  bench_cmd->add_option("dir", dir, "Problem directory")->required()->check(CLI::ExistingDirectory);
  bench_cmd->add_option("-t,--timeout", timeout_s, "Time limit per problem in seconds")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("-j,--jobs", jobs, "Problems run in parallel")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--csv", csv_out, "Write the CSV here instead of standard output");
  bench_cmd->add_option("--proof-dir", proof_dir, "Write JSON proofs here");
  bench_flags.add(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  const auto budget = std::chrono::milliseconds(static_cast<long long>(timeout_s * 1000));
  try {
    if (prove_cmd->parsed() || dis_cmd->parsed()) {
      const ProblemFile pf = load(file);
      for (const auto& w : pf.warnings) std::cerr << file << ":" << w << "\n";
      Strategy s = (prove_cmd->parsed() ? prove_flags : dis_flags).build();
      if (dis_cmd->parsed()) s.phases = {{Phase::Nonterm, 1.0}};
      const ProveResult r = prove(pf.srs, s, budget);
      for (const auto& d : r.diagnostics) std::cerr << d << "\n";
      if (!r.proof || format == "none") {
        std::cout << to_string(r.verdict) << "\n";
      } else {
        std::cout << print_proof(pf.srs, *r.proof, format == "json" ? ProofFormat::Json : ProofFormat::Human);
      }
      if (r.proof && !proof_out.empty()) write_text(proof_out, print_proof(pf.srs, *r.proof, ProofFormat::Json));
    } else if (tr_cmd->parsed()) {
      const ProblemFile pf = load(file);
      const auto k = *parse_transform_kind(kind);
      const TransformOutput out = relative ? transform_rel(k, pf.srs) : transform(k, pf.srs);
      std::cout << print_tpdb(out.srs, {std::string(to_string(k)) + (relative ? " (relative)" : "") + " of " + file});
    } else if (ver_cmd->parsed()) {
      const ProblemFile pf = load(file);
      std::ifstream in(proof_file);
      if (!in) throw UsageError("cannot read " + proof_file);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw UsageError(proof_file + ": " + e.what());
      }
      ProofObject proof;
      try {
        proof = proof_from_json(j, pf.srs);
      } catch (const std::runtime_error& e) {
        std::cout << "INVALID " << e.what() << "\n";
        return 0;
      }
      const CertificateCheck chk = verify_certificate(pf.srs, proof);
      if (chk) {
        std::cout << "VALID " << to_string(proof.verdict())
                  << (chk.trusts_external ? " (relies on an external prover)" : "") << "\n";
      } else {
        std::cout << "INVALID step " << chk.first_bad.value_or(0) + 1 << ": " << chk.reason << "\n";
      }
    } else if (bench_cmd->parsed()) {
      BenchOptions opts;
      opts.strategy = bench_flags.build();
      opts.timeout = budget;
      opts.parallelism = jobs;
      opts.proof_dir = proof_dir;
      const BenchReport rep = run_bench(dir, opts);
      if (csv_out.empty()) std::cout << rep.csv();
      else write_text(csv_out, rep.csv());
      for (const auto& r : rep.results) {
        if (!r.error.empty()) std::cerr << r.problem << ": " << r.error << "\n";
        else if (r.expected && *r.expected != r.verdict)
          std::cerr << r.problem << ": expected " << to_string(*r.expected) << ", got " << to_string(r.verdict) << "\n";
      }
      std::cerr << rep.table();
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
