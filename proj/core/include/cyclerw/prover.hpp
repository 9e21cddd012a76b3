#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cyclerw/nonterm.hpp"
#include "cyclerw/search.hpp"
#include "cyclerw/transform.hpp"

namespace cyclerw {

enum class Verdict { Yes, No, Maybe };
std::string_view to_string(Verdict v);  // YES, NO, MAYBE
std::optional<Verdict> parse_verdict(std::string_view s);

struct CountingRemoval {
  Weights weights;
  std::vector<std::size_t> removed;  // indices into the step's input
};

struct MatrixRemoval {
  Interpretation interpretation;
  std::vector<std::size_t> removed;
  std::string config;
};

// An external string prover's answer on a transformed system. Without a
// transformation the input itself was sent as a string rewriting problem,
// which can only establish No.
struct TransformDelegate {
  std::optional<TransformKind> kind;
  bool relative = false;
  std::string command;
  Verdict verdict = Verdict::Maybe;
  std::string input_digest;   // SHA-256 of the TPDB text handed to the prover
  std::string output_digest;  // SHA-256 of its standard output
};

struct Loop {
  LoopWitness witness;
};

struct EmptyStrictSet {};

using ProofStep = std::variant<CountingRemoval, MatrixRemoval, TransformDelegate, Loop, EmptyStrictSet>;

struct ProofObject {
  std::string problem_digest;
  std::vector<ProofStep> steps;

  // Verdict claimed by the last step; Maybe when the chain is not closed.
  Verdict verdict() const;
};

struct ExternalProverClient {
  // `{file}` is the TPDB input path, `{timeout}` whole seconds. Without
  // `{file}` the path is appended.
  std::string command;
};

struct DelegateResult {
  Verdict verdict = Verdict::Maybe;
  std::string input_digest;
  std::string output_digest;
  std::string diagnostics;
};

// Runs the client on transform(kind, problem), or on transform_rel when
// `relative`. The first non-empty output line decides the verdict.
DelegateResult delegate(TransformKind kind, const Srs& problem, bool relative, const ExternalProverClient& client,
                        const Deadline& deadline = Deadline::never());
// Same, with the untransformed input.
DelegateResult delegate_direct(const Srs& problem, const ExternalProverClient& client,
                               const Deadline& deadline = Deadline::never());

// Text handed to the external prover for a delegation step.
std::string delegation_input(const std::optional<TransformKind>& kind, const Srs& problem, bool relative);

enum class Phase { Matrix, Nonterm, Direct, Split };
std::string_view to_string(Phase p);
std::optional<Phase> parse_phase(std::string_view s);

struct PhaseShare {
  Phase phase;
  double fraction;
};

struct Strategy {
  // Run in this order. A phase that cannot run gives its share to the
  // phases after it, and so does time a phase leaves unused.
  std::vector<PhaseShare> phases{
      {Phase::Nonterm, 0.10}, {Phase::Matrix, 0.39}, {Phase::Direct, 0.09}, {Phase::Split, 0.42}};
  std::vector<SearchConfig> schedule = default_schedule();
  long long counting_bound = 3;
  NontermConfig nonterm;
  std::optional<ExternalProverClient> client;
  TransformKind transform = TransformKind::Split;

  // Fractions are positive and sum to 1.
  bool valid() const;
};

struct ProveResult {
  Verdict verdict = Verdict::Maybe;
  std::optional<ProofObject> proof;
  std::string technique;  // empty for Maybe
  std::vector<std::string> diagnostics;
};

ProveResult prove(const Srs& problem, const Strategy& strategy, std::chrono::milliseconds budget,
                  const std::atomic<bool>* cancel = nullptr);

struct CertificateCheck {
  bool ok = true;
  std::optional<std::size_t> first_bad;  // step index; steps.size() for chain-level failures
  std::string reason;
  bool trusts_external = false;  // some step relies on an external verdict
  explicit operator bool() const { return ok; }
};

CertificateCheck verify_certificate(const Srs& problem, const ProofObject& proof);

// Short label of the deciding technique, used in benchmark output.
std::string technique_of(const ProofObject& proof);

}  // namespace cyclerw
