#include "cyclerw/prover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cyclerw/tpdb.hpp"

namespace cyclerw {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "YES";
    case Verdict::No: return "NO";
    case Verdict::Maybe: return "MAYBE";
  }
  return "MAYBE";
}

std::optional<Verdict> parse_verdict(std::string_view s) {
  if (s == "YES") return Verdict::Yes;
  if (s == "NO") return Verdict::No;
  if (s == "MAYBE") return Verdict::Maybe;
  return std::nullopt;
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Matrix: return "matrix";
    case Phase::Nonterm: return "nonterm";
    case Phase::Direct: return "direct";
    case Phase::Split: return "split";
  }
  return "matrix";
}

std::optional<Phase> parse_phase(std::string_view s) {
  for (Phase p : {Phase::Matrix, Phase::Nonterm, Phase::Direct, Phase::Split})
    if (to_string(p) == s) return p;
  return std::nullopt;
}

bool Strategy::valid() const {
  if (phases.empty()) return false;
  double sum = 0;
  for (const auto& p : phases) {
    if (!(p.fraction > 0)) return false;
    sum += p.fraction;
  }
  return std::abs(sum - 1.0) < 1e-6;
}

Verdict ProofObject::verdict() const {
  if (steps.empty()) return Verdict::Maybe;
  const ProofStep& last = steps.back();
  if (std::holds_alternative<EmptyStrictSet>(last)) return Verdict::Yes;
  if (std::holds_alternative<Loop>(last)) return Verdict::No;
  if (const auto* d = std::get_if<TransformDelegate>(&last)) return d->verdict;
  return Verdict::Maybe;
}

std::string delegation_input(const std::optional<TransformKind>& kind, const Srs& problem, bool relative) {
  if (!kind) return print_tpdb(problem);
  const TransformOutput out = relative ? transform_rel(*kind, problem) : transform(*kind, problem);
  return print_tpdb(out.srs);
}

namespace {

std::string first_line(const std::string& out) {
  std::size_t pos = 0;
  while (pos < out.size()) {
    std::size_t end = out.find('\n', pos);
    if (end == std::string::npos) end = out.size();
    std::string line = out.substr(pos, end - pos);
    const auto b = line.find_first_not_of(" \t\r");
    if (b != std::string::npos) {
      const auto e = line.find_last_not_of(" \t\r");
      return line.substr(b, e - b + 1);
    }
    pos = end + 1;
  }
  return "";
}

DelegateResult run_client(const std::string& text, const ExternalProverClient& client, const Deadline& deadline) {
  DelegateResult res;
  res.input_digest = sha256_hex(text);
  if (client.command.empty()) {
    res.diagnostics = "no external prover configured";
    return res;
  }
  TempFile file(".srs", text);
  std::string cmd = client.command;
  if (cmd.find("{file}") == std::string::npos) cmd += " {file}";
  cmd = fill_template(cmd, "file", shell_quote(file.path()));
  const auto secs = std::max<long long>(1, deadline.remaining().count() / 1000);
  cmd = fill_template(cmd, "timeout", std::to_string(secs));

  const ProcessResult pr = run_shell(cmd, deadline);
  res.output_digest = sha256_hex(pr.out);
  if (!pr.started) {
    res.diagnostics = "could not start external prover: " + pr.err;
  } else if (pr.timed_out) {
    res.diagnostics = "external prover timed out";
  } else if (pr.exit_code < 0) {
    res.diagnostics = "external prover was killed by a signal";
  } else if (auto v = parse_verdict(first_line(pr.out))) {
    res.verdict = *v;
  } else {
    res.diagnostics = "malformed external prover output (exit code " + std::to_string(pr.exit_code) +
                      "): '" + first_line(pr.out) + "'";
    if (!pr.err.empty()) res.diagnostics += "; stderr: " + first_line(pr.err);
  }
  return res;
}

}  // namespace

DelegateResult delegate(TransformKind kind, const Srs& problem, bool relative, const ExternalProverClient& client,
                        const Deadline& deadline) {
  return run_client(delegation_input(kind, problem, relative), client, deadline);
}

DelegateResult delegate_direct(const Srs& problem, const ExternalProverClient& client, const Deadline& deadline) {
  return run_client(delegation_input(std::nullopt, problem, false), client, deadline);
}

namespace {

ProofStep to_proof_step(RemovalStep st) {
  if (st.kind == RemovalStep::Kind::Counting) return CountingRemoval{std::move(*st.weights), std::move(st.removed)};
  return MatrixRemoval{std::move(*st.interpretation), std::move(st.removed), std::move(st.config)};
}

bool needs_client(Phase p) { return p == Phase::Direct || p == Phase::Split; }

}  // namespace

ProveResult prove(const Srs& problem, const Strategy& strategy, std::chrono::milliseconds budget,
                  const std::atomic<bool>* cancel) {
  const Deadline total = Deadline::after(budget, cancel);
  ProveResult res;
  ProofObject proof{problem_digest(problem), {}};
  Srs cur = problem;

  auto finish = [&](ProofStep terminal) {
    proof.steps.push_back(std::move(terminal));
    const auto chk = verify_certificate(problem, proof);
    if (!chk) {
      res.diagnostics.push_back("internal error: proof rejected at step " +
                                std::to_string(chk.first_bad.value_or(0)) + ": " + chk.reason);
      return res;
    }
    res.verdict = proof.verdict();
    res.technique = technique_of(proof);
    res.proof = std::move(proof);
    return res;
  };

  if (cur.strict_count() == 0) return finish(EmptyStrictSet{});
  if (!strategy.valid()) {
    res.diagnostics.push_back("invalid strategy: fractions must be positive and sum to 1");
    return res;
  }

  std::vector<PhaseShare> active;
  for (const auto& p : strategy.phases) {
    if (needs_client(p.phase) && !strategy.client) {
      res.diagnostics.push_back(std::string(to_string(p.phase)) + " phase skipped: no external prover");
      continue;
    }
    active.push_back(p);
  }

  for (std::size_t i = 0; i < active.size() && !total.expired(); ++i) {
    double rest = 0;
    for (std::size_t j = i; j < active.size(); ++j) rest += active[j].fraction;
    const auto left = total.remaining();
    const auto slice = i + 1 == active.size()
                           ? left
                           : std::chrono::milliseconds(static_cast<long long>(
                                 static_cast<double>(left.count()) * active[i].fraction / rest));
    const Deadline d = total.sooner(slice);

    switch (active[i].phase) {
      case Phase::Nonterm: {
        NontermConfig cfg = strategy.nonterm;
        cfg.budget = slice;
        if (auto w = find_loop(cur, cfg, d)) return finish(Loop{std::move(*w)});
        break;
      }
      case Phase::Matrix: {
        RemovalOutcome out = removal_loop(cur, strategy.schedule, d, strategy.counting_bound);
        for (auto& st : out.steps) proof.steps.push_back(to_proof_step(std::move(st)));
        cur = std::move(out.residual);
        if (cur.strict_count() == 0) return finish(EmptyStrictSet{});
        break;
      }
      case Phase::Direct: {
        auto dr = delegate_direct(cur, *strategy.client, d);
        if (!dr.diagnostics.empty()) res.diagnostics.push_back("direct: " + dr.diagnostics);
        if (dr.verdict == Verdict::No)
          return finish(TransformDelegate{std::nullopt, false, strategy.client->command, Verdict::No,
                                          dr.input_digest, dr.output_digest});
        break;
      }
      case Phase::Split: {
        const bool relative = cur.is_relative();
        auto dr = delegate(strategy.transform, cur, relative, *strategy.client, d);
        if (!dr.diagnostics.empty())
          res.diagnostics.push_back(std::string(to_string(strategy.transform)) + ": " + dr.diagnostics);
        if (dr.verdict != Verdict::Maybe)
          return finish(TransformDelegate{strategy.transform, relative, strategy.client->command, dr.verdict,
                                          dr.input_digest, dr.output_digest});
        break;
      }
    }
  }
  return res;
}

CertificateCheck verify_certificate(const Srs& problem, const ProofObject& proof) {
  CertificateCheck chk;
  auto fail = [&](std::size_t i, std::string why) {
    chk.ok = false;
    chk.first_bad = i;
    chk.reason = std::move(why);
    return chk;
  };
  const std::size_t n = proof.steps.size();
  if (proof.problem_digest != problem_digest(problem)) return fail(n, "problem digest does not match");
  if (n == 0) return fail(0, "empty proof");

  // Removed indices must be distinct, in range and strictly decreasing.
  auto removal_ok = [](const std::vector<std::size_t>& removed, const RemovalReport& rep, const Srs& cur) {
    if (removed.empty() || !rep.failed.empty()) return false;
    std::vector<std::size_t> r = removed;
    std::sort(r.begin(), r.end());
    if (std::adjacent_find(r.begin(), r.end()) != r.end() || r.back() >= cur.size()) return false;
    return std::all_of(r.begin(), r.end(), [&](std::size_t i) {
      return std::find(rep.strictly.begin(), rep.strictly.end(), i) != rep.strictly.end();
    });
  };

  Srs cur = problem;
  for (std::size_t i = 0; i < n; ++i) {
    const bool last = i + 1 == n;
    const ProofStep& step = proof.steps[i];
    if (const auto* c = std::get_if<CountingRemoval>(&step)) {
      if (!removal_ok(c->removed, check_counting(c->weights, cur), cur))
        return fail(i, "counting weights do not justify the removal");
      cur = without_rules(cur, c->removed);
    } else if (const auto* m = std::get_if<MatrixRemoval>(&step)) {
      RemovalReport rep;
      try {
        rep = check_removal(m->interpretation, cur);
      } catch (const std::exception& e) {
        return fail(i, std::string("interpretation does not apply: ") + e.what());
      }
      if (!removal_ok(m->removed, rep, cur)) return fail(i, "interpretation does not justify the removal");
      cur = without_rules(cur, m->removed);
    } else if (const auto* d = std::get_if<TransformDelegate>(&step)) {
      if (!last) return fail(i, "delegation must end the proof");
      if (d->verdict == Verdict::Maybe) return fail(i, "delegation without a verdict");
      if (!d->kind && d->verdict == Verdict::Yes)
        return fail(i, "string termination of the input does not imply cycle termination");
      if (d->kind && d->relative != cur.is_relative()) return fail(i, "relative flag does not match the problem");
      std::string text;
      try {
        text = delegation_input(d->kind, cur, d->relative);
      } catch (const std::exception& e) {
        return fail(i, std::string("cannot recompute the delegated system: ") + e.what());
      }
      if (sha256_hex(text) != d->input_digest) return fail(i, "delegated system digest does not match");
      chk.trusts_external = true;
    } else if (const auto* l = std::get_if<Loop>(&step)) {
      if (!last) return fail(i, "loop must end the proof");
      const auto wc = verify_witness(cur, l->witness);
      if (!wc.ok) return fail(i, "invalid loop: " + wc.reason);
    } else {
      if (!last) return fail(i, "empty strict set must end the proof");
      if (cur.strict_count() != 0) return fail(i, "strict rules remain");
    }
  }
  if (proof.verdict() == Verdict::Maybe) return fail(n, "proof does not end in a verdict");
  return chk;
}

std::string technique_of(const ProofObject& proof) {
  if (proof.steps.empty()) return "";
  const ProofStep& last = proof.steps.back();
  if (const auto* l = std::get_if<Loop>(&last))
    return l->witness.kind == LoopKind::CycleRepetition ? "cycle-loop" : "string-loop";
  if (const auto* d = std::get_if<TransformDelegate>(&last))
    return "external:" + (d->kind ? std::string(to_string(*d->kind)) : std::string("direct"));
  bool matrix = false, counting = false;
  for (const auto& s : proof.steps) {
    matrix |= std::holds_alternative<MatrixRemoval>(s);
    counting |= std::holds_alternative<CountingRemoval>(s);
  }
  return matrix ? "matrix" : counting ? "counting" : "trivial";
}

}  // namespace cyclerw
