#include <doctest.h>

#include "cyclerw/proof_io.hpp"
#include "cyclerw/prover.hpp"
#include "cyclerw/tpdb.hpp"
#include "support.hpp"

using namespace cyclerw;
using namespace testsupport;
using namespace std::chrono_literals;

namespace {

Srs counter() {
  return parse_tpdb("(RULES 0 P -> 1 P, 1 P -> c P, 0 c -> 1 0, 1 c -> c 0, P 0 -> P 1 0 0)").srs;
}

Srs dining() { return parse_tpdb("(RULES T F -> L, F L -> E, E -> F T F)").srs; }

Strategy only(Phase p) {
  Strategy s;
  s.phases = {{p, 1.0}};
  return s;
}

const Loop* loop_of(const ProveResult& r) {
  return r.proof ? std::get_if<Loop>(&r.proof->steps.back()) : nullptr;
}

}  // namespace

TEST_CASE("counter: tropical removal of P0 -> P100 first, then the rest") {
  const Srs P = counter();
  const auto t0 = Clock::now();
  const ProveResult r = prove(P, Strategy{}, 60s);
  CHECK(Clock::now() - t0 < 60s);
  REQUIRE(r.verdict == Verdict::Yes);
  REQUIRE(r.proof);
  const auto& steps = r.proof->steps;
  REQUIRE(steps.size() >= 2);
  const auto* first = std::get_if<MatrixRemoval>(&steps[0]);
  REQUIRE(first);
  CHECK(first->interpretation.kind() == SemiringKind::Tropical);
  REQUIRE(first->removed.size() == 1);
  CHECK(P.render_rule(first->removed[0]) == "P 0 -> P 1 0 0");
  CHECK(std::holds_alternative<EmptyStrictSet>(steps.back()));

  // Every other rule is removed by a later step.
  Srs cur = P;
  std::vector<std::string> removed;
  for (const auto& st : steps) {
    std::vector<std::size_t> idx;
    if (auto* m = std::get_if<MatrixRemoval>(&st)) idx = m->removed;
    if (auto* c = std::get_if<CountingRemoval>(&st)) idx = c->removed;
    for (auto i : idx) removed.push_back(cur.render_rule(i));
    cur = without_rules(cur, idx);
  }
  std::sort(removed.begin(), removed.end());
  CHECK(removed == std::vector<std::string>{"0 P -> 1 P", "0 c -> 1 0", "1 P -> c P", "1 c -> c 0",
                                            "P 0 -> P 1 0 0"});
  CHECK(verify_certificate(P, *r.proof));
  CHECK(r.technique == "matrix");
}

TEST_CASE("certificate: perturbed entries and broken chains are rejected") {
  const Srs P = counter();
  const ProveResult r = prove(P, Strategy{}, 60s);
  REQUIRE(r.proof);
  const ProofObject good = *r.proof;
  REQUIRE(verify_certificate(P, good));

  SUBCASE("entry perturbation") {
    // Raise each finite entry of the first interpretation by one. Any change
    // the checker accepts must still be a valid removal on its own terms.
    const auto& m0 = std::get<MatrixRemoval>(good.steps[0]);
    std::size_t rejected = 0, total = 0;
    for (Symbol x : m0.interpretation.domain())
      for (std::size_t i = 0; i < m0.interpretation.dim(); ++i)
        for (std::size_t j = 0; j < m0.interpretation.dim(); ++j) {
          ProofObject bad = good;
          auto& I = std::get<MatrixRemoval>(bad.steps[0]).interpretation;
          Matrix M = I.get(x);
          if (!M.at(i, j).finite()) continue;
          M.at(i, j) = Value(M.at(i, j).number() + 1);
          try {
            I.set(x, M);
          } catch (const std::invalid_argument&) {
            continue;
          }
          ++total;
          const auto chk = verify_certificate(P, bad);
          const auto rep = check_removal(I, P);
          const bool removal_still_valid =
              rep.failed.empty() && std::find(rep.strictly.begin(), rep.strictly.end(), 4u) != rep.strictly.end();
          CHECK(chk.ok == removal_still_valid);
          if (!chk.ok) {
            ++rejected;
            CHECK(chk.first_bad == 0u);
          }
        }
    CHECK(total > 0);
    CHECK(rejected > 0);
  }
  SUBCASE("a decisive entry") {
    // With <0>[1,1] = 1 both sides of P 0 -> P 1 0 0 have 2 in the top-left
    // corner, so the rule no longer decreases.
    ProofObject bad = good;
    auto& I = std::get<MatrixRemoval>(bad.steps[0]).interpretation;
    const Symbol zero = *P.alphabet().find("0");
    Matrix M = I.get(zero);
    REQUIRE(M.at(0, 0) == Value(0));
    M.at(0, 0) = Value(1);
    I.set(zero, M);
    const auto chk = verify_certificate(P, bad);
    CHECK_FALSE(chk);
    CHECK(chk.first_bad == 0u);
  }
  SUBCASE("empty proof") {
    ProofObject empty{problem_digest(P), {}};
    const auto chk = verify_certificate(P, empty);
    CHECK_FALSE(chk);
    CHECK(chk.reason == "empty proof");
  }
  SUBCASE("terminal step only") {
    ProofObject cut{problem_digest(P), {EmptyStrictSet{}}};
    CHECK_FALSE(verify_certificate(P, cut));
  }
  SUBCASE("missing terminal step") {
    ProofObject open = good;
    open.steps.pop_back();
    const auto chk = verify_certificate(P, open);
    CHECK_FALSE(chk);
    CHECK(chk.first_bad == open.steps.size());
  }
  SUBCASE("other problem") {
    const Srs Q = srs_of({"ab->ba"});
    CHECK_FALSE(verify_certificate(Q, good));
  }
  SUBCASE("removing a rule the interpretation does not decrease") {
    ProofObject bad = good;
    auto& m = std::get<MatrixRemoval>(bad.steps[0]);
    m.removed = {0, 1, 2, 3, 4};
    CHECK_FALSE(verify_certificate(P, bad));
  }
}

TEST_CASE("disproofs") {
  SUBCASE("ab->ba in under a second with a depth-1 loop") {
    const Srs P = srs_of({"ab->ba"});
    const auto t0 = Clock::now();
    const ProveResult r = prove(P, Strategy{}, 60s);
    CHECK(Clock::now() - t0 < 1s);
    REQUIRE(r.verdict == Verdict::No);
    const Loop* l = loop_of(r);
    REQUIRE(l);
    CHECK(l->witness.kind == LoopKind::CycleRepetition);
    CHECK(l->witness.steps.size() == 1);
    CHECK(r.technique == "cycle-loop");
  }
  SUBCASE("killer triple") {
    const Srs P = srs_of({"aa->bc", "bb->ac", "cc->ab"});
    const ProveResult r = prove(P, Strategy{}, 60s);
    REQUIRE(r.verdict == Verdict::No);
    const Loop* l = loop_of(r);
    REQUIRE(l);
    CHECK(l->witness.kind == LoopKind::CycleRepetition);
    CHECK(l->witness.steps.size() == 3);
  }
  SUBCASE("dining philosophers") {
    const ProveResult r = prove(dining(), Strategy{}, 60s);
    CHECK(r.verdict == Verdict::No);
    REQUIRE(r.proof);
    CHECK(verify_certificate(dining(), *r.proof));
  }
  SUBCASE("relative [ab] -> [ca] -> [ab]") {
    const Srs P = srs_of({"ab->ca", "c=>b"});
    const ProveResult r = prove(P, Strategy{}, 60s);
    REQUIRE(r.verdict == Verdict::No);
    const Loop* l = loop_of(r);
    REQUIRE(l);
    CHECK(l->witness.kind == LoopKind::CycleRepetition);
    CHECK(str_of(P.alphabet(), canonical_rotation(l->witness.start)) == "ab");
    CHECK(l->witness.steps.size() == 2);
    CHECK(l->witness.strict_count == 1);
  }
  SUBCASE("relative aa -> aba with ab => ba") {
    const Srs P = srs_of({"aa->aba", "ab=>ba"});
    const ProveResult r = prove(P, Strategy{}, 60s);
    REQUIRE(r.verdict == Verdict::No);
    const Loop* l = loop_of(r);
    REQUIRE(l);
    CHECK(l->witness.kind == LoopKind::StringSelfEmbedding);
    CHECK(str_of(P.alphabet(), l->witness.start) == "aa");
    CHECK(concat(concat(l->witness.x, l->witness.start), l->witness.y).size() == 3);
    CHECK(l->witness.strict_count == 1);
    CHECK(r.technique == "string-loop");
  }
}

TEST_CASE("aa->aba is proved by matrices and never refuted") {
  const Srs P = srs_of({"aa->aba"});
  const ProveResult r = prove(P, Strategy{}, 60s);
  CHECK(r.verdict == Verdict::Yes);
  CHECK(r.technique == "matrix");
  CHECK(prove(P, only(Phase::Nonterm), 2s).verdict == Verdict::Maybe);
}

TEST_CASE("trivial problems") {
  const Srs weak_only = srs_of({"ab=>ba"});
  const ProveResult r = prove(weak_only, Strategy{}, 1s);
  CHECK(r.verdict == Verdict::Yes);
  REQUIRE(r.proof);
  CHECK(r.proof->steps.size() == 1);
  CHECK(r.technique == "trivial");
  CHECK(prove(srs_of({}), Strategy{}, 1s).verdict == Verdict::Yes);
}

TEST_CASE("a non-terminating problem without the loop phase stays Maybe") {
  CHECK(prove(srs_of({"ab->ba"}), only(Phase::Matrix), 3s).verdict == Verdict::Maybe);
  CHECK(prove(dining(), only(Phase::Matrix), 3s).verdict == Verdict::Maybe);
}

TEST_CASE("strategy validity") {
  CHECK(Strategy{}.valid());
  Strategy s;
  s.phases = {{Phase::Matrix, 0.5}, {Phase::Nonterm, 0.4}};
  CHECK_FALSE(s.valid());
  CHECK(prove(srs_of({"ab->ba"}), s, 1s).verdict == Verdict::Maybe);
  s.phases = {{Phase::Matrix, 1.5}, {Phase::Nonterm, -0.5}};
  CHECK_FALSE(s.valid());
}

TEST_CASE("delegation to an external prover") {
  const Srs R1 = srs_of({"aa->aba"});
  SUBCASE("YES") {
    auto d = delegate(TransformKind::Split, R1, false, {"cat {file} > /dev/null; echo YES"});
    CHECK(d.verdict == Verdict::Yes);
    CHECK(d.diagnostics.empty());
    CHECK(d.input_digest == sha256_hex(delegation_input(TransformKind::Split, R1, false)));
    CHECK(d.output_digest == sha256_hex("YES\n"));
  }
  SUBCASE("the client sees the transformed system") {
    auto d = delegate(TransformKind::Split, R1, false, {"grep -q '#' {file} && echo NO"});
    CHECK(d.verdict == Verdict::No);
  }
  SUBCASE("leading blank lines") {
    CHECK(delegate(TransformKind::Split, R1, false, {"printf '\\n  \\nNO\\nYES\\n'; true"}).verdict == Verdict::No);
  }
  SUBCASE("MAYBE") { CHECK(delegate(TransformKind::Split, R1, false, {"echo MAYBE; : {file}"}).verdict == Verdict::Maybe); }
  SUBCASE("missing binary") {
    auto d = delegate(TransformKind::Split, R1, false, {"/nonexistent/prover {file}"});
    CHECK(d.verdict == Verdict::Maybe);
    CHECK_FALSE(d.diagnostics.empty());
  }
  SUBCASE("without {file} the path is appended") {
    CHECK(delegate(TransformKind::Split, R1, false, {"test -s"}).verdict == Verdict::Maybe);
    CHECK(delegate(TransformKind::Split, R1, false, {"sh -c 'test -s \"$0\" && echo YES'"}).verdict == Verdict::Yes);
  }
  SUBCASE("malformed output") {
    auto d = delegate(TransformKind::Split, R1, false, {"echo yes please"});
    CHECK(d.verdict == Verdict::Maybe);
    CHECK(d.diagnostics.find("malformed") != std::string::npos);
  }
  SUBCASE("timeout") {
    const auto t0 = Clock::now();
    auto d = delegate(TransformKind::Split, R1, false, {"sleep 10; echo YES"}, Deadline::after(300ms));
    CHECK(d.verdict == Verdict::Maybe);
    CHECK(Clock::now() - t0 < 5s);
  }
  SUBCASE("timeout placeholder") {
    auto d = delegate(TransformKind::Split, R1, false, {"test {timeout} -ge 1 && test -s {file} && echo YES"}, Deadline::after(2500ms));
    CHECK(d.verdict == Verdict::Yes);
  }
}

TEST_CASE("prove with an external prover") {
  const Srs P = srs_of({"abc->bac", "bc=>cb"});
  Strategy s = only(Phase::Split);
  s.client = ExternalProverClient{"echo YES; : {file}"};
  const ProveResult r = prove(P, s, 5s);
  REQUIRE(r.verdict == Verdict::Yes);
  REQUIRE(r.proof);
  const auto* d = std::get_if<TransformDelegate>(&r.proof->steps.back());
  REQUIRE(d);
  CHECK(d->relative);
  CHECK(d->kind == TransformKind::Split);
  const auto chk = verify_certificate(P, *r.proof);
  CHECK(chk);
  CHECK(chk.trusts_external);
  CHECK(r.technique == "external:split");

  ProofObject tampered = *r.proof;
  std::get<TransformDelegate>(tampered.steps.back()).input_digest = sha256_hex("something else");
  CHECK_FALSE(verify_certificate(P, tampered));

  ProofObject flipped = *r.proof;
  std::get<TransformDelegate>(flipped.steps.back()).relative = false;
  CHECK_FALSE(verify_certificate(P, flipped));

  SUBCASE("a crashing prover is skipped") {
    Strategy c = s;
    c.client = ExternalProverClient{"kill -9 $$; : {file}"};
    const ProveResult m = prove(P, c, 5s);
    CHECK(m.verdict == Verdict::Maybe);
    CHECK_FALSE(m.diagnostics.empty());
  }
  SUBCASE("direct string attempt only trusts NO") {
    Strategy dir = only(Phase::Direct);
    dir.client = ExternalProverClient{"echo YES; : {file}"};
    CHECK(prove(P, dir, 5s).verdict == Verdict::Maybe);
    dir.client = ExternalProverClient{"echo NO; : {file}"};
    const ProveResult no = prove(P, dir, 5s);
    CHECK(no.verdict == Verdict::No);
    REQUIRE(no.proof);
    CHECK(verify_certificate(P, *no.proof));
    ProofObject yes = *no.proof;
    std::get<TransformDelegate>(yes.steps.back()).verdict = Verdict::Yes;
    CHECK_FALSE(verify_certificate(P, yes));
  }
  SUBCASE("shares of skipped phases go to the others") {
    // Without a client the matrix phase receives the whole budget.
    const Srs phi2 = parse_tpdb(
                         "(RULES R E -> L E, a L -> L a', b L -> L b', c L -> L c', R a' -> a R, R b' -> b R,"
                         " R c' -> c R, a b L -> b a a R, c b L -> b b c R)")
                         .srs;
    Strategy m;
    m.phases = {{Phase::Matrix, 0.5}, {Phase::Split, 0.5}};
    CHECK(prove(phi2, m, 60s).verdict == Verdict::Yes);
  }
}

TEST_CASE("proofs are deterministic") {
  const Srs P = srs_of({"aa->aba"});
  const ProveResult a = prove(P, Strategy{}, 60s);
  const ProveResult b = prove(P, Strategy{}, 60s);
  REQUIRE(a.proof);
  REQUIRE(b.proof);
  CHECK(proof_to_json(P, *a.proof) == proof_to_json(P, *b.proof));
}

TEST_CASE("fuzz: every Yes/No carries a verifying certificate") {
  std::mt19937_64 rng(11);
  Strategy s;
  s.schedule = default_schedule(std::chrono::milliseconds(20));
  std::size_t decided = 0;
  for (int it = 0; it < 60; ++it) {
    const Srs P = random_srs(rng, 2 + rng() % 2, 1 + rng() % 3, 3, true, it % 3 == 0);
    const ProveResult r = prove(P, s, 300ms);
    if (r.verdict == Verdict::Maybe) {
      CHECK_FALSE(r.proof);
      continue;
    }
    ++decided;
    REQUIRE(r.proof);
    CHECK(r.proof->verdict() == r.verdict);
    const auto chk = verify_certificate(P, *r.proof);
    INFO(chk.reason);
    CHECK(chk);
    // And after a trip through JSON.
    const ProofObject back = proof_from_json(proof_to_json(P, *r.proof), P);
    CHECK(verify_certificate(P, back));
  }
  CHECK(decided > 30);
}
