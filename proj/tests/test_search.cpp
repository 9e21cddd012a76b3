#include <doctest.h>

#include <functional>
#include <set>

#include "cyclerw/search.hpp"
#include "oracles.hpp"

using namespace cyclerw;
using namespace testsupport;

namespace {

SearchConfig config(SemiringKind k, std::size_t d, long long bound) {
  SearchConfig c;
  c.kind = k;
  c.dim = d;
  c.coeff_bound = bound;
  c.budget = std::chrono::seconds(30);
  return c;
}

}  // namespace

TEST_CASE("counting: {0c->10, 1c->c0} removes 0c->10") {
  Alphabet a;
  for (auto n : {"0", "1", "c"}) a.intern(n);
  Srs P(a, {Rule{a.parse_word("0 c"), a.parse_word("1 0")}, Rule{a.parse_word("1 c"), a.parse_word("c 0")}});
  auto res = counting_removal(P);
  REQUIRE(res);
  CHECK(res->report.failed.empty());
  CHECK(std::find(res->report.strictly.begin(), res->report.strictly.end(), 0u) != res->report.strictly.end());
  CHECK(check_counting(res->weights, P).strictly == res->report.strictly);
}

TEST_CASE("counting: a->aa has no strict decrease") {
  CHECK_FALSE(counting_removal(srs_of({"a->aa"})));
}

TEST_CASE("counting: ab->a removes with weight(b)=1") {
  Srs P = srs_of({"ab->a"});
  auto res = counting_removal(P, 1);
  REQUIRE(res);
  CHECK(res->weights.of(*P.alphabet().find("b")) == 1);
  CHECK(res->report.strictly == std::vector<std::size_t>{0});
}

TEST_CASE("counting: only strict rules count for the strictness requirement") {
  // The weak rule can decrease but the strict one cannot.
  CHECK_FALSE(counting_removal(srs_of({"ab->ba", "a=>"})));
}

TEST_CASE("find_interpretation: aa->aba natural d=2 bound 1") {
  Srs P = srs_of({"aa->aba"});
  auto res = find_interpretation(P, config(SemiringKind::Natural, 2, 1));
  REQUIRE(res.status == SearchStatus::Found);
  REQUIRE(res.interpretation);
  CHECK(check_removal(*res.interpretation, P).valid_removal(P));
  for (Symbol s : P.used_symbols())
    for (const auto& v : res.interpretation->get(s).entries()) CHECK(v.number() <= 1);
}

TEST_CASE("find_interpretation: ab->ba exhausted at d=1..2, bound 1") {
  Srs P = srs_of({"ab->ba"});
  for (auto k : kAllKinds)
    for (std::size_t d = 1; d <= 2; ++d) {
      auto res = find_interpretation(P, config(k, d, 1));
      CHECK(res.status == SearchStatus::Exhausted);
      CHECK_FALSE(res.interpretation);
    }
  for (auto k : kAllKinds) CHECK_FALSE(brute_force_d1(P, k, 1));
}

TEST_CASE("find_interpretation: no rules means nothing to remove") {
  Srs P = srs_of({}, "ab");
  for (auto k : kAllKinds) CHECK(find_interpretation(P, config(k, 2, 2)).status == SearchStatus::Exhausted);
}

TEST_CASE("find_interpretation: counter is tropical d=2 satisfiable") {
  Srs P = counter_system();
  auto res = find_interpretation(P, config(SemiringKind::Tropical, 2, 3));
  REQUIRE(res.status == SearchStatus::Found);
  CHECK(check_removal(*res.interpretation, P).valid_removal(P));
}

TEST_CASE("find_interpretation: entries respect bound and admissibility") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 150; ++it) {
    Srs P = random_srs(rng, 3, 1 + rng() % 3, 3, true, it % 3 == 0);
    for (auto k : kAllKinds) {
      const std::size_t d = 1 + rng() % 3;
      const long long b = 1 + static_cast<long long>(rng() % 3);
      auto cfg = config(k, d, b);
      cfg.allow_infinity = rng() & 1;
      auto res = find_interpretation(P, cfg);
      if (res.status != SearchStatus::Found) continue;
      const auto& I = *res.interpretation;
      CHECK(check_removal(I, P).valid_removal(P));
      for (Symbol s : P.used_symbols()) {
        CHECK(in_domain(k, I.get(s)));
        for (const auto& v : I.get(s).entries()) {
          if (v.finite()) CHECK(v.number() <= b);
          else CHECK(cfg.allow_infinity);
        }
      }
    }
  }
}

TEST_CASE("built-in search agrees with brute force at d=1 on small problems") {
  std::size_t problems = 0, satisfiable = 0;
  for_small_problems([&](const Srs& P) {
    ++problems;
    for (auto k : kAllKinds)
      for (long long b = 1; b <= 2; ++b) {
        auto res = find_interpretation(P, config(k, 1, b));
        const bool expected = brute_force_d1(P, k, b);
        satisfiable += expected;
        INFO(P.render_rule(0), " ", to_string(k), " bound ", b);
        CHECK(res.status == (expected ? SearchStatus::Found : SearchStatus::Exhausted));
      }
  });
  CHECK(problems == 34 + 34 * 33 / 2);
  CHECK(satisfiable > 0);
}

TEST_CASE("encode: aa->aba natural d=1") {
  Srs P = srs_of({"aa->aba"});
  auto text = encode_constraints(P, config(SemiringKind::Natural, 1, 3));
  CHECK(text.find("(set-logic QF_NIA)") != std::string::npos);
  CHECK(text.find("(declare-fun m_0_0_0 () Int)") != std::string::npos);
  CHECK(text.find("(declare-fun m_1_0_0 () Int)") != std::string::npos);
  CHECK(text.find("m_2_") == std::string::npos);
  CHECK(text.find("(assert (>= m_0_0_0 1))") != std::string::npos);
  CHECK(text.find("(assert (>= m_1_0_0 1))") != std::string::npos);
  CHECK(text.find("(check-sat)") != std::string::npos);
  CHECK(text.find("(get-model)") != std::string::npos);
  // One-dimensional natural matrices multiply: a*a >= a*b*a needs b = 1,
  // which leaves no strict decrease.
  CHECK_FALSE(brute_force_d1(P, SemiringKind::Natural, 3));
  CHECK(find_interpretation(P, config(SemiringKind::Natural, 1, 3)).status == SearchStatus::Exhausted);
}

TEST_CASE("encode: tropical declares an infinity flag per entry") {
  Srs P = counter_system();
  auto text = encode_constraints(P, config(SemiringKind::Tropical, 2, 3));
  CHECK(text.find("(set-logic QF_LIA)") != std::string::npos);
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const std::string suffix = std::to_string(k) + "_" + std::to_string(i) + "_" + std::to_string(j);
        CHECK(text.find("(declare-fun m_" + suffix + " () Int)") != std::string::npos);
        CHECK(text.find("(declare-fun z_" + suffix + " () Bool)") != std::string::npos);
      }
}

TEST_CASE("decode: model round trip") {
  Srs P = counter_system();
  const auto cfg = config(SemiringKind::Tropical, 2, 3);
  auto found = find_interpretation(P, cfg);
  REQUIRE(found.interpretation);
  // Write the interpretation as a solver model and read it back.
  std::string model = "sat\n(\n";
  const auto syms = P.used_symbols();
  for (std::size_t k = 0; k < syms.size(); ++k)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        const Value& v = found.interpretation->get(syms[k]).at(i, j);
        const std::string s = std::to_string(k) + "_" + std::to_string(i) + "_" + std::to_string(j);
        model += "  (define-fun m_" + s + " () Int " + (v.finite() ? v.str() : "0") + ")\n";
        model += "  (define-fun z_" + s + " () Bool " + (v.finite() ? "false" : "true") + ")\n";
      }
  model += ")\n";
  auto back = decode_model(P, cfg, model);
  REQUIRE(back);
  for (Symbol s : syms) CHECK(back->get(s) == found.interpretation->get(s));
  CHECK(check_removal(*back, P).valid_removal(P));

  CHECK_FALSE(decode_model(P, cfg, "unsat\n"));
  CHECK_FALSE(decode_model(P, cfg, "sat\n((define-fun m_0_0_0 () Int (- 1)))\n"));
  auto sparse = decode_model(P, cfg, "sat\n((define-fun m_0_0_1 () Int 2))\n");
  REQUIRE(sparse);
  CHECK(sparse->get(syms[0]).at(0, 1) == Value(2));
  CHECK(sparse->get(syms[1]).at(1, 1) == Value(0));
}

TEST_CASE("external backend: missing solver is an error with diagnostics") {
  auto cfg = config(SemiringKind::Natural, 1, 1);
  cfg.backend = Backend::ExternalSolver;
  cfg.solver_command = "/nonexistent/solver-binary {file}";
  auto res = find_interpretation(srs_of({"ab->a"}), cfg);
  CHECK(res.status == SearchStatus::Error);
  CHECK_FALSE(res.diagnostics.empty());
}

#ifdef CYCLERW_SMT_SOLVER
TEST_CASE("external backend agrees with built-in at d=1 on small problems") {
  std::size_t compared = 0;
  for_small_problems([&](const Srs& P) {
    for (auto k : kAllKinds)
      for (long long b = 1; b <= 2; ++b) {
        auto builtin = config(k, 1, b);
        auto external = builtin;
        external.backend = Backend::ExternalSolver;
        external.solver_command = std::string(CYCLERW_SMT_SOLVER) + " -smt2 {file}";
        auto x = find_interpretation(P, builtin);
        auto y = find_interpretation(P, external);
        INFO(P.render_rule(0), " ", to_string(k), " bound ", b, " ", y.diagnostics);
        REQUIRE(y.status != SearchStatus::Error);
        CHECK(x.status == y.status);
        if (y.interpretation) CHECK(check_removal(*y.interpretation, P).valid_removal(P));
        ++compared;
      }
  });
  CHECK(compared == 6 * (34 + 34 * 33 / 2));
}

TEST_CASE("external backend: counter natural d=2") {
  auto cfg = config(SemiringKind::Natural, 2, 3);
  cfg.backend = Backend::ExternalSolver;
  cfg.solver_command = std::string(CYCLERW_SMT_SOLVER) + " -smt2 {file}";
  Srs P = counter_system();
  auto res = find_interpretation(P, cfg);
  REQUIRE(res.status == SearchStatus::Found);
  CHECK(check_removal(*res.interpretation, P).valid_removal(P));
}
#endif

TEST_CASE("removal_loop: counter") {
  Srs P = counter_system();
  auto out = removal_loop(P, default_schedule(), Deadline::after(std::chrono::seconds(60)));
  REQUIRE(out.success());
  REQUIRE(out.steps.size() >= 3);
  const auto& first = out.steps[0];
  CHECK(first.kind == RemovalStep::Kind::Matrix);
  REQUIRE(first.interpretation);
  CHECK(first.interpretation->kind() == SemiringKind::Tropical);
  REQUIRE(first.removed.size() == 1);
  CHECK(P.render_rule(first.removed[0]) == "P 0 -> P 1 0 0");
  // Steps chain and each re-verifies.
  Srs cur = P;
  for (const auto& st : out.steps) {
    CHECK(st.input.rules() == cur.rules());
    if (st.kind == RemovalStep::Kind::Matrix) {
      auto rep = check_removal(*st.interpretation, st.input);
      CHECK(rep.valid_removal(st.input));
      CHECK(rep.strictly == st.removed);
    } else {
      auto rep = check_counting(*st.weights, st.input);
      CHECK(rep.failed.empty());
      CHECK(rep.strictly == st.removed);
    }
    cur = without_rules(cur, st.removed);
  }
  CHECK(cur.size() == 0);
}

TEST_CASE("removal_loop: ab->ba keeps the input") {
  Srs P = srs_of({"ab->ba"});
  auto out = removal_loop(P, default_schedule(), Deadline::after(std::chrono::seconds(60)));
  CHECK(out.steps.empty());
  CHECK_FALSE(out.success());
  CHECK(out.residual.rules() == P.rules());
}

TEST_CASE("removal_loop: empty strict set succeeds without steps") {
  Srs P = srs_of({"ab=>ba"});
  auto out = removal_loop(P, default_schedule());
  CHECK(out.success());
  CHECK(out.steps.empty());
}

TEST_CASE("removal_loop: relative removal deletes decreasing weak rules too") {
  // Any strict decrease of c-> gives c positive weight, so ac=>a drops too.
  Srs P = srs_of({"c->", "ac=>a"});
  auto out = removal_loop(P, default_schedule());
  REQUIRE(out.success());
  REQUIRE(out.steps.size() == 1);
  CHECK(out.steps[0].removed == std::vector<std::size_t>{0, 1});
  CHECK(out.residual.size() == 0);
}

TEST_CASE("removal_loop: expired deadline returns the input") {
  Srs P = counter_system();
  auto out = removal_loop(P, default_schedule(), Deadline::after(std::chrono::milliseconds(0)));
  CHECK(out.steps.empty());
  CHECK(out.residual.rules() == P.rules());
}
