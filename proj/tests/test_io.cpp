#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cyclerw/bench.hpp"
#include "cyclerw/proof_io.hpp"
#include "cyclerw/tpdb.hpp"
#include "support.hpp"

using namespace cyclerw;
using namespace testsupport;
using namespace std::chrono_literals;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> rendered(const Srs& P) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < P.size(); ++i) out.push_back(P.render_rule(i));
  return out;
}

void expect_error(std::string_view text, std::size_t line, std::size_t column, std::string_view what) {
  try {
    parse_tpdb(text);
    FAIL("no error for: " << text);
  } catch (const TpdbError& e) {
    CHECK(e.line() == line);
    CHECK(e.column() == column);
    CHECK(std::string(e.what()).find(what) != std::string::npos);
  }
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("cyclerw-test-" + std::to_string(::getpid()) + "-" +
                                        std::to_string(Clock::now().time_since_epoch().count()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  void write(const std::string& name, const std::string& text) const {
    fs::create_directories((path / name).parent_path());
    std::ofstream(path / name) << text;
  }
};

}  // namespace

TEST_CASE("parse: basic systems") {
  auto f = parse_tpdb("(RULES a b -> b a)");
  CHECK(f.srs.size() == 1);
  CHECK(f.srs.alphabet().size() == 2);
  CHECK(f.srs.rule(0).strict);
  CHECK_FALSE(f.relative);

  f = parse_tpdb("(RULES a b -> c a, c ->= b)");
  CHECK(f.relative);
  CHECK(rendered(f.srs) == std::vector<std::string>{"a b -> c a", "c ->= b"});
  CHECK(f.srs.strict_count() == 1);

  f = parse_tpdb("(RULES 0 P -> 1 P, 1 P -> c P, 0 c -> 1 0, 1 c -> c 0, P 0 -> P 1 0 0)");
  CHECK(f.srs.size() == 5);
  CHECK(f.srs.alphabet().size() == 4);
  CHECK(rendered(f.srs)[4] == "P 0 -> P 1 0 0");
}

TEST_CASE("parse: dialect details") {
  SUBCASE("comments, empty VAR, empty right-hand sides, trailing comma") {
    auto f = parse_tpdb(
        "(VAR)\n(COMMENT a (nested) comment, with -> arrows)\n(RULES\n  a a ->,\n  b -> a a a,\n  c ->=\n,)\n");
    CHECK(f.comments == std::vector<std::string>{"a (nested) comment, with -> arrows"});
    CHECK(f.srs.size() == 3);
    CHECK(f.srs.rule(0).rhs.empty());
    CHECK(f.srs.rule(2).rhs.empty());
    CHECK_FALSE(f.srs.rule(2).strict);
    CHECK(f.warnings.empty());
  }
  SUBCASE("unknown sections are skipped with a warning") {
    auto f = parse_tpdb("(STRATEGY INNERMOST (x y))\n(RULES a -> b)");
    CHECK(f.srs.size() == 1);
    REQUIRE(f.warnings.size() == 1);
    CHECK(f.warnings[0].find("STRATEGY") != std::string::npos);
    CHECK(f.warnings[0].rfind("1:2:", 0) == 0);
  }
  SUBCASE("multi-character and punctuated symbol names") {
    auto f = parse_tpdb("(RULES a' L -> L a'', x_1 ->= {y} )");
    CHECK(rendered(f.srs) == std::vector<std::string>{"a' L -> L a''", "x_1 ->= {y}"});
  }
  SUBCASE("no RULES section gives the empty system") { CHECK(parse_tpdb("(COMMENT nothing)").srs.size() == 0); }
}

TEST_CASE("parse: errors carry line and column") {
  expect_error("(VAR x)", 1, 6, "no variables");
  expect_error("(RULES\n  -> a)", 2, 3, "empty left-hand side");
  expect_error("(RULES a b c)", 1, 13, "expected '->'");
  expect_error("(RULES a -> b c -> d)", 1, 17, "expected ',' or ')'");
  expect_error("(RULES a -> b", 1, 14, "unexpected end");
  expect_error("(RULES a -> b)\n  x", 2, 3, "expected '('");
  expect_error("(COMMENT open", 1, 1, "unclosed");
  expect_error("(RULES a#1 -> b)", 1, 8, "reserved");
  expect_error("(RULES a -> b)(RULES b -> a)", 1, 16, "duplicate");
  expect_error("(RULES \"a\" -> b)", 1, 8, "unexpected");
  CHECK(parse_tpdb("(RULES a#1 -> b)", TpdbOptions{true}).srs.size() == 1);
}

TEST_CASE("print/parse round trip on the bundled corpus") {
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(CYCLERW_CORPUS_DIR)) {
    if (e.path().extension() != ".srs") continue;
    ++files;
    const ProblemFile f = read_tpdb_file(e.path().string());
    INFO(e.path());
    CHECK(expected_verdict(f).has_value());
    const std::string text = print_tpdb(f.srs, f.comments);
    const ProblemFile g = parse_tpdb(text);
    CHECK(rendered(g.srs) == rendered(f.srs));
    CHECK(g.srs.rules() == f.srs.rules());
    CHECK(g.comments == f.comments);
    CHECK(print_tpdb(g.srs, g.comments) == text);
    CHECK(problem_digest(g.srs) == problem_digest(f.srs));
  }
  CHECK(files >= 20);
}

TEST_CASE("transformed systems print as parseable TPDB") {
  const Srs P = srs_of({"aa->aba", "ab=>ba"});
  for (auto k : {TransformKind::Split, TransformKind::Shift, TransformKind::Rotate}) {
    const auto out = transform_rel(k, P);
    const auto back = parse_tpdb(print_tpdb(out.srs), TpdbOptions{true});
    CHECK(rendered(back.srs) == rendered(out.srs));
  }
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("proof JSON") {
  SUBCASE("counter proof survives a round trip and re-verifies") {
    const Srs P = parse_tpdb("(RULES 0 P -> 1 P, 1 P -> c P, 0 c -> 1 0, 1 c -> c 0, P 0 -> P 1 0 0)").srs;
    const ProveResult r = prove(P, Strategy{}, 60s);
    REQUIRE(r.proof);
    const std::string text = print_proof(P, *r.proof, ProofFormat::Json);
    // Check against a freshly parsed problem, as the verify command does.
    const Srs Q = parse_tpdb(print_tpdb(P)).srs;
    const ProofObject back = proof_from_json(nlohmann::json::parse(text), Q);
    CHECK(verify_certificate(Q, back));
    CHECK(proof_to_json(Q, back) == nlohmann::json::parse(text));
    const auto j = nlohmann::json::parse(text);
    CHECK(j["verdict"] == "YES");
    CHECK(j["steps"][0]["type"] == "matrix");
    CHECK(j["steps"][0]["semiring"] == "tropical");
    CHECK(j["steps"][0]["removed_rules"] == nlohmann::json::array({"P 0 -> P 1 0 0"}));

    const std::string human = print_proof(P, *r.proof, ProofFormat::Human);
    CHECK(human.rfind("YES\n", 0) == 0);
    CHECK(human.find("tropical matrix removal") != std::string::npos);
  }
  SUBCASE("loop witness for ab->ba has its one-step trace") {
    const Srs P = srs_of({"ab->ba"});
    const ProveResult r = prove(P, Strategy{}, 10s);
    REQUIRE(r.proof);
    const auto j = proof_to_json(P, *r.proof);
    REQUIRE(j["steps"].size() == 1);
    const auto& s = j["steps"][0];
    CHECK(s["type"] == "loop");
    CHECK(s["kind"] == "cycle-repetition");
    CHECK(s["start"] == "a b");
    REQUIRE(s["steps"].size() == 1);
    CHECK(s["steps"][0]["rule_text"] == "a b -> b a");
    CHECK(verify_certificate(P, proof_from_json(j, P)));
  }
  SUBCASE("malformed input") {
    const Srs P = srs_of({"ab->ba"});
    CHECK_THROWS_AS(proof_from_json(nlohmann::json::object(), P), std::runtime_error);
    nlohmann::json j = {{"format", "cyclerw-proof"}, {"version", 1}, {"problem_digest", ""},
                        {"steps", {{{"type", "loop"}, {"kind", "cycle-repetition"}, {"start", "a z"}}}}};
    CHECK_THROWS_WITH_AS(proof_from_json(j, P), doctest::Contains("unknown symbol"), std::runtime_error);
    j["steps"] = {{{"type", "teleport"}}};
    CHECK_THROWS_AS(proof_from_json(j, P), std::runtime_error);
  }
}

TEST_CASE("bench harness") {
  Strategy fast;
  fast.schedule = default_schedule(50ms);

  SUBCASE("empty directory") {
    TempDir d;
    const auto rep = run_bench(d.path.string(), {fast, 1s, 2, ""});
    CHECK(rep.results.empty());
    CHECK(rep.summary().total() == 0);
    CHECK(rep.csv() == "problem,verdict,time_ms,technique\n");
  }
  SUBCASE("rows, errors, sorting and counts") {
    TempDir d;
    d.write("b.srs", "(COMMENT expected: NO)(RULES a b -> b a)");
    d.write("a.srs", "(COMMENT expected: YES)(RULES a b -> b)");
    d.write("sub/c.srs", "(RULES a b ->");
    d.write("d.srs", "(RULES a b -> b a c, c ->= a b)");
    d.write("ignored.txt", "(RULES a -> a)");
    const auto proofs = d.path / "proofs";
    const auto rep = run_bench(d.path.string(), {fast, 2s, 3, proofs.string()});
    REQUIRE(rep.results.size() == 4);
    std::vector<std::string> names;
    for (const auto& r : rep.results) names.push_back(r.problem);
    CHECK(names == std::vector<std::string>{"a.srs", "b.srs", "d.srs", "sub/c.srs"});
    CHECK(rep.results[0].verdict == Verdict::Yes);
    CHECK(rep.results[0].expected == Verdict::Yes);
    CHECK(rep.results[1].verdict == Verdict::No);
    CHECK(rep.results[1].technique == "cycle-loop");
    CHECK(rep.results[3].technique == "error");
    CHECK(rep.results[3].error.find("1:14") != std::string::npos);
    const auto s = rep.summary();
    CHECK(s.total() == 4);
    CHECK(s.errors == 1);
    CHECK(s.yes + s.no + s.maybe == 3);

    // Proof files re-verify.
    REQUIRE_FALSE(rep.results[1].proof_path.empty());
    std::ifstream in(rep.results[1].proof_path);
    const Srs P = read_tpdb_file((d.path / "b.srs").string()).srs;
    CHECK(verify_certificate(P, proof_from_json(nlohmann::json::parse(in), P)));

    const std::string csv = rep.csv();
    CHECK(csv.rfind("problem,verdict,time_ms,technique\na.srs,YES,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  }
  SUBCASE("a 1 ms limit leaves everything undecided") {
    TempDir d;
    d.write("aa-aba.srs", "(RULES a a -> a b a)");
    d.write("counter.srs", "(RULES 0 P -> 1 P, 1 P -> c P, 0 c -> 1 0, 1 c -> c 0, P 0 -> P 1 0 0)");
    d.write("phi.srs",
            "(RULES R E -> L E, a L -> L a', b L -> L b', c L -> L c', R a' -> a R, R b' -> b R,"
            " R c' -> c R, a b L -> b c a R, c b L -> b b c R)");
    const auto rep = run_bench(d.path.string(), {fast, 1ms, 1, ""});
    REQUIRE(rep.results.size() == 3);
    for (const auto& r : rep.results) {
      INFO(r.problem);
      CHECK(r.verdict == Verdict::Maybe);
      CHECK(r.time < 1s);
    }
    CHECK(rep.summary().maybe == 3);
  }
  SUBCASE("whatever arrives within 1 ms is still verified") {
    TempDir d;
    d.write("ab-ba.srs", "(RULES a b -> b a)");
    d.write("shrink.srs", "(RULES a b -> b)");
    const auto rep = run_bench(d.path.string(), {fast, 1ms, 1, (d.path / "p").string()});
    CHECK(rep.summary().total() == 2);
    for (const auto& r : rep.results)
      if (r.verdict != Verdict::Maybe) CHECK_FALSE(r.proof_path.empty());
  }
}

TEST_CASE("expected verdict comments") {
  CHECK(expected_verdict(parse_tpdb("(COMMENT expected: NO, by a loop)(RULES a -> a)")) == Verdict::No);
  CHECK(expected_verdict(parse_tpdb("(COMMENT expected:MAYBE)")) == Verdict::Maybe);
  CHECK_FALSE(expected_verdict(parse_tpdb("(COMMENT nothing here)")).has_value());
}
