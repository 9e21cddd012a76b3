#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"

using namespace cyclerw;
using namespace testsupport;

namespace {

bool cycle_equal_oracle(const Word& u, const Word& v) {
  if (u.size() != v.size()) return false;
  if (u.empty()) return true;
  for (std::size_t k = 0; k < u.size(); ++k) {
    Word w1(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(k));
    Word w2(u.begin() + static_cast<std::ptrdiff_t>(k), u.end());
    if (concat(w2, w1) == v) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("canonical rotation examples") {
  Srs R = srs_of({"ab->ba"});
  const auto& A = R.alphabet();
  CHECK(canonical_rotation(Word{}).empty());
  CHECK(str_of(A, canonical_rotation(word_of(A, "aba"))) == "aab");
  CHECK(str_of(A, canonical_rotation(word_of(A, "aaaa"))) == "aaaa");
  CHECK(cycle_equal(word_of(A, "ab"), word_of(A, "ba")));
  CHECK(cycle_equal(Word{}, Word{}));
  CHECK(cycle_equal(word_of(A, "aab"), word_of(A, "aba")));
  CHECK_FALSE(cycle_equal(word_of(A, "aab"), word_of(A, "abb")));
}

TEST_CASE("canonical rotation matches brute force up to length 8") {
  for (std::size_t n = 0; n <= 8; ++n)
    for (const auto& w : all_words(3, n)) {
      Word c = canonical_rotation(w);
      REQUIRE(c == least_rotation_oracle(w));
      REQUIRE(canonical_rotation(c) == c);
      REQUIRE(cycle_equal(w, c));
    }
}

TEST_CASE("cycle_equal agrees with the split definition up to length 6") {
  for (std::size_t n = 0; n <= 6; ++n) {
    auto ws = all_words(3, n);
    for (const auto& u : ws)
      for (const auto& v : ws) REQUIRE(cycle_equal(u, v) == cycle_equal_oracle(u, v));
  }
}

TEST_CASE("string successors") {
  Srs R = srs_of({"ab->ba"});
  auto s = string_successors(R, word_of(R.alphabet(), "ab"));
  REQUIRE(s.size() == 1);
  CHECK(s[0] == Redex{0, 0, word_of(R.alphabet(), "ba")});
  CHECK(string_successors(R, Word{}).empty());

  Srs R1 = srs_of({"aa->aba"});
  const auto& A = R1.alphabet();
  auto t = string_successors(R1, word_of(A, "aaa"));
  REQUIRE(t.size() == 2);
  CHECK(t[0] == Redex{0, 0, word_of(A, "abaa")});
  CHECK(t[1] == Redex{0, 1, word_of(A, "aaba")});
  auto p = prefix_successors(R1, word_of(A, "aaa"));
  REQUIRE(p.size() == 1);
  CHECK(p[0].position == 0);
  auto q = suffix_successors(R1, word_of(A, "aaa"));
  REQUIRE(q.size() == 1);
  CHECK(q[0].position == 1);
}

TEST_CASE("cycle successors examples") {
  Srs R = srs_of({"ab->ba"});
  auto s = cycle_successors(R, word_of(R.alphabet(), "ab"));
  REQUIRE(s.size() == 1);
  CHECK(s[0].rule == 0);
  CHECK(s[0].target == CycleWord(word_of(R.alphabet(), "ab")));

  Srs R1 = srs_of({"aa->aba"});
  auto t = cycle_successors(R1, word_of(R1.alphabet(), "aba"));
  REQUIRE(t.size() == 1);
  CHECK(t[0].target == CycleWord(word_of(R1.alphabet(), "baba")));

  CHECK(cycle_successors(R1, Word{}).empty());
  // lhs longer than the cycle never applies
  CHECK(cycle_successors(R1, word_of(R1.alphabet(), "a")).empty());

  Srs R2 = srs_of({"aaa->ababa"}, "abc");
  Word u = word_of(R2.alphabet(), "aabca");
  CHECK(as_set(cycle_successors(R2, u)) == cycle_oracle(R2, canonical_rotation(u)));
}

TEST_CASE("cycle successors agree with the rotate-then-prefix oracle") {
  std::mt19937_64 rng(7);
  std::vector<Srs> systems{srs_of({"ab->ba"}, "abc"), srs_of({"aa->aba"}, "abc"),
                           srs_of({"aa->bc", "bb->ac", "cc->ab"}, "abc"),
                           srs_of({"abc->c", "ca->", "bb->abcab"}, "abc")};
  for (int i = 0; i < 20; ++i) systems.push_back(random_srs(rng, 3, 1 + rng() % 3, 4));
  for (const auto& R : systems)
    for (const auto& w : all_words_upto(3, 5)) {
      Word c = canonical_rotation(w);
      REQUIRE(as_set(cycle_successors(R, c)) == cycle_oracle(R, c));
    }
}

TEST_CASE("every string step lifts to a cycle step") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 2000; ++iter) {
    Srs R = random_srs(rng, 3, 1 + rng() % 3, 3);
    Word u = random_word(rng, 3, 0, 7);
    auto cyc = as_set(cycle_successors(R, u));
    for (const auto& rd : string_successors(R, u))
      REQUIRE(cyc.count({rd.rule, canonical_rotation(rd.result)}) == 1);
  }
}

TEST_CASE("offsets reported by cycle successors replay") {
  Srs R = srs_of({"aa->bc", "bb->ac", "cc->ab"});
  for (const auto& w : all_words_upto(3, 5))
    for (const auto& st : cycle_successors(R, w)) {
      Word c = canonical_rotation(w);
      auto res = apply_at_rotation(R.rule(st.rule), c, st.offset);
      REQUIRE(res);
      REQUIRE(CycleWord(*res) == st.target);
    }
}

TEST_CASE("relative trace check") {
  Srs R = srs_of({"ab->ca", "c=>b"});
  const auto& A = R.alphabet();
  std::vector<TraceStep> tr{{0, true, word_of(A, "ca")}, {1, false, word_of(A, "ba")}};
  auto ok = check_relative_trace(R, word_of(A, "ab"), tr, TraceMode::Cycle);
  CHECK(ok.ok);
  CHECK(check_relative_trace(R, word_of(A, "ab"), {}, TraceMode::Cycle).ok);

  auto bad = tr;
  bad[1].strict = true;
  auto r = check_relative_trace(R, word_of(A, "ab"), bad, TraceMode::Cycle);
  CHECK_FALSE(r.ok);
  CHECK(r.first_bad == 1u);

  std::vector<TraceStep> weak_only{{1, false, word_of(A, "bb")}};
  CHECK_FALSE(check_relative_trace(R, word_of(A, "cb"), weak_only, TraceMode::String).ok);

  std::vector<TraceStep> invalid{{0, true, word_of(A, "ab")}};
  auto r2 = check_relative_trace(R, word_of(A, "ab"), invalid, TraceMode::String);
  CHECK_FALSE(r2.ok);
  CHECK(r2.first_bad == 0u);
}

TEST_CASE("srs invariants") {
  Alphabet a;
  Symbol x = a.intern("x");
  CHECK_THROWS(Srs(a, {Rule{{}, {x}, true}}));
  CHECK(a.intern("x") == x);
  CHECK(a.name(x) == "x");
  Srs R = srs_of({"ab->ca", "c=>b"});
  CHECK(R.is_relative());
  CHECK(R.strict_count() == 1);
  CHECK(R.render_rule(1) == "c ->= b");
}
