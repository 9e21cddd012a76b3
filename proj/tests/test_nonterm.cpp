#include <doctest.h>

#include <map>
#include <set>

#include "cyclerw/nonterm.hpp"
#include "support.hpp"

using namespace cyclerw;
using namespace testsupport;

namespace {

std::string cls(const Alphabet& a, const Word& w) { return str_of(a, canonical_rotation(w)); }

// Class successors by brute force: rotate, then rewrite a prefix.
std::set<Word> oracle_successors(const Srs& P, const Word& u) {
  std::set<Word> out;
  for (std::size_t k = 0; k < std::max<std::size_t>(u.size(), 1); ++k) {
    Word v = rotate(u, k);
    for (const Rule& r : P.rules()) {
      if (r.lhs.size() > v.size() || !std::equal(r.lhs.begin(), r.lhs.end(), v.begin())) continue;
      Word t = r.rhs;
      t.insert(t.end(), v.begin() + r.lhs.size(), v.end());
      std::vector<Word> rots;
      for (std::size_t j = 0; j < std::max<std::size_t>(t.size(), 1); ++j) rots.push_back(rotate(t, j));
      out.insert(*std::min_element(rots.begin(), rots.end()));
    }
  }
  return out;
}

// Does some class of length <= max_len return to itself within max_depth
// steps through classes of length <= max_len?
bool oracle_has_loop(const Srs& P, std::size_t max_len, std::size_t max_depth) {
  std::map<Word, std::set<Word>> succ;
  auto next = [&](const Word& u) -> const std::set<Word>& {
    auto it = succ.find(u);
    if (it == succ.end()) it = succ.emplace(u, oracle_successors(P, u)).first;
    return it->second;
  };
  for (const auto& w : all_words_upto(2, max_len)) {
    if (w.empty()) continue;
    std::vector<Word> rots;
    for (std::size_t j = 0; j < w.size(); ++j) rots.push_back(rotate(w, j));
    const Word u = *std::min_element(rots.begin(), rots.end());
    if (u != w) continue;
    std::set<Word> frontier{u};
    for (std::size_t d = 0; d < max_depth; ++d) {
      std::set<Word> grown;
      for (const auto& v : frontier)
        for (const auto& t : next(v))
          if (t.size() <= max_len) grown.insert(t);
      if (grown.count(u)) return true;
      frontier = std::move(grown);
    }
  }
  return false;
}

NontermConfig wide() {
  NontermConfig c;
  c.budget = std::chrono::seconds(20);
  return c;
}

}  // namespace

TEST_CASE("cycle loop: ab->ba at depth 1") {
  Srs P = srs_of({"ab->ba"});
  auto w = find_cycle_loop(P, wide());
  REQUIRE(w);
  CHECK(w->kind == LoopKind::CycleRepetition);
  CHECK(str_of(P.alphabet(), w->start) == "ab");
  REQUIRE(w->steps.size() == 1);
  CHECK(cls(P.alphabet(), w->steps[0].word) == "ab");
  CHECK(w->strict_count == 1);
  CHECK(verify_witness(P, *w).ok);
}

TEST_CASE("cycle loop: killer triple") {
  Srs P = srs_of({"aa->bc", "bb->ac", "cc->ab"});
  const auto& A = P.alphabet();
  // [aabb], [aacc] and [bbcc] all start 3-step loops; seeding reaches
  // [aabb] first.
  auto any = find_cycle_loop(P, wide());
  REQUIRE(any);
  CHECK(any->steps.size() == 3);
  CHECK(cls(A, any->start) == "aabb");
  CHECK(verify_witness(P, *any).ok);

  auto w = find_cycle_loop_from(P, word_of(A, "ccaa"), wide());
  REQUIRE(w);
  CHECK(cls(A, w->start) == "aacc");
  CHECK(w->steps.size() == 3);
  CHECK(verify_witness(P, *w).ok);

  // The hand-written loop [ccaa] -> [abaa] -> [abbc] -> [ccaa].
  LoopWitness hand{LoopKind::CycleRepetition, word_of(A, "ccaa"), {}, {}, {}, 3};
  Word cur = hand.start;
  for (auto [rule, to] : {std::pair{2, "abaa"}, {0, "abbc"}, {1, "ccaa"}}) {
    const Word target = word_of(A, to);
    std::optional<std::size_t> at;
    for (std::size_t k = 0; k < cur.size() && !at; ++k)
      if (auto r = apply_at_rotation(P.rule(rule), cur, k); r && cycle_equal(*r, target)) at = k;
    REQUIRE(at);
    hand.steps.push_back({static_cast<std::size_t>(rule), *at, target});
    cur = target;
  }
  CHECK(verify_witness(P, hand).ok);
}

TEST_CASE("cycle loop: relative [ab] -> [ca] -> [ab]") {
  Srs P = srs_of({"ab->ca", "c=>b"});
  auto w = find_cycle_loop(P, wide());
  REQUIRE(w);
  const auto& A = P.alphabet();
  CHECK(cls(A, w->start) == "ab");
  REQUIRE(w->steps.size() == 2);
  CHECK(w->steps[0].rule == 0);
  CHECK(cls(A, w->steps[0].word) == cls(A, word_of(A, "ca")));
  CHECK(w->steps[1].rule == 1);
  CHECK(cls(A, w->steps[1].word) == "ab");
  CHECK(w->strict_count == 1);
  CHECK(verify_witness(P, *w).ok);
}

TEST_CASE("cycle loop: dining philosophers") {
  Alphabet a;
  for (auto n : {"T", "F", "L", "E"}) a.intern(n);
  Srs P(a, {Rule{a.parse_word("T F"), a.parse_word("L")}, Rule{a.parse_word("F L"), a.parse_word("E")},
            Rule{a.parse_word("E"), a.parse_word("F T F")}});
  auto w = find_cycle_loop(P, wide());
  REQUIRE(w);
  CHECK(verify_witness(P, *w).ok);
}

TEST_CASE("string loop: a->aa") {
  Srs P = srs_of({"a->aa"});
  auto w = find_string_loop(P, wide());
  REQUIRE(w);
  CHECK(w->kind == LoopKind::StringSelfEmbedding);
  CHECK(str_of(P.alphabet(), w->start) == "a");
  CHECK(w->steps.size() == 1);
  CHECK(w->x.empty());
  CHECK(str_of(P.alphabet(), w->y) == "a");
  CHECK(verify_witness(P, *w).ok);
}

TEST_CASE("string loop: relative aa->aba with ab=>ba") {
  Srs P = srs_of({"aa->aba", "ab=>ba"});
  auto w = find_string_loop(P, wide());
  REQUIRE(w);
  const auto& A = P.alphabet();
  CHECK(str_of(A, w->start) == "aa");
  REQUIRE(w->steps.size() == 2);
  CHECK(str_of(A, w->steps[0].word) == "aba");
  CHECK(str_of(A, w->steps[1].word) == "baa");
  CHECK(str_of(A, w->x) == "b");
  CHECK(w->y.empty());
  CHECK(w->strict_count == 1);
  CHECK(verify_witness(P, *w).ok);
}

TEST_CASE("aa->aba: no loop within the default bounds") {
  Srs P = srs_of({"aa->aba"});
  NontermConfig cfg;
  CHECK_FALSE(find_cycle_loop(P, cfg));
  CHECK_FALSE(find_string_loop(P, cfg));
  CHECK_FALSE(find_loop(P, cfg));
}

TEST_CASE("weak rules alone never give a witness") {
  CHECK_FALSE(find_loop(srs_of({"ab=>ba"}), wide()));
  // [ab] -> [ab] uses only the weak rule and the strict rule cannot loop.
  Srs P = srs_of({"ab=>ba", "c->d"});
  CHECK_FALSE(find_loop(P, wide()));
}

TEST_CASE("verify_witness rejects forged witnesses") {
  Srs P = srs_of({"ab->ba"});
  auto w = find_cycle_loop(P, wide());
  REQUIRE(w);

  LoopWitness empty = *w;
  empty.steps.clear();
  CHECK_FALSE(verify_witness(P, empty).ok);

  LoopWitness forged = *w;
  forged.steps[0].word = word_of(P.alphabet(), "aa");
  auto chk = verify_witness(P, forged);
  CHECK_FALSE(chk.ok);
  CHECK(chk.first_bad == 0u);

  LoopWitness bad_rule = *w;
  bad_rule.steps[0].rule = 7;
  CHECK_FALSE(verify_witness(P, bad_rule).ok);

  LoopWitness bad_count = *w;
  bad_count.strict_count = 2;
  CHECK_FALSE(verify_witness(P, bad_count).ok);

  // A loop over a weak rule only.
  Srs R = srs_of({"ab=>ba", "c->cc"});
  LoopWitness weak{LoopKind::CycleRepetition, word_of(R.alphabet(), "ab"), {{0, 0, word_of(R.alphabet(), "ab")}}, {}, {}, 0};
  auto wc = verify_witness(R, weak);
  CHECK_FALSE(wc.ok);
  CHECK(wc.reason == "loop has no strict step");

  // String witness whose end is not x.start.y.
  Srs S = srs_of({"a->aa"});
  auto sw = find_string_loop(S, wide());
  REQUIRE(sw);
  sw->y = word_of(S.alphabet(), "aa");
  CHECK_FALSE(verify_witness(S, *sw).ok);
}

TEST_CASE("no false negatives: one-rule systems over two letters") {
  NontermConfig cfg;
  cfg.max_start_len = 6;
  cfg.max_word_len = 6;
  cfg.max_depth = 4;
  cfg.max_states = 1 << 20;
  cfg.budget = std::chrono::seconds(60);
  std::size_t looping = 0, total = 0;
  for (std::size_t l = 1; l <= 2; ++l)
    for (std::size_t r = 0; r <= 2; ++r)
      for (const auto& lhs : all_words(2, l))
        for (const auto& rhs : all_words(2, r)) {
          Alphabet a;
          a.intern("a");
          a.intern("b");
          Srs P(a, {Rule{lhs, rhs}});
          const bool expected = oracle_has_loop(P, 6, 4);
          auto w = find_cycle_loop(P, cfg);
          INFO(P.render_rule(0));
          CHECK(expected == w.has_value());
          if (w) CHECK(verify_witness(P, *w).ok);
          looping += expected;
          ++total;
        }
  CHECK(total == 2 * 7 + 4 * 7);
  CHECK(looping > 0);
}

TEST_CASE("fuzz: every witness verifies") {
  std::mt19937_64 rng(5);
  NontermConfig cfg;
  cfg.max_start_len = 3;
  cfg.max_word_len = 8;
  cfg.max_depth = 6;
  cfg.max_states = 2000;
  std::size_t found = 0;
  for (int it = 0; it < 400; ++it) {
    Srs P = random_srs(rng, 2 + rng() % 2, 1 + rng() % 3, 3, true, it % 2 == 0);
    for (auto* f : {&find_cycle_loop, &find_string_loop}) {
      auto w = (*f)(P, cfg, Deadline::never());
      if (!w) continue;
      ++found;
      auto chk = verify_witness(P, *w);
      INFO(chk.reason);
      CHECK(chk.ok);
      CHECK(w->strict_count >= 1);
    }
  }
  CHECK(found > 50);
}
