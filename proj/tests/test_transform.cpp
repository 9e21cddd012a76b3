#include <doctest.h>

#include <algorithm>
#include <set>

#include "cyclerw/transform.hpp"
#include "oracles.hpp"

using namespace cyclerw;
using namespace testsupport;

namespace {

std::set<std::string> rendered(const TransformOutput& out, bool strict_only = false) {
  std::set<std::string> s;
  for (const auto& r : out.srs.rules())
    if (!strict_only || r.strict) s.insert(out.srs.render_rule(Rule{r.lhs, r.rhs, true}));
  return s;
}

std::vector<std::string> derivation_words(const TransformOutput& out, const Derivation& d) {
  std::vector<std::string> ws{out.srs.alphabet().render(d.start)};
  for (const auto& st : d.steps) ws.push_back(out.srs.alphabet().render(st.result));
  return ws;
}

void check_simulations(const Srs& R, const std::vector<TransformOutput>& outs, std::size_t maxlen) {
  std::set<Word> seen;
  for (const auto& w : all_words_upto(static_cast<std::uint32_t>(R.alphabet().size()), maxlen)) {
    Word u = canonical_rotation(w);
    if (!seen.insert(u).second) continue;
    for (std::size_t i = 0; i < R.size(); ++i)
      for (std::size_t k = 0; k < u.size(); ++k) {
        auto v = apply_at_rotation(R.rule(i), u, k);
        if (!v) continue;
        for (const auto& out : outs) {
          Derivation d = simulate_step(out, R, u, i, k);
          REQUIRE(derivation_valid(out, d));
          REQUIRE(d.start == embed(out, u));
          auto img = backmap(out, d.end());
          REQUIRE(img.size() == 1);
          REQUIRE(cycle_equal(img[0], *v));
          REQUIRE(word_type(out.typing, d.end()) == WordType{out.K, out.T});
          if (out.kind == TransformKind::Split) {
            auto rewrites = std::count_if(d.steps.begin(), d.steps.end(), [&](const Redex& r) {
              return out.family[r.rule] == "splitA" || out.family[r.rule] == "splitF";
            });
            REQUIRE(rewrites == 1);
          }
        }
      }
  }
}

}  // namespace

TEST_CASE("split of aa -> aba") {
  Srs R = srs_of({"aa->aba"});
  auto out = transform(TransformKind::Split, R);
  std::set<std::string> expect{
      "a a -> a b a",        "#a~bar #L -> #L a",          "#b~bar #L -> #L b",
      "#W #L -> #B",         "#B a -> #W #R_1_1",          "#R_1_1 a #E -> #L a b a #E",
      "#R_1_1 a -> #a~bar #R_1_1", "#R_1_1 b -> #b~bar #R_1_1"};
  CHECK(out.srs.size() == 8);
  CHECK(rendered(out) == expect);
  CHECK(well_typed_srs(out.typing, out.srs));
}

TEST_CASE("split of abc -> cbacba, aa -> a has 21 rules") {
  Srs R = srs_of({"abc->cbacba", "aa->a"});
  auto out = transform(TransformKind::Split, R);
  std::set<std::string> expect{
      "a b c -> c b a c b a", "a a -> a", "#W #L -> #B",
      "#a~bar #L -> #L a", "#b~bar #L -> #L b", "#c~bar #L -> #L c",
      "#B b c -> #W #R_1_1", "#B c -> #W #R_1_2", "#B a -> #W #R_2_1",
      "#R_1_1 a #E -> #L c b a c b a #E", "#R_1_2 a b #E -> #L c b a c b a #E",
      "#R_2_1 a #E -> #L a #E",
      "#R_1_1 a -> #a~bar #R_1_1", "#R_1_2 a -> #a~bar #R_1_2", "#R_2_1 a -> #a~bar #R_2_1",
      "#R_1_1 b -> #b~bar #R_1_1", "#R_1_2 b -> #b~bar #R_1_2", "#R_2_1 b -> #b~bar #R_2_1",
      "#R_1_1 c -> #c~bar #R_1_1", "#R_1_2 c -> #c~bar #R_1_2", "#R_2_1 c -> #c~bar #R_2_1"};
  CHECK(out.srs.size() == 21);
  CHECK(rendered(out) == expect);
}

TEST_CASE("rotate of aaa -> ababa") {
  Srs R = srs_of({"aaa->ababa"}, "ab");
  auto out = transform(TransformKind::Rotate, R);
  // rot over two letters: A,E,J,L,N single; B,C,D,H,I,K,M per letter (7*2); F four; G two.
  CHECK(out.srs.size() == 5 + 14 + 4 + 2 + 1);
  CHECK(out.srs.render_rule(out.srs.size() - 1) == "#W a a a -> #B a b a b a");
  CHECK(std::count(out.family.begin(), out.family.end(), "rotO") == 1);
  CHECK(well_typed_srs(out.typing, out.srs));
}

TEST_CASE("relative variants") {
  Srs P = srs_of({"bc=>cb", "abc->bac"});
  auto sp = transform_rel(TransformKind::Split, P);
  std::set<std::string> strict{"#R_2_1 a #E -> #L b a c #E", "#R_2_2 a b #E -> #L b a c #E",
                               "a b c -> b a c"};
  CHECK(rendered(sp, true) == strict);
  CHECK(sp.srs.size() == transform(TransformKind::Split, P).srs.size());

  Srs Q = srs_of({"ab->ba"});
  auto sh = transform_rel(TransformKind::Shift, Q);
  for (std::size_t i = 0; i < sh.srs.size(); ++i) CHECK(sh.srs.rule(i).strict == (sh.family[i] == "shiftH"));

  auto ro = transform_rel(TransformKind::Rotate, Q);
  CHECK(rendered(ro, true) == std::set<std::string>{"#W a b -> #B b a"});
  CHECK(ro.srs.strict_count() == 1);

  CHECK_THROWS(transform_rel(TransformKind::Split, srs_of({"a=>b"})));
}

TEST_CASE("split simulation of [aba] -> [baba]") {
  Srs R = srs_of({"aa->aba"});
  auto out = transform(TransformKind::Split, R);
  Word u = word_of(R.alphabet(), "aba");
  auto d = simulate_step(out, R, u, 0, 2);
  CHECK(derivation_valid(out, d));
  CHECK(derivation_words(out, d) ==
        std::vector<std::string>{"#B a b a #E", "#W #R_1_1 b a #E", "#W #b~bar #R_1_1 a #E",
                                 "#W #b~bar #L a b a #E", "#W #L b a b a #E", "#B b a b a #E"});
}

TEST_CASE("shift simulation of [aba] -> [baba]") {
  Srs R = srs_of({"aa->aba"});
  auto out = transform(TransformKind::Shift, R);
  auto d = simulate_step(out, R, word_of(R.alphabet(), "aba"), 0, 2);
  CHECK(derivation_valid(out, d));
  CHECK(derivation_words(out, d) ==
        std::vector<std::string>{"#B a b a #E", "#W #M #V a b a #E", "#W #V #a@B b a #E",
                                 "#W #V b #a@B a #E", "#W #V b a #a@B #E", "#W #V b a a #E",
                                 "#R #L b a a #E", "#R #b@C #L a a #E", "#R #b@C #D a b a #E",
                                 "#R #D b a b a #E", "#B b a b a #E"});

  // No shift needed: shiftA, shiftB^N, shiftF, rewrite, cleanup.
  Srs R2 = srs_of({"aab->b", "ba->ab"});
  auto out2 = transform(TransformKind::Shift, R2);
  auto d2 = simulate_step(out2, R2, word_of(R2.alphabet(), "baa"), 1, 0);
  CHECK(derivation_valid(out2, d2));
  std::vector<std::string> fams;
  for (const auto& st : d2.steps) fams.push_back(out2.family[st.rule]);
  CHECK(fams == std::vector<std::string>{"shiftA", "shiftB", "shiftB", "shiftF", "shiftH", "shiftJ"});
}

TEST_CASE("rotate simulation of [abbaa] -> [abababb]") {
  Srs R = srs_of({"aaa->ababa"}, "ab");
  auto out = transform(TransformKind::Rotate, R);
  auto d = simulate_step(out, R, word_of(R.alphabet(), "abbaa"), 0, 3);
  CHECK(derivation_valid(out, d));
  std::vector<std::string> expect{
      "#B a b b a a #E",
      "#O #C #a@D #G b b a a #E",
      "#O #C #a@D #b@D #G b a a #E",
      "#O #C #a@D #b@D #b@D #G a a #E",
      "#O #C #a@D #b@D #b@D #L #a@C #S a #E",
      "#O #C #a@D #b@D #L #a@C #b@B #S a #E",
      "#O #C #a@D #L #a@C #b@B #b@B #S a #E",
      "#O #C #L #a@C #a@B #b@B #b@B #S a #E",
      "#O #a@E #C #R #a@B #b@B #b@B #S a #E",
      "#O #a@E #C #a@D #R #b@B #b@B #S a #E",
      "#O #a@E #C #a@D #b@D #R #b@B #S a #E",
      "#O #a@E #C #a@D #b@D #b@D #R #S a #E",
      "#O #a@E #C #a@D #b@D #b@D #L #a@C #S #E",
      "#O #a@E #C #a@D #b@D #L #a@C #b@B #S #E",
      "#O #a@E #C #a@D #L #a@C #b@B #b@B #S #E",
      "#O #a@E #C #L #a@C #a@B #b@B #b@B #S #E",
      "#O #a@E #a@E #C #R #a@B #b@B #b@B #S #E",
      "#O #a@E #a@E #C #a@D #R #b@B #b@B #S #E",
      "#O #a@E #a@E #C #a@D #b@D #R #b@B #S #E",
      "#O #a@E #a@E #C #a@D #b@D #b@D #R #S #E",
      "#O #a@E #a@E #C #a@D #b@D #b@D #F #E",
      "#O #a@E #a@E #C #a@D #b@D #F b #E",
      "#O #a@E #a@E #C #a@D #F b b #E",
      "#O #a@E #a@E #C #F a b b #E",
      "#O #a@E #a@E #f a b b #E",
      "#O #a@E #f a a b b #E",
      "#O #f a a a b b #E",
      "#W a a a b b #E",
      "#B a b a b a b b #E"};
  CHECK(derivation_words(out, d) == expect);
  CHECK(d.steps.size() == 28);
}

TEST_CASE("simulation rejects invalid steps") {
  Srs R = srs_of({"aa->aba"});
  auto out = transform(TransformKind::Split, R);
  CHECK_THROWS(simulate_step(out, R, word_of(R.alphabet(), "aba"), 0, 0));
  CHECK_THROWS(simulate_step(out, R, word_of(R.alphabet(), "a"), 0, 0));
  CHECK_THROWS(simulate_step(out, R, word_of(R.alphabet(), "aa"), 1, 0));
}

TEST_CASE("shapes and back-maps") {
  Srs R = srs_of({"aa->aba"});
  auto sp = transform(TransformKind::Split, R);
  const auto& SA = sp.srs.alphabet();
  CHECK(shape_classify(sp, SA.parse_word("#B a #E")) == 1);
  CHECK(backmap(sp, SA.parse_word("#B a b #E")) == std::vector<Word>{word_of(R.alphabet(), "ab")});
  CHECK(backmap(sp, SA.parse_word("#W #L #E")) == std::vector<Word>{Word{}});
  CHECK(shape_classify(sp, SA.parse_word("#W #b~bar #R_1_1 a #E")) == 3);
  CHECK(backmap(sp, SA.parse_word("#W #b~bar #R_1_1 a #E")) ==
        std::vector<Word>{word_of(R.alphabet(), "aba")});
  CHECK_THROWS(shape_classify(sp, SA.parse_word("#B #L #E")));

  auto sh = transform(TransformKind::Shift, R);
  const auto& HA = sh.srs.alphabet();
  CHECK(shape_classify(sh, HA.parse_word("#R #a@C #D a #E")) == 4);
  CHECK(backmap(sh, HA.parse_word("#W #V #b@B a #a@B #E")) ==
        std::vector<Word>{word_of(R.alphabet(), "aab")});

  auto ro = transform(TransformKind::Rotate, R);
  const auto& RA = ro.srs.alphabet();
  CHECK(shape_classify(ro, RA.parse_word("#W a #E")) == 7);
  CHECK(shape_classify(ro, RA.parse_word("#O #a@E #C #a@D #G b #E")) == 4);
  CHECK(backmap(ro, RA.parse_word("#O #a@E #C #a@D #G b #E")) ==
        std::vector<Word>{word_of(R.alphabet(), "aab"), word_of(R.alphabet(), "aba")});
}

TEST_CASE("fresh symbol counts") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    std::uint32_t k = 1 + rng() % 3;
    Srs R = random_srs(rng, k, 1 + rng() % 3, 3);
    std::size_t splits = 0;
    for (const auto& r : R.rules()) splits += r.lhs.size() - 1;
    CHECK(transform(TransformKind::Split, R).srs.alphabet().size() == 2 * k + 4 + splits);
    CHECK(transform(TransformKind::Shift, R).srs.alphabet().size() == 3 * k + 8);
    CHECK(transform(TransformKind::Rotate, R).srs.alphabet().size() == 5 * k + 11);
  }
  Alphabet clash;
  Symbol x = clash.intern("#B");
  CHECK_THROWS(transform(TransformKind::Split, Srs(clash, {Rule{{x}, {}, true}})));
  auto empty = transform(TransformKind::Shift, Srs(ab_alphabet(), {}));
  CHECK(empty.srs.rule(0).rhs.size() == 2);  // W V with N = 0
}

TEST_CASE("simulation is sound on all small two-letter systems") {
  auto rules = small_rules();
  std::size_t systems = 0;
  for (std::size_t i = 0; i < rules.size(); ++i)
    for (std::size_t j = i; j <= rules.size(); ++j) {
      std::vector<Rule> rs{rules[i]};
      if (j < rules.size()) rs.push_back(rules[j]);
      Srs R(ab_alphabet(), rs);
      std::vector<TransformOutput> outs{transform(TransformKind::Split, R),
                                        transform(TransformKind::Shift, R),
                                        transform(TransformKind::Rotate, R)};
      check_simulations(R, outs, 5);
      ++systems;
    }
  CHECK(systems > 500);
}

TEST_CASE("simulation is sound on random three-letter systems") {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 10000; ++iter) {
    Srs R = random_srs(rng, 3, 1 + rng() % 2, 3);
    Word u = random_word(rng, 3, 1, 5);
    std::vector<std::pair<std::size_t, std::size_t>> steps;
    for (std::size_t i = 0; i < R.size(); ++i)
      for (std::size_t k = 0; k < u.size(); ++k)
        if (apply_at_rotation(R.rule(i), u, k)) steps.emplace_back(i, k);
    if (steps.empty()) continue;
    auto [i, k] = steps[rng() % steps.size()];
    auto kind = static_cast<TransformKind>(rng() % 3);
    auto out = transform(kind, R);
    Derivation d = simulate_step(out, R, u, i, k);
    REQUIRE(derivation_valid(out, d));
    auto img = backmap(out, d.end());
    REQUIRE(img.size() == 1);
    REQUIRE(cycle_equal(img[0], *apply_at_rotation(R.rule(i), u, k)));
  }
}

TEST_CASE("back-maps along random transformed derivations") {
  std::mt19937_64 rng(23);
  int steps_checked = 0;
  for (int iter = 0; iter < 3000; ++iter) {
    Srs R = random_srs(rng, 2, 1 + rng() % 2, 3);
    auto kind = static_cast<TransformKind>(rng() % 3);
    auto out = transform(kind, R);
    Word w = embed(out, random_word(rng, 2, 0, 4));
    for (int s = 0; s < 40 && w.size() < 40; ++s) {
      auto succ = string_successors(out.srs, w);
      if (succ.empty()) break;
      const Redex& st = succ[rng() % succ.size()];
      const Word& w2 = st.result;
      REQUIRE(word_type(out.typing, w2) == WordType{out.K, out.T});
      auto before = backmap(out, w);
      auto after = backmap(out, w2);
      const std::string& fam = out.family[st.rule];
      bool rewrite = fam == "splitA" || fam == "splitF" || fam == "shiftH" || fam == "rotO";
      if (kind == TransformKind::Rotate) {
        for (const auto& u2 : after) {
          bool found = false;
          for (const auto& u1 : before) {
            if (rewrite) {
              for (const auto& cs : cycle_successors(R, u1))
                found = found || cs.target == CycleWord(u2);
            } else {
              found = found || cycle_equal(u1, u2);
            }
          }
          REQUIRE(found);
        }
      } else {
        REQUIRE(before.size() == 1);
        REQUIRE(after.size() == 1);
        if (rewrite) {
          auto succs = cycle_successors(R, before[0]);
          bool found = std::any_of(succs.begin(), succs.end(), [&](const CycleStep& c) {
            return c.rule == *out.origin[st.rule] && c.target == CycleWord(after[0]);
          });
          REQUIRE(found);
        } else if (kind == TransformKind::Split) {
          REQUIRE(before[0] == after[0]);
        } else {
          REQUIRE(cycle_equal(before[0], after[0]));
        }
      }
      ++steps_checked;
      w = w2;
    }
  }
  CHECK(steps_checked > 10000);
}
