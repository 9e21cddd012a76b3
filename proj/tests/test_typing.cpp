#include <doctest.h>

#include "oracles.hpp"

using namespace cyclerw;
using namespace testsupport;

namespace {

struct TwoTypes {
  Srs R = srs_of({"a->b"});
  TypedSignature sig;
  TypeId t1, t2;
  TwoTypes() {
    t1 = sig.add_type("t1");
    t2 = sig.add_type("t2");
    sig.assign(*R.alphabet().find("a"), t1, t1);
    sig.assign(*R.alphabet().find("b"), t2, t2);
  }
  std::vector<std::string> dec(const std::string& s) {
    std::vector<std::string> out;
    for (const auto& p : decompose(sig, word_of(R.alphabet(), s))) out.push_back(str_of(R.alphabet(), p));
    return out;
  }
};

}  // namespace

TEST_CASE("word types") {
  TwoTypes f;
  auto a = *f.R.alphabet().find("a");
  auto b = *f.R.alphabet().find("b");
  CHECK(word_type(f.sig, Word{a}) == WordType{f.t1, f.t1});
  CHECK_FALSE(word_type(f.sig, Word{a, b}));
  CHECK_THROWS(word_type(f.sig, Word{}));
  CHECK_FALSE(well_typed_srs(f.sig, f.R));

  TypedSignature s2;
  TypeId x = s2.add_type("x"), y = s2.add_type("y");
  s2.assign(a, x, y);
  CHECK(word_type(s2, Word{a}) == WordType{x, y});
}

TEST_CASE("decomposition examples") {
  TwoTypes f;
  CHECK(f.dec("baabab") == std::vector<std::string>{"b", "aa", "b", "a", "b"});
  CHECK(f.dec("baaab") == std::vector<std::string>{"b", "aaa", "b"});
  CHECK(f.dec("a") == std::vector<std::string>{"a"});
}

TEST_CASE("rewriting preserves well-typedness; decomposition properties") {
  std::mt19937_64 rng(3);
  int checked = 0;
  while (checked < 10000) {
    auto t = random_typed(rng);
    if (!t) continue;
    Word u = random_word(rng, 3, 1, 8);
    auto parts = decompose(t->sig, u);
    Word joined;
    for (const auto& p : parts) {
      REQUIRE(word_type(t->sig, p));
      joined.insert(joined.end(), p.begin(), p.end());
    }
    REQUIRE(joined == u);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i)
      REQUIRE(t->sig.source(parts[i].back()) != t->sig.target(parts[i + 1].front()));

    for (const auto& rd : string_successors(t->R, u)) {
      ++checked;
      if (word_type(t->sig, u) && !rd.result.empty()) REQUIRE(word_type(t->sig, rd.result));
      auto after = decompose(t->sig, rd.result);
      REQUIRE(parts.size() >= after.size());
      if (parts.size() == after.size() && rd.result != u) {
        std::size_t differing = 0;
        for (std::size_t i = 0; i < parts.size(); ++i) differing += parts[i] != after[i];
        REQUIRE(differing == 1);
      }
    }
  }
}
