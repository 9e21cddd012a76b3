#pragma once

#include <random>
#include <string>
#include <vector>

#include "cyclerw/rewriting.hpp"

namespace testsupport {

using namespace cyclerw;

// Single-character symbols. "ab->ba" is strict, "c=>b" is weak.
// `letters` fixes id order up front.
inline Srs srs_of(std::vector<std::string> rules, std::string letters = "") {
  Alphabet a;
  for (char c : letters) a.intern(std::string(1, c));
  std::vector<Rule> rs;
  for (const auto& r : rules) {
    bool strict = r.find("->") != std::string::npos;
    auto cut = strict ? r.find("->") : r.find("=>");
    Rule rule;
    rule.strict = strict;
    for (char c : r.substr(0, cut)) rule.lhs.push_back(a.intern(std::string(1, c)));
    for (char c : r.substr(cut + 2)) rule.rhs.push_back(a.intern(std::string(1, c)));
    rs.push_back(rule);
  }
  return Srs(a, rs);
}

inline Word word_of(const Alphabet& a, const std::string& s) {
  Word w;
  for (char c : s) w.push_back(*a.find(std::string(1, c)));
  return w;
}

inline std::string str_of(const Alphabet& a, const Word& w) {
  std::string s;
  for (Symbol x : w) s += a.name(x);
  return s;
}

// All words over symbols 0..k-1 of length exactly n.
inline std::vector<Word> all_words(std::uint32_t k, std::size_t n) {
  std::vector<Word> out{Word{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Word> next;
    for (const auto& w : out)
      for (std::uint32_t s = 0; s < k; ++s) {
        Word v = w;
        v.push_back(Symbol{s});
        next.push_back(v);
      }
    out = std::move(next);
  }
  return out;
}

inline std::vector<Word> all_words_upto(std::uint32_t k, std::size_t n) {
  std::vector<Word> out;
  for (std::size_t i = 0; i <= n; ++i) {
    auto ws = all_words(k, i);
    out.insert(out.end(), ws.begin(), ws.end());
  }
  return out;
}

inline Word random_word(std::mt19937_64& rng, std::uint32_t k, std::size_t minlen, std::size_t maxlen) {
  std::uniform_int_distribution<std::size_t> len(minlen, maxlen);
  std::uniform_int_distribution<std::uint32_t> sym(0, k - 1);
  Word w(len(rng));
  for (auto& s : w) s = Symbol{sym(rng)};
  return w;
}

// Random SRS over letters a.. with k letters; every letter interned up front.
inline Srs random_srs(std::mt19937_64& rng, std::uint32_t k, std::size_t rules, std::size_t maxlen,
                      bool allow_empty_rhs = true, bool relative = false) {
  Alphabet a;
  for (std::uint32_t i = 0; i < k; ++i) a.intern(std::string(1, static_cast<char>('a' + i)));
  std::vector<Rule> rs;
  for (std::size_t i = 0; i < rules; ++i) {
    Rule r;
    r.lhs = random_word(rng, k, 1, maxlen);
    r.rhs = random_word(rng, k, allow_empty_rhs ? 0 : 1, maxlen);
    r.strict = !relative || i == 0 || (rng() & 1);
    rs.push_back(r);
  }
  return Srs(a, rs);
}

}  // namespace testsupport
