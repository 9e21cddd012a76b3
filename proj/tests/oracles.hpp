#pragma once

// Brute-force reference implementations and random generators shared by the
// unit tests and the acceptance binary.

#include <algorithm>
#include <functional>
#include <set>

#include "cyclerw/matrix.hpp"
#include "cyclerw/search.hpp"
#include "cyclerw/transform.hpp"
#include "cyclerw/typing.hpp"
#include "support.hpp"

namespace testsupport {

inline Word least_rotation_oracle(const Word& w) {
  Word best = w;
  for (std::size_t k = 1; k < w.size(); ++k) best = std::min(best, rotate(w, k));
  return best;
}

// Rotate, prefix-rewrite, canonicalize.
inline std::set<std::pair<std::size_t, Word>> cycle_oracle(const Srs& R, const Word& u) {
  std::set<std::pair<std::size_t, Word>> out;
  for (std::size_t k = 0; k < u.size(); ++k) {
    Word v = rotate(u, k);
    for (std::size_t i = 0; i < R.size(); ++i) {
      const Rule& r = R.rule(i);
      if (r.lhs.size() <= v.size() && std::equal(r.lhs.begin(), r.lhs.end(), v.begin())) {
        Word res = r.rhs;
        res.insert(res.end(), v.begin() + static_cast<std::ptrdiff_t>(r.lhs.size()), v.end());
        out.emplace(i, least_rotation_oracle(res));
      }
    }
  }
  return out;
}

inline std::set<std::pair<std::size_t, Word>> as_set(const std::vector<CycleStep>& steps) {
  std::set<std::pair<std::size_t, Word>> out;
  for (const auto& s : steps) out.emplace(s.rule, s.target.repr());
  return out;
}

inline Srs counter_system() {
  Alphabet a;
  for (auto n : {"0", "P", "1", "c"}) a.intern(n);
  auto w = [&](std::string s) { return a.parse_word(s); };
  return Srs(a, {Rule{w("0 P"), w("1 P")}, Rule{w("1 P"), w("c P")}, Rule{w("0 c"), w("1 0")},
                 Rule{w("1 c"), w("c 0")}, Rule{w("P 0"), w("P 1 0 0")}});
}

// Every strict rule over {a,b} with |lhs|+|rhs| <= 3.
inline std::vector<Rule> small_rules() {
  std::vector<Rule> out;
  for (std::size_t ll = 1; ll <= 3; ++ll)
    for (const auto& l : all_words(2, ll))
      for (std::size_t rl = 0; ll + rl <= 3; ++rl)
        for (const auto& r : all_words(2, rl)) out.push_back(Rule{l, r, true});
  return out;
}

inline Alphabet ab_alphabet() {
  Alphabet a;
  a.intern("a");
  a.intern("b");
  return a;
}

// Problems of one rule or two distinct rules from small_rules().
inline void for_small_problems(const std::function<void(const Srs&)>& f) {
  const auto rules = small_rules();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    f(Srs(ab_alphabet(), {rules[i]}));
    for (std::size_t j = i + 1; j < rules.size(); ++j) f(Srs(ab_alphabet(), {rules[i], rules[j]}));
  }
}

// Each step must be one of the string successors of its predecessor.
inline bool derivation_valid(const TransformOutput& out, const Derivation& d) {
  Word cur = d.start;
  for (const auto& st : d.steps) {
    auto succ = string_successors(out.srs, cur);
    if (std::find(succ.begin(), succ.end(), st) == succ.end()) return false;
    cur = st.result;
  }
  return true;
}

inline const SemiringKind kAllKinds[] = {SemiringKind::Natural, SemiringKind::Tropical, SemiringKind::Arctic};

inline Value random_value(std::mt19937_64& rng, SemiringKind k) {
  if (k != SemiringKind::Natural && rng() % 5 == 0) return zero(k);
  return Value(static_cast<long long>(rng() % 6));
}

inline Matrix random_member(std::mt19937_64& rng, SemiringKind k, std::size_t d) {
  Matrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m.at(i, j) = random_value(rng, k);
  if (!in_domain(k, m)) m.at(0, 0) = Value(static_cast<long long>(1 + rng() % 5));
  return m;
}

// A matrix above B in the strict (or weak) matrix order.
inline Matrix random_above(std::mt19937_64& rng, SemiringKind k, const Matrix& B, bool strict) {
  Matrix A = B;
  const long long lo = strict ? 1 : 0;
  for (std::size_t i = 0; i < B.dim(); ++i)
    for (std::size_t j = 0; j < B.dim(); ++j) {
      const Value& b = B.at(i, j);
      long long delta = lo + static_cast<long long>(rng() % 3);
      bool must = strict && (k != SemiringKind::Natural || (i == 0 && j == 0));
      long long dd = must ? std::max(delta, 1LL) : static_cast<long long>(rng() % 3);
      switch (k) {
        case SemiringKind::Natural: A.at(i, j) = Value(b.number() + dd); break;
        case SemiringKind::Tropical:
          if (b.finite()) A.at(i, j) = (i + j > 0 && rng() % 6 == 0) ? Value::pos_inf() : Value(b.number() + dd);
          break;
        case SemiringKind::Arctic:
          if (b.finite()) A.at(i, j) = Value(b.number() + dd);
          else if (rng() % 2) A.at(i, j) = Value(static_cast<long long>(rng() % 4));
          break;
      }
    }
  return A;
}

// Tries every interpretation of dimension 1 with entries up to `bound` and
// reports whether one is a valid removal.
inline bool brute_force_d1(const Srs& P, SemiringKind k, long long bound) {
  const auto syms = P.used_symbols();
  std::vector<long long> vals(syms.size(), k == SemiringKind::Natural ? 1 : 0);
  const long long lo = vals.empty() ? 0 : vals[0];
  for (;;) {
    Interpretation I(k, 1);
    for (std::size_t i = 0; i < syms.size(); ++i) I.set(syms[i], Matrix(1, {Value(vals[i])}));
    if (check_removal(I, P).valid_removal(P)) return true;
    std::size_t i = 0;
    while (i < vals.size() && ++vals[i] > bound) vals[i++] = lo;
    if (i == vals.size()) return false;
  }
}

// Random typed SRS: symbols get one of two random types, rules are
// sampled until well typed.
struct RandomTyped {
  Srs R;
  TypedSignature sig;
};

inline std::optional<RandomTyped> random_typed(std::mt19937_64& rng) {
  const std::uint32_t k = 3;
  RandomTyped t;
  std::vector<TypeId> types{t.sig.add_type("x"), t.sig.add_type("y")};
  Alphabet a;
  for (std::uint32_t i = 0; i < k; ++i) {
    Symbol s = a.intern(std::string(1, static_cast<char>('a' + i)));
    t.sig.assign(s, types[rng() % 2], types[rng() % 2]);
  }
  std::vector<Rule> rules;
  for (int tries = 0; tries < 400 && rules.size() < 3; ++tries) {
    Rule r{random_word(rng, k, 1, 3), random_word(rng, k, 0, 3), true};
    if (well_typed_rule(t.sig, r)) rules.push_back(r);
  }
  if (rules.empty()) return std::nullopt;
  t.R = Srs(a, rules);
  return t;
}

}  // namespace testsupport
