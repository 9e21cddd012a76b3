#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cyclerw {

struct Symbol {
  std::uint32_t id = 0;
  friend auto operator<=>(Symbol, Symbol) = default;
};

using Word = std::vector<Symbol>;

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

// Symbol table. Ids are dense and assigned in order of first interning.
class Alphabet {
 public:
  Symbol intern(std::string_view name);
  std::optional<Symbol> find(std::string_view name) const;
  const std::string& name(Symbol s) const;
  std::size_t size() const { return names_.size(); }
  bool contains(Symbol s) const { return s.id < names_.size(); }
  std::vector<Symbol> symbols() const;

  std::string render(std::span<const Symbol> w) const;
  // Whitespace separated names; every name must already be interned.
  Word parse_word(std::string_view text) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

struct Rule {
  Word lhs;
  Word rhs;
  bool strict = true;

  friend bool operator==(const Rule&, const Rule&) = default;
};

// A relative system: strict rules form S, all rules form R.
class Srs {
 public:
  Srs() = default;
  Srs(Alphabet alphabet, std::vector<Rule> rules);

  const Alphabet& alphabet() const { return alphabet_; }
  Alphabet& alphabet() { return alphabet_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const Rule& rule(std::size_t i) const { return rules_.at(i); }
  std::size_t size() const { return rules_.size(); }

  void add_rule(Rule r);
  bool is_relative() const;
  std::size_t strict_count() const;
  std::size_t max_lhs_length() const;
  // Same alphabet, different rules.
  Srs with_rules(std::vector<Rule> rules) const;
  std::vector<Symbol> used_symbols() const;

  std::string render_rule(const Rule& r) const;
  std::string render_rule(std::size_t i) const { return render_rule(rules_.at(i)); }

 private:
  void validate(const Rule& r) const;

  Alphabet alphabet_;
  std::vector<Rule> rules_;
};

Word concat(std::span<const Symbol> a, std::span<const Symbol> b);
Word rotate(std::span<const Symbol> w, std::size_t k);
bool is_factor(std::span<const Symbol> needle, std::span<const Symbol> hay,
               std::size_t* where = nullptr);

// Least rotation (by symbol id), computed in linear time.
Word canonical_rotation(std::span<const Symbol> w);
bool cycle_equal(std::span<const Symbol> u, std::span<const Symbol> v);

// Representative of a conjugacy class; always stored in canonical form.
class CycleWord {
 public:
  CycleWord() = default;
  explicit CycleWord(std::span<const Symbol> w) : repr_(canonical_rotation(w)) {}

  const Word& repr() const { return repr_; }
  std::size_t size() const { return repr_.size(); }
  bool empty() const { return repr_.empty(); }

  friend auto operator<=>(const CycleWord&, const CycleWord&) = default;

 private:
  Word repr_;
};

struct CycleWordHash {
  std::size_t operator()(const CycleWord& c) const noexcept { return WordHash{}(c.repr()); }
};

struct Redex {
  std::size_t rule = 0;
  std::size_t position = 0;
  Word result;
  friend bool operator==(const Redex&, const Redex&) = default;
};

// One-step string rewrites, ordered by rule index then position.
std::vector<Redex> string_successors(const Srs& srs, std::span<const Symbol> w);
// Rewrites at position 0 only.
std::vector<Redex> prefix_successors(const Srs& srs, std::span<const Symbol> w);
// Rewrites whose redex ends at the last symbol.
std::vector<Redex> suffix_successors(const Srs& srs, std::span<const Symbol> w);

struct CycleStep {
  std::size_t rule = 0;
  // rotate(source, offset) has the lhs as a prefix.
  std::size_t offset = 0;
  CycleWord target;
};

// Successors of [w], deduplicated on (rule, target class); the least offset is kept.
std::vector<CycleStep> cycle_successors(const Srs& srs, std::span<const Symbol> w);

// Applies rule at the given rotation. Returns r·w' where rotate(u, offset) = l·w',
// or nothing when the lhs does not occur there.
std::optional<Word> apply_at_rotation(const Rule& rule, std::span<const Symbol> u,
                                      std::size_t offset);

enum class TraceMode { String, Cycle };

struct TraceStep {
  std::size_t rule = 0;
  bool strict = true;  // label claimed for this step
  Word result;
};

struct TraceCheck {
  bool ok = true;
  std::optional<std::size_t> first_bad;
  std::string reason;
};

// Every step must be a valid rewrite labelled with the kind of its rule, and a
// non-empty trace must contain a strict step.
TraceCheck check_relative_trace(const Srs& srs, std::span<const Symbol> start,
                                std::span<const TraceStep> steps, TraceMode mode);

}  // namespace cyclerw
