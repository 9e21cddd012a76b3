#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cyclerw/rewriting.hpp"
#include "cyclerw/typing.hpp"

namespace cyclerw {

enum class TransformKind { Split, Shift, Rotate };

std::string_view to_string(TransformKind k);
std::optional<TransformKind> parse_transform_kind(std::string_view s);

// What a symbol of a transformed alphabet stands for.
struct SymbolRole {
  enum class Kind { Source, Copy, Marker, SplitMarker };
  Kind kind = Kind::Source;
  Symbol base{};       // Source and Copy
  char copy = 0;       // Copy: 'b' for the split bar copy, 'A'..'E' otherwise
  std::string marker;  // Marker: "B", "E", ...
  std::size_t rule = 0;   // SplitMarker R_{rule,split}, both 1-based
  std::size_t split = 0;
};

struct TransformOutput {
  TransformKind kind = TransformKind::Split;
  bool relative = false;
  Srs source;
  Srs srs;
  TypedSignature typing;
  TypeId K{}, T{};
  // Source symbols keep their ids; fresh symbols follow.
  std::size_t source_size = 0;
  std::vector<SymbolRole> roles;
  std::vector<std::string> family;                // per rule, e.g. "splitA"
  std::vector<std::optional<std::size_t>> origin;  // source rule for rule-indexed families

  Symbol marker(std::string_view name) const;
  // tag 'A' returns the source symbol itself.
  Symbol copy(char tag, Symbol base) const;
  Symbol split_marker(std::size_t i, std::size_t j) const;
  const SymbolRole& role(Symbol s) const { return roles.at(s.id); }
  std::optional<std::size_t> find_rule(const Word& lhs, const Word& rhs) const;

  std::map<std::string, Symbol, std::less<>> markers;
  std::map<std::pair<char, std::uint32_t>, Symbol> copies;
  std::map<std::pair<std::size_t, std::size_t>, Symbol> split_markers;
};

// All rules strict; strictness of the input is ignored.
TransformOutput transform(TransformKind kind, const Srs& R);
// Strict rules as defined by the relative variant of each transformation.
TransformOutput transform_rel(TransformKind kind, const Srs& problem);

struct Derivation {
  Word start;
  std::vector<Redex> steps;  // rule indices refer to the transformed system
  const Word& end() const { return steps.empty() ? start : steps.back().result; }
};

// String derivation in the transformed system simulating the cycle step that
// applies source rule `rule` to u at rotation `offset`.
Derivation simulate_step(const TransformOutput& out, const Srs& R, const Word& u,
                         std::size_t rule, std::size_t offset);
Derivation simulate_step(TransformKind kind, const Srs& R, const Word& u, std::size_t rule,
                         std::size_t offset);

// Wraps u as B u E over the transformed alphabet.
Word embed(const TransformOutput& out, const Word& u);

// 1-based index into the list of normal forms for strings of type K -> T.
int shape_classify(const TransformOutput& out, const Word& w);
std::vector<Word> backmap(const TransformOutput& out, const Word& w);

}  // namespace cyclerw
