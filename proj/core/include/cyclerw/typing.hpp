#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cyclerw/rewriting.hpp"

namespace cyclerw {

struct TypeId {
  std::uint32_t id = 0;
  friend auto operator<=>(TypeId, TypeId) = default;
};

struct WordType {
  TypeId source;
  TypeId target;
  friend bool operator==(WordType, WordType) = default;
};

class TypedSignature {
 public:
  TypeId add_type(std::string_view name);
  std::optional<TypeId> type(std::string_view name) const;
  const std::string& type_name(TypeId t) const { return type_names_.at(t.id); }
  std::size_t type_count() const { return type_names_.size(); }

  void assign(Symbol s, TypeId source, TypeId target);
  bool has(Symbol s) const { return s.id < sig_.size() && sig_[s.id].has_value(); }
  TypeId source(Symbol s) const;
  TypeId target(Symbol s) const;
  bool total_over(const Alphabet& a) const;

 private:
  std::vector<std::string> type_names_;
  std::vector<std::optional<WordType>> sig_;
};

// (source of last symbol, target of first symbol) when adjacent symbols chain.
// Throws std::invalid_argument on the empty word.
std::optional<WordType> word_type(const TypedSignature& sig, std::span<const Symbol> w);

bool well_typed_rule(const TypedSignature& sig, const Rule& r);
bool well_typed_srs(const TypedSignature& sig, const Srs& srs);

// Maximal well-typed factors of w, left to right.
std::vector<Word> decompose(const TypedSignature& sig, std::span<const Symbol> w);

}  // namespace cyclerw
