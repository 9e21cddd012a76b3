#include "cyclerw/typing.hpp"

#include <stdexcept>

namespace cyclerw {

TypeId TypedSignature::add_type(std::string_view name) {
  if (auto t = type(name)) return *t;
  type_names_.emplace_back(name);
  return TypeId{static_cast<std::uint32_t>(type_names_.size() - 1)};
}

std::optional<TypeId> TypedSignature::type(std::string_view name) const {
  for (std::uint32_t i = 0; i < type_names_.size(); ++i)
    if (type_names_[i] == name) return TypeId{i};
  return std::nullopt;
}

void TypedSignature::assign(Symbol s, TypeId source, TypeId target) {
  if (source.id >= type_names_.size() || target.id >= type_names_.size())
    throw std::invalid_argument("unknown type id");
  if (sig_.size() <= s.id) sig_.resize(s.id + 1);
  sig_[s.id] = WordType{source, target};
}

TypeId TypedSignature::source(Symbol s) const {
  if (!has(s)) throw std::out_of_range("symbol has no type");
  return sig_[s.id]->source;
}

TypeId TypedSignature::target(Symbol s) const {
  if (!has(s)) throw std::out_of_range("symbol has no type");
  return sig_[s.id]->target;
}

bool TypedSignature::total_over(const Alphabet& a) const {
  for (Symbol s : a.symbols())
    if (!has(s)) return false;
  return true;
}

std::optional<WordType> word_type(const TypedSignature& sig, std::span<const Symbol> w) {
  if (w.empty()) throw std::invalid_argument("word_type of the empty word");
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (sig.source(w[i]) != sig.target(w[i + 1])) return std::nullopt;
  return WordType{sig.source(w.back()), sig.target(w.front())};
}

bool well_typed_rule(const TypedSignature& sig, const Rule& r) {
  auto lt = word_type(sig, r.lhs);
  if (!lt) return false;
  if (r.rhs.empty()) return lt->source == lt->target;
  auto rt = word_type(sig, r.rhs);
  return rt && *rt == *lt;
}

bool well_typed_srs(const TypedSignature& sig, const Srs& srs) {
  for (const auto& r : srs.rules())
    if (!well_typed_rule(sig, r)) return false;
  return true;
}

std::vector<Word> decompose(const TypedSignature& sig, std::span<const Symbol> w) {
  std::vector<Word> parts;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i == 0 || sig.source(w[i - 1]) != sig.target(w[i]))
      parts.emplace_back();
    parts.back().push_back(w[i]);
  }
  return parts;
}

}  // namespace cyclerw
