#include "cyclerw/rewriting.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace cyclerw {

std::size_t WordHash::operator()(const Word& w) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (Symbol s : w) {
    h ^= s.id + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

Symbol Alphabet::intern(std::string_view name) {
  if (name.empty()) throw std::invalid_argument("empty symbol name");
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return Symbol{it->second};
  auto id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(std::string(name), id);
  return Symbol{id};
}

std::optional<Symbol> Alphabet::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return Symbol{it->second};
}

const std::string& Alphabet::name(Symbol s) const {
  if (!contains(s)) throw std::out_of_range("symbol id out of range");
  return names_[s.id];
}

std::vector<Symbol> Alphabet::symbols() const {
  std::vector<Symbol> out;
  out.reserve(names_.size());
  for (std::uint32_t i = 0; i < names_.size(); ++i) out.push_back(Symbol{i});
  return out;
}

std::string Alphabet::render(std::span<const Symbol> w) const {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += name(w[i]);
  }
  return out;
}

Word Alphabet::parse_word(std::string_view text) const {
  Word w;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      auto s = find(text.substr(i, j - i));
      if (!s) throw std::invalid_argument("unknown symbol '" + std::string(text.substr(i, j - i)) + "'");
      w.push_back(*s);
    }
    i = j;
  }
  return w;
}

Srs::Srs(Alphabet alphabet, std::vector<Rule> rules) : alphabet_(std::move(alphabet)) {
  for (auto& r : rules) add_rule(std::move(r));
}

void Srs::validate(const Rule& r) const {
  if (r.lhs.empty()) throw std::invalid_argument("rule with empty left-hand side");
  for (Symbol s : r.lhs)
    if (!alphabet_.contains(s)) throw std::invalid_argument("rule uses unknown symbol");
  for (Symbol s : r.rhs)
    if (!alphabet_.contains(s)) throw std::invalid_argument("rule uses unknown symbol");
}

void Srs::add_rule(Rule r) {
  validate(r);
  rules_.push_back(std::move(r));
}

bool Srs::is_relative() const {
  return std::any_of(rules_.begin(), rules_.end(), [](const Rule& r) { return !r.strict; });
}

std::size_t Srs::strict_count() const {
  return static_cast<std::size_t>(
      std::count_if(rules_.begin(), rules_.end(), [](const Rule& r) { return r.strict; }));
}

std::size_t Srs::max_lhs_length() const {
  std::size_t m = 0;
  for (const auto& r : rules_) m = std::max(m, r.lhs.size());
  return m;
}

Srs Srs::with_rules(std::vector<Rule> rules) const { return Srs(alphabet_, std::move(rules)); }

std::vector<Symbol> Srs::used_symbols() const {
  std::set<Symbol> seen;
  for (const auto& r : rules_) {
    seen.insert(r.lhs.begin(), r.lhs.end());
    seen.insert(r.rhs.begin(), r.rhs.end());
  }
  return {seen.begin(), seen.end()};
}

std::string Srs::render_rule(const Rule& r) const {
  std::string out = alphabet_.render(r.lhs);
  out += r.strict ? " ->" : " ->=";
  if (!r.rhs.empty()) {
    out += ' ';
    out += alphabet_.render(r.rhs);
  }
  return out;
}

Word concat(std::span<const Symbol> a, std::span<const Symbol> b) {
  Word w(a.begin(), a.end());
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

Word rotate(std::span<const Symbol> w, std::size_t k) {
  if (w.empty()) return {};
  k %= w.size();
  Word out(w.begin() + static_cast<std::ptrdiff_t>(k), w.end());
  out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

bool is_factor(std::span<const Symbol> needle, std::span<const Symbol> hay, std::size_t* where) {
  if (needle.size() > hay.size()) return false;
  auto it = std::search(hay.begin(), hay.end(), needle.begin(), needle.end());
  if (it == hay.end() && !needle.empty()) return false;
  if (where) *where = static_cast<std::size_t>(it - hay.begin());
  return true;
}

Word canonical_rotation(std::span<const Symbol> w) {
  // Booth's least-rotation algorithm.
  const std::size_t n = w.size();
  if (n < 2) return Word(w.begin(), w.end());
  auto at = [&](std::size_t i) { return w[i % n]; };
  std::vector<std::ptrdiff_t> fail(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    Symbol sj = at(j);
    std::ptrdiff_t i = fail[j - k - 1];
    while (i != -1 && sj != at(k + static_cast<std::size_t>(i) + 1)) {
      if (sj < at(k + static_cast<std::size_t>(i) + 1)) k = j - static_cast<std::size_t>(i) - 1;
      i = fail[static_cast<std::size_t>(i)];
    }
    if (sj != at(k + static_cast<std::size_t>(i) + 1)) {
      if (sj < at(k)) k = j;
      fail[j - k] = -1;
    } else {
      fail[j - k] = i + 1;
    }
  }
  return rotate(w, k);
}

bool cycle_equal(std::span<const Symbol> u, std::span<const Symbol> v) {
  if (u.size() != v.size()) return false;
  return canonical_rotation(u) == canonical_rotation(v);
}

namespace {

bool matches_at(std::span<const Symbol> pat, std::span<const Symbol> w, std::size_t pos) {
  if (pos + pat.size() > w.size()) return false;
  return std::equal(pat.begin(), pat.end(), w.begin() + static_cast<std::ptrdiff_t>(pos));
}

Word replace_at(std::span<const Symbol> w, std::size_t pos, const Rule& r) {
  Word out(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(pos));
  out.insert(out.end(), r.rhs.begin(), r.rhs.end());
  out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(pos + r.lhs.size()), w.end());
  return out;
}

}  // namespace

std::vector<Redex> string_successors(const Srs& srs, std::span<const Symbol> w) {
  std::vector<Redex> out;
  for (std::size_t i = 0; i < srs.size(); ++i) {
    const Rule& r = srs.rule(i);
    if (r.lhs.size() > w.size()) continue;
    for (std::size_t p = 0; p + r.lhs.size() <= w.size(); ++p)
      if (matches_at(r.lhs, w, p)) out.push_back({i, p, replace_at(w, p, r)});
  }
  return out;
}

std::vector<Redex> prefix_successors(const Srs& srs, std::span<const Symbol> w) {
  std::vector<Redex> out;
  for (std::size_t i = 0; i < srs.size(); ++i)
    if (matches_at(srs.rule(i).lhs, w, 0)) out.push_back({i, 0, replace_at(w, 0, srs.rule(i))});
  return out;
}

std::vector<Redex> suffix_successors(const Srs& srs, std::span<const Symbol> w) {
  std::vector<Redex> out;
  for (std::size_t i = 0; i < srs.size(); ++i) {
    const Rule& r = srs.rule(i);
    if (r.lhs.size() > w.size()) continue;
    std::size_t p = w.size() - r.lhs.size();
    if (matches_at(r.lhs, w, p)) out.push_back({i, p, replace_at(w, p, r)});
  }
  return out;
}

std::optional<Word> apply_at_rotation(const Rule& rule, std::span<const Symbol> u,
                                      std::size_t offset) {
  const std::size_t n = u.size();
  const std::size_t m = rule.lhs.size();
  if (n == 0 || m > n || offset >= n) return std::nullopt;
  for (std::size_t t = 0; t < m; ++t)
    if (u[(offset + t) % n] != rule.lhs[t]) return std::nullopt;
  Word out(rule.rhs);
  out.reserve(rule.rhs.size() + n - m);
  for (std::size_t t = m; t < n; ++t) out.push_back(u[(offset + t) % n]);
  return out;
}

std::vector<CycleStep> cycle_successors(const Srs& srs, std::span<const Symbol> w) {
  std::vector<CycleStep> out;
  if (w.empty()) return out;
  Word u = canonical_rotation(w);
  std::set<std::pair<std::size_t, Word>> seen;
  for (std::size_t i = 0; i < srs.size(); ++i) {
    const Rule& r = srs.rule(i);
    for (std::size_t k = 0; k < u.size(); ++k) {
      auto res = apply_at_rotation(r, u, k);
      if (!res) continue;
      CycleWord target(*res);
      if (seen.emplace(i, target.repr()).second) out.push_back({i, k, std::move(target)});
    }
  }
  return out;
}

TraceCheck check_relative_trace(const Srs& srs, std::span<const Symbol> start,
                                std::span<const TraceStep> steps, TraceMode mode) {
  Word cur(start.begin(), start.end());
  bool any_strict = false;
  for (std::size_t s = 0; s < steps.size(); ++s) {
    const TraceStep& st = steps[s];
    auto fail = [&](std::string why) { return TraceCheck{false, s, std::move(why)}; };
    if (st.rule >= srs.size()) return fail("rule index out of range");
    const Rule& r = srs.rule(st.rule);
    if (r.strict != st.strict) return fail("step label does not match rule kind");
    bool valid = false;
    if (mode == TraceMode::String) {
      for (const auto& rd : string_successors(srs, cur))
        if (rd.rule == st.rule && rd.result == st.result) valid = true;
    } else {
      CycleWord target(st.result);
      for (const auto& cs : cycle_successors(srs, cur))
        if (cs.rule == st.rule && cs.target == target) valid = true;
    }
    if (!valid) return fail("not a rewrite step");
    any_strict = any_strict || st.strict;
    cur = st.result;
  }
  if (!steps.empty() && !any_strict)
    return TraceCheck{false, steps.size() - 1, "trace has no strict step"};
  return {};
}

}  // namespace cyclerw
