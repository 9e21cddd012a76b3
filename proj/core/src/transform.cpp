#include "cyclerw/transform.hpp"

#include <algorithm>
#include <stdexcept>

namespace cyclerw {

std::string_view to_string(TransformKind k) {
  switch (k) {
    case TransformKind::Split: return "split";
    case TransformKind::Shift: return "shift";
    case TransformKind::Rotate: return "rotate";
  }
  return "?";
}

std::optional<TransformKind> parse_transform_kind(std::string_view s) {
  if (s == "split") return TransformKind::Split;
  if (s == "shift") return TransformKind::Shift;
  if (s == "rotate") return TransformKind::Rotate;
  return std::nullopt;
}

Symbol TransformOutput::marker(std::string_view name) const {
  auto it = markers.find(name);
  if (it == markers.end()) throw std::out_of_range("no marker " + std::string(name));
  return it->second;
}

Symbol TransformOutput::copy(char tag, Symbol base) const {
  if (tag == 'A') return base;
  auto it = copies.find({tag, base.id});
  if (it == copies.end()) throw std::out_of_range("no alphabet copy");
  return it->second;
}

Symbol TransformOutput::split_marker(std::size_t i, std::size_t j) const {
  auto it = split_markers.find({i, j});
  if (it == split_markers.end()) throw std::out_of_range("no split marker");
  return it->second;
}

std::optional<std::size_t> TransformOutput::find_rule(const Word& lhs, const Word& rhs) const {
  for (std::size_t i = 0; i < srs.size(); ++i)
    if (srs.rule(i).lhs == lhs && srs.rule(i).rhs == rhs) return i;
  return std::nullopt;
}

Word embed(const TransformOutput& out, const Word& u) {
  Word w{out.marker("B")};
  w.insert(w.end(), u.begin(), u.end());
  w.push_back(out.marker("E"));
  return w;
}

namespace {

class Builder {
 public:
  Builder(TransformKind kind, const Srs& src, bool relative) : src_(src), alpha_(src.alphabet()) {
    out_.kind = kind;
    out_.relative = relative;
    out_.source = src;
    out_.source_size = alpha_.size();
    for (Symbol s : alpha_.symbols()) {
      SymbolRole r;
      r.kind = SymbolRole::Kind::Source;
      r.base = s;
      out_.roles.push_back(r);
    }
  }

  TypeId type(std::string_view name) { return out_.typing.add_type(name); }

  Symbol fresh(const std::string& name, SymbolRole role) {
    if (alpha_.find(name)) throw std::invalid_argument("fresh symbol clashes with input: " + name);
    Symbol s = alpha_.intern(name);
    out_.roles.push_back(std::move(role));
    return s;
  }

  Symbol marker(const std::string& m) {
    SymbolRole r;
    r.kind = SymbolRole::Kind::Marker;
    r.marker = m;
    Symbol s = fresh("#" + m, r);
    out_.markers.emplace(m, s);
    return s;
  }

  Symbol copy(char tag, Symbol base, const std::string& name) {
    SymbolRole r;
    r.kind = SymbolRole::Kind::Copy;
    r.base = base;
    r.copy = tag;
    Symbol s = fresh(name, r);
    out_.copies.emplace(std::make_pair(tag, base.id), s);
    return s;
  }

  Symbol split_marker(std::size_t i, std::size_t j) {
    SymbolRole r;
    r.kind = SymbolRole::Kind::SplitMarker;
    r.rule = i;
    r.split = j;
    Symbol s = fresh("#R_" + std::to_string(i) + "_" + std::to_string(j), r);
    out_.split_markers.emplace(std::make_pair(i, j), s);
    return s;
  }

  void assign(Symbol s, TypeId from, TypeId to) { out_.typing.assign(s, from, to); }

  void rule(Word l, Word r, bool strict, const char* fam,
            std::optional<std::size_t> origin = std::nullopt) {
    rules_.push_back(Rule{std::move(l), std::move(r), strict});
    out_.family.emplace_back(fam);
    out_.origin.push_back(origin);
  }

  // Strictness of a rule-indexed family instance.
  bool strict_of(std::size_t i) const { return !out_.relative || src_.rule(i).strict; }
  bool weak() const { return !out_.relative; }

  const std::vector<Symbol> sources() const {
    std::vector<Symbol> v;
    for (std::uint32_t i = 0; i < out_.source_size; ++i) v.push_back(Symbol{i});
    return v;
  }
  const std::string& name(Symbol s) const { return alpha_.name(s); }

  TransformOutput finish() {
    out_.srs = Srs(std::move(alpha_), std::move(rules_));
    if (!well_typed_srs(out_.typing, out_.srs)) throw std::logic_error("transformed system is not well typed");
    return std::move(out_);
  }

  TransformOutput& out() { return out_; }

 private:
  const Srs& src_;
  Alphabet alpha_;
  std::vector<Rule> rules_;
  TransformOutput out_;
};

Word cat(std::initializer_list<Word> parts) {
  Word w;
  for (const auto& p : parts) w.insert(w.end(), p.begin(), p.end());
  return w;
}

TransformOutput build_split(const Srs& R, bool relative) {
  Builder b(TransformKind::Split, R, relative);
  TypeId K = b.type("K"), T = b.type("T"), A = b.type("A"), Abar = b.type("Abar");
  b.out().K = K;
  b.out().T = T;
  auto src = b.sources();
  std::vector<Symbol> bar;
  for (Symbol a : src) {
    bar.push_back(b.copy('b', a, "#" + b.name(a) + "~bar"));
    b.assign(a, A, A);
    b.assign(bar.back(), Abar, Abar);
  }
  Symbol B = b.marker("B"), E = b.marker("E"), W = b.marker("W"), L = b.marker("L");
  b.assign(B, A, T);
  b.assign(E, K, A);
  b.assign(W, Abar, T);
  b.assign(L, A, Abar);
  std::map<std::pair<std::size_t, std::size_t>, Symbol> rm;
  for (std::size_t i = 0; i < R.size(); ++i)
    for (std::size_t j = 1; j < R.rule(i).lhs.size(); ++j) {
      Symbol s = b.split_marker(i + 1, j);
      b.assign(s, A, Abar);
      rm[{i, j}] = s;
    }

  for (std::size_t i = 0; i < R.size(); ++i)
    b.rule(R.rule(i).lhs, R.rule(i).rhs, b.strict_of(i), "splitA", i);
  for (std::size_t k = 0; k < src.size(); ++k) b.rule({bar[k], L}, {L, src[k]}, b.weak(), "splitB");
  b.rule({W, L}, {B}, b.weak(), "splitC");
  for (auto& [ij, s] : rm)
    for (std::size_t k = 0; k < src.size(); ++k)
      b.rule({s, src[k]}, {bar[k], s}, b.weak(), "splitD", ij.first);
  for (auto& [ij, s] : rm) {
    const Word& l = R.rule(ij.first).lhs;
    Word ls(l.begin() + static_cast<std::ptrdiff_t>(ij.second), l.end());
    b.rule(cat({{B}, ls}), {W, s}, b.weak(), "splitE", ij.first);
  }
  for (auto& [ij, s] : rm) {
    const Rule& r = R.rule(ij.first);
    Word lp(r.lhs.begin(), r.lhs.begin() + static_cast<std::ptrdiff_t>(ij.second));
    b.rule(cat({{s}, lp, {E}}), cat({{L}, r.rhs, {E}}), b.strict_of(ij.first), "splitF", ij.first);
  }
  return b.finish();
}

TransformOutput build_shift(const Srs& R, bool relative) {
  Builder b(TransformKind::Shift, R, relative);
  TypeId K = b.type("K"), T = b.type("T"), AB = b.type("AB"), M = b.type("M"), C = b.type("C");
  b.out().K = K;
  b.out().T = T;
  auto src = b.sources();
  std::vector<Symbol> cb, cc;
  for (Symbol a : src) {
    b.assign(a, AB, AB);
    cb.push_back(b.copy('B', a, "#" + b.name(a) + "@B"));
    b.assign(cb.back(), AB, AB);
    cc.push_back(b.copy('C', a, "#" + b.name(a) + "@C"));
    b.assign(cc.back(), C, C);
  }
  Symbol mB = b.marker("B"), mE = b.marker("E"), mW = b.marker("W"), mV = b.marker("V"),
         mM = b.marker("M"), mL = b.marker("L"), mR = b.marker("R"), mD = b.marker("D");
  b.assign(mE, K, AB);
  b.assign(mV, AB, M);
  b.assign(mM, M, M);
  b.assign(mW, M, T);
  b.assign(mB, AB, T);
  b.assign(mL, AB, C);
  b.assign(mD, AB, C);
  b.assign(mR, C, T);

  std::size_t len = R.max_lhs_length();
  std::size_t N = len > 0 ? len - 1 : 0;
  Word rhsA{mW};
  rhsA.insert(rhsA.end(), N, mM);
  rhsA.push_back(mV);
  b.rule({mB}, rhsA, b.weak(), "shiftA");
  b.rule({mM}, {}, b.weak(), "shiftB");
  for (std::size_t k = 0; k < src.size(); ++k) b.rule({mM, mV, src[k]}, {mV, cb[k]}, b.weak(), "shiftC");
  for (std::size_t x = 0; x < src.size(); ++x)
    for (std::size_t k = 0; k < src.size(); ++k)
      b.rule({cb[x], src[k]}, {src[k], cb[x]}, b.weak(), "shiftD");
  for (std::size_t x = 0; x < src.size(); ++x) b.rule({cb[x], mE}, {src[x], mE}, b.weak(), "shiftE");
  b.rule({mW, mV}, {mR, mL}, b.weak(), "shiftF");
  for (std::size_t k = 0; k < src.size(); ++k) b.rule({mL, src[k]}, {cc[k], mL}, b.weak(), "shiftG");
  for (std::size_t i = 0; i < R.size(); ++i)
    b.rule(cat({{mL}, R.rule(i).lhs}), cat({{mD}, R.rule(i).rhs}), b.strict_of(i), "shiftH", i);
  for (std::size_t k = 0; k < src.size(); ++k) b.rule({cc[k], mD}, {mD, src[k]}, b.weak(), "shiftI");
  b.rule({mR, mD}, {mB}, b.weak(), "shiftJ");
  return b.finish();
}

TransformOutput build_rotate(const Srs& R, bool relative) {
  Builder b(TransformKind::Rotate, R, relative);
  TypeId K = b.type("K"), T = b.type("T"), A = b.type("A"), Bt = b.type("B"), Ct = b.type("C"),
         Dt = b.type("D"), Et = b.type("E");
  b.out().K = K;
  b.out().T = T;
  auto src = b.sources();
  std::map<char, std::vector<Symbol>> cp;
  std::map<char, std::pair<TypeId, TypeId>> ty{
      {'B', {Bt, Bt}}, {'C', {Bt, Ct}}, {'D', {Dt, Dt}}, {'E', {Et, Et}}};
  for (Symbol a : src) b.assign(a, A, A);
  for (char tag : {'B', 'C', 'D', 'E'})
    for (Symbol a : src) {
      Symbol s = b.copy(tag, a, "#" + b.name(a) + "@" + tag);
      b.assign(s, ty[tag].first, ty[tag].second);
      cp[tag].push_back(s);
    }
  Symbol mB = b.marker("B"), mE = b.marker("E"), mW = b.marker("W"), mR = b.marker("R"),
         mG = b.marker("G"), mO = b.marker("O"), mC = b.marker("C"), mL = b.marker("L"),
         mS = b.marker("S"), mF = b.marker("F"), mf = b.marker("f");
  b.assign(mE, K, A);
  b.assign(mS, A, Bt);
  b.assign(mL, Ct, Dt);
  b.assign(mR, Bt, Dt);
  b.assign(mC, Dt, Et);
  b.assign(mG, A, Dt);
  b.assign(mF, A, Dt);
  b.assign(mB, A, T);
  b.assign(mW, A, T);
  b.assign(mO, Et, T);
  b.assign(mf, A, Et);

  const std::size_t n = src.size();
  b.rule({mB, mE}, {mW, mE}, b.weak(), "rotA");
  for (std::size_t k = 0; k < n; ++k) b.rule({mB, src[k]}, {mO, mC, cp['D'][k], mG}, b.weak(), "rotB");
  for (std::size_t k = 0; k < n; ++k) b.rule({mG, src[k]}, {cp['D'][k], mG}, b.weak(), "rotC");
  for (std::size_t k = 0; k < n; ++k) b.rule({mG, src[k]}, {mL, cp['C'][k], mS}, b.weak(), "rotD");
  b.rule({mG, mE}, {mF, mE}, b.weak(), "rotE");
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t d = 0; d < n; ++d)
      b.rule({cp['D'][d], mL, cp['C'][c]}, {mL, cp['C'][c], cp['B'][d]}, b.weak(), "rotF");
  for (std::size_t c = 0; c < n; ++c)
    b.rule({mC, mL, cp['C'][c]}, {cp['E'][c], mC, mR}, b.weak(), "rotG");
  for (std::size_t k = 0; k < n; ++k) b.rule({mR, cp['B'][k]}, {cp['D'][k], mR}, b.weak(), "rotH");
  for (std::size_t k = 0; k < n; ++k)
    b.rule({mR, mS, src[k]}, {mL, cp['C'][k], mS}, b.weak(), "rotI");
  b.rule({mR, mS, mE}, {mF, mE}, b.weak(), "rotJ");
  for (std::size_t k = 0; k < n; ++k) b.rule({cp['D'][k], mF}, {mF, src[k]}, b.weak(), "rotK");
  b.rule({mC, mF}, {mf}, b.weak(), "rotL");
  for (std::size_t k = 0; k < n; ++k) b.rule({cp['E'][k], mf}, {mf, src[k]}, b.weak(), "rotM");
  b.rule({mO, mf}, {mW}, b.weak(), "rotN");
  for (std::size_t i = 0; i < R.size(); ++i)
    b.rule(cat({{mW}, R.rule(i).lhs}), cat({{mB}, R.rule(i).rhs}), b.strict_of(i), "rotO", i);
  return b.finish();
}

TransformOutput build(TransformKind kind, const Srs& R, bool relative) {
  switch (kind) {
    case TransformKind::Split: return build_split(R, relative);
    case TransformKind::Shift: return build_shift(R, relative);
    case TransformKind::Rotate: return build_rotate(R, relative);
  }
  throw std::invalid_argument("unknown transformation");
}

// Replays rewrite steps, checking each against the transformed rules.
class Sim {
 public:
  Sim(const TransformOutput& out, Word start) : out_(out) {
    d_.start = start;
    cur_ = std::move(start);
  }

  void step(const Word& lhs, const Word& rhs, std::size_t pos) {
    if (pos + lhs.size() > cur_.size() ||
        !std::equal(lhs.begin(), lhs.end(), cur_.begin() + static_cast<std::ptrdiff_t>(pos)))
      throw std::logic_error("simulation: redex mismatch");
    auto idx = out_.find_rule(lhs, rhs);
    if (!idx) throw std::logic_error("simulation: missing rule");
    Word next(cur_.begin(), cur_.begin() + static_cast<std::ptrdiff_t>(pos));
    next.insert(next.end(), rhs.begin(), rhs.end());
    next.insert(next.end(), cur_.begin() + static_cast<std::ptrdiff_t>(pos + lhs.size()), cur_.end());
    cur_ = std::move(next);
    d_.steps.push_back(Redex{*idx, pos, cur_});
  }

  std::size_t find(Symbol s) const {
    auto it = std::find(cur_.begin(), cur_.end(), s);
    if (it == cur_.end()) throw std::logic_error("simulation: marker not found");
    return static_cast<std::size_t>(it - cur_.begin());
  }
  Symbol at(std::size_t i) const { return cur_.at(i); }
  const Word& cur() const { return cur_; }
  Derivation take() { return std::move(d_); }

 private:
  const TransformOutput& out_;
  Derivation d_;
  Word cur_;
};

bool is_copy(const TransformOutput& out, Symbol s, char tag) {
  const auto& r = out.role(s);
  if (tag == 'A') return r.kind == SymbolRole::Kind::Source;
  return r.kind == SymbolRole::Kind::Copy && r.copy == tag;
}

Word simulate_split(const TransformOutput& out, const Srs& R, const Word& u, std::size_t i,
                    std::size_t k, Derivation& res) {
  const Rule& rule = R.rule(i);
  const std::size_t n = u.size(), m = rule.lhs.size();
  Sim sim(out, embed(out, u));
  Symbol B = out.marker("B"), E = out.marker("E"), W = out.marker("W"), L = out.marker("L");
  if (k + m <= n) {
    sim.step(rule.lhs, rule.rhs, 1 + k);
  } else {
    const std::size_t j = n - k;
    Word lp(rule.lhs.begin(), rule.lhs.begin() + static_cast<std::ptrdiff_t>(j));
    Word ls(rule.lhs.begin() + static_cast<std::ptrdiff_t>(j), rule.lhs.end());
    Word w(u.begin() + static_cast<std::ptrdiff_t>(m - j), u.begin() + static_cast<std::ptrdiff_t>(k));
    Symbol Rij = out.split_marker(i + 1, j);
    sim.step(cat({{B}, ls}), {W, Rij}, 0);
    for (std::size_t t = 0; t < w.size(); ++t) sim.step({Rij, w[t]}, {out.copy('b', w[t]), Rij}, 1 + t);
    sim.step(cat({{Rij}, lp, {E}}), cat({{L}, rule.rhs, {E}}), 1 + w.size());
    for (std::size_t t = w.size(); t-- > 0;) sim.step({out.copy('b', w[t]), L}, {L, w[t]}, 1 + t);
    sim.step({W, L}, {B}, 0);
  }
  res = sim.take();
  return res.end();
}

Word simulate_shift(const TransformOutput& out, const Srs& R, const Word& u, std::size_t i,
                    std::size_t k, Derivation& res) {
  const Rule& rule = R.rule(i);
  const std::size_t n = u.size(), m = rule.lhs.size();
  const std::size_t len = R.max_lhs_length();
  const std::size_t N = len > 0 ? len - 1 : 0;
  const std::size_t shifts = k + m > n ? k + m - n : 0;
  if (shifts > N) throw std::invalid_argument("shift simulation needs more shifts than available");
  Symbol B = out.marker("B"), E = out.marker("E"), W = out.marker("W"), V = out.marker("V"),
         M = out.marker("M"), L = out.marker("L"), Rm = out.marker("R"), D = out.marker("D");
  Sim sim(out, embed(out, u));
  Word rhsA{W};
  rhsA.insert(rhsA.end(), N, M);
  rhsA.push_back(V);
  sim.step({B}, rhsA, 0);
  for (std::size_t t = 0; t < N - shifts; ++t) sim.step({M}, {}, 1);
  for (std::size_t s = 0; s < shifts; ++s) {
    std::size_t v = sim.find(V);
    Symbol a = sim.at(v + 1);
    Symbol cb = out.copy('B', a);
    sim.step({M, V, a}, {V, cb}, v - 1);
    std::size_t p = v;  // position of the moving copy
    while (sim.at(p + 1) != E) {
      sim.step({cb, sim.at(p + 1)}, {sim.at(p + 1), cb}, p);
      ++p;
    }
    sim.step({cb, E}, {a, E}, p);
  }
  sim.step({W, V}, {Rm, L}, 0);
  const std::size_t pos = k - shifts;
  for (std::size_t t = 0; t < pos; ++t) {
    Symbol a = sim.at(2 + t);
    sim.step({L, a}, {out.copy('C', a), L}, 1 + t);
  }
  sim.step(cat({{L}, rule.lhs}), cat({{D}, rule.rhs}), 1 + pos);
  for (std::size_t t = pos; t-- > 0;) {
    Symbol c = sim.at(1 + t);
    sim.step({c, D}, {D, out.role(c).base}, 1 + t);
  }
  sim.step({Rm, D}, {B}, 0);
  res = sim.take();
  return res.end();
}

Word simulate_rotate(const TransformOutput& out, const Srs& R, const Word& u, std::size_t i,
                     std::size_t k, Derivation& res) {
  const Rule& rule = R.rule(i);
  const std::size_t n = u.size();
  Symbol B = out.marker("B"), E = out.marker("E"), W = out.marker("W"), Rm = out.marker("R"),
         G = out.marker("G"), O = out.marker("O"), C = out.marker("C"), L = out.marker("L"),
         S = out.marker("S"), F = out.marker("F"), f = out.marker("f");
  Sim sim(out, embed(out, u));
  sim.step({B, u[0]}, {O, C, out.copy('D', u[0]), G}, 0);
  const std::size_t guess = k == 0 ? n : k;
  for (std::size_t t = 1; t < guess; ++t) {
    std::size_t g = sim.find(G);
    sim.step({G, u[t]}, {out.copy('D', u[t]), G}, g);
  }
  if (k == 0) {
    sim.step({G, E}, {F, E}, sim.find(G));
  } else {
    std::size_t g = sim.find(G);
    sim.step({G, u[k]}, {L, out.copy('C', u[k]), S}, g);
    for (;;) {
      std::size_t l = sim.find(L);
      Symbol c = sim.at(l + 1);
      while (is_copy(out, sim.at(l - 1), 'D')) {
        Symbol d = sim.at(l - 1);
        sim.step({d, L, c}, {L, c, out.copy('B', out.role(d).base)}, l - 1);
        --l;
      }
      sim.step({C, L, c}, {out.copy('E', out.role(c).base), C, Rm}, l - 1);
      std::size_t r = sim.find(Rm);
      while (is_copy(out, sim.at(r + 1), 'B')) {
        Symbol bb = sim.at(r + 1);
        sim.step({Rm, bb}, {out.copy('D', out.role(bb).base), Rm}, r);
        ++r;
      }
      Symbol next = sim.at(r + 2);
      if (next == E) {
        sim.step({Rm, S, E}, {F, E}, r);
        break;
      }
      sim.step({Rm, S, next}, {L, out.copy('C', next), S}, r);
    }
  }
  std::size_t fpos = sim.find(F);
  while (is_copy(out, sim.at(fpos - 1), 'D')) {
    Symbol d = sim.at(fpos - 1);
    sim.step({d, F}, {F, out.role(d).base}, fpos - 1);
    --fpos;
  }
  sim.step({C, F}, {f}, fpos - 1);
  std::size_t fl = sim.find(f);
  while (is_copy(out, sim.at(fl - 1), 'E')) {
    Symbol e = sim.at(fl - 1);
    sim.step({e, f}, {f, out.role(e).base}, fl - 1);
    --fl;
  }
  sim.step({O, f}, {W}, 0);
  sim.step(cat({{W}, rule.lhs}), cat({{B}, rule.rhs}), 0);
  res = sim.take();
  return res.end();
}

[[noreturn]] void bad_shape() { throw std::invalid_argument("word does not match any normal form"); }

// Cursor over a word for normal-form parsing.
struct Cursor {
  const TransformOutput& out;
  const Word& w;
  std::size_t i = 0;

  bool marker(std::string_view m) {
    if (i < w.size() && out.role(w[i]).kind == SymbolRole::Kind::Marker && out.role(w[i]).marker == m) {
      ++i;
      return true;
    }
    return false;
  }
  Word run(char tag) {
    Word r;
    while (i < w.size() && is_copy(out, w[i], tag)) r.push_back(out.role(w[i++]).base);
    return r;
  }
  // Source and B-copies, as (symbol, is_b) pairs.
  std::vector<std::pair<Symbol, bool>> run_ab() {
    std::vector<std::pair<Symbol, bool>> r;
    while (i < w.size() && (is_copy(out, w[i], 'A') || is_copy(out, w[i], 'B'))) {
      r.emplace_back(out.role(w[i]).base, is_copy(out, w[i], 'B'));
      ++i;
    }
    return r;
  }
  bool done() const { return i == w.size(); }
};

struct Parsed {
  int shape = 0;
  std::vector<Word> images;
};

Parsed parse_split(const TransformOutput& out, const Word& w) {
  Cursor c{out, w};
  if (c.marker("B")) {
    Word u = c.run('A');
    if (c.marker("E") && c.done()) return {1, {u}};
    bad_shape();
  }
  if (!c.marker("W")) bad_shape();
  Word x = c.run('b');
  if (c.marker("L")) {
    Word u = c.run('A');
    if (c.marker("E") && c.done()) return {2, {cat({x, u})}};
    bad_shape();
  }
  if (c.i < w.size() && out.role(w[c.i]).kind == SymbolRole::Kind::SplitMarker) {
    const auto& role = out.role(w[c.i++]);
    Word u = c.run('A');
    if (!(c.marker("E") && c.done())) bad_shape();
    const Word& l = out.source.rule(role.rule - 1).lhs;
    Word ls(l.begin() + static_cast<std::ptrdiff_t>(role.split), l.end());
    return {3, {cat({ls, x, u})}};
  }
  bad_shape();
}

Parsed parse_shift(const TransformOutput& out, const Word& w) {
  Cursor c{out, w};
  auto image = [](const Word& prefix, const std::vector<std::pair<Symbol, bool>>& ab) {
    Word r = prefix, bs;
    for (auto [s, isb] : ab) (isb ? bs : r).push_back(s);
    r.insert(r.end(), bs.rbegin(), bs.rend());
    return r;
  };
  int shape = 0;
  Word prefix;
  if (c.marker("W")) {
    while (c.marker("M")) {
    }
    if (!c.marker("V")) bad_shape();
    shape = 1;
  } else if (c.marker("B")) {
    shape = 2;
  } else if (c.marker("R")) {
    prefix = c.run('C');
    if (c.marker("L")) shape = 3;
    else if (c.marker("D")) shape = 4;
    else bad_shape();
  } else {
    bad_shape();
  }
  auto ab = c.run_ab();
  if (!(c.marker("E") && c.done())) bad_shape();
  return {shape, {image(prefix, ab)}};
}

Parsed parse_rotate(const TransformOutput& out, const Word& w) {
  Cursor c{out, w};
  auto tail = [&]() {
    Word a = c.run('A');
    if (!(c.marker("E") && c.done())) bad_shape();
    return a;
  };
  if (c.marker("B")) return {6, {tail()}};
  if (c.marker("W")) return {7, {tail()}};
  if (!c.marker("O")) bad_shape();
  Word wE = c.run('E');
  if (c.marker("f")) {
    Word wA = tail();
    return {5, {cat({wE, wA})}};
  }
  if (!c.marker("C")) bad_shape();
  Word wD = c.run('D');
  if (c.marker("L")) {
    if (c.i >= w.size() || !is_copy(out, w[c.i], 'C')) bad_shape();
    Word cc{out.role(w[c.i++]).base};
    Word wB = c.run('B');
    if (!c.marker("S")) bad_shape();
    Word wA = tail();
    return {1, {cat({wD, wB, wE, cc, wA})}};
  }
  if (c.marker("R")) {
    Word wB = c.run('B');
    if (!c.marker("S")) bad_shape();
    Word wA = tail();
    return {2, {cat({wD, wB, wE, wA})}};
  }
  if (c.marker("F")) {
    Word wA = tail();
    return {3, {cat({wD, wA, wE})}};
  }
  if (c.marker("G")) {
    Word wA = tail();
    std::vector<Word> imgs;
    for (std::size_t s = 0; s <= wA.size(); ++s) {
      Word p(wA.begin(), wA.begin() + static_cast<std::ptrdiff_t>(s));
      Word q(wA.begin() + static_cast<std::ptrdiff_t>(s), wA.end());
      imgs.push_back(cat({wD, p, wE, q}));
    }
    return {4, imgs};
  }
  bad_shape();
}

Parsed parse(const TransformOutput& out, const Word& w) {
  switch (out.kind) {
    case TransformKind::Split: return parse_split(out, w);
    case TransformKind::Shift: return parse_shift(out, w);
    case TransformKind::Rotate: return parse_rotate(out, w);
  }
  bad_shape();
}

}  // namespace

TransformOutput transform(TransformKind kind, const Srs& R) { return build(kind, R, false); }

TransformOutput transform_rel(TransformKind kind, const Srs& problem) {
  if (problem.strict_count() == 0) throw std::invalid_argument("relative transformation needs a strict rule");
  return build(kind, problem, true);
}

Derivation simulate_step(const TransformOutput& out, const Srs& R, const Word& u, std::size_t rule,
                         std::size_t offset) {
  if (rule >= R.size()) throw std::invalid_argument("rule index out of range");
  if (!apply_at_rotation(R.rule(rule), u, offset))
    throw std::invalid_argument("rule does not apply at the given rotation");
  Derivation d;
  switch (out.kind) {
    case TransformKind::Split: simulate_split(out, R, u, rule, offset, d); break;
    case TransformKind::Shift: simulate_shift(out, R, u, rule, offset, d); break;
    case TransformKind::Rotate: simulate_rotate(out, R, u, rule, offset, d); break;
  }
  return d;
}

Derivation simulate_step(TransformKind kind, const Srs& R, const Word& u, std::size_t rule,
                         std::size_t offset) {
  return simulate_step(transform(kind, R), R, u, rule, offset);
}

int shape_classify(const TransformOutput& out, const Word& w) { return parse(out, w).shape; }

std::vector<Word> backmap(const TransformOutput& out, const Word& w) { return parse(out, w).images; }

}  // namespace cyclerw
