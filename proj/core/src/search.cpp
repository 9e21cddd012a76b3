#include "cyclerw/search.hpp"

#include "sat_encoding.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cyclerw {

std::string_view to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::Exhausted: return "exhausted";
    case SearchStatus::TimedOut: return "timed-out";
    case SearchStatus::Error: return "error";
  }
  return "?";
}

std::string SearchConfig::describe() const {
  std::ostringstream os;
  os << to_string(kind) << " d=" << dim << " bound=" << coeff_bound;
  if (kind != SemiringKind::Natural && !allow_infinity) os << " finite";
  if (backend == Backend::ExternalSolver) os << " smt";
  return os.str();
}

Integer Weights::of(const Word& u) const {
  Integer s = 0;
  for (Symbol x : u) s += of(x);
  return s;
}

RemovalReport check_counting(const Weights& w, const Srs& problem) {
  RemovalReport rep;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    Integer l = w.of(problem.rule(i).lhs), r = w.of(problem.rule(i).rhs);
    if (l > r) rep.strictly.push_back(i);
    else if (l == r) rep.weakly.push_back(i);
    else rep.failed.push_back(i);
  }
  return rep;
}

Srs without_rules(const Srs& problem, const std::vector<std::size_t>& removed) {
  std::vector<Rule> keep;
  for (std::size_t i = 0; i < problem.size(); ++i)
    if (std::find(removed.begin(), removed.end(), i) == removed.end()) keep.push_back(problem.rule(i));
  return problem.with_rules(std::move(keep));
}

namespace {

// ---------------------------------------------------------------------------
// Built-in search: depth-first over matrix entries with interval bounds.
//
// Entries are int64 with sentinels for the infinities. Natural arithmetic
// saturates at kCap; saturation only ever weakens pruning, and every leaf is
// re-checked with exact arithmetic.

using Ext = std::int64_t;
constexpr Ext kPosInf = std::numeric_limits<Ext>::max();
constexpr Ext kNegInf = std::numeric_limits<Ext>::min();
constexpr Ext kCap = Ext(1) << 60;

constexpr std::uint64_t kDefaultNodeLimit = 1 << 14;

struct Arith {
  SemiringKind k;

  Ext zero() const {
    return k == SemiringKind::Natural ? 0 : (k == SemiringKind::Tropical ? kPosInf : kNegInf);
  }
  Ext one() const { return k == SemiringKind::Natural ? 1 : 0; }
  static Ext sat_add(Ext a, Ext b) { return a > kCap - b ? kCap : a + b; }
  Ext add(Ext a, Ext b) const {
    switch (k) {
      case SemiringKind::Natural: return sat_add(a, b);
      case SemiringKind::Tropical: return std::min(a, b);
      case SemiringKind::Arctic: return std::max(a, b);
    }
    return 0;
  }
  Ext mul(Ext a, Ext b) const {
    if (k == SemiringKind::Natural) {
      if (a == 0 || b == 0) return 0;
      return a > kCap / b ? kCap : std::min(a * b, kCap);
    }
    const Ext z = zero();
    if (a == z || b == z) return z;
    return sat_add(a, b);
  }
};

class EntrySearch {
 public:
  EntrySearch(const Srs& problem, const SearchConfig& cfg, const Deadline& deadline, std::uint64_t node_limit = 0)
      : P_(problem), cfg_(cfg), ar_{cfg.kind}, d_(cfg.dim), deadline_(deadline) {
    node_limit_ = node_limit;
    if (cfg.dim < 1) throw std::invalid_argument("dimension must be at least 1");
    if (cfg.coeff_bound < 0) throw std::invalid_argument("coefficient bound must be non-negative");
    syms_ = problem.used_symbols();
    for (std::size_t k = 0; k < syms_.size(); ++k) local_[syms_[k].id] = k;
    for (std::size_t i = 0; i < problem.size(); ++i) {
      const Rule& r = problem.rule(i);
      RuleInfo ri;
      for (Symbol s : r.lhs) ri.lhs.push_back(local_.at(s.id));
      for (Symbol s : r.rhs) ri.rhs.push_back(local_.at(s.id));
      // equal traces on both sides: never strictly decreasing
      ri.candidate = r.strict && !cycle_equal(r.lhs, r.rhs);
      rules_.push_back(std::move(ri));
    }
    order_symbols();
    build_domains();
  }

  SearchResult run() {
    SearchResult res;
    bool any_candidate = std::any_of(rules_.begin(), rules_.end(), [](const RuleInfo& r) { return r.candidate; });
    if (!any_candidate) return res;
    const std::size_t n = syms_.size() * d_ * d_;
    lo_.assign(n, 0);
    hi_.assign(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
      auto [s, i, j] = split(v);
      (void)s;
      const auto& dom = domain(i, j);
      lo_[v] = *std::min_element(dom.begin(), dom.end());
      hi_[v] = *std::max_element(dom.begin(), dom.end());
    }
    can_strict_.assign(rules_.size(), 1);
    for (std::size_t r = 0; r < rules_.size(); ++r) {
      if (!check_rule(r)) return res;
    }
    dfs(0);
    if (found_) {
      res.status = SearchStatus::Found;
      res.interpretation = std::move(found_);
    } else if (timed_out_) {
      res.status = SearchStatus::TimedOut;
    }
    return res;
  }

 private:
  struct RuleInfo {
    std::vector<std::size_t> lhs, rhs;
    bool candidate = false;
  };

  std::tuple<std::size_t, std::size_t, std::size_t> split(std::size_t v) const {
    return {v / (d_ * d_), (v / d_) % d_, v % d_};
  }
  std::size_t var(std::size_t sym_local, std::size_t i, std::size_t j) const {
    return sym_local * d_ * d_ + i * d_ + j;
  }
  const std::vector<Ext>& domain(std::size_t i, std::size_t j) const {
    if (i == 0 && j == 0) return dom_top_;
    return i == j ? dom_diag_ : dom_;
  }

  void build_domains() {
    const Ext B = cfg_.coeff_bound;
    switch (cfg_.kind) {
      case SemiringKind::Natural:
        for (Ext x = 0; x <= B; ++x) dom_.push_back(x);
        for (Ext x = 1; x <= std::max<Ext>(B, 1); ++x) dom_top_.push_back(x);
        dom_diag_ = dom_;
        if (B >= 1) std::swap(dom_diag_[0], dom_diag_[1]);
        break;
      case SemiringKind::Tropical:
        for (Ext x = 0; x <= B; ++x) dom_.push_back(x);
        dom_top_ = dom_;
        if (cfg_.allow_infinity) dom_.insert(dom_.begin(), kPosInf);
        dom_diag_ = dom_top_;
        if (cfg_.allow_infinity) dom_diag_.push_back(kPosInf);
        break;
      case SemiringKind::Arctic:
        if (cfg_.allow_infinity) dom_.push_back(kNegInf);
        for (Ext x = 0; x <= B; ++x) dom_.push_back(x);
        for (Ext x = 0; x <= B; ++x) dom_top_.push_back(x);
        dom_diag_ = dom_top_;
        if (cfg_.allow_infinity) dom_diag_.push_back(kNegInf);
        break;
    }
  }

  // Symbols whose rules become fully assigned soonest go first.
  void order_symbols() {
    const std::size_t m = syms_.size();
    std::vector<std::vector<std::size_t>> rule_syms(rules_.size());
    std::vector<std::size_t> occurrences(m, 0);
    for (std::size_t r = 0; r < rules_.size(); ++r) {
      auto& rs = rule_syms[r];
      for (auto s : rules_[r].lhs) rs.push_back(s), ++occurrences[s];
      for (auto s : rules_[r].rhs) rs.push_back(s), ++occurrences[s];
      std::sort(rs.begin(), rs.end());
      rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    }
    std::vector<char> chosen(m, 0);
    std::vector<std::size_t> perm;
    while (perm.size() < m) {
      std::size_t best = m;
      std::pair<long, long> best_key{-1, -1};
      for (std::size_t s = 0; s < m; ++s) {
        if (chosen[s]) continue;
        long completes = 0, touches = 0;
        for (const auto& rs : rule_syms) {
          if (!std::binary_search(rs.begin(), rs.end(), s)) continue;
          ++touches;
          bool all = std::all_of(rs.begin(), rs.end(), [&](std::size_t t) { return t == s || chosen[t]; });
          completes += all;
        }
        std::pair<long, long> key{completes, touches * 1000 + static_cast<long>(occurrences[s])};
        if (key > best_key) best_key = key, best = s;
      }
      chosen[best] = 1;
      perm.push_back(best);
    }
    // Relabel local symbols so that variable order follows perm.
    std::vector<std::size_t> inv(m);
    for (std::size_t k = 0; k < m; ++k) inv[perm[k]] = k;
    std::vector<Symbol> syms(m);
    for (std::size_t k = 0; k < m; ++k) syms[inv[k]] = syms_[k];
    syms_ = syms;
    for (std::size_t k = 0; k < m; ++k) local_[syms_[k].id] = k;
    for (auto& r : rules_) {
      for (auto& s : r.lhs) s = inv[s];
      for (auto& s : r.rhs) s = inv[s];
    }
    touching_.assign(m, {});
    for (std::size_t r = 0; r < rules_.size(); ++r) {
      std::vector<std::size_t> rs(rules_[r].lhs);
      rs.insert(rs.end(), rules_[r].rhs.begin(), rules_[r].rhs.end());
      std::sort(rs.begin(), rs.end());
      rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
      for (auto s : rs) touching_[s].push_back(r);
    }
  }

  void product(const std::vector<std::size_t>& w, const std::vector<Ext>& src, std::vector<Ext>& out) {
    out.assign(d_ * d_, ar_.zero());
    for (std::size_t i = 0; i < d_; ++i) out[i * d_ + i] = ar_.one();
    for (std::size_t s : w) {
      tmp_.assign(d_ * d_, ar_.zero());
      const Ext* m = &src[s * d_ * d_];
      for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t t = 0; t < d_; ++t) {
          Ext a = out[i * d_ + t];
          if (a == ar_.zero()) continue;
          for (std::size_t j = 0; j < d_; ++j)
            tmp_[i * d_ + j] = ar_.add(tmp_[i * d_ + j], ar_.mul(a, m[t * d_ + j]));
        }
      out.swap(tmp_);
    }
  }

  // Updates can_strict_[r]; false when the weak constraint is already violated.
  bool check_rule(std::size_t r) {
    const auto& ri = rules_[r];
    product(ri.lhs, lo_, llo_);
    product(ri.lhs, hi_, lhi_);
    product(ri.rhs, lo_, rlo_);
    product(ri.rhs, hi_, rhi_);
    for (std::size_t e = 0; e < d_ * d_; ++e)
      if (lhi_[e] < rlo_[e]) return false;
    bool strict = ri.candidate;
    if (strict) {
      switch (cfg_.kind) {
        case SemiringKind::Natural: strict = lhi_[0] > rlo_[0]; break;
        case SemiringKind::Tropical:
          for (std::size_t e = 0; e < d_ * d_ && strict; ++e)
            strict = lhi_[e] > rlo_[e] || (lhi_[e] == kPosInf && rhi_[e] == kPosInf);
          break;
        case SemiringKind::Arctic:
          for (std::size_t e = 0; e < d_ * d_ && strict; ++e)
            strict = lhi_[e] > rlo_[e] || (llo_[e] == kNegInf && rlo_[e] == kNegInf);
          break;
      }
    }
    can_strict_[r] = strict;
    return true;
  }

  bool some_strict() const {
    return std::any_of(can_strict_.begin(), can_strict_.end(), [](char c) { return c != 0; });
  }

  Interpretation materialize() const {
    Interpretation I(cfg_.kind, d_);
    for (std::size_t k = 0; k < syms_.size(); ++k) {
      Matrix m(d_);
      for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = 0; j < d_; ++j) {
          Ext x = lo_[var(k, i, j)];
          m.at(i, j) = x == kPosInf ? Value::pos_inf() : x == kNegInf ? Value::neg_inf() : Value(x);
        }
      I.set(syms_[k], std::move(m));
    }
    return I;
  }

  void dfs(std::size_t v) {
    if (found_ || timed_out_) return;
    if ((++nodes_ & 0xfff) == 0 && deadline_.expired()) {
      timed_out_ = true;
      return;
    }
    if (node_limit_ && nodes_ > node_limit_) {
      timed_out_ = true;
      return;
    }
    if (v == lo_.size()) {
      Interpretation I = materialize();
      if (check_removal(I, P_).valid_removal(P_)) found_ = std::move(I);
      return;
    }
    auto [s, i, j] = split(v);
    const auto saved_lo = lo_[v], saved_hi = hi_[v];
    const auto& touched = touching_[s];
    std::vector<char> saved(touched.size());
    for (std::size_t t = 0; t < touched.size(); ++t) saved[t] = can_strict_[touched[t]];
    for (Ext x : domain(i, j)) {
      lo_[v] = hi_[v] = x;
      bool ok = true;
      for (std::size_t r : touched)
        if (!check_rule(r)) {
          ok = false;
          break;
        }
      if (ok && some_strict()) dfs(v + 1);
      for (std::size_t t = 0; t < touched.size(); ++t) can_strict_[touched[t]] = saved[t];
      if (found_ || timed_out_) break;
    }
    lo_[v] = saved_lo;
    hi_[v] = saved_hi;
  }

  const Srs& P_;
  SearchConfig cfg_;
  Arith ar_;
  std::size_t d_;
  Deadline deadline_;
  std::vector<Symbol> syms_;
  std::map<std::uint32_t, std::size_t> local_;
  std::vector<RuleInfo> rules_;
  std::vector<std::vector<std::size_t>> touching_;
  std::vector<Ext> dom_, dom_top_, dom_diag_;
  std::vector<Ext> lo_, hi_;
  std::vector<char> can_strict_;
  std::vector<Ext> llo_, lhi_, rlo_, rhi_, tmp_;
  std::optional<Interpretation> found_;
  bool timed_out_ = false;
  std::uint64_t nodes_ = 0;
  std::uint64_t node_limit_ = 0;
};

class Encoder {
 public:
  Encoder(const Srs& problem, const SearchConfig& cfg) : P_(problem), cfg_(cfg), d_(cfg.dim) {
    syms_ = problem.used_symbols();
  }

  std::string run() {
    const bool nat = cfg_.kind == SemiringKind::Natural;
    const bool inf = !nat && cfg_.allow_infinity;
    out_ << "; " << cfg_.describe() << "\n";
    out_ << (nat ? "(set-logic QF_NIA)\n" : "(set-logic QF_LIA)\n");
    for (std::size_t k = 0; k < syms_.size(); ++k)
      for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = 0; j < d_; ++j) {
          std::string v = entry_name(k, i, j);
          out_ << "(declare-fun " << v << " () Int)\n";
          out_ << "(assert (and (<= 0 " << v << ") (<= " << v << " " << cfg_.coeff_bound << ")))\n";
          if (!nat) out_ << "(declare-fun " << flag_name(k, i, j) << " () Bool)\n";
          if (!nat && !inf) out_ << "(assert (not " << flag_name(k, i, j) << "))\n";
          if (i == 0 && j == 0) {
            if (nat) out_ << "(assert (>= " << v << " 1))\n";
            else out_ << "(assert (not " << flag_name(k, i, j) << "))\n";
          }
        }
    std::vector<std::string> strict_terms;
    for (std::size_t r = 0; r < P_.size(); ++r) {
      const Rule& rule = P_.rule(r);
      Mat L = word_matrix(rule.lhs), R = word_matrix(rule.rhs);
      std::vector<std::string> ge, gt;
      for (std::size_t e = 0; e < d_ * d_; ++e) {
        ge.push_back(cmp(L[e], R[e], false));
        gt.push_back(cmp(L[e], R[e], true));
      }
      out_ << "(assert " << conj(ge) << ")\n";
      if (!rule.strict) continue;
      if (nat) strict_terms.push_back("(> " + L[0].val + " " + R[0].val + ")");
      else strict_terms.push_back(conj(gt));
    }
    if (strict_terms.empty()) strict_terms.push_back("false");
    out_ << "(assert " << disj(strict_terms) << ")\n";
    out_ << "(check-sat)\n(get-model)\n(exit)\n";
    return out_.str();
  }

  std::string entry_name(std::size_t k, std::size_t i, std::size_t j) const {
    return "m_" + std::to_string(k) + "_" + std::to_string(i) + "_" + std::to_string(j);
  }
  std::string flag_name(std::size_t k, std::size_t i, std::size_t j) const {
    return "z_" + std::to_string(k) + "_" + std::to_string(i) + "_" + std::to_string(j);
  }
  const std::vector<Symbol>& symbols() const { return syms_; }

 private:
  // val is an Int term; zero is a Bool term (semiring zero for tropical/arctic).
  struct Entry {
    std::string val, zero;
  };
  using Mat = std::vector<Entry>;

  static std::string conj(const std::vector<std::string>& xs) {
    if (xs.empty()) return "true";
    if (xs.size() == 1) return xs[0];
    std::string s = "(and";
    for (const auto& x : xs) s += " " + x;
    return s + ")";
  }
  static std::string disj(const std::vector<std::string>& xs) {
    if (xs.size() == 1) return xs[0];
    std::string s = "(or";
    for (const auto& x : xs) s += " " + x;
    return s + ")";
  }

  std::string cmp(const Entry& a, const Entry& b, bool strict) const {
    const char* op = strict ? ">" : ">=";
    switch (cfg_.kind) {
      case SemiringKind::Natural: return "(" + std::string(op) + " " + a.val + " " + b.val + ")";
      case SemiringKind::Tropical:
        // +inf is largest; for the strict order two infinities also qualify
        return "(or " + a.zero + " (and (not " + a.zero + ") (not " + b.zero + ") (" + op + " " + a.val + " " +
               b.val + ")))";
      case SemiringKind::Arctic:
        return "(or " + b.zero + " (and (not " + a.zero + ") (not " + b.zero + ") (" + op + " " + a.val + " " +
               b.val + ")))";
    }
    return "true";
  }

  Mat identity_matrix() const {
    Mat m(d_ * d_);
    const bool nat = cfg_.kind == SemiringKind::Natural;
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) {
        bool diag = i == j;
        m[i * d_ + j] = nat ? Entry{diag ? "1" : "0", "false"} : Entry{"0", diag ? "false" : "true"};
      }
    return m;
  }

  Mat symbol_matrix(std::size_t k) const {
    Mat m(d_ * d_);
    const bool nat = cfg_.kind == SemiringKind::Natural;
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j)
        m[i * d_ + j] = Entry{entry_name(k, i, j), nat ? "false" : flag_name(k, i, j)};
    return m;
  }

  // Products are memoised on word prefixes; each product entry is a fresh
  // variable constrained to its defining expression.
  Mat word_matrix(const Word& w) {
    Mat acc = identity_matrix();
    Word prefix;
    for (Symbol s : w) {
      prefix.push_back(s);
      auto it = memo_.find(prefix);
      if (it != memo_.end()) {
        acc = it->second;
        continue;
      }
      std::size_t k = std::find(syms_.begin(), syms_.end(), s) - syms_.begin();
      acc = prefix.size() == 1 ? symbol_matrix(k) : multiply(acc, symbol_matrix(k));
      memo_.emplace(prefix, acc);
    }
    return acc;
  }

  Mat multiply(const Mat& A, const Mat& B) {
    Mat C(d_ * d_);
    const std::size_t id = next_++;
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) {
        std::string v = "p_" + std::to_string(id) + "_" + std::to_string(i) + "_" + std::to_string(j);
        out_ << "(declare-fun " << v << " () Int)\n";
        if (cfg_.kind == SemiringKind::Natural) {
          std::string sum = "(+";
          for (std::size_t t = 0; t < d_; ++t)
            sum += " (* " + A[i * d_ + t].val + " " + B[t * d_ + j].val + ")";
          sum += d_ == 1 ? " 0)" : ")";
          out_ << "(assert (= " << v << " " << sum << "))\n";
          C[i * d_ + j] = Entry{v, "false"};
          continue;
        }
        std::string z = "q_" + std::to_string(id) + "_" + std::to_string(i) + "_" + std::to_string(j);
        out_ << "(declare-fun " << z << " () Bool)\n";
        const char* bound = cfg_.kind == SemiringKind::Tropical ? "<=" : ">=";
        std::vector<std::string> zero_terms, witness;
        for (std::size_t t = 0; t < d_; ++t) {
          const Entry& a = A[i * d_ + t];
          const Entry& b = B[t * d_ + j];
          std::string term_zero = "(or " + a.zero + " " + b.zero + ")";
          std::string sum = "(+ " + a.val + " " + b.val + ")";
          zero_terms.push_back(term_zero);
          out_ << "(assert (or " << term_zero << " (" << bound << " " << v << " " << sum << ")))\n";
          witness.push_back("(and (not " + term_zero + ") (= " + v + " " + sum + "))");
        }
        out_ << "(assert (= " << z << " " << conj(zero_terms) << "))\n";
        out_ << "(assert (or " << z << " " << disj(witness) << "))\n";
        C[i * d_ + j] = Entry{v, z};
      }
    return C;
  }

  const Srs& P_;
  SearchConfig cfg_;
  std::size_t d_;
  std::vector<Symbol> syms_;
  std::map<Word, Mat> memo_;
  std::size_t next_ = 0;
  std::ostringstream out_;
};

// Minimal s-expression reader for solver output.
struct Sexp {
  std::string atom;
  std::vector<Sexp> list;
  bool is_atom = true;
};

class SexpReader {
 public:
  explicit SexpReader(std::string_view s) : s_(s) {}
  std::optional<Sexp> next() {
    skip();
    if (p_ >= s_.size()) return std::nullopt;
    if (s_[p_] == ')') {
      ++p_;
      return next();
    }
    return read();
  }

 private:
  void skip() {
    while (p_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
      else if (s_[p_] == ';') {
        while (p_ < s_.size() && s_[p_] != '\n') ++p_;
      } else break;
    }
  }
  Sexp read() {
    skip();
    Sexp e;
    if (p_ < s_.size() && s_[p_] == '(') {
      ++p_;
      e.is_atom = false;
      for (;;) {
        skip();
        if (p_ >= s_.size()) break;
        if (s_[p_] == ')') {
          ++p_;
          break;
        }
        e.list.push_back(read());
      }
      return e;
    }
    std::size_t start = p_;
    if (p_ < s_.size() && s_[p_] == '"') {
      ++p_;
      while (p_ < s_.size() && s_[p_] != '"') ++p_;
      ++p_;
    } else {
      while (p_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[p_])) && s_[p_] != '(' && s_[p_] != ')')
        ++p_;
    }
    e.atom = std::string(s_.substr(start, p_ - start));
    return e;
  }
  std::string_view s_;
  std::size_t p_ = 0;
};

std::optional<long long> eval_int(const Sexp& e) {
  if (e.is_atom) {
    try {
      std::size_t used = 0;
      long long v = std::stoll(e.atom, &used);
      if (used == e.atom.size()) return v;
    } catch (...) {
    }
    return std::nullopt;
  }
  if (e.list.size() == 2 && e.list[0].is_atom && e.list[0].atom == "-") {
    auto v = eval_int(e.list[1]);
    if (v) return -*v;
  }
  return std::nullopt;
}

}  // namespace

std::string encode_constraints(const Srs& problem, const SearchConfig& cfg) {
  if (cfg.dim < 1) throw std::invalid_argument("dimension must be at least 1");
  return Encoder(problem, cfg).run();
}

std::optional<Interpretation> decode_model(const Srs& problem, const SearchConfig& cfg,
                                           std::string_view response) {
  SexpReader rd(response);
  auto head = rd.next();
  if (!head || !head->is_atom || head->atom != "sat") return std::nullopt;
  std::map<std::string, std::string> values;
  std::map<std::string, long long> ints;
  std::function<void(const Sexp&)> collect = [&](const Sexp& e) {
    if (e.is_atom) return;
    if (e.list.size() == 5 && e.list[0].is_atom && e.list[0].atom == "define-fun") {
      const std::string& name = e.list[1].atom;
      if (auto v = eval_int(e.list[4])) ints[name] = *v;
      else if (e.list[4].is_atom) values[name] = e.list[4].atom;
      return;
    }
    for (const auto& c : e.list) collect(c);
  };
  while (auto e = rd.next()) collect(*e);

  Encoder names(problem, cfg);
  const auto& syms = names.symbols();
  const bool nat = cfg.kind == SemiringKind::Natural;
  Interpretation I(cfg.kind, cfg.dim);
  for (std::size_t k = 0; k < syms.size(); ++k) {
    Matrix m(cfg.dim);
    for (std::size_t i = 0; i < cfg.dim; ++i)
      for (std::size_t j = 0; j < cfg.dim; ++j) {
        bool is_zero = false;
        if (!nat) {
          auto f = values.find(names.flag_name(k, i, j));
          is_zero = f != values.end() && f->second == "true";
        }
        if (is_zero) {
          m.at(i, j) = zero(cfg.kind);
          continue;
        }
        auto v = ints.find(names.entry_name(k, i, j));
        // Unconstrained entries may be omitted from the model.
        long long x = v == ints.end() ? 0 : v->second;
        if (nat && i == 0 && j == 0 && v == ints.end()) x = 1;
        if (x < 0) return std::nullopt;
        m.at(i, j) = Value(x);
      }
    if (!in_domain(cfg.kind, m)) return std::nullopt;
    I.set(syms[k], std::move(m));
  }
  return I;
}

std::optional<CountingResult> counting_removal(const Srs& problem, long long bound, const Deadline& deadline) {
  SearchConfig cfg;
  cfg.kind = SemiringKind::Tropical;
  cfg.dim = 1;
  cfg.coeff_bound = bound;
  cfg.allow_infinity = false;
  auto res = EntrySearch(problem, cfg, deadline).run();
  if (!res.interpretation) return std::nullopt;
  CountingResult out;
  for (Symbol s : res.interpretation->domain()) {
    if (out.weights.w.size() <= s.id) out.weights.w.resize(s.id + 1);
    out.weights.w[s.id] = res.interpretation->get(s).at(0, 0).number();
  }
  out.report = check_counting(out.weights, problem);
  if (!out.report.valid_removal(problem)) return std::nullopt;
  return out;
}

namespace {

SearchResult run_solver(const Srs& problem, const SearchConfig& cfg, const Deadline& deadline) {
  SearchResult res;
  if (cfg.solver_command.empty()) {
    res.status = SearchStatus::Error;
    res.diagnostics = "no solver command configured";
    return res;
  }
  TempFile input(".smt2", encode_constraints(problem, cfg));
  std::string cmd = cfg.solver_command;
  if (cmd.find("{file}") != std::string::npos) cmd = fill_template(cmd, "file", shell_quote(input.path()));
  else cmd += " " + shell_quote(input.path());
  auto pr = run_shell(cmd, deadline);
  if (!pr.started) {
    res.status = SearchStatus::Error;
    res.diagnostics = "could not start solver";
    return res;
  }
  if (pr.timed_out) {
    res.status = SearchStatus::TimedOut;
    return res;
  }
  SexpReader rd(pr.out);
  auto head = rd.next();
  std::string verdict = head && head->is_atom ? head->atom : "";
  if (verdict == "unsat") return res;
  if (verdict == "unknown" || verdict == "timeout") {
    res.status = SearchStatus::TimedOut;
    return res;
  }
  if (verdict != "sat") {
    res.status = SearchStatus::Error;
    res.diagnostics = "unexpected solver output: " + pr.out.substr(0, 200) + pr.err.substr(0, 200);
    return res;
  }
  auto I = decode_model(problem, cfg, pr.out);
  if (!I || !check_removal(*I, problem).valid_removal(problem)) {
    res.status = SearchStatus::Error;
    res.diagnostics = "solver model does not verify";
    return res;
  }
  res.status = SearchStatus::Found;
  res.interpretation = std::move(I);
  return res;
}

}  // namespace

namespace {

// State of one configuration across the rounds of a removal step.
struct Attempt {
  bool entry_search_done = false;
  std::optional<detail::SatSession> sat;
};

SearchResult attempt(const Srs& problem, const SearchConfig& cfg, const Deadline& deadline, Attempt& a) {
  Deadline dl = deadline.sooner(cfg.budget);
  if (cfg.backend == Backend::ExternalSolver) return run_solver(problem, cfg, dl);
  // The entry search settles small spaces quickly; SAT covers the rest.
  SearchResult res;
  res.status = SearchStatus::TimedOut;
  if (!a.entry_search_done) {
    a.entry_search_done = true;
    res = EntrySearch(problem, cfg, dl, cfg.effort == 0 ? kDefaultNodeLimit : cfg.effort).run();
  }
  if (res.status == SearchStatus::TimedOut && !dl.expired()) {
    if (!a.sat) a.sat.emplace(problem, cfg);
    res = a.sat->run(dl);
  }
  if (res.interpretation && !check_removal(*res.interpretation, problem).valid_removal(problem)) {
    res.status = SearchStatus::Error;
    res.interpretation.reset();
    res.diagnostics = "internal: built-in witness failed verification";
  }
  return res;
}

}  // namespace

SearchResult find_interpretation(const Srs& problem, const SearchConfig& cfg, const Deadline& deadline) {
  Attempt a;
  return attempt(problem, cfg, deadline, a);
}

std::vector<SearchConfig> default_schedule(std::chrono::milliseconds slice) {
  std::vector<SearchConfig> out;
  auto add = [&](SemiringKind k, std::size_t d, long long b) {
    SearchConfig c;
    c.kind = k;
    c.dim = d;
    c.coeff_bound = b;
    c.budget = slice;
    out.push_back(c);
  };
  for (long long b = 1; b <= 3; ++b) add(SemiringKind::Tropical, 1, b);
  for (std::size_t d = 2; d <= 3; ++d)
    for (long long b = 1; b <= 3; ++b)
      for (auto k : {SemiringKind::Tropical, SemiringKind::Natural, SemiringKind::Arctic}) add(k, d, b);
  return out;
}

RemovalOutcome removal_loop(const Srs& problem, const std::vector<SearchConfig>& schedule,
                            const Deadline& deadline, long long counting_bound) {
  RemovalOutcome out;
  Srs cur = problem;
  while (cur.strict_count() > 0 && !deadline.expired()) {
    if (auto c = counting_removal(cur, counting_bound, deadline)) {
      RemovalStep st{RemovalStep::Kind::Counting, cur, c->weights, std::nullopt, c->report.strictly,
                     "counting bound=" + std::to_string(counting_bound)};
      cur = without_rules(cur, st.removed);
      out.steps.push_back(std::move(st));
      continue;
    }
    // Rounds over the schedule. A config that ran out of time is resumed in
    // the next round with a doubled slice, and dimension d joins in round
    // d-2, so one hard config cannot starve the cheaper ones.
    std::vector<char> done(schedule.size(), 0);
    std::vector<Attempt> attempts(schedule.size());
    std::optional<RemovalStep> found;
    for (unsigned round = 0; !found && !deadline.expired(); ++round) {
      bool open = false;
      for (std::size_t i = 0; i < schedule.size() && !found && !deadline.expired(); ++i) {
        if (done[i]) continue;
        if (schedule[i].dim > round + 2) {
          open = true;
          continue;
        }
        SearchConfig cfg = schedule[i];
        cfg.budget *= 1LL << std::min(round, 20u);
        auto res = attempt(cur, cfg, deadline, attempts[i]);
        if (res.status == SearchStatus::TimedOut && cfg.backend == Backend::BuiltIn) open = true;
        else done[i] = 1;
        if (res.status != SearchStatus::Found) continue;
        auto rep = check_removal(*res.interpretation, cur);
        found = RemovalStep{RemovalStep::Kind::Matrix, cur, std::nullopt, std::move(res.interpretation),
                            rep.strictly, schedule[i].describe()};
      }
      if (!open) break;
    }
    if (!found) break;
    cur = without_rules(cur, found->removed);
    out.steps.push_back(std::move(*found));
  }
  out.residual = std::move(cur);
  return out;
}

}  // namespace cyclerw
