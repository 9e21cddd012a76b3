#include "sat_encoding.hpp"

#include <cadical.hpp>

#include <functional>
#include <map>
#include <unordered_map>

namespace cyclerw::detail {
namespace {

// Gate-level CNF builder with constant folding and structural hashing.
// Literals are CaDiCaL literals; `kTrue` is a variable fixed to true.
class Circuit {
 public:
  explicit Circuit(CaDiCaL::Solver& s) : s_(s) { s_.clause(kTrue); }

  static constexpr int kTrue = 1;
  static constexpr int kFalse = -1;

  int fresh() { return ++vars_; }
  void unit(int a) { s_.clause(a); }
  void clause(const std::vector<int>& c) { s_.clause(c); }

  int AND(int a, int b) {
    if (a == kFalse || b == kFalse || a == -b) return kFalse;
    if (a == kTrue) return b;
    if (b == kTrue || a == b) return a;
    if (a > b) std::swap(a, b);
    auto [it, fresh_gate] = and_.try_emplace(key(a, b), 0);
    if (!fresh_gate) return it->second;
    const int o = fresh();
    s_.clause(-o, a);
    s_.clause(-o, b);
    s_.clause(o, -a, -b);
    return it->second = o;
  }
  int OR(int a, int b) { return -AND(-a, -b); }
  int XOR(int a, int b) {
    if (a == kFalse) return b;
    if (b == kFalse) return a;
    if (a == kTrue) return -b;
    if (b == kTrue) return -a;
    if (a == b) return kFalse;
    if (a == -b) return kTrue;
    bool neg = false;
    if (a < 0) a = -a, neg = !neg;
    if (b < 0) b = -b, neg = !neg;
    if (a > b) std::swap(a, b);
    auto [it, fresh_gate] = xor_.try_emplace(key(a, b), 0);
    if (fresh_gate) {
      const int o = fresh();
      s_.clause(-o, a, b);
      s_.clause(-o, -a, -b);
      s_.clause(o, -a, b);
      s_.clause(o, a, -b);
      it->second = o;
    }
    return neg ? -it->second : it->second;
  }
  int ITE(int c, int t, int e) {
    if (c == kTrue || t == e) return t;
    if (c == kFalse) return e;
    return OR(AND(c, t), AND(-c, e));
  }
  int any(const std::vector<int>& xs) {
    int acc = kFalse;
    for (int x : xs) acc = OR(acc, x);
    return acc;
  }

 private:
  static std::uint64_t key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
  }

  CaDiCaL::Solver& s_;
  int vars_ = 1;
  std::unordered_map<std::uint64_t, int> and_, xor_;
};

// Unsigned binary numbers, least significant bit first, exact widths.
using Bits = std::vector<int>;

Bits constant(long long n) {
  Bits b;
  for (; n > 0; n >>= 1) b.push_back((n & 1) ? Circuit::kTrue : Circuit::kFalse);
  return b;
}

int bit(const Bits& x, std::size_t i) { return i < x.size() ? x[i] : Circuit::kFalse; }

void trim(Bits& x) {
  while (!x.empty() && x.back() == Circuit::kFalse) x.pop_back();
}

Bits add(Circuit& c, const Bits& x, const Bits& y) {
  Bits out;
  int carry = Circuit::kFalse;
  for (std::size_t i = 0; i < std::max(x.size(), y.size()); ++i) {
    const int a = bit(x, i), b = bit(y, i);
    const int t = c.XOR(a, b);
    out.push_back(c.XOR(t, carry));
    carry = c.OR(c.AND(a, b), c.AND(t, carry));
  }
  out.push_back(carry);
  trim(out);
  return out;
}

Bits mul(Circuit& c, const Bits& x, const Bits& y) {
  Bits acc;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == Circuit::kFalse) continue;
    Bits row(i, Circuit::kFalse);
    for (int xb : x) row.push_back(c.AND(xb, y[i]));
    trim(row);
    acc = add(c, acc, row);
  }
  return acc;
}

// x > y when `strict`, x >= y otherwise.
int compare(Circuit& c, const Bits& x, const Bits& y, bool strict) {
  int res = strict ? Circuit::kFalse : Circuit::kTrue;
  for (std::size_t i = 0; i < std::max(x.size(), y.size()); ++i) {
    const int a = bit(x, i), b = bit(y, i);
    // The higher bit decides unless equal, then the lower result stands.
    res = c.OR(c.AND(a, -b), c.AND(-c.XOR(a, b), res));
  }
  return res;
}

// Natural numbers in binary. The admissibility constraint (positive top-left
// entry) is imposed on fresh entries.
class NaturalAlgebra {
 public:
  using Elem = Bits;

  NaturalAlgebra(Circuit& c, const SearchConfig& cfg) : c_(c), bound_(constant(cfg.coeff_bound)) {}

  Elem zero() const { return {}; }
  Elem one() const { return constant(1); }
  Elem fresh(bool top_left) {
    Bits x;
    for (std::size_t b = 0; b < bound_.size(); ++b) x.push_back(c_.fresh());
    c_.unit(compare(c_, bound_, x, false));
    if (top_left) c_.unit(c_.any(x));
    return x;
  }
  Elem plus(const Elem& a, const Elem& b) { return add(c_, a, b); }
  Elem times(const Elem& a, const Elem& b) { return mul(c_, a, b); }
  int ge(const Elem& a, const Elem& b) { return compare(c_, a, b, false); }
  int gt(const Elem& a, const Elem& b) { return compare(c_, a, b, true); }
  // Natural strictness only looks at the top-left entry.
  int strict(const std::vector<Elem>& L, const std::vector<Elem>& R) { return gt(L[0], R[0]); }
  Value value(const Elem& x, const std::function<bool(int)>& val) const {
    long long n = 0;
    for (std::size_t b = 0; b < x.size(); ++b)
      if (val(x[b])) n |= 1LL << b;
    return Value(n);
  }

 private:
  Circuit& c_;
  Bits bound_;
};

// Tropical and arctic elements in order encoding: lvl[i] holds iff the
// value is at least i+1 (tropical) or at least i (arctic, so lvl[0] means
// finite). Tropical infinity additionally sets `top`; every level bit above
// the stored width equals `top`. Min and max become bitwise AND and OR, and
// comparisons become bitwise implications.
class UnaryAlgebra {
 public:
  struct Elem {
    std::vector<int> lvl;
    int top = Circuit::kFalse;
  };

  UnaryAlgebra(Circuit& c, const SearchConfig& cfg)
      : c_(c), tropical_(cfg.kind == SemiringKind::Tropical), bound_(cfg.coeff_bound), inf_(cfg.allow_infinity) {}

  Elem zero() const {
    if (tropical_) return {{}, Circuit::kTrue};
    return {};
  }
  Elem one() const {
    if (tropical_) return {};
    return {{Circuit::kTrue}, Circuit::kFalse};
  }

  Elem fresh(bool top_left) {
    Elem x;
    const bool may_be_inf = inf_ && !top_left;
    if (tropical_) {
      for (long long i = 0; i < bound_; ++i) x.lvl.push_back(c_.fresh());
      if (may_be_inf) {
        x.top = c_.fresh();
        for (int b : x.lvl) c_.clause({-x.top, b});
      }
    } else {
      x.lvl.push_back(may_be_inf ? c_.fresh() : Circuit::kTrue);
      for (long long i = 0; i < bound_; ++i) x.lvl.push_back(c_.fresh());
    }
    for (std::size_t i = 1; i < x.lvl.size(); ++i) c_.clause({-x.lvl[i], x.lvl[i - 1]});
    return x;
  }

  Elem plus(const Elem& a, const Elem& b) {
    Elem z;
    const std::size_t w = std::max(a.lvl.size(), b.lvl.size());
    for (std::size_t i = 0; i < w; ++i)
      z.lvl.push_back(tropical_ ? c_.AND(level(a, i), level(b, i)) : c_.OR(level(a, i), level(b, i)));
    z.top = c_.AND(a.top, b.top);
    normalise(z);
    return z;
  }

  Elem times(const Elem& a, const Elem& b) {
    Elem z;
    if (tropical_) {
      // value >= k iff a >= i and b >= k-i for some i; level -1 is "true".
      z.top = c_.OR(a.top, b.top);
      const std::size_t w = a.lvl.size() + b.lvl.size();
      for (std::size_t k = 1; k <= w; ++k) {
        int any = z.top;
        for (std::size_t i = 0; i <= k; ++i) any = c_.OR(any, c_.AND(at_least(a, i), at_least(b, k - i)));
        z.lvl.push_back(any);
      }
    } else {
      if (a.lvl.empty() || b.lvl.empty()) return z;
      const std::size_t w = a.lvl.size() + b.lvl.size() - 1;
      for (std::size_t k = 0; k < w; ++k) {
        int any = Circuit::kFalse;
        for (std::size_t i = 0; i <= k; ++i) any = c_.OR(any, c_.AND(level(a, i), level(b, k - i)));
        z.lvl.push_back(any);
      }
    }
    normalise(z);
    return z;
  }

  int ge(const Elem& a, const Elem& b) {
    int all = c_.OR(-b.top, a.top);
    for (std::size_t i = 0; i < std::max(a.lvl.size(), b.lvl.size()); ++i)
      all = c_.AND(all, c_.OR(-level(b, i), level(a, i)));
    return all;
  }

  int gt(const Elem& a, const Elem& b) {
    int any = c_.AND(a.top, -b.top);
    for (std::size_t i = 0; i < std::max(a.lvl.size(), b.lvl.size()); ++i)
      any = c_.OR(any, c_.AND(level(a, i), -level(b, i)));
    return any;
  }

  // Every entry decreases, where two zeros (infinities) count as decreasing.
  int strict(const std::vector<Elem>& L, const std::vector<Elem>& R) {
    int all = Circuit::kTrue;
    for (std::size_t e = 0; e < L.size(); ++e) all = c_.AND(all, c_.OR(gt(L[e], R[e]), both_zero(L[e], R[e])));
    return all;
  }

  Value value(const Elem& x, const std::function<bool(int)>& val) const {
    auto holds = [&](int lit) { return lit == Circuit::kTrue || (lit != Circuit::kFalse && val(lit)); };
    if (tropical_ && holds(x.top)) return Value::pos_inf();
    long long n = 0;
    for (int b : x.lvl) n += holds(b) ? 1 : 0;
    if (!tropical_) {
      if (n == 0) return Value::neg_inf();
      --n;
    }
    return Value(n);
  }

 private:
  int level(const Elem& x, std::size_t i) const { return i < x.lvl.size() ? x.lvl[i] : x.top; }
  // Tropical only: value >= n.
  int at_least(const Elem& x, std::size_t n) const { return n == 0 ? Circuit::kTrue : level(x, n - 1); }
  int both_zero(const Elem& a, const Elem& b) {
    if (tropical_) return c_.AND(a.top, b.top);
    return c_.AND(-level(a, 0), -level(b, 0));
  }
  static void normalise(Elem& z) {
    while (!z.lvl.empty() && z.lvl.back() == z.top) z.lvl.pop_back();
  }

  Circuit& c_;
  bool tropical_;
  long long bound_;
  bool inf_;
};

template <class Algebra>
class Encoder {
 public:
  using Elem = typename Algebra::Elem;
  using Mat = std::vector<Elem>;  // row-major d*d

  Encoder(CaDiCaL::Solver& s, const Srs& problem, const SearchConfig& cfg)
      : c_(s), alg_(c_, cfg), P_(problem), cfg_(cfg), d_(cfg.dim) {}

  // Returns false when no rule can become strict.
  bool encode() {
    for (Symbol s : P_.used_symbols()) {
      Mat m;
      for (std::size_t e = 0; e < d_ * d_; ++e) m.push_back(alg_.fresh(e == 0));
      vars_.emplace(s.id, std::move(m));
    }
    std::vector<int> strict;
    for (std::size_t i = 0; i < P_.size(); ++i) {
      const Rule& r = P_.rule(i);
      const Mat& L = product(r.lhs);
      const Mat& R = product(r.rhs);
      for (std::size_t e = 0; e < d_ * d_; ++e) c_.unit(alg_.ge(L[e], R[e]));
      if (r.strict && !cycle_equal(r.lhs, r.rhs)) strict.push_back(alg_.strict(L, R));
    }
    if (strict.empty()) return false;
    c_.clause(strict);
    return true;
  }

  Interpretation decode(CaDiCaL::Solver& s) const {
    const std::function<bool(int)> val = [&](int lit) { return s.val(lit) > 0; };
    Interpretation I(cfg_.kind, d_);
    for (const auto& [id, m] : vars_) {
      Matrix out(d_);
      for (std::size_t e = 0; e < d_ * d_; ++e) out.at(e / d_, e % d_) = alg_.value(m[e], val);
      I.set(Symbol{id}, std::move(out));
    }
    return I;
  }

 private:
  Mat mat_mul(const Mat& A, const Mat& B) {
    Mat C(d_ * d_);
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) {
        Elem acc = alg_.zero();
        for (std::size_t t = 0; t < d_; ++t) acc = alg_.plus(acc, alg_.times(A[i * d_ + t], B[t * d_ + j]));
        C[i * d_ + j] = std::move(acc);
      }
    return C;
  }

  const Mat& product(const Word& w) {
    auto it = products_.find(w);
    if (it != products_.end()) return it->second;
    Mat m;
    if (w.empty()) {
      m.assign(d_ * d_, alg_.zero());
      for (std::size_t i = 0; i < d_; ++i) m[i * d_ + i] = alg_.one();
    } else if (w.size() == 1) {
      m = vars_.at(w[0].id);
    } else {
      const Word prefix(w.begin(), w.end() - 1);
      m = mat_mul(product(prefix), vars_.at(w.back().id));
    }
    return products_.emplace(w, std::move(m)).first->second;
  }

  Circuit c_;
  Algebra alg_;
  const Srs& P_;
  const SearchConfig& cfg_;
  std::size_t d_;
  std::map<std::uint32_t, Mat> vars_;
  std::map<Word, Mat> products_;
};

class DeadlineTerminator : public CaDiCaL::Terminator {
 public:
  explicit DeadlineTerminator(const Deadline& d) : d_(d) {}
  bool terminate() override { return d_.expired(); }

 private:
  const Deadline& d_;
};

struct SessionBase {
  virtual ~SessionBase() = default;
  virtual SearchResult run(const Deadline& deadline) = 0;
};

template <class Algebra>
class TypedSession : public SessionBase {
 public:
  TypedSession(const Srs& problem, const SearchConfig& cfg) : problem_(problem), cfg_(cfg), enc_(solver_, problem_, cfg_) {
    solver_.set("quiet", 1);
    satisfiable_ = enc_.encode();
  }

  SearchResult run(const Deadline& deadline) override {
    SearchResult res;
    if (!satisfiable_) return res;
    DeadlineTerminator term(deadline);
    solver_.connect_terminator(&term);
    const int status = solver_.solve();
    solver_.disconnect_terminator();
    if (status == 20) {
      satisfiable_ = false;
      return res;
    }
    if (status != 10) {
      res.status = SearchStatus::TimedOut;
      return res;
    }
    Interpretation I = enc_.decode(solver_);
    if (!check_removal(I, problem_).valid_removal(problem_)) {
      res.status = SearchStatus::Error;
      res.diagnostics = "SAT model does not verify";
      return res;
    }
    res.status = SearchStatus::Found;
    res.interpretation = std::move(I);
    return res;
  }

 private:
  Srs problem_;
  SearchConfig cfg_;
  CaDiCaL::Solver solver_;
  Encoder<Algebra> enc_;
  bool satisfiable_ = true;
};

}  // namespace

struct SatSession::Impl {
  std::unique_ptr<SessionBase> s;
};

SatSession::SatSession(const Srs& problem, const SearchConfig& cfg) : impl_(std::make_unique<Impl>()) {
  if (cfg.kind == SemiringKind::Natural) impl_->s = std::make_unique<TypedSession<NaturalAlgebra>>(problem, cfg);
  else impl_->s = std::make_unique<TypedSession<UnaryAlgebra>>(problem, cfg);
}
SatSession::~SatSession() = default;
SatSession::SatSession(SatSession&&) noexcept = default;
SatSession& SatSession::operator=(SatSession&&) noexcept = default;

SearchResult SatSession::run(const Deadline& deadline) { return impl_->s->run(deadline); }

SearchResult sat_search(const Srs& problem, const SearchConfig& cfg, const Deadline& deadline) {
  return SatSession(problem, cfg).run(deadline);
}

}  // namespace cyclerw::detail
