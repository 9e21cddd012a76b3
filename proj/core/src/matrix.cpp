#include "cyclerw/matrix.hpp"

#include <stdexcept>

namespace cyclerw {

std::string_view to_string(SemiringKind k) {
  switch (k) {
    case SemiringKind::Natural: return "natural";
    case SemiringKind::Tropical: return "tropical";
    case SemiringKind::Arctic: return "arctic";
  }
  return "?";
}

std::optional<SemiringKind> parse_semiring(std::string_view s) {
  if (s == "natural") return SemiringKind::Natural;
  if (s == "tropical") return SemiringKind::Tropical;
  if (s == "arctic") return SemiringKind::Arctic;
  return std::nullopt;
}

std::string Value::str() const {
  switch (tag_) {
    case Tag::PosInf: return "inf";
    case Tag::NegInf: return "-inf";
    case Tag::Finite: break;
  }
  return n_.str();
}

Value Value::parse(std::string_view s) {
  if (s == "inf") return pos_inf();
  if (s == "-inf") return neg_inf();
  if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos)
    throw std::invalid_argument("bad semiring value '" + std::string(s) + "'");
  return Value(Integer(std::string(s)));
}

Value zero(SemiringKind k) {
  switch (k) {
    case SemiringKind::Natural: return Value(0);
    case SemiringKind::Tropical: return Value::pos_inf();
    case SemiringKind::Arctic: return Value::neg_inf();
  }
  return {};
}

Value one(SemiringKind k) {
  return k == SemiringKind::Natural ? Value(1) : Value(0);
}

bool legal(SemiringKind k, const Value& v) {
  if (v.finite()) return v.number() >= 0;
  if (k == SemiringKind::Tropical) return v.tag() == Value::Tag::PosInf;
  if (k == SemiringKind::Arctic) return v.tag() == Value::Tag::NegInf;
  return false;
}

Value add(SemiringKind k, const Value& a, const Value& b) {
  switch (k) {
    case SemiringKind::Natural: return Value(a.number() + b.number());
    case SemiringKind::Tropical:
      if (!a.finite()) return b;
      if (!b.finite()) return a;
      return a.number() <= b.number() ? a : b;
    case SemiringKind::Arctic:
      if (!a.finite()) return b;
      if (!b.finite()) return a;
      return a.number() >= b.number() ? a : b;
  }
  return {};
}

Value mul(SemiringKind k, const Value& a, const Value& b) {
  if (k == SemiringKind::Natural) return Value(a.number() * b.number());
  if (!a.finite()) return a;
  if (!b.finite()) return b;
  return Value(a.number() + b.number());
}

bool element_gt(SemiringKind k, const Value& a, const Value& b) {
  switch (k) {
    case SemiringKind::Natural: return a.number() > b.number();
    case SemiringKind::Tropical:
      if (!a.finite()) return b.finite();
      return b.finite() && a.number() > b.number();
    case SemiringKind::Arctic:
      if (!b.finite()) return a.finite();
      return a.finite() && a.number() > b.number();
  }
  return false;
}

bool element_ge(SemiringKind k, const Value& a, const Value& b) {
  return a == b || element_gt(k, a, b);
}

Matrix::Matrix(std::size_t dim, std::vector<Value> entries) : dim_(dim), e_(std::move(entries)) {
  if (e_.size() != dim * dim) throw std::invalid_argument("matrix entry count does not match dimension");
}

std::string Matrix::str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < dim_; ++i) {
    s += i ? ", [" : "[";
    for (std::size_t j = 0; j < dim_; ++j) {
      if (j) s += ", ";
      s += at(i, j).str();
    }
    s += "]";
  }
  return s + "]";
}

Matrix identity(SemiringKind k, std::size_t d) {
  Matrix m(d, zero(k));
  for (std::size_t i = 0; i < d; ++i) m.at(i, i) = one(k);
  return m;
}

Matrix mat_mul(SemiringKind k, const Matrix& A, const Matrix& B) {
  if (A.dim() != B.dim()) throw std::invalid_argument("dimension mismatch");
  const std::size_t d = A.dim();
  Matrix C(d, zero(k));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Value acc = zero(k);
      for (std::size_t t = 0; t < d; ++t) acc = add(k, acc, mul(k, A.at(i, t), B.at(t, j)));
      C.at(i, j) = std::move(acc);
    }
  return C;
}

Value trace(SemiringKind k, const Matrix& A) {
  Value acc = zero(k);
  for (std::size_t i = 0; i < A.dim(); ++i) acc = add(k, acc, A.at(i, i));
  return acc;
}

bool mat_gt(SemiringKind k, const Matrix& A, const Matrix& B) {
  if (A.dim() != B.dim()) throw std::invalid_argument("dimension mismatch");
  if (k == SemiringKind::Natural) {
    if (!(A.at(0, 0).number() > B.at(0, 0).number())) return false;
    return mat_ge(k, A, B);
  }
  const Value z = zero(k);
  for (std::size_t i = 0; i < A.entries().size(); ++i) {
    const Value& a = A.entries()[i];
    const Value& b = B.entries()[i];
    if (!(element_gt(k, a, b) || (a == z && b == z))) return false;
  }
  return true;
}

bool mat_ge(SemiringKind k, const Matrix& A, const Matrix& B) {
  if (A.dim() != B.dim()) throw std::invalid_argument("dimension mismatch");
  for (std::size_t i = 0; i < A.entries().size(); ++i)
    if (!element_ge(k, A.entries()[i], B.entries()[i])) return false;
  return true;
}

bool in_domain(SemiringKind k, const Matrix& A) {
  if (A.dim() == 0) return false;
  for (const auto& v : A.entries())
    if (!legal(k, v)) return false;
  const Value& a11 = A.at(0, 0);
  if (k == SemiringKind::Natural) return a11.number() > 0;
  return a11.finite();
}

void Interpretation::set(Symbol s, Matrix m) {
  if (m.dim() != dim_) throw std::invalid_argument("matrix dimension does not match interpretation");
  if (!in_domain(kind_, m)) throw std::invalid_argument("matrix violates the admissibility constraint");
  if (m_.size() <= s.id) m_.resize(s.id + 1);
  m_[s.id] = std::move(m);
}

const Matrix& Interpretation::get(Symbol s) const {
  if (!has(s)) throw std::out_of_range("symbol not interpreted");
  return *m_[s.id];
}

std::vector<Symbol> Interpretation::domain() const {
  std::vector<Symbol> out;
  for (std::uint32_t i = 0; i < m_.size(); ++i)
    if (m_[i]) out.push_back(Symbol{i});
  return out;
}

Matrix interpret(const Interpretation& I, std::span<const Symbol> w) {
  Matrix acc = identity(I.kind(), I.dim());
  for (Symbol s : w) acc = mat_mul(I.kind(), acc, I.get(s));
  return acc;
}

bool RemovalReport::valid_removal(const Srs& problem) const {
  if (!failed.empty()) return false;
  for (std::size_t i : strictly)
    if (problem.rule(i).strict) return true;
  return false;
}

RemovalReport check_removal(const Interpretation& I, const Srs& problem) {
  RemovalReport rep;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const Rule& r = problem.rule(i);
    Matrix L = interpret(I, r.lhs), R = interpret(I, r.rhs);
    if (mat_gt(I.kind(), L, R)) rep.strictly.push_back(i);
    else if (mat_ge(I.kind(), L, R)) rep.weakly.push_back(i);
    else rep.failed.push_back(i);
  }
  return rep;
}

Affine compose(const Affine& f, const Affine& g) { return Affine{f.a * g.a, f.a * g.b + f.b}; }

void AffineInterpretation::set(Symbol s, Affine f) {
  if (f.a < 1 || f.b < 0) throw std::invalid_argument("affine map must have a >= 1 and b >= 0");
  if (f_.size() <= s.id) f_.resize(s.id + 1);
  f_[s.id] = std::move(f);
}

const Affine& AffineInterpretation::get(Symbol s) const {
  if (!has(s)) throw std::out_of_range("symbol not interpreted");
  return *f_[s.id];
}

Affine evaluate(const AffineInterpretation& s, std::span<const Symbol> w) {
  Affine acc;
  for (Symbol x : w) acc = compose(acc, s.get(x));
  return acc;
}

RemovalReport check_affine(const AffineInterpretation& s, const Srs& R) {
  RemovalReport rep;
  for (std::size_t i = 0; i < R.size(); ++i) {
    Affine l = evaluate(s, R.rule(i).lhs), r = evaluate(s, R.rule(i).rhs);
    if (l.a >= r.a && l.b > r.b) rep.strictly.push_back(i);
    else if (l.a >= r.a && l.b >= r.b) rep.weakly.push_back(i);
    else rep.failed.push_back(i);
  }
  return rep;
}

}  // namespace cyclerw
