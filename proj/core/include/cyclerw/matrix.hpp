#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cyclerw/rewriting.hpp"

namespace cyclerw {

// cpp_int keeps small magnitudes inline and grows on overflow.
using Integer = boost::multiprecision::cpp_int;

enum class SemiringKind { Natural, Tropical, Arctic };

std::string_view to_string(SemiringKind k);
std::optional<SemiringKind> parse_semiring(std::string_view s);

class Value {
 public:
  enum class Tag : std::uint8_t { Finite, PosInf, NegInf };

  Value() = default;
  Value(long long n) : n_(n) {}  // NOLINT(google-explicit-constructor)
  explicit Value(Integer n) : n_(std::move(n)) {}
  static Value pos_inf() { return Value(Tag::PosInf); }
  static Value neg_inf() { return Value(Tag::NegInf); }

  Tag tag() const { return tag_; }
  bool finite() const { return tag_ == Tag::Finite; }
  const Integer& number() const { return n_; }
  std::string str() const;
  static Value parse(std::string_view s);

  friend bool operator==(const Value& a, const Value& b) {
    return a.tag_ == b.tag_ && (a.tag_ != Tag::Finite || a.n_ == b.n_);
  }

 private:
  explicit Value(Tag t) : tag_(t) {}
  Tag tag_ = Tag::Finite;
  Integer n_ = 0;
};

Value zero(SemiringKind k);
Value one(SemiringKind k);
Value add(SemiringKind k, const Value& a, const Value& b);
Value mul(SemiringKind k, const Value& a, const Value& b);
// Well-founded element order of the kind; infinity is largest for Tropical
// and smallest for Arctic.
bool element_gt(SemiringKind k, const Value& a, const Value& b);
bool element_ge(SemiringKind k, const Value& a, const Value& b);
bool legal(SemiringKind k, const Value& v);

class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim, Value fill = Value{}) : dim_(dim), e_(dim * dim, fill) {}
  Matrix(std::size_t dim, std::vector<Value> entries);

  std::size_t dim() const { return dim_; }
  Value& at(std::size_t i, std::size_t j) { return e_[i * dim_ + j]; }
  const Value& at(std::size_t i, std::size_t j) const { return e_[i * dim_ + j]; }
  const std::vector<Value>& entries() const { return e_; }
  std::string str() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Value> e_;
};

Matrix identity(SemiringKind k, std::size_t d);
Matrix mat_mul(SemiringKind k, const Matrix& A, const Matrix& B);
Value trace(SemiringKind k, const Matrix& A);
bool mat_gt(SemiringKind k, const Matrix& A, const Matrix& B);
bool mat_ge(SemiringKind k, const Matrix& A, const Matrix& B);
// Membership in the set of admissible matrices (constraint on the top-left entry).
bool in_domain(SemiringKind k, const Matrix& A);

class Interpretation {
 public:
  Interpretation(SemiringKind kind, std::size_t dim) : kind_(kind), dim_(dim) {}

  SemiringKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  // Throws std::invalid_argument when the matrix is not admissible.
  void set(Symbol s, Matrix m);
  bool has(Symbol s) const { return s.id < m_.size() && m_[s.id].has_value(); }
  const Matrix& get(Symbol s) const;
  std::vector<Symbol> domain() const;

 private:
  SemiringKind kind_;
  std::size_t dim_;
  std::vector<std::optional<Matrix>> m_;
};

Matrix interpret(const Interpretation& I, std::span<const Symbol> w);

struct RemovalReport {
  std::vector<std::size_t> strictly;
  std::vector<std::size_t> weakly;
  std::vector<std::size_t> failed;

  // At least one strict rule decreases and nothing fails.
  bool valid_removal(const Srs& problem) const;
};

RemovalReport check_removal(const Interpretation& I, const Srs& problem);

struct Affine {
  Integer a = 1;
  Integer b = 0;
  friend bool operator==(const Affine&, const Affine&) = default;
};

// f after g
Affine compose(const Affine& f, const Affine& g);

class AffineInterpretation {
 public:
  void set(Symbol s, Affine f);
  const Affine& get(Symbol s) const;
  bool has(Symbol s) const { return s.id < f_.size() && f_[s.id].has_value(); }

 private:
  std::vector<std::optional<Affine>> f_;
};

// Leftmost symbol applied outermost.
Affine evaluate(const AffineInterpretation& s, std::span<const Symbol> w);
RemovalReport check_affine(const AffineInterpretation& s, const Srs& R);

}  // namespace cyclerw
