#pragma once

// Exact coefficient arithmetic and exact dense linear algebra.
//
// Three scalar kinds, closed under the operations each supports:
//   Rational  — arbitrary-precision p/q, always normalized (gcd 1, q > 0)
//   MultiPoly — multivariate polynomials over Rational, graded-lex term order
//   RatFunc   — quotients of MultiPoly, reduced by univariate gcd + content
//
// Matrices are homogeneous in one scalar kind; mixing kinds is a construction
// error. Determinants use fraction-free (Bareiss) elimination so polynomial
// entries never leave the polynomial ring; kernels require a field kind.
// Everything is immutable after construction and safe to share across threads.

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace tenv {

using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Rational
// ---------------------------------------------------------------------------

class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long long n) : v_(n) {}  // NOLINT: implicit by design
  explicit Rational(const BigInt& n) : v_(n) {}
  Rational(const BigInt& num, const BigInt& den);

  // Accepts "p", "-p", "p/q" with optional whitespace; rejects everything else.
  static std::optional<Rational> parse(const std::string& text);

  BigInt numerator() const { return boost::multiprecision::numerator(v_); }
  BigInt denominator() const { return boost::multiprecision::denominator(v_); }

  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }
  bool is_integer() const { return denominator() == 1; }

  Rational operator-() const;
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;  // throws ContractError on /0
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  bool operator==(const Rational& o) const { return v_ == o.v_; }
  bool operator!=(const Rational& o) const { return v_ != o.v_; }
  bool operator<(const Rational& o) const { return v_ < o.v_; }
  bool operator<=(const Rational& o) const { return v_ <= o.v_; }
  bool operator>(const Rational& o) const { return v_ > o.v_; }
  bool operator>=(const Rational& o) const { return v_ >= o.v_; }

  // "p" when integral, "p/q" otherwise; sign on the numerator.
  std::string str() const;

 private:
  boost::multiprecision::cpp_rational v_;
};

// ---------------------------------------------------------------------------
// MultiPoly
// ---------------------------------------------------------------------------

// Exponent vector, parallel to the polynomial's variable list.
using Monomial = std::vector<unsigned>;

// Graded lexicographic: lower total degree first; ties broken by the first
// differing exponent (smaller exponent on the earlier variable sorts first).
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class MultiPoly {
 public:
  using TermMap = std::map<Monomial, Rational, GradedLexLess>;

  MultiPoly() = default;  // the zero polynomial
  explicit MultiPoly(const Rational& constant);
  static MultiPoly variable(const std::string& name);

  const std::vector<std::string>& vars() const { return vars_; }
  const TermMap& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return vars_.empty(); }
  Rational constant_value() const;  // pre: is_constant()
  int total_degree() const;         // -1 for the zero polynomial

  // True when at most one variable occurs; the zero polynomial and constants
  // count as univariate (with no variable).
  bool is_univariate() const { return vars_.size() <= 1; }

  MultiPoly operator-() const;
  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
  MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }
  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }
  MultiPoly pow(unsigned k) const;

  bool operator==(const MultiPoly& o) const {
    return vars_ == o.vars_ && terms_ == o.terms_;
  }
  bool operator!=(const MultiPoly& o) const { return !(*this == o); }

  // Exact quotient; throws ContractError when the division does not come out
  // even. Valid for any monomial order argument because leading terms in a
  // graded order multiply without cancellation.
  static MultiPoly divide_exact(const MultiPoly& a, const MultiPoly& b);

  // Every variable must be bound.
  Rational evaluate(const std::map<std::string, Rational>& point) const;

  // Partial derivative; the variable need not occur (gives zero).
  MultiPoly derivative(const std::string& var) const;

  // Positive gcd of all coefficients (0 for the zero polynomial).
  Rational content() const;

  // Graded-lex descending, explicit signs: "t^3 - 2*t + 1/2".
  std::string str() const;

 private:
  std::vector<std::string> vars_;  // sorted unique; exactly the vars that occur
  TermMap terms_;                  // no zero coefficients

  void normalize();  // drop zero terms, prune unused variables
  static std::pair<MultiPoly, MultiPoly> aligned(const MultiPoly& a,
                                                 const MultiPoly& b);
};

// Univariate helpers (inputs must share a single variable or be constant).
// Division with remainder over the rationals.
std::pair<MultiPoly, MultiPoly> uni_divmod(const MultiPoly& a,
                                           const MultiPoly& b);
// Monic gcd (1 for coprime/constant inputs, 0 only when both are 0).
MultiPoly uni_gcd(const MultiPoly& a, const MultiPoly& b);

// ---------------------------------------------------------------------------
// RatFunc
// ---------------------------------------------------------------------------

class RatFunc {
 public:
  RatFunc() : num_(), den_(Rational(1)) {}
  explicit RatFunc(const Rational& c) : num_(MultiPoly(c)), den_(Rational(1)) {}
  explicit RatFunc(const MultiPoly& p) : num_(p), den_(Rational(1)) {}
  RatFunc(const MultiPoly& num, const MultiPoly& den);  // den != 0

  const MultiPoly& numerator() const { return num_; }
  const MultiPoly& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;

  RatFunc operator-() const;
  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;  // throws ContractError on /0
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }

  // Cross-multiplication, independent of reduction.
  bool operator==(const RatFunc& o) const;
  bool operator!=(const RatFunc& o) const { return !(*this == o); }

  Rational evaluate(const std::map<std::string, Rational>& point) const;

  // "num" when the denominator is 1, else "(num)/(den)".
  std::string str() const;

 private:
  MultiPoly num_, den_;
  void normalize();
};

// ---------------------------------------------------------------------------
// Scalar: closed sum of the three kinds
// ---------------------------------------------------------------------------

enum class ScalarKind { rational, poly, ratfunc };

std::string kind_name(ScalarKind k);

class Scalar {
 public:
  Scalar() : v_(Rational(0)) {}
  Scalar(const Rational& r) : v_(r) {}   // NOLINT: implicit by design
  Scalar(const MultiPoly& p) : v_(p) {}  // NOLINT
  Scalar(const RatFunc& f) : v_(f) {}    // NOLINT

  ScalarKind kind() const { return static_cast<ScalarKind>(v_.index()); }

  static Scalar zero(ScalarKind k) { return embed(k, Rational(0)); }
  static Scalar one(ScalarKind k) { return embed(k, Rational(1)); }
  // The canonical image of a rational constant in the given kind.
  static Scalar embed(ScalarKind k, const Rational& c);

  const Rational& as_rational() const;
  const MultiPoly& as_poly() const;
  const RatFunc& as_ratfunc() const;

  bool is_zero() const;
  bool is_one() const;

  Scalar operator-() const;
  Scalar operator+(const Scalar& o) const;  // kinds must match
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  // Field division: defined for rational and ratfunc kinds only.
  Scalar operator/(const Scalar& o) const;

  // Exact quotient in the underlying ring (polynomials divide exactly or
  // throw); used by fraction-free elimination.
  static Scalar divide_exact(const Scalar& a, const Scalar& b);

  // Promote to the field of fractions: rational stays, poly becomes ratfunc.
  Scalar to_field() const;

  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  std::string str() const;

 private:
  std::variant<Rational, MultiPoly, RatFunc> v_;
  void require_kind(const Scalar& o, const char* op) const;
};

// ---------------------------------------------------------------------------
// DenseMatrix
// ---------------------------------------------------------------------------

class DenseMatrix {
 public:
  DenseMatrix(size_t rows, size_t cols, ScalarKind kind);
  static DenseMatrix identity(size_t n, ScalarKind kind);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  ScalarKind kind() const { return kind_; }

  const Scalar& at(size_t i, size_t j) const;
  void set(size_t i, size_t j, const Scalar& s);  // kind-checked

  DenseMatrix operator*(const DenseMatrix& o) const;
  DenseMatrix operator+(const DenseMatrix& o) const;
  DenseMatrix transpose() const;
  DenseMatrix scaled(const Scalar& s) const;

  bool operator==(const DenseMatrix& o) const;

  // Entries promoted to the field of fractions (poly -> ratfunc).
  DenseMatrix to_field() const;

 private:
  size_t rows_, cols_;
  ScalarKind kind_;
  std::vector<Scalar> e_;
};

// Exact determinant via fraction-free elimination; requires a square matrix.
Scalar determinant(const DenseMatrix& m);

// Echelonized basis of the right kernel { v : m v = 0 }; each basis vector is
// scaled so its first nonzero entry is 1. Field kinds only.
std::vector<std::vector<Scalar>> kernel_basis(const DenseMatrix& m);

// Row rank over a field kind.
size_t rank(const DenseMatrix& m);

// Complete set of rational roots with multiplicities. Requires a nonzero
// univariate polynomial; throws ContractError("identically zero") on 0.
std::map<Rational, int> rational_roots(const MultiPoly& p);

}  // namespace tenv
