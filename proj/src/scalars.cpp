#include "scalars.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace tenv {

// ---------------------------------------------------------------------------
// Rational
// ---------------------------------------------------------------------------

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw ContractError("rational with zero denominator");
  // cpp_rational's two-argument constructor requires a positive denominator.
  if (den < 0)
    v_ = boost::multiprecision::cpp_rational(-num, -den);
  else
    v_ = boost::multiprecision::cpp_rational(num, den);
}

std::optional<Rational> Rational::parse(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) return std::nullopt;
  auto parse_int = [](const std::string& part) -> std::optional<BigInt> {
    if (part.empty()) return std::nullopt;
    size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size()) return std::nullopt;
    for (size_t j = i; j < part.size(); ++j)
      if (!std::isdigit(static_cast<unsigned char>(part[j]))) return std::nullopt;
    return BigInt(part[0] == '+' ? part.substr(1) : part);
  };
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    auto n = parse_int(s);
    if (!n) return std::nullopt;
    return Rational(*n);
  }
  auto n = parse_int(s.substr(0, slash));
  auto d = parse_int(s.substr(slash + 1));
  if (!n || !d || *d == 0) return std::nullopt;
  return Rational(*n, *d);
}

Rational Rational::operator-() const {
  Rational r;
  r.v_ = -v_;
  return r;
}

Rational Rational::operator+(const Rational& o) const {
  Rational r;
  r.v_ = v_ + o.v_;
  return r;
}

Rational Rational::operator-(const Rational& o) const {
  Rational r;
  r.v_ = v_ - o.v_;
  return r;
}

Rational Rational::operator*(const Rational& o) const {
  Rational r;
  r.v_ = v_ * o.v_;
  return r;
}

Rational Rational::operator/(const Rational& o) const {
  if (o.is_zero()) throw ContractError("rational division by zero");
  Rational r;
  r.v_ = v_ / o.v_;
  return r;
}

std::string Rational::str() const {
  std::string s = numerator().str();
  if (!is_integer()) s += "/" + denominator().str();
  return s;
}

// ---------------------------------------------------------------------------
// MultiPoly
// ---------------------------------------------------------------------------

bool GradedLexLess::operator()(const Monomial& a, const Monomial& b) const {
  unsigned da = 0, db = 0;
  for (unsigned e : a) da += e;
  for (unsigned e : b) db += e;
  if (da != db) return da < db;
  // Same total degree: the monomial with the smaller exponent on the first
  // differing variable sorts first (so the graded-lex largest term is last).
  for (size_t i = 0; i < a.size() && i < b.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return a.size() < b.size();
}

MultiPoly::MultiPoly(const Rational& constant) {
  if (!constant.is_zero()) terms_[{}] = constant;
}

MultiPoly MultiPoly::variable(const std::string& name) {
  if (name.empty()) throw ContractError("empty variable name");
  MultiPoly p;
  p.vars_ = {name};
  p.terms_[{1u}] = Rational(1);
  return p;
}

Rational MultiPoly::constant_value() const {
  if (!is_constant()) throw ContractError("constant_value on a non-constant");
  if (terms_.empty()) return Rational(0);
  return terms_.begin()->second;
}

int MultiPoly::total_degree() const {
  if (terms_.empty()) return -1;
  const Monomial& top = terms_.rbegin()->first;
  int d = 0;
  for (unsigned e : top) d += static_cast<int>(e);
  return d;
}

void MultiPoly::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();)
    it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
  // Prune variables that no longer occur so equal polynomials are structurally
  // identical regardless of how they were computed.
  std::vector<bool> used(vars_.size(), false);
  for (const auto& [m, c] : terms_)
    for (size_t i = 0; i < m.size(); ++i)
      if (m[i] > 0) used[i] = true;
  if (std::all_of(used.begin(), used.end(), [](bool b) { return b; })) return;
  std::vector<std::string> kept;
  std::vector<size_t> keep_idx;
  for (size_t i = 0; i < vars_.size(); ++i)
    if (used[i]) {
      kept.push_back(vars_[i]);
      keep_idx.push_back(i);
    }
  TermMap pruned;
  for (const auto& [m, c] : terms_) {
    Monomial nm(keep_idx.size());
    for (size_t i = 0; i < keep_idx.size(); ++i) nm[i] = m[keep_idx[i]];
    pruned[nm] = c;
  }
  vars_ = std::move(kept);
  terms_ = std::move(pruned);
}

// Rewrite both polynomials over the union of their variable lists.
std::pair<MultiPoly, MultiPoly> MultiPoly::aligned(const MultiPoly& a,
                                                   const MultiPoly& b) {
  if (a.vars_ == b.vars_) return {a, b};
  std::vector<std::string> all;
  std::merge(a.vars_.begin(), a.vars_.end(), b.vars_.begin(), b.vars_.end(),
             std::back_inserter(all));
  all.erase(std::unique(all.begin(), all.end()), all.end());
  auto remap = [&all](const MultiPoly& p) {
    std::vector<size_t> pos(p.vars_.size());
    for (size_t i = 0; i < p.vars_.size(); ++i)
      pos[i] = static_cast<size_t>(
          std::lower_bound(all.begin(), all.end(), p.vars_[i]) - all.begin());
    MultiPoly out;
    out.vars_ = all;
    for (const auto& [m, c] : p.terms_) {
      Monomial nm(all.size(), 0);
      for (size_t i = 0; i < m.size(); ++i) nm[pos[i]] = m[i];
      out.terms_[nm] = c;
    }
    return out;
  };
  return {remap(a), remap(b)};
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  auto [a, b] = aligned(*this, o);
  for (const auto& [m, c] : b.terms_) {
    auto it = a.terms_.find(m);
    if (it == a.terms_.end())
      a.terms_[m] = c;
    else
      it->second += c;
  }
  a.normalize();
  return a;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const { return *this + (-o); }

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  auto [a, b] = aligned(*this, o);
  MultiPoly r;
  r.vars_ = a.vars_;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m(ma.size());
      for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      auto it = r.terms_.find(m);
      if (it == r.terms_.end())
        r.terms_[m] = ca * cb;
      else
        it->second += ca * cb;
    }
  r.normalize();
  return r;
}

MultiPoly MultiPoly::pow(unsigned k) const {
  MultiPoly r(Rational(1));
  MultiPoly base = *this;
  while (k > 0) {
    if (k & 1u) r *= base;
    base *= base;
    k >>= 1u;
  }
  return r;
}

MultiPoly MultiPoly::divide_exact(const MultiPoly& a, const MultiPoly& b) {
  if (b.is_zero()) throw ContractError("polynomial division by zero");
  if (a.is_zero()) return MultiPoly();
  auto [ra, rb] = aligned(a, b);
  // Leading-term reduction in the shared frame. Because the order is graded,
  // leading terms multiply without cancellation, so exactness is equivalent
  // to every reduction step going through and the remainder vanishing.
  TermMap rem = ra.terms_;
  const TermMap& den = rb.terms_;
  const auto& lt_d = *den.rbegin();
  TermMap quo;
  while (!rem.empty()) {
    const auto lt_r = *rem.rbegin();
    Monomial m(lt_r.first.size());
    for (size_t i = 0; i < m.size(); ++i) {
      if (lt_r.first[i] < lt_d.first[i])
        throw ContractError("inexact polynomial division");
      m[i] = lt_r.first[i] - lt_d.first[i];
    }
    Rational c = lt_r.second / lt_d.second;
    quo[m] = c;
    for (const auto& [md, cd] : den) {
      Monomial mm(m.size());
      for (size_t i = 0; i < m.size(); ++i) mm[i] = m[i] + md[i];
      auto it = rem.find(mm);
      if (it == rem.end()) {
        rem[mm] = -(c * cd);
      } else {
        it->second -= c * cd;
        if (it->second.is_zero()) rem.erase(it);
      }
    }
  }
  MultiPoly q;
  q.vars_ = ra.vars_;
  q.terms_ = std::move(quo);
  q.normalize();
  return q;
}

Rational MultiPoly::evaluate(
    const std::map<std::string, Rational>& point) const {
  for (const auto& v : vars_)
    if (!point.count(v))
      throw ContractError("evaluate: unbound variable " + v);
  Rational total(0);
  for (const auto& [m, c] : terms_) {
    Rational term = c;
    for (size_t i = 0; i < m.size(); ++i) {
      const Rational& x = point.at(vars_[i]);
      for (unsigned e = 0; e < m[i]; ++e) term *= x;
    }
    total += term;
  }
  return total;
}

MultiPoly MultiPoly::derivative(const std::string& var) const {
  auto it = std::find(vars_.begin(), vars_.end(), var);
  if (it == vars_.end()) return MultiPoly();
  size_t idx = static_cast<size_t>(it - vars_.begin());
  MultiPoly r;
  r.vars_ = vars_;
  for (const auto& [m, c] : terms_) {
    if (m[idx] == 0) continue;
    Monomial nm = m;
    nm[idx] -= 1;
    r.terms_[nm] = c * Rational(static_cast<long long>(m[idx]));
  }
  r.normalize();
  return r;
}

Rational MultiPoly::content() const {
  // Positive gcd of the coefficients: gcd of numerators over lcm of
  // denominators once everything is put over a common denominator.
  if (terms_.empty()) return Rational(0);
  BigInt num_gcd = 0, den_lcm = 1;
  for (const auto& [m, c] : terms_) {
    num_gcd = boost::multiprecision::gcd(num_gcd,
                                         boost::multiprecision::abs(c.numerator()));
    den_lcm = boost::multiprecision::lcm(den_lcm, c.denominator());
  }
  return Rational(num_gcd, den_lcm);
}

std::string MultiPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  // Graded-lex descending.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    bool negative = c < Rational(0);
    Rational abs_c = negative ? -c : c;
    if (first) {
      if (negative) out << "-";
      first = false;
    } else {
      out << (negative ? " - " : " + ");
    }
    std::string mono;
    for (size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars_[i];
      if (m[i] > 1) mono += "^" + std::to_string(m[i]);
    }
    if (mono.empty()) {
      out << abs_c.str();
    } else {
      if (!abs_c.is_one()) out << abs_c.str() << "*";
      out << mono;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Univariate helpers
// ---------------------------------------------------------------------------

namespace {

// The shared variable of a univariate computation, if any.
std::optional<std::string> common_variable(const MultiPoly& a,
                                           const MultiPoly& b) {
  if (!a.is_univariate() || !b.is_univariate())
    throw ContractError("univariate operation on multivariate input");
  if (!a.vars().empty() && !b.vars().empty() && a.vars() != b.vars())
    throw ContractError("univariate operation on mixed variables");
  if (!a.vars().empty()) return a.vars()[0];
  if (!b.vars().empty()) return b.vars()[0];
  return std::nullopt;
}

// Dense coefficient vector c[0..deg] of a univariate polynomial.
std::vector<Rational> uni_coeffs(const MultiPoly& p) {
  std::vector<Rational> c(static_cast<size_t>(std::max(p.total_degree(), 0)) + 1,
                          Rational(0));
  if (p.is_zero()) return {Rational(0)};
  for (const auto& [m, coef] : p.terms())
    c[m.empty() ? 0 : m[0]] = coef;
  return c;
}

MultiPoly uni_from_coeffs(const std::vector<Rational>& c,
                          const std::optional<std::string>& var) {
  MultiPoly p;
  MultiPoly x = var ? MultiPoly::variable(*var) : MultiPoly(Rational(1));
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i].is_zero()) continue;
    p += var ? MultiPoly(c[i]) * x.pow(static_cast<unsigned>(i))
             : MultiPoly(c[i]);
  }
  return p;
}

}  // namespace

std::pair<MultiPoly, MultiPoly> uni_divmod(const MultiPoly& a,
                                           const MultiPoly& b) {
  if (b.is_zero()) throw ContractError("polynomial division by zero");
  auto var = common_variable(a, b);
  std::vector<Rational> r = uni_coeffs(a), d = uni_coeffs(b);
  while (!d.empty() && d.back().is_zero()) d.pop_back();
  std::vector<Rational> q(r.size(), Rational(0));
  while (r.size() >= d.size() && !(r.size() == 1 && r[0].is_zero())) {
    while (!r.empty() && r.back().is_zero()) r.pop_back();
    if (r.size() < d.size() || r.empty()) break;
    Rational f = r.back() / d.back();
    size_t shift = r.size() - d.size();
    q[shift] = f;
    for (size_t i = 0; i < d.size(); ++i) r[shift + i] -= f * d[i];
  }
  return {uni_from_coeffs(q, var), uni_from_coeffs(r, var)};
}

MultiPoly uni_gcd(const MultiPoly& a, const MultiPoly& b) {
  common_variable(a, b);  // validates shapes
  MultiPoly x = a, y = b;
  while (!y.is_zero()) {
    auto [q, r] = uni_divmod(x, y);
    x = y;
    y = r;
  }
  if (x.is_zero()) return x;
  // Normalize monic.
  Rational lead = x.terms().rbegin()->second;
  return MultiPoly::divide_exact(x, MultiPoly(lead));
}

// ---------------------------------------------------------------------------
// RatFunc
// ---------------------------------------------------------------------------

RatFunc::RatFunc(const MultiPoly& num, const MultiPoly& den)
    : num_(num), den_(den) {
  if (den_.is_zero()) throw ContractError("rational function with zero denominator");
  normalize();
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = MultiPoly(Rational(1));
    return;
  }
  // Cancel common factors when both parts live in (at most) one shared
  // variable; multivariate pairs are only scaled, not factored.
  bool both_uni = num_.is_univariate() && den_.is_univariate() &&
                  (num_.vars().empty() || den_.vars().empty() ||
                   num_.vars() == den_.vars());
  if (both_uni) {
    MultiPoly g = uni_gcd(num_, den_);
    if (!g.is_constant() || !g.constant_value().is_one()) {
      num_ = MultiPoly::divide_exact(num_, g);
      den_ = MultiPoly::divide_exact(den_, g);
    }
  }
  // Canonical scale: denominator monic in its graded-lex leading term.
  Rational lead = den_.terms().rbegin()->second;
  if (!lead.is_one()) {
    num_ = MultiPoly::divide_exact(num_, MultiPoly(lead));
    den_ = MultiPoly::divide_exact(den_, MultiPoly(lead));
  }
}

bool RatFunc::is_one() const { return num_ == den_; }

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator*(const RatFunc& o) const {
  return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
  if (o.is_zero()) throw ContractError("rational function division by zero");
  return RatFunc(num_ * o.den_, den_ * o.num_);
}

bool RatFunc::operator==(const RatFunc& o) const {
  return num_ * o.den_ == o.num_ * den_;
}

Rational RatFunc::evaluate(const std::map<std::string, Rational>& point) const {
  Rational d = den_.evaluate(point);
  if (d.is_zero()) throw ContractError("rational function evaluated at a pole");
  return num_.evaluate(point) / d;
}

std::string RatFunc::str() const {
  if (den_.is_constant() && den_.constant_value().is_one()) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

// ---------------------------------------------------------------------------
// Scalar
// ---------------------------------------------------------------------------

std::string kind_name(ScalarKind k) {
  switch (k) {
    case ScalarKind::rational: return "rational";
    case ScalarKind::poly: return "poly";
    case ScalarKind::ratfunc: return "ratfunc";
  }
  return "?";
}

Scalar Scalar::embed(ScalarKind k, const Rational& c) {
  switch (k) {
    case ScalarKind::rational: return Scalar(c);
    case ScalarKind::poly: return Scalar(MultiPoly(c));
    case ScalarKind::ratfunc: return Scalar(RatFunc(c));
  }
  throw ContractError("unknown scalar kind");
}

const Rational& Scalar::as_rational() const {
  if (kind() != ScalarKind::rational)
    throw ContractError("scalar is not rational");
  return std::get<Rational>(v_);
}

const MultiPoly& Scalar::as_poly() const {
  if (kind() != ScalarKind::poly) throw ContractError("scalar is not a polynomial");
  return std::get<MultiPoly>(v_);
}

const RatFunc& Scalar::as_ratfunc() const {
  if (kind() != ScalarKind::ratfunc)
    throw ContractError("scalar is not a rational function");
  return std::get<RatFunc>(v_);
}

bool Scalar::is_zero() const {
  return std::visit([](const auto& x) { return x.is_zero(); }, v_);
}

bool Scalar::is_one() const {
  switch (kind()) {
    case ScalarKind::rational: return as_rational().is_one();
    case ScalarKind::poly:
      return as_poly().is_constant() && !as_poly().is_zero() &&
             as_poly().constant_value().is_one();
    case ScalarKind::ratfunc: return as_ratfunc().is_one();
  }
  return false;
}

void Scalar::require_kind(const Scalar& o, const char* op) const {
  if (kind() != o.kind())
    throw ContractError(std::string("scalar kind mismatch in ") + op + ": " +
                        kind_name(kind()) + " vs " + kind_name(o.kind()));
}

Scalar Scalar::operator-() const {
  return std::visit([](const auto& x) { return Scalar(-x); }, v_);
}

Scalar Scalar::operator+(const Scalar& o) const {
  require_kind(o, "+");
  switch (kind()) {
    case ScalarKind::rational: return Scalar(as_rational() + o.as_rational());
    case ScalarKind::poly: return Scalar(as_poly() + o.as_poly());
    case ScalarKind::ratfunc: return Scalar(as_ratfunc() + o.as_ratfunc());
  }
  throw ContractError("unknown scalar kind");
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
  require_kind(o, "*");
  switch (kind()) {
    case ScalarKind::rational: return Scalar(as_rational() * o.as_rational());
    case ScalarKind::poly: return Scalar(as_poly() * o.as_poly());
    case ScalarKind::ratfunc: return Scalar(as_ratfunc() * o.as_ratfunc());
  }
  throw ContractError("unknown scalar kind");
}

Scalar Scalar::operator/(const Scalar& o) const {
  require_kind(o, "/");
  switch (kind()) {
    case ScalarKind::rational: return Scalar(as_rational() / o.as_rational());
    case ScalarKind::ratfunc: return Scalar(as_ratfunc() / o.as_ratfunc());
    case ScalarKind::poly:
      throw ContractError("field division on polynomial scalars; promote to ratfunc");
  }
  throw ContractError("unknown scalar kind");
}

Scalar Scalar::divide_exact(const Scalar& a, const Scalar& b) {
  a.require_kind(b, "divide_exact");
  switch (a.kind()) {
    case ScalarKind::rational: return Scalar(a.as_rational() / b.as_rational());
    case ScalarKind::poly:
      return Scalar(MultiPoly::divide_exact(a.as_poly(), b.as_poly()));
    case ScalarKind::ratfunc: return Scalar(a.as_ratfunc() / b.as_ratfunc());
  }
  throw ContractError("unknown scalar kind");
}

Scalar Scalar::to_field() const {
  if (kind() == ScalarKind::poly) return Scalar(RatFunc(as_poly()));
  return *this;
}

bool Scalar::operator==(const Scalar& o) const {
  if (kind() != o.kind()) return false;
  switch (kind()) {
    case ScalarKind::rational: return as_rational() == o.as_rational();
    case ScalarKind::poly: return as_poly() == o.as_poly();
    case ScalarKind::ratfunc: return as_ratfunc() == o.as_ratfunc();
  }
  return false;
}

std::string Scalar::str() const {
  return std::visit([](const auto& x) { return x.str(); }, v_);
}

// ---------------------------------------------------------------------------
// DenseMatrix
// ---------------------------------------------------------------------------

DenseMatrix::DenseMatrix(size_t rows, size_t cols, ScalarKind kind)
    : rows_(rows), cols_(cols), kind_(kind),
      e_(rows * cols, Scalar::zero(kind)) {}

DenseMatrix DenseMatrix::identity(size_t n, ScalarKind kind) {
  DenseMatrix m(n, n, kind);
  for (size_t i = 0; i < n; ++i) m.set(i, i, Scalar::one(kind));
  return m;
}

const Scalar& DenseMatrix::at(size_t i, size_t j) const {
  if (i >= rows_ || j >= cols_) throw ContractError("matrix index out of range");
  return e_[i * cols_ + j];
}

void DenseMatrix::set(size_t i, size_t j, const Scalar& s) {
  if (i >= rows_ || j >= cols_) throw ContractError("matrix index out of range");
  if (s.kind() != kind_)
    throw ContractError("matrix entry kind mismatch: matrix is " +
                        kind_name(kind_) + ", entry is " + kind_name(s.kind()));
  e_[i * cols_ + j] = s;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& o) const {
  if (cols_ != o.rows_) throw ContractError("matrix product shape mismatch");
  if (kind_ != o.kind_) throw ContractError("matrix product kind mismatch");
  DenseMatrix r(rows_, o.cols_, kind_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      const Scalar& a = at(i, k);
      if (a.is_zero()) continue;
      for (size_t j = 0; j < o.cols_; ++j)
        r.e_[i * o.cols_ + j] += a * o.at(k, j);
    }
  return r;
}

DenseMatrix DenseMatrix::operator+(const DenseMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || kind_ != o.kind_)
    throw ContractError("matrix sum shape/kind mismatch");
  DenseMatrix r = *this;
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
  return r;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix r(cols_, rows_, kind_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) r.set(j, i, at(i, j));
  return r;
}

DenseMatrix DenseMatrix::scaled(const Scalar& s) const {
  DenseMatrix r = *this;
  for (auto& x : r.e_) x = x * s;
  return r;
}

bool DenseMatrix::operator==(const DenseMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && kind_ == o.kind_ && e_ == o.e_;
}

DenseMatrix DenseMatrix::to_field() const {
  ScalarKind k =
      kind_ == ScalarKind::poly ? ScalarKind::ratfunc : kind_;
  DenseMatrix r(rows_, cols_, k);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) r.set(i, j, at(i, j).to_field());
  return r;
}

Scalar determinant(const DenseMatrix& m) {
  if (m.rows() != m.cols())
    throw ContractError("determinant of a non-square matrix");
  size_t n = m.rows();
  if (n == 0) return Scalar::one(m.kind());
  // Fraction-free elimination: every division below is exact in the
  // underlying ring, so polynomial matrices never leave the polynomial ring.
  std::vector<std::vector<Scalar>> a(n, std::vector<Scalar>(n, Scalar::zero(m.kind())));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) a[i][j] = m.at(i, j);
  Scalar prev = Scalar::one(m.kind());
  bool negate = false;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k].is_zero()) {
      size_t swap_row = k + 1;
      while (swap_row < n && a[swap_row][k].is_zero()) ++swap_row;
      if (swap_row == n) return Scalar::zero(m.kind());
      std::swap(a[k], a[swap_row]);
      negate = !negate;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j)
        a[i][j] = Scalar::divide_exact(a[i][j] * a[k][k] - a[i][k] * a[k][j],
                                       prev);
      a[i][k] = Scalar::zero(m.kind());
    }
    prev = a[k][k];
  }
  Scalar det = a[n - 1][n - 1];
  return negate ? -det : det;
}

namespace {

// Reduced row echelon form in place; returns pivot column indices.
// Requires field scalars.
std::vector<size_t> rref_in_place(std::vector<std::vector<Scalar>>& a,
                                  ScalarKind kind) {
  std::vector<size_t> pivots;
  if (a.empty()) return pivots;
  size_t rows = a.size(), cols = a[0].size(), r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[r], a[p]);
    Scalar inv = Scalar::one(kind) / a[r][c];
    for (size_t j = c; j < cols; ++j) a[r][j] = a[r][j] * inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      Scalar f = a[i][c];
      for (size_t j = c; j < cols; ++j) a[i][j] = a[i][j] - f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::vector<std::vector<Scalar>> to_rows(const DenseMatrix& m) {
  std::vector<std::vector<Scalar>> a(m.rows(),
                                     std::vector<Scalar>(m.cols(), Scalar::zero(m.kind())));
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) a[i][j] = m.at(i, j);
  return a;
}

void require_field(const DenseMatrix& m, const char* what) {
  if (m.kind() == ScalarKind::poly)
    throw ContractError(std::string(what) +
                        " requires a field scalar kind (rational or ratfunc)");
}

}  // namespace

std::vector<std::vector<Scalar>> kernel_basis(const DenseMatrix& m) {
  require_field(m, "kernel_basis");
  auto a = to_rows(m);
  auto pivots = rref_in_place(a, m.kind());
  std::vector<bool> is_pivot(m.cols(), false);
  for (size_t c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Scalar>> basis;
  for (size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Scalar> v(m.cols(), Scalar::zero(m.kind()));
    v[f] = Scalar::one(m.kind());
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][f];
    // Scale so the first nonzero entry is 1.
    for (auto& x : v)
      if (!x.is_zero()) {
        Scalar inv = Scalar::one(m.kind()) / x;
        for (auto& y : v) y = y * inv;
        break;
      }
    basis.push_back(std::move(v));
  }
  return basis;
}

size_t rank(const DenseMatrix& m) {
  require_field(m, "rank");
  auto a = to_rows(m);
  return rref_in_place(a, m.kind()).size();
}

// ---------------------------------------------------------------------------
// Rational roots
// ---------------------------------------------------------------------------

namespace {

// All positive divisors, via trial division. The inputs seen here are tiny
// (coefficients of square-free parts); a residual factor above the bound is a
// genuine resource problem and is reported as such.
std::vector<BigInt> positive_divisors(BigInt n) {
  if (n < 0) n = -n;
  if (n == 0) throw ContractError("divisors of zero");
  std::map<BigInt, int> fact;
  BigInt d = 2;
  const BigInt bound = 1000000;
  while (d * d <= n && d <= bound) {
    while (n % d == 0) {
      ++fact[d];
      n /= d;
    }
    d += (d == 2) ? 1 : 2;
  }
  if (n > 1) {
    if (n > bound * bound)
      throw ResourceError(
          "coefficient factorization exceeded the trial-division bound");
    ++fact[n];  // remaining cofactor is prime
  }
  std::vector<BigInt> divs = {1};
  for (const auto& [p, e] : fact) {
    size_t count = divs.size();
    BigInt pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (size_t j = 0; j < count; ++j) divs.push_back(divs[j] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

}  // namespace

std::map<Rational, int> rational_roots(const MultiPoly& p) {
  if (p.is_zero())
    throw ContractError("identically zero: every parameter is a root");
  if (!p.is_univariate())
    throw ContractError("rational_roots requires a univariate polynomial");
  std::map<Rational, int> roots;
  if (p.is_constant()) return roots;
  const std::string var = p.vars()[0];
  auto eval_at = [&](const MultiPoly& q, const Rational& r) {
    return q.evaluate({{var, r}});
  };
  // Multiplicity by exact deflation against the original polynomial.
  auto multiplicity = [&](const Rational& r) {
    MultiPoly lin = MultiPoly::variable(var) - MultiPoly(r);
    MultiPoly q = p;
    int mult = 0;
    while (true) {
      auto [quo, rem] = uni_divmod(q, lin);
      if (!rem.is_zero()) break;
      ++mult;
      q = quo;
      if (q.is_constant()) break;
    }
    return mult;
  };
  // Root at zero first (keeps the trailing coefficient nonzero below).
  MultiPoly work = p;
  {
    MultiPoly x = MultiPoly::variable(var);
    int k = 0;
    while (!work.is_constant() && eval_at(work, Rational(0)).is_zero()) {
      work = MultiPoly::divide_exact(work, x);
      ++k;
    }
    if (k > 0) roots[Rational(0)] = k;
  }
  if (work.is_constant()) return roots;
  // Square-free part keeps the candidate divisor sets small.
  MultiPoly sf = MultiPoly::divide_exact(work, uni_gcd(work, work.derivative(var)));
  // Integerize: scale by the lcm of coefficient denominators, then strip content.
  BigInt den_lcm = 1;
  for (const auto& [m, c] : sf.terms())
    den_lcm = boost::multiprecision::lcm(den_lcm, c.denominator());
  sf = sf * MultiPoly(Rational(den_lcm));
  Rational content = sf.content();
  sf = MultiPoly::divide_exact(sf, MultiPoly(content));
  BigInt trailing = 0, leading = 0;
  for (const auto& [m, c] : sf.terms()) {
    if (m.empty() || m[0] == 0) trailing = c.numerator();
    if (static_cast<int>(m.empty() ? 0 : m[0]) == sf.total_degree())
      leading = c.numerator();
  }
  for (const BigInt& num : positive_divisors(trailing)) {
    for (const BigInt& den : positive_divisors(leading)) {
      for (int sign : {1, -1}) {
        Rational cand(sign * num, den);
        if (roots.count(cand)) continue;
        if (eval_at(sf, cand).is_zero()) roots[cand] = multiplicity(cand);
      }
    }
  }
  return roots;
}

}  // namespace tenv
