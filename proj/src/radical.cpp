#include "radical.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>

namespace tenv {
namespace {

using Vec = std::vector<Scalar>;

void require_field(const DegreeFunction& delta, const char* what) {
  if (delta.scalar_kind() == ScalarKind::poly)
    throw ContractError(
        std::string(what) +
        " requires a field scalar kind (rational coefficients, or rational "
        "functions for a symbolic parameter)");
}

void require_object_compat(const ObjectHandle& x, const DegreeFunction& delta,
                           const char* what) {
  if (x.kind() != delta.backend())
    throw ContractError(std::string(what) +
                        ": degree function backend does not match the object");
  if (x.kind() == BackendKind::vect && x.modulus() != delta.modulus())
    throw ContractError(std::string(what) +
                        ": degree function modulus does not match the object");
}

bool prime(unsigned q) {
  if (q < 2) return false;
  for (unsigned d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Field linear algebra on coordinate vectors
// ---------------------------------------------------------------------------

// In-place reduced row echelon form over a field kind; returns the pivot
// columns. Zero rows are dropped.
std::vector<size_t> rref_rows(std::vector<Vec>& rows) {
  std::vector<size_t> pivots;
  if (rows.empty()) return pivots;
  const size_t ncols = rows[0].size();
  size_t r = 0;
  for (size_t c = 0; c < ncols && r < rows.size(); ++c) {
    size_t sel = r;
    while (sel < rows.size() && rows[sel][c].is_zero()) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    const Scalar inv = Scalar::one(rows[r][c].kind()) / rows[r][c];
    for (Scalar& e : rows[r]) e = e * inv;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      const Scalar f = rows[i][c];
      for (size_t j = c; j < ncols; ++j) rows[i][j] -= f * rows[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r, Vec());
  return pivots;
}

bool is_zero_vec(const Vec& v) {
  for (const Scalar& e : v)
    if (!e.is_zero()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// The quotient algebra End([x]) / 𝒩 in coordinates: the radical is stored
// in reduced row echelon form, its pivot coordinates are eliminated, and
// the complementary coordinates carry the quotient basis.
// ---------------------------------------------------------------------------

struct QuotientAlgebra {
  const EndAlgebra* alg = nullptr;
  ScalarKind kind = ScalarKind::rational;
  std::vector<Vec> rad;
  std::vector<size_t> rad_pivots;
  std::vector<size_t> keep;

  static QuotientAlgebra make(const EndAlgebra& alg,
                              const std::vector<LinearHom>& radical_basis) {
    QuotientAlgebra Q;
    Q.alg = &alg;
    Q.kind = alg.delta.scalar_kind();
    for (const LinearHom& h : radical_basis) Q.rad.push_back(h.coeffs);
    Q.rad_pivots = rref_rows(Q.rad);
    std::set<size_t> piv(Q.rad_pivots.begin(), Q.rad_pivots.end());
    for (size_t j = 0; j < alg.dim(); ++j)
      if (piv.find(j) == piv.end()) Q.keep.push_back(j);
    return Q;
  }

  size_t dim() const { return keep.size(); }

  Vec reduce(Vec full) const {
    for (size_t k = 0; k < rad.size(); ++k) {
      const size_t p = rad_pivots[k];
      if (full[p].is_zero()) continue;
      const Scalar f = full[p];
      for (size_t j = 0; j < full.size(); ++j) full[j] -= f * rad[k][j];
    }
    return full;
  }
  Vec project(const Vec& full) const {
    Vec out;
    out.reserve(keep.size());
    for (size_t j : keep) out.push_back(full[j]);
    return out;
  }
  Vec lift(const Vec& qv) const {
    Vec full(alg->dim(), Scalar::zero(kind));
    for (size_t i = 0; i < keep.size(); ++i) full[keep[i]] = qv[i];
    return full;
  }
  Vec mult(const Vec& a, const Vec& b) const {
    return project(reduce(alg->multiply(lift(a), lift(b))));
  }
  Vec unit() const { return project(reduce(alg->unit())); }
  Vec basis_vector(size_t i) const {
    Vec v(dim(), Scalar::zero(kind));
    v[i] = Scalar::one(kind);
    return v;
  }
};

Vec vec_sub(Vec a, const Vec& b) {
  for (size_t j = 0; j < a.size(); ++j) a[j] -= b[j];
  return a;
}

// Monic minimal polynomial of w inside the unital algebra u·B (unit u),
// found by reducing the Krylov sequence u, w, w², … with combination
// tracking. Returned as coefficients c_0..c_d with c_d = 1.
std::vector<Scalar> cell_minpoly(const QuotientAlgebra& Q, const Vec& u,
                                 const Vec& w) {
  std::vector<Vec> rows;
  std::vector<std::vector<Scalar>> combos;
  std::vector<size_t> pivs;
  Vec cur = u;
  std::vector<Scalar> power{Scalar::one(Q.kind)};
  for (;;) {
    Vec v = cur;
    std::vector<Scalar> combo = power;
    for (size_t k = 0; k < rows.size(); ++k) {
      const Scalar f = v[pivs[k]];
      if (f.is_zero()) continue;
      for (size_t j = 0; j < v.size(); ++j) v[j] -= f * rows[k][j];
      for (size_t j = 0; j < combos[k].size(); ++j)
        combo[j] -= f * combos[k][j];
    }
    size_t p = 0;
    while (p < v.size() && v[p].is_zero()) ++p;
    if (p == v.size()) return combo;
    const Scalar inv = Scalar::one(Q.kind) / v[p];
    for (Scalar& e : v) e = e * inv;
    for (Scalar& e : combo) e = e * inv;
    rows.push_back(std::move(v));
    combos.push_back(std::move(combo));
    pivs.push_back(p);
    if (rows.size() > Q.dim() + 1)
      throw ContractError("minimal polynomial search failed to terminate");
    cur = Q.mult(cur, w);
    power.insert(power.begin(), Scalar::zero(Q.kind));
  }
}

// Synthetic division of a monic coefficient vector by (λ − root).
std::vector<Scalar> deflate(const std::vector<Scalar>& c, const Scalar& root) {
  const size_t d = c.size() - 1;
  std::vector<Scalar> b(d, Scalar::zero(root.kind()));
  b[d - 1] = c[d];
  for (size_t k = d - 1; k > 0; --k) b[k - 1] = c[k] + root * b[k];
  return b;
}

Scalar eval_coeffs(const std::vector<Scalar>& c, const Scalar& at) {
  Scalar acc = Scalar::zero(at.kind());
  for (size_t k = c.size(); k-- > 0;) acc = acc * at + c[k];
  return acc;
}

// Horner evaluation at an algebra element, with u standing for 1.
Vec eval_coeffs_alg(const QuotientAlgebra& Q, const std::vector<Scalar>& c,
                    const Vec& w, const Vec& u) {
  Vec acc(Q.dim(), Scalar::zero(Q.kind));
  for (size_t k = c.size(); k-- > 0;) {
    acc = Q.mult(acc, w);
    for (size_t j = 0; j < acc.size(); ++j) acc[j] += c[k] * u[j];
  }
  return acc;
}

MultiPoly poly_from_coeffs(const std::vector<Scalar>& c) {
  const MultiPoly s = MultiPoly::variable("s");
  MultiPoly acc;
  for (size_t k = c.size(); k-- > 0;)
    acc = acc * s + MultiPoly(c[k].as_rational());
  return acc;
}

// Rebuild a parameter-based family at a rational value certified by the
// singularity sweep; table-based families have no parameter to move.
std::optional<DegreeFunction> respecialize(const DegreeFunction& delta,
                                           unsigned bound) {
  const DegreeFamily fam = delta.family();
  if (fam != DegreeFamily::setop && fam != DegreeFamily::vect &&
      fam != DegreeFamily::length)
    return std::nullopt;
  const SingularityReport sweep = nonsingularity_verdict(delta, bound);
  Rational t0(2);
  for (bool bad = true; bad;) {
    bad = false;
    for (const Rational& r : sweep.singular_params)
      if (r == t0) {
        t0 += Rational(1);
        bad = true;
      }
  }
  const Scalar param(t0);
  switch (fam) {
    case DegreeFamily::setop:
      return DegreeFunction::setop_family(param);
    case DegreeFamily::vect:
      return DegreeFunction::vect_family(delta.modulus(), param);
    default:
      return DegreeFunction::length_family(delta.modulus(), param);
  }
}

// ---------------------------------------------------------------------------
// Small dense matrices over a prime field, for GL conjugacy classes
// ---------------------------------------------------------------------------

using FqMat = std::vector<unsigned>;  // d×d, row-major

FqMat fq_mult(const FqMat& a, const FqMat& b, unsigned d, unsigned q) {
  FqMat c(static_cast<size_t>(d) * d, 0);
  for (unsigned i = 0; i < d; ++i)
    for (unsigned k = 0; k < d; ++k) {
      const unsigned aik = a[i * d + k];
      if (aik == 0) continue;
      for (unsigned j = 0; j < d; ++j)
        c[i * d + j] = (c[i * d + j] + aik * b[k * d + j]) % q;
    }
  return c;
}

unsigned fq_inverse_scalar(unsigned a, unsigned q) {
  unsigned acc = 1;
  for (unsigned e = q - 2; e > 0; e >>= 1) {
    if (e & 1) acc = acc * a % q;
    a = a * a % q;
  }
  return acc;
}

// Gauss–Jordan inverse; returns false for a singular matrix.
bool fq_invert(FqMat a, unsigned d, unsigned q, FqMat* inv) {
  FqMat b(static_cast<size_t>(d) * d, 0);
  for (unsigned i = 0; i < d; ++i) b[i * d + i] = 1;
  for (unsigned c = 0; c < d; ++c) {
    unsigned sel = c;
    while (sel < d && a[sel * d + c] == 0) ++sel;
    if (sel == d) return false;
    for (unsigned j = 0; j < d; ++j) {
      std::swap(a[c * d + j], a[sel * d + j]);
      std::swap(b[c * d + j], b[sel * d + j]);
    }
    const unsigned s = fq_inverse_scalar(a[c * d + c], q);
    for (unsigned j = 0; j < d; ++j) {
      a[c * d + j] = a[c * d + j] * s % q;
      b[c * d + j] = b[c * d + j] * s % q;
    }
    for (unsigned i = 0; i < d; ++i) {
      if (i == c || a[i * d + c] == 0) continue;
      const unsigned f = a[i * d + c];
      for (unsigned j = 0; j < d; ++j) {
        a[i * d + j] = (a[i * d + j] + (q - f) * a[c * d + j]) % q;
        b[i * d + j] = (b[i * d + j] + (q - f) * b[c * d + j]) % q;
      }
    }
  }
  if (inv) *inv = std::move(b);
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Obstructions and Gram determinants
// ---------------------------------------------------------------------------

OmegaValue omega(const MorphismData& e, const DegreeFunction& delta) {
  if (!is_surjective(e))
    throw ContractError("omega requires a surjective morphism");
  require_object_compat(e.source(), delta, "omega");
  const ObjectHandle x = e.source();
  const ScalarKind k = delta.scalar_kind();
  const PartialSemilattice L = PartialSemilattice::of_subobjects(x);
  const MoebiusTable table = moebius(L);
  const unsigned top = *L.index_of(full_subobject(x));
  const SubobjectClass full_target = full_subobject(e.target());

  OmegaValue out{e, Scalar::zero(k), {}};
  for (unsigned i = 0; i < L.size(); ++i) {
    const SubobjectClass& w = L.element(i);
    if (direct_image(e, w) != full_target) continue;
    const Scalar degree = delta.evaluate(compose(e, embedding(w)));
    const std::int64_t mu = table.mu[i][top];
    out.value += Scalar::embed(k, Rational(mu)) * degree;
    out.terms.push_back({w, mu, degree});
  }
  return out;
}

GramReport gram_Omega(const ObjectHandle& x, const DegreeFunction& delta) {
  require_object_compat(x, delta, "gram");
  const std::vector<SubobjectClass>& subs = subobjects(x);
  const size_t n = subs.size();
  const ScalarKind k = delta.scalar_kind();
  DenseMatrix beta(n, n, k);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      const SubobjectClass meet = subobject_meet(subs[i], subs[j]);
      beta.set(i, j, delta.evaluate(terminal_morphism(meet.object())));
    }
  const Scalar det = determinant(beta);
  std::vector<OmegaValue> factors;
  Scalar prod = Scalar::one(k);
  for (const SubobjectClass& u : subs) {
    factors.push_back(omega(terminal_morphism(u.object()), delta));
    prod *= factors.back().value;
  }
  if (prod != det)
    throw ContractError(
        "Gram determinant does not match the obstruction product");
  return {x, std::move(beta), det, std::move(factors)};
}

std::vector<MorphismData> indecomposable_surjections(const ObjectHandle& x) {
  std::vector<MorphismData> out;
  if (x.kind() == BackendKind::setop) {
    const unsigned n = x.size();
    if (n == 0) return out;
    const ObjectHandle y = ObjectHandle::setop(n - 1);
    for (unsigned drop = 0; drop < n; ++drop) {
      std::vector<unsigned> rev;
      rev.reserve(n - 1);
      for (unsigned v = 0; v < n; ++v)
        if (v != drop) rev.push_back(v);
      out.push_back(MorphismData::setop(x, y, rev));
    }
    return out;
  }
  const unsigned d = x.dim();
  const unsigned q = x.modulus();
  if (d == 0) return out;
  const ObjectHandle y = ObjectHandle::vect(q, d - 1);
  for (const SubobjectClass& line : subobjects(x)) {
    if (line.object().dim() != 1) continue;
    const std::vector<unsigned>& v = line.rows()[0];
    unsigned p = 0;
    while (v[p] == 0) ++p;
    // Quotient by the line: unit columns off the pivot, and the pivot
    // column balances so that the spanning vector maps to zero.
    std::vector<unsigned> entries(static_cast<size_t>(d - 1) * d, 0);
    unsigned r = 0;
    for (unsigned j = 0; j < d; ++j) {
      if (j == p) continue;
      entries[r * d + j] = 1;
      entries[r * d + p] = (q - v[j]) % q;
      ++r;
    }
    out.push_back(MorphismData::vect(x, y, entries));
  }
  return out;
}

SingularityReport nonsingularity_verdict(const DegreeFunction& delta,
                                         unsigned bound) {
  const ScalarKind k = delta.scalar_kind();
  SingularityReport rep;
  rep.symbolic = (k != ScalarKind::rational);
  rep.bound = bound;
  rep.product = Scalar::one(k);
  rep.nonsingular = true;
  for (unsigned s = 1; s <= bound; ++s) {
    const ObjectHandle x = delta.backend() == BackendKind::setop
                               ? ObjectHandle::setop(s)
                               : ObjectHandle::vect(delta.modulus(), s);
    for (const MorphismData& e : indecomposable_surjections(x)) {
      const OmegaValue value = omega(e, delta);
      rep.product *= value.value;
      if (!rep.symbolic && value.value.is_zero() && !rep.witness) {
        rep.witness = e;
        rep.nonsingular = false;
      }
    }
  }
  if (rep.symbolic) {
    const MultiPoly p = (k == ScalarKind::poly)
                            ? rep.product.as_poly()
                            : rep.product.as_ratfunc().numerator();
    for (const auto& [root, mult] : rational_roots(p)) {
      (void)mult;
      rep.singular_params.push_back(root);
    }
  }
  return rep;
}

OmegaMultReport omega_multiplicativity_check(const MorphismData& ebar,
                                             const MorphismData& e,
                                             const DegreeFunction& delta) {
  if (!is_surjective(ebar) || !is_surjective(e))
    throw ContractError(
        "omega multiplicativity requires surjective morphisms");
  OmegaMultReport rep{omega(compose(e, ebar), delta), omega(e, delta),
                      omega(ebar, delta), false};
  rep.passed = rep.composite.value == rep.outer.value * rep.inner.value;
  return rep;
}

// ---------------------------------------------------------------------------
// Trace radicals
// ---------------------------------------------------------------------------

RadicalReport radical(const ObjectHandle& x, const ObjectHandle& y,
                      const DegreeFunction& delta) {
  require_field(delta, "radical computation");
  require_object_compat(x, delta, "radical");
  require_object_compat(y, delta, "radical");
  const HomSpace forward = hom_basis(x, y);
  const HomSpace backward = hom_basis(y, x);
  const ScalarKind k = delta.scalar_kind();
  const Scalar one = Scalar::one(k);
  DenseMatrix pairing(backward.dim(), forward.dim(), k);
  for (size_t i = 0; i < backward.dim(); ++i)
    for (size_t j = 0; j < forward.dim(); ++j) {
      const LinearHom fg =
          compose_hom(LinearHom::single(forward.basis[j], one),
                      LinearHom::single(backward.basis[i], one), delta);
      pairing.set(i, j, trace(fg, delta));
    }
  RadicalReport rep{x, y, 0, {}};
  for (Vec& c : kernel_basis(pairing)) {
    LinearHom h = LinearHom::zero(x, y, k);
    h.coeffs = std::move(c);
    rep.basis.push_back(std::move(h));
  }
  rep.dimension = rep.basis.size();
  return rep;
}

namespace {

// Coordinate layout for block matrices between summand tuples.
struct BlockLayout {
  std::vector<std::vector<HomSpace>> spaces;  // [target][source]
  std::vector<std::vector<size_t>> offset;
  size_t total = 0;
};

BlockLayout block_layout(const std::vector<ObjectHandle>& src,
                         const std::vector<ObjectHandle>& dst) {
  BlockLayout L;
  L.spaces.resize(dst.size());
  L.offset.assign(dst.size(), std::vector<size_t>(src.size(), 0));
  for (size_t j = 0; j < dst.size(); ++j)
    for (size_t i = 0; i < src.size(); ++i) {
      L.offset[j][i] = L.total;
      L.spaces[j].push_back(hom_basis(src[i], dst[j]));
      L.total += L.spaces[j][i].dim();
    }
  return L;
}

BlockHom unflatten(const BlockLayout& L, const std::vector<ObjectHandle>& src,
                   const std::vector<ObjectHandle>& dst, ScalarKind k,
                   const Vec& v) {
  BlockHom F(dst.size());
  for (size_t j = 0; j < dst.size(); ++j)
    for (size_t i = 0; i < src.size(); ++i) {
      LinearHom h = LinearHom::zero(src[i], dst[j], k);
      for (size_t b = 0; b < h.coeffs.size(); ++b)
        h.coeffs[b] = v[L.offset[j][i] + b];
      F[j].push_back(std::move(h));
    }
  return F;
}

Vec flatten(const BlockLayout& L, ScalarKind k, const BlockHom& F) {
  Vec v(L.total, Scalar::zero(k));
  for (size_t j = 0; j < F.size(); ++j)
    for (size_t i = 0; i < F[j].size(); ++i)
      for (size_t b = 0; b < F[j][i].coeffs.size(); ++b)
        v[L.offset[j][i] + b] = F[j][i].coeffs[b];
  return v;
}

// A ∘ B for block matrices (B applied first).
BlockHom block_compose(const BlockHom& A, const BlockHom& B,
                       const DegreeFunction& delta) {
  BlockHom C(A.size());
  for (size_t o = 0; o < A.size(); ++o)
    for (size_t in = 0; in < B[0].size(); ++in) {
      LinearHom acc = LinearHom::zero(B[0][in].source, A[o][0].target,
                                      delta.scalar_kind());
      for (size_t mid = 0; mid < B.size(); ++mid)
        acc = acc + compose_hom(A[o][mid], B[mid][in], delta);
      C[o].push_back(std::move(acc));
    }
  return C;
}

// Basis of the image of F ↦ q∘F∘p, as flattened coordinate vectors.
std::vector<Vec> projected_hom_basis(const BlockLayout& L,
                                     const std::vector<ObjectHandle>& src,
                                     const std::vector<ObjectHandle>& dst,
                                     const BlockHom& p, const BlockHom& q,
                                     const DegreeFunction& delta) {
  const ScalarKind k = delta.scalar_kind();
  std::vector<Vec> cols;
  cols.reserve(L.total);
  for (size_t c = 0; c < L.total; ++c) {
    Vec e(L.total, Scalar::zero(k));
    e[c] = Scalar::one(k);
    const BlockHom F = unflatten(L, src, dst, k, e);
    cols.push_back(
        flatten(L, k, block_compose(block_compose(q, F, delta), p, delta)));
  }
  std::vector<Vec> rows(L.total, Vec(L.total, Scalar::zero(k)));
  for (size_t r = 0; r < L.total; ++r)
    for (size_t c = 0; c < L.total; ++c) rows[r][c] = cols[c][r];
  std::vector<Vec> basis;
  for (size_t p_col : rref_rows(rows)) basis.push_back(cols[p_col]);
  return basis;
}

}  // namespace

TRadicalReport radical(const TObject& X, const TObject& Y,
                       const DegreeFunction& delta) {
  require_field(delta, "radical computation");
  for (const ObjectHandle& s : X.summands)
    require_object_compat(s, delta, "radical");
  for (const ObjectHandle& s : Y.summands)
    require_object_compat(s, delta, "radical");
  const ScalarKind k = delta.scalar_kind();
  const BlockLayout LF = block_layout(X.summands, Y.summands);
  const BlockLayout LG = block_layout(Y.summands, X.summands);
  const std::vector<Vec> fbasis = projected_hom_basis(
      LF, X.summands, Y.summands, X.idempotent, Y.idempotent, delta);
  const std::vector<Vec> gbasis = projected_hom_basis(
      LG, Y.summands, X.summands, Y.idempotent, X.idempotent, delta);
  TRadicalReport rep;
  rep.hom_dimension = fbasis.size();
  if (fbasis.empty()) return rep;

  DenseMatrix pairing(gbasis.size(), fbasis.size(), k);
  for (size_t i = 0; i < gbasis.size(); ++i) {
    const BlockHom G = unflatten(LG, Y.summands, X.summands, k, gbasis[i]);
    for (size_t j = 0; j < fbasis.size(); ++j) {
      const BlockHom F = unflatten(LF, X.summands, Y.summands, k, fbasis[j]);
      const BlockHom FG = block_compose(F, G, delta);
      Scalar tr = Scalar::zero(k);
      for (size_t b = 0; b < Y.summands.size(); ++b)
        tr += trace(FG[b][b], delta);
      pairing.set(i, j, tr);
    }
  }
  for (const Vec& c : kernel_basis(pairing)) {
    Vec flat(LF.total, Scalar::zero(k));
    for (size_t j = 0; j < c.size(); ++j)
      for (size_t b = 0; b < LF.total; ++b) flat[b] += c[j] * fbasis[j][b];
    rep.basis.push_back(unflatten(LF, X.summands, Y.summands, k, flat));
  }
  rep.dimension = rep.basis.size();
  return rep;
}

// ---------------------------------------------------------------------------
// Wedderburn blocks
// ---------------------------------------------------------------------------

BlockReport semisimple_block_dims(const ObjectHandle& x,
                                  const DegreeFunction& delta) {
  require_field(delta, "block decomposition");
  require_object_compat(x, delta, "block decomposition");
  const EndAlgebra alg = end_algebra(x, delta);
  const RadicalReport rad = radical(x, x, delta);
  const QuotientAlgebra Q = QuotientAlgebra::make(alg, rad.basis);

  BlockReport rep{x, false, 0, 0, false, {}, {}};
  rep.symbolic = (delta.scalar_kind() == ScalarKind::ratfunc);
  rep.quotient_dim = Q.dim();
  const size_t m = Q.dim();
  if (m == 0) {
    rep.split = true;
    return rep;
  }

  // Center: solutions of Σ_j c_j·(b_j·b_i − b_i·b_j) = 0 for all i.
  std::vector<std::vector<Vec>> table(m, std::vector<Vec>(m));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j)
      table[i][j] = Q.mult(Q.basis_vector(i), Q.basis_vector(j));
  DenseMatrix commutators(m * m, m, Q.kind);
  for (size_t i = 0; i < m; ++i)
    for (size_t comp = 0; comp < m; ++comp)
      for (size_t j = 0; j < m; ++j)
        commutators.set(i * m + comp, j,
                        table[j][i][comp] - table[i][j][comp]);
  const std::vector<Vec> center = kernel_basis(commutators);
  rep.center_dim = center.size();
  if (rep.symbolic) return rep;  // block count only; no splitting over ℚ(t)

  // Split the unit cell by rational eigenvalues of center elements.
  std::vector<Vec> cells{Q.unit()};
  for (bool progress = true; progress;) {
    progress = false;
    for (size_t ci = 0; ci < cells.size() && !progress; ++ci) {
      for (const Vec& z : center) {
        const Vec u = cells[ci];
        const Vec w = Q.mult(z, u);
        const std::vector<Scalar> mp = cell_minpoly(Q, u, w);
        if (mp.size() <= 2) continue;  // z acts as a scalar on this cell
        const std::map<Rational, int> roots =
            rational_roots(poly_from_coeffs(mp));
        if (roots.empty()) continue;
        std::vector<Vec> pieces;
        Vec rest = u;
        for (const auto& [root, mult] : roots) {
          if (mult > 1)
            throw ContractError(
                "center element has a repeated eigenvalue; the quotient is "
                "not split semisimple at this parameter");
          const Scalar at = Scalar::embed(Q.kind, root);
          const std::vector<Scalar> quot = deflate(mp, at);
          Vec proj = eval_coeffs_alg(Q, quot, w, u);
          const Scalar den = eval_coeffs(quot, at);
          const Scalar inv = Scalar::one(Q.kind) / den;
          for (Scalar& e : proj) e = e * inv;
          if (Q.mult(proj, proj) != proj)
            throw ContractError("spectral projector is not idempotent");
          rest = vec_sub(std::move(rest), proj);
          pieces.push_back(std::move(proj));
        }
        if (!is_zero_vec(rest)) pieces.push_back(std::move(rest));
        if (pieces.size() <= 1) continue;
        cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(ci));
        cells.insert(cells.end(), pieces.begin(), pieces.end());
        progress = true;
        break;
      }
    }
  }

  size_t covered = 0;
  rep.split = true;
  for (const Vec& u : cells) {
    BlockCell cell;
    std::vector<Vec> zu;
    for (const Vec& z : center) zu.push_back(Q.mult(z, u));
    cell.center_dim = rref_rows(zu).size();
    std::vector<Vec> ub;
    for (size_t j = 0; j < m; ++j) ub.push_back(Q.mult(u, Q.basis_vector(j)));
    cell.algebra_dim = rref_rows(ub).size();
    if (cell.center_dim == 1)
      for (size_t d = 1; d * d <= cell.algebra_dim; ++d)
        if (d * d == cell.algebra_dim) cell.matrix_size = d;
    if (cell.matrix_size)
      rep.block_dims.push_back(*cell.matrix_size);
    else
      rep.split = false;
    covered += cell.algebra_dim;
    rep.cells.push_back(cell);
  }
  if (covered != rep.quotient_dim)
    throw ContractError("cell dimensions do not add up to the quotient");
  std::sort(rep.block_dims.begin(), rep.block_dims.end());
  return rep;
}

// ---------------------------------------------------------------------------
// Census
// ---------------------------------------------------------------------------

unsigned long long partition_count(unsigned n) {
  std::vector<unsigned long long> dp(n + 1, 0);
  dp[0] = 1;
  for (unsigned part = 1; part <= n; ++part)
    for (unsigned s = part; s <= n; ++s) dp[s] += dp[s - part];
  return dp[n];
}

size_t gl_conjugacy_classes(unsigned q, unsigned d) {
  if (!prime(q)) throw ContractError("q must be prime");
  if (d == 0) return 1;
  unsigned long long points = 1, matrices = 1;
  for (unsigned i = 0; i < d; ++i) points *= q;
  for (unsigned i = 0; i < d * d && matrices <= 4096; ++i) matrices *= q;
  if (points > 64 || matrices > 4096)
    throw ResourceError(
        "conjugacy-class enumeration for GL_d(F_q) exceeds the brute-force "
        "bound (q^d <= 64 and q^(d*d) <= 4096)");

  std::vector<std::pair<FqMat, FqMat>> gl;  // (g, g⁻¹)
  FqMat mat(static_cast<size_t>(d) * d, 0);
  for (;;) {
    FqMat inv;
    if (fq_invert(mat, d, q, &inv)) gl.emplace_back(mat, std::move(inv));
    size_t i = 0;
    while (i < mat.size() && ++mat[i] == q) mat[i++] = 0;
    if (i == mat.size()) break;
  }
  std::set<FqMat> seen;
  size_t classes = 0;
  for (const auto& [g, ginv] : gl) {
    (void)ginv;
    if (seen.count(g)) continue;
    ++classes;
    for (const auto& [h, hinv] : gl)
      seen.insert(fq_mult(fq_mult(h, g, d, q), hinv, d, q));
  }
  return classes;
}

CensusReport simple_census(const ObjectHandle& x,
                           const DegreeFunction& delta) {
  require_field(delta, "simple-object census");
  require_object_compat(x, delta, "census");
  CensusReport rep{x, {}, 0, 0, false, BlockReport{x, false, 0, 0, false, {}, {}}, std::nullopt};
  const bool setop = x.kind() == BackendKind::setop;
  const unsigned n = setop ? x.size() : x.dim();
  for (unsigned m = 0; m <= n; ++m) {
    const ObjectHandle y =
        setop ? ObjectHandle::setop(m) : ObjectHandle::vect(x.modulus(), m);
    if (subquotient_order(y, x) == SubquotientOrder::none) continue;
    const size_t irreps =
        setop ? static_cast<size_t>(partition_count(m))
              : gl_conjugacy_classes(x.modulus(), m);
    rep.rows.push_back({y, irreps});
    rep.predicted += irreps;
  }

  // Every subquotient of x×x must keep a nonzero obstruction for the block
  // count to match the simple-object census.
  const unsigned bound = 2 * n;
  if (delta.scalar_kind() == ScalarKind::rational && bound > 0) {
    const SingularityReport sweep = nonsingularity_verdict(delta, bound);
    if (!sweep.nonsingular)
      throw ContractError(
          "degree parameter is singular within the census bound; the census "
          "requires a generic parameter");
  }
  rep.blocks = semisimple_block_dims(x, delta);
  rep.computed = rep.blocks.block_count();
  if (delta.scalar_kind() == ScalarKind::ratfunc) {
    if (const auto specialized = respecialize(delta, bound)) {
      rep.specialized_cross_check = semisimple_block_dims(x, *specialized);
      if (rep.specialized_cross_check->block_count() != rep.computed)
        throw ContractError(
            "symbolic and specialized census block counts disagree");
    }
  }
  rep.matches = rep.predicted == rep.computed;
  return rep;
}

}  // namespace tenv
