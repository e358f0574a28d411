#include "specialize.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace tenv {
namespace {

bool prime(unsigned q) {
  if (q < 2) return false;
  for (unsigned d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

void require_compat(const UniformFunctor& P, const ObjectHandle& x,
                    const char* what) {
  if (x.kind() != P.backend())
    throw ContractError(std::string(what) +
                        ": uniform functor backend does not match the object");
  if (x.kind() == BackendKind::vect && x.modulus() != P.modulus())
    throw ContractError(std::string(what) +
                        ": uniform functor modulus does not match the object");
}

unsigned p_width(const UniformFunctor& P, const ObjectHandle& x) {
  return P.backend() == BackendKind::setop ? x.size()
                                           : x.dim() * P.parameter();
}

unsigned p_base(const UniformFunctor& P) {
  return P.backend() == BackendKind::setop ? P.parameter() : P.modulus();
}

// |P(x)| = base^width, or nothing if it exceeds the enumeration bound.
std::optional<unsigned long long> p_count(const UniformFunctor& P,
                                          const ObjectHandle& x) {
  const unsigned width = p_width(P, x);
  const unsigned base = p_base(P);
  if (width == 0) return 1;
  if (base == 0) return 0;
  unsigned long long count = 1;
  for (unsigned i = 0; i < width; ++i) {
    count *= base;
    if (count > limits().max_psize) return std::nullopt;
  }
  return count;
}

unsigned fq_inv(unsigned a, unsigned q) {
  unsigned acc = 1;
  for (unsigned e = q - 2; e > 0; e >>= 1) {
    if (e & 1) acc = acc * a % q;
    a = a * a % q;
  }
  return acc;
}

// In-place reduced row echelon form mod q; zero rows are dropped, so the
// result is the canonical basis of the row space.
void fq_rref(std::vector<std::vector<unsigned>>& rows, unsigned q) {
  size_t r = 0;
  const size_t ncols = rows.empty() ? 0 : rows[0].size();
  for (size_t c = 0; c < ncols && r < rows.size(); ++c) {
    size_t sel = r;
    while (sel < rows.size() && rows[sel][c] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    const unsigned inv = fq_inv(rows[r][c], q);
    for (unsigned& e : rows[r]) e = e * inv % q;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const unsigned f = rows[i][c];
      for (size_t j = 0; j < ncols; ++j)
        rows[i][j] = (rows[i][j] + (q - f) * rows[r][j]) % q;
    }
    ++r;
  }
  rows.resize(r);
}

// The canonical invariant of an element of P(x): the finest subobject of x
// through which it factors. Level-set partition resp. image row space.
SubobjectClass element_invariant(const UniformFunctor& P,
                                 const ObjectHandle& x,
                                 const std::vector<unsigned>& el) {
  if (P.backend() == BackendKind::setop) {
    std::vector<std::vector<unsigned>> blocks;
    std::map<unsigned, size_t> block_of;
    for (unsigned pos = 0; pos < el.size(); ++pos) {
      const auto it = block_of.find(el[pos]);
      if (it == block_of.end()) {
        block_of.emplace(el[pos], blocks.size());
        blocks.push_back({pos});
      } else {
        blocks[it->second].push_back(pos);
      }
    }
    return SubobjectClass::setop_partition(x, std::move(blocks));
  }
  const unsigned d = x.dim(), n = P.parameter(), q = P.modulus();
  std::vector<std::vector<unsigned>> cols(n, std::vector<unsigned>(d, 0));
  for (unsigned r = 0; r < d; ++r)
    for (unsigned c = 0; c < n; ++c) cols[c][r] = el[r * n + c];
  fq_rref(cols, q);
  return SubobjectClass::vect_subspace(x, std::move(cols));
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols(), a.kind());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t k = 0; k < a.cols(); ++k) {
      const Scalar& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (size_t j = 0; j < b.rows(); ++j)
        for (size_t l = 0; l < b.cols(); ++l)
          out.set(i * b.rows() + j, k * b.cols() + l, aik * b.at(j, l));
    }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// UniformFunctor
// ---------------------------------------------------------------------------

UniformFunctor UniformFunctor::setop_functor(unsigned x_size) {
  return UniformFunctor(BackendKind::setop, 0, x_size);
}

UniformFunctor UniformFunctor::vect_functor(unsigned q, unsigned n) {
  if (!prime(q)) throw ContractError("q must be prime");
  return UniformFunctor(BackendKind::vect, q, n);
}

Rational UniformFunctor::adapted_parameter() const {
  if (kind_ == BackendKind::setop) return Rational(n_);
  unsigned long long t = 1;
  for (unsigned i = 0; i < n_; ++i) {
    t *= q_;
    if (t > limits().max_psize)
      throw ResourceError(
          "adapted parameter q^n exceeds TENV_MAX_PSIZE=" +
          std::to_string(limits().max_psize));
  }
  return Rational(static_cast<long long>(t));
}

DegreeFunction UniformFunctor::adapted_degree() const {
  const Scalar t(adapted_parameter());
  return kind_ == BackendKind::setop ? DegreeFunction::setop_family(t)
                                     : DegreeFunction::vect_family(q_, t);
}

// ---------------------------------------------------------------------------
// P on objects and morphisms
// ---------------------------------------------------------------------------

size_t PSet::index_of(const std::vector<unsigned>& element) const {
  if (element.size() != width)
    throw ContractError("element width does not match P(x)");
  size_t idx = 0;
  for (unsigned digit : element) {
    if (base != 0 && digit >= base)
      throw ContractError("element digit out of range for P(x)");
    idx = idx * base + digit;
  }
  return idx;
}

PSet apply_P(const UniformFunctor& P, const ObjectHandle& x) {
  require_compat(P, x, "apply_P");
  const auto count = p_count(P, x);
  if (!count)
    throw ResourceError("uniform functor value on " + x.str() +
                        " exceeds TENV_MAX_PSIZE=" +
                        std::to_string(limits().max_psize));
  PSet out{x, p_base(P), p_width(P, x), {}};
  out.elements.reserve(static_cast<size_t>(*count));
  for (unsigned long long idx = 0; idx < *count; ++idx) {
    std::vector<unsigned> el(out.width);
    unsigned long long rest = idx;
    for (unsigned pos = out.width; pos-- > 0;) {
      el[pos] = static_cast<unsigned>(rest % out.base);
      rest /= out.base;
    }
    out.elements.push_back(std::move(el));
  }
  if (out.width == 0) out.elements.assign(1, std::vector<unsigned>{});
  return out;
}

PMap apply_P(const UniformFunctor& P, const MorphismData& f) {
  require_compat(P, f.source(), "apply_P");
  const PSet src = apply_P(P, f.source());
  const PSet tgt = apply_P(P, f.target());
  PMap out{f, src.size(), tgt.size(), {}};
  out.image.reserve(src.size());
  if (P.backend() == BackendKind::setop) {
    const std::vector<unsigned>& rev = f.rev();
    for (const std::vector<unsigned>& a : src.elements) {
      std::vector<unsigned> b(rev.size());
      for (size_t j = 0; j < rev.size(); ++j) b[j] = a[rev[j]];
      out.image.push_back(tgt.index_of(b));
    }
  } else {
    const unsigned n = P.parameter(), q = P.modulus();
    const unsigned ds = f.source().dim(), dt = f.target().dim();
    for (const std::vector<unsigned>& a : src.elements) {
      std::vector<unsigned> b(static_cast<size_t>(dt) * n, 0);
      for (unsigned r = 0; r < dt; ++r)
        for (unsigned k = 0; k < ds; ++k) {
          const unsigned m = f.entry(r, k);
          if (m == 0) continue;
          for (unsigned c = 0; c < n; ++c)
            b[r * n + c] = (b[r * n + c] + m * a[k * n + c]) % q;
        }
      out.image.push_back(tgt.index_of(b));
    }
  }
  return out;
}

DenseMatrix set_map_matrix(const PMap& m) {
  DenseMatrix out(m.target_size, m.source_size, ScalarKind::rational);
  const Scalar one = Scalar::one(ScalarKind::rational);
  for (size_t i = 0; i < m.image.size(); ++i) out.set(m.image[i], i, one);
  return out;
}

std::optional<size_t> uniform_degree(const PMap& m) {
  if (m.target_size == 0) return std::nullopt;
  std::vector<size_t> fibers(m.target_size, 0);
  for (size_t t : m.image) ++fibers[t];
  for (size_t f : fibers)
    if (f != fibers[0]) return std::nullopt;
  return fibers[0];
}

// ---------------------------------------------------------------------------
// Specialization of linear morphisms
// ---------------------------------------------------------------------------

DenseMatrix specialize_relation(const UniformFunctor& P, const Relation& r) {
  const ProductData p = product(r.left, r.right);
  const MorphismData emb = embedding(r.body);
  const PMap to_x = apply_P(P, compose(p.proj_left, emb));
  const PMap to_y = apply_P(P, compose(p.proj_right, emb));
  DenseMatrix out(to_y.target_size, to_x.target_size, ScalarKind::rational);
  const Scalar one = Scalar::one(ScalarKind::rational);
  for (size_t i = 0; i < to_x.image.size(); ++i) {
    const size_t row = to_y.image[i], col = to_x.image[i];
    out.set(row, col, out.at(row, col) + one);
  }
  return out;
}

SpecializedHom specialize(const UniformFunctor& P, const LinearHom& F) {
  if (F.kind != ScalarKind::rational)
    throw ContractError(
        "specialization requires rational coefficients; evaluate the "
        "parameter first");
  require_compat(P, F.source, "specialize");
  const auto cs = p_count(P, F.source), ct = p_count(P, F.target);
  if (!cs || !ct)
    throw ResourceError("uniform functor value exceeds TENV_MAX_PSIZE=" +
                        std::to_string(limits().max_psize));
  const HomSpace space = hom_basis(F.source, F.target);
  SpecializedHom out{static_cast<size_t>(*cs), static_cast<size_t>(*ct),
                     DenseMatrix(static_cast<size_t>(*ct),
                                 static_cast<size_t>(*cs),
                                 ScalarKind::rational)};
  for (size_t i = 0; i < space.dim(); ++i) {
    if (F.coeffs[i].is_zero()) continue;
    out.matrix =
        out.matrix + specialize_relation(P, space.basis[i]).scaled(F.coeffs[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Uniformity, adaptedness, left exactness
// ---------------------------------------------------------------------------

AdaptedReport uniformity_and_adapted_check(const UniformFunctor& P,
                                           const DegreeFunction& delta,
                                           unsigned max_size) {
  if (delta.backend() != P.backend() ||
      (P.backend() == BackendKind::vect && delta.modulus() != P.modulus()))
    throw ContractError(
        "adaptedness check: degree function does not match the functor");
  if (delta.scalar_kind() != ScalarKind::rational)
    throw ContractError(
        "adaptedness check requires a rational degree parameter");

  const bool setop = P.backend() == BackendKind::setop;
  auto object_of = [&](unsigned s) {
    return setop ? ObjectHandle::setop(s) : ObjectHandle::vect(P.modulus(), s);
  };

  AdaptedReport rep;
  std::vector<MorphismData> surjections;
  for (unsigned s = 1; s <= max_size; ++s) {
    const ObjectHandle x = object_of(s);
    const std::vector<MorphismData> indec = indecomposable_surjections(x);
    surjections.insert(surjections.end(), indec.begin(), indec.end());
    surjections.push_back(terminal_morphism(x));
    for (const MorphismData& e1 : indec)
      for (const MorphismData& e2 : indecomposable_surjections(e1.target()))
        surjections.push_back(compose(e2, e1));
  }
  for (const MorphismData& e : surjections) {
    if (!p_count(P, e.source())) continue;  // beyond the enumeration bound
    const PMap m = apply_P(P, e);
    if (m.target_size == 0) continue;  // no adaptedness constraint
    ++rep.surjections_checked;
    const std::optional<size_t> deg = uniform_degree(m);
    if (!deg) {
      rep.uniform = false;
      if (!rep.witness) rep.witness = e;
      continue;
    }
    if (delta.evaluate(e) != Scalar(Rational(static_cast<long long>(*deg)))) {
      rep.adapted = false;
      if (!rep.witness) rep.witness = e;
    }
  }

  // Pullback squares: legs into each small object z, paired exhaustively.
  for (unsigned zs = 0; zs < max_size; ++zs) {
    const ObjectHandle z = object_of(zs);
    std::vector<MorphismData> legs{identity(z)};
    if (zs + 1 <= max_size)
      for (const MorphismData& e :
           indecomposable_surjections(object_of(zs + 1)))
        legs.push_back(e);
    for (const SubobjectClass& u : subobjects(z)) legs.push_back(embedding(u));
    if (zs == 0)
      for (unsigned s = 1; s < max_size; ++s)
        legs.push_back(terminal_morphism(object_of(s)));
    for (const MorphismData& f : legs)
      for (const MorphismData& g : legs) {
        const std::optional<SpanData> span = pullback(f, g);
        if (!span) continue;
        if (!p_count(P, span->apex) || !p_count(P, f.source()) ||
            !p_count(P, g.source()))
          continue;
        const DenseMatrix mf = set_map_matrix(apply_P(P, f));
        const DenseMatrix mg = set_map_matrix(apply_P(P, g));
        const DenseMatrix ml = set_map_matrix(apply_P(P, span->to_left));
        const DenseMatrix mr = set_map_matrix(apply_P(P, span->to_right));
        ++rep.squares_checked;
        if (!(mf.transpose() * mg == ml * mr.transpose()))
          rep.left_exact = false;
      }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Functoriality of the specialization
// ---------------------------------------------------------------------------

FunctorialityReport functoriality_check(const UniformFunctor& P,
                                        const DegreeFunction& delta,
                                        const ObjectHandle& x,
                                        const ObjectHandle& y,
                                        const ObjectHandle& z,
                                        size_t budget) {
  if (delta.scalar_kind() != ScalarKind::rational)
    throw ContractError(
        "functoriality check requires a rational degree parameter");
  const HomSpace fs = hom_basis(x, y);
  const HomSpace gs = hom_basis(y, z);
  const Scalar one = Scalar::one(ScalarKind::rational);
  FunctorialityReport rep;
  const size_t total = fs.dim() * gs.dim();
  const size_t stride = (budget == 0 || total <= budget)
                            ? 1
                            : (total + budget - 1) / budget;
  for (size_t pair = 0; pair < total; pair += stride) {
    const Relation& r = fs.basis[pair / gs.dim()];
    const Relation& s = gs.basis[pair % gs.dim()];
    const LinearHom F = LinearHom::single(r, one);
    const LinearHom G = LinearHom::single(s, one);
    const SpecializedHom composite =
        specialize(P, compose_hom(G, F, delta));
    const SpecializedHom sf = specialize(P, F);
    const SpecializedHom sg = specialize(P, G);
    ++rep.composition_pairs;
    if (!(composite.matrix == sg.matrix * sf.matrix)) {
      rep.passed = false;
      if (!rep.witness) rep.witness = std::make_pair(s, r);
    }
    const SpecializedHom tensored = specialize(P, tensor_hom(F, G));
    ++rep.tensor_pairs;
    if (!(tensored.matrix == kron(sf.matrix, sg.matrix))) {
      rep.passed = false;
      if (!rep.witness) rep.witness = std::make_pair(s, r);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Orbit decomposition and invariant rank
// ---------------------------------------------------------------------------

PstarReport pstar_and_invariants(const UniformFunctor& P,
                                 const ObjectHandle& x) {
  require_compat(P, x, "pstar");
  const PSet ps = apply_P(P, x);
  const std::vector<SubobjectClass>& subs = subobjects(x);
  std::map<SubobjectClass, size_t> index;
  for (size_t i = 0; i < subs.size(); ++i) index.emplace(subs[i], i);

  PstarReport rep{x, {}, 0, false, 0, 0, false};
  std::vector<size_t> counts(subs.size(), 0);
  for (const std::vector<unsigned>& el : ps.elements) {
    const SubobjectClass inv = element_invariant(P, x, el);
    const auto it = index.find(inv);
    if (it == index.end())
      throw ContractError("element invariant is not a listed subobject");
    ++counts[it->second];
  }
  for (size_t i = 0; i < subs.size(); ++i) {
    rep.rows.push_back({subs[i], counts[i], counts[i] > 0});
    rep.covered += counts[i];
    if (counts[i] > 0) ++rep.nonempty_orbits;
  }
  if (rep.covered != ps.size())
    throw ContractError("invariant classes do not cover P(x)");

  rep.lattice_consistent = true;
  for (size_t i = 0; i < subs.size(); ++i) {
    const auto expected = p_count(P, subs[i].object());
    if (!expected) continue;
    unsigned long long below = 0;
    for (size_t j = 0; j < subs.size(); ++j)
      if (subobject_leq(subs[j], subs[i])) below += counts[j];
    if (below != *expected) rep.lattice_consistent = false;
  }

  const ObjectHandle unit = P.backend() == BackendKind::setop
                                ? ObjectHandle::setop(0)
                                : ObjectHandle::vect(P.modulus(), 0);
  const HomSpace h = hom_basis(unit, x);
  DenseMatrix columns(ps.size(), h.dim(), ScalarKind::rational);
  for (size_t j = 0; j < h.dim(); ++j) {
    const DenseMatrix col = specialize_relation(P, h.basis[j]);
    for (size_t i = 0; i < ps.size(); ++i) columns.set(i, j, col.at(i, 0));
  }
  rep.invariant_rank = rank(columns);
  rep.rank_matches = rep.invariant_rank == rep.nonempty_orbits;
  return rep;
}

// ---------------------------------------------------------------------------
// Dimension comparison against the symmetry-group side
// ---------------------------------------------------------------------------

InterpolationReport interpolation_dim_check(const UniformFunctor& P,
                                            const ObjectHandle& x,
                                            const ObjectHandle& y) {
  require_compat(P, x, "interpolation check");
  require_compat(P, y, "interpolation check");
  const DegreeFunction delta = P.adapted_degree();
  InterpolationReport rep{x, y, 0, 0, 0, 0, false};
  rep.hom_dim = hom_basis(x, y).dim();
  rep.radical_dim = radical(x, y, delta).dimension;
  rep.quotient_dim = rep.hom_dim - rep.radical_dim;

  const PSet px = apply_P(P, x);
  const PSet py = apply_P(P, y);
  if (P.backend() == BackendKind::setop) {
    // Joint level-set partitions, canonicalized as first-occurrence labels.
    std::set<std::vector<unsigned>> orbits;
    for (const std::vector<unsigned>& a : px.elements)
      for (const std::vector<unsigned>& b : py.elements) {
        std::vector<unsigned> labels;
        labels.reserve(a.size() + b.size());
        std::map<unsigned, unsigned> relabel;
        for (const std::vector<unsigned>* part : {&a, &b})
          for (unsigned v : *part)
            labels.push_back(
                relabel.emplace(v, static_cast<unsigned>(relabel.size()))
                    .first->second);
        orbits.insert(std::move(labels));
      }
    rep.equivariant_dim = orbits.size();
  } else {
    // Images of the stacked maps X → x ⊕ y, canonicalized by row reduction.
    const unsigned n = P.parameter(), q = P.modulus();
    const unsigned dx = x.dim(), dy = y.dim();
    std::set<std::vector<std::vector<unsigned>>> orbits;
    for (const std::vector<unsigned>& a : px.elements)
      for (const std::vector<unsigned>& b : py.elements) {
        std::vector<std::vector<unsigned>> cols(
            n, std::vector<unsigned>(dx + dy, 0));
        for (unsigned c = 0; c < n; ++c) {
          for (unsigned r = 0; r < dx; ++r) cols[c][r] = a[r * n + c];
          for (unsigned r = 0; r < dy; ++r) cols[c][dx + r] = b[r * n + c];
        }
        fq_rref(cols, q);
        orbits.insert(std::move(cols));
      }
    rep.equivariant_dim = orbits.size();
  }
  rep.matches = rep.quotient_dim == rep.equivariant_dim;
  return rep;
}

}  // namespace tenv
