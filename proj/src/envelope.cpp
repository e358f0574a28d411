#include "envelope.hpp"

#include <algorithm>

namespace tenv {
namespace {

void require_same_kind(ScalarKind a, ScalarKind b, const char* what) {
  if (a != b)
    throw ContractError(std::string(what) + " mixes scalar kinds (" +
                        kind_name(a) + " vs " + kind_name(b) + ")");
}

// Trace of one relation: close it up with coev below and ev above. Works
// entirely at the relation level, so nothing large is enumerated.
Scalar trace_relation(const Relation& r, const DegreeFunction& delta) {
  auto [ev, coev] = ev_coev(r.left);
  Relation rid = tensor_rel(r, identity_relation(r.left));
  WeightedRelation w1 = weighted_compose(coev, rid, delta);
  if (w1.is_zero()) return Scalar::zero(delta.scalar_kind());
  WeightedRelation w2 = weighted_compose(*w1.rel, ev, delta);
  if (w2.is_zero()) return Scalar::zero(delta.scalar_kind());
  // Hom(⋆,⋆) is one-dimensional, so the composite is a multiple of id_⋆.
  return w1.coeff * w2.coeff;
}

}  // namespace

size_t HomSpace::index_of(const Relation& r) const {
  if (r.left != source || r.right != target)
    throw ContractError("relation " + r.str() + " does not belong to Hom(" +
                        source.str() + ", " + target.str() + ")");
  auto it = std::lower_bound(
      basis.begin(), basis.end(), r,
      [](const Relation& a, const Relation& b) { return a.body < b.body; });
  if (it == basis.end() || it->body != r.body)
    throw ContractError("relation not found in its hom space");
  return static_cast<size_t>(it - basis.begin());
}

HomSpace hom_basis(const ObjectHandle& x, const ObjectHandle& y) {
  HomSpace h{x, y, {}};
  const auto& subs = subobjects(product(x, y).object);
  h.basis.reserve(subs.size());
  for (const SubobjectClass& u : subs) h.basis.push_back(Relation{x, y, u});
  return h;
}

LinearHom LinearHom::zero(const ObjectHandle& x, const ObjectHandle& y,
                          ScalarKind k) {
  return LinearHom{x, y, k,
                   std::vector<Scalar>(hom_basis(x, y).dim(),
                                       Scalar::zero(k))};
}

LinearHom LinearHom::single(const Relation& r, Scalar c) {
  LinearHom h = zero(r.left, r.right, c.kind());
  h.coeffs[hom_basis(r.left, r.right).index_of(r)] = std::move(c);
  return h;
}

LinearHom LinearHom::identity_hom(const ObjectHandle& x, ScalarKind k) {
  return single(identity_relation(x), Scalar::one(k));
}

LinearHom LinearHom::of_morphism(const MorphismData& f, ScalarKind k) {
  return single(graph_of(f), Scalar::one(k));
}

bool LinearHom::is_zero() const {
  for (const Scalar& c : coeffs)
    if (!c.is_zero()) return false;
  return true;
}

LinearHom LinearHom::operator+(const LinearHom& o) const {
  if (source != o.source || target != o.target)
    throw ContractError("sum of morphisms with different endpoints");
  require_same_kind(kind, o.kind, "sum of morphisms");
  LinearHom out = *this;
  for (size_t i = 0; i < coeffs.size(); ++i) out.coeffs[i] += o.coeffs[i];
  return out;
}

LinearHom LinearHom::operator-() const { return scaled(-Scalar::one(kind)); }

LinearHom LinearHom::operator-(const LinearHom& o) const {
  return *this + (-o);
}

LinearHom LinearHom::scaled(const Scalar& c) const {
  require_same_kind(kind, c.kind(), "scaling a morphism");
  LinearHom out = *this;
  for (Scalar& v : out.coeffs) v *= c;
  return out;
}

bool LinearHom::operator==(const LinearHom& o) const {
  return source == o.source && target == o.target && kind == o.kind &&
         coeffs == o.coeffs;
}

std::string LinearHom::str() const {
  if (is_zero()) return "0";
  HomSpace h = hom_basis(source, target);
  std::string out;
  for (size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + coeffs[i].str() + ")*[" + h.basis[i].body.str() + "]";
  }
  return out;
}

LinearHom compose_hom(const LinearHom& G, const LinearHom& F,
                      const DegreeFunction& delta) {
  if (F.target != G.source)
    throw ContractError("composition endpoint mismatch: " + F.target.str() +
                        " vs " + G.source.str());
  require_same_kind(F.kind, G.kind, "composition");
  require_same_kind(F.kind, delta.scalar_kind(), "composition weights");
  HomSpace hf = hom_basis(F.source, F.target);
  HomSpace hg = hom_basis(G.source, G.target);
  HomSpace hr = hom_basis(F.source, G.target);
  LinearHom out{F.source, G.target, F.kind,
                std::vector<Scalar>(hr.dim(), Scalar::zero(F.kind))};
  for (size_t i = 0; i < hf.dim(); ++i) {
    if (F.coeffs[i].is_zero()) continue;
    for (size_t j = 0; j < hg.dim(); ++j) {
      if (G.coeffs[j].is_zero()) continue;
      WeightedRelation w = weighted_compose(hf.basis[i], hg.basis[j], delta);
      if (w.is_zero()) continue;
      out.coeffs[hr.index_of(*w.rel)] += F.coeffs[i] * G.coeffs[j] * w.coeff;
    }
  }
  return out;
}

LinearHom tensor_hom(const LinearHom& F, const LinearHom& G) {
  require_same_kind(F.kind, G.kind, "tensor");
  HomSpace hf = hom_basis(F.source, F.target);
  HomSpace hg = hom_basis(G.source, G.target);
  ObjectHandle src = product(F.source, G.source).object;
  ObjectHandle dst = product(F.target, G.target).object;
  HomSpace hr = hom_basis(src, dst);
  LinearHom out{src, dst, F.kind,
                std::vector<Scalar>(hr.dim(), Scalar::zero(F.kind))};
  for (size_t i = 0; i < hf.dim(); ++i) {
    if (F.coeffs[i].is_zero()) continue;
    for (size_t j = 0; j < hg.dim(); ++j) {
      if (G.coeffs[j].is_zero()) continue;
      Relation t = tensor_rel(hf.basis[i], hg.basis[j]);
      out.coeffs[hr.index_of(t)] += F.coeffs[i] * G.coeffs[j];
    }
  }
  return out;
}

LinearHom dual_hom(const LinearHom& F) {
  HomSpace hf = hom_basis(F.source, F.target);
  HomSpace hr = hom_basis(F.target, F.source);
  LinearHom out{F.target, F.source, F.kind,
                std::vector<Scalar>(hr.dim(), Scalar::zero(F.kind))};
  for (size_t i = 0; i < hf.dim(); ++i) {
    if (F.coeffs[i].is_zero()) continue;
    out.coeffs[hr.index_of(transpose(hf.basis[i]))] += F.coeffs[i];
  }
  return out;
}

Scalar trace(const LinearHom& F, const DegreeFunction& delta) {
  if (F.source != F.target)
    throw ContractError("trace of a non-endomorphism " + F.source.str() +
                        " -> " + F.target.str());
  require_same_kind(F.kind, delta.scalar_kind(), "trace weights");
  HomSpace h = hom_basis(F.source, F.target);
  Scalar acc = Scalar::zero(F.kind);
  for (size_t i = 0; i < h.dim(); ++i) {
    if (F.coeffs[i].is_zero()) continue;
    acc += F.coeffs[i] * trace_relation(h.basis[i], delta);
  }
  return acc;
}

Scalar dimension(const ObjectHandle& x, const DegreeFunction& delta) {
  return trace_relation(identity_relation(x), delta);
}

Scalar EndAlgebra::structure_constant(size_t i, size_t j, size_t k) const {
  const auto& [c, idx] = product.at(i).at(j);
  if (c.is_zero() || idx != k) return Scalar::zero(c.kind());
  return c;
}

std::vector<Scalar> EndAlgebra::unit() const {
  std::vector<Scalar> u(dim(), Scalar::zero(delta.scalar_kind()));
  u[space.index_of(identity_relation(object))] =
      Scalar::one(delta.scalar_kind());
  return u;
}

std::vector<Scalar> EndAlgebra::multiply(const std::vector<Scalar>& a,
                                         const std::vector<Scalar>& b) const {
  if (a.size() != dim() || b.size() != dim())
    throw ContractError("algebra element has the wrong length");
  std::vector<Scalar> out(dim(), Scalar::zero(delta.scalar_kind()));
  for (size_t i = 0; i < dim(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < dim(); ++j) {
      if (b[j].is_zero()) continue;
      const auto& [c, k] = product[i][j];
      if (c.is_zero()) continue;
      out[k] += a[i] * b[j] * c;
    }
  }
  return out;
}

Scalar EndAlgebra::trace_of(const std::vector<Scalar>& a) const {
  if (a.size() != dim())
    throw ContractError("algebra element has the wrong length");
  Scalar acc = Scalar::zero(delta.scalar_kind());
  for (size_t i = 0; i < dim(); ++i) {
    if (a[i].is_zero()) continue;
    acc += a[i] * traces[i];
  }
  return acc;
}

EndAlgebra end_algebra(const ObjectHandle& x, const DegreeFunction& delta) {
  if (x.kind() != delta.backend())
    throw ContractError("degree function backend does not match the object");
  EndAlgebra alg{x, delta, hom_basis(x, x), {}, {}};
  const size_t n = alg.space.dim();
  alg.product.resize(n);
  for (size_t i = 0; i < n; ++i) {
    alg.product[i].reserve(n);
    for (size_t j = 0; j < n; ++j) {
      // basis[i] ∘ basis[j]: feed j first.
      WeightedRelation w =
          weighted_compose(alg.space.basis[j], alg.space.basis[i], delta);
      if (w.is_zero())
        alg.product[i].push_back({Scalar::zero(delta.scalar_kind()), 0});
      else
        alg.product[i].push_back({w.coeff, alg.space.index_of(*w.rel)});
    }
  }
  alg.traces.reserve(n);
  for (size_t i = 0; i < n; ++i)
    alg.traces.push_back(trace_relation(alg.space.basis[i], delta));
  return alg;
}

std::pair<std::vector<std::vector<unsigned>>, unsigned>
partition_oracle_compose(unsigned m, unsigned n, unsigned k,
                         const std::vector<std::vector<unsigned>>& p,
                         const std::vector<std::vector<unsigned>>& q) {
  // Validate the two layers as partitions of their point sets.
  SubobjectClass::setop_partition(ObjectHandle::setop(m + n), p);
  SubobjectClass::setop_partition(ObjectHandle::setop(n + k), q);

  // Union-find over x-points [0,m), shared y-points [m,m+n), z-points
  // [m+n, m+n+k).
  std::vector<unsigned> root(m + n + k);
  for (unsigned i = 0; i < root.size(); ++i) root[i] = i;
  auto find = [&root](unsigned v) {
    while (root[v] != v) v = root[v] = root[root[v]];
    return v;
  };
  auto unite = [&](unsigned a, unsigned b) {
    a = find(a);
    b = find(b);
    if (a != b) root[std::max(a, b)] = std::min(a, b);
  };
  for (const auto& block : p)
    for (size_t i = 1; i < block.size(); ++i) unite(block[0], block[i]);
  // The second layer's y-points sit at m+e and its z-points continue at
  // m+n+(e−n), which is m+e either way.
  for (const auto& block : q)
    for (size_t i = 1; i < block.size(); ++i)
      unite(m + block[0], m + block[i]);

  // Count components that live entirely in the middle layer.
  std::vector<char> seen(root.size(), 0), touches_outer(root.size(), 0);
  for (unsigned v = 0; v < root.size(); ++v) {
    unsigned r = find(v);
    seen[r] = 1;
    if (v < m || v >= m + n) touches_outer[r] = 1;
  }
  unsigned middle_only = 0;
  for (unsigned r = 0; r < root.size(); ++r)
    if (seen[r] && r == find(r) && !touches_outer[r]) ++middle_only;

  // Outer partition: drop the middle labels and relabel z behind x.
  std::vector<std::vector<unsigned>> grouped(root.size());
  for (unsigned v = 0; v < root.size(); ++v) {
    if (v >= m && v < m + n) continue;
    grouped[find(v)].push_back(v < m ? v : v - n);
  }
  std::vector<std::vector<unsigned>> blocks;
  for (auto& g : grouped)
    if (!g.empty()) blocks.push_back(std::move(g));
  SubobjectClass canon =
      SubobjectClass::setop_partition(ObjectHandle::setop(m + k), blocks);
  return {canon.blocks(), middle_only};
}

EndUnitReport end_unit_check() {
  EndUnitReport report;
  report.setop_dim =
      static_cast<unsigned>(subobjects(ObjectHandle::setop(0)).size());
  report.vect_dim =
      static_cast<unsigned>(subobjects(ObjectHandle::vect(2, 0)).size());
  const Scalar one = Scalar::one(ScalarKind::poly);
  const Scalar t = Scalar(MultiPoly::variable("t"));
  bool ok = true;
  {
    Relation u = identity_relation(ObjectHandle::setop(0));
    WeightedRelation w =
        weighted_compose(u, u, DegreeFunction::setop_family(t));
    ok = ok && !w.is_zero() && w.coeff == one && *w.rel == u;
  }
  {
    Relation u = identity_relation(ObjectHandle::vect(2, 0));
    WeightedRelation w =
        weighted_compose(u, u, DegreeFunction::vect_family(2, t));
    ok = ok && !w.is_zero() && w.coeff == one && *w.rel == u;
  }
  report.multiplication_matches = ok;
  return report;
}

TObject TObject::make(std::vector<ObjectHandle> summands,
                      std::vector<std::vector<LinearHom>> idempotent,
                      const DegreeFunction& delta) {
  const size_t n = summands.size();
  if (n == 0) throw ContractError("a formal summand needs at least one object");
  if (idempotent.size() != n)
    throw ContractError("idempotent block matrix has the wrong shape");
  for (size_t i = 0; i < n; ++i) {
    if (idempotent[i].size() != n)
      throw ContractError("idempotent block matrix has the wrong shape");
    for (size_t j = 0; j < n; ++j) {
      const LinearHom& block = idempotent[i][j];
      if (block.source != summands[j] || block.target != summands[i])
        throw ContractError("block (" + std::to_string(i) + "," +
                            std::to_string(j) +
                            ") has endpoints " + block.source.str() + " -> " +
                            block.target.str());
    }
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      LinearHom acc = LinearHom::zero(summands[j], summands[i],
                                      delta.scalar_kind());
      for (size_t k = 0; k < n; ++k)
        acc = acc + compose_hom(idempotent[i][k], idempotent[k][j], delta);
      if (!(acc == idempotent[i][j]))
        throw ContractError("block matrix is not idempotent at (" +
                            std::to_string(i) + "," + std::to_string(j) + ")");
    }
  return TObject{std::move(summands), std::move(idempotent)};
}

}  // namespace tenv
