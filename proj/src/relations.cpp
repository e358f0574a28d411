#include "relations.hpp"

#include <algorithm>

namespace tenv {
namespace {

void require_compatible(const ObjectHandle& a, const ObjectHandle& b,
                        const char* what) {
  if (a.kind() != b.kind())
    throw ContractError(std::string(what) + " across backends: " + a.str() +
                        " vs " + b.str());
  if (a.kind() == BackendKind::vect && a.modulus() != b.modulus())
    throw ContractError(std::string(what) + " over different primes: " +
                        a.str() + " vs " + b.str());
}

}  // namespace

Relation Relation::make(const ObjectHandle& left, const ObjectHandle& right,
                        SubobjectClass body) {
  require_compatible(left, right, "relation endpoints");
  ObjectHandle ambient = product(left, right).object;
  if (body.ambient() != ambient)
    throw ContractError("relation body lives in " + body.ambient().str() +
                        ", expected the product " + ambient.str());
  return Relation{left, right, std::move(body)};
}

bool Relation::operator<(const Relation& o) const {
  if (left != o.left) return left < o.left;
  if (right != o.right) return right < o.right;
  return body < o.body;
}

std::string Relation::str() const {
  return "rel " + left.str() + " -> " + right.str() + " [" + body.str() + "]";
}

WeightedRelation WeightedRelation::of(Scalar c, Relation r) {
  if (c.is_zero()) return zero(c.kind());
  return {std::move(c), std::move(r)};
}

std::string WeightedRelation::str() const {
  if (is_zero()) return "0";
  return coeff.str() + " * (" + rel->str() + ")";
}

std::pair<MorphismData, MorphismData> relation_legs(const Relation& r) {
  ProductData p = product(r.left, r.right);
  MorphismData m = embedding(r.body);
  return {compose(p.proj_left, m), compose(p.proj_right, m)};
}

Relation graph_of(const MorphismData& f) {
  ProductData p = product(f.source(), f.target());
  MorphismData paired = pair_morphism(p, identity(f.source()), f);
  return Relation::make(f.source(), f.target(),
                        image_factorize(paired).image);
}

Relation identity_relation(const ObjectHandle& x) {
  return graph_of(identity(x));
}

Relation transpose(const Relation& r) {
  ObjectHandle flipped = product(r.right, r.left).object;
  if (r.left.kind() == BackendKind::setop) {
    const unsigned m = r.left.size();
    const unsigned n = r.right.size();
    std::vector<std::vector<unsigned>> blocks = r.body.blocks();
    for (auto& block : blocks)
      for (auto& e : block) e = e < m ? e + n : e - m;
    return Relation{r.right, r.left,
                    SubobjectClass::setop_partition(flipped, blocks)};
  }
  const unsigned m = r.left.dim();
  std::vector<std::vector<unsigned>> rows;
  for (const auto& row : r.body.rows()) {
    std::vector<unsigned> flip(row.begin() + m, row.end());
    flip.insert(flip.end(), row.begin(), row.begin() + m);
    rows.push_back(std::move(flip));
  }
  return Relation{r.right, r.left,
                  SubobjectClass::vect_subspace(flipped, rows)};
}

std::optional<Relation> classical_compose(const Relation& r,
                                          const Relation& s) {
  if (r.right != s.left)
    throw ContractError("relation composition endpoint mismatch: " +
                        r.right.str() + " vs " + s.left.str());
  auto [rx, ry] = relation_legs(r);
  auto [sy, sz] = relation_legs(s);
  std::optional<SpanData> pb = pullback(ry, sy);
  if (!pb) return std::nullopt;
  ProductData pxz = product(r.left, s.right);
  MorphismData into = pair_morphism(pxz, compose(rx, pb->to_left),
                                    compose(sz, pb->to_right));
  return Relation{r.left, s.right, image_factorize(into).image};
}

WeightedRelation weighted_compose(const Relation& r, const Relation& s,
                                  const DegreeFunction& delta) {
  if (delta.backend() != r.left.kind())
    throw ContractError("degree function backend does not match the relation");
  if (r.right != s.left)
    throw ContractError("relation composition endpoint mismatch: " +
                        r.right.str() + " vs " + s.left.str());
  auto [rx, ry] = relation_legs(r);
  auto [sy, sz] = relation_legs(s);
  std::optional<SpanData> pb = pullback(ry, sy);
  if (!pb) return WeightedRelation::zero(delta.scalar_kind());
  ProductData pxz = product(r.left, s.right);
  MorphismData into = pair_morphism(pxz, compose(rx, pb->to_left),
                                    compose(sz, pb->to_right));
  ImageFactorization fac = image_factorize(into);
  return WeightedRelation::of(delta.evaluate(fac.epi),
                              Relation{r.left, s.right, fac.image});
}

WeightedRelation bracket(const MorphismData& f, const ObjectHandle& x,
                         const ObjectHandle& y, const DegreeFunction& delta) {
  ObjectHandle ambient = product(x, y).object;
  if (f.target() != ambient)
    throw ContractError("bracket target " + f.target().str() +
                        " is not the product " + ambient.str());
  ImageFactorization fac = image_factorize(f);
  return WeightedRelation::of(delta.evaluate(fac.epi),
                              Relation{x, y, fac.image});
}

Relation tensor_rel(const Relation& r, const Relation& s) {
  require_compatible(r.left, s.left, "tensor factors");
  ObjectHandle left = product(r.left, s.left).object;
  ObjectHandle right = product(r.right, s.right).object;
  ObjectHandle ambient = product(left, right).object;
  if (r.left.kind() == BackendKind::setop) {
    const unsigned m = r.left.size(), mp = r.right.size();
    const unsigned n = s.left.size();
    // Reshuffle (x×x′)×(y×y′) → (x×y)×(x′×y′): x keeps its slot, y moves
    // behind x, primed parts follow in the same pattern.
    std::vector<std::vector<unsigned>> blocks;
    for (auto block : r.body.blocks()) {
      for (auto& e : block) e = e < m ? e : (m + n) + (e - m);
      blocks.push_back(std::move(block));
    }
    for (auto block : s.body.blocks()) {
      for (auto& e : block) e = e < n ? m + e : (m + n + mp) + (e - n);
      blocks.push_back(std::move(block));
    }
    return Relation{left, right,
                    SubobjectClass::setop_partition(ambient, blocks)};
  }
  const unsigned m = r.left.dim(), mp = r.right.dim();
  const unsigned n = s.left.dim(), np = s.right.dim();
  std::vector<std::vector<unsigned>> rows;
  for (const auto& row : r.body.rows()) {
    std::vector<unsigned> v(m + n + mp + np, 0);
    for (unsigned j = 0; j < m; ++j) v[j] = row[j];
    for (unsigned j = 0; j < mp; ++j) v[m + n + j] = row[m + j];
    rows.push_back(std::move(v));
  }
  for (const auto& row : s.body.rows()) {
    std::vector<unsigned> v(m + n + mp + np, 0);
    for (unsigned j = 0; j < n; ++j) v[m + j] = row[j];
    for (unsigned j = 0; j < np; ++j) v[m + n + mp + j] = row[n + j];
    rows.push_back(std::move(v));
  }
  return Relation{left, right, SubobjectClass::vect_subspace(ambient, rows)};
}

std::pair<Relation, Relation> ev_coev(const ObjectHandle& x) {
  ObjectHandle xx = product(x, x).object;
  ObjectHandle point = terminal(x);
  // Both are carried by the diagonal of x×x; the terminal factor adds
  // nothing to the ambient, so the same subobject serves twice.
  SubobjectClass diag = identity_relation(x).body;
  Relation ev{xx, point, diag};
  Relation coev{point, xx, diag};
  return {ev, coev};
}

CoreData core(const Relation& r) {
  auto [rx, ry] = relation_legs(r);
  ImageFactorization fx = image_factorize(rx);
  ImageFactorization fy = image_factorize(ry);
  CospanData po = pushout(fx.epi, fy.epi);
  return CoreData{po.apex,    fx.image,     fy.image,    fx.epi,
                  fy.epi,     po.from_left, po.from_right};
}

SubquotientOrder subquotient_order(const ObjectHandle& y,
                                   const ObjectHandle& x) {
  require_compatible(y, x, "subquotient comparison");
  const bool setop = x.kind() == BackendKind::setop;
  auto extent = [setop](const ObjectHandle& o) {
    return setop ? o.size() : o.dim();
  };
  bool found = false;
  for (const SubobjectClass& u : subobjects(x)) {
    ObjectHandle w = u.object();
    if (extent(w) < extent(y)) continue;
    // Both backends admit a surjection exactly when the extent drops;
    // construct the canonical one as a witness.
    MorphismData e =
        setop ? [&] {
          std::vector<unsigned> rev(y.size());
          for (unsigned i = 0; i < y.size(); ++i) rev[i] = i;
          return MorphismData::setop(w, y, std::move(rev));
        }()
              : [&] {
                  std::vector<unsigned> entries(
                      static_cast<size_t>(y.dim()) * w.dim(), 0);
                  for (unsigned i = 0; i < y.dim(); ++i)
                    entries[static_cast<size_t>(i) * w.dim() + i] = 1;
                  return MorphismData::vect(w, y, std::move(entries));
                }();
    if (is_surjective(e)) {
      found = true;
      break;
    }
  }
  if (!found) return SubquotientOrder::none;
  return extent(y) == extent(x) ? SubquotientOrder::equal
                                : SubquotientOrder::proper;
}

}  // namespace tenv
