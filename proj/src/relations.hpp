// Calculus of relations over a backend category: a relation x→y is a
// subobject of x×y, composed through pullbacks followed by image
// factorization, and weighted by a degree function on the factorization epi.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "backend.hpp"
#include "degree.hpp"
#include "errors.hpp"
#include "scalars.hpp"

namespace tenv {

// A subobject r ≤ x×y, tagged with the factor split (products are
// size/dimension sums, so the split is not recoverable from the ambient).
struct Relation {
  ObjectHandle left, right;
  SubobjectClass body;

  static Relation make(const ObjectHandle& left, const ObjectHandle& right,
                       SubobjectClass body);

  // The abstract object underlying the relation.
  ObjectHandle object() const { return body.object(); }

  bool operator==(const Relation& o) const {
    return left == o.left && right == o.right && body == o.body;
  }
  bool operator!=(const Relation& o) const { return !(*this == o); }
  bool operator<(const Relation& o) const;

  std::string str() const;
};

// A scalar multiple of a relation; disengaged relation = the zero morphism
// (composites vanish when the defining pullback is absent or the weight
// degenerates to 0).
struct WeightedRelation {
  Scalar coeff;
  std::optional<Relation> rel;

  static WeightedRelation zero(ScalarKind k) {
    return {Scalar::zero(k), std::nullopt};
  }
  static WeightedRelation of(Scalar c, Relation r);

  bool is_zero() const { return !rel.has_value(); }
  bool operator==(const WeightedRelation& o) const {
    return coeff == o.coeff && rel == o.rel;
  }

  std::string str() const;
};

// The two projections of a relation, r.object() → left / right.
std::pair<MorphismData, MorphismData> relation_legs(const Relation& r);

// Graph of a morphism f: x→y, the image of ⟨id, f⟩; identity relations are
// graphs of identities (diagonals).
Relation graph_of(const MorphismData& f);
Relation identity_relation(const ObjectHandle& x);

// Opposite relation: the same subobject viewed inside y×x.
Relation transpose(const Relation& r);

// s∘r: image of r×_y s → x×z for r: x→y, s: y→z. Disengaged when the
// pullback is absent (never on the shipped backends).
std::optional<Relation> classical_compose(const Relation& r,
                                          const Relation& s);

// δ(e)·(s∘r) where e: r×_y s ↠ s∘r is the factorization epi.
WeightedRelation weighted_compose(const Relation& r, const Relation& s,
                                  const DegreeFunction& delta);

// ⟨f⟩ for f: r → x×y: weight δ(r ↠ image) on the image relation.
WeightedRelation bracket(const MorphismData& f, const ObjectHandle& x,
                         const ObjectHandle& y, const DegreeFunction& delta);

// r⊗s: (x×y) → (x′×y′) from r: x→x′, s: y→y′, via the block reshuffle
// (x×x′)×(y×y′) ≅ (x×y)×(x′×y′).
Relation tensor_rel(const Relation& r, const Relation& s);

// Duality data of x: ev: x×x → ⋆ and coev: ⋆ → x×x, both carried by the
// diagonal. They satisfy the zigzag identities with coefficient 1.
std::pair<Relation, Relation> ev_coev(const ObjectHandle& x);

// The two image epis of a relation and the pushout they generate. The core
// object c is the smallest piece through which r factors; r = r2∘r1 with
// r1: x→c, r2: c→y recoverable from the legs.
struct CoreData {
  ObjectHandle core;
  SubobjectClass left_image;   // image of r in x
  SubobjectClass right_image;  // image of r in y
  MorphismData to_left_image;  // r.object() ↠ left_image.object()
  MorphismData to_right_image;
  MorphismData from_left;  // left_image.object() → core
  MorphismData from_right;
};
CoreData core(const Relation& r);

// Subquotient comparison: is y a quotient of a subobject of x?
enum class SubquotientOrder { none, equal, proper };
SubquotientOrder subquotient_order(const ObjectHandle& y,
                                   const ObjectHandle& x);

}  // namespace tenv
