// The K-linear category of formal combinations of relations with
// degree-weighted composition: Hom-space bases, linear composition, tensor,
// duality, traces, and endomorphism algebras with their structure constants.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "backend.hpp"
#include "degree.hpp"
#include "errors.hpp"
#include "relations.hpp"
#include "scalars.hpp"

namespace tenv {

// Hom(x,y): free module on the relations x→y in canonical order.
struct HomSpace {
  ObjectHandle source, target;
  std::vector<Relation> basis;

  size_t dim() const { return basis.size(); }
  size_t index_of(const Relation& r) const;  // ContractError if absent
};

HomSpace hom_basis(const ObjectHandle& x, const ObjectHandle& y);

// A morphism of the linear category: coefficients over hom_basis(source,
// target), all of one scalar kind.
struct LinearHom {
  ObjectHandle source, target;
  ScalarKind kind;
  std::vector<Scalar> coeffs;

  static LinearHom zero(const ObjectHandle& x, const ObjectHandle& y,
                        ScalarKind k);
  static LinearHom single(const Relation& r, Scalar c);
  static LinearHom identity_hom(const ObjectHandle& x, ScalarKind k);
  // The graph of a backend morphism, coefficient 1: the canonical functor
  // from the backend into the linear category.
  static LinearHom of_morphism(const MorphismData& f, ScalarKind k);

  bool is_zero() const;
  LinearHom operator+(const LinearHom& o) const;
  LinearHom operator-(const LinearHom& o) const;
  LinearHom operator-() const;
  LinearHom scaled(const Scalar& c) const;
  bool operator==(const LinearHom& o) const;
  bool operator!=(const LinearHom& o) const { return !(*this == o); }

  std::string str() const;
};

// G∘F, the bilinear extension of weighted composition.
LinearHom compose_hom(const LinearHom& G, const LinearHom& F,
                      const DegreeFunction& delta);

// F⊗G and the dual F^∨ (transposed relations), extended bilinearly.
LinearHom tensor_hom(const LinearHom& F, const LinearHom& G);
LinearHom dual_hom(const LinearHom& F);

// Trace of an endomorphism via the closed composite
// 𝟙 → x⊗x → x⊗x → 𝟙 (coev, then F⊗id, then ev), evaluated relation by
// relation so no oversized Hom-space is ever enumerated.
Scalar trace(const LinearHom& F, const DegreeFunction& delta);
// trace of the identity; works directly on the diagonal relation, so it is
// available even where End(x) itself would exceed enumeration bounds.
Scalar dimension(const ObjectHandle& x, const DegreeFunction& delta);

// End(x) with its multiplication table. Composition of two basis relations
// is a weight times a single basis relation, so the structure-constant
// tensor is stored sparsely: product[i][j] = (c, k) means
// basis[i] ∘ basis[j] = c · basis[k].
struct EndAlgebra {
  ObjectHandle object;
  DegreeFunction delta;
  HomSpace space;
  std::vector<std::vector<std::pair<Scalar, size_t>>> product;
  std::vector<Scalar> traces;  // trace of each basis relation

  size_t dim() const { return space.dim(); }
  // c_{ij}^k as a dense accessor.
  Scalar structure_constant(size_t i, size_t j, size_t k) const;
  std::vector<Scalar> unit() const;  // the diagonal relation's vector
  // a·b = (a as endomorphism) ∘ (b as endomorphism), coefficientwise.
  std::vector<Scalar> multiply(const std::vector<Scalar>& a,
                               const std::vector<Scalar>& b) const;
  Scalar trace_of(const std::vector<Scalar>& a) const;
};

EndAlgebra end_algebra(const ObjectHandle& x, const DegreeFunction& delta);

// Independent diagrammatic oracle for composition over the set backend:
// stack a partition of {x, y} on a partition of {y, z}, join through the
// middle layer, count the components that never touch an outer layer, and
// return the outer-layer partition with that count.
std::pair<std::vector<std::vector<unsigned>>, unsigned>
partition_oracle_compose(unsigned m, unsigned n, unsigned k,
                         const std::vector<std::vector<unsigned>>& p,
                         const std::vector<std::vector<unsigned>>& q);

// End(𝟙) is one-dimensional with unit multiplication for both backends.
struct EndUnitReport {
  unsigned setop_dim = 0;
  unsigned vect_dim = 0;
  bool multiplication_matches = false;
  bool passed() const {
    return setop_dim == 1 && vect_dim == 1 && multiplication_matches;
  }
};
EndUnitReport end_unit_check();

// A formal direct summand: a tuple of objects with an idempotent block
// matrix over the linear category. Construction verifies p² = p exactly.
struct TObject {
  std::vector<ObjectHandle> summands;
  std::vector<std::vector<LinearHom>> idempotent;  // [i][j]: summand j → i

  static TObject make(std::vector<ObjectHandle> summands,
                      std::vector<std::vector<LinearHom>> idempotent,
                      const DegreeFunction& delta);
};

}  // namespace tenv
