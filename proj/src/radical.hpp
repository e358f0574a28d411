// Obstruction scalars ω_e, Gram pairings and their determinant
// factorization, the singularity verdict for degree functions, trace
// radicals of Hom-spaces, and Wedderburn block data of endomorphism
// algebras modulo their radical.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "degree.hpp"
#include "envelope.hpp"
#include "moebius.hpp"

namespace tenv {

// One Möbius term of an obstruction value: a subobject w of the source that
// still covers the whole target, its Möbius value μ(w, x), and the degree of
// the induced surjection w ↠ y.
struct OmegaTerm {
  SubobjectClass w;
  std::int64_t mu;
  Scalar degree;
};

// ω_e = Σ μ(w,x)·δ(w↠y), summed over the subobjects w ≤ x whose direct
// image under e is all of y. The term ledger is kept alongside the value;
// value = Σ terms exactly.
struct OmegaValue {
  MorphismData e;
  Scalar value;
  std::vector<OmegaTerm> terms;
};

OmegaValue omega(const MorphismData& e, const DegreeFunction& delta);

// The pairing matrix β(u,v) = δ(u∧v ↠ ⋆) over the canonical subobject
// basis of x, its determinant Ω_x, and the obstruction factorization
// Ω_x = Π_{u ∈ sub(x)} ω_{u↠⋆}, which is asserted exactly on construction.
// A backend with partial meets would contribute 0 entries for absent meets
// (δ(∅→⋆) = 0); both shipped backends have total meets.
struct GramReport {
  ObjectHandle x;
  DenseMatrix matrix;
  Scalar det;
  std::vector<OmegaValue> omega_factors;
};

GramReport gram_Omega(const ObjectHandle& x, const DegreeFunction& delta);

// Surjections out of x admitting no strictly intermediate quotient, one
// representative per equivalence class (post-composition with isomorphisms):
// the target drops by exactly one point resp. one dimension, so the classes
// are indexed by the dropped point resp. the kernel line.
std::vector<MorphismData> indecomposable_surjections(const ObjectHandle& x);

// The ω-criterion swept over every indecomposable surjection whose source
// size/dimension is within the bound. For a symbolic parameter the rational
// roots of the product are the singular specializations; for a rational
// parameter the verdict is pass/fail with a failing witness.
struct SingularityReport {
  bool symbolic = false;
  unsigned bound = 0;
  Scalar product;                         // Π ω_e over the swept surjections
  std::vector<Rational> singular_params;  // symbolic: sorted rational roots
  bool nonsingular = false;               // specialized: every ω_e ≠ 0
  std::optional<MorphismData> witness;    // specialized: first ω_e = 0
};

SingularityReport nonsingularity_verdict(const DegreeFunction& delta,
                                         unsigned bound);

// Both sides of the multiplicativity identity ω_{e∘ē} = ω_e·ω_ē, computed
// independently from the term ledgers.
struct OmegaMultReport {
  OmegaValue composite;  // ω of e ∘ ebar
  OmegaValue outer;      // ω of e
  OmegaValue inner;      // ω of ebar
  bool passed = false;
};

OmegaMultReport omega_multiplicativity_check(const MorphismData& ebar,
                                             const MorphismData& e,
                                             const DegreeFunction& delta);

// The trace radical 𝒩(x,y) = {F: x→y | tr(F∘G) = 0 for all G: y→x},
// computed as the kernel of the trace-pairing matrix. Requires a field
// scalar kind (rational coefficients, or rational functions for symbolic
// parameters).
struct RadicalReport {
  ObjectHandle source, target;
  size_t dimension = 0;
  std::vector<LinearHom> basis;
};

RadicalReport radical(const ObjectHandle& x, const ObjectHandle& y,
                      const DegreeFunction& delta);

// The same computation between formal summands: Hom((A,p),(B,q)) is the
// subspace {F = q∘F∘p} of block matrices, and the radical is the kernel of
// the trace pairing restricted to that subspace.
using BlockHom = std::vector<std::vector<LinearHom>>;

struct TRadicalReport {
  size_t hom_dimension = 0;  // dim Hom((A,p),(B,q))
  size_t dimension = 0;      // dim of the radical inside it
  std::vector<BlockHom> basis;
};

TRadicalReport radical(const TObject& X, const TObject& Y,
                       const DegreeFunction& delta);

// One central cell of End([x])/𝒩: a split cell has a one-dimensional
// center and algebra dimension d², giving a d×d matrix block; a cell whose
// center refuses to split over the rationals is reported with its center
// dimension instead of guessed.
struct BlockCell {
  size_t center_dim = 0;
  size_t algebra_dim = 0;
  std::optional<size_t> matrix_size;
};

// Wedderburn block data of End([x])/𝒩 over a field. At a rational
// parameter the center is split into cells by the rational roots of minimal
// polynomials of center elements; at a symbolic parameter the block count
// is reported as the dimension of the center over the rational-function
// field and no splitting is attempted.
struct BlockReport {
  ObjectHandle x;
  bool symbolic = false;
  size_t quotient_dim = 0;  // dim End([x]) − dim 𝒩
  size_t center_dim = 0;
  bool split = false;             // every cell reached a 1-dim center
  std::vector<size_t> block_dims; // sorted d_i of the split cells
  std::vector<BlockCell> cells;

  size_t block_count() const { return symbolic ? center_dim : cells.size(); }
};

BlockReport semisimple_block_dims(const ObjectHandle& x,
                                  const DegreeFunction& delta);

// Number of partitions of n (the irreducible-character count of S_n).
unsigned long long partition_count(unsigned n);

// Number of conjugacy classes of GL_d(F_q), by brute-force enumeration.
// Bounded: q^d ≤ 64 and q^(d²) ≤ 4096.
size_t gl_conjugacy_classes(unsigned q, unsigned d);

// One row of the simple-object census: an iso class of subquotients y ⪯ x
// and the irreducible-representation count of its automorphism group.
struct CensusRow {
  ObjectHandle y;
  size_t irreps = 0;
};

// Comparison of the predicted block count Σ_{y⪯x} #irreps(Aut(y)) with the
// computed block count of End([x])/𝒩 at a generic parameter. A rational
// parameter is accepted only after the singularity sweep at twice the size
// of x certifies it; a symbolic parameter is cross-checked by re-running
// the block computation at a certified rational specialization.
struct CensusReport {
  ObjectHandle x;
  std::vector<CensusRow> rows;
  size_t predicted = 0;
  size_t computed = 0;
  bool matches = false;
  BlockReport blocks;
  std::optional<BlockReport> specialized_cross_check;
};

CensusReport simple_census(const ObjectHandle& x, const DegreeFunction& delta);

}  // namespace tenv
