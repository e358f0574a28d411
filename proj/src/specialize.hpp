// Uniform functors into finite sets and the specialization functor they
// induce: formal linear combinations of relations become honest integer
// matrices acting on the free modules K[P(x)]. For the set backend this
// lands in permutation-style representations of the symmetric group of the
// target set; for the linear backend, of the general linear group of the
// source space.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "envelope.hpp"
#include "radical.hpp"

namespace tenv {

// A choice of uniform functor P. The set backend fixes a target set X and
// sends an object A to the set of all maps U(A) → X; the linear backend
// fixes a source space X = F_q^n and sends U to the linear maps X → U. Both
// are left exact, send surjections to uniform maps, and admit exactly one
// adapted degree parameter: t = |X| resp. t = q^n.
class UniformFunctor {
 public:
  static UniformFunctor setop_functor(unsigned x_size);
  static UniformFunctor vect_functor(unsigned q, unsigned n);

  BackendKind backend() const { return kind_; }
  unsigned modulus() const { return q_; }    // q for vect, 0 for setop
  unsigned parameter() const { return n_; }  // |X| resp. n
  Rational adapted_parameter() const;        // t = |X| resp. q^n
  DegreeFunction adapted_degree() const;

 private:
  UniformFunctor(BackendKind kind, unsigned q, unsigned n)
      : kind_(kind), q_(q), n_(n) {}
  BackendKind kind_;
  unsigned q_, n_;
};

// P(x) as an explicit element list in lexicographic order. An element is a
// value tuple over U(x) (setop) resp. the row-major dim(x)×n matrix of a
// linear map X → x (vect); either way a digit string, so membership indices
// are pure base-|X| resp. base-q arithmetic.
struct PSet {
  ObjectHandle x;
  unsigned base = 0;   // |X| resp. q
  unsigned width = 0;  // |x| resp. dim(x)·n
  std::vector<std::vector<unsigned>> elements;

  size_t size() const { return elements.size(); }
  size_t index_of(const std::vector<unsigned>& element) const;
};

PSet apply_P(const UniformFunctor& P, const ObjectHandle& x);

// P(f) as an index map between the canonical element orders.
struct PMap {
  MorphismData f;
  size_t source_size = 0, target_size = 0;
  std::vector<size_t> image;  // index in P(source) → index in P(target)
};

PMap apply_P(const UniformFunctor& P, const MorphismData& f);

// The 0/1 matrix of a set map, columns indexed by the source elements.
DenseMatrix set_map_matrix(const PMap& m);

// The common fiber size of a uniform map (the degree), or nothing if the
// fibers differ or the target is empty.
std::optional<size_t> uniform_degree(const PMap& m);

// One relation specialized: P(r→y)·P(r→x)^∨, assembled in a single pass
// over P(r).
DenseMatrix specialize_relation(const UniformFunctor& P, const Relation& r);

// A morphism of the linear category specialized to a matrix over the
// rationals; all entries are integers (sums of relation matrices).
struct SpecializedHom {
  size_t source_dim = 0, target_dim = 0;  // |P(x)|, |P(y)|
  DenseMatrix matrix;
};

SpecializedHom specialize(const UniformFunctor& P, const LinearHom& F);

// Sweep of surjections up to the given source size/dimension: every P(e)
// must be uniform, δ(e) must equal the fiber degree, and sampled pullback
// squares must satisfy the transposed-matrix exchange identity
// P(f)ᵀ·P(g) = P(p→x)·P(p→y)ᵀ that characterizes pullbacks of sets in
// characteristic zero. δ must be at a rational parameter.
struct AdaptedReport {
  bool uniform = true;
  bool adapted = true;
  bool left_exact = true;
  size_t surjections_checked = 0;
  size_t squares_checked = 0;
  std::optional<MorphismData> witness;  // first failing surjection

  bool passed() const { return uniform && adapted && left_exact; }
};

AdaptedReport uniformity_and_adapted_check(const UniformFunctor& P,
                                           const DegreeFunction& delta,
                                           unsigned max_size);

// specialize(G∘F) = specialize(G)·specialize(F) over basis-relation pairs
// F: x→y, G: y→z, and specialize(F⊗G) = Kronecker product, both exact. At
// most `budget` pairs are checked (evenly strided when the full count is
// larger). Composition uses δ, so a mis-adapted parameter produces a
// failing pair as a witness.
struct FunctorialityReport {
  size_t composition_pairs = 0;
  size_t tensor_pairs = 0;
  bool passed = true;
  std::optional<std::pair<Relation, Relation>> witness;  // failing (g, f)
};

FunctorialityReport functoriality_check(const UniformFunctor& P,
                                        const DegreeFunction& delta,
                                        const ObjectHandle& x,
                                        const ObjectHandle& y,
                                        const ObjectHandle& z,
                                        size_t budget);

// The decomposition P(x) = ⊔_u P*(u) over the subobjects of x, where P*(u)
// collects the elements whose canonical invariant is exactly u: the
// level-set partition of the tuple (setop) resp. the image subspace of the
// map (vect). Each nonempty piece is a single orbit of the symmetry group
// of P, because the invariant is complete; oversized subobjects simply
// yield empty pieces (reported with count 0, not an error).
struct PstarRow {
  SubobjectClass u;
  size_t count = 0;
  bool single_orbit = false;  // nonempty (the invariant is complete)
};

struct PstarReport {
  ObjectHandle x;
  std::vector<PstarRow> rows;     // parallel to subobjects(x)
  size_t covered = 0;             // Σ counts; always |P(x)|
  bool lattice_consistent = false;  // |P(u)| = Σ_{v≤u} counts for every u
  size_t nonempty_orbits = 0;
  size_t invariant_rank = 0;  // rank of the specialized Hom(𝟙, [x])
  bool rank_matches = false;  // invariant_rank == nonempty_orbits
};

PstarReport pstar_and_invariants(const UniformFunctor& P,
                                 const ObjectHandle& x);

// dim Hom([x],[y]) minus the trace-radical dimension at the adapted
// parameter, compared with the dimension of equivariant maps
// K[P(x)] → K[P(y)] counted by brute force as the number of symmetry
// orbits on P(x)×P(y) (complete joint invariants: level-set partition of
// the concatenated tuple resp. image of the stacked matrix).
struct InterpolationReport {
  ObjectHandle x, y;
  size_t hom_dim = 0;
  size_t radical_dim = 0;
  size_t quotient_dim = 0;     // hom_dim − radical_dim
  size_t equivariant_dim = 0;  // orbit count on P(x)×P(y)
  bool matches = false;
};

InterpolationReport interpolation_dim_check(const UniformFunctor& P,
                                            const ObjectHandle& x,
                                            const ObjectHandle& y);

}  // namespace tenv
