#pragma once

// Two concrete regular-category backends behind one tagged value interface.
//
//   setop — the opposite of finite sets. An object is the set {1..n} (stored
//           0-based); a morphism x→y is carried by a reversed set map
//           U(y)→U(x); surjections are the morphisms whose reversed map is
//           injective. Subobjects of x are the set partitions of U(x).
//   vect  — finite-dimensional vector spaces over a prime field F_q.
//           Morphisms are (dim target × dim source) matrices mod q;
//           subobjects are subspaces in row-reduced echelon form.
//
// Both backends have a terminal object ⋆ (the size-0 set resp. the zero
// space), images, pullbacks, pushouts of surjections, and finite products;
// surjections are stable under pullback. Products are size/dimension sums,
// so the monoidal structure built on top of them is strictly associative.
//
// All values are immutable after construction; free functions never mutate
// their arguments. Subobject enumeration is cached per object handle behind
// a mutex, so concurrent readers are safe.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace tenv {

// Hard enumeration limits, read once from the environment.
//   TENV_MAX_SETSIZE — largest setop object size whose subobjects (set
//                      partitions) may be enumerated; default 8.
//   TENV_MAX_QDIM    — largest q^dim for which a vect object may be
//                      enumerated; default 4096.
//   TENV_MAX_PSIZE   — largest underlying-set size a uniform functor may
//                      produce; default 10000.
struct Limits {
  unsigned max_setsize = 8;
  unsigned long long max_qsize = 4096;
  unsigned long long max_psize = 10000;
};
const Limits& limits();

enum class BackendKind { setop, vect };

std::string backend_name(BackendKind k);

// ---------------------------------------------------------------------------
// Objects
// ---------------------------------------------------------------------------

class ObjectHandle {
 public:
  static ObjectHandle setop(unsigned size);
  static ObjectHandle vect(unsigned q, unsigned dim);  // q must be prime

  BackendKind kind() const { return kind_; }
  // Number of elements of the underlying set (setop only).
  unsigned size() const;
  // Dimension (vect only).
  unsigned dim() const;
  // The prime q (vect only).
  unsigned modulus() const;
  // Terminal object of the same backend: size resp. dimension zero.
  bool is_terminal() const { return n_ == 0; }

  bool operator==(const ObjectHandle& o) const {
    return kind_ == o.kind_ && n_ == o.n_ && q_ == o.q_;
  }
  bool operator!=(const ObjectHandle& o) const { return !(*this == o); }
  bool operator<(const ObjectHandle& o) const;

  std::string str() const;  // "setop:3" / "vect:q=2,d=2"

 private:
  ObjectHandle(BackendKind kind, unsigned n, unsigned q)
      : kind_(kind), n_(n), q_(q) {}
  BackendKind kind_;
  unsigned n_;  // size (setop) or dimension (vect)
  unsigned q_;  // prime modulus (vect), 0 for setop
};

ObjectHandle terminal(const ObjectHandle& context);

// ---------------------------------------------------------------------------
// Morphisms
// ---------------------------------------------------------------------------

class MorphismData {
 public:
  // rev is the reversed set map U(target)→U(source): rev[i] ∈ {0..size-1}.
  static MorphismData setop(const ObjectHandle& source,
                            const ObjectHandle& target,
                            std::vector<unsigned> rev);
  // entries is row-major (dim target × dim source), reduced mod q.
  static MorphismData vect(const ObjectHandle& source,
                           const ObjectHandle& target,
                           std::vector<unsigned> entries);

  const ObjectHandle& source() const { return source_; }
  const ObjectHandle& target() const { return target_; }
  BackendKind kind() const { return source_.kind(); }

  const std::vector<unsigned>& rev() const;      // setop
  const std::vector<unsigned>& entries() const;  // vect, row-major
  unsigned entry(unsigned row, unsigned col) const;

  bool operator==(const MorphismData& o) const;
  bool operator!=(const MorphismData& o) const { return !(*this == o); }

  std::string str() const;

 private:
  MorphismData(ObjectHandle source, ObjectHandle target,
               std::vector<unsigned> data)
      : source_(source), target_(target), data_(std::move(data)) {}
  ObjectHandle source_, target_;
  std::vector<unsigned> data_;
};

MorphismData identity(const ObjectHandle& x);
// The unique morphism x → ⋆ (always surjective).
MorphismData terminal_morphism(const ObjectHandle& x);

// compose(f, g) = f ∘ g, defined when target(g) = source(f).
MorphismData compose(const MorphismData& f, const MorphismData& g);

bool is_surjective(const MorphismData& f);
bool is_injective(const MorphismData& f);
bool is_isomorphism(const MorphismData& f);

// ---------------------------------------------------------------------------
// Subobjects
// ---------------------------------------------------------------------------

// An equivalence class of injective morphisms into the ambient object, in a
// canonical encoding: setop — a set partition with sorted blocks ordered by
// minimal element; vect — an RREF basis matrix. Equality of encodings is
// equality of subobjects.
class SubobjectClass {
 public:
  static SubobjectClass setop_partition(const ObjectHandle& ambient,
                                        std::vector<std::vector<unsigned>> blocks);
  static SubobjectClass vect_subspace(const ObjectHandle& ambient,
                                      std::vector<std::vector<unsigned>> rows);

  const ObjectHandle& ambient() const { return ambient_; }
  // The abstract object this subobject is an instance of: setop size =
  // number of blocks, vect dimension = rank.
  ObjectHandle object() const;

  const std::vector<std::vector<unsigned>>& blocks() const;  // setop
  const std::vector<std::vector<unsigned>>& rows() const;    // vect

  bool operator==(const SubobjectClass& o) const;
  bool operator!=(const SubobjectClass& o) const { return !(*this == o); }
  // Canonical order: smaller object first, ties by encoding. Lists sorted
  // this way are linear extensions of the subobject order.
  bool operator<(const SubobjectClass& o) const;

  std::string str() const;

 private:
  SubobjectClass(ObjectHandle ambient,
                 std::vector<std::vector<unsigned>> data)
      : ambient_(ambient), data_(std::move(data)) {}
  ObjectHandle ambient_;
  std::vector<std::vector<unsigned>> data_;  // blocks or RREF rows
};

// The maximal subobject x ≤ x (discrete partition / whole space).
SubobjectClass full_subobject(const ObjectHandle& x);
// The injective morphism u.object() → u.ambient() representing u.
MorphismData embedding(const SubobjectClass& u);

// Complete subobject list in canonical order (coarsest/smallest first; the
// order is a linear extension of ≤). Cached per object; the reference stays
// valid for the lifetime of the process. Throws ResourceError beyond the
// configured enumeration bounds.
const std::vector<SubobjectClass>& subobjects(const ObjectHandle& x);

// u ≤ v in sub(x): the representing mono of u factors through v. For setop
// this means partition(v) refines partition(u); for vect, u ⊆ v.
bool subobject_leq(const SubobjectClass& u, const SubobjectClass& v);

// Greatest lower bound in sub(x); total for both shipped backends.
SubobjectClass subobject_meet(const SubobjectClass& u, const SubobjectClass& v);

// ---------------------------------------------------------------------------
// Factorization, limits, colimits
// ---------------------------------------------------------------------------

struct ImageFactorization {
  MorphismData epi;      // source ↠ image object
  SubobjectClass image;  // the image as a subobject of the target
  MorphismData mono;     // image object ↪ target; equals embedding(image)
};

// f = mono ∘ epi with epi surjective and mono injective; unique because the
// encodings are canonical.
ImageFactorization image_factorize(const MorphismData& f);

struct SpanData {
  ObjectHandle apex;
  MorphismData to_left, to_right;
};

// Pullback of f: x→z, g: y→z, returned as (p, p→x, p→y). Both shipped
// backends have all pullbacks, so the result is always engaged; the optional
// is the interface contract for backends with partial limits, where an absent
// pullback makes composite relations vanish.
std::optional<SpanData> pullback(const MorphismData& f, const MorphismData& g);

struct CospanData {
  ObjectHandle apex;
  MorphismData from_left, from_right;
};

// Pushout of surjections e1: x↠y1, e2: x↠y2, returned as (c, y1→c, y2→c).
CospanData pushout(const MorphismData& e1, const MorphismData& e2);

struct ProductData {
  ObjectHandle object;
  MorphismData proj_left, proj_right;
};

// Binary product (disjoint union resp. direct sum; sizes/dimensions add).
ProductData product(const ObjectHandle& x, const ObjectHandle& y);

// The pairing ⟨f, g⟩: w → x×y induced by f: w→x, g: w→y.
MorphismData pair_morphism(const ProductData& p, const MorphismData& f,
                           const MorphismData& g);

// ---------------------------------------------------------------------------
// Galois maps on subobject lattices along a surjection e: x ↠ y
// ---------------------------------------------------------------------------

// e_*(u): the image of u ↣ x ↠ y as a subobject of y.
SubobjectClass direct_image(const MorphismData& e, const SubobjectClass& u);
// e^*(v): the pullback x ×_y v as a subobject of x.
SubobjectClass inverse_image(const MorphismData& e, const SubobjectClass& v);
// Both at once, matching the adjunction e_*(u) ≤ v ⟺ u ≤ e^*(v).
std::pair<SubobjectClass, SubobjectClass> galois_images(
    const MorphismData& e, const SubobjectClass& u, const SubobjectClass& v);

}  // namespace tenv
