// Möbius functions, Möbius-algebra idempotents, and determinant
// factorization identities on finite partial semilattices of subobjects.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "backend.hpp"
#include "errors.hpp"
#include "scalars.hpp"

namespace tenv {

// A finite partial semilattice: an indexed element list with a partial order
// and a partial binary meet. An absent meet stands for the adjoined minimum
// ∅, which is never stored. Element order is always a linear extension of
// the partial order (smaller elements first).
class PartialSemilattice {
 public:
  // The full subobject lattice of x, in the backend's canonical order.
  static PartialSemilattice of_subobjects(const ObjectHandle& x);

  // The induced sub-poset of sub(x) on a strictly increasing index subset.
  // Meets are recomputed inside the subset; a bounded pair without a
  // greatest lower bound means the subset is not a partial semilattice.
  static PartialSemilattice restriction(const ObjectHandle& x,
                                        const std::vector<unsigned>& indices);

  unsigned size() const { return static_cast<unsigned>(elements_.size()); }
  const SubobjectClass& element(unsigned i) const { return elements_.at(i); }
  std::optional<unsigned> index_of(const SubobjectClass& u) const;

  bool leq(unsigned i, unsigned j) const { return order_.at(i).at(j) != 0; }
  std::optional<unsigned> meet(unsigned i, unsigned j) const;

  // Re-checks the semilattice axioms from scratch: meet is commutative,
  // idempotent, associative (with ∅ absorbing), and u ≤ v ⟺ u∧v = u.
  void verify_semilattice() const;

 private:
  PartialSemilattice() = default;
  void derive_meets_from_order();

  std::vector<SubobjectClass> elements_;
  std::vector<std::vector<char>> order_;  // order_[i][j] = (i ≤ j)
  std::vector<std::vector<int>> meet_;    // index, or -1 for ∅
};

// μ(u,v) as the inverse of the zeta matrix; zero unless u ≤ v.
struct MoebiusTable {
  std::vector<std::vector<std::int64_t>> mu;
};

// Invert the zeta matrix of L; verifies ζ·μ = μ·ζ = identity exactly.
MoebiusTable moebius(const PartialSemilattice& L);

// Multiplication in the Möbius algebra A(L): basis elements multiply by
// meet, with the adjoined ∅ acting as zero.
std::vector<std::int64_t> algebra_multiply(const PartialSemilattice& L,
                                           const std::vector<std::int64_t>& a,
                                           const std::vector<std::int64_t>& b);

// Coefficient vectors of the orthogonal idempotents p_v = Σ_{u≤v} μ(u,v) u.
// The returned matrix has row v listing the coefficient of each u. The
// orthogonality p_u ∧ p_v = δ_{uv} p_v and the absorption rule
// p_u ∧ v = (u ≤ v ? p_u : 0) are verified before returning.
std::vector<std::vector<std::int64_t>> lattice_idempotents(
    const PartialSemilattice& L);

struct WilfReport {
  Scalar det;                  // det(φ(u∧v)), with φ(∅) = 0
  std::vector<Scalar> factors; // φ(p_w), one per element
};

// Computes det(φ(u∧v)) and the factor list φ(p_w); the identity
// det = Π_w φ(p_w) is asserted exactly before returning.
WilfReport wilf_determinant(const PartialSemilattice& L,
                            const std::vector<Scalar>& phi);

struct StanleyReport {
  SubobjectClass image;                 // m = e_*(l)
  std::vector<std::int64_t> split;      // coefficients of p^L_{l→m} in A(L)
};

// p^L_{l→m} = Σ_{l′≤l, e_*(l′)=m} μ_L(l′,l) l′ for a surjection e and a
// subobject l of its source; the identity p^L_l = e^*(p^M_m) ∧ p^L_{l→m}
// is verified inside A(sub(source)) before returning.
StanleyReport stanley_split(const MorphismData& e, const SubobjectClass& l);

}  // namespace tenv
