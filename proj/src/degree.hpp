// Degree functions δ on surjections: the built-in families, axiom
// validation, composition factors, and the rank/degree transport available
// on the pointed backend.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "backend.hpp"
#include "errors.hpp"
#include "scalars.hpp"

namespace tenv {

enum class DegreeFamily { setop, vect, length, trivial, table };
std::string degree_family_name(DegreeFamily f);

// A degree function assigns a scalar to every surjection, normalized on
// identities (D1), invariant under pullback (D2), and multiplicative under
// composition (D3). Only closed families are shipped; a user-supplied table
// is accepted but must pass validate_degree_axioms before being trusted.
class DegreeFunction {
 public:
  // t^{(source size) − (target size)}: the count of dropped points.
  static DegreeFunction setop_family(Scalar t);
  // t^{dim ker e}.
  static DegreeFunction vect_family(unsigned q, Scalar t);
  // Π_s t_s^{ℓ_s(ker e)}; the prime field has a single simple object, so
  // this instantiates to t^{length of the kernel} = t^{dim ker e}.
  static DegreeFunction length_family(unsigned q, Scalar t);
  static DegreeFunction trivial_family(BackendKind kind, unsigned q = 0);
  // Values keyed by (source, target) size/dimension; complete enough for
  // the skeletal shipped backends where surjections with equal endpoints
  // are all equivalent.
  static DegreeFunction table_family(
      BackendKind kind, unsigned q,
      std::map<std::pair<unsigned, unsigned>, Scalar> values);

  BackendKind backend() const { return kind_; }
  DegreeFamily family() const { return family_; }
  unsigned modulus() const { return q_; }
  const Scalar& parameter() const { return t_; }
  ScalarKind scalar_kind() const { return t_.kind(); }

  Scalar evaluate(const MorphismData& e) const;

  bool operator==(const DegreeFunction& o) const;

 private:
  DegreeFunction(BackendKind kind, unsigned q, DegreeFamily family, Scalar t)
      : kind_(kind), q_(q), family_(family), t_(std::move(t)) {}
  BackendKind kind_;
  unsigned q_;
  DegreeFamily family_;
  Scalar t_;
  std::map<std::pair<unsigned, unsigned>, Scalar> table_;
};

struct DegreeAxiomReport {
  bool d1_pass = true;
  bool d2_pass = true;
  bool d3_pass = true;
  unsigned samples = 0;
  std::string counterexample;  // first failure, human-readable
  bool passed() const { return d1_pass && d2_pass && d3_pass; }
};

// Samples identities (D1), pullbacks of surjections (D2), and composable
// surjection pairs (D3) within the enumeration bounds; deterministic.
DegreeAxiomReport validate_degree_axioms(const DegreeFunction& delta,
                                         unsigned budget);

// Jordan–Hölder factors of x on the pointed backend: d copies of the
// 1-dimensional simple for a d-dimensional space. Two distinct composition
// series are computed and compared for d ≥ 2.
std::vector<ObjectHandle> composition_factors(const ObjectHandle& x);

// A rank function on the pointed backend: ρ(x) = t^{dim x}. The shipped
// degree families on FinVectFq are exactly the transports of these.
struct RankFunction {
  unsigned q;
  Scalar t;
  Scalar evaluate(const ObjectHandle& x) const;
};

// δ(e) := ρ(ker e) and ρ(x) := δ(x↠0); mutually inverse on the shipped
// families.
DegreeFunction rank_to_degree(const RankFunction& rho);
RankFunction degree_to_rank(const DegreeFunction& delta);

}  // namespace tenv
