#include "specialize.hpp"

#include <set>
#include <vector>

#include "doctest.h"

using namespace tenv;

namespace {

ObjectHandle S(unsigned n) { return ObjectHandle::setop(n); }
ObjectHandle V(unsigned q, unsigned d) { return ObjectHandle::vect(q, d); }

DegreeFunction num_setop(long long t) {
  return DegreeFunction::setop_family(Scalar(Rational(t)));
}
DegreeFunction num_vect(unsigned q, long long t) {
  return DegreeFunction::vect_family(q, Scalar(Rational(t)));
}

const Scalar kOne = Scalar::one(ScalarKind::rational);

// The all-related endomorphism relation on [1].
Relation e_rel() {
  return Relation::make(S(1), S(1), full_subobject(S(2)));
}

}  // namespace

TEST_CASE("uniform functor values") {
  const UniformFunctor P3 = UniformFunctor::setop_functor(3);

  SUBCASE("value tuples in lexicographic order") {
    const PSet p = apply_P(P3, S(2));
    REQUIRE(p.size() == 9);
    CHECK(p.elements[0] == std::vector<unsigned>{0, 0});
    CHECK(p.elements[1] == std::vector<unsigned>{0, 1});
    CHECK(p.elements[5] == std::vector<unsigned>{1, 2});
    CHECK(p.elements[8] == std::vector<unsigned>{2, 2});
    for (size_t i = 0; i < p.size(); ++i)
      CHECK(p.index_of(p.elements[i]) == i);
  }

  SUBCASE("terminal objects have one-point values") {
    CHECK(apply_P(P3, S(0)).size() == 1);
    const UniformFunctor Pv = UniformFunctor::vect_functor(2, 2);
    CHECK(apply_P(Pv, V(2, 0)).size() == 1);
  }

  SUBCASE("linear maps are enumerated entry-wise") {
    const UniformFunctor P1 = UniformFunctor::vect_functor(2, 1);
    const PSet maps = apply_P(P1, V(2, 2));  // maps F_2 → F_2², 2×1 matrices
    REQUIRE(maps.size() == 4);
    CHECK(maps.elements[0] == std::vector<unsigned>{0, 0});
    CHECK(maps.elements[3] == std::vector<unsigned>{1, 1});
    const UniformFunctor P2 = UniformFunctor::vect_functor(2, 2);
    CHECK(apply_P(P2, V(2, 1)).size() == 4);  // 1×2 matrices
    CHECK(apply_P(P2, V(2, 2)).size() == 16);
  }

  SUBCASE("adapted parameters") {
    CHECK(P3.adapted_parameter() == Rational(3));
    CHECK(UniformFunctor::vect_functor(2, 2).adapted_parameter() ==
          Rational(4));
    CHECK(UniformFunctor::vect_functor(3, 1).adapted_parameter() ==
          Rational(3));
    CHECK(P3.adapted_degree().backend() == BackendKind::setop);
  }

  SUBCASE("bounds and mismatches") {
    const UniformFunctor big = UniformFunctor::setop_functor(10);
    CHECK_THROWS_AS(apply_P(big, S(5)), ResourceError);
    CHECK_THROWS_WITH_AS(apply_P(big, S(5)),
                         doctest::Contains("TENV_MAX_PSIZE"), ResourceError);
    CHECK_THROWS_AS(apply_P(P3, V(2, 1)), ContractError);
    CHECK_THROWS_AS(
        apply_P(UniformFunctor::vect_functor(2, 1), V(3, 1)), ContractError);
    CHECK_THROWS_AS(UniformFunctor::vect_functor(4, 1), ContractError);
  }
}

TEST_CASE("uniform functor maps") {
  const UniformFunctor P3 = UniformFunctor::setop_functor(3);

  SUBCASE("identity acts as the identity") {
    const PMap m = apply_P(P3, identity(S(2)));
    for (size_t i = 0; i < m.image.size(); ++i) CHECK(m.image[i] == i);
  }

  SUBCASE("composition of maps matches map of compositions") {
    const MorphismData e32 = indecomposable_surjections(S(3))[1];
    const MorphismData e21 = indecomposable_surjections(e32.target())[0];
    const PMap m32 = apply_P(P3, e32);
    const PMap m21 = apply_P(P3, e21);
    const PMap mc = apply_P(P3, compose(e21, e32));
    REQUIRE(mc.image.size() == m32.image.size());
    for (size_t i = 0; i < mc.image.size(); ++i)
      CHECK(mc.image[i] == m21.image[m32.image[i]]);

    const UniformFunctor Pv = UniformFunctor::vect_functor(2, 1);
    const MorphismData f = indecomposable_surjections(V(2, 2))[0];
    const MorphismData g = indecomposable_surjections(f.target())[0];
    const PMap mf = apply_P(Pv, f);
    const PMap mg = apply_P(Pv, g);
    const PMap mgf = apply_P(Pv, compose(g, f));
    for (size_t i = 0; i < mgf.image.size(); ++i)
      CHECK(mgf.image[i] == mg.image[mf.image[i]]);
  }

  SUBCASE("surjections become uniform maps of the expected degree") {
    const MorphismData e21 = indecomposable_surjections(S(2))[0];
    CHECK(uniform_degree(apply_P(P3, e21)) == 3);
    CHECK(uniform_degree(apply_P(P3, terminal_morphism(S(2)))) == 9);
    const UniformFunctor Pv = UniformFunctor::vect_functor(2, 2);
    const MorphismData f = indecomposable_surjections(V(2, 2))[0];
    CHECK(uniform_degree(apply_P(Pv, f)) == 4);  // q^{n·dim ker} = 2²
  }

  SUBCASE("degrees multiply along composites") {
    const MorphismData e32 = indecomposable_surjections(S(3))[0];
    const MorphismData e21 = indecomposable_surjections(e32.target())[0];
    const size_t d1 = *uniform_degree(apply_P(P3, e32));
    const size_t d2 = *uniform_degree(apply_P(P3, e21));
    CHECK(*uniform_degree(apply_P(P3, compose(e21, e32))) == d1 * d2);
  }

  SUBCASE("set-map matrices have one-hot columns") {
    const PMap m = apply_P(P3, indecomposable_surjections(S(2))[1]);
    const DenseMatrix mat = set_map_matrix(m);
    CHECK(mat.rows() == m.target_size);
    CHECK(mat.cols() == m.source_size);
    for (size_t c = 0; c < mat.cols(); ++c) {
      unsigned hits = 0;
      for (size_t r = 0; r < mat.rows(); ++r)
        if (!mat.at(r, c).is_zero()) ++hits;
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("squares of sets distinguish pullbacks") {
  const UniformFunctor P3 = UniformFunctor::setop_functor(3);
  const std::vector<MorphismData> collapses = indecomposable_surjections(S(2));
  const MorphismData& f = collapses[0];
  const MorphismData& g = collapses[1];

  const std::optional<SpanData> span = pullback(f, g);
  REQUIRE(span.has_value());
  const DenseMatrix mf = set_map_matrix(apply_P(P3, f));
  const DenseMatrix mg = set_map_matrix(apply_P(P3, g));
  const DenseMatrix ml = set_map_matrix(apply_P(P3, span->to_left));
  const DenseMatrix mr = set_map_matrix(apply_P(P3, span->to_right));
  CHECK(mf.transpose() * mg == ml * mr.transpose());

  // Restricting the apex to a proper subobject keeps the square commuting
  // but destroys the pullback property, and the identity detects that.
  const std::vector<SubobjectClass>& subs = subobjects(span->apex);
  bool found_proper = false;
  for (const SubobjectClass& u : subs) {
    if (u == full_subobject(span->apex)) continue;
    found_proper = true;
    const MorphismData emb = embedding(u);
    const DenseMatrix ml2 =
        set_map_matrix(apply_P(P3, compose(span->to_left, emb)));
    const DenseMatrix mr2 =
        set_map_matrix(apply_P(P3, compose(span->to_right, emb)));
    CHECK_FALSE(mf.transpose() * mg == ml2 * mr2.transpose());
  }
  CHECK(found_proper);
}

TEST_CASE("adaptedness verdicts") {
  const UniformFunctor P3 = UniformFunctor::setop_functor(3);

  SUBCASE("the size of the target set is the adapted parameter") {
    const AdaptedReport r = uniformity_and_adapted_check(P3, num_setop(3), 3);
    CHECK(r.uniform);
    CHECK(r.adapted);
    CHECK(r.left_exact);
    CHECK(r.passed());
    CHECK(r.surjections_checked > 0);
    CHECK(r.squares_checked > 0);
    CHECK_FALSE(r.witness.has_value());
  }

  SUBCASE("any other parameter is rejected with a witness") {
    const AdaptedReport r = uniformity_and_adapted_check(P3, num_setop(2), 3);
    CHECK(r.uniform);
    CHECK_FALSE(r.adapted);
    CHECK_FALSE(r.passed());
    REQUIRE(r.witness.has_value());
    CHECK(is_surjective(*r.witness));
  }

  SUBCASE("the linear functor is adapted exactly at q^n") {
    const UniformFunctor Pv = UniformFunctor::vect_functor(2, 2);
    CHECK(uniformity_and_adapted_check(Pv, num_vect(2, 4), 2).passed());
    const AdaptedReport bad =
        uniformity_and_adapted_check(Pv, num_vect(2, 2), 2);
    CHECK_FALSE(bad.adapted);
    CHECK(bad.witness.has_value());
  }

  SUBCASE("symbolic parameters and mismatched backends are contract errors") {
    const DegreeFunction sym = DegreeFunction::setop_family(
        Scalar(RatFunc(MultiPoly::variable("t"))));
    CHECK_THROWS_AS(uniformity_and_adapted_check(P3, sym, 2), ContractError);
    CHECK_THROWS_AS(uniformity_and_adapted_check(P3, num_vect(2, 3), 2),
                    ContractError);
  }
}

TEST_CASE("specialized matrices") {
  const UniformFunctor P3 = UniformFunctor::setop_functor(3);
  const ScalarKind kq = ScalarKind::rational;

  SUBCASE("identity morphisms become identity matrices") {
    const SpecializedHom one = specialize(P3, LinearHom::identity_hom(S(1), kq));
    CHECK(one.matrix == DenseMatrix::identity(3, kq));
    const SpecializedHom two = specialize(P3, LinearHom::identity_hom(S(2), kq));
    CHECK(two.matrix == DenseMatrix::identity(9, kq));
    Scalar tr = Scalar::zero(kq);
    for (size_t i = 0; i < 9; ++i) tr += two.matrix.at(i, i);
    CHECK(tr == Scalar(Rational(9)));  // t² at t = 3
    const UniformFunctor Pv = UniformFunctor::vect_functor(2, 1);
    CHECK(specialize(Pv, LinearHom::identity_hom(V(2, 1), kq)).matrix ==
          DenseMatrix::identity(2, kq));
  }

  SUBCASE("the all-related loop becomes the all-ones matrix") {
    const SpecializedHom e = specialize(P3, LinearHom::single(e_rel(), kOne));
    REQUIRE(e.matrix.rows() == 3);
    REQUIRE(e.matrix.cols() == 3);
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j)
        CHECK(e.matrix.at(i, j) == kOne);
    CHECK(e.matrix * e.matrix == e.matrix.scaled(Scalar(Rational(3))));
  }

  SUBCASE("specialization is linear") {
    const HomSpace end1 = hom_basis(S(1), S(1));
    const LinearHom a = LinearHom::single(end1.basis[0], Scalar(Rational(2)));
    const LinearHom b = LinearHom::single(end1.basis[1], Scalar(Rational(-5)));
    const DenseMatrix sum = specialize(P3, a + b).matrix;
    const DenseMatrix parts =
        specialize(P3, a).matrix + specialize(P3, b).matrix;
    CHECK(sum == parts);
  }

  SUBCASE("duals become transposes") {
    const HomSpace h = hom_basis(S(1), S(2));
    for (const Relation& r : h.basis) {
      const LinearHom F = LinearHom::single(r, kOne);
      CHECK(specialize(P3, dual_hom(F)).matrix ==
            specialize(P3, F).matrix.transpose());
    }
    const UniformFunctor Pv = UniformFunctor::vect_functor(2, 1);
    for (const Relation& r : hom_basis(V(2, 1), V(2, 1)).basis) {
      const LinearHom F = LinearHom::single(r, kOne);
      CHECK(specialize(Pv, dual_hom(F)).matrix ==
            specialize(Pv, F).matrix.transpose());
    }
  }

  SUBCASE("only rational coefficients specialize") {
    const LinearHom sym =
        LinearHom::identity_hom(S(1), ScalarKind::ratfunc);
    CHECK_THROWS_AS(specialize(P3, sym), ContractError);
  }
}

TEST_CASE("specialization is functorial at the adapted parameter") {
  const UniformFunctor P3 = UniformFunctor::setop_functor(3);

  SUBCASE("all endomorphism pairs of the one-point object") {
    const FunctorialityReport r =
        functoriality_check(P3, num_setop(3), S(1), S(1), S(1), 0);
    CHECK(r.passed);
    CHECK(r.composition_pairs == 4);
    CHECK(r.tensor_pairs == 4);
    CHECK_FALSE(r.witness.has_value());
  }

  SUBCASE("pairs through the two-point object") {
    const FunctorialityReport r =
        functoriality_check(P3, num_setop(3), S(1), S(2), S(1), 0);
    CHECK(r.passed);
    CHECK(r.composition_pairs == 25);
  }

  SUBCASE("a mis-adapted parameter is caught with a failing pair") {
    const FunctorialityReport r =
        functoriality_check(P3, num_setop(2), S(1), S(1), S(1), 0);
    CHECK_FALSE(r.passed);
    REQUIRE(r.witness.has_value());
    const auto& [s, rel] = *r.witness;
    const LinearHom F = LinearHom::single(rel, kOne);
    const LinearHom G = LinearHom::single(s, kOne);
    const DenseMatrix lhs =
        specialize(P3, compose_hom(G, F, num_setop(2))).matrix;
    const DenseMatrix rhs =
        specialize(P3, G).matrix * specialize(P3, F).matrix;
    CHECK_FALSE(lhs == rhs);
  }

  SUBCASE("the linear backend at its adapted parameter") {
    const UniformFunctor Pv = UniformFunctor::vect_functor(2, 1);
    const FunctorialityReport r = functoriality_check(
        Pv, num_vect(2, 2), V(2, 1), V(2, 1), V(2, 1), 0);
    CHECK(r.passed);
    CHECK(r.composition_pairs == 25);
  }

  SUBCASE("a budget strides through the pairs") {
    const FunctorialityReport r =
        functoriality_check(P3, num_setop(3), S(1), S(2), S(1), 5);
    CHECK(r.passed);
    CHECK(r.composition_pairs == 5);
  }
}

TEST_CASE("orbit decomposition of uniform functor values") {
  const UniformFunctor P3 = UniformFunctor::setop_functor(3);

  SUBCASE("a single point") {
    const PstarReport r = pstar_and_invariants(P3, S(1));
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].count == 3);
    CHECK(r.rows[0].single_orbit);
    CHECK(r.covered == 3);
    CHECK(r.lattice_consistent);
    CHECK(r.nonempty_orbits == 1);
    CHECK(r.invariant_rank == 1);
    CHECK(r.rank_matches);
  }

  SUBCASE("two points split into injective and collapsed maps") {
    const PstarReport r = pstar_and_invariants(P3, S(2));
    REQUIRE(r.rows.size() == 2);
    size_t injective = 0, collapsed = 0;
    for (const PstarRow& row : r.rows) {
      if (row.u == full_subobject(S(2)))
        injective = row.count;
      else
        collapsed = row.count;
    }
    CHECK(injective == 6);
    CHECK(collapsed == 3);
    CHECK(r.covered == 9);
    CHECK(r.lattice_consistent);
    CHECK(r.nonempty_orbits == 2);
    CHECK(r.invariant_rank == 2);
    CHECK(r.rank_matches);
  }

  SUBCASE("an undersized target leaves upper pieces empty") {
    const UniformFunctor P1 = UniformFunctor::setop_functor(1);
    const PstarReport r = pstar_and_invariants(P1, S(2));
    size_t injective = 99, collapsed = 99;
    for (const PstarRow& row : r.rows) {
      if (row.u == full_subobject(S(2)))
        injective = row.count;
      else
        collapsed = row.count;
    }
    CHECK(injective == 0);  // no injections into a single value
    CHECK(collapsed == 1);
    CHECK(r.nonempty_orbits == 1);
    CHECK(r.invariant_rank == 1);
    CHECK(r.rank_matches);
  }

  SUBCASE("linear maps are classified by their image") {
    const UniformFunctor Pv = UniformFunctor::vect_functor(2, 1);
    const PstarReport line = pstar_and_invariants(Pv, V(2, 1));
    REQUIRE(line.rows.size() == 2);
    for (const PstarRow& row : line.rows) CHECK(row.count == 1);
    CHECK(line.invariant_rank == 2);
    CHECK(line.rank_matches);

    const PstarReport plane = pstar_and_invariants(Pv, V(2, 2));
    REQUIRE(plane.rows.size() == 5);
    size_t empty_rows = 0;
    for (const PstarRow& row : plane.rows) {
      if (row.u == full_subobject(V(2, 2))) {
        CHECK(row.count == 0);  // rank-1 source cannot fill the plane
        ++empty_rows;
      } else {
        CHECK(row.count == 1);
      }
    }
    CHECK(empty_rows == 1);
    CHECK(plane.covered == 4);
    CHECK(plane.lattice_consistent);
    CHECK(plane.nonempty_orbits == 4);
    CHECK(plane.invariant_rank == 4);
    CHECK(plane.rank_matches);
  }
}

TEST_CASE("interpolation dimensions match the symmetry side") {
  const UniformFunctor P3 = UniformFunctor::setop_functor(3);

  SUBCASE("loops on one point") {
    const InterpolationReport r = interpolation_dim_check(P3, S(1), S(1));
    CHECK(r.hom_dim == 2);
    CHECK(r.radical_dim == 0);
    CHECK(r.quotient_dim == 2);
    CHECK(r.equivariant_dim == 2);  // diagonal and off-diagonal pairs
    CHECK(r.matches);
  }

  SUBCASE("loops on two points") {
    const InterpolationReport r = interpolation_dim_check(P3, S(2), S(2));
    CHECK(r.hom_dim == 15);
    CHECK(r.radical_dim == 1);
    CHECK(r.quotient_dim == 14);
    CHECK(r.equivariant_dim == 14);
    CHECK(r.matches);
  }

  SUBCASE("a rectangular pair") {
    const InterpolationReport r = interpolation_dim_check(P3, S(2), S(1));
    CHECK(r.hom_dim == 5);
    CHECK(r.radical_dim == 0);
    CHECK(r.equivariant_dim == 5);
    CHECK(r.matches);
  }

  SUBCASE("a one-point target set is heavily degenerate but consistent") {
    const UniformFunctor P1 = UniformFunctor::setop_functor(1);
    const InterpolationReport r = interpolation_dim_check(P1, S(1), S(1));
    CHECK(r.hom_dim == 2);
    CHECK(r.radical_dim == 1);
    CHECK(r.quotient_dim == 1);
    CHECK(r.equivariant_dim == 1);
    CHECK(r.matches);
  }

  SUBCASE("the linear backend with a one-dimensional source") {
    const UniformFunctor Pv = UniformFunctor::vect_functor(2, 1);
    const InterpolationReport r =
        interpolation_dim_check(Pv, V(2, 1), V(2, 1));
    CHECK(r.hom_dim == 5);
    CHECK(r.radical_dim == 1);  // t = 2 sits in the singular range
    CHECK(r.quotient_dim == 4);
    CHECK(r.equivariant_dim == 4);  // the symmetry group is trivial
    CHECK(r.matches);
  }

  SUBCASE("the linear backend with a two-dimensional source") {
    const UniformFunctor Pv = UniformFunctor::vect_functor(2, 2);
    const InterpolationReport r =
        interpolation_dim_check(Pv, V(2, 1), V(2, 1));
    CHECK(r.hom_dim == 5);
    CHECK(r.radical_dim == 0);  // t = 4 is outside the singular range
    CHECK(r.quotient_dim == 5);
    CHECK(r.equivariant_dim == 5);
    CHECK(r.matches);
  }
}
