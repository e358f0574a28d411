#include "moebius.hpp"

#include <algorithm>
#include <string>

namespace tenv {

namespace {

std::string pair_str(const PartialSemilattice& L, unsigned i, unsigned j) {
  return L.element(i).str() + ", " + L.element(j).str();
}

}  // namespace

PartialSemilattice PartialSemilattice::of_subobjects(const ObjectHandle& x) {
  PartialSemilattice L;
  L.elements_ = subobjects(x);
  unsigned n = L.size();
  L.order_.assign(n, std::vector<char>(n, 0));
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j)
      L.order_[i][j] = subobject_leq(L.elements_[i], L.elements_[j]) ? 1 : 0;
  // Meets are total in the shipped backends; resolve them to indices by
  // binary search in the canonically sorted element list.
  L.meet_.assign(n, std::vector<int>(n, -1));
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i; j < n; ++j) {
      SubobjectClass m = subobject_meet(L.elements_[i], L.elements_[j]);
      auto it = std::lower_bound(L.elements_.begin(), L.elements_.end(), m);
      if (it == L.elements_.end() || !(*it == m))
        throw ContractError("meet fell outside the subobject list for " +
                            x.str());
      int idx = static_cast<int>(it - L.elements_.begin());
      L.meet_[i][j] = L.meet_[j][i] = idx;
    }
  return L;
}

PartialSemilattice PartialSemilattice::restriction(
    const ObjectHandle& x, const std::vector<unsigned>& indices) {
  const auto& all = subobjects(x);
  PartialSemilattice L;
  for (size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= all.size())
      throw ContractError("restriction index out of range");
    if (k > 0 && indices[k] <= indices[k - 1])
      throw ContractError("restriction indices must be strictly increasing");
    L.elements_.push_back(all[indices[k]]);
  }
  unsigned n = L.size();
  L.order_.assign(n, std::vector<char>(n, 0));
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j)
      L.order_[i][j] = subobject_leq(L.elements_[i], L.elements_[j]) ? 1 : 0;
  L.derive_meets_from_order();
  return L;
}

void PartialSemilattice::derive_meets_from_order() {
  unsigned n = size();
  meet_.assign(n, std::vector<int>(n, -1));
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i; j < n; ++j) {
      std::vector<unsigned> lower;
      for (unsigned k = 0; k < n; ++k)
        if (order_[k][i] && order_[k][j]) lower.push_back(k);
      if (lower.empty()) continue;  // bounded below only by the adjoined ∅
      int glb = -1;
      for (unsigned cand : lower) {
        bool greatest = true;
        for (unsigned k : lower) greatest &= (order_[k][cand] != 0);
        if (greatest) {
          glb = static_cast<int>(cand);
          break;
        }
      }
      if (glb < 0)
        throw ContractError(
            "not a partial semilattice: the pair (" + pair_str(*this, i, j) +
            ") is bounded below but has no greatest lower bound");
      meet_[i][j] = meet_[j][i] = glb;
    }
}

std::optional<unsigned> PartialSemilattice::index_of(
    const SubobjectClass& u) const {
  for (unsigned i = 0; i < size(); ++i)
    if (elements_[i] == u) return i;
  return std::nullopt;
}

std::optional<unsigned> PartialSemilattice::meet(unsigned i, unsigned j) const {
  int m = meet_.at(i).at(j);
  if (m < 0) return std::nullopt;
  return static_cast<unsigned>(m);
}

void PartialSemilattice::verify_semilattice() const {
  unsigned n = size();
  for (unsigned i = 0; i < n; ++i) {
    if (meet(i, i) != i)
      throw ContractError("meet is not idempotent at " + element(i).str());
    for (unsigned j = 0; j < n; ++j) {
      if (meet(i, j) != meet(j, i))
        throw ContractError("meet is not commutative at (" +
                            pair_str(*this, i, j) + ")");
      bool le = leq(i, j);
      if (le != (meet(i, j) == std::optional<unsigned>(i)))
        throw ContractError("order and meet disagree at (" +
                            pair_str(*this, i, j) + ")");
      // element order must be a linear extension
      if (le && i != j && i > j)
        throw ContractError("element order is not a linear extension");
    }
  }
  // associativity in L^∅: absent values absorb
  auto meet_opt = [&](std::optional<unsigned> a,
                      std::optional<unsigned> b) -> std::optional<unsigned> {
    if (!a || !b) return std::nullopt;
    return meet(*a, *b);
  };
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j)
      for (unsigned k = 0; k < n; ++k)
        if (meet_opt(meet(i, j), k) != meet_opt(std::optional<unsigned>(i),
                                                meet(j, k)))
          throw ContractError("meet is not associative");
}

MoebiusTable moebius(const PartialSemilattice& L) {
  unsigned n = L.size();
  MoebiusTable t;
  t.mu.assign(n, std::vector<std::int64_t>(n, 0));
  // Invert the unitriangular zeta matrix column by column.
  for (unsigned j = 0; j < n; ++j) {
    t.mu[j][j] = 1;
    for (unsigned i = j; i-- > 0;) {
      if (!L.leq(i, j)) continue;
      std::int64_t s = 0;
      for (unsigned k = i + 1; k <= j; ++k)
        if (L.leq(i, k) && L.leq(k, j)) s += t.mu[k][j];
      t.mu[i][j] = -s;
    }
  }
  // ζ·μ = μ·ζ = identity, exactly.
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) {
      std::int64_t zm = 0, mz = 0;
      for (unsigned k = 0; k < n; ++k) {
        if (L.leq(i, k)) zm += t.mu[k][j];
        mz += t.mu[i][k] * (L.leq(k, j) ? 1 : 0);
      }
      std::int64_t want = (i == j) ? 1 : 0;
      if (zm != want || mz != want)
        throw ContractError("Möbius inversion failed: ζ·μ is not the identity");
    }
  return t;
}

std::vector<std::int64_t> algebra_multiply(const PartialSemilattice& L,
                                           const std::vector<std::int64_t>& a,
                                           const std::vector<std::int64_t>& b) {
  unsigned n = L.size();
  if (a.size() != n || b.size() != n)
    throw ContractError("Möbius algebra vectors must match the lattice size");
  std::vector<std::int64_t> out(n, 0);
  for (unsigned i = 0; i < n; ++i) {
    if (!a[i]) continue;
    for (unsigned j = 0; j < n; ++j) {
      if (!b[j]) continue;
      auto m = L.meet(i, j);
      if (m) out[*m] += a[i] * b[j];  // ∅ acts as zero
    }
  }
  return out;
}

std::vector<std::vector<std::int64_t>> lattice_idempotents(
    const PartialSemilattice& L) {
  unsigned n = L.size();
  MoebiusTable t = moebius(L);
  std::vector<std::vector<std::int64_t>> p(n,
                                           std::vector<std::int64_t>(n, 0));
  for (unsigned v = 0; v < n; ++v)
    for (unsigned u = 0; u < n; ++u)
      if (L.leq(u, v)) p[v][u] = t.mu[u][v];
  // Orthogonality p_u ∧ p_v = δ_{uv} p_v and absorption p_u ∧ v.
  for (unsigned u = 0; u < n; ++u)
    for (unsigned v = 0; v < n; ++v) {
      std::vector<std::int64_t> prod = algebra_multiply(L, p[u], p[v]);
      std::vector<std::int64_t> want =
          (u == v) ? p[v] : std::vector<std::int64_t>(n, 0);
      if (prod != want)
        throw ContractError("idempotent orthogonality failed at (" +
                            pair_str(L, u, v) + ")");
      std::vector<std::int64_t> unit(n, 0);
      unit[v] = 1;
      std::vector<std::int64_t> absorb = algebra_multiply(L, p[u], unit);
      want = L.leq(u, v) ? p[u] : std::vector<std::int64_t>(n, 0);
      if (absorb != want)
        throw ContractError("idempotent absorption failed at (" +
                            pair_str(L, u, v) + ")");
    }
  return p;
}

WilfReport wilf_determinant(const PartialSemilattice& L,
                            const std::vector<Scalar>& phi) {
  unsigned n = L.size();
  if (phi.size() != n)
    throw ContractError("wilf_determinant needs one φ value per element");
  ScalarKind kind = phi.empty() ? ScalarKind::rational : phi[0].kind();
  DenseMatrix m(n, n, kind);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) {
      auto w = L.meet(i, j);
      m.set(i, j, w ? phi[*w] : Scalar::zero(kind));
    }
  WilfReport report{determinant(m), {}};
  MoebiusTable t = moebius(L);
  Scalar prod = Scalar::one(kind);
  for (unsigned w = 0; w < n; ++w) {
    Scalar f = Scalar::zero(kind);
    for (unsigned u = 0; u < n; ++u)
      if (L.leq(u, w))
        f += Scalar::embed(kind, Rational(static_cast<long long>(t.mu[u][w]))) *
             phi[u];
    prod *= f;
    report.factors.push_back(std::move(f));
  }
  if (!(report.det == prod))
    throw ContractError("determinant factorization failed: det(φ(u∧v)) ≠ "
                        "Π φ(p_w)");
  return report;
}

StanleyReport stanley_split(const MorphismData& e, const SubobjectClass& l) {
  if (!is_surjective(e))
    throw ContractError("subobject splitting requires a surjection");
  PartialSemilattice L = PartialSemilattice::of_subobjects(e.source());
  PartialSemilattice M = PartialSemilattice::of_subobjects(e.target());
  auto l_idx = L.index_of(l);
  if (!l_idx)
    throw ContractError("subobject is not in the source lattice");
  MoebiusTable muL = moebius(L);
  MoebiusTable muM = moebius(M);

  // Images of every source subobject, reused for the filter below.
  std::vector<unsigned> image_of(L.size());
  for (unsigned i = 0; i < L.size(); ++i) {
    auto idx = M.index_of(direct_image(e, L.element(i)));
    if (!idx) throw ContractError("direct image fell outside the target lattice");
    image_of[i] = *idx;
  }
  unsigned m_idx = image_of[*l_idx];

  StanleyReport report{M.element(m_idx),
                       std::vector<std::int64_t>(L.size(), 0)};
  for (unsigned lp = 0; lp < L.size(); ++lp)
    if (L.leq(lp, *l_idx) && image_of[lp] == m_idx)
      report.split[lp] = muL.mu[lp][*l_idx];

  // Verify p^L_l = e^*(p^M_m) ∧ p^L_{l→m} in A(L).
  std::vector<std::int64_t> pulled(L.size(), 0);
  for (unsigned mp = 0; mp < M.size(); ++mp) {
    if (!M.leq(mp, m_idx)) continue;
    auto idx = L.index_of(inverse_image(e, M.element(mp)));
    if (!idx) throw ContractError("inverse image fell outside the source lattice");
    pulled[*idx] += muM.mu[mp][m_idx];
  }
  std::vector<std::int64_t> rhs = algebra_multiply(L, pulled, report.split);
  std::vector<std::int64_t> lhs(L.size(), 0);
  for (unsigned u = 0; u < L.size(); ++u)
    if (L.leq(u, *l_idx)) lhs[u] = muL.mu[u][*l_idx];
  if (rhs != lhs)
    throw ContractError("subobject splitting identity failed for " + l.str());
  return report;
}

}  // namespace tenv
