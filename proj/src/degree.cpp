#include "degree.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace tenv {
namespace {

bool prime(unsigned q) {
  if (q < 2) return false;
  for (unsigned d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

Scalar scalar_pow(const Scalar& base, unsigned k) {
  Scalar acc = Scalar::one(base.kind());
  for (unsigned i = 0; i < k; ++i) acc *= base;
  return acc;
}

unsigned object_size(const ObjectHandle& x) {
  return x.kind() == BackendKind::setop ? x.size() : x.dim();
}

// Uniformly random morphism z→y, as a reversed map or a matrix. Returns
// nothing when the backend admits no morphism with these endpoints.
std::optional<MorphismData> random_morphism(std::mt19937& rng,
                                            const ObjectHandle& z,
                                            const ObjectHandle& y) {
  if (z.kind() == BackendKind::setop) {
    if (z.size() == 0 && y.size() > 0) return std::nullopt;
    std::vector<unsigned> rev(y.size());
    for (auto& v : rev) v = std::uniform_int_distribution<unsigned>(
                            0, z.size() - 1)(rng);
    return MorphismData::setop(z, y, std::move(rev));
  }
  std::vector<unsigned> entries(static_cast<size_t>(y.dim()) * z.dim());
  for (auto& v : entries)
    v = std::uniform_int_distribution<unsigned>(0, z.modulus() - 1)(rng);
  return MorphismData::vect(z, y, std::move(entries));
}

// Random surjection x↠y; endpoints must admit one (size resp. dim drop).
MorphismData random_surjection(std::mt19937& rng, const ObjectHandle& x,
                               const ObjectHandle& y) {
  if (x.kind() == BackendKind::setop) {
    // Surjective means the reversed map is injective: sample distinct values.
    std::vector<unsigned> pool(x.size());
    std::iota(pool.begin(), pool.end(), 0u);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(y.size());
    return MorphismData::setop(x, y, std::move(pool));
  }
  for (;;) {
    MorphismData f = *random_morphism(rng, x, y);
    if (is_surjective(f)) return f;
  }
}

std::vector<ObjectHandle> object_pool(BackendKind kind, unsigned q) {
  std::vector<ObjectHandle> pool;
  if (kind == BackendKind::setop) {
    for (unsigned n = 0; n <= 4; ++n) pool.push_back(ObjectHandle::setop(n));
  } else {
    for (unsigned d = 0; d <= 3; ++d) pool.push_back(ObjectHandle::vect(q, d));
  }
  return pool;
}

}  // namespace

std::string degree_family_name(DegreeFamily f) {
  switch (f) {
    case DegreeFamily::setop:
      return "setop";
    case DegreeFamily::vect:
      return "vect";
    case DegreeFamily::length:
      return "length";
    case DegreeFamily::trivial:
      return "trivial";
    case DegreeFamily::table:
      return "table";
  }
  return "?";
}

DegreeFunction DegreeFunction::setop_family(Scalar t) {
  return DegreeFunction(BackendKind::setop, 0, DegreeFamily::setop,
                        std::move(t));
}

DegreeFunction DegreeFunction::vect_family(unsigned q, Scalar t) {
  if (!prime(q))
    throw ContractError("degree family modulus must be prime, got " +
                        std::to_string(q));
  return DegreeFunction(BackendKind::vect, q, DegreeFamily::vect,
                        std::move(t));
}

DegreeFunction DegreeFunction::length_family(unsigned q, Scalar t) {
  DegreeFunction d = vect_family(q, std::move(t));
  d.family_ = DegreeFamily::length;
  return d;
}

DegreeFunction DegreeFunction::trivial_family(BackendKind kind, unsigned q) {
  if (kind == BackendKind::vect && !prime(q))
    throw ContractError("degree family modulus must be prime, got " +
                        std::to_string(q));
  if (kind == BackendKind::setop) q = 0;
  return DegreeFunction(kind, q, DegreeFamily::trivial,
                        Scalar(Rational(1)));
}

DegreeFunction DegreeFunction::table_family(
    BackendKind kind, unsigned q,
    std::map<std::pair<unsigned, unsigned>, Scalar> values) {
  if (kind == BackendKind::vect && !prime(q))
    throw ContractError("degree family modulus must be prime, got " +
                        std::to_string(q));
  if (kind == BackendKind::setop) q = 0;
  if (values.empty())
    throw ContractError("table degree function needs at least one entry");
  ScalarKind sk = values.begin()->second.kind();
  for (const auto& [key, val] : values) {
    if (key.first < key.second)
      throw ContractError("table degree entry for a size-increasing pair (" +
                          std::to_string(key.first) + " -> " +
                          std::to_string(key.second) +
                          "): no surjection exists there");
    if (val.kind() != sk)
      throw ContractError("table degree entries mix scalar kinds");
  }
  DegreeFunction d(kind, q, DegreeFamily::table,
                   Scalar::one(sk));
  d.table_ = std::move(values);
  return d;
}

Scalar DegreeFunction::evaluate(const MorphismData& e) const {
  if (e.kind() != kind_)
    throw ContractError("degree function applied across backends");
  if (kind_ == BackendKind::vect && e.source().modulus() != q_)
    throw ContractError("degree function applied over the wrong prime");
  if (!is_surjective(e))
    throw ContractError("degree function applied to a non-surjection " +
                        e.str());
  unsigned ns = object_size(e.source());
  unsigned nt = object_size(e.target());
  switch (family_) {
    case DegreeFamily::setop:
    case DegreeFamily::vect:
    case DegreeFamily::length:
      // Count of dropped points resp. t^{dim of the kernel}; for a
      // surjection both read off the endpoint sizes.
      return scalar_pow(t_, ns - nt);
    case DegreeFamily::trivial:
      return Scalar::one(t_.kind());
    case DegreeFamily::table: {
      auto it = table_.find({ns, nt});
      if (it == table_.end())
        throw ContractError("table degree function has no entry for " +
                            std::to_string(ns) + " -> " + std::to_string(nt));
      return it->second;
    }
  }
  throw ContractError("unreachable degree family");
}

bool DegreeFunction::operator==(const DegreeFunction& o) const {
  return kind_ == o.kind_ && q_ == o.q_ && family_ == o.family_ &&
         t_ == o.t_ && table_ == o.table_;
}

DegreeAxiomReport validate_degree_axioms(const DegreeFunction& delta,
                                         unsigned budget) {
  DegreeAxiomReport report;
  std::mt19937 rng(0x5eedu);
  const std::vector<ObjectHandle> pool =
      object_pool(delta.backend(), delta.modulus());
  const Scalar one = Scalar::one(delta.scalar_kind());

  auto fail = [&report](bool& flag, const std::string& what) {
    if (report.counterexample.empty()) report.counterexample = what;
    flag = false;
  };

  // D1: identities have degree 1.
  for (const ObjectHandle& x : pool) {
    ++report.samples;
    Scalar v;
    try {
      v = delta.evaluate(identity(x));
    } catch (const Error& err) {
      fail(report.d1_pass, "D1: delta(id_" + x.str() +
                               ") raised: " + err.what());
      continue;
    }
    if (v != one)
      fail(report.d1_pass,
           "D1: delta(id_" + x.str() + ") = " + v.str() + " != 1");
  }

  // Endpoint pairs that admit a surjection.
  std::vector<std::pair<ObjectHandle, ObjectHandle>> drops;
  for (const ObjectHandle& x : pool)
    for (const ObjectHandle& y : pool)
      if (object_size(y) <= object_size(x)) drops.push_back({x, y});
  auto pick = [&rng](size_t n) {
    return std::uniform_int_distribution<size_t>(0, n - 1)(rng);
  };

  // D2: the pullback of a surjection along any morphism has the same degree.
  for (unsigned i = 0; i < budget; ++i) {
    ++report.samples;
    const auto& [x, y] = drops[pick(drops.size())];
    MorphismData e = random_surjection(rng, x, y);
    const ObjectHandle& z = pool[pick(pool.size())];
    std::optional<MorphismData> g = random_morphism(rng, z, y);
    if (!g) continue;
    std::optional<SpanData> pb = pullback(e, *g);
    if (!pb) continue;  // absent pullback constrains nothing
    const MorphismData& pulled = pb->to_right;
    Scalar lhs, rhs;
    try {
      lhs = delta.evaluate(pulled);
      rhs = delta.evaluate(e);
    } catch (const Error& err) {
      fail(report.d2_pass, std::string("D2: evaluation raised: ") +
                               err.what());
      continue;
    }
    if (lhs != rhs)
      fail(report.d2_pass, "D2: pulling " + e.str() + " back along " +
                               g->str() + " changed the degree: " +
                               lhs.str() + " != " + rhs.str());
  }

  // D3: multiplicative under composition of surjections.
  for (unsigned i = 0; i < budget; ++i) {
    ++report.samples;
    const auto& [x, y] = drops[pick(drops.size())];
    // Third endpoint below y.
    std::vector<ObjectHandle> below;
    for (const ObjectHandle& z : pool)
      if (object_size(z) <= object_size(y)) below.push_back(z);
    const ObjectHandle& z = below[pick(below.size())];
    MorphismData inner = random_surjection(rng, x, y);
    MorphismData outer = random_surjection(rng, y, z);
    Scalar lhs, rhs;
    try {
      lhs = delta.evaluate(compose(outer, inner));
      rhs = delta.evaluate(outer) * delta.evaluate(inner);
    } catch (const Error& err) {
      fail(report.d3_pass, std::string("D3: evaluation raised: ") +
                               err.what());
      continue;
    }
    if (lhs != rhs)
      fail(report.d3_pass, "D3: " + outer.str() + " after " + inner.str() +
                               ": " + lhs.str() + " != " + rhs.str());
  }
  return report;
}

std::vector<ObjectHandle> composition_factors(const ObjectHandle& x) {
  if (x.kind() != BackendKind::vect)
    throw ContractError(
        "composition factors require the pointed backend, got " +
        backend_name(x.kind()));
  const unsigned d = x.dim();
  const unsigned q = x.modulus();

  // A maximal flag from a permutation of the standard basis.
  auto flag_factors = [&](const std::vector<unsigned>& order) {
    std::vector<ObjectHandle> factors;
    SubobjectClass prev = SubobjectClass::vect_subspace(x, {});
    std::vector<std::vector<unsigned>> rows;
    for (unsigned i = 0; i < d; ++i) {
      std::vector<unsigned> row(d, 0);
      row[order[i]] = 1;
      rows.push_back(row);
      SubobjectClass next = SubobjectClass::vect_subspace(x, rows);
      if (!subobject_leq(prev, next))
        throw ContractError("composition series is not a chain");
      factors.push_back(
          ObjectHandle::vect(q, next.object().dim() - prev.object().dim()));
      prev = next;
    }
    return factors;
  };

  std::vector<unsigned> forward(d), backward(d);
  std::iota(forward.begin(), forward.end(), 0u);
  std::iota(backward.begin(), backward.end(), 0u);
  std::reverse(backward.begin(), backward.end());

  std::vector<ObjectHandle> factors = flag_factors(forward);
  if (d >= 2) {
    // Independence of the chosen series: a second, different maximal flag
    // must produce the same multiset of simple factors.
    std::vector<ObjectHandle> other = flag_factors(backward);
    auto key = [](std::vector<ObjectHandle> v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    if (key(factors) != key(other))
      throw ContractError(
          "composition series of " + x.str() +
          " disagree between two maximal flags");
  }
  for (const ObjectHandle& f : factors)
    if (f.dim() != 1)
      throw ContractError("composition factor of dimension " +
                          std::to_string(f.dim()) + " is not simple");
  return factors;
}

Scalar RankFunction::evaluate(const ObjectHandle& x) const {
  if (x.kind() != BackendKind::vect || x.modulus() != q)
    throw ContractError("rank function applied to " + x.str() +
                        " outside its backend");
  Scalar acc = Scalar::one(t.kind());
  for (unsigned i = 0; i < x.dim(); ++i) acc *= t;
  return acc;
}

DegreeFunction rank_to_degree(const RankFunction& rho) {
  // delta(e) := rho(ker e); the kernel of a surjection between spaces of
  // dimensions n -> m has dimension n-m, so this is the t^{dim ker} family.
  return DegreeFunction::vect_family(rho.q, rho.t);
}

RankFunction degree_to_rank(const DegreeFunction& delta) {
  if (delta.backend() != BackendKind::vect)
    throw ContractError(
        "rank functions live on the pointed backend, got " +
        backend_name(delta.backend()));
  // rho(x) := delta(x ↠ 0), probed on the 1-dimensional space; the shipped
  // families are multiplicative in the dimension, so one probe determines t.
  ObjectHandle line = ObjectHandle::vect(delta.modulus(), 1);
  return RankFunction{delta.modulus(),
                      delta.evaluate(terminal_morphism(line))};
}

}  // namespace tenv
