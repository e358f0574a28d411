#include "backend.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

namespace tenv {

namespace {

unsigned long long parse_env_limit(const char* name, unsigned long long dflt) {
  const char* s = std::getenv(name);
  if (!s || !*s) return dflt;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s, &end, 10);
  if (*end != '\0' || v == 0)
    throw SchemaError(std::string(name) + " must be a positive integer");
  return v;
}

bool is_prime(unsigned q) {
  if (q < 2) return false;
  for (unsigned d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

void require_same_backend(const ObjectHandle& a, const ObjectHandle& b,
                          const char* what) {
  if (a.kind() != b.kind() ||
      (a.kind() == BackendKind::vect && a.modulus() != b.modulus()))
    throw ContractError(std::string(what) + ": backend mismatch (" + a.str() +
                        " vs " + b.str() + ")");
}

// ---------------------------------------------------------------------------
// Mod-q matrices (row-major, entries already reduced)
// ---------------------------------------------------------------------------

struct QMat {
  unsigned rows = 0, cols = 0, q = 2;
  std::vector<unsigned> e;
  QMat() = default;
  QMat(unsigned r, unsigned c, unsigned mod)
      : rows(r), cols(c), q(mod), e(static_cast<size_t>(r) * c, 0) {}
  unsigned& at(unsigned r, unsigned c) { return e[static_cast<size_t>(r) * cols + c]; }
  unsigned at(unsigned r, unsigned c) const { return e[static_cast<size_t>(r) * cols + c]; }
};

unsigned qinv(unsigned a, unsigned q) {
  // q is prime and small: Fermat.
  unsigned result = 1, base = a % q, exp = q - 2;
  while (exp > 0) {
    if (exp & 1u) result = result * base % q;
    base = base * base % q;
    exp >>= 1u;
  }
  return result;
}

QMat qmul(const QMat& a, const QMat& b) {
  QMat r(a.rows, b.cols, a.q);
  for (unsigned i = 0; i < a.rows; ++i)
    for (unsigned k = 0; k < a.cols; ++k) {
      unsigned v = a.at(i, k);
      if (!v) continue;
      for (unsigned j = 0; j < b.cols; ++j)
        r.at(i, j) = (r.at(i, j) + v * b.at(k, j)) % a.q;
    }
  return r;
}

// In-place reduced row echelon form; returns pivot columns.
std::vector<unsigned> qrref(QMat& m) {
  std::vector<unsigned> pivots;
  unsigned r = 0;
  for (unsigned c = 0; c < m.cols && r < m.rows; ++c) {
    unsigned p = r;
    while (p < m.rows && m.at(p, c) == 0) ++p;
    if (p == m.rows) continue;
    for (unsigned j = 0; j < m.cols; ++j) std::swap(m.at(r, j), m.at(p, j));
    unsigned inv = qinv(m.at(r, c), m.q);
    for (unsigned j = 0; j < m.cols; ++j) m.at(r, j) = m.at(r, j) * inv % m.q;
    for (unsigned i = 0; i < m.rows; ++i) {
      if (i == r) continue;
      unsigned f = m.at(i, c);
      if (!f) continue;
      for (unsigned j = 0; j < m.cols; ++j)
        m.at(i, j) = (m.at(i, j) + (m.q - f) * m.at(r, j)) % m.q;
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

unsigned qrank(QMat m) { return static_cast<unsigned>(qrref(m).size()); }

// Basis of { v : m v = 0 }, returned as RREF rows of length m.cols.
std::vector<std::vector<unsigned>> qkernel(QMat m) {
  auto pivots = qrref(m);
  std::vector<bool> is_pivot(m.cols, false);
  for (unsigned c : pivots) is_pivot[c] = true;
  std::vector<std::vector<unsigned>> basis;
  for (unsigned f = 0; f < m.cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<unsigned> v(m.cols, 0);
    v[f] = 1;
    for (unsigned i = 0; i < pivots.size(); ++i)
      v[pivots[i]] = (m.q - m.at(i, f)) % m.q;
    basis.push_back(std::move(v));
  }
  if (basis.empty()) return basis;
  QMat k(static_cast<unsigned>(basis.size()), m.cols, m.q);
  for (unsigned i = 0; i < basis.size(); ++i)
    for (unsigned j = 0; j < m.cols; ++j) k.at(i, j) = basis[i][j];
  qrref(k);
  for (unsigned i = 0; i < basis.size(); ++i)
    for (unsigned j = 0; j < m.cols; ++j) basis[i][j] = k.at(i, j);
  return basis;
}

// RREF rows of a subspace W ⊆ F^n → the quotient map F^n ↠ F^n/W as a
// ((n − dim W) × n) matrix: reduce mod W, then read off the non-pivot
// coordinates. Its kernel is exactly W.
QMat quotient_map(const std::vector<std::vector<unsigned>>& wrows, unsigned n,
                  unsigned q) {
  std::vector<unsigned> pivots;
  for (const auto& row : wrows)
    for (unsigned j = 0; j < n; ++j)
      if (row[j]) {
        pivots.push_back(j);
        break;
      }
  std::vector<bool> is_pivot(n, false);
  for (unsigned p : pivots) is_pivot[p] = true;
  std::vector<unsigned> nonpivots;
  for (unsigned j = 0; j < n; ++j)
    if (!is_pivot[j]) nonpivots.push_back(j);
  QMat out(static_cast<unsigned>(nonpivots.size()), n, q);
  for (unsigned i = 0; i < n; ++i) {
    std::vector<unsigned> v(n, 0);
    v[i] = 1;
    for (unsigned r = 0; r < wrows.size(); ++r) {
      unsigned c = v[pivots[r]];
      if (!c) continue;
      for (unsigned j = 0; j < n; ++j)
        v[j] = (v[j] + (q - c) * wrows[r][j]) % q;
    }
    for (unsigned r = 0; r < nonpivots.size(); ++r) out.at(r, i) = v[nonpivots[r]];
  }
  return out;
}

QMat morphism_qmat(const MorphismData& f) {
  QMat m(f.target().dim(), f.source().dim(), f.source().modulus());
  m.e = f.entries();
  return m;
}

// ---------------------------------------------------------------------------
// Partitions
// ---------------------------------------------------------------------------

struct UnionFind {
  std::vector<unsigned> parent;
  explicit UnionFind(unsigned n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  unsigned find(unsigned a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(unsigned a, unsigned b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Blocks from an element → class-representative labeling, ordered by minimal
// element, each block sorted ascending.
std::vector<std::vector<unsigned>> blocks_from_roots(UnionFind& uf, unsigned n) {
  std::map<unsigned, std::vector<unsigned>> by_root;
  for (unsigned i = 0; i < n; ++i) by_root[uf.find(i)].push_back(i);
  std::vector<std::vector<unsigned>> blocks;
  blocks.reserve(by_root.size());
  for (auto& [root, members] : by_root) blocks.push_back(std::move(members));
  return blocks;  // map iteration is by root = minimal element
}

std::vector<unsigned> block_labels(const SubobjectClass& u) {
  std::vector<unsigned> label(u.ambient().size(), 0);
  const auto& blocks = u.blocks();
  for (unsigned b = 0; b < blocks.size(); ++b)
    for (unsigned elem : blocks[b]) label[elem] = b;
  return label;
}

// All partitions of {0..n-1} via restricted growth strings.
void enumerate_partitions(unsigned n,
                          std::vector<std::vector<std::vector<unsigned>>>& out) {
  if (n == 0) {
    out.push_back({});
    return;
  }
  std::vector<unsigned> rgs(n, 0);
  // Iterative odometer over restricted growth strings.
  while (true) {
    unsigned k = *std::max_element(rgs.begin(), rgs.end()) + 1;
    std::vector<std::vector<unsigned>> blocks(k);
    for (unsigned i = 0; i < n; ++i) blocks[rgs[i]].push_back(i);
    out.push_back(std::move(blocks));
    // Advance: find the rightmost position that can be incremented.
    unsigned i = n;
    while (i-- > 1) {
      unsigned prefix_max = *std::max_element(rgs.begin(), rgs.begin() + i);
      if (rgs[i] <= prefix_max) {
        ++rgs[i];
        std::fill(rgs.begin() + i + 1, rgs.end(), 0u);
        goto advanced;
      }
    }
    break;
  advanced:;
  }
}

// All RREF matrices with d columns over F_q, generated directly in echelon
// shape (pivot entries 1, zeros left of and above/below pivots).
void enumerate_subspaces(unsigned q, unsigned d,
                         std::vector<std::vector<std::vector<unsigned>>>& out) {
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    std::vector<unsigned> pivots;
    for (unsigned j = 0; j < d; ++j)
      if (mask & (1u << j)) pivots.push_back(j);
    unsigned r = static_cast<unsigned>(pivots.size());
    // Free positions: (i, j) with j > pivots[i] and j not a pivot column.
    std::vector<std::pair<unsigned, unsigned>> free_pos;
    std::vector<bool> is_pivot(d, false);
    for (unsigned p : pivots) is_pivot[p] = true;
    for (unsigned i = 0; i < r; ++i)
      for (unsigned j = pivots[i] + 1; j < d; ++j)
        if (!is_pivot[j]) free_pos.emplace_back(i, j);
    std::vector<unsigned> fill(free_pos.size(), 0);
    while (true) {
      std::vector<std::vector<unsigned>> rows(r, std::vector<unsigned>(d, 0));
      for (unsigned i = 0; i < r; ++i) rows[i][pivots[i]] = 1;
      for (unsigned k = 0; k < free_pos.size(); ++k)
        rows[free_pos[k].first][free_pos[k].second] = fill[k];
      out.push_back(std::move(rows));
      unsigned k = 0;
      while (k < fill.size() && fill[k] == q - 1) fill[k++] = 0;
      if (k == fill.size()) break;
      ++fill[k];
    }
  }
}

unsigned long long bell_number(unsigned n) {
  // Bell triangle; n is small (enumeration bound).
  std::vector<unsigned long long> row = {1};
  for (unsigned i = 1; i <= n; ++i) {
    std::vector<unsigned long long> next = {row.back()};
    for (unsigned long long v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row[0];
}

unsigned long long galois_number(unsigned q, unsigned d) {
  // Sum of Gaussian binomials via the q-Pascal recurrence (integers only).
  std::vector<std::vector<unsigned long long>> g(d + 1,
                                                 std::vector<unsigned long long>(d + 1, 0));
  for (unsigned n = 0; n <= d; ++n) {
    g[n][0] = 1;
    for (unsigned k = 1; k <= n; ++k) {
      unsigned long long qk = 1;
      for (unsigned i = 0; i < k; ++i) qk *= q;
      g[n][k] = (k == n ? 1 : g[n - 1][k - 1] + qk * g[n - 1][k]);
    }
  }
  unsigned long long total = 0;
  for (unsigned k = 0; k <= d; ++k) total += g[d][k];
  return total;
}

// Internal cap on enumerated subobject lists, independent of q^d.
constexpr unsigned long long kMaxSubobjects = 2000000;

}  // namespace

const Limits& limits() {
  static const Limits l = [] {
    Limits x;
    x.max_setsize =
        static_cast<unsigned>(parse_env_limit("TENV_MAX_SETSIZE", 8));
    x.max_qsize = parse_env_limit("TENV_MAX_QDIM", 4096);
    x.max_psize = parse_env_limit("TENV_MAX_PSIZE", 10000);
    return x;
  }();
  return l;
}

std::string backend_name(BackendKind k) {
  return k == BackendKind::setop ? "setop" : "vect";
}

// ---------------------------------------------------------------------------
// ObjectHandle
// ---------------------------------------------------------------------------

ObjectHandle ObjectHandle::setop(unsigned size) {
  return ObjectHandle(BackendKind::setop, size, 0);
}

ObjectHandle ObjectHandle::vect(unsigned q, unsigned dim) {
  if (!is_prime(q))
    throw ContractError("vect modulus must be prime, got " + std::to_string(q));
  return ObjectHandle(BackendKind::vect, dim, q);
}

unsigned ObjectHandle::size() const {
  if (kind_ != BackendKind::setop)
    throw ContractError("size() on a non-setop object");
  return n_;
}

unsigned ObjectHandle::dim() const {
  if (kind_ != BackendKind::vect)
    throw ContractError("dim() on a non-vect object");
  return n_;
}

unsigned ObjectHandle::modulus() const {
  if (kind_ != BackendKind::vect)
    throw ContractError("modulus() on a non-vect object");
  return q_;
}

bool ObjectHandle::operator<(const ObjectHandle& o) const {
  return std::tie(kind_, q_, n_) < std::tie(o.kind_, o.q_, o.n_);
}

std::string ObjectHandle::str() const {
  if (kind_ == BackendKind::setop) return "setop:" + std::to_string(n_);
  return "vect:q=" + std::to_string(q_) + ",d=" + std::to_string(n_);
}

ObjectHandle terminal(const ObjectHandle& context) {
  return context.kind() == BackendKind::setop
             ? ObjectHandle::setop(0)
             : ObjectHandle::vect(context.modulus(), 0);
}

// ---------------------------------------------------------------------------
// MorphismData
// ---------------------------------------------------------------------------

MorphismData MorphismData::setop(const ObjectHandle& source,
                                 const ObjectHandle& target,
                                 std::vector<unsigned> rev) {
  if (source.kind() != BackendKind::setop || target.kind() != BackendKind::setop)
    throw ContractError("setop morphism endpoints must be setop objects");
  if (rev.size() != target.size())
    throw ContractError("setop morphism: reversed map must list one source "
                        "element per target element");
  for (unsigned v : rev)
    if (v >= source.size())
      throw ContractError("setop morphism: reversed map value out of range");
  return MorphismData(source, target, std::move(rev));
}

MorphismData MorphismData::vect(const ObjectHandle& source,
                                const ObjectHandle& target,
                                std::vector<unsigned> entries) {
  if (source.kind() != BackendKind::vect || target.kind() != BackendKind::vect)
    throw ContractError("vect morphism endpoints must be vect objects");
  if (source.modulus() != target.modulus())
    throw ContractError("vect morphism endpoints over different primes");
  if (entries.size() != static_cast<size_t>(source.dim()) * target.dim())
    throw ContractError("vect morphism: matrix shape mismatch");
  for (unsigned& v : entries) v %= source.modulus();
  return MorphismData(source, target, std::move(entries));
}

const std::vector<unsigned>& MorphismData::rev() const {
  if (kind() != BackendKind::setop)
    throw ContractError("rev() on a non-setop morphism");
  return data_;
}

const std::vector<unsigned>& MorphismData::entries() const {
  if (kind() != BackendKind::vect)
    throw ContractError("entries() on a non-vect morphism");
  return data_;
}

unsigned MorphismData::entry(unsigned row, unsigned col) const {
  if (kind() != BackendKind::vect)
    throw ContractError("entry() on a non-vect morphism");
  if (row >= target_.dim() || col >= source_.dim())
    throw ContractError("matrix entry out of range");
  return data_[static_cast<size_t>(row) * source_.dim() + col];
}

bool MorphismData::operator==(const MorphismData& o) const {
  return source_ == o.source_ && target_ == o.target_ && data_ == o.data_;
}

std::string MorphismData::str() const {
  std::ostringstream out;
  out << source_.str() << " -> " << target_.str() << " [";
  for (size_t i = 0; i < data_.size(); ++i) {
    if (i) out << ",";
    out << data_[i];
  }
  out << "]";
  return out.str();
}

MorphismData identity(const ObjectHandle& x) {
  if (x.kind() == BackendKind::setop) {
    std::vector<unsigned> rev(x.size());
    std::iota(rev.begin(), rev.end(), 0u);
    return MorphismData::setop(x, x, std::move(rev));
  }
  std::vector<unsigned> entries(static_cast<size_t>(x.dim()) * x.dim(), 0);
  for (unsigned i = 0; i < x.dim(); ++i)
    entries[static_cast<size_t>(i) * x.dim() + i] = 1;
  return MorphismData::vect(x, x, std::move(entries));
}

MorphismData terminal_morphism(const ObjectHandle& x) {
  if (x.kind() == BackendKind::setop)
    return MorphismData::setop(x, ObjectHandle::setop(0), {});
  return MorphismData::vect(x, ObjectHandle::vect(x.modulus(), 0), {});
}

MorphismData compose(const MorphismData& f, const MorphismData& g) {
  require_same_backend(f.source(), g.source(), "compose");
  if (g.target() != f.source())
    throw ContractError("compose: target of the inner morphism (" +
                        g.target().str() + ") differs from source of the "
                        "outer morphism (" + f.source().str() + ")");
  if (f.kind() == BackendKind::setop) {
    // Reversed maps compose in the opposite order.
    std::vector<unsigned> rev(f.target().size());
    for (unsigned i = 0; i < rev.size(); ++i) rev[i] = g.rev()[f.rev()[i]];
    return MorphismData::setop(g.source(), f.target(), std::move(rev));
  }
  QMat m = qmul(morphism_qmat(f), morphism_qmat(g));
  return MorphismData::vect(g.source(), f.target(), std::move(m.e));
}

bool is_surjective(const MorphismData& f) {
  if (f.kind() == BackendKind::setop) {
    std::vector<bool> seen(f.source().size(), false);
    for (unsigned v : f.rev()) {
      if (seen[v]) return false;  // reversed map must be injective
      seen[v] = true;
    }
    return true;
  }
  return qrank(morphism_qmat(f)) == f.target().dim();
}

bool is_injective(const MorphismData& f) {
  if (f.kind() == BackendKind::setop) {
    std::vector<bool> seen(f.source().size(), false);
    for (unsigned v : f.rev()) seen[v] = true;  // reversed map must be onto
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  }
  return qrank(morphism_qmat(f)) == f.source().dim();
}

bool is_isomorphism(const MorphismData& f) {
  return is_surjective(f) && is_injective(f);
}

// ---------------------------------------------------------------------------
// SubobjectClass
// ---------------------------------------------------------------------------

SubobjectClass SubobjectClass::setop_partition(
    const ObjectHandle& ambient, std::vector<std::vector<unsigned>> blocks) {
  if (ambient.kind() != BackendKind::setop)
    throw ContractError("partition subobject needs a setop ambient object");
  std::vector<bool> seen(ambient.size(), false);
  size_t covered = 0;
  for (auto& block : blocks) {
    if (block.empty()) throw ContractError("partition block is empty");
    std::sort(block.begin(), block.end());
    for (unsigned e : block) {
      if (e >= ambient.size())
        throw ContractError("partition element out of range");
      if (seen[e]) throw ContractError("partition blocks overlap");
      seen[e] = true;
      ++covered;
    }
  }
  if (covered != ambient.size())
    throw ContractError("partition does not cover the underlying set");
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  return SubobjectClass(ambient, std::move(blocks));
}

SubobjectClass SubobjectClass::vect_subspace(
    const ObjectHandle& ambient, std::vector<std::vector<unsigned>> rows) {
  if (ambient.kind() != BackendKind::vect)
    throw ContractError("subspace subobject needs a vect ambient object");
  for (const auto& row : rows)
    if (row.size() != ambient.dim())
      throw ContractError("subspace row length differs from ambient dimension");
  QMat m(static_cast<unsigned>(rows.size()), ambient.dim(), ambient.modulus());
  for (unsigned i = 0; i < rows.size(); ++i)
    for (unsigned j = 0; j < ambient.dim(); ++j)
      m.at(i, j) = rows[i][j] % ambient.modulus();
  unsigned rank = static_cast<unsigned>(qrref(m).size());
  std::vector<std::vector<unsigned>> rref(rank, std::vector<unsigned>(ambient.dim()));
  for (unsigned i = 0; i < rank; ++i)
    for (unsigned j = 0; j < ambient.dim(); ++j) rref[i][j] = m.at(i, j);
  return SubobjectClass(ambient, std::move(rref));
}

ObjectHandle SubobjectClass::object() const {
  if (ambient_.kind() == BackendKind::setop)
    return ObjectHandle::setop(static_cast<unsigned>(data_.size()));
  return ObjectHandle::vect(ambient_.modulus(),
                            static_cast<unsigned>(data_.size()));
}

const std::vector<std::vector<unsigned>>& SubobjectClass::blocks() const {
  if (ambient_.kind() != BackendKind::setop)
    throw ContractError("blocks() on a non-setop subobject");
  return data_;
}

const std::vector<std::vector<unsigned>>& SubobjectClass::rows() const {
  if (ambient_.kind() != BackendKind::vect)
    throw ContractError("rows() on a non-vect subobject");
  return data_;
}

bool SubobjectClass::operator==(const SubobjectClass& o) const {
  return ambient_ == o.ambient_ && data_ == o.data_;
}

bool SubobjectClass::operator<(const SubobjectClass& o) const {
  if (ambient_ != o.ambient_) return ambient_ < o.ambient_;
  if (data_.size() != o.data_.size()) return data_.size() < o.data_.size();
  return data_ < o.data_;
}

std::string SubobjectClass::str() const {
  std::ostringstream out;
  out << "[";
  for (size_t i = 0; i < data_.size(); ++i) {
    if (i) out << ",";
    out << "[";
    for (size_t j = 0; j < data_[i].size(); ++j) {
      if (j) out << ",";
      out << data_[i][j];
    }
    out << "]";
  }
  out << "]";
  return out.str();
}

SubobjectClass full_subobject(const ObjectHandle& x) {
  if (x.kind() == BackendKind::setop) {
    std::vector<std::vector<unsigned>> blocks;
    for (unsigned i = 0; i < x.size(); ++i) blocks.push_back({i});
    return SubobjectClass::setop_partition(x, std::move(blocks));
  }
  std::vector<std::vector<unsigned>> rows(x.dim(),
                                          std::vector<unsigned>(x.dim(), 0));
  for (unsigned i = 0; i < x.dim(); ++i) rows[i][i] = 1;
  return SubobjectClass::vect_subspace(x, std::move(rows));
}

MorphismData embedding(const SubobjectClass& u) {
  if (u.ambient().kind() == BackendKind::setop) {
    return MorphismData::setop(u.object(), u.ambient(), block_labels(u));
  }
  unsigned d = u.ambient().dim();
  unsigned r = static_cast<unsigned>(u.rows().size());
  std::vector<unsigned> entries(static_cast<size_t>(d) * r, 0);
  for (unsigned i = 0; i < r; ++i)
    for (unsigned j = 0; j < d; ++j)
      entries[static_cast<size_t>(j) * r + i] = u.rows()[i][j];
  return MorphismData::vect(u.object(), u.ambient(), std::move(entries));
}

const std::vector<SubobjectClass>& subobjects(const ObjectHandle& x) {
  static std::mutex mu;
  static std::map<ObjectHandle, std::unique_ptr<std::vector<SubobjectClass>>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(x);
  if (it != cache.end()) return *it->second;

  std::vector<std::vector<std::vector<unsigned>>> raw;
  if (x.kind() == BackendKind::setop) {
    if (x.size() > limits().max_setsize)
      throw ResourceError("subobject enumeration for " + x.str() +
                          " exceeds TENV_MAX_SETSIZE=" +
                          std::to_string(limits().max_setsize) + " (" +
                          std::to_string(bell_number(x.size())) +
                          " partitions)");
    enumerate_partitions(x.size(), raw);
  } else {
    unsigned long long space = 1;
    for (unsigned i = 0; i < x.dim(); ++i) space *= x.modulus();
    if (space > limits().max_qsize)
      throw ResourceError("subobject enumeration for " + x.str() +
                          " exceeds TENV_MAX_QDIM=" +
                          std::to_string(limits().max_qsize));
    unsigned long long count = galois_number(x.modulus(), x.dim());
    if (count > kMaxSubobjects)
      throw ResourceError("subobject enumeration for " + x.str() + " needs " +
                          std::to_string(count) + " subspaces; refusing");
    enumerate_subspaces(x.modulus(), x.dim(), raw);
  }
  auto list = std::make_unique<std::vector<SubobjectClass>>();
  list->reserve(raw.size());
  for (auto& data : raw)
    list->push_back(x.kind() == BackendKind::setop
                        ? SubobjectClass::setop_partition(x, std::move(data))
                        : SubobjectClass::vect_subspace(x, std::move(data)));
  std::sort(list->begin(), list->end());
  auto [pos, inserted] = cache.emplace(x, std::move(list));
  return *pos->second;
}

bool subobject_leq(const SubobjectClass& u, const SubobjectClass& v) {
  if (u.ambient() != v.ambient())
    throw ContractError("subobject comparison across different ambients");
  if (u.ambient().kind() == BackendKind::setop) {
    // u ≤ v iff v refines u: every v-block lies inside one u-block.
    std::vector<unsigned> label = block_labels(u);
    for (const auto& block : v.blocks())
      for (unsigned e : block)
        if (label[e] != label[block[0]]) return false;
    return true;
  }
  // u ≤ v iff every basis row of u reduces to zero modulo v's RREF rows.
  unsigned d = u.ambient().dim(), q = u.ambient().modulus();
  for (const auto& urow : u.rows()) {
    std::vector<unsigned> residue(urow);
    for (const auto& vrow : v.rows()) {
      unsigned pivot = 0;
      while (pivot < d && !vrow[pivot]) ++pivot;
      unsigned c = residue[pivot];
      if (!c) continue;
      for (unsigned j = 0; j < d; ++j)
        residue[j] = (residue[j] + (q - c) * vrow[j]) % q;
    }
    for (unsigned j = 0; j < d; ++j)
      if (residue[j]) return false;
  }
  return true;
}

SubobjectClass subobject_meet(const SubobjectClass& u, const SubobjectClass& v) {
  if (u.ambient() != v.ambient())
    throw ContractError("subobject meet across different ambients");
  if (u.ambient().kind() == BackendKind::setop) {
    // Finest common coarsening: merge within every block of u and of v.
    UnionFind uf(u.ambient().size());
    for (const auto* part : {&u.blocks(), &v.blocks()})
      for (const auto& block : *part)
        for (size_t i = 1; i < block.size(); ++i)
          uf.unite(block[0], block[i]);
    return SubobjectClass::setop_partition(
        u.ambient(), blocks_from_roots(uf, u.ambient().size()));
  }
  // Intersection of row spaces: rows a·B_u with B_u^T a = B_v^T b solvable.
  unsigned d = u.ambient().dim(), q = u.ambient().modulus();
  unsigned ru = static_cast<unsigned>(u.rows().size());
  unsigned rv = static_cast<unsigned>(v.rows().size());
  QMat m(d, ru + rv, q);
  for (unsigned j = 0; j < ru; ++j)
    for (unsigned i = 0; i < d; ++i) m.at(i, j) = u.rows()[j][i];
  for (unsigned j = 0; j < rv; ++j)
    for (unsigned i = 0; i < d; ++i) m.at(i, ru + j) = (q - v.rows()[j][i]) % q;
  auto ker = qkernel(m);
  std::vector<std::vector<unsigned>> rows;
  for (const auto& ab : ker) {
    std::vector<unsigned> row(d, 0);
    for (unsigned j = 0; j < ru; ++j)
      for (unsigned i = 0; i < d; ++i)
        row[i] = (row[i] + ab[j] * u.rows()[j][i]) % q;
    rows.push_back(std::move(row));
  }
  return SubobjectClass::vect_subspace(u.ambient(), std::move(rows));
}

// ---------------------------------------------------------------------------
// Image factorization
// ---------------------------------------------------------------------------

ImageFactorization image_factorize(const MorphismData& f) {
  if (f.kind() == BackendKind::setop) {
    // Fibers of the reversed map partition the target's underlying set.
    const auto& rf = f.rev();
    std::vector<std::vector<unsigned>> blocks;
    std::vector<unsigned> block_value;
    std::map<unsigned, unsigned> value_to_block;
    for (unsigned b = 0; b < rf.size(); ++b) {
      auto it = value_to_block.find(rf[b]);
      if (it == value_to_block.end()) {
        value_to_block.emplace(rf[b], static_cast<unsigned>(blocks.size()));
        blocks.push_back({b});
        block_value.push_back(rf[b]);
      } else {
        blocks[it->second].push_back(b);
      }
    }
    SubobjectClass image =
        SubobjectClass::setop_partition(f.target(), std::move(blocks));
    MorphismData epi =
        MorphismData::setop(f.source(), image.object(), std::move(block_value));
    return ImageFactorization{std::move(epi), image, embedding(image)};
  }
  // Column space: RREF of the transposed matrix.
  unsigned ds = f.source().dim(), dt = f.target().dim(), q = f.source().modulus();
  QMat cols(ds, dt, q);
  for (unsigned j = 0; j < ds; ++j)
    for (unsigned i = 0; i < dt; ++i) cols.at(j, i) = f.entry(i, j);
  auto pivots = qrref(cols);
  unsigned r = static_cast<unsigned>(pivots.size());
  std::vector<std::vector<unsigned>> rows(r, std::vector<unsigned>(dt));
  for (unsigned i = 0; i < r; ++i)
    for (unsigned j = 0; j < dt; ++j) rows[i][j] = cols.at(i, j);
  SubobjectClass image = SubobjectClass::vect_subspace(f.target(), std::move(rows));
  // Coordinates in the RREF basis are the pivot coordinates of f.
  std::vector<unsigned> epi_entries(static_cast<size_t>(r) * ds);
  for (unsigned i = 0; i < r; ++i)
    for (unsigned j = 0; j < ds; ++j)
      epi_entries[static_cast<size_t>(i) * ds + j] = f.entry(pivots[i], j);
  MorphismData epi =
      MorphismData::vect(f.source(), image.object(), std::move(epi_entries));
  return ImageFactorization{std::move(epi), image, embedding(image)};
}

// ---------------------------------------------------------------------------
// Pullback, pushout, product
// ---------------------------------------------------------------------------

std::optional<SpanData> pullback(const MorphismData& f, const MorphismData& g) {
  require_same_backend(f.source(), g.source(), "pullback");
  if (f.target() != g.target())
    throw ContractError("pullback requires a common target");
  if (f.kind() == BackendKind::setop) {
    unsigned nx = f.source().size(), ny = g.source().size();
    UnionFind uf(nx + ny);
    for (unsigned k = 0; k < f.target().size(); ++k)
      uf.unite(f.rev()[k], nx + g.rev()[k]);
    auto blocks = blocks_from_roots(uf, nx + ny);
    ObjectHandle apex = ObjectHandle::setop(static_cast<unsigned>(blocks.size()));
    std::vector<unsigned> class_of(nx + ny);
    for (unsigned b = 0; b < blocks.size(); ++b)
      for (unsigned node : blocks[b]) class_of[node] = b;
    std::vector<unsigned> to_x(nx), to_y(ny);
    for (unsigned a = 0; a < nx; ++a) to_x[a] = class_of[a];
    for (unsigned b = 0; b < ny; ++b) to_y[b] = class_of[nx + b];
    return SpanData{apex,
                    MorphismData::setop(apex, f.source(), std::move(to_x)),
                    MorphismData::setop(apex, g.source(), std::move(to_y))};
  }
  unsigned dx = f.source().dim(), dy = g.source().dim(), dz = f.target().dim();
  unsigned q = f.source().modulus();
  QMat m(dz, dx + dy, q);
  for (unsigned i = 0; i < dz; ++i) {
    for (unsigned j = 0; j < dx; ++j) m.at(i, j) = f.entry(i, j);
    for (unsigned j = 0; j < dy; ++j) m.at(i, dx + j) = (q - g.entry(i, j)) % q;
  }
  auto ker = qkernel(m);
  unsigned k = static_cast<unsigned>(ker.size());
  ObjectHandle apex = ObjectHandle::vect(q, k);
  std::vector<unsigned> to_x(static_cast<size_t>(dx) * k),
      to_y(static_cast<size_t>(dy) * k);
  for (unsigned i = 0; i < k; ++i) {
    for (unsigned rr = 0; rr < dx; ++rr) to_x[static_cast<size_t>(rr) * k + i] = ker[i][rr];
    for (unsigned rr = 0; rr < dy; ++rr) to_y[static_cast<size_t>(rr) * k + i] = ker[i][dx + rr];
  }
  return SpanData{apex, MorphismData::vect(apex, f.source(), std::move(to_x)),
                  MorphismData::vect(apex, g.source(), std::move(to_y))};
}

CospanData pushout(const MorphismData& e1, const MorphismData& e2) {
  require_same_backend(e1.source(), e2.source(), "pushout");
  if (e1.source() != e2.source())
    throw ContractError("pushout requires a common source");
  if (!is_surjective(e1) || !is_surjective(e2))
    throw ContractError("pushout requires surjective morphisms");
  if (e1.kind() == BackendKind::setop) {
    // Pullback of the reversed injections: pairs with a common value.
    unsigned n1 = e1.target().size(), n2 = e2.target().size();
    std::vector<int> where2(e1.source().size(), -1);
    for (unsigned b = 0; b < n2; ++b) where2[e2.rev()[b]] = static_cast<int>(b);
    std::vector<unsigned> from1, from2;
    for (unsigned a = 0; a < n1; ++a) {
      int b = where2[e1.rev()[a]];
      if (b >= 0) {
        from1.push_back(a);
        from2.push_back(static_cast<unsigned>(b));
      }
    }
    ObjectHandle apex = ObjectHandle::setop(static_cast<unsigned>(from1.size()));
    return CospanData{apex,
                      MorphismData::setop(e1.target(), apex, std::move(from1)),
                      MorphismData::setop(e2.target(), apex, std::move(from2))};
  }
  unsigned dx = e1.source().dim(), d1 = e1.target().dim(), d2 = e2.target().dim();
  unsigned q = e1.source().modulus();
  // Image of (e1, −e2): x → y1 ⊕ y2, row per source basis vector.
  QMat w(dx, d1 + d2, q);
  for (unsigned j = 0; j < dx; ++j) {
    for (unsigned i = 0; i < d1; ++i) w.at(j, i) = e1.entry(i, j);
    for (unsigned i = 0; i < d2; ++i) w.at(j, d1 + i) = (q - e2.entry(i, j)) % q;
  }
  auto pivots = qrref(w);
  std::vector<std::vector<unsigned>> wrows(pivots.size(),
                                           std::vector<unsigned>(d1 + d2));
  for (unsigned i = 0; i < pivots.size(); ++i)
    for (unsigned j = 0; j < d1 + d2; ++j) wrows[i][j] = w.at(i, j);
  QMat quot = quotient_map(wrows, d1 + d2, q);
  ObjectHandle apex = ObjectHandle::vect(q, quot.rows);
  std::vector<unsigned> m1(static_cast<size_t>(quot.rows) * d1),
      m2(static_cast<size_t>(quot.rows) * d2);
  for (unsigned i = 0; i < quot.rows; ++i) {
    for (unsigned j = 0; j < d1; ++j) m1[static_cast<size_t>(i) * d1 + j] = quot.at(i, j);
    for (unsigned j = 0; j < d2; ++j) m2[static_cast<size_t>(i) * d2 + j] = quot.at(i, d1 + j);
  }
  return CospanData{apex, MorphismData::vect(e1.target(), apex, std::move(m1)),
                    MorphismData::vect(e2.target(), apex, std::move(m2))};
}

ProductData product(const ObjectHandle& x, const ObjectHandle& y) {
  require_same_backend(x, y, "product");
  if (x.kind() == BackendKind::setop) {
    ObjectHandle p = ObjectHandle::setop(x.size() + y.size());
    std::vector<unsigned> left(x.size()), right(y.size());
    std::iota(left.begin(), left.end(), 0u);
    std::iota(right.begin(), right.end(), x.size());
    return ProductData{p, MorphismData::setop(p, x, std::move(left)),
                       MorphismData::setop(p, y, std::move(right))};
  }
  unsigned dx = x.dim(), dy = y.dim(), q = x.modulus();
  ObjectHandle p = ObjectHandle::vect(q, dx + dy);
  std::vector<unsigned> left(static_cast<size_t>(dx) * (dx + dy), 0),
      right(static_cast<size_t>(dy) * (dx + dy), 0);
  for (unsigned i = 0; i < dx; ++i) left[static_cast<size_t>(i) * (dx + dy) + i] = 1;
  for (unsigned i = 0; i < dy; ++i)
    right[static_cast<size_t>(i) * (dx + dy) + dx + i] = 1;
  return ProductData{p, MorphismData::vect(p, x, std::move(left)),
                     MorphismData::vect(p, y, std::move(right))};
}

MorphismData pair_morphism(const ProductData& p, const MorphismData& f,
                           const MorphismData& g) {
  if (f.source() != g.source())
    throw ContractError("pairing requires a common source");
  if (f.target() != p.proj_left.target() || g.target() != p.proj_right.target())
    throw ContractError("pairing targets do not match the product factors");
  if (f.kind() == BackendKind::setop) {
    std::vector<unsigned> rev;
    rev.reserve(f.rev().size() + g.rev().size());
    rev.insert(rev.end(), f.rev().begin(), f.rev().end());
    rev.insert(rev.end(), g.rev().begin(), g.rev().end());
    return MorphismData::setop(f.source(), p.object, std::move(rev));
  }
  std::vector<unsigned> entries;
  entries.reserve(f.entries().size() + g.entries().size());
  entries.insert(entries.end(), f.entries().begin(), f.entries().end());
  entries.insert(entries.end(), g.entries().begin(), g.entries().end());
  return MorphismData::vect(f.source(), p.object, std::move(entries));
}

// ---------------------------------------------------------------------------
// Galois maps
// ---------------------------------------------------------------------------

SubobjectClass direct_image(const MorphismData& e, const SubobjectClass& u) {
  if (!is_surjective(e)) throw ContractError("direct image along a non-surjection");
  if (u.ambient() != e.source())
    throw ContractError("direct image: subobject not in the source");
  if (e.kind() == BackendKind::setop) {
    // Restrict the partition to the embedded copy of the target.
    std::vector<unsigned> label = block_labels(u);
    UnionFind uf(e.target().size());
    std::map<unsigned, unsigned> first_with_label;
    for (unsigned b = 0; b < e.target().size(); ++b) {
      unsigned l = label[e.rev()[b]];
      auto it = first_with_label.find(l);
      if (it == first_with_label.end())
        first_with_label.emplace(l, b);
      else
        uf.unite(it->second, b);
    }
    return SubobjectClass::setop_partition(
        e.target(), blocks_from_roots(uf, e.target().size()));
  }
  unsigned q = e.source().modulus();
  std::vector<std::vector<unsigned>> rows;
  for (const auto& r : u.rows()) {
    std::vector<unsigned> img(e.target().dim(), 0);
    for (unsigned i = 0; i < e.target().dim(); ++i)
      for (unsigned j = 0; j < e.source().dim(); ++j)
        img[i] = (img[i] + e.entry(i, j) * r[j]) % q;
    rows.push_back(std::move(img));
  }
  return SubobjectClass::vect_subspace(e.target(), std::move(rows));
}

SubobjectClass inverse_image(const MorphismData& e, const SubobjectClass& v) {
  if (!is_surjective(e)) throw ContractError("inverse image along a non-surjection");
  if (v.ambient() != e.target())
    throw ContractError("inverse image: subobject not in the target");
  if (e.kind() == BackendKind::setop) {
    // Transport v's blocks through the injection; outside elements stay alone.
    UnionFind uf(e.source().size());
    for (const auto& block : v.blocks())
      for (size_t i = 1; i < block.size(); ++i)
        uf.unite(e.rev()[block[0]], e.rev()[block[i]]);
    return SubobjectClass::setop_partition(
        e.source(), blocks_from_roots(uf, e.source().size()));
  }
  unsigned q = e.source().modulus();
  QMat check = quotient_map(v.rows(), e.target().dim(), q);
  QMat composite = qmul(check, morphism_qmat(e));
  auto ker = qkernel(composite);
  return SubobjectClass::vect_subspace(e.source(), std::move(ker));
}

std::pair<SubobjectClass, SubobjectClass> galois_images(
    const MorphismData& e, const SubobjectClass& u, const SubobjectClass& v) {
  return {direct_image(e, u), inverse_image(e, v)};
}

}  // namespace tenv
