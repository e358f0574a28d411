#include "scene.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "envelope.hpp"
#include "json.hpp"
#include "radical.hpp"
#include "specialize.hpp"

namespace tenv {
namespace {

using nlohmann::json;

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

[[noreturn]] void schema_fail(const std::string& msg, const std::string& ptr) {
  throw SchemaError(msg + " (at " + ptr + ")");
}

// ---------------------------------------------------------------------------
// Decoding
// ---------------------------------------------------------------------------

unsigned decode_unsigned(const json& v, const std::string& ptr,
                         const std::string& what, unsigned minimum = 0) {
  if (!v.is_number_integer())
    schema_fail(what + " must be an integer", ptr);
  const long long n = v.get<long long>();
  if (n < static_cast<long long>(minimum) || n > 1000000000LL)
    schema_fail(what + " must be between " + std::to_string(minimum) +
                    " and 1000000000",
                ptr);
  return static_cast<unsigned>(n);
}

// "t" gives the symbolic parameter (rational-function kind, so it stays a
// field element); integers and "p/q" strings give exact rationals.
Scalar decode_param(const json& v, const std::string& ptr) {
  if (v.is_number_integer())
    return Scalar(Rational(v.get<long long>()));
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "t") return Scalar(RatFunc(MultiPoly::variable("t")));
    if (std::optional<Rational> r = Rational::parse(s)) return Scalar(*r);
  }
  schema_fail("param must be an integer, a \"p/q\" string, or the symbol "
              "\"t\"",
              ptr);
}

void check_known_fields(const json& obj, const std::string& ptr,
                        const std::set<std::string>& known) {
  for (const auto& item : obj.items())
    if (known.find(item.key()) == known.end())
      schema_fail("unknown field \"" + item.key() + "\"",
                  ptr + "/" + item.key());
}

ObjectHandle decode_object(const json& v, const std::string& ptr,
                           BackendKind backend, unsigned q) {
  if (!v.is_object())
    schema_fail("an object description must be a JSON object", ptr);
  if (backend == BackendKind::setop) {
    check_known_fields(v, ptr, {"size"});
    if (!v.contains("size")) schema_fail("missing field \"size\"", ptr);
    return ObjectHandle::setop(
        decode_unsigned(v.at("size"), ptr + "/size", "size"));
  }
  check_known_fields(v, ptr, {"dim"});
  if (!v.contains("dim")) schema_fail("missing field \"dim\"", ptr);
  return ObjectHandle::vect(q,
                            decode_unsigned(v.at("dim"), ptr + "/dim", "dim"));
}

Relation decode_relation(const json& v, const std::string& ptr,
                         const ObjectHandle& left, const ObjectHandle& right) {
  if (!v.is_object()) schema_fail("a relation must be a JSON object", ptr);
  const ObjectHandle ambient = product(left, right).object;

  if (left.kind() == BackendKind::setop) {
    check_known_fields(v, ptr, {"partition"});
    if (!v.contains("partition"))
      schema_fail("missing field \"partition\"", ptr);
    const json& part = v.at("partition");
    if (!part.is_array())
      schema_fail("partition must be an array of blocks", ptr + "/partition");
    const unsigned total = ambient.size();
    std::vector<std::vector<unsigned>> blocks;
    std::vector<bool> seen(total, false);
    for (size_t b = 0; b < part.size(); ++b) {
      const std::string bptr = ptr + "/partition/" + std::to_string(b);
      if (!part[b].is_array() || part[b].empty())
        schema_fail("a partition block must be a non-empty array of labels",
                    bptr);
      std::vector<unsigned> block;
      for (const json& label : part[b]) {
        const unsigned e = decode_unsigned(label, bptr, "a partition label");
        if (e >= total)
          schema_fail("partition label " + std::to_string(e) +
                          " is out of range 0.." + std::to_string(total - 1),
                      bptr);
        if (seen[e])
          schema_fail("partition blocks overlap: label " + std::to_string(e) +
                          " appears twice",
                      ptr + "/partition");
        seen[e] = true;
        block.push_back(e);
      }
      blocks.push_back(std::move(block));
    }
    for (unsigned e = 0; e < total; ++e)
      if (!seen[e])
        schema_fail("partition misses label " + std::to_string(e),
                    ptr + "/partition");
    return Relation::make(
        left, right, SubobjectClass::setop_partition(ambient, blocks));
  }

  check_known_fields(v, ptr, {"rows"});
  if (!v.contains("rows")) schema_fail("missing field \"rows\"", ptr);
  const json& rows = v.at("rows");
  if (!rows.is_array())
    schema_fail("rows must be an array of coordinate rows", ptr + "/rows");
  const unsigned width = ambient.dim();
  std::vector<std::vector<unsigned>> spanning;
  for (size_t r = 0; r < rows.size(); ++r) {
    const std::string rptr = ptr + "/rows/" + std::to_string(r);
    if (!rows[r].is_array() || rows[r].size() != width)
      schema_fail("a row must have exactly " + std::to_string(width) +
                      " entries",
                  rptr);
    std::vector<unsigned> row;
    for (const json& entry : rows[r])
      row.push_back(decode_unsigned(entry, rptr, "a row entry"));
    spanning.push_back(std::move(row));
  }
  return Relation::make(left, right,
                        SubobjectClass::vect_subspace(ambient, spanning));
}

DegreeFunction decode_degree(const json& scene, BackendKind backend,
                             unsigned q, const std::optional<Scalar>& param) {
  const Scalar fallback = Scalar(RatFunc(MultiPoly::variable("t")));
  if (!scene.contains("degree")) {
    const Scalar t = param.value_or(fallback);
    return backend == BackendKind::setop ? DegreeFunction::setop_family(t)
                                         : DegreeFunction::vect_family(q, t);
  }

  const json& deg = scene.at("degree");
  if (!deg.is_object())
    schema_fail("degree must be a JSON object", "/degree");
  check_known_fields(deg, "/degree", {"family", "param", "values"});
  if (!deg.contains("family"))
    schema_fail("missing field \"family\"", "/degree");
  if (!deg.at("family").is_string())
    schema_fail("family must be a string", "/degree/family");
  const std::string family = deg.at("family").get<std::string>();

  if (param.has_value() && deg.contains("param"))
    schema_fail("give the parameter either at /param or at /degree/param, "
                "not both",
                "/param");
  std::optional<Scalar> t = param;
  if (deg.contains("param"))
    t = decode_param(deg.at("param"), "/degree/param");

  const bool needs_values = family == "table";
  if (deg.contains("values") && !needs_values)
    schema_fail("only the table family takes \"values\"", "/degree/values");

  if (family == "setop") {
    if (backend != BackendKind::setop)
      schema_fail("the setop family needs the setop backend",
                  "/degree/family");
    return DegreeFunction::setop_family(t.value_or(fallback));
  }
  if (family == "vect" || family == "length") {
    if (backend != BackendKind::vect)
      schema_fail("the " + family + " family needs the vect backend",
                  "/degree/family");
    return family == "vect"
               ? DegreeFunction::vect_family(q, t.value_or(fallback))
               : DegreeFunction::length_family(q, t.value_or(fallback));
  }
  if (family == "trivial") {
    if (t.has_value())
      schema_fail("the trivial family takes no parameter", "/degree/param");
    return DegreeFunction::trivial_family(backend, q);
  }
  if (family == "table") {
    if (t.has_value())
      schema_fail("the table family takes no parameter; put the scalars in "
                  "\"values\"",
                  "/degree/param");
    if (!deg.contains("values"))
      schema_fail("the table family needs \"values\"", "/degree");
    const json& values = deg.at("values");
    if (!values.is_array() || values.empty())
      schema_fail("values must be a non-empty array", "/degree/values");
    std::map<std::pair<unsigned, unsigned>, Scalar> table;
    bool symbolic = false;
    for (size_t i = 0; i < values.size(); ++i) {
      const std::string vptr = "/degree/values/" + std::to_string(i);
      const json& row = values[i];
      if (!row.is_object())
        schema_fail("a table entry must be a JSON object", vptr);
      check_known_fields(row, vptr, {"source", "target", "value"});
      for (const char* key : {"source", "target", "value"})
        if (!row.contains(key))
          schema_fail(std::string("missing field \"") + key + "\"", vptr);
      const unsigned src =
          decode_unsigned(row.at("source"), vptr + "/source", "source");
      const unsigned tgt =
          decode_unsigned(row.at("target"), vptr + "/target", "target");
      const Scalar value = decode_param(row.at("value"), vptr + "/value");
      symbolic = symbolic || value.kind() != ScalarKind::rational;
      if (!table.emplace(std::make_pair(src, tgt), value).second)
        schema_fail("duplicate table entry for source " +
                        std::to_string(src) + ", target " +
                        std::to_string(tgt),
                    vptr);
    }
    if (symbolic)
      for (auto& [key, value] : table)
        if (value.kind() == ScalarKind::rational)
          value = Scalar::embed(ScalarKind::ratfunc, value.as_rational());
    return DegreeFunction::table_family(backend, q, std::move(table));
  }
  schema_fail("unknown degree family \"" + family + "\"", "/degree/family");
}

// ---------------------------------------------------------------------------
// Rendering helpers
// ---------------------------------------------------------------------------

// Integral rationals small enough for every JSON reader become numbers;
// everything else is printed canonically as a string.
json rational_entry(const Rational& r) {
  static const BigInt kSafe = BigInt(1) << 53;
  BigInt num = r.numerator();
  if (num < 0) num = -num;
  if (r.is_integer() && num <= kSafe)
    return json(r.numerator().convert_to<long long>());
  return json(r.str());
}

std::string parenthesized(const std::string& s) {
  return s.find(' ') == std::string::npos ? s : "(" + s + ")";
}

// The ω factors multiplied out with rational roots split off as linear
// factors: Π ω gives e.g. "t^2 * (t - 1)". Degenerates to the constant
// product at a rational parameter; multivariate factors refuse to factor
// and are kept verbatim.
std::string factored_product(const std::vector<Scalar>& factors) {
  Rational constant(1);
  std::map<Rational, int> root_mult;
  std::vector<std::string> leftovers;
  std::string var = "t";
  for (const Scalar& f : factors) {
    MultiPoly p;
    if (f.kind() == ScalarKind::rational) {
      constant *= f.as_rational();
      continue;
    }
    if (f.kind() == ScalarKind::poly) {
      p = f.as_poly();
    } else {
      const RatFunc& rf = f.as_ratfunc();
      if (!rf.denominator().is_constant()) {
        leftovers.push_back(parenthesized(rf.str()));
        continue;
      }
      p = rf.numerator() *
          MultiPoly(Rational(1) / rf.denominator().constant_value());
    }
    if (p.is_constant()) {
      constant *= p.constant_value();
      continue;
    }
    if (!p.is_univariate()) {
      leftovers.push_back(parenthesized(p.str()));
      continue;
    }
    var = p.vars()[0];
    MultiPoly divisor(Rational(1));
    for (const auto& [root, mult] : rational_roots(p)) {
      root_mult[root] += mult;
      divisor *= (MultiPoly::variable(var) - MultiPoly(root)).pow(
          static_cast<unsigned>(mult));
    }
    const MultiPoly rest = MultiPoly::divide_exact(p, divisor);
    if (rest.is_constant())
      constant *= rest.constant_value();
    else
      leftovers.push_back(parenthesized(rest.str()));
  }

  std::vector<std::string> pieces;
  if (!constant.is_one()) pieces.push_back(constant.str());
  for (const auto& [root, mult] : root_mult) {
    std::string base =
        parenthesized((MultiPoly::variable(var) - MultiPoly(root)).str());
    if (mult > 1) base += "^" + std::to_string(mult);
    pieces.push_back(base);
  }
  pieces.insert(pieces.end(), leftovers.begin(), leftovers.end());
  if (pieces.empty()) return "1";
  std::string out = pieces[0];
  for (size_t i = 1; i < pieces.size(); ++i) out += " * " + pieces[i];
  return out;
}

Report finish(Command cmd, const Scene& scene, const json& body,
              std::string tsv, std::string text, int verdict = 0) {
  return Report{command_name(cmd), verdict, scene.format,
                body.dump(2) + "\n", std::move(tsv), std::move(text)};
}

json body_for(Command cmd, const Scene& scene) {
  json body;
  body["command"] = command_name(cmd);
  body["backend"] = backend_name(scene.backend);
  return body;
}

// ---------------------------------------------------------------------------
// Command handlers
// ---------------------------------------------------------------------------

Report run_hom(const Scene& scene) {
  const ObjectHandle x = scene.source_object();
  const ObjectHandle y = scene.target_object();
  const HomSpace h = hom_basis(x, y);

  json body = body_for(Command::hom, scene);
  body["source"] = x.str();
  body["target"] = y.str();
  body["dim"] = h.dim();
  json basis = json::array();
  std::ostringstream tsv, text;
  tsv << "index\trelation\n";
  text << "Hom(" << x.str() << ", " << y.str() << "): dimension " << h.dim()
       << "\n";
  for (size_t i = 0; i < h.dim(); ++i) {
    basis.push_back({{"index", i}, {"relation", h.basis[i].str()}});
    tsv << i << "\t" << h.basis[i].str() << "\n";
    text << "  [" << i << "] " << h.basis[i].str() << "\n";
  }
  body["basis"] = std::move(basis);
  return finish(Command::hom, scene, body, tsv.str(), text.str());
}

Report run_compose(const Scene& scene) {
  if (!scene.first.has_value())
    schema_fail("the compose command needs two relations", "/first");
  if (!scene.second.has_value())
    schema_fail("the compose command needs two relations", "/second");
  const WeightedRelation w =
      weighted_compose(*scene.first, *scene.second, scene.delta());

  json body = body_for(Command::compose, scene);
  body["first"] = scene.first->str();
  body["second"] = scene.second->str();
  body["zero"] = w.is_zero();
  body["coefficient"] = w.is_zero() ? "0" : w.coeff.str();
  body["relation"] = w.is_zero() ? json(nullptr) : json(w.rel->str());
  std::ostringstream tsv;
  tsv << "coefficient\trelation\n";
  if (w.is_zero())
    tsv << "0\t\n";
  else
    tsv << w.coeff.str() << "\t" << w.rel->str() << "\n";
  return finish(Command::compose, scene, body, tsv.str(),
                "compose: " + w.str() + "\n");
}

Report run_gram(const Scene& scene) {
  const ObjectHandle x = scene.main_object();
  const GramReport g = gram_Omega(x, scene.delta());

  json body = body_for(Command::gram, scene);
  body["object"] = x.str();
  body["determinant"] = g.det.str();
  std::vector<Scalar> omegas;
  json factors = json::array();
  std::ostringstream tsv, text;
  tsv << "subobject\tomega\n";
  const std::vector<SubobjectClass>& subs = subobjects(x);
  for (size_t i = 0; i < g.omega_factors.size(); ++i) {
    const OmegaValue& f = g.omega_factors[i];
    omegas.push_back(f.value);
    factors.push_back(
        {{"subobject", subs[i].str()}, {"omega", f.value.str()}});
    tsv << subs[i].str() << "\t" << f.value.str() << "\n";
  }
  body["factors"] = std::move(factors);
  body["factored"] = factored_product(omegas);
  json matrix = json::array();
  for (size_t r = 0; r < g.matrix.rows(); ++r) {
    json row = json::array();
    for (size_t c = 0; c < g.matrix.cols(); ++c)
      row.push_back(g.matrix.at(r, c).str());
    matrix.push_back(std::move(row));
  }
  body["matrix"] = std::move(matrix);

  text << "Gram report for " << x.str() << "\n";
  std::string product;
  for (size_t i = 0; i < omegas.size(); ++i) {
    if (i) product += " * ";
    product += parenthesized(omegas[i].str());
  }
  text << "Omega = " << product << "\n";
  text << "determinant = " << g.det.str() << "\n";
  text << "factored = " << body["factored"].get<std::string>() << "\n";
  for (size_t i = 0; i < omegas.size(); ++i)
    text << "  omega[" << subs[i].str() << "] = " << omegas[i].str() << "\n";
  return finish(Command::gram, scene, body, tsv.str(), text.str());
}

Report run_omega(const Scene& scene) {
  const ObjectHandle x = scene.main_object();
  const std::vector<MorphismData> classes = indecomposable_surjections(x);

  json body = body_for(Command::omega, scene);
  body["object"] = x.str();
  json rows = json::array();
  std::ostringstream tsv, text;
  tsv << "class\ttarget\tvalue\n";
  text << "indecomposable obstructions for " << x.str() << "\n";
  for (size_t i = 0; i < classes.size(); ++i) {
    const OmegaValue v = omega(classes[i], scene.delta());
    json terms = json::array();
    for (const OmegaTerm& term : v.terms)
      terms.push_back({{"subobject", term.w.str()},
                       {"mu", term.mu},
                       {"degree", term.degree.str()}});
    rows.push_back({{"class", i},
                    {"target", classes[i].target().str()},
                    {"value", v.value.str()},
                    {"terms", std::move(terms)}});
    tsv << i << "\t" << classes[i].target().str() << "\t" << v.value.str()
        << "\n";
    text << "  omega[" << i << "] (target " << classes[i].target().str()
         << ") = " << v.value.str() << "\n";
  }
  body["rows"] = std::move(rows);
  return finish(Command::omega, scene, body, tsv.str(), text.str());
}

Report run_singular(const Scene& scene) {
  if (!scene.max_size.has_value())
    schema_fail("the singular command needs a sweep bound; set \"max_size\"",
                "/max_size");
  const SingularityReport r =
      nonsingularity_verdict(scene.delta(), *scene.max_size);

  json body = body_for(Command::singular, scene);
  body["bound"] = r.bound;
  body["symbolic"] = r.symbolic;
  body["product"] = r.product.str();
  std::ostringstream tsv, text;
  if (r.symbolic) {
    json params = json::array();
    for (const Rational& p : r.singular_params)
      params.push_back(rational_entry(p));
    body["singular_params"] = std::move(params);
    tsv << "singular_param\n";
    text << "singularity sweep up to size " << r.bound
         << ": singular parameters";
    for (size_t i = 0; i < r.singular_params.size(); ++i) {
      tsv << r.singular_params[i].str() << "\n";
      text << (i ? ", " : " ") << r.singular_params[i].str();
    }
    if (r.singular_params.empty()) text << " none";
    text << "\n";
  } else {
    body["nonsingular"] = r.nonsingular;
    body["witness"] =
        r.witness.has_value() ? json(r.witness->str()) : json(nullptr);
    tsv << "nonsingular\n" << (r.nonsingular ? "true" : "false") << "\n";
    text << "singularity sweep up to size " << r.bound << ": "
         << (r.nonsingular ? "nonsingular" : "SINGULAR") << "\n";
    if (r.witness.has_value())
      text << "  witness: " << r.witness->str() << "\n";
  }
  return finish(Command::singular, scene, body, tsv.str(), text.str());
}

// The structure-constant tensor is associative exactly when composition is;
// checked directly on the sparse table as a self-test of the whole pipeline.
bool table_is_associative(const EndAlgebra& A) {
  const size_t n = A.dim();
  const ScalarKind kind = A.delta.scalar_kind();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k) {
        Scalar lc = Scalar::zero(kind), rc = Scalar::zero(kind);
        size_t li = 0, ri = 0;
        const auto& [cij, mij] = A.product[i][j];
        if (!cij.is_zero()) {
          const auto& [c2, m2] = A.product[mij][k];
          lc = cij * c2;
          li = m2;
        }
        const auto& [cjk, mjk] = A.product[j][k];
        if (!cjk.is_zero()) {
          const auto& [c2, m2] = A.product[i][mjk];
          rc = cjk * c2;
          ri = m2;
        }
        if (lc.is_zero() != rc.is_zero()) return false;
        if (!lc.is_zero() && (li != ri || lc != rc)) return false;
      }
  return true;
}

Report run_endalg(const Scene& scene) {
  const ObjectHandle x = scene.main_object();
  const EndAlgebra A = end_algebra(x, scene.delta());
  const bool associative = table_is_associative(A);

  json body = body_for(Command::endalg, scene);
  body["object"] = x.str();
  body["dim"] = A.dim();
  body["associativity"] = associative ? "pass" : "fail";
  json traces = json::array();
  for (const Scalar& t : A.traces) traces.push_back(t.str());
  body["traces"] = std::move(traces);
  json products = json::array();
  std::ostringstream tsv;
  tsv << "i\tj\tk\tcoefficient\n";
  for (size_t i = 0; i < A.dim(); ++i)
    for (size_t j = 0; j < A.dim(); ++j) {
      const auto& [c, k] = A.product[i][j];
      if (c.is_zero()) continue;
      products.push_back(
          {{"i", i}, {"j", j}, {"k", k}, {"c", c.str()}});
      tsv << i << "\t" << j << "\t" << k << "\t" << c.str() << "\n";
    }
  body["products"] = std::move(products);
  std::ostringstream text;
  text << "End(" << x.str() << "): dimension " << A.dim()
       << ", associativity " << (associative ? "pass" : "fail") << "\n";
  return finish(Command::endalg, scene, body, tsv.str(), text.str(),
                associative ? 0 : 4);
}

Report run_radical(const Scene& scene) {
  const ObjectHandle x = scene.source_object();
  const ObjectHandle y = scene.target_object();
  const RadicalReport r = radical(x, y, scene.delta());
  const size_t hom_dim = hom_basis(x, y).dim();

  json body = body_for(Command::radical, scene);
  body["source"] = x.str();
  body["target"] = y.str();
  body["param"] = scene.delta().parameter().str();
  body["hom_dim"] = hom_dim;
  body["dimension"] = r.dimension;
  json basis = json::array();
  std::ostringstream tsv;
  for (const LinearHom& v : r.basis) {
    json vec = json::array();
    for (size_t i = 0; i < v.coeffs.size(); ++i) {
      vec.push_back(v.coeffs[i].str());
      tsv << (i ? "\t" : "") << v.coeffs[i].str();
    }
    tsv << "\n";
    basis.push_back(std::move(vec));
  }
  body["basis"] = std::move(basis);
  std::ostringstream text;
  text << "radical of Hom(" << x.str() << ", " << y.str() << ") at t = "
       << scene.delta().parameter().str() << ": dimension " << r.dimension
       << " of " << hom_dim << "\n";
  return finish(Command::radical, scene, body, tsv.str(), text.str());
}

Report run_census(const Scene& scene) {
  const ObjectHandle x = scene.main_object();
  const CensusReport c = simple_census(x, scene.delta());

  const auto block_json = [](const BlockReport& b) {
    json out;
    out["symbolic"] = b.symbolic;
    out["quotient_dim"] = b.quotient_dim;
    out["center_dim"] = b.center_dim;
    out["split"] = b.split;
    out["block_count"] = b.block_count();
    out["block_dims"] = b.block_dims;
    return out;
  };

  json body = body_for(Command::census, scene);
  body["object"] = x.str();
  body["predicted"] = c.predicted;
  body["computed"] = c.computed;
  body["matches"] = c.matches;
  json rows = json::array();
  std::ostringstream tsv, text;
  tsv << "object\tirreps\n";
  text << "census for " << x.str() << ": predicted " << c.predicted
       << ", computed " << c.computed << ", "
       << (c.matches ? "match" : "MISMATCH") << "\n";
  for (const CensusRow& row : c.rows) {
    rows.push_back({{"object", row.y.str()}, {"irreps", row.irreps}});
    tsv << row.y.str() << "\t" << row.irreps << "\n";
    text << "  " << row.y.str() << ": " << row.irreps << " irreducible(s)\n";
  }
  body["rows"] = std::move(rows);
  body["blocks"] = block_json(c.blocks);
  if (c.specialized_cross_check.has_value())
    body["cross_check"] = block_json(*c.specialized_cross_check);
  if (!c.blocks.block_dims.empty()) {
    text << "  block dims:";
    for (size_t d : c.blocks.block_dims) text << " " << d;
    text << "\n";
  }
  return finish(Command::census, scene, body, tsv.str(), text.str(),
                c.matches ? 0 : 4);
}

UniformFunctor scene_functor(const Scene& scene) {
  if (scene.backend == BackendKind::setop) {
    if (!scene.functor_size.has_value())
      schema_fail("the specialize command needs the target size \"X\"", "/X");
    return UniformFunctor::setop_functor(*scene.functor_size);
  }
  if (!scene.functor_dim.has_value())
    schema_fail("the specialize command needs the parameter dimension \"n\"",
                "/n");
  return UniformFunctor::vect_functor(scene.q, *scene.functor_dim);
}

Report run_specialize(const Scene& scene) {
  const UniformFunctor P = scene_functor(scene);
  const ObjectHandle x = scene.source_object();
  const ObjectHandle y = scene.target_object();
  const InterpolationReport r = interpolation_dim_check(P, x, y);

  json body = body_for(Command::specialize, scene);
  body["source"] = x.str();
  body["target"] = y.str();
  if (scene.backend == BackendKind::setop)
    body["X"] = P.parameter();
  else
    body["n"] = P.parameter();
  body["adapted_parameter"] = rational_entry(P.adapted_parameter());
  if (scene.param.has_value() &&
      scene.param->kind() == ScalarKind::rational)
    body["parameter_is_adapted"] =
        scene.param->as_rational() == P.adapted_parameter();
  body["hom_dim"] = r.hom_dim;
  body["radical_dim"] = r.radical_dim;
  body["quotient_dim"] = r.quotient_dim;
  body["equivariant_dim"] = r.equivariant_dim;
  body["matches"] = r.matches;

  const HomSpace h = hom_basis(x, y);
  std::ostringstream tsv;
  tsv << "relation\trow\tcol\tvalue\n";
  for (size_t j = 0; j < h.dim(); ++j) {
    const DenseMatrix m = specialize_relation(P, h.basis[j]);
    for (size_t row = 0; row < m.rows(); ++row)
      for (size_t col = 0; col < m.cols(); ++col)
        if (!m.at(row, col).is_zero())
          tsv << j << "\t" << row << "\t" << col << "\t"
              << m.at(row, col).str() << "\n";
  }
  std::ostringstream text;
  text << "specialization of Hom(" << x.str() << ", " << y.str() << ") at "
       << (scene.backend == BackendKind::setop ? "|X| = " : "n = ")
       << P.parameter() << "\n";
  text << "hom " << r.hom_dim << ", radical " << r.radical_dim
       << ", quotient " << r.quotient_dim << ", equivariant "
       << r.equivariant_dim << ", " << (r.matches ? "match" : "MISMATCH")
       << "\n";
  return finish(Command::specialize, scene, body, tsv.str(), text.str(),
                r.matches ? 0 : 4);
}

Report run_validate_degree(const Scene& scene) {
  const unsigned budget = scene.max_size.value_or(60);
  const DegreeAxiomReport r = validate_degree_axioms(scene.delta(), budget);

  json body = body_for(Command::validate_degree, scene);
  body["family"] = degree_family_name(scene.delta().family());
  body["samples"] = r.samples;
  body["d1"] = r.d1_pass ? "pass" : "fail";
  body["d2"] = r.d2_pass ? "pass" : "fail";
  body["d3"] = r.d3_pass ? "pass" : "fail";
  body["counterexample"] = r.counterexample;
  std::ostringstream tsv, text;
  tsv << "axiom\tverdict\n";
  tsv << "D1\t" << (r.d1_pass ? "pass" : "fail") << "\n";
  tsv << "D2\t" << (r.d2_pass ? "pass" : "fail") << "\n";
  tsv << "D3\t" << (r.d3_pass ? "pass" : "fail") << "\n";
  text << "degree axioms over " << r.samples << " samples: D1 "
       << (r.d1_pass ? "pass" : "fail") << ", D2 "
       << (r.d2_pass ? "pass" : "fail") << ", D3 "
       << (r.d3_pass ? "pass" : "fail") << "\n";
  if (!r.counterexample.empty())
    text << "  counterexample: " << r.counterexample << "\n";
  return finish(Command::validate_degree, scene, body, tsv.str(), text.str(),
                r.passed() ? 0 : 4);
}

}  // namespace

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "hom",    "compose", "gram",   "omega",      "singular",
      "endalg", "radical", "census", "specialize", "validate-degree"};
  return names;
}

std::optional<Command> command_from_name(const std::string& name) {
  const std::vector<std::string>& names = command_names();
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<Command>(i);
  return std::nullopt;
}

std::string command_name(Command c) {
  return command_names()[static_cast<size_t>(c)];
}

std::optional<ReportFormat> format_from_name(const std::string& name) {
  if (name == "json") return ReportFormat::json;
  if (name == "tsv") return ReportFormat::tsv;
  if (name == "text") return ReportFormat::text;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Scene accessors
// ---------------------------------------------------------------------------

ObjectHandle Scene::main_object() const {
  if (object.has_value()) return *object;
  if (backend == BackendKind::setop)
    schema_fail("the command needs an object; set \"size\"", "/size");
  schema_fail("the command needs an object; set \"dim\"", "/dim");
}

ObjectHandle Scene::source_object() const {
  return source.has_value() ? *source : main_object();
}

ObjectHandle Scene::middle_object() const {
  return middle.has_value() ? *middle : main_object();
}

ObjectHandle Scene::target_object() const {
  return target.has_value() ? *target : main_object();
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

Scene parse_scene(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("scene is not valid JSON: ") + e.what() +
                      " (at /)");
  }
  if (!j.is_object()) schema_fail("scene must be a JSON object", "/");
  check_known_fields(j, "",
                     {"backend", "size", "q", "dim", "source", "middle",
                      "target", "param", "degree", "max_size", "X", "n",
                      "first", "second", "format"});

  Scene scene;
  if (!j.contains("backend"))
    schema_fail("missing required field \"backend\"", "/backend");
  if (!j.at("backend").is_string())
    schema_fail("backend must be a string", "/backend");
  const std::string backend = j.at("backend").get<std::string>();
  if (backend == "setop") {
    scene.backend = BackendKind::setop;
  } else if (backend == "vect") {
    scene.backend = BackendKind::vect;
  } else {
    schema_fail("unknown backend \"" + backend + "\"", "/backend");
  }

  if (scene.backend == BackendKind::setop) {
    for (const char* key : {"q", "dim", "n"})
      if (j.contains(key))
        schema_fail(std::string("\"") + key +
                        "\" applies only to the vect backend",
                    std::string("/") + key);
    if (j.contains("size"))
      scene.object = ObjectHandle::setop(
          decode_unsigned(j.at("size"), "/size", "size"));
  } else {
    for (const char* key : {"size", "X"})
      if (j.contains(key))
        schema_fail(std::string("\"") + key +
                        "\" applies only to the setop backend",
                    std::string("/") + key);
    if (!j.contains("q"))
      schema_fail("the vect backend needs the field modulus \"q\"", "/q");
    scene.q = decode_unsigned(j.at("q"), "/q", "q", 2);
    if (!is_prime(scene.q)) schema_fail("q must be prime", "/q");
    if (j.contains("dim"))
      scene.object = ObjectHandle::vect(
          scene.q, decode_unsigned(j.at("dim"), "/dim", "dim"));
  }

  for (const char* key : {"source", "middle", "target"}) {
    if (!j.contains(key)) continue;
    const ObjectHandle obj = decode_object(
        j.at(key), std::string("/") + key, scene.backend, scene.q);
    if (std::string(key) == "source") scene.source = obj;
    if (std::string(key) == "middle") scene.middle = obj;
    if (std::string(key) == "target") scene.target = obj;
  }

  if (j.contains("param"))
    scene.param = decode_param(j.at("param"), "/param");
  scene.degree = decode_degree(j, scene.backend, scene.q, scene.param);

  if (j.contains("max_size"))
    scene.max_size =
        decode_unsigned(j.at("max_size"), "/max_size", "max_size", 1);
  if (j.contains("X"))
    scene.functor_size = decode_unsigned(j.at("X"), "/X", "X");
  if (j.contains("n"))
    scene.functor_dim = decode_unsigned(j.at("n"), "/n", "n");

  if (j.contains("first"))
    scene.first = decode_relation(j.at("first"), "/first",
                                  scene.source_object(),
                                  scene.middle_object());
  if (j.contains("second"))
    scene.second = decode_relation(j.at("second"), "/second",
                                   scene.middle_object(),
                                   scene.target_object());

  if (j.contains("format")) {
    if (!j.at("format").is_string())
      schema_fail("format must be a string", "/format");
    const std::string fmt = j.at("format").get<std::string>();
    const std::optional<ReportFormat> parsed = format_from_name(fmt);
    if (!parsed.has_value())
      schema_fail("unknown format \"" + fmt + "\"; use json, tsv, or text",
                  "/format");
    scene.format = *parsed;
  }
  return scene;
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

Report execute(const Scene& scene, Command command) {
  switch (command) {
    case Command::hom:
      return run_hom(scene);
    case Command::compose:
      return run_compose(scene);
    case Command::gram:
      return run_gram(scene);
    case Command::omega:
      return run_omega(scene);
    case Command::singular:
      return run_singular(scene);
    case Command::endalg:
      return run_endalg(scene);
    case Command::radical:
      return run_radical(scene);
    case Command::census:
      return run_census(scene);
    case Command::specialize:
      return run_specialize(scene);
    case Command::validate_degree:
      return run_validate_degree(scene);
  }
  throw ContractError("unknown command");
}

const std::string& emit_report(const Report& r, ReportFormat f) {
  switch (f) {
    case ReportFormat::json:
      return r.json;
    case ReportFormat::tsv:
      return r.tsv;
    case ReportFormat::text:
      return r.text;
  }
  throw ContractError("unknown report format");
}

}  // namespace tenv
