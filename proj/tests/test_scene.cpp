#include "scene.hpp"

#include <string>

#include "doctest.h"
#include "json.hpp"

using namespace tenv;
using nlohmann::json;

namespace {

json run_json(const std::string& scene_text, Command cmd) {
  const Scene scene = parse_scene(scene_text);
  return json::parse(execute(scene, cmd).json);
}

}  // namespace

TEST_CASE("scene validation diagnoses with JSON pointers") {
  CHECK_NOTHROW(parse_scene(R"({"backend":"setop","size":2})"));
  CHECK_NOTHROW(parse_scene(R"({"backend":"vect","q":2,"dim":1})"));

  CHECK_THROWS_WITH_AS(parse_scene("not json"),
                       doctest::Contains("not valid JSON"), SchemaError);
  CHECK_THROWS_WITH_AS(parse_scene("[1,2]"),
                       doctest::Contains("must be a JSON object"),
                       SchemaError);
  CHECK_THROWS_WITH_AS(parse_scene(R"({"size":2})"),
                       doctest::Contains("\"backend\""), SchemaError);
  CHECK_THROWS_WITH_AS(parse_scene(R"({"backend":"nope"})"),
                       doctest::Contains("unknown backend"), SchemaError);
  CHECK_THROWS_WITH_AS(parse_scene(R"({"backend":"setop","bogus":1})"),
                       doctest::Contains("(at /bogus)"), SchemaError);
  CHECK_THROWS_WITH_AS(parse_scene(R"({"backend":"vect","q":4,"dim":1})"),
                       doctest::Contains("q must be prime (at /q)"),
                       SchemaError);
  CHECK_THROWS_WITH_AS(parse_scene(R"({"backend":"vect","dim":1})"),
                       doctest::Contains("(at /q)"), SchemaError);
  CHECK_THROWS_WITH_AS(parse_scene(R"({"backend":"setop","q":3})"),
                       doctest::Contains("vect backend"), SchemaError);
  CHECK_THROWS_WITH_AS(parse_scene(R"({"backend":"vect","q":2,"size":1})"),
                       doctest::Contains("setop backend"), SchemaError);
  CHECK_THROWS_WITH_AS(parse_scene(R"({"backend":"setop","size":-1})"),
                       doctest::Contains("(at /size)"), SchemaError);
  CHECK_THROWS_WITH_AS(
      parse_scene(R"({"backend":"setop","size":1,"format":"xml"})"),
      doctest::Contains("unknown format"), SchemaError);
}

TEST_CASE("relation decoding points at the offending block") {
  CHECK_NOTHROW(parse_scene(
      R"({"backend":"setop","size":1,"first":{"partition":[[0],[1]]}})"));

  CHECK_THROWS_WITH_AS(
      parse_scene(
          R"({"backend":"setop","size":1,"first":{"partition":[[0,1],[1]]}})"),
      doctest::Contains("overlap"), SchemaError);
  CHECK_THROWS_WITH_AS(
      parse_scene(
          R"({"backend":"setop","size":1,"first":{"partition":[[0,1],[1]]}})"),
      doctest::Contains("(at /first/partition)"), SchemaError);
  CHECK_THROWS_WITH_AS(
      parse_scene(
          R"({"backend":"setop","size":1,"first":{"partition":[[0]]}})"),
      doctest::Contains("misses label 1"), SchemaError);
  CHECK_THROWS_WITH_AS(
      parse_scene(
          R"({"backend":"setop","size":1,"first":{"partition":[[0,1,2]]}})"),
      doctest::Contains("out of range"), SchemaError);
  CHECK_THROWS_WITH_AS(
      parse_scene(
          R"({"backend":"setop","size":1,"first":{"partition":[[],[0,1]]}})"),
      doctest::Contains("non-empty"), SchemaError);
  CHECK_THROWS_WITH_AS(
      parse_scene(
          R"({"backend":"vect","q":2,"dim":1,"first":{"rows":[[1]]}})"),
      doctest::Contains("(at /first/rows/0)"), SchemaError);
  CHECK_NOTHROW(parse_scene(
      R"({"backend":"vect","q":2,"dim":1,"first":{"rows":[[1,1]]}})"));
}

TEST_CASE("parameter and degree decoding") {
  const Scene sym = parse_scene(R"({"backend":"setop","size":1,"param":"t"})");
  CHECK(sym.param->kind() == ScalarKind::ratfunc);
  CHECK(sym.delta().family() == DegreeFamily::setop);

  const Scene rat =
      parse_scene(R"({"backend":"setop","size":1,"param":"7/2"})");
  CHECK(rat.param->as_rational() == Rational(BigInt(7), BigInt(2)));

  const Scene num = parse_scene(R"({"backend":"setop","size":1,"param":3})");
  CHECK(num.param->as_rational() == Rational(3));

  CHECK_THROWS_WITH_AS(parse_scene(R"({"backend":"setop","param":"zzz"})"),
                       doctest::Contains("(at /param)"), SchemaError);
  CHECK_THROWS_AS(parse_scene(R"({"backend":"setop","param":1.5})"),
                  SchemaError);

  const Scene triv = parse_scene(
      R"({"backend":"setop","size":1,"degree":{"family":"trivial"}})");
  CHECK(triv.delta().family() == DegreeFamily::trivial);

  const Scene len = parse_scene(
      R"({"backend":"vect","q":2,"dim":1,"degree":{"family":"length","param":3}})");
  CHECK(len.delta().family() == DegreeFamily::length);

  CHECK_THROWS_WITH_AS(
      parse_scene(R"({"backend":"setop","degree":{"family":"vect"}})"),
      doctest::Contains("(at /degree/family)"), SchemaError);
  CHECK_THROWS_WITH_AS(
      parse_scene(
          R"({"backend":"setop","param":1,"degree":{"family":"setop","param":2}})"),
      doctest::Contains("not both"), SchemaError);
  CHECK_THROWS_WITH_AS(
      parse_scene(R"({"backend":"setop","degree":{"family":"table"}})"),
      doctest::Contains("needs \"values\""), SchemaError);
  CHECK_THROWS_WITH_AS(
      parse_scene(
          R"({"backend":"setop","degree":{"family":"table","values":[)"
          R"({"source":1,"target":0,"value":2},)"
          R"({"source":1,"target":0,"value":3}]}})"),
      doctest::Contains("duplicate table entry"), SchemaError);
}

TEST_CASE("command and format names round-trip") {
  CHECK(command_names().size() == 10);
  for (const std::string& name : command_names()) {
    const std::optional<Command> c = command_from_name(name);
    REQUIRE(c.has_value());
    CHECK(command_name(*c) == name);
  }
  CHECK_FALSE(command_from_name("bogus").has_value());
  CHECK(format_from_name("tsv") == ReportFormat::tsv);
  CHECK_FALSE(format_from_name("xml").has_value());
}

TEST_CASE("hom and compose reports") {
  json h = run_json(R"({"backend":"setop","size":1})", Command::hom);
  CHECK(h["dim"] == 2);
  CHECK(h["basis"].size() == 2);

  json wide = run_json(
      R"({"backend":"setop","source":{"size":2},"target":{"size":1}})",
      Command::hom);
  CHECK(wide["dim"] == 5);

  json c = run_json(
      R"({"backend":"setop","size":1,"first":{"partition":[[0],[1]]},)"
      R"("second":{"partition":[[0],[1]]}})",
      Command::compose);
  CHECK(c["coefficient"] == "t");
  CHECK(c["zero"] == false);

  json diag = run_json(
      R"({"backend":"setop","size":1,"first":{"partition":[[0,1]]},)"
      R"("second":{"partition":[[0,1]]}})",
      Command::compose);
  CHECK(diag["coefficient"] == "1");

  const Scene bare = parse_scene(R"({"backend":"setop","size":1})");
  CHECK_THROWS_WITH_AS(execute(bare, Command::compose),
                       doctest::Contains("two relations"), SchemaError);
}

TEST_CASE("gram report carries the obstruction factorization") {
  const Scene scene = parse_scene(R"({"backend":"setop","size":2})");
  const Report rep = execute(scene, Command::gram);
  json g = json::parse(rep.json);
  CHECK(g["determinant"] == "t^3 - t^2");
  CHECK(g["factored"] == "t^2 * (t - 1)");
  CHECK(g["factors"].size() == 2);
  CHECK(g["matrix"][0][0] == "t");
  CHECK(g["matrix"][1][1] == "t^2");
  CHECK(rep.text.find("Omega = t * (t^2 - t)") != std::string::npos);
  CHECK(emit_report(rep, ReportFormat::tsv).rfind("subobject\tomega\n", 0) ==
        0);

  json rational = run_json(R"({"backend":"setop","size":2,"param":3})",
                           Command::gram);
  CHECK(rational["determinant"] == "18");
  CHECK(rational["factored"] == "18");
}

TEST_CASE("omega and singular reports") {
  json o = run_json(R"({"backend":"setop","size":3})", Command::omega);
  REQUIRE(o["rows"].size() == 3);
  CHECK(o["rows"][0]["value"] == "t - 2");
  CHECK(o["rows"][0]["terms"].is_array());

  json s = run_json(R"({"backend":"setop","max_size":4})", Command::singular);
  CHECK(s["symbolic"] == true);
  CHECK(s["singular_params"] == json::array({0, 1, 2, 3}));

  json v = run_json(R"({"backend":"vect","q":2,"max_size":3})",
                    Command::singular);
  CHECK(v["singular_params"] == json::array({1, 2, 4}));

  json hit = run_json(R"({"backend":"setop","max_size":3,"param":1})",
                      Command::singular);
  CHECK(hit["nonsingular"] == false);
  CHECK(hit["witness"].is_string());

  json miss = run_json(R"({"backend":"setop","max_size":3,"param":5})",
                       Command::singular);
  CHECK(miss["nonsingular"] == true);

  CHECK_THROWS_WITH_AS(
      execute(parse_scene(R"({"backend":"setop"})"), Command::singular),
      doctest::Contains("max_size"), SchemaError);
}

TEST_CASE("endalg report is a four-column table") {
  const Scene scene = parse_scene(R"({"backend":"setop","size":2})");
  const Report rep = execute(scene, Command::endalg);
  CHECK(rep.verdict_code == 0);
  json e = json::parse(rep.json);
  CHECK(e["dim"] == 15);
  CHECK(e["associativity"] == "pass");
  CHECK(e["products"].size() == 225);
  CHECK(e["traces"].size() == 15);
  CHECK(rep.tsv.rfind("i\tj\tk\tcoefficient\n", 0) == 0);
}

TEST_CASE("radical and census reports") {
  json r = run_json(R"({"backend":"setop","size":2,"param":1})",
                    Command::radical);
  CHECK(r["dimension"] == 14);
  CHECK(r["hom_dim"] == 15);
  CHECK(r["basis"].size() == 14);

  json none = run_json(R"({"backend":"setop","size":2,"param":"7/2"})",
                       Command::radical);
  CHECK(none["dimension"] == 0);

  const Scene scene = parse_scene(R"({"backend":"setop","size":2})");
  const Report rep = execute(scene, Command::census);
  CHECK(rep.verdict_code == 0);
  json c = json::parse(rep.json);
  CHECK(c["predicted"] == 4);
  CHECK(c["computed"] == 4);
  CHECK(c["matches"] == true);
  CHECK(c["rows"].size() == 3);
  CHECK(c["blocks"]["symbolic"] == true);
  CHECK(c["cross_check"]["block_dims"] == json::array({1, 1, 2, 3}));
}

TEST_CASE("specialize report") {
  const Scene scene = parse_scene(R"({"backend":"setop","size":2,"X":3})");
  const Report rep = execute(scene, Command::specialize);
  CHECK(rep.verdict_code == 0);
  json s = json::parse(rep.json);
  CHECK(s["adapted_parameter"] == 3);
  CHECK(s["hom_dim"] == 15);
  CHECK(s["radical_dim"] == 1);
  CHECK(s["quotient_dim"] == 14);
  CHECK(s["equivariant_dim"] == 14);
  CHECK(s["matches"] == true);
  CHECK(rep.tsv.rfind("relation\trow\tcol\tvalue\n", 0) == 0);

  json v = run_json(R"({"backend":"vect","q":2,"dim":1,"n":1})",
                    Command::specialize);
  CHECK(v["adapted_parameter"] == 2);
  CHECK(v["quotient_dim"] == 4);
  CHECK(v["equivariant_dim"] == 4);

  json flagged = run_json(R"({"backend":"setop","size":1,"X":3,"param":2})",
                          Command::specialize);
  CHECK(flagged["parameter_is_adapted"] == false);

  CHECK_THROWS_WITH_AS(
      execute(parse_scene(R"({"backend":"setop","size":1})"),
              Command::specialize),
      doctest::Contains("\"X\""), SchemaError);
}

TEST_CASE("validate-degree verdicts drive the exit code") {
  const Report good =
      execute(parse_scene(R"({"backend":"setop"})"), Command::validate_degree);
  CHECK(good.verdict_code == 0);
  json g = json::parse(good.json);
  CHECK(g["d1"] == "pass");
  CHECK(g["d2"] == "pass");
  CHECK(g["d3"] == "pass");

  // A complete table on sizes <= 8 whose value at 2 -> 0 breaks both
  // pullback invariance and multiplicativity.
  json values = json::array();
  for (int s = 0; s <= 8; ++s)
    for (int t = 0; t <= s; ++t) {
      long long v = 1;
      for (int k = 0; k < s - t; ++k) v *= 5;
      if (s == 2 && t == 0) v = 7;
      values.push_back({{"source", s}, {"target", t}, {"value", v}});
    }
  json scene = {{"backend", "setop"},
                {"degree", {{"family", "table"}, {"values", values}}}};
  const Report bad =
      execute(parse_scene(scene.dump()), Command::validate_degree);
  CHECK(bad.verdict_code == 4);
  json b = json::parse(bad.json);
  CHECK(b["d1"] == "pass");
  CHECK(b["d2"] == "fail");
  CHECK(b["d3"] == "fail");
  CHECK_FALSE(b["counterexample"].get<std::string>().empty());
}

TEST_CASE("reports are deterministic and carry the scene format") {
  const Scene scene =
      parse_scene(R"({"backend":"setop","size":2,"format":"text"})");
  CHECK(scene.format == ReportFormat::text);
  const Report a = execute(scene, Command::gram);
  const Report b = execute(scene, Command::gram);
  CHECK(a.json == b.json);
  CHECK(a.tsv == b.tsv);
  CHECK(a.text == b.text);
  CHECK(a.default_format == ReportFormat::text);
  CHECK(&emit_report(a, ReportFormat::text) == &a.text);
}
