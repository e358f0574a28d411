#include "tenv/tenv.h"

#include <cstring>
#include <string>

#include "doctest.h"

TEST_CASE("c api reports a version and the command list") {
  CHECK(std::string(tenv_version()) == "0.1.0");

  const char* const* names = tenv_commands();
  REQUIRE(names != nullptr);
  std::size_t count = 0;
  bool has_gram = false;
  bool has_validate = false;
  for (; names[count] != nullptr; ++count) {
    if (std::string(names[count]) == "gram") has_gram = true;
    if (std::string(names[count]) == "validate-degree") has_validate = true;
  }
  CHECK(count == 10);
  CHECK(has_gram);
  CHECK(has_validate);
}

TEST_CASE("c api round trip") {
  tenv_scene* scene = nullptr;
  char* err = nullptr;
  REQUIRE(tenv_scene_parse(R"({"backend":"setop","size":2})", &scene, &err) ==
          TENV_OK);
  REQUIRE(scene != nullptr);
  CHECK(err == nullptr);

  tenv_report* report = nullptr;
  REQUIRE(tenv_execute(scene, "gram", &report, &err) == TENV_OK);
  REQUIRE(report != nullptr);
  CHECK(tenv_report_code(report) == 0);

  const char* json_bytes = tenv_report_render(report, "json");
  REQUIRE(json_bytes != nullptr);
  CHECK(std::string(json_bytes).find("\"determinant\": \"t^3 - t^2\"") !=
        std::string::npos);

  const char* text_bytes = tenv_report_render(report, "text");
  REQUIRE(text_bytes != nullptr);
  CHECK(std::string(text_bytes).find("Omega = t * (t^2 - t)") !=
        std::string::npos);

  // NULL format falls back to the scene's format field (json by default).
  CHECK(tenv_report_render(report, nullptr) == json_bytes);
  CHECK(tenv_report_render(report, "xml") == nullptr);

  tenv_report_free(report);
  tenv_scene_free(scene);
}

TEST_CASE("c api error taxonomy") {
  {
    tenv_scene* scene = nullptr;
    char* err = nullptr;
    CHECK(tenv_scene_parse("{oops", &scene, &err) == TENV_E_SCHEMA);
    CHECK(scene == nullptr);
    REQUIRE(err != nullptr);
    CHECK(std::string(err).find("not valid JSON") != std::string::npos);
    tenv_string_free(err);
  }
  {
    tenv_scene* scene = nullptr;
    char* err = nullptr;
    CHECK(tenv_scene_parse(R"({"backend":"vect","q":4,"dim":1})", &scene,
                           &err) == TENV_E_SCHEMA);
    REQUIRE(err != nullptr);
    CHECK(std::string(err).find("q must be prime") != std::string::npos);
    tenv_string_free(err);
  }
  {
    tenv_scene* scene = nullptr;
    char* err = nullptr;
    REQUIRE(tenv_scene_parse(R"({"backend":"setop","size":9})", &scene,
                             &err) == TENV_OK);
    tenv_report* report = nullptr;
    CHECK(tenv_execute(scene, "gram", &report, &err) == TENV_E_RESOURCE);
    CHECK(report == nullptr);
    REQUIRE(err != nullptr);
    CHECK(std::string(err).find("TENV_MAX_SETSIZE") != std::string::npos);
    tenv_string_free(err);
    tenv_scene_free(scene);
  }
  {
    tenv_scene* scene = nullptr;
    char* err = nullptr;
    REQUIRE(tenv_scene_parse(R"({"backend":"setop","size":1})", &scene,
                             &err) == TENV_OK);
    tenv_report* report = nullptr;
    CHECK(tenv_execute(scene, "frobnicate", &report, &err) == TENV_E_SCHEMA);
    REQUIRE(err != nullptr);
    CHECK(std::string(err).find("frobnicate") != std::string::npos);
    tenv_string_free(err);

    // Singular parameter inside the census bound is a contract violation.
    tenv_scene* bad = nullptr;
    REQUIRE(tenv_scene_parse(R"({"backend":"setop","size":2,"param":1})",
                             &bad, &err) == TENV_OK);
    CHECK(tenv_execute(bad, "census", &report, &err) == TENV_E_CONTRACT);
    REQUIRE(err != nullptr);
    tenv_string_free(err);
    tenv_scene_free(bad);
    tenv_scene_free(scene);
  }

  CHECK(tenv_scene_parse(nullptr, nullptr, nullptr) == TENV_E_SCHEMA);
  CHECK(tenv_execute(nullptr, "gram", nullptr, nullptr) == TENV_E_SCHEMA);
  CHECK(tenv_report_code(nullptr) == TENV_E_SCHEMA);
  CHECK(tenv_report_render(nullptr, "json") == nullptr);
  tenv_string_free(nullptr);
}

TEST_CASE("negative verdicts execute cleanly but set the report code") {
  // A one-entry table cannot cover the identity degrees, so D1 fails; the
  // run itself still succeeds and renders a report.
  tenv_scene* scene = nullptr;
  char* err = nullptr;
  REQUIRE(tenv_scene_parse(
              R"({"backend":"setop","degree":{"family":"table",)"
              R"("values":[{"source":0,"target":0,"value":1}]}})",
              &scene, &err) == TENV_OK);
  tenv_report* report = nullptr;
  REQUIRE(tenv_execute(scene, "validate-degree", &report, &err) == TENV_OK);
  CHECK(tenv_report_code(report) == TENV_E_CONTRACT);
  const char* text = tenv_report_render(report, "text");
  REQUIRE(text != nullptr);
  CHECK(std::string(text).find("fail") != std::string::npos);
  tenv_report_free(report);
  tenv_scene_free(scene);
}
