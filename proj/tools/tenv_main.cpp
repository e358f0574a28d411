// Command-line front end. Builds a JSON scene from flags (or loads one from
// a file), runs exactly one command through the shared C API, and prints
// the rendered report to stdout. Exit codes: 0 success, 2 malformed input,
// 3 resource bound exceeded, 4 mathematical contract violated.
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tenv/tenv.h"

namespace {

struct Flags {
  std::string scene_file;
  std::string backend, param, format;
  unsigned long long size = 0, q = 0, dim = 0, max_size = 0;
  unsigned long long functor_size = 0, functor_dim = 0;
  unsigned long long source = 0, middle = 0, target = 0;
};

// The field flags mirror the scene schema one to one; anything richer
// (relations for compose, degree tables) comes in through --scene.
void add_shared_options(CLI::App* sub, Flags& f) {
  sub->add_option("--scene", f.scene_file,
                  "Read the JSON scene from a file (\"-\" for stdin)");
  sub->add_option("--backend", f.backend, "Backend: setop or vect");
  sub->add_option("--size", f.size, "Main object size (setop)");
  sub->add_option("--q", f.q, "Prime field modulus (vect)");
  sub->add_option("--dim", f.dim, "Main object dimension (vect)");
  sub->add_option("--source", f.source, "Source size/dimension override");
  sub->add_option("--middle", f.middle, "Middle size/dimension override");
  sub->add_option("--target", f.target, "Target size/dimension override");
  sub->add_option("--param", f.param,
                  "Degree parameter: an integer, p/q, or the symbol t");
  sub->add_option("--max-size", f.max_size,
                  "Sweep bound (singular) or sample budget (validate-degree)");
  sub->add_option("--X", f.functor_size,
                  "Uniform functor target size (setop specialize)");
  sub->add_option("--n", f.functor_dim,
                  "Uniform functor parameter dimension (vect specialize)");
  sub->add_option("--format", f.format, "Report format: json, tsv, or text");
}

const std::vector<std::pair<const char*, const char*>> kCommandHelp = {
    {"hom", "Basis of the relation space Hom(x, y)"},
    {"compose",
     "Degree-weighted composite of two relations (relations need --scene)"},
    {"gram",
     "Gram matrix, determinant, and obstruction factorization of an object"},
    {"omega",
     "Obstruction scalars of the indecomposable surjections out of an "
     "object"},
    {"singular",
     "Singular parameters of the degree family up to a size bound"},
    {"endalg", "Endomorphism algebra structure constants and traces"},
    {"radical", "Trace-radical basis of a Hom-space at a field parameter"},
    {"census",
     "Semisimple block count against the automorphism-group prediction"},
    {"specialize",
     "Interpolation dimensions and specialized matrices under a uniform "
     "functor"},
    {"validate-degree",
     "Check the degree axioms: normalization, pullback invariance, "
     "multiplicativity"},
};

int fail(const std::string& msg, int code) {
  std::cerr << "error: " << msg << "\n";
  return code;
}

bool read_scene_file(const std::string& path, std::string& out) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    out = buffer.str();
    return true;
  }
  std::ifstream in(path);
  if (!in) return false;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  out = buffer.str();
  return true;
}

// Field flags are copied verbatim into a fresh scene document; validation
// (prime q, backend/field compatibility, ranges) lives in the library so
// the flag path and the file path are diagnosed identically.
std::string scene_from_flags(const CLI::App* sub, const Flags& f) {
  nlohmann::json scene;
  if (sub->count("--backend")) scene["backend"] = f.backend;
  if (sub->count("--size")) scene["size"] = f.size;
  if (sub->count("--q")) scene["q"] = f.q;
  if (sub->count("--dim")) scene["dim"] = f.dim;
  const char* object_key = f.backend == "vect" ? "dim" : "size";
  if (sub->count("--source")) scene["source"] = {{object_key, f.source}};
  if (sub->count("--middle")) scene["middle"] = {{object_key, f.middle}};
  if (sub->count("--target")) scene["target"] = {{object_key, f.target}};
  if (sub->count("--param")) scene["param"] = f.param;
  if (sub->count("--max-size")) scene["max_size"] = f.max_size;
  if (sub->count("--X")) scene["X"] = f.functor_size;
  if (sub->count("--n")) scene["n"] = f.functor_dim;
  if (sub->count("--format")) scene["format"] = f.format;
  return scene.dump();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Workbench for linear categories of relations over finite sets and "
      "F_q vector spaces: Hom-spaces, weighted composition, Gram "
      "determinants, radicals, block censuses, and specializations."};
  app.require_subcommand(1);
  Flags flags;
  for (const auto& [name, help] : kCommandHelp)
    add_shared_options(app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : TENV_E_SCHEMA;
  }

  const CLI::App* sub = app.get_subcommands().front();
  std::string scene_text;
  if (sub->count("--scene")) {
    for (const char* flag :
         {"--backend", "--size", "--q", "--dim", "--source", "--middle",
          "--target", "--param", "--max-size", "--X", "--n"})
      if (sub->count(flag))
        return fail(std::string("use either --scene or the field flags, "
                                "not both (") +
                        flag + " was given)",
                    TENV_E_SCHEMA);
    if (!read_scene_file(flags.scene_file, scene_text))
      return fail("cannot read scene file " + flags.scene_file,
                  TENV_E_SCHEMA);
  } else {
    scene_text = scene_from_flags(sub, flags);
  }

  tenv_scene* scene = nullptr;
  char* err = nullptr;
  int rc = tenv_scene_parse(scene_text.c_str(), &scene, &err);
  if (rc != TENV_OK) {
    const std::string msg = err != nullptr ? err : "scene parsing failed";
    tenv_string_free(err);
    return fail(msg, rc);
  }

  tenv_report* report = nullptr;
  rc = tenv_execute(scene, sub->get_name().c_str(), &report, &err);
  tenv_scene_free(scene);
  if (rc != TENV_OK) {
    const std::string msg = err != nullptr ? err : "command failed";
    tenv_string_free(err);
    return fail(msg, rc);
  }

  const char* format =
      sub->count("--format") ? flags.format.c_str() : nullptr;
  const char* bytes = tenv_report_render(report, format);
  if (bytes == nullptr) {
    tenv_report_free(report);
    return fail("unknown format \"" + flags.format + "\"", TENV_E_SCHEMA);
  }
  std::fwrite(bytes, 1, std::strlen(bytes), stdout);
  rc = tenv_report_code(report);
  tenv_report_free(report);
  return rc;
}
