// JSON scene descriptions and their execution: decode a validated request,
// dispatch it to the computation modules, and render one deterministic
// report. This is the single entry point shared by the C API and the
// command-line tool.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "backend.hpp"
#include "degree.hpp"
#include "errors.hpp"
#include "relations.hpp"
#include "scalars.hpp"

namespace tenv {

// The command vocabulary; execute() dispatches on it. Each command wraps
// exactly one module-level operation.
enum class Command {
  hom,
  compose,
  gram,
  omega,
  singular,
  endalg,
  radical,
  census,
  specialize,
  validate_degree,
};

const std::vector<std::string>& command_names();
std::optional<Command> command_from_name(const std::string& name);
std::string command_name(Command c);

enum class ReportFormat { json, tsv, text };
std::optional<ReportFormat> format_from_name(const std::string& name);

// A validated computation request. Scenes are decoded eagerly: every field
// below is already range-checked, the modulus is prime, relations are
// canonical subobjects, and the degree function is fully resolved (the
// default is the backend's symbolic one-parameter family at t).
struct Scene {
  BackendKind backend = BackendKind::setop;
  unsigned q = 0;  // vect modulus; 0 on the set backend
  std::optional<ObjectHandle> object;                  // top-level size/dim
  std::optional<ObjectHandle> source, middle, target;  // overrides
  std::optional<Scalar> param;           // the parameter as written
  std::optional<DegreeFunction> degree;  // always engaged after parsing
  std::optional<unsigned> max_size;      // sweep/validation bound
  std::optional<unsigned> functor_size;  // "X": set-backend target size
  std::optional<unsigned> functor_dim;   // "n": linear-backend parameter dim
  std::optional<Relation> first, second;
  ReportFormat format = ReportFormat::json;

  const DegreeFunction& delta() const { return *degree; }
  // The main object, or a schema diagnostic pointing at the missing field.
  ObjectHandle main_object() const;
  ObjectHandle source_object() const;  // source ?: object
  ObjectHandle middle_object() const;  // middle ?: object
  ObjectHandle target_object() const;  // target ?: object
};

// Decodes and validates a JSON scene. Diagnostics carry a JSON-pointer to
// the offending field, e.g. `q must be prime (at /q)`.
Scene parse_scene(const std::string& text);

// One executed command, pre-rendered in all three formats. Keys are sorted
// and scalars printed canonically, so equal requests produce equal bytes.
// verdict_code is 0 unless the command reached a negative mathematical
// verdict (a failed axiom table, a census mismatch); the CLI exits with it.
struct Report {
  std::string command;
  int verdict_code = 0;
  ReportFormat default_format = ReportFormat::json;
  std::string json, tsv, text;
};

Report execute(const Scene& scene, Command command);

const std::string& emit_report(const Report& r, ReportFormat f);

}  // namespace tenv
