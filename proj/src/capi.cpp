// C bindings over the scene layer: opaque handles, status codes, owned
// strings. Exceptions never cross the ABI boundary.
#include "tenv/tenv.h"

#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "errors.hpp"
#include "scene.hpp"

struct tenv_scene {
  tenv::Scene impl;
};

struct tenv_report {
  tenv::Report impl;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char** err, const std::string& msg) {
  if (err != nullptr) *err = dup_string(msg);
}

// Runs fn, translating the error taxonomy into status codes. Anything that
// is not a tenv::Error is a bug surfaced as a contract violation rather
// than a crash across the ABI.
template <typename F>
int guarded(char** err, F&& fn) {
  try {
    fn();
    return TENV_OK;
  } catch (const tenv::Error& e) {
    set_error(err, e.what());
    return e.code;
  } catch (const std::exception& e) {
    set_error(err, std::string("internal error: ") + e.what());
    return TENV_E_CONTRACT;
  }
}

}  // namespace

extern "C" {

const char* tenv_version(void) { return "0.1.0"; }

const char* const* tenv_commands(void) {
  static const std::vector<const char*> names = [] {
    std::vector<const char*> out;
    for (const std::string& name : tenv::command_names())
      out.push_back(name.c_str());
    out.push_back(nullptr);
    return out;
  }();
  return names.data();
}

int tenv_scene_parse(const char* json_text, tenv_scene** out, char** err) {
  if (json_text == nullptr || out == nullptr) {
    set_error(err, "tenv_scene_parse needs a scene string and an out handle");
    return TENV_E_SCHEMA;
  }
  return guarded(err, [&] {
    *out = new tenv_scene{tenv::parse_scene(json_text)};
  });
}

void tenv_scene_free(tenv_scene* scene) { delete scene; }

int tenv_execute(const tenv_scene* scene, const char* command,
                 tenv_report** out, char** err) {
  if (scene == nullptr || command == nullptr || out == nullptr) {
    set_error(err, "tenv_execute needs a scene, a command, and an out handle");
    return TENV_E_SCHEMA;
  }
  const std::optional<tenv::Command> cmd = tenv::command_from_name(command);
  if (!cmd.has_value()) {
    set_error(err, std::string("unknown command \"") + command + "\"");
    return TENV_E_SCHEMA;
  }
  return guarded(err, [&] {
    *out = new tenv_report{tenv::execute(scene->impl, *cmd)};
  });
}

void tenv_report_free(tenv_report* report) { delete report; }

int tenv_report_code(const tenv_report* report) {
  return report == nullptr ? TENV_E_SCHEMA : report->impl.verdict_code;
}

const char* tenv_report_render(const tenv_report* report, const char* format) {
  if (report == nullptr) return nullptr;
  tenv::ReportFormat fmt = report->impl.default_format;
  if (format != nullptr) {
    const std::optional<tenv::ReportFormat> parsed =
        tenv::format_from_name(format);
    if (!parsed.has_value()) return nullptr;
    fmt = *parsed;
  }
  return tenv::emit_report(report->impl, fmt).c_str();
}

void tenv_string_free(char* text) { delete[] text; }

}  // extern "C"
